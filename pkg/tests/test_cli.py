import hashlib
import json

import pytest

from conftest import INSTANCES
from graphprod.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def path(name):
    return INSTANCES / f"{name}.json"


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_present_text(capsys):
    code, out, _ = run(capsys, "present", path("complete_z2"))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "generators: a.g b.g"
    assert lines[1:] == ["a.g^2", "b.g^2", "[a.g,b.g]"]


def test_present_json(capsys):
    rep = report(capsys, "present", path("pentagon_z2"), "--format", "json")
    assert rep["result"]["abelianization"] == [2] * 5
    assert len(rep["result"]["commutators"]) == 5


def test_eq_both_engines(capsys):
    rep = report(capsys, "eq", path("free_z2"), "-w", "a.g b.g a.g", "-w", "b.g a.g b.g")
    body = rep["result"]
    assert body["normal_form_equal"] is False and body["matrix_equal"] is False
    assert body["agree"] is True
    rep = report(capsys, "eq", path("complete_z2"), "-w", "a.g b.g", "-w", "b.g a.g")
    assert rep["result"]["normal_form_equal"] and rep["result"]["agree"]


def test_eq_without_matrix_engine(capsys):
    rep = report(capsys, "eq", path("z4_z2_pair"), "-w", "a.g^2", "-w", "e")
    assert rep["result"]["matrix_equal"] is None
    assert rep["result"]["normal_form_equal"] is False


def test_eq_needs_two_words(capsys):
    code, _, err = run(capsys, "eq", path("free_z2"), "-w", "a.g")
    assert code == 1 and "two" in err


def test_building_export(capsys, tmp_path):
    rep = report(capsys, "building", path("free_z2"), "--radius", "2", "--out", tmp_path)
    body = rep["result"]
    assert body["vertices"] == 11 and body["flag"]
    assert all(not s["counterexamples"] for s in body["stabilizer_law"].values())
    assert (tmp_path / "building.json").exists() and (tmp_path / "building.dot").exists()
    assert rep["options"] == {"radius": 2}


def test_cx_and_delta(capsys, tmp_path):
    cx = report(capsys, "cx", path("pentagon_z2"))["result"]
    assert cx["vertices"] == 243
    assert cx["complete_graph_iso"]["vertices"] == 243
    delta = report(capsys, "delta", path("pentagon_z2"), "--out", tmp_path)["result"]
    assert delta["vertices"] == delta["expected_vertices"] == 152
    assert delta["homology"]["abelianization"] == [0] * 10
    assert delta["vertices_by_choices"] == {"3": 40, "4": 80, "5": 32}
    assert (tmp_path / "delta.dot").exists()


def test_commensurate_common_subgroup(capsys):
    rep = report(capsys, "commensurate", path("z4_vs_klein"))
    body = rep["result"]
    assert body["mode"] == "common subgroup"
    assert body["index"] == 4 and body["building"]["ok"]
    assert rep["options"]["radius"] == 4


def test_commensurate_transformation_groups(capsys):
    body = report(capsys, "commensurate", path("pentagon_z4_vs_klein"))["result"]
    assert body["mode"] == "transformation groups" and body["ok"]


def test_coxeterize(capsys, tmp_path):
    body = report(capsys, "coxeterize", path("s3_pairs"), "--length", "3",
                  "--out", tmp_path)["result"]
    assert body["linearity"]["ok"] and all(body["action_checks"])
    assert (tmp_path / "coxeter.gap").read_text().startswith("# generators:")


def test_orthopara(capsys):
    body = report(capsys, "orthopara", path("dihedral5"), "--parabolic", "s")["result"]
    assert body["found"] and body["rho"] == {"s": "s", "t": "s"}
    assert body["quotient_order"] == 2


def test_dinfty_sub(capsys):
    body = report(capsys, "dinfty-sub", path("free_z2"), "-n", "5")["result"]
    assert body["index_formula"] == body["index_enumerated"] == 5


@pytest.mark.parametrize("argv", [
    ("commensurate", "z2_vs_z3"),
    ("coxeterize", "z4_z2_pair"),
    ("dinfty-sub", "complete_z2", "-n", "3"),
])
def test_refusals_exit_2(capsys, argv):
    cmd, name, *rest = argv
    code, out, err = run(capsys, cmd, path(name), *rest)
    assert code == 2 and out == "" and err.startswith("refused:")


def test_cap_exit_3(capsys):
    code, _, err = run(capsys, "building", path("pentagon_z2"), "--radius", "9")
    assert code == 3 and "cap" in err


def test_invalid_inputs_exit_1(capsys, tmp_path):
    code, _, _ = run(capsys, "present", tmp_path / "missing.json")
    assert code == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "present", bad)[0] == 1
    bad.write_text(json.dumps({"graph": {"vertices": ["a"]}, "groups": {"a": "cyclic"}}))
    assert run(capsys, "present", bad)[0] == 1
    bad.write_text(json.dumps({"graph": {}}))
    code, _, err = run(capsys, "present", bad)
    assert code == 1 and "schema" in err
    bad.write_text(json.dumps({"graph": {"vertices": ["a"]}, "groups": {"a": "cyclic 2",
                                                                       "b": "cyclic 2"}}))
    assert run(capsys, "present", bad)[0] == 1
    assert run(capsys, "eq", path("free_z2"), "-w", "c.g", "-w", "e")[0] == 1


def test_reports_are_deterministic_and_hashed(capsys):
    argv = ("commensurate", path("z4_vs_klein"), "--radius", "2", "--sample", "3")
    first = run(capsys, "--seed", "7", *argv)[1]
    second = run(capsys, "--seed", "7", *argv)[1]
    assert first == second
    rep = json.loads(first)
    digest = hashlib.sha256(path("z4_vs_klein").read_bytes()).hexdigest()
    assert rep["instance_sha256"] == digest
    assert rep["options"] == {"radius": 2, "sample": 3, "seed": 7}
    assert first == json.dumps(rep, indent=1, sort_keys=True) + "\n"
