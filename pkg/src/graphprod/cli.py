"""Command line front end.

Every command reads one JSON instance file (schema in
``graphprod/data/instance.schema.json``) and prints a JSON report with sorted
keys, so output is byte-identical for identical input and options. Exit
codes: 0 success, 1 invalid input, 2 refused (a hypothesis of the requested
construction fails), 3 a size cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import commensure, complexes, coxeter
from .exceptions import CapExceeded, GraphProdError, HypothesisError
from .instance import Instance, InstanceError, load_instance
from .words import abelianization, presentation

EXIT_INPUT, EXIT_REFUSED, EXIT_CAP = 1, 2, 3


def _report(inst: Instance, command: str, options: dict, body: dict) -> dict:
    return {"command": command, "instance_sha256": commensure.instance_digest(inst.text),
            "options": options, "result": body}


def _write(out_dir: str | None, name: str, text: str) -> str | None:
    if out_dir is None:
        return None
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def _opt(args, inst: Instance, name: str, default):
    value = getattr(args, name, None)
    if value is None:
        value = inst.options.get(name, default)
    return value


# ---------------------------------------------------------------------------
# commands


def cmd_present(args, inst):
    F = inst.require_family()
    pres = presentation(F)
    if args.format == "text":
        return pres.to_text()
    body = pres.to_json()
    body["abelianization"] = abelianization(pres)
    return _report(inst, "present", {"format": args.format}, body)


def cmd_eq(args, inst):
    F = inst.require_family()
    if len(args.word) != 2:
        raise InstanceError("eq needs exactly two -w words")
    x, y = (F.parse(w) for w in args.word)
    body = {"words": args.word, "normal_forms": [F.format(x), F.format(y)],
            "normal_form_equal": x == y}
    try:
        engine = coxeter.MatrixEngine(F)
        body["matrix_equal"] = bool((engine.matrix(x) == engine.matrix(y)).all())
        body["agree"] = body["matrix_equal"] == body["normal_form_equal"]
    except HypothesisError as exc:
        body["matrix_equal"] = None
        body["matrix_unavailable"] = str(exc)
        body["agree"] = None
    return _report(inst, "eq", {"words": args.word}, body)


def cmd_building(args, inst):
    F = inst.require_family()
    r = _opt(args, inst, "radius", 2)
    B = complexes.build_truncated(F, r)
    from .graphs import is_flag
    stab = {}
    for name, i, g in F.generator_alphabet():
        rep = complexes.stabilizer_check(B, F.letter(i, g))
        stab[name] = {"checked": rep.checked, "fixed": rep.fixed,
                      "counterexamples": rep.counterexamples}
    files = [_write(args.out, "building.json", B.complex.dumps()),
             _write(args.out, "building.dot", B.complex.to_dot("building"))]
    body = {"vertices": len(B), "chambers": len(B.chambers), "f_vector": B.complex.f_vector(),
            "fiber_counts": B.fiber_counts(), "flag": is_flag(B.complex),
            "stabilizer_law": stab, "files": [f for f in files if f]}
    return _report(inst, "building", {"radius": r}, body)


def _complex_body(inst, K, name, args, F):
    from .graphs import is_flag
    pres = complexes.fundamental_group(K.complex)
    betti = complexes.first_betti_check(K.complex, pres)
    counts: dict = {}
    for y in K.vertices:
        s = sum(c is not None for c in y)
        counts[s] = counts.get(s, 0) + 1
    iso = complexes.coset_complex_iso(F)
    files = [_write(args.out, f"{name}.json", K.complex.dumps()),
             _write(args.out, f"{name}.dot", K.complex.to_dot(name))]
    return {"vertices": len(K), "f_vector": K.complex.f_vector(), "flag": is_flag(K.complex),
            "vertices_by_choices": {str(k): v for k, v in sorted(counts.items())},
            "invariance_violations": K.invariance_check(),
            "complete_graph_iso": iso.summary(),
            "fundamental_group": pres.to_json(), "homology": betti,
            "files": [f for f in files if f]}


def cmd_cx(args, inst):
    F = inst.require_family()
    K = complexes.build_choice_complex(F)
    return _report(inst, "cx", {}, _complex_body(inst, K, "choice", args, F))


def cmd_delta(args, inst):
    F = inst.require_family()
    K = complexes.build_restricted_complex(F)
    body = _complex_body(inst, K, "delta", args, F)
    body["expected_vertices"] = complexes.restricted_vertex_count(F)
    return _report(inst, "delta", {}, body)


def cmd_commensurate(args, inst):
    F, Fs = inst.require_family(), inst.family_star
    if Fs is None:
        raise InstanceError("commensurate needs a 'second' family")
    r = _opt(args, inst, "radius", 3)
    seed = _opt(args, inst, "seed", 0)
    sample = _opt(args, inst, "sample", None)
    opts = {"radius": r, "seed": seed, "sample": sample}
    if inst.H is not None and inst.H_star is not None:
        ci = commensure.CommInstance(F, Fs, inst.H, inst.H_star)
        building = r if F.is_finite and Fs.is_finite else None
        w = commensure.common_subgroup(ci, with_building=building, sample=sample, seed=seed)
        body = {"mode": "common subgroup", **w.to_json()}
    else:
        rep = commensure.transformation_group_scenario(F, Fs, radius=r,
                                                       sample=sample or 12, seed=seed)
        body = {"mode": "transformation groups", **rep.to_json()}
    return _report(inst, "commensurate", opts, body)


def cmd_coxeterize(args, inst):
    F = inst.require_family()
    L = _opt(args, inst, "length", 3)
    E = coxeter.MatrixEngine(F)
    rep = coxeter.linearity_pipeline(F, L, engine=E)
    files = [_write(args.out, "coxeter.gap", E.coxeter.to_gap()),
             _write(args.out, "coxeter.json", json.dumps(E.to_json(), sort_keys=True))]
    body = {"coxeter": E.coxeter.to_json(), "vertex_words": E.to_json()["vertex_words"],
            "generator_matrices": {k: v.tolist() for k, v in sorted(E.symbol_matrices().items())},
            "action_checks": E.action_checks(), "linearity": rep.to_json(),
            "files": [f for f in files if f]}
    return _report(inst, "coxeterize", {"length": L}, body)


def cmd_orthopara(args, inst):
    M = inst.coxeter_matrix()
    parabolic = [s for s in args.parabolic.split(",") if s]
    found = coxeter.orthoparabolic_find(M, parabolic)
    body = {"found": found is not None}
    if found is not None:
        body.update(found.to_json())
    return _report(inst, "orthopara", {"parabolic": parabolic}, body)


def cmd_dinfty_sub(args, inst):
    M = inst.coxeter_matrix()
    data = coxeter.dinfty_subgroups(M, args.n)
    return _report(inst, "dinfty-sub", {"n": args.n}, data.to_json())


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphprod", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=None, help="seed for every sampling step")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("present", cmd_present, "presentation of the graph product")
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp = add("eq", cmd_eq, "decide equality of two words with both engines")
    sp.add_argument("-w", "--word", action="append", default=[])
    sp = add("building", cmd_building, "truncated building export and checks")
    sp.add_argument("--radius", type=int)
    sp.add_argument("--out")
    for name, fn, text in (("cx", cmd_cx, "choice complex"),
                           ("delta", cmd_delta, "restricted choice complex")):
        sp = add(name, fn, text)
        sp.add_argument("--out")
    sp = add("commensurate", cmd_commensurate, "common subgroup witness")
    sp.add_argument("--radius", type=int)
    sp.add_argument("--sample", type=int)
    sp = add("coxeterize", cmd_coxeterize, "Coxeter embedding and integer matrices")
    sp.add_argument("--length", type=int)
    sp.add_argument("--out")
    sp = add("orthopara", cmd_orthopara, "retraction onto a parabolic subgroup")
    sp.add_argument("--parabolic", required=True)
    sp = add("dinfty-sub", cmd_dinfty_sub, "index-n subgroup through a D_inf retraction")
    sp.add_argument("-n", type=int, required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        inst = load_instance(args.file)
        out = args.fn(args, inst)
    except (InstanceError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HypothesisError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except GraphProdError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(out, str):
        sys.stdout.write(out)
    else:
        sys.stdout.write(json.dumps(out, indent=1, sort_keys=True, default=str) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
