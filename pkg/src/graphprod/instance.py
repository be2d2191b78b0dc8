"""Loading instance files (JSON, validated against the shipped schema)."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import jsonschema

from .coxeter import CoxeterMatrix
from .exceptions import GraphProdError
from .graphs import SimpleGraph
from .groups import make_group, preset
from .words import PairFamily


class InstanceError(GraphProdError):
    """The instance file is malformed or inconsistent."""


def load_schema() -> dict:
    text = resources.files("graphprod").joinpath("data/instance.schema.json").read_text()
    return json.loads(text)


@dataclass
class Instance:
    raw: dict
    text: str
    graph: SimpleGraph
    family: PairFamily | None
    H: dict | None
    family_star: PairFamily | None
    H_star: dict | None
    coxeter: CoxeterMatrix | None

    @property
    def options(self) -> dict:
        return self.raw.get("options", {})

    def require_family(self) -> PairFamily:
        if self.family is None:
            raise InstanceError("this command needs per-vertex groups")
        return self.family

    def coxeter_matrix(self) -> CoxeterMatrix:
        """The given Coxeter matrix, or the right-angled one of the graph."""
        return self.coxeter or CoxeterMatrix.right_angled(self.graph)


def _group(spec):
    if isinstance(spec, str):
        return preset(spec)
    return make_group(spec["degree"], spec["generators"], names=spec.get("names"),
                      label=spec.get("label"))


def _elements(G, literals):
    out = []
    for lit in literals:
        try:
            out.append(G.parse_element(lit))
        except (ValueError, KeyError) as exc:
            raise InstanceError(f"bad element {lit!r} for {G.label}: {exc}") from None
    return out


def _side(graph: SimpleGraph, data: dict):
    groups_spec = data.get("groups")
    if groups_spec is None:
        return None, None
    unknown = set(groups_spec) - set(graph.vertices)
    for key in ("A", "H"):
        unknown |= set(data.get(key, {})) - set(graph.vertices)
    if unknown:
        raise InstanceError(f"unknown vertices {sorted(unknown)}")
    cache: dict = {}
    groups = {}
    for v in graph.vertices:
        if v not in groups_spec:
            raise InstanceError(f"no group given for vertex {v}")
        spec = groups_spec[v]
        key = json.dumps(spec, sort_keys=True)
        try:
            groups[v] = cache[key] if key in cache else _group(spec)
        except ValueError as exc:
            raise InstanceError(f"vertex {v}: {exc}") from None
        cache[key] = groups[v]
    A = {v: groups[v].subgroup(_elements(groups[v], lits))
         for v, lits in data.get("A", {}).items()}
    family = PairFamily(graph, groups, A)
    H = None
    if "H" in data:
        H = {v: groups[v].subgroup(_elements(groups[v], data["H"].get(v, [])))
             for v in graph.vertices}
    return family, H


def parse_instance(text: str) -> Instance:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"not valid JSON: {exc}") from None
    try:
        jsonschema.validate(raw, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(map(str, exc.absolute_path)) or "(top level)"
        raise InstanceError(f"schema violation at {where}: {exc.message}") from None
    try:
        graph = SimpleGraph(raw["graph"]["vertices"], raw["graph"].get("edges", []))
    except ValueError as exc:
        raise InstanceError(str(exc)) from None
    family, H = _side(graph, raw)
    family_star = H_star = None
    if "second" in raw:
        family_star, H_star = _side(graph, raw["second"])
    cox = None
    if "coxeter" in raw:
        try:
            cox = CoxeterMatrix.from_json(raw["coxeter"])
        except ValueError as exc:
            raise InstanceError(f"coxeter matrix: {exc}") from None
    return Instance(raw, text, graph, family, H, family_star, H_star, cox)


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())
