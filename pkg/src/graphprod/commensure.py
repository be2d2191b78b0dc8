"""Common finite-index subgroups of two graph products of pairs.

Given ``H_v <= G_v`` and ``H*_v <= G*_v`` whose actions on ``G_v / A_v`` and
``G*_v / A*_v`` are equivariantly isomorphic, the preimages ``H`` and ``H*``
of ``prod H_v`` and ``prod H*_v`` under the projections to the products of
the vertex groups act isomorphically on the two buildings. This module
computes the index, Schreier generators, and an explicit building map
``Phi`` together with ``Psi`` on generators, and checks
``Phi(h x) = Psi(h) Phi(x)`` vertex by vertex.
"""
from __future__ import annotations

import hashlib
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .complexes import build_truncated
from .exceptions import CapExceeded, GraphProdError, HypothesisError, VerificationError
from .groups import (Action, ActionIso, CosetSpace, FiniteGroup, InfinitePreset,
                     check_action_iso, find_action_iso)
from .words import GPElement, PairFamily

SCHREIER_CAP = 20000


# ---------------------------------------------------------------------------
# instances


@dataclass
class VertexData:
    """Per-vertex hypothesis data and how it was established."""

    H: object
    H_star: object
    iso: ActionIso | None
    psi_table: dict | None
    phi: tuple | None
    how: str


class CommInstance:
    """Two families over the same graph with subgroups ``H_v``, ``H*_v``.

    ``isos`` may give an :class:`ActionIso` per vertex; missing ones are
    searched for. With ``validate=False`` the given isomorphisms are used
    unchecked (for negative controls).
    """

    def __init__(self, family: PairFamily, family_star: PairFamily, H: dict, H_star: dict,
                 isos: dict | None = None, validate: bool = True):
        if family.graph != family_star.graph:
            raise HypothesisError("the two families must live on the same graph")
        self.family = family
        self.family_star = family_star
        self.vertices: list[VertexData] = []
        isos = isos or {}
        for i, v in enumerate(family.vertices):
            G, A = family.groups[i], family.subgroups[i]
            Gs, As = family_star.groups[i], family_star.subgroups[i]
            Hv, Hs = H[v], H_star[v]
            if Hv.parent is not G or Hs.parent is not Gs:
                raise GraphProdError(f"vertex {v}: H must be a subgroup of the vertex group")
            if isinstance(G, FiniteGroup) and isinstance(Gs, FiniteGroup):
                self.vertices.append(self._finite_vertex(v, G, A, Gs, As, Hv, Hs,
                                                         isos.get(v), validate))
            else:
                self.vertices.append(self._preset_vertex(v, G, A, Gs, As, Hv, Hs))

    @staticmethod
    def _finite_vertex(v, G, A, Gs, As, Hv, Hs, iso, validate) -> VertexData:
        X, Xs = CosetSpace(G, A), CosetSpace(Gs, As)
        act, act_s = Action(Hv, len(X), X.act), Action(Hs, len(Xs), Xs.act)
        how = "given"
        if iso is None:
            iso = find_action_iso(act, act_s)
            how = "found"
            if iso is None:
                raise HypothesisError(
                    f"vertex {v}: the actions of H on the cosets of A are not equivariantly "
                    "isomorphic on the two sides")
        elif validate:
            ok, why = check_action_iso(act, act_s, iso)
            if not ok:
                raise HypothesisError(f"vertex {v}: the given action isomorphism fails: {why}")
        from .groups import _extend_hom
        table = _extend_hom(Hv, Hs, iso.psi)
        if isinstance(table, str):
            raise HypothesisError(f"vertex {v}: {table}")
        return VertexData(Hv, Hs, iso, table, tuple(iso.phi), how)

    @staticmethod
    def _preset_vertex(v, G, A, Gs, As, Hv, Hs) -> VertexData:
        """Infinite vertex groups: both actions must be free with the same
        finite number of orbits and ``H_v``, ``H*_v`` infinite cyclic."""
        for K, B in ((G, A), (Gs, As)):
            if not isinstance(K, InfinitePreset):
                raise HypothesisError(f"vertex {v}: cannot mix a finite and an infinite group")
            if not B.is_trivial:
                raise HypothesisError(f"vertex {v}: infinite vertex groups need trivial A "
                                      "(free actions)")
        for K, Hx in ((G, Hv), (Gs, Hs)):
            if Hx.index is None or Hx.c is not None or Hx.d == 0:
                raise HypothesisError(f"vertex {v}: H must be an infinite cyclic subgroup of "
                                      "finite index (translations only)")
        if Hv.index != Hs.index:
            raise HypothesisError(f"vertex {v}: the free actions have different numbers of "
                                  "orbits")
        return VertexData(Hv, Hs, None, None, None, "free actions with equal orbit counts")

    @property
    def graph(self):
        return self.family.graph

    def psi(self, i: int, h):
        """``psi_v`` on an element of ``H_v``."""
        d = self.vertices[i]
        if d.psi_table is not None:
            return d.psi_table[h]
        G, Gs = self.family.groups[i], self.family_star.groups[i]
        k = h if G.kind == "Z" else h[0]
        n = k // d.H.d
        unit = d.H_star.d if Gs.kind == "Z" else (d.H_star.d, 0)
        return Gs.power(unit, n)


# ---------------------------------------------------------------------------
# the common subgroup


@dataclass
class SchreierData:
    index: int
    transversal: list  # coset key -> GPElement, in BFS order
    keys: list
    generators: list   # GPElement
    alphabet: list


def _product_cosets(family: PairFamily, subgroups: Sequence, cap: int = SCHREIER_CAP):
    """Breadth-first search over right cosets of ``prod H_v`` in the product
    of the vertex groups, driven by the generator alphabet of the family.

    Returns ``(keys, reps, edges)``: coset keys in BFS order, a minimal-length
    representative in the graph product for each, and the coset reached by
    each ``(coset, letter)``.
    """
    alphabet = family.generator_alphabet()

    def key(x: GPElement):
        comps = family.project(x)
        return tuple(H.right_rep(g) for H, g in zip(subgroups, comps))

    start = key(family.identity)
    reps = {start: family.identity}
    order = [start]
    queue = deque([start])
    edges = {}
    while queue:
        c = queue.popleft()
        w = reps[c]
        for k, (_, i, g) in enumerate(alphabet):
            y = family.times_letter(w, i, g)
            d = key(y)
            edges[(c, k)] = d
            if d not in reps:
                if len(reps) >= cap:
                    raise CapExceeded(f"more than {cap} cosets")
                reps[d] = y
                order.append(d)
                queue.append(d)
    return order, reps, edges, alphabet


def schreier_generators(family: PairFamily, subgroups: Sequence,
                        cap: int = SCHREIER_CAP) -> SchreierData:
    """Generators ``w_c s w_{cs}^-1`` of the preimage of ``prod H_v``."""
    order, reps, edges, alphabet = _product_cosets(family, subgroups, cap)
    gens = []
    seen = set()
    for c in order:
        for k, (_, i, g) in enumerate(alphabet):
            d = edges[(c, k)]
            x = family.multiply(family.times_letter(reps[c], i, g), family.invert(reps[d]))
            if x != family.identity and x not in seen:
                seen.add(x)
                gens.append(x)
    return SchreierData(len(order), [reps[c] for c in order], order, gens, alphabet)


def rewrite(family: PairFamily, data: SchreierData, subgroups, letters: Sequence[int]):
    """Reidemeister rewriting: express the word ``letters`` (indices into the
    alphabet), whose image lies in ``prod H_v``, as a product of Schreier
    generators. Returns the product as an element, for comparison."""
    index = {k: n for n, k in enumerate(data.keys)}

    def key(x):
        return tuple(H.right_rep(g) for H, g in zip(subgroups, family.project(x)))

    c = data.keys[0]
    out = family.identity
    for k in letters:
        _, i, g = data.alphabet[k]
        w = data.transversal[index[c]]
        y = family.times_letter(w, i, g)
        d = key(y)
        gamma = family.multiply(y, family.invert(data.transversal[index[d]]))
        out = family.multiply(out, gamma)
        c = d
    if c != data.keys[0]:
        raise GraphProdError("word does not lie in the subgroup")
    return out


@dataclass
class CommWitness:
    index: int
    index_formula: int
    index_star: int
    schreier: list
    schreier_star_images: list
    psi_consistent: bool
    group_level: bool
    vertex_notes: list
    building: dict | None = None

    def to_json(self) -> dict:
        return {"index": self.index, "index_formula": self.index_formula,
                "index_star": self.index_star, "schreier_generators": self.schreier,
                "psi_images": self.schreier_star_images,
                "psi_consistent": self.psi_consistent, "group_level": self.group_level,
                "vertex_notes": self.vertex_notes, "building": self.building}


def _index_product(subgroups) -> int:
    n = 1
    for H in subgroups:
        if H.index is None:
            raise HypothesisError("every H_v must have finite index")
        n *= H.index
    return n


def _effective(family: PairFamily) -> bool:
    from .groups import core
    return all(isinstance(G, FiniteGroup) and core(G, A).is_trivial
               for G, A in zip(family.groups, family.subgroups))


def common_subgroup(inst: CommInstance, with_building: int | None = None,
                    sample: int | None = None, seed: int = 0) -> CommWitness:
    """Index and Schreier generators of ``H`` and their images under ``Psi``.

    With ``with_building=r`` the equivariant building map is also built and
    verified at radius ``r`` (see :func:`equivariant_building_iso`).
    """
    F, Fs = inst.family, inst.family_star
    Hs = [d.H for d in inst.vertices]
    Hs_star = [d.H_star for d in inst.vertices]
    data = schreier_generators(F, Hs)
    data_star = _product_cosets(Fs, Hs_star)[0]
    formula = _index_product(Hs)
    images, consistent = [], None
    if F.is_finite and Fs.is_finite:
        lift = BuildingLift(inst)
        consistent = True
        for h in data.generators:
            try:
                images.append(Fs.format(lift.psi_element(h)))
            except VerificationError:
                consistent = False
                images.append(None)
    notes = [f"{v}: {d.how}" for v, d in zip(F.vertices, inst.vertices)]
    building = None
    if with_building is not None:
        building = equivariant_building_iso(inst, with_building, sample=sample, seed=seed,
                                            schreier=data).summary()
    return CommWitness(data.index, formula, len(data_star),
                       [F.format(h) for h in data.generators], images, consistent,
                       _effective(F) and _effective(Fs), notes, building)


# ---------------------------------------------------------------------------
# the building map


class BuildingLift:
    """Chamber map ``Phi`` and generator map ``Psi`` for an instance.

    ``Phi`` is defined on normal-form words letter by letter: after the
    prefix ``u'`` has been sent to ``g*``, the letter ``t`` at vertex ``v``
    goes to the letter ``t*`` making the ``v``-coordinate of ``g* t*`` the
    image under ``phi_v`` of the ``v``-coordinate of ``u' t``.
    """

    def __init__(self, inst: CommInstance):
        self.inst = inst
        F, Fs = inst.family, inst.family_star
        self.F, self.Fs = F, Fs
        if not (F.is_finite and Fs.is_finite):
            raise HypothesisError("the building map is built for finite vertex groups only")
        self.X = [CosetSpace(G, A) for G, A in zip(F.groups, F.subgroups)]
        self.Xs = [CosetSpace(G, A) for G, A in zip(Fs.groups, Fs.subgroups)]
        self.phi = [d.phi for d in inst.vertices]
        base = Fs.identity
        for i in range(F.n):
            base = Fs.times_letter(base, i, self.Xs[i].points[self.phi[i][0]])
        self.base = Fs.chamber(base.word)
        self._cache = {(): self.base}

    def chamber(self, word: tuple) -> GPElement:
        hit = self._cache.get(word)
        if hit is not None:
            return hit
        F, Fs = self.F, self.Fs
        prev = self.chamber(word[:-1])
        i, t = word[-1]
        p = self.X[i].point_of(F.project(F.chamber(word))[i])
        target = self.Xs[i].points[self.phi[i][p]]
        G = Fs.groups[i]
        cur = Fs.project(prev)[i]
        t_star = Fs.split(i, G.mul(G.inv(cur), target))[0]
        out = Fs.chamber(Fs.times_letter(prev, i, t_star).word)
        self._cache[word] = out
        return out

    def vertex(self, key) -> tuple:
        word, S = key
        return self.Fs.coset_key(self.chamber(word), S)

    def psi_element(self, h: GPElement) -> GPElement:
        """``Psi(h) = Phi(h) a b*^-1`` with ``a`` in the product of the ``A*_v``
        chosen so that ``Psi(h)`` projects to ``psi(projection of h)``."""
        F, Fs, inst = self.F, self.Fs, self.inst
        Lh = self.chamber(h.word)
        target = [inst.psi(i, g) for i, g in enumerate(F.project(h))]
        cur = Fs.project(Lh)
        b = Fs.project(self.base)
        a = []
        for i, G in enumerate(Fs.groups):
            ai = G.mul(G.mul(G.inv(cur[i]), target[i]), b[i])
            if ai not in Fs.subgroups[i].element_set:
                raise VerificationError(
                    f"vertex {F.vertices[i]}: the lifted chamber is incompatible with psi")
            a.append(ai)
        apart = GPElement((), tuple(a), Fs)
        return Fs.multiply(Fs.multiply(Lh, apart), Fs.invert(self.base))


@dataclass
class BuildingIsoReport:
    radius: int
    vertices: int
    vertices_star: int
    bijective: bool
    adjacency_ok: bool
    well_defined: bool
    generators_checked: int
    checks: int
    extended: int
    skipped: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bijective and self.adjacency_ok and self.well_defined and not self.violations

    @property
    def skipped_fraction(self) -> float:
        return self.skipped / self.checks if self.checks else 0.0

    def summary(self) -> dict:
        return {"radius": self.radius, "vertices": self.vertices,
                "vertices_star": self.vertices_star, "bijective": self.bijective,
                "adjacency_ok": self.adjacency_ok, "well_defined": self.well_defined,
                "generators_checked": self.generators_checked, "checks": self.checks,
                "extended": self.extended, "skipped": self.skipped,
                "skipped_fraction": self.skipped_fraction,
                "violations": self.violations[:20], "violation_count": len(self.violations),
                "ok": self.ok}


def equivariant_building_iso(inst: CommInstance, radius: int, sample: int | None = None,
                             seed: int = 0, schreier: SchreierData | None = None
                             ) -> BuildingIsoReport:
    """Build ``Phi`` on the radius-``radius`` building and verify it.

    Checks: ``Phi`` is well defined on vertices (every chamber through a
    vertex gives the same image); after translating by ``b*^-1`` it is a
    bijection onto the radius-``radius`` building of the second family and
    preserves adjacency; and ``Phi(h x) = Psi(h) Phi(x)`` for every Schreier
    generator ``h`` (or a seeded sample of ``sample`` of them) and every
    vertex ``x``. When ``h x`` leaves the radius, ``Phi(h x)`` is computed by
    lifting the longer word (counted as ``extended``), so nothing is skipped.
    """
    F, Fs = inst.family, inst.family_star
    lift = BuildingLift(inst)
    B = build_truncated(F, radius)
    Bs = build_truncated(Fs, radius)
    binv = Fs.invert(lift.base)

    image = {}
    well_defined = True
    for u in B.chambers:
        for S in B.cliques:
            key = (F.coset_word(u, S), S)
            y = Fs.coset_key(lift.chamber(u), S)
            if image.setdefault(key, y) != y:
                well_defined = False
    moved = {k: Bs.act(binv, y) for k, y in image.items()}
    bijective = len(set(moved.values())) == len(moved) and set(moved.values()) == set(Bs.index)
    adjacency_ok = bijective
    if bijective:
        star_edges = {frozenset((Bs.vertices[i], Bs.vertices[j])) for i, j in Bs.complex.edges()}
        mapped = {frozenset((moved[B.vertices[i]], moved[B.vertices[j]]))
                  for i, j in B.complex.edges()}
        adjacency_ok = mapped == star_edges

    if schreier is None:
        schreier = schreier_generators(F, [d.H for d in inst.vertices])
    gens = schreier.generators
    if sample is not None and len(gens) > sample:
        gens = random.Random(seed).sample(gens, sample)
    violations = []
    checks = extended = 0
    for h in gens:
        try:
            ph = lift.psi_element(h)
        except VerificationError as exc:
            violations.append(f"{F.format(h)}: {exc}")
            continue
        for key in B.vertices:
            hx = B.act(h, key)
            lhs = image.get(hx)
            if lhs is None:
                lhs = lift.vertex(hx)
                extended += 1
            rhs = Bs.act(ph, image[key])
            checks += 1
            if lhs != rhs:
                violations.append(f"{F.format(h)} at {B.label(key)}")
    return BuildingIsoReport(radius, len(B), len(Bs), bijective, adjacency_ok, well_defined,
                             len(gens), checks, extended, 0, violations)


def corrupt(inst: CommInstance, vertex: str) -> CommInstance:
    """Copy of ``inst`` whose point bijection at ``vertex`` has two non-base
    images swapped (used as a negative control)."""
    if vertex not in inst.family.graph.index:
        raise GraphProdError(f"unknown vertex {vertex!r}")
    isos = {}
    for v, d in zip(inst.family.vertices, inst.vertices):
        isos[v] = d.iso
    phi = list(isos[vertex].phi)
    if len(phi) < 3:
        raise GraphProdError("need at least three points to corrupt without moving the base")
    phi[1], phi[2] = phi[2], phi[1]
    isos[vertex] = ActionIso(isos[vertex].psi, tuple(phi))
    H = {v: d.H for v, d in zip(inst.family.vertices, inst.vertices)}
    Hs = {v: d.H_star for v, d in zip(inst.family.vertices, inst.vertices)}
    return CommInstance(inst.family, inst.family_star, H, Hs, isos, validate=False)


# ---------------------------------------------------------------------------
# buildings alone


@dataclass
class TypeIsoReport:
    radius: int
    vertices: int
    bijective: bool
    adjacency_ok: bool
    mapping: dict = field(repr=False, default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.bijective and self.adjacency_ok

    def summary(self) -> dict:
        return {"radius": self.radius, "vertices": self.vertices,
                "bijective": self.bijective, "adjacency_ok": self.adjacency_ok, "ok": self.ok}


def building_iso_only(family: PairFamily, family_star: PairFamily, radius: int = 3
                      ) -> TypeIsoReport:
    """Type-preserving isomorphism of truncated buildings when every vertex
    has the same number of cosets on both sides.

    Coset representatives are matched in their sorted order, and chamber
    words are translated letter by letter; vertex types are kept.
    """
    if family.graph != family_star.graph:
        raise HypothesisError("the two families must live on the same graph")
    match = []
    for i, v in enumerate(family.vertices):
        m, ms = family.coset_index(i), family_star.coset_index(i)
        if m is None or ms is None or m != ms:
            raise HypothesisError(f"vertex {v}: the numbers of cosets differ ({m} vs {ms}); "
                                  "the buildings are only isomorphic when they agree")
        match.append(dict(zip(family.transversal(i), family_star.transversal(i))))
    B = build_truncated(family, radius)
    Bs = build_truncated(family_star, radius)

    def translate(word):
        return tuple((i, match[i][t]) for i, t in word)

    mapping = {key: (family_star.coset_word(translate(key[0]), key[1]), key[1])
               for key in B.vertices}
    bijective = len(set(mapping.values())) == len(mapping) and set(mapping.values()) == set(Bs.index)
    adjacency_ok = False
    if bijective:
        star_edges = {frozenset((Bs.vertices[i], Bs.vertices[j])) for i, j in Bs.complex.edges()}
        mapped = {frozenset((mapping[B.vertices[i]], mapping[B.vertices[j]]))
                  for i, j in B.complex.edges()}
        adjacency_ok = mapped == star_edges
    return TypeIsoReport(radius, len(B), bijective, adjacency_ok, mapping)


# ---------------------------------------------------------------------------
# commensurability as transformation groups


@dataclass
class TransformationReport:
    indices: list
    locally_finite: bool
    link_checks: list
    stabilizer_orders: dict
    stabilizers_finite: bool
    stabilizer_law_ok: bool
    common_index: int
    common_index_star: int
    building: dict
    equivariance: dict

    @property
    def ok(self) -> bool:
        return (self.locally_finite and self.stabilizers_finite and self.stabilizer_law_ok
                and self.building["ok"] and self.equivariance["ok"])

    def to_json(self) -> dict:
        return {"indices": self.indices, "locally_finite": self.locally_finite,
                "link_checks": self.link_checks, "stabilizer_orders": self.stabilizer_orders,
                "stabilizers_finite": self.stabilizers_finite,
                "stabilizer_law_ok": self.stabilizer_law_ok,
                "common_index": self.common_index, "common_index_star": self.common_index_star,
                "building": self.building, "equivariance": self.equivariance, "ok": self.ok}


def transformation_group_scenario(family: PairFamily, family_star: PairFamily,
                                  radius: int = 2, sample: int = 12, seed: int = 0
                                  ) -> TransformationReport:
    """Both groups act on isomorphic locally finite buildings with finite
    stabilizers, and the kernels of the projections to the products of the
    vertex groups (trivial ``H_v``) act equivariantly isomorphically.

    * local finiteness: the number of chambers through the base vertex of
      type ``S`` equals ``prod_{v in S} [G_v : A_v]`` in the truncation;
    * stabilizers: the base vertex of type ``S`` has stabilizer ``G_S`` of
      order ``prod_{v in S} |G_v| * prod_{v not in S} |A_v|``, and the
      stabilizer law holds for its elements;
    * the common subgroup has index ``prod |G_v|`` on one side and
      ``prod |G*_v|`` on the other; equivariance of the building map is
      verified on ``sample`` seeded Schreier generators.
    """
    for F in (family, family_star):
        if not F.is_finite:
            raise HypothesisError("the actions are properly discontinuous only when every "
                                  "vertex group is finite")
    if family.graph != family_star.graph:
        raise HypothesisError("the two families must live on the same graph")
    iso = building_iso_only(family, family_star, radius)
    indices = [family.coset_index(i) for i in range(family.n)]

    B = build_truncated(family, max(radius, max(len(family.graph.labels(S))
                                               for S in family.poset.elements)))
    link_checks = []
    locally_finite = True
    stab_orders = {}
    law_ok = True
    from .complexes import stabilizer_check
    for S in family.poset.elements:
        base = B.index[((), S)]
        through = sum(1 for u in B.chambers if (family.coset_word(u, S), S) == ((), S))
        expected = 1
        order = 1
        for i in range(family.n):
            if S >> i & 1:
                expected *= indices[i]
                order *= family.groups[i].order
            else:
                order *= family.subgroups[i].order
        link_checks.append({"type": family.poset.label(S), "chambers": through,
                            "expected": expected})
        locally_finite &= through == expected
        stab_orders[family.poset.label(S)] = order
        # elements of G_S: letters from vertices in S, a-parts elsewhere
        gens = [family.letter(i, g) for i in range(family.n) if S >> i & 1
                for g in family.groups[i].generators]
        gens += [GPElement((), tuple(a if j == i else family.groups[j].identity
                                     for j in range(family.n)), family)
                 for i in range(family.n) for a in family.subgroups[i].generators]
        for g in gens:
            rep = stabilizer_check(B, g)
            law_ok &= rep.ok and B.act(g, B.vertices[base]) == B.vertices[base]

    G_triv = {v: G.trivial_subgroup() for v, G in zip(family.vertices, family.groups)}
    Gs_triv = {v: G.trivial_subgroup() for v, G in zip(family_star.vertices, family_star.groups)}
    inst = CommInstance(family, family_star, G_triv, Gs_triv)
    idx = _index_product([G.trivial_subgroup() for G in family.groups])
    idx_star = _index_product([G.trivial_subgroup() for G in family_star.groups])
    rep = equivariant_building_iso(inst, radius, sample=sample, seed=seed)
    return TransformationReport(indices, locally_finite, link_checks, stab_orders,
                                all(isinstance(o, int) for o in stab_orders.values()),
                                law_ok, idx, idx_star, iso.summary(), rep.summary())


def instance_digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()
