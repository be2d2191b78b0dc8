"""Complexes attached to a graph product of pairs.

* the truncated building: vertices are cosets ``g G_S`` (``S`` a clique),
  simplices are flags ``g G_{S_0} < g G_{S_1} < ...`` sharing a chamber;
* the choice complex: partial choice functions ``Y`` picking at most one
  point of each coset space ``X_v = G_v / A_v``, ordered by inclusion;
* the restricted complex: the full subcomplex of the choice complex on
  choices whose unchosen vertices form a clique of the graph.

For the complete graph the building and the choice complex are isomorphic
via ``[g, S] -> {g_v A_v : v not in S}``; :func:`coset_complex_iso` builds
that map and verifies it exhaustively.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from itertools import product

from .exceptions import CapExceeded, GraphProdError, HypothesisError, VerificationError
from .graphs import SimComplex, is_flag, order_complex
from .groups import CosetSpace
from .words import GPElement, PairFamily, Presentation, abelianization, presentation, \
    word_engine_abelianization

RADIUS_CAP = 6
BUILDING_VERTEX_CAP = 10**5
CHOICE_CAP = 5000


# ---------------------------------------------------------------------------
# truncated building


class TruncatedBuilding:
    """The part of the building spanned by chambers of word length ``<= radius``.

    Vertices are keys ``(coset word, S)``; chamber ``u`` contributes the
    simplices ``{[u, S_0], ..., [u, S_k]}`` for every chain ``S_0 < ... < S_k``
    of cliques. ``partial`` is set when the vertex cap stopped the search.
    """

    def __init__(self, family: PairFamily, radius: int, vertex_cap: int = BUILDING_VERTEX_CAP,
                 strict: bool = True):
        if radius < 0:
            raise ValueError("radius must be non-negative")
        if radius > RADIUS_CAP:
            raise CapExceeded(f"radius {radius} exceeds cap {RADIUS_CAP}")
        self.family = family
        self.radius = radius
        self.partial = False
        poset = family.poset
        self.cliques = poset.elements
        self.chambers = self._chambers(vertex_cap, strict)
        self.vertices: list[tuple] = []
        self.index: dict[tuple, int] = {}
        maximal = []
        chains = [c for c in poset.chains() if c[0] == 0 and _is_maximal(poset, c)]
        for u in self.chambers:
            ids = {}
            for S in self.cliques:
                key = (family.coset_word(u, S), S)
                k = self.index.get(key)
                if k is None:
                    k = len(self.vertices)
                    self.index[key] = k
                    self.vertices.append(key)
                ids[S] = k
            maximal.extend([ids[S] for S in c] for c in chains)
        if len(self.vertices) > vertex_cap:
            if strict:
                raise CapExceeded(f"building has more than {vertex_cap} vertices")
            self.partial = True
        labels = [self.label(key) for key in self.vertices]
        self.complex = SimComplex(self.vertices, maximal, labels=labels)
        self.base = self.index[((), 0)]

    def _chambers(self, cap, strict) -> list[tuple]:
        F = self.family
        moves = [(i, t) for i in range(F.n) for t in F.transversal(i)[1:]] if F.is_finite \
            else self._infinite_moves()
        seen = {(): 0}
        order = [()]
        frontier = [()]
        for r in range(1, self.radius + 1):
            nxt = []
            for w in frontier:
                x = F.chamber(w)
                for i, t in moves:
                    y = F.times_letter(x, i, t).word
                    if len(y) == r and y not in seen:
                        seen[y] = r
                        order.append(y)
                        nxt.append(y)
                        if len(order) > cap:
                            if strict:
                                raise CapExceeded(f"more than {cap} chambers within radius")
                            self.partial = True
                            return order
            frontier = nxt
        return order

    def _infinite_moves(self):
        """Coset letters for infinite-index vertex pairs: representatives
        within the radius of the identity, in both directions."""
        F = self.family
        moves = []
        for i, (G, A) in enumerate(zip(F.groups, F.subgroups)):
            if A.index is not None:
                moves += [(i, t) for t in F.transversal(i)[1:]]
                continue
            reps = set()
            frontier = {G.identity}
            for _ in range(self.radius):
                frontier = {G.mul(g, s) for g in frontier for s in G.generators + tuple(
                    G.inv(s) for s in G.generators)}
                reps |= {A.left_rep(g) for g in frontier}
            reps.discard(A.left_rep(G.identity))
            moves += [(i, t) for t in sorted(reps)]
        return moves

    def __len__(self):
        return len(self.vertices)

    def label(self, key) -> str:
        word, S = key
        F = self.family
        w = " ".join(F._format_letter(i, t) for i, t in word) or "e"
        return f"[{w}, {F.poset.label(S)}]"

    def contains(self, key) -> bool:
        return key in self.index

    def act(self, g: GPElement, key) -> tuple:
        """``g . [u, S] = [g u, S]``."""
        word, S = key
        F = self.family
        return F.coset_key(F.multiply(g, F.chamber(word)), S)

    def fiber_counts(self) -> dict:
        """Number of vertices of each clique type."""
        out = {S: 0 for S in self.cliques}
        for _, S in self.vertices:
            out[S] += 1
        return {self.family.poset.label(S): n for S, n in out.items()}

    def to_json(self) -> dict:
        data = self.complex.to_json()
        data.update(radius=self.radius, partial=self.partial, base=self.base,
                    chambers=len(self.chambers), fiber_counts=self.fiber_counts())
        return data


def _is_maximal(poset, chain) -> bool:
    """Chains starting at the empty clique that cannot be refined or extended."""
    for a, b in zip(chain, chain[1:]):
        if bin(b).count("1") != bin(a).count("1") + 1:
            return False
    top = chain[-1]
    return not any(top != m and poset.leq(top, m) for m in poset.elements)


def build_truncated(family: PairFamily, radius: int, vertex_cap: int = BUILDING_VERTEX_CAP,
                    strict: bool = True) -> TruncatedBuilding:
    return TruncatedBuilding(family, radius, vertex_cap, strict)


@dataclass
class StabilizerReport:
    checked: int = 0
    fixed: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def stabilizer_check(building: TruncatedBuilding, g: GPElement) -> StabilizerReport:
    """Check ``g [h, S] = [h, S]  <=>  h^-1 g h in G_S`` on every vertex."""
    F = building.family
    rep = StabilizerReport()
    for key in building.vertices:
        word, S = key
        h = F.chamber(word)
        fixes = building.act(g, key) == key
        conj = F.multiply(F.multiply(F.invert(h), g), h)
        law = F.in_clique_subgroup(conj, S)
        rep.checked += 1
        rep.fixed += fixes
        if fixes != law:
            rep.counterexamples.append(building.label(key))
    return rep


# ---------------------------------------------------------------------------
# choice complex and the restricted complex


class ChoiceComplex:
    """Partial choice functions on the coset spaces, ordered by inclusion.

    A vertex is a tuple with one entry per graph vertex: ``None`` (nothing
    chosen) or the index of a point of ``X_v``. ``restrict_to_cliques``
    keeps only choices whose unchosen set is a clique.
    """

    def __init__(self, family: PairFamily, restrict_to_cliques: bool = False,
                 cap: int = CHOICE_CAP):
        if not family.is_finite:
            raise HypothesisError("the choice complex needs finite vertex groups")
        self.family = family
        self.spaces = [CosetSpace(G, A) for G, A in zip(family.groups, family.subgroups)]
        sizes = [len(X) for X in self.spaces]
        total = 1
        for m in sizes:
            total *= m + 1
        if total > cap and not restrict_to_cliques:
            raise CapExceeded(f"choice complex would have {total} vertices, cap is {cap}")
        full = (1 << family.n) - 1
        allowed = set(family.poset.elements) if restrict_to_cliques else None
        verts = []
        for choice in product(*[[None] + list(range(m)) for m in sizes]):
            unchosen = sum(1 << i for i, c in enumerate(choice) if c is None)
            if allowed is None or unchosen in allowed:
                verts.append(choice)
        if len(verts) > cap:
            raise CapExceeded(f"choice complex has {len(verts)} vertices, cap is {cap}")
        verts.sort(key=lambda y: (sum(c is not None for c in y),
                                  tuple(-1 if c is None else c for c in y)))
        self.full = full
        self.vertices = verts
        self.index = {y: k for k, y in enumerate(verts)}
        self.complex = order_complex(verts, _choice_leq, labels=[self.label(y) for y in verts])

    def __len__(self):
        return len(self.vertices)

    def label(self, y) -> str:
        parts = [f"{v}:{c}" for v, c in zip(self.family.vertices, y) if c is not None]
        return "{" + ",".join(parts) + "}"

    def support(self, y) -> int:
        return sum(1 << i for i, c in enumerate(y) if c is not None)

    def act(self, comps, y) -> tuple:
        """Componentwise action of ``(g_v)`` in the product of vertex groups."""
        return tuple(None if c is None else X.act(g, c) for X, g, c in zip(self.spaces, comps, y))

    def generator_tuples(self) -> list[tuple]:
        F = self.family
        out = []
        for i, G in enumerate(F.groups):
            for s in G.generators:
                comps = list(F.identity.apart)
                comps[i] = s
                out.append(tuple(comps))
        return out

    def invariance_check(self) -> list[str]:
        """Vertices moved outside the complex by a generator (should be none)."""
        bad = []
        for comps in self.generator_tuples():
            for y in self.vertices:
                if self.act(comps, y) not in self.index:
                    bad.append(self.label(y))
        return bad


def _choice_leq(a, b) -> bool:
    return all(x is None or x == y for x, y in zip(a, b))


def build_choice_complex(family: PairFamily, cap: int = CHOICE_CAP) -> ChoiceComplex:
    return ChoiceComplex(family, False, cap)


def build_restricted_complex(family: PairFamily, cap: int = CHOICE_CAP) -> ChoiceComplex:
    """Choices whose unchosen vertices span a clique of the graph."""
    return ChoiceComplex(family, True, cap)


def restricted_vertex_count(family: PairFamily) -> int:
    """``sum over cliques S of prod_{v not in S} [G_v : A_v]``."""
    total = 0
    for S in family.poset.elements:
        n = 1
        for i in range(family.n):
            if not S >> i & 1:
                n *= family.coset_index(i)
        total += n
    return total


# ---------------------------------------------------------------------------
# the isomorphism between the complete-graph building and the choice complex


@dataclass
class IsoReport:
    vertices: int
    well_defined_checks: int
    edges: int
    equivariance_checks: int
    support_checks: int
    mapping: dict

    def summary(self) -> dict:
        return {"vertices": self.vertices, "well_defined_checks": self.well_defined_checks,
                "edges": self.edges, "equivariance_checks": self.equivariance_checks,
                "support_checks": self.support_checks}


def coset_complex_iso(family: PairFamily) -> IsoReport:
    """Build ``[g, S] -> {g_v A_v : v not in S}`` from the building of the
    complete-graph family onto the choice complex and verify that it is
    well defined, bijective, preserves adjacency in both directions, commutes
    with the action of the product of the vertex groups, and sends a vertex
    of type ``S`` to a choice with support ``V - S``.

    Any failure raises :class:`VerificationError`.
    """
    Fc = family.complete_family()
    D = build_truncated(Fc, Fc.n)
    CX = build_choice_complex(Fc)

    def image(word, S):
        comps = Fc.project(Fc.chamber(word))
        return tuple(None if S >> i & 1 else X.point_of(g)
                     for i, (X, g) in enumerate(zip(CX.spaces, comps)))

    mapping = {}
    for key in D.vertices:
        mapping[key] = image(*key)

    # every chamber through a vertex must give the same image
    checks = 0
    for u in D.chambers:
        for S in D.cliques:
            key = (Fc.coset_word(u, S), S)
            if image(u, S) != mapping[key]:
                raise VerificationError(f"image of {D.label(key)} depends on the representative")
            checks += 1

    if len(set(mapping.values())) != len(mapping) or len(mapping) != len(CX):
        raise VerificationError("map is not a bijection onto the choice complex")

    d_edges = {frozenset((mapping[D.vertices[i]], mapping[D.vertices[j]]))
               for i, j in D.complex.edges()}
    c_edges = {frozenset((CX.vertices[i], CX.vertices[j])) for i, j in CX.complex.edges()}
    if d_edges != c_edges:
        raise VerificationError("adjacency is not preserved in both directions")

    eq = 0
    for i, G in enumerate(Fc.groups):
        for s in G.generators:
            comps = list(Fc.identity.apart)
            comps[i] = s
            g = Fc.letter(i, s)
            for key in D.vertices:
                lhs = mapping[D.act(g, key)]
                rhs = CX.act(comps, mapping[key])
                if lhs != rhs:
                    raise VerificationError(f"equivariance fails at {D.label(key)}")
                eq += 1

    full = (1 << Fc.n) - 1
    for (word, S), y in mapping.items():
        if CX.support(y) != full & ~S:
            raise VerificationError("type of a vertex does not match the support of its image")

    return IsoReport(len(mapping), checks, len(d_edges), eq, len(mapping), mapping)


# ---------------------------------------------------------------------------
# fundamental groups


def fundamental_group(K: SimComplex, base: int = 0) -> Presentation:
    """Edge-path presentation of ``pi_1``: generators are the edges outside a
    breadth-first spanning tree, relators are the boundaries of triangles."""
    if not K.is_connected():
        raise GraphProdError("complex is not connected")
    adj = K.adjacency()
    tree = set()
    seen = {base}
    queue = deque([base])
    while queue:
        i = queue.popleft()
        for j in range(len(K)):
            if adj[i] >> j & 1 and j not in seen:
                seen.add(j)
                tree.add((min(i, j), max(i, j)))
                queue.append(j)
    names = {e: f"e{e[0]}_{e[1]}" for e in K.edges() if e not in tree}

    def edge(a, b):
        e = (min(a, b), max(a, b))
        if e not in names:
            return []
        return [(names[e], 1 if a < b else -1)]

    rels = []
    for s in sorted(tuple(sorted(s)) for s in K.simplices if len(s) == 3):
        a, b, c = s
        r = tuple(edge(a, b) + edge(b, c) + edge(c, a))
        if r:
            rels.append(r)
    return Presentation(sorted(names.values(), key=lambda n: tuple(map(int, n[1:].split("_")))),
                        rels)


def first_betti_check(K: SimComplex, pres: Presentation) -> dict:
    """Compare the free rank of ``H_1`` with Euler-characteristic bookkeeping
    for complexes of dimension at most 2."""
    ab = abelianization(pres)
    b1 = ab.count(0)
    f = K.f_vector() + [0, 0, 0]
    chi = f[0] - f[1] + f[2]
    out = {"abelianization": ab, "b1": b1, "euler_characteristic": K.euler_characteristic()}
    if K.dimension <= 2:
        out["b2"] = chi - 1 + b1
    return out


# ---------------------------------------------------------------------------
# observables of the covering picture


@dataclass
class CoveringReport:
    abelianization_presentation: list
    abelianization_words: list
    kernel_elements: int
    vertices: int
    fixed_points: list
    torsion_suspects: list
    torsion_checked: int

    @property
    def ok(self) -> bool:
        return (self.abelianization_presentation == self.abelianization_words
                and not self.fixed_points and not self.torsion_suspects)

    def to_json(self) -> dict:
        return {"abelianization_presentation": self.abelianization_presentation,
                "abelianization_words": self.abelianization_words,
                "kernel_elements": self.kernel_elements, "vertices": self.vertices,
                "fixed_points": self.fixed_points, "torsion_suspects": self.torsion_suspects,
                "torsion_checked": self.torsion_checked, "ok": self.ok}


def projection_kernel(family: PairFamily, length: int) -> list[GPElement]:
    """Nonidentity elements of word length ``<= length`` that project to the
    identity of the product of the vertex groups."""
    ident = family.project(family.identity)
    ball = family.ball(length)
    return [x for x in sorted(ball, key=lambda x: (ball[x], repr(x.word)))
            if family.project(x) == ident and x != family.identity]


def covering_checks(family: PairFamily, radius: int = 4, length: int = 4,
                    power_cap: int = 12, sample: int | None = None, seed: int = 0,
                    matrix_of=None) -> CoveringReport:
    """Observable consequences of the projection kernel being the deck group
    of a covering of the restricted complex.

    * the two abelianization routes agree;
    * no kernel element of length ``<= length`` fixes a vertex of the
      radius-``radius`` building;
    * kernel elements have infinite order: ``x^k`` is never the identity for
      ``k <= power_cap``; when ``matrix_of`` (element -> integer matrix) is
      given, the matrix powers are checked instead and entry growth is
      required as well.
    """
    ab1 = abelianization(presentation(family))
    ab2 = word_engine_abelianization(family)
    kernel = projection_kernel(family, length)
    if sample is not None and len(kernel) > sample:
        kernel = sorted(random.Random(seed).sample(kernel, sample), key=lambda x: (len(x), x.word))
    B = build_truncated(family, radius)
    fixed = []
    for x in kernel:
        for key in B.vertices:
            if B.act(x, key) == key:
                fixed.append((family.format(x), B.label(key)))
                break
    suspects = []
    for x in kernel:
        if matrix_of is not None:
            if not _matrix_infinite_order(matrix_of(x), power_cap):
                suspects.append(family.format(x))
        else:
            y = x
            for _ in range(power_cap - 1):
                if y == family.identity:
                    break
                y = family.multiply(y, x)
            if y == family.identity:
                suspects.append(family.format(x))
    return CoveringReport(ab1, ab2, len(kernel), len(B), fixed, suspects, len(kernel))


def _matrix_infinite_order(M, cap: int) -> bool:
    import numpy as np

    ident = np.eye(M.shape[0], dtype=M.dtype)
    P = M.copy()
    sizes = []
    for _ in range(cap):
        if np.array_equal(P, ident):
            return False
        sizes.append(int(np.abs(P).max()))
        P = P @ M
    return sizes[-1] > sizes[0]


def action_kernel(family: PairFamily, radius: int = 1) -> list[tuple]:
    """Elements of the product of the ``A_v`` acting trivially on the
    radius-``radius`` building, as tuples ``(a_v)``.

    The kernel of the whole action lies in this product (it fixes the base
    chamber) and radius 1 already detects it.
    """
    if not family.is_finite:
        raise HypothesisError("the action kernel is computed for finite vertex groups only")
    B = build_truncated(family, radius)
    out = []
    for comps in product(*[A.elements for A in family.subgroups]):
        g = GPElement((), tuple(comps), family)
        if all(B.act(g, key) == key for key in B.vertices):
            out.append(tuple(comps))
    return out


def complexes_are_flag(family: PairFamily, radius: int = 4) -> dict:
    """Flag test for the truncated building and the choice complexes."""
    out = {"building": is_flag(build_truncated(family, radius).complex)}
    if family.is_finite:
        out["choice"] = is_flag(build_choice_complex(family).complex)
        out["restricted"] = is_flag(build_restricted_complex(family).complex)
    return out
