"""Coxeter matrices, Tits representations, and matrix images of graph products.

The Tits (geometric) representation of a Coxeter group sends a generator
``s`` to the reflection ``e_t -> e_t - 2 B(e_s, e_t) e_s`` with
``B(e_s, e_t) = -cos(pi / m(s, t))``. For ``m`` in ``{2, 3, inf}`` the
coefficients ``-2B`` are ``0, 1, 2``, so every matrix is an integer matrix
and equality tests are exact. Other entries are rejected.

:class:`MatrixEngine` turns an element of a graph product of pairs into such
a matrix: a finite vertex group acts on its coset space and so lands in a
symmetric group, written in adjacent transpositions; ``D_inf`` vertices map
to themselves and ``Z`` vertices map to the translation ``s t`` of a copy of
``D_inf``. This is the independent oracle for the normal form.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import CapExceeded, GraphProdError, HypothesisError
from .graphs import SimpleGraph
from .groups import (Action, CosetSpace, FiniteGroup, InfiniteDihedral, PresetSubgroup,
                     check_action_iso, core, symmetric)
from .words import GPElement, PairFamily, presentation

INF = math.inf
INT64_SAFE = 2**62


# ---------------------------------------------------------------------------
# Coxeter matrices


class CoxeterMatrix:
    """Symmetric matrix with ones on the diagonal and entries ``>= 2`` or
    ``INF`` elsewhere, indexed by generator labels."""

    def __init__(self, labels: Sequence[str], entries):
        self.labels = tuple(labels)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValueError("duplicate generator labels")
        self.m = [[_entry(x) for x in row] for row in entries]
        if len(self.m) != n or any(len(r) != n for r in self.m):
            raise ValueError("matrix shape does not match the labels")
        for i in range(n):
            if self.m[i][i] != 1:
                raise ValueError("diagonal entries must be 1")
            for j in range(n):
                if self.m[i][j] != self.m[j][i]:
                    raise ValueError("matrix is not symmetric")
                if i != j and self.m[i][j] < 2:
                    raise ValueError(f"entry ({self.labels[i]}, {self.labels[j]}) must be >= 2")
        self.index = {s: i for i, s in enumerate(self.labels)}

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        return isinstance(other, CoxeterMatrix) and self.labels == other.labels and self.m == other.m

    def __repr__(self):
        return f"CoxeterMatrix({list(self.labels)})"

    def entry(self, a: str, b: str):
        return self.m[self.index[a]][self.index[b]]

    def is_right_angled(self) -> bool:
        return all(x in (1, 2, INF) for row in self.m for x in row)

    def restrict(self, labels: Sequence[str]) -> "CoxeterMatrix":
        idx = [self.index[s] for s in labels]
        return CoxeterMatrix(labels, [[self.m[i][j] for j in idx] for i in idx])

    def to_json(self) -> dict:
        return {"generators": list(self.labels),
                "matrix": [[("inf" if x == INF else int(x)) for x in row] for row in self.m]}

    def to_gap(self) -> str:
        """GAP-style integer matrix; ``0`` stands for infinity."""
        rows = ["[" + ", ".join("0" if x == INF else str(int(x)) for x in row) + "]"
                for row in self.m]
        return "# generators: " + " ".join(self.labels) + "\n[ " + ",\n  ".join(rows) + " ]\n"

    @classmethod
    def from_json(cls, data: dict) -> "CoxeterMatrix":
        return cls(data["generators"], data["matrix"])

    @classmethod
    def right_angled(cls, graph: SimpleGraph) -> "CoxeterMatrix":
        """Commuting generators along edges, free products elsewhere."""
        n = len(graph)
        return cls(graph.vertices, [[1 if i == j else (2 if graph.adjacent(i, j) else INF)
                                     for j in range(n)] for i in range(n)])

    @classmethod
    def dihedral(cls, p, labels=("s", "t")) -> "CoxeterMatrix":
        return cls(labels, [[1, p], [p, 1]])

    @classmethod
    def type_a(cls, m: int) -> "CoxeterMatrix":
        """The symmetric group ``S_m`` on adjacent transpositions ``s1..s{m-1}``."""
        k = m - 1
        return cls([f"s{i}" for i in range(1, m)],
                   [[1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(k)]
                    for i in range(k)])


def _entry(x):
    if x in ("inf", "infinity", None) or x == INF:
        return INF
    if x == 0:
        return INF
    return int(x)


def coxeter_from_pairs(graph: SimpleGraph, pairs: dict) -> CoxeterMatrix:
    """Coxeter matrix of a graph product of Coxeter pairs.

    ``pairs`` maps each vertex to ``(CoxeterMatrix, parabolic generator
    labels)``. Generators are ``"v.s"``. Across vertices the entry is ``2``
    along an edge, ``2`` when either generator lies in its vertex's
    parabolic, and ``INF`` otherwise.
    """
    labels, owner, in_p, blocks = [], [], [], []
    for i, v in enumerate(graph.vertices):
        M, P = pairs[v]
        P = set(P)
        if not P <= set(M.labels):
            raise GraphProdError(f"parabolic at {v} is not a subset of its generators")
        blocks.append(len(labels))
        for s in M.labels:
            labels.append(f"{v}.{s}")
            owner.append(i)
            in_p.append(s in P)
    n = len(labels)
    m = [[1] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            va, vb = owner[a], owner[b]
            if va == vb:
                M = pairs[graph.vertices[va]][0]
                m[a][b] = M.m[a - blocks[va]][b - blocks[va]]
            elif graph.adjacent(va, vb) or in_p[a] or in_p[b]:
                m[a][b] = 2
            else:
                m[a][b] = INF
    return CoxeterMatrix(labels, m)


# ---------------------------------------------------------------------------
# Tits representation


class TitsRep:
    """Integer reflection matrices; column ``t`` of ``sigma(s)`` is the image
    of ``e_t``."""

    def __init__(self, M: CoxeterMatrix):
        self.coxeter = M
        n = len(M)
        coef = {2: 0, 3: 1, INF: 2}
        mats = []
        for s in range(n):
            A = np.eye(n, dtype=np.int64)
            A[s, s] = -1
            for t in range(n):
                if t == s:
                    continue
                m = M.m[s][t]
                if m not in coef:
                    raise GraphProdError(f"entry {m} between {M.labels[s]} and {M.labels[t]} "
                                         "has no integer reflection matrix; use 2, 3 or inf")
                A[s, t] = coef[m]
            mats.append(A)
        self.matrices = mats
        self.identity = np.eye(n, dtype=np.int64)

    def __getitem__(self, label) -> np.ndarray:
        if isinstance(label, str):
            label = self.coxeter.index[label]
        return self.matrices[label]

    def word(self, indices: Sequence[int]) -> np.ndarray:
        out = self.identity
        for i in indices:
            out = safe_matmul(out, self.matrices[i])
        return out

    def verify_relations(self, growth_powers: int = 50) -> list[str]:
        """Return the relations that fail (empty when all hold)."""
        bad = []
        n = len(self.coxeter)
        for s in range(n):
            if not np.array_equal(safe_matmul(self.matrices[s], self.matrices[s]), self.identity):
                bad.append(f"{self.coxeter.labels[s]}^2")
        for s in range(n):
            for t in range(s + 1, n):
                m = self.coxeter.m[s][t]
                P = safe_matmul(self.matrices[s], self.matrices[t])
                if m == INF:
                    if not grows(P, growth_powers):
                        bad.append(f"({self.coxeter.labels[s]} {self.coxeter.labels[t]}) finite order")
                elif not np.array_equal(matrix_power(P, m), self.identity):
                    bad.append(f"({self.coxeter.labels[s]} {self.coxeter.labels[t]})^{m}")
        return bad

    def to_json(self) -> dict:
        return {"generators": list(self.coxeter.labels),
                "matrices": [A.tolist() for A in self.matrices]}


def tits_rep(M: CoxeterMatrix) -> TitsRep:
    return TitsRep(M)


def safe_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact integer product; switches to Python integers when int64 could
    overflow."""
    if A.dtype == object or B.dtype == object:
        return np.dot(A.astype(object), B.astype(object))
    a = int(np.abs(A).sum(axis=1).max()) if A.size else 0
    b = int(np.abs(B).max()) if B.size else 0
    if a * b >= INT64_SAFE:
        return np.dot(A.astype(object), B.astype(object))
    return A @ B


def matrix_power(A: np.ndarray, k: int) -> np.ndarray:
    out = np.eye(A.shape[0], dtype=A.dtype)
    for _ in range(k):
        out = safe_matmul(out, A)
    return out


def grows(A: np.ndarray, powers: int) -> bool:
    """``A^k`` for ``k = 1..powers`` never returns to the identity and its
    largest entry strictly increases along the way."""
    ident = np.eye(A.shape[0], dtype=np.int64)
    P = A
    last = -1
    increased = False
    for _ in range(powers):
        if np.array_equal(P, ident):
            return False
        top = int(np.abs(P).max())
        increased = increased or (last >= 0 and top > last)
        last = top
        P = safe_matmul(P, A)
    return increased


def matrix_key(A: np.ndarray) -> tuple:
    return tuple(int(x) for x in A.flat)


# ---------------------------------------------------------------------------
# symmetric-group embedding and reduction


def bubble_word(p: Sequence[int]) -> list[int]:
    """Adjacent-transposition factorization ``p = s_{i1} ... s_{ik}``
    (``s_i`` swaps ``i-1`` and ``i``) by bubble sort; returns ``[i1, ...]``."""
    p = list(p)
    record = []
    changed = True
    while changed:
        changed = False
        for i in range(1, len(p)):
            if p[i - 1] > p[i]:
                p[i - 1], p[i] = p[i], p[i - 1]
                record.append(i)
                changed = True
    return record[::-1]


def transposition_product(word: Sequence[int], m: int) -> tuple:
    """The permutation ``s_{i1} ... s_{ik}`` of ``0..m-1``; inverse of
    :func:`bubble_word`."""
    p = list(range(m))
    # swapping two positions composes with s_i on the right
    for i in word:
        p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def _is_effective(G, A) -> bool:
    return core(G, A).is_trivial


@dataclass
class VertexEmbedding:
    """How one vertex group enters the Coxeter group."""

    kind: str  # "symmetric", "dinfty" or "z"
    labels: tuple
    parabolic: tuple
    coxeter: CoxeterMatrix
    space: CosetSpace | None = None


class MatrixEngine:
    """Integer matrices for elements of a graph product of pairs.

    Raises :class:`HypothesisError` when some finite vertex group does not
    act effectively on its coset space (reduce the family first) or when an
    infinite vertex pair is not one of ``(Z, 1)``, ``(D_inf, 1)``,
    ``(D_inf, <s>)``, ``(D_inf, <t>)``.
    """

    def __init__(self, family: PairFamily):
        self.family = family
        self.vertex = []
        pairs = {}
        for v, G, A in zip(family.vertices, family.groups, family.subgroups):
            emb = self._vertex_embedding(v, G, A)
            self.vertex.append(emb)
            pairs[v] = (emb.coxeter, emb.parabolic)
        self.coxeter = coxeter_from_pairs(family.graph, pairs)
        self.tits = TitsRep(self.coxeter)
        self.offset = []
        k = 0
        for emb in self.vertex:
            self.offset.append(k)
            k += len(emb.labels)
        self._cache: dict = {}

    @staticmethod
    def _vertex_embedding(v, G, A) -> VertexEmbedding:
        if isinstance(G, FiniteGroup):
            if not _is_effective(G, A):
                raise HypothesisError(
                    f"vertex {v}: {G.label} does not act effectively on its cosets of "
                    f"{A.label} (the core is nontrivial); reduce the family first")
            X = CosetSpace(G, A)
            m = len(X)
            M = CoxeterMatrix.type_a(m)
            return VertexEmbedding("symmetric", M.labels, M.labels[1:], M, X)
        M = CoxeterMatrix.dihedral(INF)
        if G.kind == "Z":
            if not A.is_trivial:
                raise HypothesisError(f"vertex {v}: only the pair (Z, 1) has a matrix route")
            return VertexEmbedding("z", M.labels, ("s",), M)
        if A.is_trivial:
            return VertexEmbedding("dinfty", M.labels, (), M)
        if A.d == 0 and A.c in (0, 1):
            return VertexEmbedding("dinfty", M.labels, (("s", "t")[A.c],), M)
        raise HypothesisError(f"vertex {v}: D_inf pair must have A trivial, <s> or <t>")

    def letter_word(self, i: int, g) -> list[int]:
        """Global Coxeter generator indices for ``g`` in vertex group ``i``."""
        key = (i, g)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        emb = self.vertex[i]
        off = self.offset[i]
        if emb.kind == "symmetric":
            local = [j - 1 for j in bubble_word(emb.space.permutation(g))]
        elif emb.kind == "dinfty":
            G = self.family.groups[i]
            local = ["st".index(n) for n, _ in G.word_of(g)]
        else:
            local = [0, 1] * g if g >= 0 else [1, 0] * (-g)
        out = [off + j for j in local]
        self._cache[key] = out
        return out

    def raw_matrix(self, raw) -> np.ndarray:
        """Matrix of a product of letters ``(vertex index, element)``."""
        out = self.tits.identity
        for i, g in raw:
            out = safe_matmul(out, self.tits.word(self.letter_word(i, g)))
        return out

    def matrix(self, x: GPElement) -> np.ndarray:
        raw = list(x.word) + [(i, a) for i, a in enumerate(x.apart)]
        return self.raw_matrix(raw)

    def coxeter_word(self, x: GPElement) -> list[str]:
        raw = list(x.word) + [(i, a) for i, a in enumerate(x.apart)]
        return [self.coxeter.labels[k] for i, g in raw for k in self.letter_word(i, g)]

    def equal(self, raw1, raw2) -> bool:
        return np.array_equal(self.raw_matrix(raw1), self.raw_matrix(raw2))

    def symbol_matrices(self) -> dict:
        """Matrix for every presentation generator ``"v.name"``."""
        F = self.family
        out = {}
        for i, (v, G) in enumerate(zip(F.vertices, F.groups)):
            for n, g in zip(G.names, G.generators):
                out[f"{v}.{n}"] = self.raw_matrix([(i, g)])
        return out

    def action_checks(self) -> list[bool]:
        """For each finite vertex, the coset action of ``G_v`` agrees with
        the action of its image on ``S_m / S_{m-1}``."""
        out = []
        for i, emb in enumerate(self.vertex):
            if emb.kind != "symmetric":
                continue
            G = self.family.groups[i]
            X = emb.space
            m = len(X)
            Sm = symmetric(m)
            stab = Sm.subgroup(Sm.generators[1:])
            Y = CosetSpace(Sm, stab)

            def act_y(g, y, X=X, Y=Y):
                return Y.act(X.permutation(g), y)

            phi = [None] * m
            for y, rep in enumerate(Y.points):
                phi[rep[0]] = y
            ok, _ = check_action_iso(Action(G, m, X.act), Action(G, m, act_y),
                                     _identity_iso(G, phi))
            out.append(ok)
        return out

    def to_json(self) -> dict:
        return {"coxeter": self.coxeter.to_json(), "tits": self.tits.to_json(),
                "vertex_words": {f"{v}.{n}": [self.coxeter.labels[k] for k in
                                              self.letter_word(i, g)]
                                 for i, (v, G) in enumerate(zip(self.family.vertices,
                                                                self.family.groups))
                                 for n, g in zip(G.names, G.generators)}}


def _identity_iso(G, phi):
    from .groups import ActionIso
    return ActionIso(tuple(G.generators), tuple(phi))


def embed_symmetric(family: PairFamily) -> MatrixEngine:
    """Coxeter matrix and generator words for ``family`` (see
    :class:`MatrixEngine`)."""
    return MatrixEngine(family)


@dataclass
class Reduction:
    family: PairFamily
    maps: list  # per vertex: dict old element -> new element
    cores: list


def reduce(family: PairFamily) -> Reduction:
    """Quotient every finite vertex group by the core of its subgroup.

    The new vertex group is the image of ``G_v`` acting on ``G_v / A_v``,
    with the point stabilizer of the identity coset as the new subgroup.
    Already effective (and infinite) vertices are kept unchanged.
    """
    groups, subs, maps, cores = {}, {}, [], []
    for v, G, A in zip(family.vertices, family.groups, family.subgroups):
        if not isinstance(G, FiniteGroup) or _is_effective(G, A):
            groups[v], subs[v] = G, A
            maps.append(None)
            cores.append(1)
            continue
        N = core(G, A)
        X = CosetSpace(G, A)
        gens = [X.permutation(s) for s in G.generators]
        Q = FiniteGroup(len(X), gens, names=G.names, label=f"{G.label}/core")
        B = Q.subgroup([X.permutation(a) for a in A.generators])
        groups[v], subs[v] = Q, B
        maps.append({g: X.permutation(g) for g in G.elements})
        cores.append(N.order)
    return Reduction(PairFamily(family.graph, groups, subs), maps, cores)


# ---------------------------------------------------------------------------
# orthoparabolic and even subgroups


@dataclass
class Orthoparabolic:
    coxeter: CoxeterMatrix
    parabolic: tuple
    rho: dict  # generator -> image generator or "" for the identity
    kernel_generators: list | None = None
    quotient_order: int | None = None

    def image_word(self, word: Sequence[str]) -> list[str]:
        return [self.rho[s] for s in word if self.rho[s]]

    def to_json(self) -> dict:
        return {"coxeter": self.coxeter.to_json(), "parabolic": list(self.parabolic),
                "rho": {s: (t or "e") for s, t in self.rho.items()},
                "kernel_generators": self.kernel_generators,
                "quotient_order": self.quotient_order}


def rho_is_homomorphism(M: CoxeterMatrix, parabolic: Sequence[str], rho: dict) -> bool:
    """Check that ``rho`` respects every Coxeter relation, computing in the
    Tits representation of the parabolic subgroup."""
    P = M.restrict(list(parabolic))
    T = TitsRep(P)
    ident = T.identity

    def mat(s):
        return T[rho[s]] if rho[s] else ident

    if any(rho[s] != s for s in parabolic):
        return False
    for i, s in enumerate(M.labels):
        if not np.array_equal(safe_matmul(mat(s), mat(s)), ident):
            return False
        for t in M.labels[i + 1:]:
            m = M.entry(s, t)
            if m == INF:
                continue
            if not np.array_equal(matrix_power(safe_matmul(mat(s), mat(t)), m), ident):
                return False
    return True


def orthoparabolic_find(M: CoxeterMatrix, parabolic: Sequence[str],
                        kernel_cap: int = 2000) -> Orthoparabolic | None:
    """Search for a retraction onto the parabolic subgroup sending each other
    generator to the identity or to a single parabolic generator."""
    parabolic = tuple(parabolic)
    unknown = set(parabolic) - set(M.labels)
    if unknown:
        raise GraphProdError(f"unknown generators {sorted(unknown)}")
    free = [s for s in M.labels if s not in parabolic]
    choices = [""] + list(parabolic)
    P = M.restrict(list(parabolic))
    T = TitsRep(P)
    mats = {"": T.identity, **{s: T[s] for s in parabolic}}
    rho = {s: s for s in parabolic}

    def consistent(s):
        for t, img in rho.items():
            m = M.entry(s, t) if s != t else 1
            if m == INF or s == t:
                continue
            if not np.array_equal(matrix_power(safe_matmul(mats[rho[s]], mats[img]), m),
                                  T.identity):
                return False
        return True

    def search(k):
        if k == len(free):
            return True
        s = free[k]
        for c in choices:
            rho[s] = c
            if consistent(s) and search(k + 1):
                return True
            del rho[s]
        return False

    if not search(0):
        return None
    rho = {s: rho[s] for s in M.labels}
    out = Orthoparabolic(M, parabolic, rho)
    elements = _finite_matrix_group(T, kernel_cap)
    if elements is not None:
        out.quotient_order = len(elements)
        out.kernel_generators = _kernel_schreier(M, T, rho, elements)
    return out


def _finite_matrix_group(T: TitsRep, cap: int):
    """Elements of the group generated by ``T`` as ``matrix key -> word``,
    or ``None`` when more than ``cap`` are found."""
    start = T.identity
    words = {matrix_key(start): ()}
    mats = {matrix_key(start): start}
    queue = deque([start])
    while queue:
        A = queue.popleft()
        wa = words[matrix_key(A)]
        for i, S in enumerate(T.matrices):
            B = safe_matmul(A, S)
            k = matrix_key(B)
            if k not in words:
                if len(words) >= cap:
                    return None
                words[k] = wa + (i,)
                mats[k] = B
                queue.append(B)
    return {k: (words[k], mats[k]) for k in words}


def _kernel_schreier(M, T, rho, elements) -> list[list[str]]:
    """Schreier generators ``w_c s w_{c rho(s)}^-1`` of the kernel, using the
    parabolic words as transversal; freely trivial ones are dropped."""
    labels = T.coxeter.labels
    out = []
    seen = set()
    for key, (word, A) in elements.items():
        wc = [labels[i] for i in word]
        for s in M.labels:
            B = safe_matmul(A, T[rho[s]]) if rho[s] else A
            wd = [labels[i] for i in elements[matrix_key(B)][0]]
            g = _free_reduce_involutions(wc + [s] + wd[::-1])
            if g and tuple(g) not in seen:
                seen.add(tuple(g))
                out.append(g)
    return out


def _free_reduce_involutions(word: list[str]) -> list[str]:
    out: list[str] = []
    for s in word:
        if out and out[-1] == s:
            out.pop()
        else:
            out.append(s)
    return out


@dataclass
class EvenSubgroup:
    coxeter: CoxeterMatrix
    generators: list
    index: int

    def contains(self, word: Sequence[str]) -> bool:
        return len(word) % 2 == 0

    def to_json(self) -> dict:
        return {"generators": self.generators, "index": self.index}


def even_subgroup(M: CoxeterMatrix) -> EvenSubgroup:
    """Kernel of the parity map sending every generator to ``-1``;
    generated by ``s_1 s_j``."""
    if not M.labels:
        return EvenSubgroup(M, [], 1)
    s1 = M.labels[0]
    return EvenSubgroup(M, [[s1, s] for s in M.labels[1:]], 2)


# ---------------------------------------------------------------------------
# finite-index subgroups through a D_inf retraction


def dinfty_word(text_or_word) -> tuple:
    """Evaluate a word in ``s``, ``t`` (with ``^k`` allowed) in ``D_inf``."""
    D = InfiniteDihedral()
    word = text_or_word
    if isinstance(word, str):
        from .groups import parse_word
        word = parse_word(word)
    return D.evaluate(word)


def _power_word(base: list[str], k: int) -> list[str]:
    if k >= 0:
        return base * k
    inv = base[::-1]
    return inv * (-k)


def dinfty_generators(n: int, literal_odd: bool = False) -> list[list[str]]:
    """Two generators of an index-``n`` subgroup of ``D_inf = <s, t>``.

    ``n = 2k``: ``s`` and ``(st)^k s (st)^-k``; ``n = 2k+1``: ``s`` and
    ``(ts)^k t (ts)^-k``. With ``literal_odd`` the odd case uses
    ``(st)^k t (st)^-k`` instead, which has index ``2k - 1``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return [["s"], ["t"]]
    k = n // 2
    if n % 2 == 0:
        mid, base = ["s"], ["s", "t"]
    else:
        mid, base = ["t"], ["s", "t"] if literal_odd else ["t", "s"]
    return [["s"], _power_word(base, k) + mid + _power_word(base, -k)]


def dinfty_index_by_enumeration(generators: Sequence[Sequence[str]], cap: int = 10**4) -> int:
    """Count right cosets of ``<generators>`` in ``D_inf`` by breadth-first
    search from the trivial coset."""
    D = InfiniteDihedral()
    H = PresetSubgroup(D, [D.evaluate([(x, 1) for x in w]) for w in generators])
    seen = {H.right_rep(D.identity)}
    queue = deque([D.identity])
    while queue:
        g = queue.popleft()
        for s in D.generators:
            h = D.mul(g, s)
            key = H.right_rep(h)
            if key not in seen:
                if len(seen) >= cap:
                    raise CapExceeded("coset enumeration exceeded its cap")
                seen.add(key)
                queue.append(h)
    return len(seen)


@dataclass
class DinftySubgroup:
    n: int
    pair: tuple
    dinfty_generators: list
    right_transversal: list
    generators: list
    index_formula: int | None
    index_enumerated: int
    involutions_ok: bool
    retraction_ok: bool

    def to_json(self) -> dict:
        return {"n": self.n, "pair": list(self.pair),
                "dinfty_generators": self.dinfty_generators,
                "right_transversal": self.right_transversal, "generators": self.generators,
                "index_formula": self.index_formula, "index_enumerated": self.index_enumerated,
                "involutions_ok": self.involutions_ok, "retraction_ok": self.retraction_ok}


def dinfty_subgroups(M: CoxeterMatrix, n: int) -> DinftySubgroup:
    """Index-``n`` subgroup of a right-angled Coxeter group.

    Pick the first non-commuting pair ``s, t``; the retraction ``r`` onto
    ``<s, t> = D_inf`` kills every other generator. The subgroup is
    ``r^-1(V_n)`` with ``V_n`` from :func:`dinfty_generators`, generated by
    the generators of ``V_n`` and the conjugates ``c u c^-1`` of the other
    generators ``u`` by a right transversal of ``V_n``.
    """
    if not M.is_right_angled():
        raise HypothesisError("the D_inf retraction needs a right-angled Coxeter matrix")
    pair = next(((a, b) for i, a in enumerate(M.labels) for b in M.labels[i + 1:]
                 if M.entry(a, b) == INF), None)
    if pair is None:
        raise HypothesisError("the Coxeter group is finite: no two generators have a "
                              "product of infinite order")
    s, t = pair
    D = InfiniteDihedral()
    local = dinfty_generators(n)
    rename = {"s": s, "t": t}
    vgens = [[rename[x] for x in w] for w in local]
    H = PresetSubgroup(D, [D.evaluate([(x, 1) for x in w]) for w in local])
    index = dinfty_index_by_enumeration(local)
    transversal = _right_transversal(H)
    others = [u for u in M.labels if u not in pair]
    gens = list(vgens)
    for c in transversal:
        cw = [rename[x] for x, _ in D.word_of(c)]
        for u in others:
            gens.append(_free_reduce_involutions(cw + [u] + cw[::-1]))
    T = TitsRep(M)
    inv_ok = all(np.array_equal(matrix_power(T.word([M.index[x] for x in w]), 2), T.identity)
                 for w in gens)
    back = {s: "s", t: "t"}
    retract_ok = all(H.contains(D.evaluate([(back[x], 1) for x in w if x in back]))
                     for w in gens)
    return DinftySubgroup(n, pair, vgens, [[rename[x] for x, _ in D.word_of(c)]
                                           for c in transversal],
                          gens, H.index, index, inv_ok, retract_ok)


def _right_transversal(H: PresetSubgroup) -> list:
    """Shortest representatives of the right cosets ``H c`` in ``D_inf``."""
    D = H.parent
    reps = {H.right_rep(D.identity): D.identity}
    queue = deque([D.identity])
    while queue:
        g = queue.popleft()
        for x in D.generators:
            h = D.mul(g, x)
            k = H.right_rep(h)
            if k not in reps:
                reps[k] = h
                queue.append(h)
    return sorted(reps.values(), key=lambda g: (len(D.word_of(g)), g))


# ---------------------------------------------------------------------------
# linearity


@dataclass
class LinearityReport:
    relators_checked: int
    relator_failures: list
    commuting_pairs: list
    noncommuting_pairs: list
    elements: int
    collisions: list
    words_checked: int
    word_mismatches: int
    coxeter: CoxeterMatrix = field(repr=False, default=None)

    @property
    def ok(self) -> bool:
        return not self.relator_failures and not self.collisions and not self.word_mismatches

    def to_json(self) -> dict:
        return {"relators_checked": self.relators_checked,
                "relator_failures": self.relator_failures,
                "commuting_pairs": self.commuting_pairs,
                "noncommuting_pairs": self.noncommuting_pairs,
                "elements": self.elements, "collisions": self.collisions,
                "words_checked": self.words_checked, "word_mismatches": self.word_mismatches,
                "ok": self.ok}


def linearity_pipeline(family: PairFamily, length: int = 4,
                       engine: MatrixEngine | None = None) -> LinearityReport:
    """Send the graph product into a Coxeter group and on to integer
    matrices, then check it exactly.

    * every relator of the presentation maps to the identity;
    * for each pair of vertex generators, whether their matrices commute;
    * normal forms of word length ``<= length`` have pairwise distinct
      matrices, and each matrix equals the product of the letter matrices
      along the word that first reached it.
    """
    E = engine or MatrixEngine(family)
    mats = E.symbol_matrices()
    pres = presentation(family)
    ident = E.tits.identity
    failures = []
    rels = pres.all_relators()
    for r in rels:
        A = ident
        for name, e in r:
            B = mats[name]
            if e < 0:
                B = _inverse(B, E)
                e = -e
            for _ in range(e):
                A = safe_matmul(A, B)
        if not np.array_equal(A, ident):
            failures.append(" ".join(f"{n}^{e}" for n, e in r))
    names = sorted(mats)
    comm, noncomm = [], []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if a.split(".")[0] == b.split(".")[0]:
                continue
            AB = safe_matmul(mats[a], mats[b])
            BA = safe_matmul(mats[b], mats[a])
            (comm if np.array_equal(AB, BA) else noncomm).append((a, b))

    alphabet = family.generator_alphabet()
    letter_mats = [E.raw_matrix([(i, g)]) for _, i, g in alphabet]
    seen = {family.identity: ident}
    by_matrix = {matrix_key(ident): family.identity}
    frontier = [family.identity]
    collisions = []
    mismatches = 0
    checked = 0
    for _ in range(length):
        nxt = []
        for x in frontier:
            for k, (_, i, g) in enumerate(alphabet):
                y = family.times_letter(x, i, g)
                A = safe_matmul(seen[x], letter_mats[k])
                checked += 1
                if y in seen:
                    if not np.array_equal(seen[y], A):
                        mismatches += 1
                    continue
                if not np.array_equal(E.matrix(y), A):
                    mismatches += 1
                seen[y] = A
                key = matrix_key(A)
                other = by_matrix.get(key)
                if other is not None:
                    collisions.append((family.format(other), family.format(y)))
                else:
                    by_matrix[key] = y
                nxt.append(y)
        frontier = nxt
    return LinearityReport(len(rels), failures, comm, noncomm, len(seen), collisions,
                           checked, mismatches, E.coxeter)


def _inverse(A, E: MatrixEngine):
    """Inverse of an integer matrix of determinant +-1 by exact Gauss-Jordan."""
    from fractions import Fraction

    n = A.shape[0]
    M = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A.tolist())]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    out = [[M[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise GraphProdError("matrix is not invertible over the integers")
    return np.array([[int(x) for x in row] for row in out], dtype=np.int64)


# ---------------------------------------------------------------------------
# the two equality engines side by side


def oracle_partition_check(family: PairFamily, length: int = 4,
                           engine: MatrixEngine | None = None) -> dict:
    """Compare equality verdicts of the normal form and the matrix engine on
    every pair of words of length ``<= length`` over the generator alphabet.

    Verdicts agree on all pairs exactly when the two engines induce the same
    partition of the word set, which is what is tested.
    """
    E = engine or MatrixEngine(family)
    alphabet = family.generator_alphabet()
    letter_mats = [E.raw_matrix([(i, g)]) for _, i, g in alphabet]
    nf_class: dict = {}
    mat_class: dict = {}
    pairs_nf = {}
    words = 0
    level = [((), family.identity, E.tits.identity)]
    all_items = list(level)
    for _ in range(length):
        nxt = []
        for w, x, A in level:
            for k, (_, i, g) in enumerate(alphabet):
                nxt.append((w + (k,), family.times_letter(x, i, g), safe_matmul(A, letter_mats[k])))
        all_items.extend(nxt)
        level = nxt
    disagreements = []
    conflicts = 0
    for w, x, A in all_items:
        words += 1
        a = nf_class.setdefault(x, len(nf_class))
        b = mat_class.setdefault(matrix_key(A), len(mat_class))
        if pairs_nf.setdefault(a, b) != b:
            conflicts += 1
            if len(disagreements) < 10:
                disagreements.append(" ".join(alphabet[k][0] for k in w))
    # no conflicts makes normal form -> matrix a function; equal class
    # counts and distinct images make it a bijection
    agree = not conflicts and len(nf_class) == len(mat_class) == len(set(pairs_nf.values()))
    return {"words": words, "pairs": words * (words - 1) // 2,
            "normal_forms": len(nf_class), "matrices": len(mat_class),
            "agree": agree, "disagreements": disagreements}
