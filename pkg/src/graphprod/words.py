"""Elements of a graph product of pairs and their normal forms.

An element is stored as a word of *coset letters* followed by an ``apart``
tuple. A coset letter ``(i, t)`` holds a vertex index and a nontrivial
representative ``t`` of a left coset of ``A_i`` in ``G_i``; the apart holds
one element of each ``A_i``. Two facts drive the rewriting:

* ``A_w`` commutes with every ``G_v`` for ``v != w``, so a-parts slide right
  past foreign letters and collect at the end;
* ``G_v`` and ``G_w`` commute when ``v`` and ``w`` are adjacent, so the word
  is only defined up to swapping adjacent-vertex neighbours.

The stored word is reduced (no two same-vertex letters can be shuffled next
to each other) and is the lexicographically least member of its shuffle
class under the vertex order. Correctness of this normal form is checked
against the Coxeter-matrix oracle in :mod:`graphprod.coxeter`.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Iterable, Sequence

from .exceptions import GraphProdError
from .graphs import CliquePoset, SimpleGraph
from .groups import FiniteGroup, PresetSubgroup, Subgroup, parse_word
from .smith import invariant_factors


@dataclass(frozen=True)
class GPElement:
    word: tuple
    apart: tuple
    family: Any = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.word)

    def __mul__(self, other):
        return self.family.multiply(self, other)

    def inverse(self):
        return self.family.invert(self)

    @property
    def is_identity(self) -> bool:
        return not self.word and self.apart == self.family.identity.apart


class PairFamily:
    """A graph with a pair ``A_v <= G_v`` at every vertex.

    Parameters
    ----------
    graph : SimpleGraph
    groups : dict
        Vertex label -> :class:`FiniteGroup` or infinite preset.
    subgroups : dict, optional
        Vertex label -> subgroup of that vertex group (default trivial).
    """

    def __init__(self, graph: SimpleGraph, groups: dict, subgroups: dict | None = None):
        self.graph = graph
        subgroups = subgroups or {}
        missing = set(graph.vertices) - set(groups)
        if missing:
            raise ValueError(f"no group given for vertices {sorted(missing)}")
        self.groups = [groups[v] for v in graph.vertices]
        self.subgroups = []
        for v, G in zip(graph.vertices, self.groups):
            A = subgroups.get(v)
            if A is None:
                A = G.trivial_subgroup()
            if A.parent is not G:
                raise ValueError(f"subgroup at {v} does not belong to its vertex group")
            self.subgroups.append(A)
        self.n = len(graph)
        self.adj = graph.adj
        self.identity = GPElement((), tuple(G.identity for G in self.groups), self)
        self._split_cache = [dict() for _ in range(self.n)]
        self._poset = None

    def __repr__(self):
        body = ", ".join(f"{v}:({G.label},{A.label})" for v, G, A in
                         zip(self.graph.vertices, self.groups, self.subgroups))
        return f"PairFamily({body})"

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices

    @property
    def poset(self) -> CliquePoset:
        if self._poset is None:
            self._poset = CliquePoset(self.graph)
        return self._poset

    @property
    def is_finite(self) -> bool:
        return all(G.is_finite for G in self.groups)

    def coset_index(self, i: int):
        """``[G_i : A_i]``, or ``None`` when infinite."""
        A = self.subgroups[i]
        return A.index

    def complete_family(self) -> "PairFamily":
        g = self.graph.complete()
        return PairFamily(g, dict(zip(g.vertices, self.groups)), dict(zip(g.vertices, self.subgroups)))

    def restrict(self, labels: Iterable[str]) -> "PairFamily":
        sub = self.graph.full_subgraph(labels)
        pick = [self.graph.index[v] for v in sub.vertices]
        return PairFamily(sub, {v: self.groups[i] for v, i in zip(sub.vertices, pick)},
                          {v: self.subgroups[i] for v, i in zip(sub.vertices, pick)})

    # -- coset transversals ---------------------------------------------------

    def split(self, i: int, g):
        """Write ``g = t * a`` with ``t`` the chosen coset representative."""
        cache = self._split_cache[i]
        hit = cache.get(g)
        if hit is None:
            G, A = self.groups[i], self.subgroups[i]
            t = A.left_rep(g)
            hit = (t, G.mul(G.inv(t), g))
            cache[g] = hit
        return hit

    def transversal(self, i: int) -> list:
        """Coset representatives of ``A_i`` in ``G_i``, identity first."""
        G, A = self.groups[i], self.subgroups[i]
        if isinstance(A, PresetSubgroup):
            return A.coset_reps()
        return sorted({A.left_rep(g) for g in G.elements})

    # -- arithmetic -------------------------------------------------------------

    def _push(self, word: list, apart: list, i: int, g) -> None:
        G = self.groups[i]
        g = G.mul(apart[i], g)
        adj = self.adj[i]
        for pos in range(len(word) - 1, -1, -1):
            j, t = word[pos]
            if j == i:
                g = G.mul(t, g)
                del word[pos]
                break
            if not adj >> j & 1:
                break
        t, a = self.split(i, g)
        if t != G.identity:
            word.append((i, t))
        apart[i] = a

    def _canon(self, word: Sequence) -> tuple:
        rest = list(word)
        out = []
        adj = self.adj
        while rest:
            seen = 0
            best = None
            for pos, (j, _) in enumerate(rest):
                if not seen & ~adj[j] and (best is None or j < rest[best][0]):
                    best = pos
                seen |= 1 << j
            out.append(rest.pop(best))
        return tuple(out)

    def _check_letter(self, i: int, g):
        if g not in self.groups[i]:
            raise GraphProdError(f"{g!r} is not in the group at vertex {self.vertices[i]}")

    def _vertex(self, v) -> int:
        if isinstance(v, int):
            if not 0 <= v < self.n:
                raise GraphProdError(f"no vertex {v}")
            return v
        if v not in self.graph.index:
            raise GraphProdError(f"no vertex {v!r}")
        return self.graph.index[v]

    def normalize(self, raw: Iterable[tuple]) -> GPElement:
        """Normal form of a product of letters ``(vertex, element of G_vertex)``."""
        word: list = []
        apart = list(self.identity.apart)
        for v, g in raw:
            i = self._vertex(v)
            self._check_letter(i, g)
            self._push(word, apart, i, g)
        return GPElement(self._canon(word), tuple(apart), self)

    def _own(self, x: GPElement):
        if x.family is not self:
            raise GraphProdError("element belongs to a different family")

    def multiply(self, x: GPElement, y: GPElement) -> GPElement:
        self._own(x)
        self._own(y)
        word = list(x.word)
        apart = list(x.apart)
        for i, t in y.word:
            self._push(word, apart, i, t)
        for i, a in enumerate(y.apart):
            if a != self.groups[i].identity:
                self._push(word, apart, i, a)
        return GPElement(self._canon(word), tuple(apart), self)

    def times_letter(self, x: GPElement, i: int, g) -> GPElement:
        word = list(x.word)
        apart = list(x.apart)
        self._push(word, apart, i, g)
        return GPElement(self._canon(word), tuple(apart), self)

    def invert(self, x: GPElement) -> GPElement:
        self._own(x)
        raw = [(i, G.inv(a)) for i, (G, a) in enumerate(zip(self.groups, x.apart))]
        raw += [(i, self.groups[i].inv(t)) for i, t in reversed(x.word)]
        return self.normalize(raw)

    def letter(self, v, g) -> GPElement:
        return self.normalize([(v, g)])

    def project(self, x: GPElement) -> tuple:
        """Image in the direct product of the vertex groups (componentwise)."""
        comps = [G.identity for G in self.groups]
        for i, t in x.word:
            comps[i] = self.groups[i].mul(comps[i], t)
        return tuple(G.mul(c, a) for G, c, a in zip(self.groups, comps, x.apart))

    def product_element(self, comps: Sequence) -> GPElement:
        """A preimage of a tuple ``(g_v)`` under :meth:`project`."""
        return self.normalize(enumerate(comps))

    def in_clique_subgroup(self, x: GPElement, S: int) -> bool:
        """Membership in ``G_S`` (all of ``G_v`` for ``v`` in ``S``, ``A_v`` elsewhere)."""
        if S not in self.poset:
            raise GraphProdError(f"{self.graph.labels(S)} is not a clique")
        return all(S >> i & 1 for i, _ in x.word)

    # -- cosets of clique subgroups -------------------------------------------

    def coset_word(self, word: Sequence, S: int) -> tuple:
        """Canonical word for the coset ``g G_S``: trailing letters with
        vertex in ``S`` are deleted, then the remainder is put in shuffle-least
        order. The a-part never matters since ``G_S`` contains every ``A_v``."""
        kept = []
        later = 0
        adj = self.adj
        for j, t in reversed(word):
            if S >> j & 1 and not later & ~adj[j]:
                continue
            kept.append((j, t))
            later |= 1 << j
        kept.reverse()
        return self._canon(kept)

    def coset_key(self, x: GPElement, S: int) -> tuple:
        return (self.coset_word(x.word, S), S)

    def chamber(self, word: Sequence) -> GPElement:
        """The element with the given word and trivial a-part."""
        return GPElement(tuple(word), self.identity.apart, self)

    # -- generators and parsing ---------------------------------------------

    def generator_alphabet(self) -> list[tuple[str, int, Any]]:
        """``(symbol, vertex index, element)`` for every vertex-group generator,
        each extra generator of ``A_v``, and inverses of generators of infinite
        vertex groups."""
        out = []
        for i, (v, G, A) in enumerate(zip(self.vertices, self.groups, self.subgroups)):
            seen = set()
            for name, g in zip(G.names, G.generators):
                out.append((f"{v}.{name}", i, g))
                seen.add(g)
                if not G.is_finite and G.inv(g) != g:
                    out.append((f"{v}.{name}^-1", i, G.inv(g)))
                    seen.add(G.inv(g))
            for k, a in enumerate(A.generators):
                if a not in seen:
                    out.append((f"{v}.A{k}", i, a))
                    seen.add(a)
        return out

    def symbols(self) -> list[tuple[str, int, Any]]:
        return [(f"{v}.{name}", i, g) for i, (v, G) in enumerate(zip(self.vertices, self.groups))
                for name, g in zip(G.names, G.generators)]

    def parse(self, text: str) -> GPElement:
        """Element from a word such as ``"a.g^2 b.s"``; ``v.(0 1)`` style
        letters with cycle notation are also accepted, and so is the output
        of :meth:`format`."""
        raw = []
        # brackets mark the A-part in formatted output; it is a plain suffix
        for tok in _TOKEN.findall(text):
            if tok in ("e", "1"):
                continue
            if "." not in tok:
                raise GraphProdError(f"letter {tok!r} lacks a vertex prefix")
            v, rest = tok.split(".", 1)
            i = self._vertex(v)
            G = self.groups[i]
            try:
                if rest.startswith("("):
                    g = G.parse_element(rest)
                else:
                    g = G.evaluate(parse_word(rest))
            except ValueError as exc:
                raise GraphProdError(f"bad letter {tok!r}: {exc}") from None
            raw.append((i, g))
        return self.normalize(raw)

    def format(self, x: GPElement) -> str:
        parts = []
        for i, t in x.word:
            parts.append(self._format_letter(i, t))
        for i, a in enumerate(x.apart):
            if a != self.groups[i].identity:
                parts.append("[" + self._format_letter(i, a) + "]")
        return " ".join(parts) or "e"

    def _format_letter(self, i, g) -> str:
        G = self.groups[i]
        v = self.vertices[i]
        word = _syllables(G.word_of(g))
        return " ".join(f"{v}.{n}" if e == 1 else f"{v}.{n}^{e}" for n, e in word) or "e"

    def to_json(self, x: GPElement) -> dict:
        return {"word": [[self.vertices[i], _jsonable(t)] for i, t in x.word],
                "apart": [_jsonable(a) for a in x.apart],
                "text": self.format(x)}

    # -- enumeration ----------------------------------------------------------

    def ball(self, radius: int, alphabet=None) -> dict:
        """Normal forms reachable by words of length ``<= radius`` over the
        generator alphabet, mapped to their word length."""
        if alphabet is None:
            alphabet = self.generator_alphabet()
        dist = {self.identity: 0}
        frontier = [self.identity]
        for r in range(1, radius + 1):
            nxt = []
            for x in frontier:
                for _, i, g in alphabet:
                    y = self.times_letter(x, i, g)
                    if y not in dist:
                        dist[y] = r
                        nxt.append(y)
            frontier = nxt
        return dist

    def words_up_to(self, length: int, alphabet=None) -> list[tuple]:
        if alphabet is None:
            alphabet = self.generator_alphabet()
        out = [()]
        for n in range(1, length + 1):
            out.extend(product(range(len(alphabet)), repeat=n))
        return out

    def evaluate_indices(self, indices: Sequence[int], alphabet) -> GPElement:
        return self.normalize((alphabet[k][1], alphabet[k][2]) for k in indices)


_TOKEN = re.compile(r"[^\s\[\]*]+?\.(?:\([^)]*\))+|[^\s\[\]*]+")


def _jsonable(g):
    if isinstance(g, tuple):
        return [_jsonable(x) for x in g]
    return g


# ---------------------------------------------------------------------------
# module-level spellings of the family methods


def normalize(family: PairFamily, raw) -> GPElement:
    return family.normalize(raw)


def multiply(family: PairFamily, x: GPElement, y: GPElement) -> GPElement:
    return family.multiply(x, y)


def invert(family: PairFamily, x: GPElement) -> GPElement:
    return family.invert(x)


def project_to_product(family: PairFamily, x: GPElement) -> tuple:
    return family.project(x)


def in_clique_subgroup(family: PairFamily, x: GPElement, S: int) -> bool:
    return family.in_clique_subgroup(x, S)


# ---------------------------------------------------------------------------
# presentations


Word = tuple  # of (symbol, exponent)


@dataclass
class Presentation:
    """Generators, relators, and commutator relators ``[s, w]``.

    Relators are tuples of ``(symbol, exponent)`` syllables; each commutator
    is a pair ``(symbol, word)`` standing for ``s w s^-1 w^-1``.
    """

    generators: list
    relators: list = field(default_factory=list)
    commutators: list = field(default_factory=list)

    def all_relators(self) -> list[Word]:
        out = list(self.relators)
        for s, w in self.commutators:
            inv = tuple((n, -e) for n, e in reversed(w))
            out.append(_syllables([(s, 1)] + list(w) + [(s, -1)] + list(inv)))
        return out

    def to_text(self) -> str:
        lines = ["generators: " + " ".join(self.generators)]
        lines += [format_word(r) for r in self.relators]
        lines += [f"[{s},{format_word(w)}]" for s, w in self.commutators]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"generators": list(self.generators),
                "relators": [[[n, e] for n, e in r] for r in self.relators],
                "commutators": [[s, [[n, e] for n, e in w]] for s, w in self.commutators]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    def relation_rows(self) -> list[dict]:
        col = {g: k for k, g in enumerate(self.generators)}
        rows = []
        for r in self.relators:
            row: dict = {}
            for n, e in r:
                row[col[n]] = row.get(col[n], 0) + e
            rows.append(row)
        return rows


def format_word(word: Word) -> str:
    return " ".join(n if e == 1 else f"{n}^{e}" for n, e in word) or "e"


def _syllables(letters) -> Word:
    out: list = []
    for n, e in letters:
        if out and out[-1][0] == n:
            e += out.pop()[1]
            if e:
                out.append((n, e))
        elif e:
            out.append((n, e))
    return tuple(out)


def _free_reduce(letters: list, involutions=frozenset()) -> list:
    """Free and cyclic reduction; letters of involutions are written with
    exponent ``+1`` and cancel in pairs."""

    def cancels(a, b):
        return a[0] == b[0] and (a[0] in involutions or a[1] == -b[1])

    out: list = []
    for g, e in letters:
        x = (g, 1) if g in involutions else (g, e)
        if out and cancels(out[-1], x):
            out.pop()
        else:
            out.append(x)
    while len(out) > 1 and cancels(out[0], out[-1]):
        out = out[1:-1]
    return out


def _cyclic_canon(letters: list) -> tuple:
    n = len(letters)
    inv = [(g, -e) for g, e in reversed(letters)]
    forms = [w for w in (letters, inv) if sum(e for _, e in w) >= 0] or [letters]
    return min(tuple(w[k:] + w[:k]) for w in forms for k in range(n))


def finite_relators(G: FiniteGroup) -> list[Word]:
    """Relators of a finite permutation group read off its Cayley graph:
    one per non-tree edge of the breadth-first spanning tree, freely and
    cyclically reduced, duplicates (up to rotation and inversion) removed."""
    els = G.elements
    invol = frozenset(i for i, s in enumerate(G.generators) if G.mul(s, s) == G.identity)
    rels = {((i, 2),) for i in sorted(invol)}
    for g in els:
        wg = G.gen_indices_of(g)
        for k, s in enumerate(G.generators):
            h = G.mul(g, s)
            wh = G.gen_indices_of(h)
            letters = [(i, 1) for i in wg] + [(k, 1)] + [(i, -1) for i in reversed(wh)]
            red = _free_reduce(letters, invol)
            if sum(e for _, e in red) < 0:
                red = [(i, -e) for i, e in reversed(red)]
            if red:
                rels.add(_cyclic_canon(red))
    out = []
    for r in sorted(rels, key=lambda r: (len(r), r)):
        out.append(_syllables((G.names[i], e) for i, e in r))
    return out


def vertex_relators(G) -> list[Word]:
    if isinstance(G, FiniteGroup):
        return finite_relators(G)
    if G.kind == "Z":
        return []
    return [(("s", 2),), (("t", 2),)]


def presentation(family: PairFamily) -> Presentation:
    """Presentation of the graph product: vertex relators plus the commutator
    rule (generators of adjacent vertices commute; every generator commutes
    with the subgroup generators of every other vertex)."""
    gens = []
    rels = []
    for v, G in zip(family.vertices, family.groups):
        gens += [f"{v}.{n}" for n in G.names]
        rels += [tuple((f"{v}.{n}", e) for n, e in r) for r in vertex_relators(G)]
    sigma = []
    for v, G, A in zip(family.vertices, family.groups, family.subgroups):
        words = []
        for a in A.generators:
            w = tuple((f"{v}.{n}", e) for n, e in _syllables(G.word_of(a)))
            if w and w not in words:
                words.append(w)
        sigma.append(words)
    comms = []
    seen = set()

    def add(s, w):
        key = frozenset([s, w[0][0]]) if len(w) == 1 and w[0][1] == 1 else (s, w)
        if key not in seen:
            seen.add(key)
            comms.append((s, w))

    n = family.n
    for i in range(n):
        Si = [f"{family.vertices[i]}.{nm}" for nm in family.groups[i].names]
        for j in range(n):
            if i == j:
                continue
            Sj = [f"{family.vertices[j]}.{nm}" for nm in family.groups[j].names]
            if i < j and family.graph.adjacent(i, j):
                for s in Si:
                    for t in Sj:
                        add(s, ((t, 1),))
            for s in Si:
                for w in sigma[j]:
                    add(s, w)
    return Presentation(gens, rels, comms)


def abelianization(pres: Presentation) -> list[int]:
    """Invariant factors of the abelianized presentation (``0`` = free Z)."""
    return invariant_factors(pres.relation_rows(), len(pres.generators))


def _derived_subgroup(G: FiniteGroup) -> frozenset:
    gens = []
    for a in G.generators:
        for b in G.generators:
            gens.append(G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))))
    # normal closure
    while True:
        D = Subgroup(G, gens)
        els = D.element_set
        extra = [G.mul(G.mul(s, d), G.inv(s)) for s in G.generators for d in gens]
        extra = [x for x in extra if x not in els]
        if not extra:
            return els
        gens.append(extra[0])


def word_engine_abelianization(family: PairFamily) -> list[int]:
    """Abelianization computed from group arithmetic rather than relators.

    For each vertex, the exponent vectors ``n`` with
    ``prod s_k^{n_k}`` landing in the derived subgroup of ``G_v`` are found
    by evaluating the products in the graph product and projecting to the
    vertex factor. The relations of different vertices are independent
    since every cross relation is a commutator.
    """
    rows = []
    col = 0
    ncols = 0
    for i, G in enumerate(family.groups):
        k = len(G.generators)
        ncols += k
        if not G.is_finite:
            if G.kind == "Dinfty":
                rows += [{col: 2}, {col + 1: 2}]
            col += k
            continue
        D = _derived_subgroup(G)
        orders = [G.element_order(s) for s in G.generators]
        for j, o in enumerate(orders):
            rows.append({col + j: o})
        for vec in product(*(range(o) for o in orders)):
            if not any(vec):
                continue
            x = family.normalize((i, G.power(s, e)) for s, e in zip(G.generators, vec))
            if family.project(x)[i] in D:
                rows.append({col + j: e for j, e in enumerate(vec) if e})
        col += k
    return invariant_factors(rows, ncols)
