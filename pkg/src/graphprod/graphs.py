"""Finite simple graphs, their clique posets, and simplicial complexes."""
from __future__ import annotations

import json
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .exceptions import CapExceeded

VERTEX_CAP = 10


class SimpleGraph:
    """Graph with an ordered vertex list; the order fixes every canonical form."""

    def __init__(self, vertices: Sequence[str], edges: Iterable[Sequence[str]] = ()):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        self.index = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        self.adj = [0] * n
        es = set()
        for e in edges:
            u, w = (str(x) for x in e)
            if u not in self.index or w not in self.index:
                raise ValueError(f"edge {u}-{w} uses an unknown vertex")
            if u == w:
                raise ValueError(f"loop at {u}")
            i, j = sorted((self.index[u], self.index[w]))
            es.add((i, j))
            self.adj[i] |= 1 << j
            self.adj[j] |= 1 << i
        self.edge_indices = tuple(sorted(es))

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return (isinstance(other, SimpleGraph) and self.vertices == other.vertices
                and self.edge_indices == other.edge_indices)

    def __hash__(self):
        return hash((self.vertices, self.edge_indices))

    def __repr__(self):
        return f"SimpleGraph({list(self.vertices)}, {self.edges})"

    @property
    def edges(self) -> list[tuple[str, str]]:
        return [(self.vertices[i], self.vertices[j]) for i, j in self.edge_indices]

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def is_clique(self, mask: int) -> bool:
        for i in range(len(self)):
            if mask >> i & 1 and (mask & ~(1 << i)) & ~self.adj[i]:
                return False
        return True

    def mask(self, labels: Iterable[str]) -> int:
        m = 0
        for v in labels:
            m |= 1 << self.index[v]
        return m

    def labels(self, mask: int) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def complete(self) -> "SimpleGraph":
        return SimpleGraph(self.vertices, combinations(self.vertices, 2))

    def full_subgraph(self, labels: Iterable[str]) -> "SimpleGraph":
        keep = [v for v in self.vertices if v in set(labels)]
        return SimpleGraph(keep, [e for e in self.edges if e[0] in keep and e[1] in keep])

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f'  "{v}";' for v in self.vertices]
        lines += [f'  "{u}" -- "{w}";' for u, w in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def cycle(cls, n: int, prefix: str = "v") -> "SimpleGraph":
        vs = [f"{prefix}{i}" for i in range(n)]
        return cls(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])

    @classmethod
    def path(cls, n: int, prefix: str = "v") -> "SimpleGraph":
        vs = [f"{prefix}{i}" for i in range(n)]
        return cls(vs, [(vs[i], vs[i + 1]) for i in range(n - 1)])

    @classmethod
    def empty(cls, n: int, prefix: str = "v") -> "SimpleGraph":
        return cls([f"{prefix}{i}" for i in range(n)])

    @classmethod
    def complete_on(cls, n: int, prefix: str = "v") -> "SimpleGraph":
        vs = [f"{prefix}{i}" for i in range(n)]
        return cls(vs, combinations(vs, 2))


def all_cliques(adj: Sequence[int]) -> list[int]:
    """Every clique (as a bitmask) of the graph with adjacency masks ``adj``,
    the empty clique included. Cliques are grown by adding only
    higher-indexed common neighbours, so each is produced once."""
    out = [0]

    def grow(clique: int, cand: int):
        while cand:
            low = cand & -cand
            i = low.bit_length() - 1
            cand &= ~low
            new = clique | low
            out.append(new)
            grow(new, cand & adj[i])

    grow(0, (1 << len(adj)) - 1)
    return out


def maximal_cliques(adj: Sequence[int]) -> list[int]:
    """Bron--Kerbosch with pivoting over bitmask adjacency."""
    out = []

    def bk(r: int, p: int, x: int):
        if not p and not x:
            out.append(r)
            return
        pu = p | x
        pivot, best = -1, -1
        while pu:
            low = pu & -pu
            u = low.bit_length() - 1
            pu &= ~low
            score = _popcount(p & adj[u])
            if score > best:
                pivot, best = u, score
        cand = p & ~adj[pivot]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand &= ~low
            bk(r | low, p & adj[v], x & adj[v])
            p &= ~low
            x |= low

    if adj:
        bk(0, (1 << len(adj)) - 1, 0)
    return out


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _bits(m: int) -> tuple[int, ...]:
    return tuple(i for i in range(m.bit_length()) if m >> i & 1)


class CliquePoset:
    """All cliques of a graph ordered by inclusion, listed by (size, bits)."""

    def __init__(self, graph: SimpleGraph, cap: int = VERTEX_CAP):
        if len(graph) > cap:
            raise CapExceeded(f"graph has {len(graph)} vertices, cap is {cap}")
        self.graph = graph
        masks = all_cliques(graph.adj)
        self.elements = tuple(sorted(masks, key=lambda m: (_popcount(m), _bits(m))))
        self.position = {m: i for i, m in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __contains__(self, mask):
        return mask in self.position

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    def chains(self) -> list[tuple[int, ...]]:
        """All nonempty chains, as tuples of element masks ordered upward."""
        out = []
        up = {a: [b for b in self.elements if b != a and self.leq(a, b)] for a in self.elements}

        def extend(chain):
            out.append(chain)
            for b in up[chain[-1]]:
                extend(chain + (b,))

        for a in self.elements:
            extend((a,))
        return out

    def label(self, mask: int) -> str:
        return "{" + ",".join(self.graph.labels(mask)) + "}"


def clique_poset(graph: SimpleGraph, cap: int = VERTEX_CAP) -> CliquePoset:
    return CliquePoset(graph, cap)


class SimComplex:
    """Finite abstract simplicial complex; simplices are frozensets of vertex
    indices and the family is closed under taking faces."""

    def __init__(self, vertices: Sequence[Hashable], simplices: Iterable[Iterable[int]] = (),
                 labels: Sequence[str] | None = None, closed: bool = False):
        self.vertices = list(vertices)
        self.labels = list(labels) if labels is not None else [str(v) for v in self.vertices]
        faces = set(frozenset([i]) for i in range(len(self.vertices)))
        for s in simplices:
            s = frozenset(s)
            if closed:
                faces.add(s)
            else:
                items = sorted(s)
                for k in range(1, len(items) + 1):
                    faces.update(frozenset(c) for c in combinations(items, k))
        self.simplices = faces

    def __len__(self):
        return len(self.vertices)

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def f_vector(self) -> list[int]:
        f = [0] * (self.dimension + 1)
        for s in self.simplices:
            f[len(s) - 1] += 1
        return f

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * n for i, n in enumerate(self.f_vector()))

    def edges(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(s)) for s in self.simplices if len(s) == 2)

    def adjacency(self) -> list[int]:
        adj = [0] * len(self.vertices)
        for i, j in self.edges():
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj

    def maximal_simplices(self) -> list[tuple[int, ...]]:
        simp = sorted(self.simplices, key=len, reverse=True)
        out: list[frozenset] = []
        for s in simp:
            if not any(s < m for m in out):
                out.append(s)
        return sorted(tuple(sorted(s)) for s in out)

    def full_subcomplex(self, keep: Iterable[int]) -> "SimComplex":
        keep = sorted(set(keep))
        new = {old: i for i, old in enumerate(keep)}
        simp = [frozenset(new[i] for i in s) for s in self.simplices if all(i in new for i in s)]
        return SimComplex([self.vertices[i] for i in keep], simp,
                          labels=[self.labels[i] for i in keep], closed=True)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.adjacency()
        seen, stack = 1, [0]
        while stack:
            i = stack.pop()
            new = adj[i] & ~seen
            seen |= new
            while new:
                low = new & -new
                stack.append(low.bit_length() - 1)
                new &= ~low
        return seen == (1 << len(self.vertices)) - 1

    def to_json(self) -> dict:
        return {"vertices": self.labels,
                "maximal_simplices": [list(s) for s in self.maximal_simplices()],
                "f_vector": self.f_vector()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    def to_dot(self, name: str = "K") -> str:
        lines = [f"graph {name} {{"]
        lines += [f'  n{i} [label="{lab}"];' for i, lab in enumerate(self.labels)]
        lines += [f"  n{i} -- n{j};" for i, j in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def order_complex(elements: Sequence[Hashable], leq, labels=None) -> SimComplex:
    """Flag complex of chains of a finite poset given by ``leq(a, b)``."""
    n = len(elements)
    up = [[j for j in range(n) if j != i and leq(elements[i], elements[j])] for i in range(n)]
    maximal = []

    def extend(chain):
        nxt = up[chain[-1]]
        if not nxt:
            maximal.append(chain)
        for j in nxt:
            extend(chain + (j,))

    for i in range(n):
        if not any(leq(elements[j], elements[i]) for j in range(n) if j != i):
            extend((i,))
    return SimComplex(elements, maximal, labels=labels)


def poset_complex(poset: CliquePoset) -> SimComplex:
    """The realization ``P`` of a clique poset."""
    return order_complex(poset.elements, poset.leq, labels=[poset.label(m) for m in poset.elements])


def sub_complex_containing(poset: CliquePoset, P: SimComplex, S: int) -> SimComplex:
    """Full subcomplex of ``P`` on the cliques containing clique ``S``."""
    if S not in poset:
        raise ValueError(f"{bin(S)} is not a clique")
    keep = [i for i, m in enumerate(P.vertices) if S & ~m == 0]
    return P.full_subcomplex(keep)


def is_flag(K: SimComplex) -> bool:
    """True iff every clique of the 1-skeleton spans a simplex."""
    simp = K.simplices
    for mask in maximal_cliques(K.adjacency()):
        face = frozenset(i for i in range(len(K.vertices)) if mask >> i & 1)
        if face not in simp:
            return False
    return True
