"""Vertex groups: finite permutation groups, their subgroups and coset spaces,
plus symbolic infinite cyclic and infinite dihedral groups.

Permutations are tuples of images on ``0..degree-1``. Products compose
right-to-left, ``mul(p, q)[x] == p[q[x]]``, so ``p`` acts on the left of a
point as ``p[x]``.

All finite enumeration is capped (``ORDER_CAP`` elements, ``ISO_CAP``
points/elements for isomorphism search); exceeding a cap raises
:class:`~graphprod.exceptions.CapExceeded`.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import Callable, Hashable, Sequence

from .exceptions import CapExceeded, GraphProdError

ORDER_CAP = 10**6
ISO_CAP = 12

Perm = tuple


# ---------------------------------------------------------------------------
# permutation literals

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse cycle notation such as ``"(0 1 2)(3 4)"`` into an image tuple."""
    text = text.strip()
    images = list(range(degree))
    if text in ("", "()", "e", "1", "id"):
        return tuple(images)
    if _CYCLE_RE.sub("", text).strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    seen = set()
    for body in _CYCLE_RE.findall(text):
        pts = [int(tok) for tok in re.split(r"[\s,]+", body.strip()) if tok]
        for x in pts:
            if not 0 <= x < degree:
                raise ValueError(f"point {x} outside 0..{degree - 1} in {text!r}")
            if x in seen:
                raise ValueError(f"point {x} repeated in {text!r}")
            seen.add(x)
        for i, x in enumerate(pts):
            images[x] = pts[(i + 1) % len(pts)]
    return tuple(images)


def format_cycles(p: Perm) -> str:
    seen = set()
    out = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = p[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p[x]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def _check_perm(p, degree: int) -> Perm:
    p = tuple(p)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise ValueError(f"not a permutation of 0..{degree - 1}: {p}")
    return p


def perm_mul(p: Perm, q: Perm) -> Perm:
    return tuple(p[x] for x in q)


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


_TOKEN_RE = re.compile(r"^([A-Za-z_][\w.]*?)(?:\^(-?\d+))?$")


def parse_word(text: str) -> list[tuple[str, int]]:
    """Split ``"s t^-1 r^2"`` (or ``"s*t^-1*r^2"``) into ``(name, exponent)``."""
    text = text.strip()
    if text in ("", "e", "1"):
        return []
    word = []
    for tok in re.split(r"[\s*]+", text):
        if not tok:
            continue
        m = _TOKEN_RE.match(tok)
        if not m:
            raise ValueError(f"malformed word token {tok!r}")
        word.append((m.group(1), int(m.group(2) or 1)))
    return word


class _GroupOps:
    """Shared helpers for anything with identity/mul/inv/generators/names."""

    identity: Hashable
    generators: tuple
    names: tuple

    def power(self, g, n: int):
        if n < 0:
            g, n = self.inv(g), -n
        out = self.identity
        base = g
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def evaluate(self, word: Sequence[tuple[str, int]]):
        lookup = dict(zip(self.names, self.generators))
        out = self.identity
        for name, exp in word:
            if name not in lookup:
                raise ValueError(f"{self.label}: unknown generator {name!r}")
            out = self.mul(out, self.power(lookup[name], exp))
        return out


# ---------------------------------------------------------------------------
# finite groups


class FiniteGroup(_GroupOps):
    """A permutation group given by generators.

    Elements are enumerated lazily by closure; ``cap`` bounds the order.
    """

    is_finite = True

    def __init__(self, degree: int, generators: Sequence[Sequence[int]] = (),
                 names: Sequence[str] | None = None, label: str | None = None,
                 cap: int = ORDER_CAP):
        if degree < 1:
            raise ValueError("degree must be positive")
        self.degree = degree
        self.generators = tuple(_check_perm(g, degree) for g in generators)
        if names is None:
            names = [f"g{i}" for i in range(len(self.generators))]
        self.names = tuple(names)
        if len(self.names) != len(self.generators) or len(set(self.names)) != len(self.names):
            raise ValueError("need one distinct name per generator")
        self.label = label or f"<{', '.join(map(format_cycles, self.generators))}>"
        self.cap = cap
        self.identity = tuple(range(degree))
        self._words = None

    def __repr__(self):
        return f"FiniteGroup({self.label})"

    mul = staticmethod(perm_mul)
    inv = staticmethod(perm_inv)

    def _enumerate(self):
        words = {self.identity: ()}
        queue = deque([self.identity])
        while queue:
            g = queue.popleft()
            for i, s in enumerate(self.generators):
                h = perm_mul(g, s)
                if h not in words:
                    words[h] = words[g] + (i,)
                    if len(words) > self.cap:
                        raise CapExceeded(f"{self.label}: order exceeds cap {self.cap}")
                    queue.append(h)
        self._words = words

    @property
    def elements(self) -> tuple:
        """All elements, sorted by image tuple (identity first)."""
        if self._words is None:
            self._enumerate()
        if not hasattr(self, "_sorted"):
            self._sorted = tuple(sorted(self._words))
        return self._sorted

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        self.elements
        return tuple(g) in self._words

    contains = __contains__

    def word_of(self, g) -> list[tuple[str, int]]:
        """A shortest positive word for ``g`` over the generators (BFS order)."""
        self.elements
        idx = self._words[tuple(g)]
        return [(self.names[i], 1) for i in idx]

    def gen_indices_of(self, g) -> tuple[int, ...]:
        self.elements
        return self._words[tuple(g)]

    def parse_element(self, literal: str):
        literal = literal.strip()
        if literal.startswith("("):
            g = parse_cycles(literal, self.degree)
        else:
            g = self.evaluate(parse_word(literal))
        if g not in self:
            raise ValueError(f"{literal!r} is not an element of {self.label}")
        return g

    def element_order(self, g) -> int:
        n, x = 1, g
        while x != self.identity:
            x = perm_mul(x, g)
            n += 1
        return n

    def subgroup(self, generators=()) -> "Subgroup":
        return Subgroup(self, generators)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, ())

    def whole(self) -> "Subgroup":
        return Subgroup(self, self.generators)

    def as_subgroup(self) -> "Subgroup":
        return self.whole()


class Subgroup(FiniteGroup):
    """Subgroup of a :class:`FiniteGroup` generated by parent elements."""

    def __init__(self, parent: FiniteGroup, generators=(), names=None, label=None):
        gens = [tuple(g) for g in generators]
        for g in gens:
            if g not in parent:
                raise ValueError(f"{format_cycles(g)} is not in {parent.label}")
        if label is None:
            label = f"<{', '.join(map(format_cycles, gens))}> in {parent.label}"
        super().__init__(parent.degree, gens, names=names, label=label, cap=parent.cap)
        self.parent = parent

    def __repr__(self):
        return f"Subgroup({self.label})"

    @property
    def element_set(self) -> frozenset:
        if not hasattr(self, "_set"):
            self._set = frozenset(self.elements)
        return self._set

    def left_rep(self, g) -> Perm:
        """Least element of the left coset ``g * self``."""
        return min(perm_mul(g, a) for a in self.elements)

    def right_rep(self, g) -> Perm:
        """Least element of the right coset ``self * g``."""
        return min(perm_mul(a, g) for a in self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def is_normal(self) -> bool:
        s = self.element_set
        return all(perm_mul(perm_mul(g, a), perm_inv(g)) in s
                   for g in self.parent.generators for a in self.generators)


def make_group(degree: int, generators: Sequence, names=None, label=None,
               cap: int = ORDER_CAP) -> FiniteGroup:
    """Build a permutation group; generators may be image tuples or cycle strings."""
    gens = [parse_cycles(g, degree) if isinstance(g, str) else tuple(g) for g in generators]
    G = FiniteGroup(degree, gens, names=names, label=label, cap=cap)
    G.elements
    return G


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    if n == 1:
        return FiniteGroup(1, [], label="Z_1")
    return FiniteGroup(n, [tuple((i + 1) % n for i in range(n))], names=["g"], label=f"Z_{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n`` generated by two reflections ``s``, ``t``
    of the ``n``-gon, with ``s*t`` a rotation of order ``n``."""
    if n < 3:
        raise ValueError("dihedral group needs n >= 3 (use 'klein' for n = 2)")
    s = tuple((-x) % n for x in range(n))
    t = tuple((1 - x) % n for x in range(n))
    return FiniteGroup(n, [s, t], names=["s", "t"], label=f"D_{n}")


def symmetric(n: int) -> FiniteGroup:
    """Symmetric group with Coxeter generators ``s1..s{n-1}`` (``s_i = (i-1 i)``)."""
    if n < 1:
        raise ValueError("symmetric group needs n >= 1")
    gens = []
    for i in range(1, n):
        p = list(range(n))
        p[i - 1], p[i] = p[i], p[i - 1]
        gens.append(tuple(p))
    return FiniteGroup(n, gens, names=[f"s{i}" for i in range(1, n)], label=f"S_{n}")


def klein() -> FiniteGroup:
    """Z_2 x Z_2 acting regularly on four points."""
    return FiniteGroup(4, [(1, 0, 3, 2), (2, 3, 0, 1)], names=["a", "b"], label="Z_2xZ_2")


# ---------------------------------------------------------------------------
# coset spaces, cores, actions


class CosetSpace:
    """Left cosets ``G/A`` with canonical least representatives.

    ``points[0]`` is the identity coset ``A`` itself.
    """

    def __init__(self, G: FiniteGroup, A: Subgroup):
        if any(a not in G for a in A.generators):
            raise ValueError(f"{A.label} is not contained in {G.label}")
        self.parent = G
        self.subgroup = A
        reps = {A.left_rep(g) for g in G.elements}
        self.points = tuple(sorted(reps))
        self._index = {r: i for i, r in enumerate(self.points)}

    def __len__(self):
        return len(self.points)

    def point_of(self, g) -> int:
        return self._index[self.subgroup.left_rep(g)]

    def act(self, g, i: int) -> int:
        return self.point_of(perm_mul(g, self.points[i]))

    def permutation(self, g) -> Perm:
        """The permutation of coset indices induced by ``g``."""
        return tuple(self.act(g, i) for i in range(len(self.points)))


def coset_space(G: FiniteGroup, A: Subgroup) -> CosetSpace:
    return CosetSpace(G, A)


def core(G: FiniteGroup, A: Subgroup) -> Subgroup:
    """Largest normal subgroup of ``G`` contained in ``A``."""
    if any(a not in G for a in A.generators):
        raise ValueError(f"{A.label} is not contained in {G.label}")
    keep = set(A.elements)
    for g in G.elements:
        gi = perm_inv(g)
        keep = {a for a in keep if perm_mul(perm_mul(gi, a), g) in A.element_set}
    gens = sorted(keep)
    # a generating set: greedily add elements not yet generated
    chosen: list = []
    span = {G.identity}
    for x in gens:
        if x not in span:
            chosen.append(x)
            span = set(Subgroup(G, chosen).elements)
    return Subgroup(G, chosen, label=f"core({A.label})")


@dataclass(frozen=True)
class Action:
    """A finite group acting on ``size`` points via ``act(g, x)``."""

    group: FiniteGroup
    size: int
    act: Callable

    def permutation(self, g) -> Perm:
        return tuple(self.act(g, x) for x in range(self.size))

    def orbits(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for x in range(self.size):
            if x in seen:
                continue
            orb = {self.act(g, x) for g in self.group.elements}
            seen |= orb
            out.append(tuple(sorted(orb)))
        return out


def coset_action(H: FiniteGroup, space: CosetSpace) -> Action:
    """Restrict the left action of ``space.parent`` on its cosets to ``H``."""
    return Action(H, len(space), space.act)


@dataclass(frozen=True)
class ActionIso:
    """Candidate equivariant isomorphism: ``psi`` on generators of the acting
    group, ``phi`` a point bijection given as a tuple of images."""

    psi: tuple
    phi: tuple


def _extend_hom(H: FiniteGroup, Hs: FiniteGroup, psi_gens) -> dict | str:
    """Extend generator images to all of ``H``; return a table or a reason."""
    if len(psi_gens) != len(H.generators):
        return "psi must give one image per generator"
    for img in psi_gens:
        if tuple(img) not in Hs:
            return f"psi image {format_cycles(img)} not in target group"
    table = {H.identity: Hs.identity}
    queue = deque([H.identity])
    while queue:
        g = queue.popleft()
        for s, img in zip(H.generators, psi_gens):
            h = H.mul(g, s)
            val = Hs.mul(table[g], tuple(img))
            if h in table:
                if table[h] != val:
                    return f"psi is not a homomorphism (conflict at {format_cycles(h)})"
            else:
                table[h] = val
                queue.append(h)
    return table


def extend_homomorphism(H: FiniteGroup, Hs: FiniteGroup, psi_gens) -> dict:
    table = _extend_hom(H, Hs, psi_gens)
    if isinstance(table, str):
        raise GraphProdError(table)
    return table


def check_action_iso(action: Action, action_star: Action, iso: ActionIso) -> tuple[bool, str | None]:
    """Exhaustively check that ``iso`` is an equivariant isomorphism.

    Returns ``(ok, first_violation)``.
    """
    H, Hs = action.group, action_star.group
    if action.size != action_star.size:
        return False, f"point sets differ in size ({action.size} vs {action_star.size})"
    table = _extend_hom(H, Hs, iso.psi)
    if isinstance(table, str):
        return False, table
    if len(set(table.values())) != len(table) or len(table) != Hs.order:
        return False, "psi is not a bijection onto the target group"
    phi = tuple(iso.phi)
    if sorted(phi) != list(range(action.size)):
        return False, "phi is not a bijection of points"
    for s, img in zip(H.generators, iso.psi):
        for x in range(action.size):
            if phi[action.act(s, x)] != action_star.act(tuple(img), phi[x]):
                return False, f"equivariance fails at generator {format_cycles(s)}, point {x}"
    return True, None


def find_action_iso(action: Action, action_star: Action, cap: int = ISO_CAP) -> ActionIso | None:
    """Backtracking search for an equivariant isomorphism, or ``None``."""
    H, Hs = action.group, action_star.group
    if action.size != action_star.size or H.order != Hs.order:
        return None
    if action.size > cap or H.order > cap:
        raise CapExceeded(f"isomorphism search limited to {cap} points/elements")
    n = action.size
    orders = [H.element_order(s) for s in H.generators]
    candidates = [[y for y in Hs.elements if Hs.element_order(y) == o] for o in orders]
    orbit_reps = [orb[0] for orb in action.orbits()]

    def extend_phi(psi, table):
        phi = [None] * n
        used = set()

        def place(k):
            if k == len(orbit_reps):
                return True
            x0 = orbit_reps[k]
            for y0 in range(n):
                if y0 in used:
                    continue
                assigned = {}
                ok = True
                for h, hs in table.items():
                    x, y = action.act(h, x0), action_star.act(hs, y0)
                    if assigned.get(x, y) != y or y in used:
                        ok = False
                        break
                    assigned[x] = y
                if ok and len(set(assigned.values())) == len(assigned):
                    for x, y in assigned.items():
                        phi[x] = y
                    used.update(assigned.values())
                    if place(k + 1):
                        return True
                    used.difference_update(assigned.values())
                    for x in assigned:
                        phi[x] = None
            return False

        return tuple(phi) if place(0) else None

    for psi in product(*candidates):
        table = _extend_hom(H, Hs, psi)
        if isinstance(table, str) or len(set(table.values())) != len(table) \
                or len(table) != Hs.order:
            continue
        phi = extend_phi(psi, table)
        if phi is not None:
            return ActionIso(tuple(psi), phi)
    return None


# ---------------------------------------------------------------------------
# infinite presets


class InfinitePreset(_GroupOps):
    """Base for the symbolic infinite groups ``Z`` and ``D_inf``."""

    is_finite = False
    order = None
    kind: str

    def __repr__(self):
        return self.label

    def __contains__(self, g):
        return self._valid(g)

    contains = __contains__

    def parse_element(self, literal: str):
        return self.evaluate(parse_word(literal))

    def subgroup(self, generators=()) -> "PresetSubgroup":
        return PresetSubgroup(self, generators)

    def trivial_subgroup(self):
        return PresetSubgroup(self, ())

    def whole(self):
        return PresetSubgroup(self, self.generators)

    def word_of(self, g) -> list[tuple[str, int]]:
        raise NotImplementedError


class InfiniteCyclic(InfinitePreset):
    """Z written additively as integers, generated by ``x = 1``."""

    kind = "Z"
    label = "Z"
    identity = 0
    generators = (1,)
    names = ("x",)

    @staticmethod
    def mul(a, b):
        return a + b

    @staticmethod
    def inv(a):
        return -a

    @staticmethod
    def _valid(g):
        return isinstance(g, int)

    def word_of(self, g):
        return [("x", g)] if g else []


class InfiniteDihedral(InfinitePreset):
    """D_inf as affine maps ``z -> (-1)^e z + k`` of Z, encoded ``(k, e)``.

    ``s = (0, 1)`` and ``t = (1, 1)`` are the reflections in ``0`` and ``1/2``;
    ``s*t = (-1, 0)`` is the unit translation to the left.
    """

    kind = "Dinfty"
    label = "D_inf"
    identity = (0, 0)
    generators = ((0, 1), (1, 1))
    names = ("s", "t")

    @staticmethod
    def mul(x, y):
        (k1, e1), (k2, e2) = x, y
        return (k1 - k2 if e1 else k1 + k2, e1 ^ e2)

    @staticmethod
    def inv(x):
        k, e = x
        return (k, 1) if e else (-k, 0)

    @staticmethod
    def _valid(g):
        return isinstance(g, tuple) and len(g) == 2 and g[1] in (0, 1)

    def word_of(self, g):
        k, e = g
        word = []
        if k < 0:
            word += [("s", 1), ("t", 1)] * (-k)
        elif k > 0:
            word += [("t", 1), ("s", 1)] * k
        if e:
            word.append(("s", 1))
        return word


class PresetSubgroup:
    """Subgroup of ``Z`` or ``D_inf`` given by generators.

    Every subgroup of these groups is described by a translation modulus ``d``
    (``d = 0``: no nontrivial translations) and, in ``D_inf``, an optional
    reflection class ``c``: reflections ``(k, 1)`` belong iff ``k = c mod d``.
    """

    is_finite = False

    def __init__(self, parent: InfinitePreset, generators=()):
        self.parent = parent
        self.generators = tuple(generators)
        for g in self.generators:
            if g not in parent:
                raise ValueError(f"{g!r} is not an element of {parent.label}")
        if parent.kind == "Z":
            d = 0
            for g in self.generators:
                d = gcd(d, g)
            self.d, self.c = d, None
        else:
            trans = [k for k, e in self.generators if not e]
            refl = [k for k, e in self.generators if e]
            d = 0
            for k in trans:
                d = gcd(d, k)
            for k in refl[1:]:
                d = gcd(d, k - refl[0])
            self.d = d
            self.c = None if not refl else (refl[0] % d if d else refl[0])
        self.label = f"<{', '.join(map(str, self.generators))}> in {parent.label}"

    def __repr__(self):
        return f"PresetSubgroup({self.label})"

    @property
    def identity(self):
        return self.parent.identity

    def mul(self, a, b):
        return self.parent.mul(a, b)

    def inv(self, a):
        return self.parent.inv(a)

    def _mod(self, k):
        return k % self.d if self.d else k

    def contains(self, g) -> bool:
        if self.parent.kind == "Z":
            return g % self.d == 0 if self.d else g == 0
        k, e = g
        if not e:
            return self._mod(k) == 0
        return self.c is not None and self._mod(k - self.c) == 0

    __contains__ = contains

    def left_rep(self, g):
        if self.parent.kind == "Z":
            return self._mod(g)
        k, e = g
        if self.c is None:
            return (self._mod(k), e)
        return (self._mod(k - self.c), 0) if e else (self._mod(k), 0)

    def right_rep(self, g):
        if self.parent.kind == "Z":
            return self._mod(g)
        k, e = g
        if self.c is None:
            return (self._mod(k), e)
        return (self._mod(self.c - k), 0) if e else (self._mod(k), 0)

    @property
    def index(self):
        if not self.d:
            return None
        if self.parent.kind == "Z":
            return self.d
        return self.d if self.c is not None else 2 * self.d

    @property
    def is_trivial(self) -> bool:
        return self.d == 0 and self.c is None

    @property
    def order(self):
        if self.d:
            return None
        return 1 if self.c is None else 2

    def coset_reps(self) -> list:
        """Left coset representatives, identity first (finite index only)."""
        if self.index is None:
            raise CapExceeded(f"{self.label} has infinite index")
        if self.parent.kind == "Z":
            return list(range(self.d))
        reps = [(k, 0) for k in range(self.d)]
        if self.c is None:
            reps += [(k, 1) for k in range(self.d)]
        return reps


def preset(spec: str):
    """Group from a preset literal: ``cyclic n``, ``dihedral n``,
    ``symmetric n``, ``klein``, ``Z`` or ``Dinfty``."""
    parts = spec.split()
    if not parts:
        raise ValueError("empty group literal")
    name = parts[0].lower()
    if spec.strip() == "Z":
        return InfiniteCyclic()
    if name == "dinfty" and len(parts) == 1:
        return InfiniteDihedral()
    if name == "klein" and len(parts) == 1:
        return klein()
    if len(parts) != 2 or not parts[1].isdigit():
        raise ValueError(f"unknown group literal {spec!r}")
    n = int(parts[1])
    builders = {"cyclic": cyclic, "dihedral": dihedral, "symmetric": symmetric}
    if name not in builders:
        raise ValueError(f"unknown group literal {spec!r}")
    return builders[name](n)
