"""Invariant factors of integer relation matrices.

Relation matrices coming from presentations of fundamental groups are large,
sparse and mostly +-1, so unit pivots are eliminated sparsely first and only
the small remainder goes through a dense Smith normal form.
"""
from __future__ import annotations

from math import gcd
from typing import Iterable, Mapping


def _dense_snf_diagonal(rows: list[list[int]], ncols: int) -> list[int]:
    A = [r[:] for r in rows if any(r)]
    diag = []
    m = len(A)
    t = 0
    while t < min(m, ncols):
        # choose pivot: smallest nonzero absolute value in the remaining block
        piv = None
        for i in range(t, m):
            for j in range(t, ncols):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for r in A:
            r[t], r[j] = r[j], r[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, ncols):
                q = A[t][j] // p
                if q:
                    for r in A:
                        r[j] -= q * r[t]
                if A[t][j]:
                    dirty = True
            if not dirty:
                # divisibility of the rest of the block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, ncols)
                            if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # move the smallest remaining entry of row/column t into the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, ncols):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, i, j = best
            if i != t:
                A[t], A[i] = A[i], A[t]
            if j != t:
                for r in A:
                    r[t], r[j] = r[j], r[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def invariant_factors(rows: Iterable[Mapping[int, int] | list[int]], ncols: int) -> list[int]:
    """Invariant factors of ``Z^ncols / rowspan``: nonunit torsion
    coefficients in divisibility order followed by one ``0`` per free rank.

    ``rows`` may be dense lists or sparse ``{column: coefficient}`` maps.
    """
    sparse: list[dict[int, int]] = []
    for r in rows:
        d = dict(enumerate(r)) if isinstance(r, list) else dict(r)
        d = {c: v for c, v in d.items() if v}
        if d:
            sparse.append(d)
    cols: dict[int, set[int]] = {}
    for k, r in enumerate(sparse):
        for c in r:
            cols.setdefault(c, set()).add(k)
    alive = set(range(len(sparse)))
    rank = 0
    progress = True
    while progress:
        progress = False
        for k in sorted(alive):
            if k not in alive:
                continue
            r = sparse[k]
            unit = min((c for c, v in r.items() if abs(v) == 1), default=None,
                       key=lambda c: len(cols[c]))
            if unit is None:
                continue
            sgn = r[unit]
            alive.discard(k)
            for c in r:
                cols[c].discard(k)
            for other in sorted(cols.pop(unit)):
                o = sparse[other]
                f = o.pop(unit) * sgn
                for c, v in r.items():
                    if c == unit:
                        continue
                    nv = o.get(c, 0) - f * v
                    if nv:
                        if c not in o:
                            cols.setdefault(c, set()).add(other)
                        o[c] = nv
                    elif c in o:
                        del o[c]
                        cols[c].discard(other)
                if not o:
                    alive.discard(other)
            rank += 1
            progress = True
    rest_cols = sorted({c for k in alive for c in sparse[k]})
    pos = {c: i for i, c in enumerate(rest_cols)}
    dense = []
    for k in sorted(alive):
        row = [0] * len(rest_cols)
        for c, v in sparse[k].items():
            row[pos[c]] = v
        dense.append(row)
    diag = _dense_snf_diagonal(dense, len(rest_cols))
    rank += len(diag)
    # normalize to a divisibility chain
    chain = _divisibility_chain(diag)
    return [d for d in chain if d != 1] + [0] * (ncols - rank)


def _divisibility_chain(diag: list[int]) -> list[int]:
    d = [x for x in diag if x]
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                a, b = d[i], d[j]
                g = gcd(a, b)
                l = a * b // g
                if (a, b) != (g, l):
                    d[i], d[j] = g, l
                    changed = True
    return sorted(d)
