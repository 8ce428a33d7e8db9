"""Exact linear algebra over the rationals and GF(2).

Rational-rank questions are answered by integer row reduction (any rational
matrix is scaled to integers first), so no floating point appears anywhere.
Matrices here are small and often sparse with many unit entries, so
elimination prefers +-1 pivots and renormalizes rows by their gcd.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def rank_int(rows: Iterable[Sequence[int]]) -> int:
    """Rank over the rationals of an integer matrix."""
    sparse = []
    for row in rows:
        d = {j: v for j, v in enumerate(row) if v}
        if d:
            sparse.append(d)
    return _rank_sparse(sparse)


def _normalize(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def _rank_sparse(rows: list[dict[int, int]]) -> int:
    rank = 0
    while rows:
        # Pivot: smallest |value|, then shortest row, for low fill.
        bi, bj, bv = -1, -1, 0
        for i, row in enumerate(rows):
            for j, v in row.items():
                if bv == 0 or abs(v) < abs(bv) or (
                    abs(v) == abs(bv) and len(row) < len(rows[bi])
                ):
                    bi, bj, bv = i, j, v
            if abs(bv) == 1 and len(rows[bi]) == 1:
                break
        piv = rows.pop(bi)
        rank += 1
        nxt = []
        for row in rows:
            c = row.get(bj)
            if c is None:
                if row:
                    nxt.append(row)
                continue
            new = {}
            for j in row.keys() | piv.keys():
                w = row.get(j, 0) * bv - piv.get(j, 0) * c
                if w:
                    new[j] = w
            if new:
                nxt.append(_normalize(new))
        rows = nxt
    return rank


def rank_gf2(rows: Iterable[int]) -> int:
    """Rank over GF(2); each row is a bitmask."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
    return len(basis)


def rows_to_bitmasks(rows: Iterable[Sequence[int]]) -> list[int]:
    out = []
    for row in rows:
        m = 0
        for j, v in enumerate(row):
            if v % 2:
                m |= 1 << j
        out.append(m)
    return out


def nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Integer basis of the rational nullspace of an integer matrix."""
    mat = [[Fraction(v) for v in row] for row in rows]
    pivots: dict[int, int] = {}  # column -> row index
    r = 0
    for j in range(ncols):
        p = None
        for i in range(r, len(mat)):
            if mat[i][j]:
                p = i
                break
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        inv = 1 / mat[r][j]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][j]:
                c = mat[i][j]
                mat[i] = [x - c * y for x, y in zip(mat[i], mat[r])]
        pivots[j] = r
        r += 1
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for j, i in pivots.items():
            vec[j] = -mat[i][f]
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = tuple(int(x * den) for x in vec)
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = tuple(v // g for v in ints)
        basis.append(ints)
    return basis


def strict_homogeneous_feasible(rows: list[tuple[int, ...]]) -> bool:
    """Does an exact rational y with (row . y) < 0 for every row exist?

    Decided by Fourier-Motzkin elimination; strictness is preserved because
    only positive combinations are formed.  An identically-zero row reads
    0 < 0 and is infeasible.
    """
    if not rows:
        return True
    nvars = len(rows[0])
    work = set()
    for row in rows:
        row = _normalize_tuple(row)
        if not any(row):
            return False
        work.add(row)
    remaining = list(range(nvars))
    while remaining:
        # Eliminate the variable minimizing |pos|*|neg| growth.
        best_j, best_cost = None, None
        for j in remaining:
            p = sum(1 for r in work if r[j] > 0)
            m = sum(1 for r in work if r[j] < 0)
            cost = p * m - (p + m)
            if best_cost is None or cost < best_cost:
                best_j, best_cost = j, cost
        j = best_j
        remaining.remove(j)
        pos = [r for r in work if r[j] > 0]
        neg = [r for r in work if r[j] < 0]
        zero = [r for r in work if r[j] == 0]
        work = set(zero)
        for p in pos:
            for m in neg:
                comb = tuple(p[k] * (-m[j]) + m[k] * p[j] for k in range(nvars))
                comb = _normalize_tuple(comb)
                if not any(comb):
                    return False
                work.add(comb)
    # Every inserted row was nonzero and all variables are eliminated,
    # so nothing can remain.
    return True


def _normalize_tuple(row: tuple[int, ...]) -> tuple[int, ...]:
    g = 0
    for v in row:
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return tuple(v // g for v in row)
    return row
