"""Exact rational and integer linear algebra on nested lists of Fractions."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Matrix = list[list[Fraction]]


def as_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def mat_add(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Sequence[Sequence], c) -> Matrix:
    return [[c * x for x in row] for row in a]


def mat_pow(a: Sequence[Sequence], k: int) -> Matrix:
    result = identity(len(a))
    for _ in range(k):
        result = mat_mul(result, a)
    return result


def _rref(a: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    m = [[Fraction(x) for x in row] for row in a]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return len(_rref(a)[1])


def nullspace(a: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    """Basis of {x : a x = 0} as a list of vectors."""
    if not a:
        n = ncols or 0
        return identity(n)
    n = len(a[0])
    m, pivots = _rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(m, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """One solution of a x = b, or None if inconsistent."""
    n = len(a[0])
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(a, b)]
    m, pivots = _rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(m, pivots):
        x[p] = row[n]
    return x


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(map(Fraction, row)) + e for row, e in zip(a, identity(n))]
    m, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]


def det(a: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def common_denominator(values) -> int:
    den = 1
    for x in values:
        d = Fraction(x).denominator
        den = den * d // gcd(den, d)
    return den


def integer_row_basis(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Hermite-style echelon basis of the Z-span of integer rows."""
    work = [list(map(int, r)) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    basis: list[list[int]] = []
    for c in range(ncols):
        active = [r for r in work if r[c] != 0]
        rest = [r for r in work if r[c] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[c] // piv[c]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[c] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            active = nxt
        if active:
            piv = active[0]
            if piv[c] < 0:
                piv = [-x for x in piv]
            basis.append(piv)
        work = rest
    # reduce entries above pivots to make the basis canonical
    pivcols = [next(i for i, x in enumerate(r) if x != 0) for r in basis]
    for i in range(len(basis)):
        for j in range(i):
            c = pivcols[i]
            q = basis[j][c] // basis[i][c]
            if q:
                basis[j] = [x - q * y for x, y in zip(basis[j], basis[i])]
    return basis


def rational_row_basis(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the Z-span of rational row vectors."""
    rows = [[Fraction(x) for x in r] for r in rows]
    den = common_denominator(x for r in rows for x in r)
    ints = [[int(x * den) for x in r] for r in rows]
    return [[Fraction(x, den) for x in r] for r in integer_row_basis(ints)]


def gf2_solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[list[int]]:
    """Solve a x = b over GF(2); returns one solution or None."""
    if not a:
        return [] if not any(x % 2 for x in b) else None
    n = len(a[0])
    m = [[x % 2 for x in row] + [bi % 2] for row, bi in zip(a, b)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                m[i] = [x ^ y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if any(row[n] and not any(row[:n]) for row in m):
        return None
    x = [0] * n
    for row, p in zip(m, pivots):
        x[p] = row[n]
    return x


def integer_kernel(a: Sequence[Sequence]) -> list[list[int]]:
    """Z-basis of {x in Z^n : a x = 0} for a rational matrix a (rows)."""
    if not a:
        raise ValueError("empty matrix")
    n = len(a[0])
    den = common_denominator(x for r in a for x in r)
    cols = [[int(Fraction(a[r][c]) * den) for r in range(len(a))] for c in range(n)]
    m = len(a)
    aug = [cols[c] + [int(c == j) for j in range(n)] for c in range(n)]
    basis = integer_row_basis(aug)
    return [row[m:] for row in basis if not any(row[:m])]
