"""Truncated Fourier/q-series with exact exponents and cyclotomic coefficients.

A series is a finite map (mu, d) -> c standing for sum c * e[mu] * q^d, where
e[mu](h) = exp(2 pi i <mu, h>) and q = exp(2 pi i tau).  Terms with d above
the truncation order are dropped by every operation.
"""
from __future__ import annotations

import heapq
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from ._cyclotomic import CyclotomicRing
from ._exact import identity, mat_vec
from .cartan_core import RootSystem, VectorH, pair
from .center_sigma import SigmaData
from .folding import sigma_orbits, rho_wc
from .lattices_weyl import Lattice


class SeriesError(ArithmeticError):
    pass


class FourierQSeries:
    __slots__ = ("terms", "N", "ring", "gram")

    def __init__(self, terms, N, ring: CyclotomicRing, gram):
        self.N = Fraction(N)
        self.ring = ring
        self.gram = gram
        clean = {}
        for key, c in (terms.items() if isinstance(terms, dict) else terms):
            if key[1] <= self.N and not ring.is_zero(c):
                clean[key] = c
        self.terms = clean

    # construction ------------------------------------------------------
    @classmethod
    def zero(cls, rank: int, N, ring: CyclotomicRing, gram) -> "FourierQSeries":
        return cls({}, N, ring, gram)

    @classmethod
    def monomial(cls, mu, d, coeff, N, ring, gram) -> "FourierQSeries":
        return cls({(VectorH(mu), Fraction(d)): coeff}, N, ring, gram)

    def _like(self, terms, N=None) -> "FourierQSeries":
        return FourierQSeries(terms, self.N if N is None else N, self.ring, self.gram)

    # inspection --------------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mu, d):
        return self.terms.get((VectorH(mu), Fraction(d)), self.ring.zero)

    @property
    def min_degree(self) -> Optional[Fraction]:
        return min((d for _, d in self.terms), default=None)

    def degrees(self) -> list[Fraction]:
        return sorted({d for _, d in self.terms})

    def shell(self, d) -> dict:
        d = Fraction(d)
        return {mu: c for (mu, e), c in self.terms.items() if e == d}

    def __eq__(self, other) -> bool:
        if not isinstance(other, FourierQSeries):
            return NotImplemented
        N = min(self.N, other.N)
        a = {k: v for k, v in self.terms.items() if k[1] <= N}
        b = {k: v for k, v in other.terms.items() if k[1] <= N}
        return a == b

    __hash__ = None

    def __repr__(self) -> str:
        return f"FourierQSeries({len(self.terms)} terms, N={self.N}, ring=Z[zeta_{self.ring.m}])"

    # arithmetic --------------------------------------------------------
    def __add__(self, other: "FourierQSeries") -> "FourierQSeries":
        R = self.ring
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = R.add(out[k], c) if k in out else c
        return self._like(out, min(self.N, other.N))

    def __neg__(self) -> "FourierQSeries":
        return self._like({k: self.ring.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other: "FourierQSeries") -> "FourierQSeries":
        return self + (-other)

    def scale(self, c) -> "FourierQSeries":
        R = self.ring
        return self._like({k: R.mul(v, c) for k, v in self.terms.items()})

    def shift(self, mu, d=0) -> "FourierQSeries":
        """Multiply by e[mu] q^d (truncation order unchanged)."""
        mu = VectorH(mu)
        d = Fraction(d)
        return self._like({(m + mu, e + d): c for (m, e), c in self.terms.items()})

    def map_weights(self, matrix) -> "FourierQSeries":
        out = {}
        for (m, e), c in self.terms.items():
            out[(VectorH(mat_vec(matrix, m)), e)] = c
        return self._like(out)

    def truncate(self, N) -> "FourierQSeries":
        return self._like(self.terms, min(self.N, Fraction(N)))

    def with_ring(self, ring: CyclotomicRing) -> "FourierQSeries":
        if ring == self.ring:
            return self
        if not self.ring.scalar:
            raise SeriesError("can only lift scalar coefficients")
        return FourierQSeries({k: ring.from_scalar(c) for k, c in self.terms.items()}, self.N, ring, self.gram)

    def rational_terms(self) -> dict:
        """Coefficients as rationals; raises if any coefficient is not rational."""
        out = {}
        for k, c in self.terms.items():
            r = self.ring.as_rational(c)
            if r is None:
                raise SeriesError(f"coefficient {c} at {k} is not rational")
            out[k] = r
        return out

    def to_json(self) -> list:
        rows = []
        for (mu, d), c in sorted(self.terms.items(), key=lambda kv: (kv[0][1], tuple(-x for x in kv[0][0]))):
            coeff = [int(x) if Fraction(x).denominator == 1 else str(x) for x in self.ring.to_list(c)]
            rows.append({"mu": [str(x) for x in mu], "d": str(d), "coeff": coeff})
        return rows


def series_multiply(a: FourierQSeries, b: FourierQSeries) -> FourierQSeries:
    if a.ring != b.ring:
        raise SeriesError("coefficient rings differ")
    R = a.ring
    N = min(a.N, b.N)
    out: dict = {}
    bt = sorted(b.terms.items(), key=lambda kv: kv[0][1])
    for (m1, d1), c1 in a.terms.items():
        for (m2, d2), c2 in bt:
            if d1 + d2 > N:
                break
            key = (m1 + m2, d1 + d2)
            p = R.mul(c1, c2)
            out[key] = R.add(out[key], p) if key in out else p
    return FourierQSeries(out, N, R, a.gram)


def _lex_key(term_key):
    mu, d = term_key
    return (d, tuple(-x for x in mu))


def series_divide(a: FourierQSeries, b: FourierQSeries, max_steps: int = 200000) -> FourierQSeries:
    """Graded long division: the unique x with x * b = a up to order N.

    Monomials are ordered by q-degree first and then lexicographically
    (descending) on weight coordinates; the leading term of b must be a unit.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero series")
    R = a.ring
    lead_key = min(b.terms, key=_lex_key)
    lead = b.terms[lead_key]
    if lead == R.one:
        inv = R.one
    elif lead == R.neg(R.one):
        inv = lead
    else:
        raise SeriesError("leading coefficient of divisor is not +-1")
    lmu, ld = lead_key
    N = min(a.N, b.N) - ld
    rem = dict(a.terms)
    quot: dict = {}
    steps = 0
    while True:
        live = [k for k, c in rem.items() if k[1] - ld <= N and not R.is_zero(c)]
        if not live:
            break
        k = min(live, key=_lex_key)
        c = R.mul(rem[k], inv)
        qk = (k[0] - lmu, k[1] - ld)
        quot[qk] = c
        for (m, d), bc in b.terms.items():
            key = (qk[0] + m, qk[1] + d)
            if key[1] - ld > N:
                continue
            val = R.sub(rem.get(key, R.zero), R.mul(c, bc))
            if R.is_zero(val):
                rem.pop(key, None)
            else:
                rem[key] = val
        steps += 1
        if steps > max_steps:
            raise SeriesError("long division did not terminate (divisor may not divide)")
    return FourierQSeries(quot, N, R, a.gram)


# ---------------------------------------------------------------- theta

def _ldl(G):
    """G = U^T diag(D) U with U unit upper triangular (exact)."""
    n = len(G)
    D = [Fraction(0)] * n
    U = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        D[i] = G[i][i] - sum((D[k] * U[k][i] ** 2 for k in range(i)), Fraction(0))
        if D[i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            U[i][j] = (G[i][j] - sum((D[k] * U[k][i] * U[k][j] for k in range(i)), Fraction(0))) / D[i]
    return D, U


def lattice_points(G, c, N) -> list[tuple[int, ...]]:
    """All integer x with (1/2) x^T G x + c.x <= N (G positive definite).

    Completeness: the ellipsoid is enumerated coordinate by coordinate with
    floating bounds widened by one unit; every candidate is then checked exactly.
    """
    n = len(G)
    if n == 0:
        return [()]
    G = [[Fraction(x) for x in row] for row in G]
    c = [Fraction(x) for x in c]
    D, U = _ldl(G)
    # center: G x0 = c  so that Q(x) = 1/2 (x + x0)^T G (x + x0) - 1/2 x0^T G x0
    from ._exact import solve

    x0 = solve(G, c)
    R2 = 2 * Fraction(N) + sum((x0[i] * G[i][j] * x0[j] for i in range(n) for j in range(n)), Fraction(0))
    if R2 < 0:
        return []
    Df = [float(d) for d in D]
    Uf = [[float(x) for x in row] for row in U]
    x0f = [float(x) for x in x0]
    R2f = float(R2)
    out = []
    x = [0] * n

    def rec(i, budget):
        # coordinate y_i = x_i + x0_i, term D_i (y_i + sum_{j>i} U_ij y_j)^2
        t = sum(Uf[i][j] * (x[j] + x0f[j]) for j in range(i + 1, n))
        rad = math.sqrt(max(budget, 0.0) / Df[i]) + 1e-9
        center = -t - x0f[i]
        lo, hi = math.floor(center - rad) - 1, math.ceil(center + rad) + 1
        for xi in range(lo, hi + 1):
            x[i] = xi
            val = Df[i] * (xi + x0f[i] + t) ** 2
            if val > budget + 1e-6 * (1 + R2f):
                continue
            if i == 0:
                out.append(tuple(x))
            else:
                rec(i - 1, budget - val)
        x[i] = 0

    rec(n - 1, R2f)
    N = Fraction(N)
    exact = []
    for pt in out:
        q = sum((G[i][j] * pt[i] * pt[j] for i in range(n) for j in range(n)), Fraction(0)) / 2
        q += sum((ci * xi for ci, xi in zip(c, pt)), Fraction(0))
        if q <= N:
            exact.append(pt)
    return exact


def theta_series(rs: RootSystem, L: Lattice, mu, K, N, ring: Optional[CyclotomicRing] = None) -> FourierQSeries:
    """Theta_{mu,K} = sum over beta in L of e[mu + K beta] q^{<mu,beta> + K<beta,beta>/2}."""
    ring = ring or CyclotomicRing(1)
    mu = VectorH(mu)
    K = Fraction(K)
    if K <= 0:
        raise ValueError("K must be positive")
    G = [[K * rs.pair(a, b) for b in L.basis] for a in L.basis]
    c = [rs.pair(mu, b) for b in L.basis]
    terms = {}
    for x in lattice_points(G, c, N):
        beta = L.vector(x)
        d = rs.pair(mu, beta) + K * rs.norm2(beta) / 2
        terms[(mu + beta * K, d)] = ring.one
    return FourierQSeries(terms, N, ring, rs.gram)


def anti_invariantize(family: Callable[[VectorH], FourierQSeries], group, mu) -> FourierQSeries:
    """sum over (w, sign) in group of sign * family(w mu)."""
    acc = None
    for matrix, sign in group:
        term = family(VectorH(mat_vec(matrix, mu)))
        if sign < 0:
            term = -term
        acc = term if acc is None else acc + term
    return acc


# ------------------------------------------------------------ denominators

@dataclass(frozen=True)
class Denominator:
    """e[prefactor] times a product of factors (1 - c e[-beta] q^n)^power."""

    rs: RootSystem
    ring: CyclotomicRing
    prefactor: VectorH
    factors: tuple[tuple[object, VectorH, int, int], ...]  # (c, beta, n, power)
    N: Fraction

    def expand(self) -> FourierQSeries:
        one = self.ring.one
        s = FourierQSeries({(self.prefactor, Fraction(0)): one}, self.N, self.ring, self.rs.gram)
        for c, beta, n, power in self.factors:
            for _ in range(power):
                s = _times_binomial(s, c, beta, n)
        return s

    def divide(self, a: FourierQSeries, check: bool = True) -> FourierQSeries:
        """a / F, one factor at a time (q-factors first, then degree-0 factors)."""
        x = a
        deg0 = []
        for c, beta, n, power in self.factors:
            if n == 0:
                deg0.append((c, beta, power))
                continue
            for _ in range(power):
                x = _over_q_binomial(x, c, beta, n)
        for c, beta, power in deg0:
            for _ in range(power):
                x = _over_weight_binomial(x, c, beta, check)
        return x.shift(-self.prefactor)


def _times_binomial(s: FourierQSeries, c, beta, n) -> FourierQSeries:
    """s * (1 - c e[-beta] q^n)."""
    R = s.ring
    out = dict(s.terms)
    for (m, d), v in s.terms.items():
        if d + n > s.N:
            continue
        key = (m - beta, d + n)
        p = R.neg(R.mul(v, c))
        out[key] = R.add(out[key], p) if key in out else p
    return FourierQSeries(out, s.N, R, s.gram)


def _over_q_binomial(s: FourierQSeries, c, beta, n) -> FourierQSeries:
    """x with x (1 - c e[-beta] q^n) = s, n >= 1: x(mu,d) = s(mu,d) + c x(mu+beta, d-n)."""
    R = s.ring
    by_deg = defaultdict(dict)
    for (m, d), v in s.terms.items():
        by_deg[d][m] = v
    x: dict = {}
    done = set()
    # process degrees in increasing order; new degrees d + n may appear
    heap = sorted(by_deg)
    heapq.heapify(heap)
    while heap:
        d = heapq.heappop(heap)
        if d in done:
            continue
        done.add(d)
        shell = dict(by_deg.get(d, {}))
        prev = x.get(d - n)
        if prev:
            for m, v in prev.items():
                key = m - beta
                p = R.mul(v, c)
                shell[key] = R.add(shell[key], p) if key in shell else p
        shell = {m: v for m, v in shell.items() if not R.is_zero(v)}
        if shell:
            x[d] = shell
            if d + n <= s.N and d + n not in done:
                heapq.heappush(heap, d + n)
    terms = {(m, d): v for d, sh in x.items() for m, v in sh.items()}
    return FourierQSeries(terms, s.N, R, s.gram)


def _over_weight_binomial(s: FourierQSeries, c, beta, check: bool) -> FourierQSeries:
    """x with x (1 - c e[-beta]) = s within each q-shell.

    Along each beta-string x(mu) = s(mu) + c x(mu + beta), filled from the top
    down.  Exact division forces x to vanish at the bottom of the string.
    """
    R = s.ring
    strings = defaultdict(dict)
    bb = pair(s.gram, beta, beta)
    for (m, d), v in s.terms.items():
        t = pair(s.gram, m, beta) / bb
        frac = t - math.floor(t)
        strings[(m - beta * t, d, frac)][t] = v
    out = {}
    for (base, d, _), vals in strings.items():
        lo, hi = min(vals), max(vals)
        acc = R.zero
        t = hi
        while t >= lo:
            acc = R.add(vals.get(t, R.zero), R.mul(c, acc))
            if not R.is_zero(acc):
                out[(base + beta * t, d)] = acc
            t -= 1
        if check and not R.is_zero(acc):
            raise SeriesError("denominator factor does not divide the numerator")
    return FourierQSeries(out, s.N, R, s.gram)


def untwisted_denominator(rs: RootSystem, N) -> Denominator:
    """F = e[rho] prod_{a>0}(1-e[-a]) prod_n (1-q^n)^l prod_{a} (1-q^n e[-a])."""
    N = int(N)
    R = CyclotomicRing(1)
    zero = VectorH.zero(rs.rank)
    factors = [(1, a, 0, 1) for a in rs.positive_roots]
    for n in range(1, N + 1):
        factors.append((1, zero, n, rs.rank))
        factors.extend((1, a, n, 1) for a in rs.roots)
    return Denominator(rs, R, rs.rho, tuple(factors), Fraction(N))


def twisted_denominator(rs: RootSystem, sigma: SigmaData, N) -> Denominator:
    """F_{w_c} from sigma_c-orbits of positive real roots, signs and eigenspace dims."""
    N = int(N)
    R = CyclotomicRing(sigma.order)
    rho, _ = rho_wc(rs, sigma)
    zero = VectorH.zero(rs.rank)
    factors = []
    for orb in sigma_orbits(rs, sigma, N):
        if orb.degree_sum > N or any(m.degree > N for m in orb.members):
            continue
        beta = orb.restricted * orb.size
        factors.append((R.from_scalar(orb.sign), beta, orb.degree_sum, 1))
    for n in range(1, N + 1):
        for j, dim in enumerate(sigma.eigendims):
            if dim:
                factors.append((R.zeta_power(-j), zero, n, dim))
    return Denominator(rs, R, rho, tuple(factors), Fraction(N))


def denominator(rs: RootSystem, sigma: SigmaData, N) -> FourierQSeries:
    return twisted_denominator(rs, sigma, N).expand()


# ------------------------------------------------------------- evaluation

def evaluate(series: FourierQSeries, h, tau: complex) -> complex:
    """Numerical value of the series at (h, tau), Im tau > 0."""
    if complex(tau).imag <= 0:
        raise ValueError("Im tau must be positive")
    if not series.terms:
        return 0j
    keys = list(series.terms)
    G = np.array([[float(x) for x in row] for row in series.gram])
    mus = np.array([[float(x) for x in m] for m, _ in keys])
    ds = np.array([float(d) for _, d in keys])
    coeffs = np.array([series.ring.to_complex(series.terms[k]) for k in keys])
    h = np.asarray(h, dtype=complex)
    phase = mus @ G @ h
    vals = coeffs * np.exp(2j * np.pi * phase) * np.exp(2j * np.pi * complex(tau) * ds)
    return complex(vals.sum())


def last_shell_magnitude(series: FourierQSeries, h, tau: complex) -> float:
    """Magnitude of the contribution of the highest retained q-degree."""
    degs = series.degrees()
    if not degs:
        return 0.0
    top = degs[-1]
    part = FourierQSeries({k: v for k, v in series.terms.items() if k[1] == top}, series.N, series.ring, series.gram)
    return abs(evaluate(part, h, tau))
