"""Characters of integrable highest-weight modules and their checks."""
from __future__ import annotations

import cmath
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import floor, isqrt
from typing import Optional, Sequence

import numpy as np

from ._cyclotomic import CyclotomicRing
from .cartan_core import RootSystem, VectorH, act, weyl_orbit
from .center_sigma import SigmaData, basic_level, sigma_data
from .folding import fold, rho_wc
from .lattices_weyl import (
    ExcludedCase,
    coroot_lattice,
    fixed_coroot_lattice,
    is_excluded,
    orbit_lattice,
    project,
    twisted_weyl_data,
    weyl_group_elements,
    alcove_reduce,
)
from .qseries import (
    FourierQSeries,
    SeriesError,
    anti_invariantize,
    evaluate,
    series_multiply,
    theta_series,
    twisted_denominator,
    untwisted_denominator,
)


class CharacterError(ValueError):
    pass


@dataclass(frozen=True)
class CharacterResult:
    rs: RootSystem
    sigma: SigmaData
    lam: VectorH
    k: int
    K: int
    series: FourierQSeries
    provenance: str
    zero: bool = False
    integral: bool = True
    note: str = ""

    @property
    def N(self) -> Fraction:
        return self.series.N

    @property
    def twisted(self) -> bool:
        return self.provenance == "twisted"

    def to_json(self) -> dict:
        folded = fold(self.rs, self.sigma).folded_type if not self.sigma.is_identity else None
        return {
            "type": self.rs.type_label,
            "center": self.sigma.c_node,
            "lambda": [str(x) for x in self.rs.weight_coords(self.lam)],
            "k": self.k,
            "K": self.K,
            "N": str(self.N),
            "folded_type": folded,
            "provenance": self.provenance,
            "zero": self.zero,
            "terms": self.series.to_json(),
        }


# --------------------------------------------------------------- helpers

def _check_level_weight(rs: RootSystem, lam: VectorH, k: int) -> None:
    if k < 0:
        raise CharacterError("level must be nonnegative")
    coords = rs.weight_coords(lam)
    if any(c.denominator != 1 or c < 0 for c in coords):
        raise CharacterError("lambda is not a dominant integral weight")
    if rs.pair(lam, rs.highest_root) > k:
        raise CharacterError(f"lambda is not of level {k}: <lambda, theta> > k")


def affine_labels(rs: RootSystem, lam: VectorH, k: int) -> tuple[Fraction, ...]:
    """Dynkin labels (k - <lambda, theta>, <lambda, alpha_1^vee>, ...)."""
    return (k - rs.pair(lam, rs.highest_root),) + tuple(rs.weight_coords(lam))


def is_sigma_invariant(rs: RootSystem, sigma: SigmaData, lam: VectorH, k: int) -> bool:
    labels = affine_labels(rs, lam, k)
    return all(labels[sigma.sigma_perm[i]] == labels[i] for i in range(len(labels)))


@lru_cache(maxsize=None)
def _group(rs: RootSystem, sigma: SigmaData):
    return tuple(weyl_group_elements(twisted_weyl_data(rs, sigma)))


@lru_cache(maxsize=None)
def _untwisted_group(rs: RootSystem):
    # W generated by the simple reflections, built from the Cartan data only
    n = rs.rank
    gens = [tuple(tuple(r) for r in rs.reflection_matrix(i)) for i in range(1, n + 1)]
    start = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    seen = {start: 1}
    frontier = [start]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = tuple(
                    tuple(sum((s[i][t] * g[t][j] for t in range(n)), Fraction(0)) for j in range(n))
                    for i in range(n)
                )
                if h not in seen:
                    seen[h] = -seen[g]
                    nxt.append(h)
        frontier = nxt
    return tuple(seen.items())


def _normalize(series: FourierQSeries, lam: VectorH) -> None:
    lead = series.coefficient(lam, 0)
    if lead != series.ring.one:
        raise SeriesError(f"leading coefficient at e[lambda] q^0 is {lead}, expected 1")


# ------------------------------------------------------------ characters

def kac_weyl_character(rs: RootSystem, lam, k: int, N: int) -> CharacterResult:
    """chi_{lambda,k} = A Theta_{lambda+rho, k+h} / F with F the explicit product."""
    lam = VectorH(lam)
    _check_level_weight(rs, lam, k)
    K = k + rs.dual_coxeter
    L = coroot_lattice(rs)
    group = _untwisted_group(rs)
    num = anti_invariantize(lambda mu: theta_series(rs, L, mu, K, N), group, lam + rs.rho)
    chi = untwisted_denominator(rs, N).divide(num)
    _normalize(chi, lam)
    for c in chi.terms.values():
        if c < 0 or Fraction(c).denominator != 1:
            raise SeriesError("untwisted character has a non-natural coefficient")
    return CharacterResult(rs, sigma_data(rs, 0), lam, k, K, chi, "kac-weyl")


def twisted_character(rs: RootSystem, sigma: SigmaData, lam, k: int, N: int) -> CharacterResult:
    """chi^{sigma_c}_{lambda,k} = A_0 Theta_{lambda+rho_wc, k+h} / F_{w_c} on h^{w_c}."""
    lam = VectorH(lam)
    _check_level_weight(rs, lam, k)
    K = k + rs.dual_coxeter
    ring = CyclotomicRing(sigma.order)
    if not is_sigma_invariant(rs, sigma, lam, k):
        zero = FourierQSeries({}, N, ring, rs.gram)
        return CharacterResult(rs, sigma, lam, k, K, zero, "twisted", zero=True,
                               note="lambda is not sigma_c-invariant; the character vanishes")
    k_b = basic_level(rs, sigma.c_node)
    if k % k_b:
        raise CharacterError(f"level {k} is not a multiple of the basic level {k_b}")
    if is_excluded(rs, sigma):
        raise ExcludedCase("twisted characters are not defined for the full rotation of A_n")
    rho, _ = rho_wc(rs, sigma)
    lam_p = project(sigma, lam)
    L = orbit_lattice(rs, sigma)
    group = _group(rs, sigma)
    num = anti_invariantize(lambda mu: theta_series(rs, L, mu, K, N, ring), group, lam_p + rho)
    chi = twisted_denominator(rs, sigma, N).divide(num)
    _normalize(chi, lam_p)
    integral = True
    try:
        rat = chi.rational_terms()
        integral = all(v.denominator == 1 for v in map(Fraction, rat.values()))
        if integral:
            chi = FourierQSeries(rat, chi.N, CyclotomicRing(1), chi.gram)
    except SeriesError:
        integral = False
    return CharacterResult(rs, sigma, lam_p, k, K, chi, "twisted", integral=integral)


# ------------------------------------------------------------- Freudenthal

def freudenthal_multiplicities(rs: RootSystem, lam, k: int, N: int) -> dict:
    """Weight multiplicities of V_{lambda,k} up to depth N by the affine Freudenthal recursion.

    Returns {(mu, d): mult} for every weight mu at depth d <= N.  Uses only the
    finite root data; the affine root multiplicities are 1 for real roots and
    rank for imaginary ones.
    """
    lam = VectorH(lam)
    _check_level_weight(rs, lam, k)
    K = k + rs.dual_coxeter
    rho = rs.rho
    top = rs.norm2(lam + rho)
    lam2 = rs.norm2(lam)
    l = rs.rank
    dominant: dict = {}  # (dominant mu, d) -> mult

    def mult(mu: VectorH, d: int) -> int:
        if d < 0:
            return 0
        if rs.norm2(mu) > lam2 + 2 * k * d:
            return 0
        dom, _ = rs.dominant_representative(mu)
        return dominant.get((dom, d), 0)

    wnorms = [rs.norm2(w) for w in rs.fundamental_weights]
    for d in range(N + 1):
        bound = top + 2 * K * d
        cands = []
        ranges = []
        for wn in wnorms:
            m = floor((bound / wn) ** 0.5 + 1e-9) if bound > 0 else 0
            ranges.append(range(0, m + 1))
        from itertools import product

        for coords in product(*ranges):
            mu = rs.from_weight_coords(coords)
            diff = lam - mu
            if any(x.denominator != 1 for x in diff):
                continue
            if rs.norm2(mu + rho) > bound:
                continue
            cands.append(mu)
        cands.sort(key=lambda v: -sum(v))
        for mu in cands:
            if d == 0 and mu == lam:
                dominant[(mu, 0)] = 1
                continue
            lhs = top - rs.norm2(mu + rho) + 2 * K * d
            if lhs <= 0:
                continue
            rhs = Fraction(0)
            for n in range(0, d + 1):
                roots = rs.positive_roots if n == 0 else rs.roots
                for a in roots:
                    j = 1
                    while d - j * n >= 0:
                        nu = mu + a * j
                        if rs.norm2(nu) > lam2 + 2 * k * (d - j * n):
                            break
                        m = mult(nu, d - j * n)
                        if m:
                            rhs += (rs.pair(nu, a) + k * n) * m
                        j += 1
                if n >= 1:
                    j = 1
                    while d - j * n >= 0:
                        m = mult(mu, d - j * n)
                        if m:
                            rhs += l * k * n * m
                        j += 1
            val = 2 * rhs / lhs
            if val.denominator != 1 or val < 0:
                raise RuntimeError(f"Freudenthal recursion produced {val} at {mu}, depth {d}")
            if val:
                dominant[(mu, d)] = int(val)
    out = {}
    for (mu, d), m in dominant.items():
        for nu in weyl_orbit(rs, mu):
            out[(nu, d)] = m
    return out


# -------------------------------------------------------------- checks

def character_denominator(ch: CharacterResult) -> FourierQSeries:
    if ch.twisted:
        den = twisted_denominator(ch.rs, ch.sigma, int(ch.N)).expand()
    else:
        den = untwisted_denominator(ch.rs, int(ch.N)).expand()
    return den.with_ring(ch.series.ring) if den.ring != ch.series.ring else den


def heat_residual(ch: CharacterResult) -> FourierQSeries:
    """sum c * r(mu, d) e[mu] q^d over chi * F, r = -2Kd + |mu|^2 - |rho_eff|^2 - c_eff."""
    rs = ch.rs
    if ch.twisted:
        rho, rho2 = rho_wc(rs, ch.sigma)
    else:
        rho, rho2 = rs.rho, rs.norm2(rs.rho)
    c_eff = rs.norm2(ch.lam + rho) - rho2
    series = ch.series
    den = character_denominator(ch)
    if den.ring != series.ring:
        series = series.with_ring(den.ring)
    prod = series_multiply(series, den)
    R = prod.ring
    out = {}
    for (mu, d), c in prod.terms.items():
        r = -2 * ch.K * d + rs.norm2(mu) - rho2 - c_eff
        if r:
            out[(mu, d)] = R.scale(c, r)
    return FourierQSeries(out, prod.N, R, prod.gram)


def _real_and_tau_lattices(ch: CharacterResult):
    rs = ch.rs
    if ch.sigma.is_identity:
        L = coroot_lattice(rs)
        return L, L
    return fixed_coroot_lattice(rs, ch.sigma), orbit_lattice(rs, ch.sigma)


def _random_point(rng: random.Random, ch: CharacterResult) -> np.ndarray:
    rs = ch.rs
    if ch.sigma.is_identity:
        basis = [rs.simple_root(i) for i in range(1, rs.rank + 1)]
    else:
        basis = list(twisted_weyl_data(rs, ch.sigma).fixed_space_basis)
    v = np.zeros(rs.rank, dtype=complex)
    for b in basis:
        v += (rng.uniform(-0.5, 0.5) + 1j * rng.uniform(-0.05, 0.05)) * np.array([float(x) for x in b])
    return v


def _random_lattice_vector(rng: random.Random, L) -> VectorH:
    return L.vector([rng.choice((-1, 0, 0, 1)) for _ in range(L.rank)])


def _vec(v) -> np.ndarray:
    return np.array([float(x) for x in v], dtype=complex)


def quasi_periodicity_check(ch: CharacterResult, trials: int = 50, seed: int = 0,
                            k_override: Optional[int] = None,
                            tau_imag: tuple[float, float] = (0.7, 1.0)) -> float:
    """Max relative deviation of chi(v + b + tau b') from the cocycle times chi(v)."""
    rs = ch.rs
    rng = random.Random(seed)
    k = ch.k if k_override is None else k_override
    G = np.array([[float(x) for x in r] for r in rs.gram])
    real_L, tau_L = _real_and_tau_lattices(ch)
    worst = 0.0
    for _ in range(trials):
        v = _random_point(rng, ch)
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(*tau_imag))
        b = _vec(_random_lattice_vector(rng, real_L))
        bp = _vec(_random_lattice_vector(rng, tau_L))
        lhs = evaluate(ch.series, v + b + tau * bp, tau)
        factor = cmath.exp(-2j * cmath.pi * k * (bp @ G @ v) - 1j * cmath.pi * k * tau * (bp @ G @ bp))
        rhs = factor * evaluate(ch.series, v, tau)
        scale = max(abs(rhs), abs(lhs), 1e-300)
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def cocycle_action(rs: RootSystem, sigma: SigmaData, k: int, beta, point):
    """(1, beta, 1) acting on (h, u, tau): returns (h - tau beta, u')."""
    h, u, tau = point
    if not sigma.is_identity and not orbit_lattice(rs, sigma).contains(beta):
        raise ValueError("beta is not in the translation lattice")
    G = np.array([[float(x) for x in r] for r in rs.gram])
    b = _vec(beta)
    h = np.asarray(h, dtype=complex)
    h2 = h - tau * b
    u2 = u * cmath.exp(2j * cmath.pi * (-(k / 2) * tau * (b @ G @ b) + k * (b @ G @ h)))
    return h2, u2


def cocycle_equivariance_check(ch: CharacterResult, trials: int = 20, seed: int = 0) -> float:
    """Max relative error of chi(h - tau beta) = (u'/u) chi(h) over random beta."""
    rs = ch.rs
    rng = random.Random(seed)
    _, tau_L = _real_and_tau_lattices(ch)
    worst = 0.0
    for _ in range(trials):
        h = _random_point(rng, ch)
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.7, 1.0))
        beta = _random_lattice_vector(rng, tau_L)
        h2, u2 = cocycle_action(rs, ch.sigma, ch.k, beta, (h, 1.0, tau))
        lhs = evaluate(ch.series, h2, tau)
        rhs = u2 * evaluate(ch.series, h, tau)
        scale = max(abs(rhs), abs(lhs), 1e-300)
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


# --------------------------------------------------------- normal forms

def _reduce_mod_lattice(L, a: VectorH) -> VectorH:
    x = L.coordinates(a)
    if x is None:
        raise ValueError("point is not in the span of the lattice")
    return L.vector([c - floor(c) for c in x])


def conjugacy_normal_form(rs: RootSystem, sigma: SigmaData, h) -> tuple[VectorH, VectorH]:
    """Normal form of a + tau b under W0, translations by Lambda(T_{w_c}) and tau Lambda(T_{w_c}).

    h is a pair (a, b) of rational vectors in h^{w_c}.  b is moved into the
    closed alcove, where the torsion translations act by alcove symmetries;
    a is carried along by the linear parts and reduced modulo the lattice.
    The result is the minimum over everything reachable from the reduced pair
    by those symmetries and by reflections fixing b.
    """
    data = twisted_weyl_data(rs, sigma)
    L = data.translation_lattice

    def settle(a: VectorH, b: VectorH) -> tuple[VectorH, VectorH]:
        b_red, word = alcove_reduce(data, b, 1)
        for idx in word:
            a = data.reflect(data.walls[idx].vector, a)
        return _reduce_mod_lattice(L, a), b_red

    start = settle(VectorH(h[0]), VectorH(h[1]))
    seen = {start}
    stack = [start]
    while stack:
        a, b = stack.pop()
        moves = [settle(a, b + t) for t in data.torsion]
        moves += [
            (_reduce_mod_lattice(L, data.reflect(w.vector, a)), b)
            for w in data.walls
            if w.value(rs, b, 1) == 0
        ]
        for m in moves:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    a, b = min(seen, key=lambda ab: (tuple(ab[1]), tuple(ab[0])))
    return a, b
