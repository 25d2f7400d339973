import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from loopchar._cyclotomic import CyclotomicRing, cyclotomic_poly, euler_phi
from loopchar._exact import det, gf2_solve, integer_kernel, inverse, mat_mul, identity
from loopchar.cartan_core import VectorH, build_root_system
from loopchar.center_sigma import sigma_data
from loopchar.folding import rho_wc
from loopchar.lattices_weyl import (
    coroot_lattice,
    orbit_lattice,
    twisted_weyl_data,
    untwisted_weyl_data,
    weyl_group_elements,
)
from loopchar.qseries import (
    FourierQSeries,
    SeriesError,
    anti_invariantize,
    evaluate,
    lattice_points,
    series_divide,
    series_multiply,
    theta_series,
    twisted_denominator,
    untwisted_denominator,
)

Z = CyclotomicRing(1)


def test_a1_theta_exponents():
    rs = build_root_system("A1")
    th = theta_series(rs, coroot_lattice(rs), VectorH([0]), 1, 9)
    a = VectorH([1])
    assert th.coefficient(VectorH([0]), 0) == 1
    assert th.coefficient(a, 1) == 1 and th.coefficient(-a, 1) == 1
    assert th.coefficient(a * 2, 4) == 1 and th.coefficient(a * 3, 9) == 1
    assert len(th) == 7


def test_lattice_points_exact_boundary():
    G = [[Fraction(2)]]
    pts = lattice_points(G, [Fraction(0)], 4)
    assert sorted(p[0] for p in pts) == [-2, -1, 0, 1, 2]


@pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2"])
def test_macdonald_identity(label):
    # the product F equals the alternating theta sum at level h
    rs = build_root_system(label)
    N = 4
    group = weyl_group_elements(untwisted_weyl_data(rs))
    L = coroot_lattice(rs)
    lhs = anti_invariantize(lambda mu: theta_series(rs, L, mu, rs.dual_coxeter, N), group, rs.rho)
    assert lhs == untwisted_denominator(rs, N).expand()


@pytest.mark.parametrize("label,node", [("C2", 2), ("A3", 2), ("C3", 3), ("B3", 1), ("D4", 1)])
def test_twisted_denominator_identity(label, node):
    rs = build_root_system(label)
    s = sigma_data(rs, node)
    N = 4
    ring = CyclotomicRing(s.order)
    rho, _ = rho_wc(rs, s)
    group = weyl_group_elements(twisted_weyl_data(rs, s))
    L = orbit_lattice(rs, s)
    lhs = anti_invariantize(lambda mu: theta_series(rs, L, mu, rs.dual_coxeter, N, ring), group, rho)
    rhs = twisted_denominator(rs, s, N).expand()
    assert lhs.ring == rhs.ring
    assert lhs == rhs


def test_anti_invariance_under_simple_reflections():
    rs = build_root_system("A2")
    group = weyl_group_elements(untwisted_weyl_data(rs))
    L = coroot_lattice(rs)
    mu = rs.rho + rs.fundamental_weights[0]
    at = anti_invariantize(lambda m: theta_series(rs, L, m, 4, 5), group, mu)
    for i in (1, 2):
        flipped = FourierQSeries({(rs.reflect(i, m), d): -c for (m, d), c in at.terms.items()}, 5, Z, rs.gram)
        assert flipped == at


def _series(rs, data, N):
    return FourierQSeries({(VectorH(m), Fraction(d)): c for m, d, c in data}, N, Z, rs.gram)


term = st.tuples(st.integers(-2, 2), st.integers(0, 4), st.integers(-3, 3))


@settings(max_examples=50, deadline=None)
@given(a=st.lists(term, max_size=6), b=st.lists(term, max_size=4))
def test_multiply_then_divide_roundtrip(a, b):
    rs = build_root_system("A1")
    N = 5
    x = _series(rs, [((i,), d, c) for i, d, c in a], N)
    # a divisor with unit leading term at q^0
    y = _series(rs, [((0,), 0, 1)] + [((i,), d + 1, c) for i, d, c in b], N)
    prod = series_multiply(x, y)
    assert series_divide(prod, y) == x
    assert series_multiply(x, y) == series_multiply(y, x)


def test_divide_by_non_unit_fails():
    rs = build_root_system("A1")
    x = _series(rs, [((0,), 0, 1)], 3)
    y = _series(rs, [((0,), 0, 2)], 3)
    with pytest.raises(SeriesError):
        series_divide(x, y)


def test_evaluate_matches_direct_sum():
    rs = build_root_system("A1")
    s = _series(rs, [((1,), 1, 2), ((0,), 0, 1), ((-1,), 2, -1)], 4)
    h = [0.3 + 0.1j]
    tau = 0.2 + 0.9j
    e = lambda x: cmath.exp(2j * cmath.pi * x)
    direct = 2 * e(2 * h[0]) * e(tau) + 1 - e(-2 * h[0]) * e(2 * tau)
    assert abs(evaluate(s, h, tau) - direct) < 1e-12
    with pytest.raises(ValueError):
        evaluate(s, h, 0.5)


@settings(max_examples=40, deadline=None)
@given(m=st.integers(1, 12), k=st.integers(-30, 30), j=st.integers(-30, 30))
def test_cyclotomic_ring(m, k, j):
    R = CyclotomicRing(m)
    a, b = R.zeta_power(k), R.zeta_power(j)
    assert R.mul(a, b) == R.zeta_power(k + j)
    assert R.zeta_power(m) == R.one
    assert abs(R.to_complex(R.add(a, b)) - (cmath.exp(2j * cmath.pi * k / m) + cmath.exp(2j * cmath.pi * j / m))) < 1e-9
    total = R.zero
    for t in range(m):
        total = R.add(total, R.zeta_power(t))
    assert R.is_zero(total) == (m > 1)
    assert len(cyclotomic_poly(m)) == euler_phi(m) + 1


@settings(max_examples=40, deadline=None)
@given(rows=st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=2, max_size=3))
def test_exact_linear_algebra(rows):
    for v in integer_kernel(rows):
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    if len(rows) == 3 and det(rows) != 0:
        assert mat_mul(rows, inverse(rows)) == identity(3)
    sol = gf2_solve(rows, [1] * len(rows))
    if sol is not None:
        assert all(sum(a * b for a, b in zip(r, sol)) % 2 == 1 for r in rows)
