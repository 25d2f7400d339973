import cmath
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from loopchar.cartan_core import VectorH, act, build_root_system
from loopchar.center_sigma import sigma_data
from loopchar.characters import (
    CharacterError,
    CharacterResult,
    cocycle_action,
    conjugacy_normal_form,
    freudenthal_multiplicities,
    heat_residual,
    is_sigma_invariant,
    kac_weyl_character,
    quasi_periodicity_check,
    twisted_character,
)
from loopchar.cli import anti_invariance_check
from loopchar.lattices_weyl import (
    ExcludedCase,
    dominant_level_k_weights,
    twisted_weyl_data,
    weyl_group_elements,
)
from loopchar.qseries import FourierQSeries

A1 = build_root_system("A1")
C2 = build_root_system("C2")


def test_trivial_representation():
    ch = kac_weyl_character(A1, VectorH([0]), 0, 5)
    assert ch.series.terms == {(VectorH([0]), 0): 1}


def test_basic_representation_string():
    ch = kac_weyl_character(A1, VectorH([0]), 1, 6)
    assert [ch.series.coefficient(VectorH([0]), n) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]
    mults = freudenthal_multiplicities(A1, VectorH([0]), 1, 6)
    assert [mults.get((VectorH([0]), n), 0) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]


@pytest.mark.parametrize("label,k", [("A1", 1), ("A1", 2), ("B2", 1), ("G2", 1)])
def test_oracle_agreement(label, k):
    rs = build_root_system(label)
    for lam in dominant_level_k_weights(rs, k):
        ch = kac_weyl_character(rs, lam, k, 4)
        assert dict(ch.series.terms) == freudenthal_multiplicities(rs, lam, k, 4)


def test_freudenthal_weyl_invariance():
    rs = build_root_system("A2")
    lam = rs.fundamental_weights[0]
    mults = freudenthal_multiplicities(rs, lam, 1, 4)
    assert mults[(lam, 0)] == 1
    for (mu, d), m in mults.items():
        for i in (1, 2):
            assert mults[(rs.reflect(i, mu), d)] == m


def test_level_checks():
    with pytest.raises(CharacterError):
        kac_weyl_character(A1, VectorH([1]), 1, 3)  # <lambda, theta> = 2 > 1
    with pytest.raises(CharacterError):
        kac_weyl_character(A1, VectorH([Fraction(1, 4)]), 1, 3)
    with pytest.raises(CharacterError):
        kac_weyl_character(A1, VectorH([0]), -1, 3)


def test_twisted_c2_leading_term_and_heat():
    s = sigma_data(C2, 2)
    lam = C2.fundamental_weights[0]
    ch = twisted_character(C2, s, lam, 1, 6)
    assert not ch.zero and ch.integral
    assert ch.series.coefficient(ch.lam, 0) == 1
    assert heat_residual(ch).is_zero()
    assert anti_invariance_check(ch)


def test_twisted_denominator_gives_one_at_level_zero():
    for label, node in [("C2", 2), ("D4", 1), ("E6", 1)]:
        rs = build_root_system(label)
        ch = twisted_character(rs, sigma_data(rs, node), VectorH.zero(rs.rank), 0, 3)
        assert ch.series.terms == {(VectorH.zero(rs.rank), 0): 1}


def test_vanishing_for_non_invariant_weights():
    rs = build_root_system("A2")
    s = sigma_data(rs, 1)
    for lam in dominant_level_k_weights(rs, 1):
        assert not is_sigma_invariant(rs, s, lam, 1)
        ch = twisted_character(rs, s, lam, 1, 4)
        assert ch.zero and ch.series.is_zero()
    with pytest.raises(ExcludedCase):
        twisted_character(rs, s, rs.rho, 3, 2)


def test_specialization_to_trivial_center():
    rs = build_root_system("B2")
    lam = rs.fundamental_weights[1]
    a = kac_weyl_character(rs, lam, 1, 4)
    b = twisted_character(rs, sigma_data(rs, 0), lam, 1, 4)
    assert a.series.terms == b.series.terms


def test_heat_detector_fires():
    ch = kac_weyl_character(A1, VectorH([0]), 1, 6)
    terms = dict(ch.series.terms)
    key = (VectorH([0]), Fraction(3))
    terms[key] += 1
    bad = CharacterResult(ch.rs, ch.sigma, ch.lam, ch.k, ch.K,
                          FourierQSeries(terms, 6, ch.series.ring, ch.series.gram), ch.provenance)
    res = heat_residual(bad)
    assert not res.is_zero()
    assert res.min_degree == 3


def test_quasi_periodicity_detector():
    ch = kac_weyl_character(A1, VectorH([0]), 1, 16)
    assert quasi_periodicity_check(ch, trials=20) < 1e-10
    assert quasi_periodicity_check(ch, trials=20, k_override=2) > 1e-3


def test_cocycle_action_examples():
    s = sigma_data(A1, 0)
    h = np.array([0.3 + 0.05j])
    tau = 0.1 + 0.8j
    h2, u2 = cocycle_action(A1, s, 2, VectorH([0]), (h, 1.0, tau))
    assert np.allclose(h2, h) and abs(u2 - 1) < 1e-15
    alpha = VectorH([1])
    h2, u2 = cocycle_action(A1, s, 2, alpha, (h, 1.0, tau))
    # <alpha, h> in the Gram form is 2 h_1
    expected = cmath.exp(2j * cmath.pi * (-2 * tau + 2 * (2 * h[0])))
    assert abs(u2 - expected) < 1e-12
    assert np.allclose(h2, h - tau)


@settings(max_examples=30, deadline=None)
@given(b1=st.integers(-2, 2), b2=st.integers(-2, 2), x=st.floats(-1, 1), y=st.floats(0.7, 1.0))
def test_cocycle_composition(b1, b2, x, y):
    rs = C2
    s = sigma_data(rs, 2)
    d = twisted_weyl_data(rs, s)
    L = d.translation_lattice
    beta1, beta2 = L.vector([b1]), L.vector([b2])
    tau = complex(x, y)
    h = np.array([0.1 + 0.02j, 0.0])
    p1 = cocycle_action(rs, s, 1, beta1, (h, 1.0, tau))
    p2 = cocycle_action(rs, s, 1, beta2, (p1[0], p1[1], tau))
    direct = cocycle_action(rs, s, 1, beta1 + beta2, (h, 1.0, tau))
    assert np.allclose(p2[0], direct[0])
    assert abs(p2[1] - direct[1]) <= 1e-9 * max(1.0, abs(direct[1]))


def test_cocycle_rejects_vectors_outside_lattice():
    s = sigma_data(C2, 2)
    with pytest.raises(ValueError):
        cocycle_action(C2, s, 1, VectorH([Fraction(1, 3), 0]), (np.zeros(2), 1.0, 1j))


@pytest.mark.parametrize("label,node", [("C2", 2), ("D4", 1), ("A5", 3)])
def test_conjugacy_normal_form(label, node):
    rs = build_root_system(label)
    s = sigma_data(rs, node)
    d = twisted_weyl_data(rs, s)
    group = weyl_group_elements(d)
    rng = random.Random(7)
    for _ in range(10):
        a = sum((b * Fraction(rng.randint(-9, 9), 7) for b in d.fixed_space_basis), VectorH.zero(rs.rank))
        b = sum((v * Fraction(rng.randint(-9, 9), 5) for v in d.fixed_space_basis), VectorH.zero(rs.rank))
        nf = conjugacy_normal_form(rs, s, (a, b))
        assert conjugacy_normal_form(rs, s, nf) == nf
        assert d.in_alcove(nf[1], 1)
        M, _ = rng.choice(group)
        L = d.translation_lattice
        shift = L.vector([rng.randint(-2, 2) for _ in range(L.rank)])
        real = L.vector([rng.randint(-2, 2) for _ in range(L.rank)])
        assert conjugacy_normal_form(rs, s, (act(M, a) + real, act(M, b) - shift)) == nf


def test_c2_normal_form_lies_on_segment():
    s = sigma_data(C2, 2)
    d = twisted_weyl_data(C2, s)
    assert len(d.fixed_space_basis) == 1
    v = d.fixed_space_basis[0]
    a, b = conjugacy_normal_form(C2, s, (v * Fraction(2, 3), v * Fraction(7, 3)))
    assert d.in_alcove(b, 1)
    assert len(d.walls) == 2
