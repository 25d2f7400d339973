from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from loopchar.cartan_core import VectorH, act, build_root_system
from loopchar.center_sigma import sigma_data
from loopchar.lattices_weyl import (
    ExcludedCase,
    alcove_reduce,
    apply_walls,
    coroot_lattice,
    dominant_level_k_weights,
    dual_lattice,
    fixed_coroot_lattice,
    orbit_lattice,
    twisted_weyl_data,
    untwisted_weyl_data,
    weyl_group_elements,
)


@pytest.mark.parametrize("label,node,rank,torsion,w0", [
    ("A3", 2, 1, 2, 2), ("A5", 2, 1, 3, 2), ("A5", 3, 2, 4, 6), ("B3", 1, 2, 2, 8),
    ("C2", 2, 1, 2, 2), ("C3", 3, 1, 2, 2), ("D4", 1, 2, 2, 8), ("D4", 4, 2, 2, 8),
    ("D5", 1, 3, 2, 48), ("D5", 5, 1, 2, 2), ("E6", 1, 2, 3, 12),
])
def test_twisted_weyl_data(label, node, rank, torsion, w0):
    rs = build_root_system(label)
    s = sigma_data(rs, node)
    d = twisted_weyl_data(rs, s)
    assert d.translation_lattice.rank == rank == len(d.fixed_space_basis)
    assert d.torsion_order == torsion
    assert d.translation_lattice.index_of(d.fixed_coroots) == torsion
    assert len(weyl_group_elements(d)) == w0


@pytest.mark.parametrize("label", ["A1", "B2", "G2", "A3"])
def test_untwisted_group_is_full_weyl_group(label):
    rs = build_root_system(label)
    els = weyl_group_elements(untwisted_weyl_data(rs))
    assert len(els) == rs.weyl_order
    assert sum(sign for _, sign in els) == 0


def test_excluded_case():
    rs = build_root_system("A2")
    with pytest.raises(ExcludedCase):
        twisted_weyl_data(rs, sigma_data(rs, 1))


@pytest.mark.parametrize("label", ["A2", "B3", "C2", "G2", "D4"])
def test_dual_lattice(label):
    rs = build_root_system(label)
    L = coroot_lattice(rs)
    D = dual_lattice(rs, L)
    for a in D.basis:
        for b in L.basis:
            assert rs.pair(a, b).denominator == 1
    # the dual of the coroot lattice is the weight lattice
    for w in rs.fundamental_weights:
        assert D.contains(w)
    DD = dual_lattice(rs, D)
    assert all(L.contains(b) for b in DD.basis) and all(DD.contains(b) for b in L.basis)


def test_orbit_lattice_contains_fixed_coroots():
    for label, node in [("C2", 2), ("D4", 1), ("E6", 1)]:
        rs = build_root_system(label)
        s = sigma_data(rs, node)
        L = orbit_lattice(rs, s)
        for b in fixed_coroot_lattice(rs, s).basis:
            assert L.contains(b)
            assert s.w(b) == b


def test_dominant_level_k_weights_counts():
    assert len(dominant_level_k_weights(build_root_system("A1"), 3)) == 4
    assert len(dominant_level_k_weights(build_root_system("A2"), 1)) == 3
    assert len(dominant_level_k_weights(build_root_system("C2"), 1)) == 3
    assert len(dominant_level_k_weights(build_root_system("E8"), 1)) == 1
    assert len(dominant_level_k_weights(build_root_system("A3"), 2)) == 10


frac = st.fractions(min_value=-4, max_value=4, max_denominator=7)


@settings(max_examples=40, deadline=None)
@given(coeffs=st.lists(frac, min_size=3, max_size=3),
       case=st.sampled_from([("C2", 2), ("D4", 1), ("A5", 3), ("B3", 1), ("D5", 1), (None, None)]),
       level=st.sampled_from([1, 2, Fraction(3, 2)]))
def test_alcove_reduce(coeffs, case, level):
    label, node = case
    if label is None:
        rs = build_root_system("C3")
        d = untwisted_weyl_data(rs)
    else:
        rs = build_root_system(label)
        d = twisted_weyl_data(rs, sigma_data(rs, node))
    x = VectorH.zero(rs.rank)
    for c, b in zip(coeffs, d.fixed_space_basis):
        x = x + b * c
    y, word = alcove_reduce(d, x, level)
    assert d.in_alcove(y, level)
    assert apply_walls(d, x, word, level) == y
    assert alcove_reduce(d, y, level) == (y, [])
    # the reduced point stays in the fixed space
    assert d.sigma.w(y) == y
