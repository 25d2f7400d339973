from fractions import Fraction
from itertools import product

import pytest

from loopchar.affine_root import extended_diagram
from loopchar.cartan_core import VectorH, act, build_root_system
from loopchar.center_sigma import (
    CenterError,
    affine_image,
    center_elements,
    cocharacter_basis,
    commutator_form_exists,
    commutator_form_exists_bruteforce,
    levels,
    sigma_data,
)
from loopchar.lattices_weyl import coroot_lattice

CASES = [("A1", 1), ("A2", 1), ("A3", 2), ("A5", 2), ("A5", 3), ("B3", 1), ("C2", 2),
         ("C3", 3), ("D4", 1), ("D4", 3), ("D4", 4), ("D5", 1), ("D5", 5), ("D6", 6),
         ("E6", 1), ("E6", 5), ("E7", 6)]


def coweight_order(rs, node):
    L = coroot_lattice(rs)
    m = 1
    while not L.contains(rs.fundamental_coweights[node - 1] * m):
        m += 1
    return m


@pytest.mark.parametrize("label,node", CASES)
def test_sigma_is_diagram_automorphism(label, node):
    rs = build_root_system(label)
    s = sigma_data(rs, node)
    dia = extended_diagram(rs)
    p = s.sigma_perm
    assert sorted(p) == list(range(dia.size))
    assert all(dia.cartan[p[i]][p[j]] == dia.cartan[i][j] for i in range(dia.size) for j in range(dia.size))
    assert p[0] == node
    assert s.order == coweight_order(rs, node)


@pytest.mark.parametrize("label,node", CASES)
def test_sigma_maps_simple_affine_roots(label, node):
    rs = build_root_system(label)
    s = sigma_data(rs, node)
    dia = extended_diagram(rs)
    for i, r in enumerate(dia.nodes):
        img = affine_image(rs, s.w_c_matrix, s.lambda_c, r.finite_part, r.degree)
        target = dia.nodes[s.sigma_perm[i]]
        assert img == (target.finite_part, target.degree)


@pytest.mark.parametrize("label,node", CASES)
def test_eigendims_and_h0(label, node):
    rs = build_root_system(label)
    s = sigma_data(rs, node)
    assert sum(s.eigendims) == rs.rank
    assert len(s.eigendims) == s.order
    assert s.w(s.h0) - s.h0 == s.lambda_c
    # w_c has order dividing ord(sigma) on h
    v = rs.rho
    for _ in range(s.order):
        v = s.w(v)
    assert v == rs.rho


def test_spec_sigma_rows():
    rs = build_root_system("C2")
    s = sigma_data(rs, 2)
    assert s.sigma_perm == (2, 1, 0)
    assert s.eigendims == (1, 1)
    assert s.h0 == VectorH([Fraction(-1, 2), Fraction(-1, 2)])
    assert sigma_data(build_root_system("A1"), 1).sigma_perm == (1, 0)
    d5 = sigma_data(build_root_system("D5"), 5)
    assert d5.order == 4 and d5.eigendims == (1, 1, 2, 1)
    assert d5.sigma_perm == (5, 4, 3, 2, 0, 1)
    assert sigma_data(build_root_system("E7"), 6).eigendims == (4, 3)


def test_center_elements():
    assert center_elements(build_root_system("E8")) == []
    assert center_elements(build_root_system("D5")) == [1, 4, 5]
    assert center_elements(build_root_system("A4")) == [1, 2, 3, 4]
    with pytest.raises(CenterError):
        sigma_data(build_root_system("E6"), 2)


@pytest.mark.parametrize("label,node,k_f,k_b", [
    ("A1", 1, 2, 2), ("A2", 1, 1, 3), ("C2", 2, 1, 1), ("C3", 3, 2, 2), ("B3", 1, 1, 1),
    ("D4", 1, 1, 1), ("D5", 1, 1, 1), ("D5", 5, 2, 4), ("E6", 1, 1, 3), ("E7", 6, 2, 2),
])
def test_levels_table(label, node, k_f, k_b):
    lv = levels(build_root_system(label), node)
    assert (lv.k_f, lv.k_b) == (k_f, k_b)


def _independent_form_search(rs, node, k):
    # alternating Z/2 forms w on Lambda(T) with w(x, y) = k<x, y> mod 2 for x in Q^vee
    basis = cocharacter_basis(rs, node)
    r = len(basis)
    L = coroot_lattice(rs)
    from loopchar._exact import solve

    def coords(v):
        cols = [[b[i] for b in basis] for i in range(rs.rank)]
        return [int(c) for c in solve(cols, list(v))]

    cor = [coords(rs.simple_coroot(i)) for i in range(1, rs.rank + 1)]
    for i in range(1, rs.rank + 1):
        for b in basis:
            if (k * rs.pair(rs.simple_coroot(i), b)).denominator != 1:
                return False
    pairs = [(a, b) for a in range(r) for b in range(a + 1, r)]
    for bits in product((0, 1), repeat=len(pairs)):
        w = [[0] * r for _ in range(r)]
        for (a, b), v in zip(pairs, bits):
            w[a][b] = w[b][a] = v
        good = True
        for i, x in enumerate(cor):
            for j in range(r):
                lhs = sum(x[a] * w[a][j] for a in range(r)) % 2
                rhs = int(k * rs.pair(rs.simple_coroot(i + 1), basis[j])) % 2
                if lhs != rhs:
                    good = False
                    break
            if not good:
                break
        if good:
            return True
    return False


@pytest.mark.parametrize("label,node", [c for c in CASES if c[0] not in ("E7",)])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_gf2_solver_matches_exhaustive_search(label, node, k):
    rs = build_root_system(label)
    ok, omega = commutator_form_exists(rs, node, k)
    assert ok == commutator_form_exists_bruteforce(rs, node, k)
    assert ok == _independent_form_search(rs, node, k)
    if ok:
        r = len(omega)
        assert all(omega[i][i] == 0 and omega[i][j] == omega[j][i] for i in range(r) for j in range(r))
