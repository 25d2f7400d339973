import pytest

from loopchar.affine_root import AffineRoot, affine_height, extended_diagram, real_positive_roots
from loopchar.cartan_core import build_root_system

TYPES = ["A1", "A3", "B3", "C3", "D4", "D5", "E6", "E7", "E8", "F4", "G2"]


@pytest.mark.parametrize("label", TYPES)
def test_marks_annihilate_extended_cartan(label):
    dia = extended_diagram(build_root_system(label))
    a = dia.marks
    for j in range(dia.size):
        assert sum(a[i] * dia.cartan[j][i] for i in range(dia.size)) == 0
    assert dia.coxeter_number == build_root_system(label).coxeter_number


@pytest.mark.parametrize("label", TYPES)
def test_delta_has_zero_finite_part(label):
    rs = build_root_system(label)
    dia = extended_diagram(rs)
    total = AffineRoot(rs.simple_root(1) * 0, 0)
    for m, node in zip(dia.marks, dia.nodes):
        total = total + AffineRoot(node.finite_part * m, node.degree * m)
    assert total.finite_part.is_zero() and total.degree == 1
    assert total.is_imaginary


def test_real_roots_counts_and_heights():
    rs = build_root_system("B3")
    dia = extended_diagram(rs)
    roots = real_positive_roots(rs, 3)
    assert len(roots) == len(rs.positive_roots) + 3 * len(rs.roots)
    assert all(r.is_positive(rs) and r.is_real(rs) for r in roots)
    assert affine_height(dia, dia.nodes[0]) == 1
    assert all(affine_height(dia, r) >= 1 for r in roots)
    assert affine_height(dia, AffineRoot(rs.highest_root * -1, 2)) == 2 * dia.coxeter_number - (dia.coxeter_number - 1)
    with pytest.raises(ValueError):
        real_positive_roots(rs, -1)
