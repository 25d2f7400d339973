"""Untwisted affine root system: extended diagram and positive real roots."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cartan_core import RootSystem, VectorH


@dataclass(frozen=True)
class AffineRoot:
    finite_part: VectorH
    degree: int

    @property
    def is_imaginary(self) -> bool:
        return self.finite_part.is_zero() and self.degree != 0

    def is_real(self, rs: RootSystem) -> bool:
        return self.finite_part in rs.root_set

    def is_positive(self, rs: RootSystem) -> bool:
        if self.degree > 0:
            return True
        return self.degree == 0 and self.finite_part in rs.root_set and rs.height(self.finite_part) > 0

    def __add__(self, other: "AffineRoot") -> "AffineRoot":
        return AffineRoot(self.finite_part + other.finite_part, self.degree + other.degree)

    def __neg__(self) -> "AffineRoot":
        return AffineRoot(-self.finite_part, -self.degree)


@dataclass(frozen=True)
class AffineDiagram:
    rs: RootSystem
    cartan: tuple[tuple[int, ...], ...]
    marks: tuple[int, ...]
    nodes: tuple[AffineRoot, ...]

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def coxeter_number(self) -> int:
        return sum(self.marks)

    def node_pair(self, i: int, j: int) -> Fraction:
        return self.rs.pair(self.nodes[i].finite_part, self.nodes[j].finite_part)


def extended_diagram(rs: RootSystem) -> AffineDiagram:
    l = rs.rank
    nodes = [AffineRoot(-rs.highest_root, 1)] + [AffineRoot(rs.simple_root(i), 0) for i in range(1, l + 1)]
    fin = [n.finite_part for n in nodes]
    cartan = tuple(
        tuple(int(2 * rs.pair(fin[i], fin[j]) / rs.pair(fin[i], fin[i])) for j in range(l + 1))
        for i in range(l + 1)
    )
    return AffineDiagram(rs=rs, cartan=cartan, marks=(1,) + rs.marks, nodes=tuple(nodes))


def real_positive_roots(rs: RootSystem, N: int) -> list[AffineRoot]:
    """All alpha + n delta with 0 <= n <= N (alpha > 0 when n = 0)."""
    if N < 0:
        raise ValueError("truncation N must be nonnegative")
    out = [AffineRoot(a, 0) for a in rs.positive_roots]
    for n in range(1, N + 1):
        out.extend(AffineRoot(a, n) for a in rs.roots)
    return out


def affine_height(diagram: AffineDiagram, r: AffineRoot) -> int:
    """Sum of the coefficients of a real root in the basis alpha_0..alpha_l."""
    rs = diagram.rs
    if r.finite_part not in rs.root_set:
        raise ValueError("not a real affine root")
    # alpha + n delta = n alpha_0 + (n theta + alpha)
    return int(r.degree * diagram.coxeter_number + rs.height(r.finite_part))
