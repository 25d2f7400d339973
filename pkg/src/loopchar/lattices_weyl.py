"""Lattices in h, the twisted Weyl group data, alcove reduction and P_+^k."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

from ._exact import (
    identity,
    integer_kernel,
    integer_row_basis,
    inverse,
    mat_add,
    mat_mul,
    mat_scale,
    nullspace,
    rational_row_basis,
    solve,
    common_denominator,
)
from .affine_root import extended_diagram
from .cartan_core import RootSystem, VectorH, act
from .center_sigma import SigmaData, cocharacter_basis


class ExcludedCase(ValueError):
    """Raised for the full rotation of the extended A_{n-1} diagram."""


@dataclass(frozen=True)
class Lattice:
    ambient_dim: int
    basis: tuple[VectorH, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    scale: Fraction = Fraction(1)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence) -> Optional[list[Fraction]]:
        """Rational coordinates of v in the basis, or None if v is outside the span."""
        if not self.basis:
            return [] if not any(v) else None
        cols = [[b[r] for b in self.basis] for r in range(self.ambient_dim)]
        return solve(cols, list(v))

    def contains(self, v: Sequence) -> bool:
        x = self.coordinates(v)
        return x is not None and all(c.denominator == 1 for c in x)

    def vector(self, coeffs: Sequence) -> VectorH:
        acc = VectorH.zero(self.ambient_dim)
        for c, b in zip(coeffs, self.basis):
            if c:
                acc = acc + b * c
        return acc

    def index_of(self, sub: "Lattice") -> int:
        """[self : sub] for a full-rank sublattice."""
        rows = []
        for b in sub.basis:
            x = self.coordinates(b)
            if x is None or any(c.denominator != 1 for c in x):
                raise ValueError("not a sublattice")
            rows.append([int(c) for c in x])
        hnf = integer_row_basis(rows)
        if len(hnf) != self.rank:
            raise ValueError("sublattice is not of full rank")
        idx = 1
        for i, row in enumerate(hnf):
            idx *= row[i]
        return abs(idx)

    def to_json(self) -> dict:
        return {
            "basis": [[str(x) for x in b] for b in self.basis],
            "gram": [[str(x) for x in r] for r in self.gram],
            "scale": str(self.scale),
        }


def make_lattice(rs: RootSystem, generators, scale=1) -> Lattice:
    scale = Fraction(scale)
    basis = tuple(VectorH(b) for b in rational_row_basis(generators)) if generators else ()
    gram = tuple(tuple(scale * rs.pair(a, b) for b in basis) for a in basis)
    return Lattice(ambient_dim=rs.rank, basis=basis, gram=gram, scale=scale)


def coroot_lattice(rs: RootSystem) -> Lattice:
    return make_lattice(rs, [rs.simple_coroot(i) for i in range(1, rs.rank + 1)])


def cocharacter_lattice(rs: RootSystem, c_node: int) -> Lattice:
    return make_lattice(rs, cocharacter_basis(rs, c_node))


def projector(sigma: SigmaData) -> list[list[Fraction]]:
    """Averaging projector (1/ord) sum_j w_c^j onto h^{w_c}."""
    M = [list(r) for r in sigma.w_c_matrix]
    n = len(M)
    acc = mat_scale(identity(n), 0)
    power = identity(n)
    for _ in range(sigma.order):
        acc = mat_add(acc, power)
        power = mat_mul(power, M)
    return mat_scale(acc, Fraction(1, sigma.order))


def project(sigma: SigmaData, v: Sequence) -> VectorH:
    return act(_projector_cached(sigma), v)


@lru_cache(maxsize=None)
def _projector_cached(sigma: SigmaData):
    return tuple(tuple(r) for r in projector(sigma))


def fixed_space_basis(sigma: SigmaData) -> list[VectorH]:
    M = sigma.w_c_matrix
    n = len(M)
    A = [[M[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    return [VectorH(v) for v in nullspace(A)]


def orbit_lattice(rs: RootSystem, sigma: SigmaData) -> Lattice:
    """Lambda(T_{w_c}): the averaging projection of the coroot lattice."""
    gens = [project(sigma, rs.simple_coroot(i)) for i in range(1, rs.rank + 1)]
    return make_lattice(rs, gens)


def fixed_coroot_lattice(rs: RootSystem, sigma: SigmaData) -> Lattice:
    """Coroot lattice intersected with h^{w_c}."""
    n = rs.rank
    cor = [rs.simple_coroot(i) for i in range(1, n + 1)]
    M = sigma.w_c_matrix
    # (w_c - 1) applied to sum_i x_i alpha_i^vee
    cols = []
    for v in cor:
        wv = act(M, v)
        cols.append([wv[r] - v[r] for r in range(n)])
    A = [[cols[c][r] for c in range(n)] for r in range(n)]
    if not any(any(row) for row in A):
        return coroot_lattice(rs)
    kern = integer_kernel(A)
    gens = []
    for x in kern:
        acc = VectorH.zero(n)
        for xi, v in zip(x, cor):
            if xi:
                acc = acc + v * xi
        gens.append(acc)
    return make_lattice(rs, gens)


def dual_lattice(rs: RootSystem, L: Lattice, scale=1) -> Lattice:
    """{x in span L : scale <x, b> in Z for all b in L}."""
    scale = Fraction(scale)
    G = [[scale * rs.pair(a, b) for b in L.basis] for a in L.basis]
    try:
        Ginv = inverse(G)
    except ZeroDivisionError:
        raise ValueError("degenerate form on lattice") from None
    basis = []
    for i in range(L.rank):
        acc = VectorH.zero(L.ambient_dim)
        for j, b in enumerate(L.basis):
            if Ginv[i][j]:
                acc = acc + b * Ginv[i][j]
        basis.append(acc)
    return make_lattice(rs, basis, L.scale)


# ------------------------------------------------------------ twisted data

def node_orbits(sigma: SigmaData) -> list[tuple[int, ...]]:
    seen, orbits = set(), []
    for i in range(len(sigma.sigma_perm)):
        if i in seen:
            continue
        orb, j = [], i
        while j not in orb:
            orb.append(j)
            j = sigma.sigma_perm[j]
        seen.update(orb)
        orbits.append(tuple(orb))
    return orbits


def adjacency_case(rs: RootSystem, sigma: SigmaData) -> bool:
    """True iff some affine simple root is non-orthogonal to its sigma_c-image."""
    dia = extended_diagram(rs)
    return any(
        sigma.sigma_perm[i] != i and dia.cartan[i][sigma.sigma_perm[i]] != 0
        for i in range(dia.size)
    )


def is_excluded(rs: RootSystem, sigma: SigmaData) -> bool:
    return rs.type_label.startswith("A") and sigma.order == rs.rank + 1 and sigma.order > 1


@dataclass(frozen=True)
class Wall:
    """Affine functional x -> <vector, x> + degree * level, with its node orbit."""

    vector: VectorH
    degree: int
    nodes: tuple[int, ...]

    def value(self, rs: RootSystem, x: Sequence, level) -> Fraction:
        return rs.pair(self.vector, x) + self.degree * Fraction(level)


@dataclass(frozen=True)
class TwistedWeylData:
    rs: RootSystem
    sigma: SigmaData
    fixed_space_basis: tuple[VectorH, ...]
    W0_generators: tuple[VectorH, ...]  # reflection vectors in h^{w_c}
    translation_lattice: Lattice
    fixed_coroots: Lattice
    walls: tuple[Wall, ...]
    torsion: tuple[VectorH, ...]  # coset representatives of translation_lattice / fixed_coroots

    @property
    def torsion_order(self) -> int:
        return len(self.torsion)

    def reflect(self, v: VectorH, x: VectorH) -> VectorH:
        return x - v * (2 * self.rs.pair(x, v) / self.rs.norm2(v))

    def reflect_wall(self, wall: Wall, x: VectorH, level) -> VectorH:
        v = wall.vector
        return x - v * (2 * wall.value(self.rs, x, level) / self.rs.norm2(v))

    def in_alcove(self, x: VectorH, level) -> bool:
        return all(w.value(self.rs, x, level) >= 0 for w in self.walls)


def twisted_weyl_data(rs: RootSystem, sigma: SigmaData) -> TwistedWeylData:
    if is_excluded(rs, sigma):
        raise ExcludedCase(
            f"{rs.type_label} modulo its full center: the rotation of order {sigma.order} is excluded"
        )
    return _twisted_weyl_data(rs, sigma)


@lru_cache(maxsize=None)
def _twisted_weyl_data(rs: RootSystem, sigma: SigmaData) -> TwistedWeylData:
    dia = extended_diagram(rs)
    walls, gens = [], []
    for orb in node_orbits(sigma):
        v = project(sigma, dia.nodes[orb[0]].finite_part) * len(orb)
        deg = sum(dia.nodes[i].degree for i in orb)
        walls.append(Wall(vector=v, degree=deg, nodes=orb))
        if 0 not in orb:
            gens.append(v)
    trans = orbit_lattice(rs, sigma)
    fixed = fixed_coroot_lattice(rs, sigma)
    return TwistedWeylData(
        rs=rs,
        sigma=sigma,
        fixed_space_basis=tuple(fixed_space_basis(sigma)),
        W0_generators=tuple(gens),
        translation_lattice=trans,
        fixed_coroots=fixed,
        walls=tuple(walls),
        torsion=tuple(_coset_reps(trans, fixed)),
    )


def _coset_reps(big: Lattice, sub: Lattice) -> list[VectorH]:
    rows = [[int(c) for c in big.coordinates(b)] for b in sub.basis]
    hnf = integer_row_basis(rows)
    diag = [hnf[i][i] for i in range(len(hnf))]
    return [big.vector(c) for c in product(*(range(d) for d in diag))]


def untwisted_weyl_data(rs: RootSystem) -> TwistedWeylData:
    from .center_sigma import sigma_data

    return twisted_weyl_data(rs, sigma_data(rs, 0))


def weyl_group_elements(data: TwistedWeylData, limit: int = 200000) -> list[tuple[tuple, int]]:
    """Enumerate W0 as (matrix, sign) pairs by breadth-first search over generators."""
    rs = data.rs
    n = rs.rank
    mats = []
    for v in data.W0_generators:
        cols = [data.reflect(v, VectorH.unit(n, j)) for j in range(n)]
        mats.append(tuple(tuple(cols[j][r] for j in range(n)) for r in range(n)))
    start = tuple(tuple(r) for r in identity(n))
    seen = {start: 1}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for m in mats:
            h = tuple(tuple(r) for r in mat_mul(m, g))
            if h not in seen:
                seen[h] = -seen[g]
                if len(seen) > limit:
                    raise RuntimeError("Weyl group too large to enumerate")
                queue.append(h)
    return list(seen.items())


def alcove_reduce(data: TwistedWeylData, x: Sequence, level=1, max_steps: int = 100000):
    """Move x into the closed fundamental alcove by wall reflections.

    Returns (x_reduced, word) with word the list of wall indices applied in order.
    """
    level = Fraction(level)
    if level <= 0:
        raise ValueError("level must be positive")
    x = VectorH(x)
    word: list[int] = []
    for _ in range(max_steps):
        for idx, wall in enumerate(data.walls):
            if wall.value(data.rs, x, level) < 0:
                x = data.reflect_wall(wall, x, level)
                word.append(idx)
                break
        else:
            return x, word
    raise RuntimeError("alcove reduction did not terminate")


def apply_walls(data: TwistedWeylData, x: Sequence, word: Sequence[int], level=1) -> VectorH:
    x = VectorH(x)
    for idx in word:
        x = data.reflect_wall(data.walls[idx], x, level)
    return x


def dominant_level_k_weights(rs: RootSystem, k: int) -> list[VectorH]:
    """P_+^k: dominant integral weights with <lambda, theta> <= k."""
    if k < 0:
        raise ValueError("level must be nonnegative")
    out = []
    ranges = [range(0, k // c + 1) for c in rs.comarks]
    for coords in product(*ranges):
        if sum(a * c for a, c in zip(coords, rs.comarks)) <= k:
            out.append(rs.from_weight_coords(coords))
    return out
