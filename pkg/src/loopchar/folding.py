"""Folding the affine root system along sigma_c.

The folded system is read off from the sigma_c-orbits of affine simple roots
and identified by matching its Cartan matrix, up to relabeling of nodes,
against a catalog of affine Cartan matrices in Kac's notation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Optional

from .affine_root import AffineRoot, affine_height, extended_diagram, real_positive_roots
from .cartan_core import RootSystem, VectorH
from .center_sigma import SigmaData, affine_image
from .lattices_weyl import adjacency_case, is_excluded, node_orbits, project


# ----------------------------------------------------------------- catalog

def _cartan_from(norms, edges) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix from squared lengths and (i, j, bonds) edges."""
    n = len(norms)
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j, bonds in edges:
        # G_ij^2 = bonds * n_i * n_j / 4
        sq = Fraction(bonds) * norms[i] * norms[j] / 4
        num, den = isqrt(sq.numerator), isqrt(sq.denominator)
        if Fraction(num, den) ** 2 != sq:
            raise ValueError("irrational bond")
        g = -Fraction(num, den)
        a[i][j] = int(2 * g / norms[i])
        a[j][i] = int(2 * g / norms[j])
    return tuple(tuple(r) for r in a)


def _dual(cartan):
    return tuple(tuple(cartan[j][i] for j in range(len(cartan))) for i in range(len(cartan)))


def _chain(n, bonds=None):
    bonds = bonds or {}
    return [(i, i + 1, bonds.get(i, 1)) for i in range(n - 1)]


def _untwisted(family: str, n: int):
    F = Fraction
    if family == "A":
        if n == 1:
            return _cartan_from([F(2), F(2)], [(0, 1, 4)])
        return _cartan_from([F(2)] * (n + 1), [(i, (i + 1) % (n + 1), 1) for i in range(n + 1)])
    if family == "B":
        norms = [F(2)] * n + [F(1)]
        edges = [(0, 2, 1)] + [(i, i + 1, 1) for i in range(1, n - 1)] + [(n - 1, n, 2)]
        return _cartan_from(norms, edges)
    if family == "C":
        norms = [F(2)] + [F(1)] * (n - 1) + [F(2)]
        return _cartan_from(norms, _chain(n + 1, {0: 2, n - 1: 2}))
    if family == "D":
        edges = [(0, 2, 1)] + [(i, i + 1, 1) for i in range(1, n - 1)] + [(n - 2, n, 1)]
        return _cartan_from([F(2)] * (n + 1), edges)
    if family == "E" and n == 6:
        return _cartan_from([F(2)] * 7, [(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (3, 6, 1), (6, 0, 1)])
    if family == "E" and n == 7:
        return _cartan_from([F(2)] * 8, _chain(7) + [(3, 7, 1)])
    if family == "E" and n == 8:
        return _cartan_from([F(2)] * 9, _chain(8) + [(5, 8, 1)])
    if family == "F":
        return _cartan_from([F(2), F(2), F(2), F(1), F(1)], _chain(5, {2: 2}))
    if family == "G":
        return _cartan_from([F(2), F(2), F(2, 3)], [(0, 1, 1), (1, 2, 3)])
    raise KeyError(family)


def _a_even_twisted(n: int):
    F = Fraction
    if n == 1:
        return _cartan_from([F(1), F(4)], [(0, 1, 4)])
    return _cartan_from([F(4)] + [F(2)] * (n - 1) + [F(1)], _chain(n + 1, {0: 2, n - 1: 2}))


def _d_twisted(n: int):
    F = Fraction
    return _cartan_from([F(1)] + [F(2)] * (n - 1) + [F(1)], _chain(n + 1, {0: 2, n - 1: 2}))


@lru_cache(maxsize=None)
def affine_catalog(max_rank: int = 8) -> tuple[tuple[str, tuple], ...]:
    """(label, Cartan matrix) for every affine type of finite-part rank <= max_rank."""
    out = []
    for n in range(1, max_rank + 1):
        out.append((f"A{n}(1)", _untwisted("A", n)))
    for n in range(3, max_rank + 1):
        out.append((f"B{n}(1)", _untwisted("B", n)))
    for n in range(2, max_rank + 1):
        out.append((f"C{n}(1)", _untwisted("C", n)))
    for n in range(4, max_rank + 1):
        out.append((f"D{n}(1)", _untwisted("D", n)))
    for n in (6, 7, 8):
        if n <= max_rank:
            out.append((f"E{n}(1)", _untwisted("E", n)))
    if max_rank >= 4:
        out.append(("F4(1)", _untwisted("F", 4)))
    out.append(("G2(1)", _untwisted("G", 2)))
    for n in range(1, max_rank + 1):
        out.append((f"A{2 * n}(2)", _a_even_twisted(n)))
    for n in range(3, max_rank + 1):
        out.append((f"A{2 * n - 1}(2)", _dual(_untwisted("B", n))))
    for n in range(2, max_rank + 1):
        out.append((f"D{n + 1}(2)", _d_twisted(n)))
    if max_rank >= 4:
        out.append(("E6(2)", _dual(_untwisted("F", 4))))
    out.append(("D4(3)", _dual(_untwisted("G", 2))))
    return tuple(out)


# Low-rank coincidences of Kac's families.
ALIASES = {
    "A1(1)": ("C1(1)",),
    "C2(1)": ("B2(1)",),
    "A3(1)": ("D3(1)",),
    "A3(2)": ("D3(2)",),
}


def _match(a, b) -> Optional[list[int]]:
    """Permutation p with a[p[i]][p[j]] == b[i][j], or None."""
    n = len(a)
    if len(b) != n:
        return None
    p: list[int] = []
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for cand in range(n):
            if used[cand]:
                continue
            if all(a[cand][p[j]] == b[i][j] and a[p[j]][cand] == b[j][i] for j in range(i)):
                p.append(cand)
                used[cand] = True
                if extend(i + 1):
                    return True
                p.pop()
                used[cand] = False
        return False

    return p if extend(0) else None


def classify_affine(cartan) -> str:
    for label, ref in affine_catalog():
        if len(ref) == len(cartan) and _match(cartan, ref) is not None:
            return label
    raise ValueError("unclassifiable affine Cartan matrix")


def labels_of(label: str) -> tuple[str, ...]:
    return (label,) + ALIASES.get(label, ())


# ------------------------------------------------------------------ orbits

@dataclass(frozen=True)
class RootOrbit:
    members: tuple[AffineRoot, ...]
    sign: int
    restricted: VectorH  # projection of the finite part onto h^{w_c}
    degree_sum: int  # sum of delta-degrees over the orbit
    multiplier: int  # m or 2m
    absorbed: bool  # fixed root swallowed by a doubled orbit (adjacency case)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def representative(self) -> AffineRoot:
        return self.members[0]

    @property
    def folded_root(self) -> tuple[VectorH, Fraction]:
        """The real root of the folded system: (finite part, delta-degree)."""
        c = Fraction(self.multiplier, self.size)
        return self.restricted * self.multiplier, c * self.degree_sum


def sigma_apply(rs: RootSystem, sigma: SigmaData, r: AffineRoot) -> AffineRoot:
    a, n = affine_image(rs, sigma.w_c_matrix, sigma.lambda_c, r.finite_part, r.degree)
    return AffineRoot(a, n)


def _orbit_of(rs, sigma, r):
    orb = [r]
    x = sigma_apply(rs, sigma, r)
    while x != r:
        orb.append(x)
        x = sigma_apply(rs, sigma, x)
        if len(orb) > sigma.order:
            raise RuntimeError("orbit longer than the order of sigma_c")
    return orb


def sign_s(rs: RootSystem, sigma: SigmaData, orbit) -> int:
    """s = -1 exactly for sigma_c-fixed roots in the adjacency case.

    Computed from the height parity rule: the image of e_alpha carries the
    sign (-1)^(ht + 1) when some simple root is linked to its image.
    """
    members = orbit.members if isinstance(orbit, RootOrbit) else tuple(orbit)
    if len(members) != 1 or not adjacency_case(rs, sigma):
        return 1
    ht = affine_height(extended_diagram(rs), members[0])
    return -1 if (ht + 1) % 2 else 1


def _make_orbit(rs, sigma, members, adjacent: bool) -> RootOrbit:
    m = len(members)
    rep = members[0]
    proj = project(sigma, rep.finite_part)
    if m == 1:
        mult, absorbed = 1, adjacent
    else:
        img = members[1]
        linked = rs.pair(rep.finite_part, img.finite_part) != 0
        mult, absorbed = (2 * m if linked else m), False
    return RootOrbit(
        members=tuple(members),
        sign=sign_s(rs, sigma, members),
        restricted=proj,
        degree_sum=sum(x.degree for x in members),
        multiplier=mult,
        absorbed=absorbed,
    )


def sigma_orbits(rs: RootSystem, sigma: SigmaData, N: int) -> list[RootOrbit]:
    """Complete sigma_c-orbits of the positive real roots of degree <= N.

    Orbits are complete, so members of degree above N may appear.
    """
    adjacent = adjacency_case(rs, sigma)
    seen: set = set()
    out = []
    for r in real_positive_roots(rs, N):
        if r in seen:
            continue
        members = _orbit_of(rs, sigma, r)
        seen.update(members)
        out.append(_make_orbit(rs, sigma, members, adjacent))
    return out


# ------------------------------------------------------------------- fold

@dataclass(frozen=True)
class FoldedRootSystem:
    input_type: str
    c_node: int
    orbits: tuple[RootOrbit, ...]
    simple_roots: tuple[tuple[VectorH, Fraction, tuple[int, ...]], ...]
    cartan: tuple[tuple[int, ...], ...]
    folded_type: str
    aliases: tuple[str, ...]
    delta_sigma: int  # delta_sigma = delta_sigma * delta
    adjacency_case: bool
    rho_wc: VectorH
    rho_wc_normsq: Fraction

    def signs_summary(self) -> dict:
        plus = sum(1 for o in self.orbits if o.sign == 1)
        return {"plus": plus, "minus": len(self.orbits) - plus}

    def to_json(self) -> dict:
        return {
            "input_type": self.input_type,
            "center": self.c_node,
            "folded_type": self.folded_type,
            "aliases": list(self.aliases),
            "delta_multiplier": self.delta_sigma,
            "adjacency_case": self.adjacency_case,
            "cartan": [list(r) for r in self.cartan],
            "rho_wc": [str(x) for x in self.rho_wc],
            "rho_wc_normsq": str(self.rho_wc_normsq),
            "signs_summary": self.signs_summary(),
        }


def rho_wc(rs: RootSystem, sigma: SigmaData) -> tuple[VectorH, Fraction]:
    r = project(sigma, rs.rho)
    return r, rs.norm2(r)


def folded_simple_roots(rs: RootSystem, sigma: SigmaData):
    dia = extended_diagram(rs)
    out = []
    for orb in node_orbits(sigma):
        i = orb[0]
        m = len(orb)
        linked = m > 1 and dia.cartan[i][orb[1]] != 0
        mult = 2 * m if linked else m
        v = project(sigma, dia.nodes[i].finite_part) * mult
        deg = Fraction(mult, m) * sum(dia.nodes[j].degree for j in orb)
        out.append((v, deg, orb))
    return out


def fold(rs: RootSystem, sigma: SigmaData, N: Optional[int] = None) -> FoldedRootSystem:
    if N is None:
        N = 2 * sigma.order
    rho, rho2 = rho_wc(rs, sigma)
    adj = adjacency_case(rs, sigma)
    if is_excluded(rs, sigma):
        return FoldedRootSystem(
            input_type=rs.type_label,
            c_node=sigma.c_node,
            orbits=(),
            simple_roots=(),
            cartan=(),
            folded_type="EMPTY",
            aliases=(),
            delta_sigma=sigma.order,
            adjacency_case=adj,
            rho_wc=rho,
            rho_wc_normsq=rho2,
        )
    simple = folded_simple_roots(rs, sigma)
    vecs = [v for v, _, _ in simple]
    cartan = tuple(
        tuple(int(2 * rs.pair(a, b) / rs.norm2(a)) for b in vecs) for a in vecs
    )
    label = classify_affine(cartan)
    return FoldedRootSystem(
        input_type=rs.type_label,
        c_node=sigma.c_node,
        orbits=tuple(sigma_orbits(rs, sigma, N)),
        simple_roots=tuple(simple),
        cartan=cartan,
        folded_type=label,
        aliases=labels_of(label)[1:],
        delta_sigma=sigma.order,
        adjacency_case=adj,
        rho_wc=rho,
        rho_wc_normsq=rho2,
    )
