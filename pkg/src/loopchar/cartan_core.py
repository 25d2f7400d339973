"""Finite simple root systems with the normalized invariant form.

Vectors are stored in simple-root coordinates.  The form is normalized so
that long roots have squared length 2, and coroots are identified with
elements of the same space via alpha^vee = 2 alpha / <alpha, alpha>.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import prod
from typing import Iterable, Sequence

from ._exact import inverse, mat_vec


class VectorH(tuple):
    """Exact vector in simple-root coordinates."""

    def __new__(cls, coords: Iterable = ()):
        return super().__new__(cls, (Fraction(x) for x in coords))

    @classmethod
    def _raw(cls, fractions: Iterable) -> "VectorH":
        # entries are already Fractions
        return tuple.__new__(cls, fractions)

    def __hash__(self) -> int:
        # Fraction hashing is slow; vectors are used heavily as dict keys
        try:
            return self.__dict__["_h"]
        except KeyError:
            h = self.__dict__["_h"] = tuple.__hash__(self)
            return h

    def __eq__(self, other):
        return tuple.__eq__(self, other)

    def __ne__(self, other):
        return tuple.__ne__(self, other)

    def __add__(self, other):
        return VectorH._raw([a + b for a, b in zip(self, other)])

    def __sub__(self, other):
        return VectorH._raw([a - b for a, b in zip(self, other)])

    def __neg__(self):
        return VectorH._raw([-a for a in self])

    def __mul__(self, c):
        c = Fraction(c)
        return VectorH._raw([c * a for a in self])

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = Fraction(c)
        return VectorH._raw([a / c for a in self])

    def is_zero(self) -> bool:
        return not any(self)

    def __repr__(self) -> str:
        return "VectorH(" + ", ".join(str(x) for x in self) + ")"

    @staticmethod
    def zero(n: int) -> "VectorH":
        return VectorH([0] * n)

    @staticmethod
    def unit(n: int, i: int) -> "VectorH":
        """i-th basis vector, 0-based."""
        v = [0] * n
        v[i] = 1
        return VectorH(v)


class UnsupportedType(ValueError):
    pass


def pair(gram: Sequence[Sequence[Fraction]], u: Sequence, v: Sequence) -> Fraction:
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            row = gram[i]
            for j, vj in enumerate(v):
                if vj:
                    total += ui * row[j] * vj
    return total


# Each entry: (norms of simple roots, list of edges as 1-based node pairs).
def _diagram(family: str, n: int) -> tuple[list[Fraction], list[tuple[int, int]]]:
    chain = [(i, i + 1) for i in range(1, n)]
    two = Fraction(2)
    one = Fraction(1)
    if family == "A" and n >= 1:
        return [two] * n, chain
    if family == "B" and n >= 2:
        return [two] * (n - 1) + [one], chain
    if family == "C" and n >= 2:
        return [one] * (n - 1) + [two], chain
    if family == "D" and n >= 4:
        return [two] * n, [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
    if family == "E" and n == 6:
        return [two] * 6, [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)]
    if family == "E" and n == 7:
        return [two] * 7, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)]
    if family == "E" and n == 8:
        return [two] * 8, [(i, i + 1) for i in range(1, 7)] + [(5, 8)]
    if family == "F" and n == 4:
        return [two, two, one, one], chain
    if family == "G" and n == 2:
        return [Fraction(2, 3), two], chain
    raise UnsupportedType(f"unsupported root system {family}{n}")


def _degrees(family: str, n: int) -> list[int]:
    if family == "A":
        return list(range(2, n + 2))
    if family in "BC":
        return [2 * i for i in range(1, n + 1)]
    if family == "D":
        return [2 * i for i in range(1, n)] + [n]
    return {
        ("E", 6): [2, 5, 6, 8, 9, 12],
        ("E", 7): [2, 6, 8, 10, 12, 14, 18],
        ("E", 8): [2, 8, 12, 14, 18, 20, 24, 30],
        ("F", 4): [2, 6, 8, 12],
        ("G", 2): [2, 6],
    }[(family, n)]


_LABEL = re.compile(r"^\s*([A-Ga-g])_?(\d+)\s*$")


def parse_type_label(label: str) -> tuple[str, int]:
    m = _LABEL.match(label)
    if not m:
        raise UnsupportedType(f"unsupported type label {label!r}")
    family, n = m.group(1).upper(), int(m.group(2))
    _diagram(family, n)
    return family, n


@dataclass(frozen=True, eq=False)
class RootSystem:
    type_label: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[VectorH, ...]
    highest_root: VectorH
    rho: VectorH
    fundamental_weights: tuple[VectorH, ...]
    fundamental_coweights: tuple[VectorH, ...]
    marks: tuple[int, ...]
    comarks: tuple[int, ...]
    dual_coxeter: int
    degrees: tuple[int, ...] = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, RootSystem) and other.type_label == self.type_label

    def __hash__(self):
        return hash(("RootSystem", self.type_label))

    # -- basic geometry -------------------------------------------------
    def pair(self, u: Sequence, v: Sequence) -> Fraction:
        return pair(self.gram, u, v)

    def norm2(self, u: Sequence) -> Fraction:
        return pair(self.gram, u, u)

    def simple_root(self, i: int) -> VectorH:
        """Simple root alpha_i, 1-based."""
        return VectorH.unit(self.rank, i - 1)

    def simple_coroot(self, i: int) -> VectorH:
        return self.simple_root(i) * (2 / self.gram[i - 1][i - 1])

    def coroot(self, alpha: VectorH) -> VectorH:
        return alpha * (2 / self.norm2(alpha))

    def coroot_pairing(self, v: Sequence, i: int) -> Fraction:
        """<v, alpha_i^vee> for 1-based i."""
        g = self.gram[i - 1]
        return 2 * sum((x * y for x, y in zip(v, g)), Fraction(0)) / g[i - 1]

    def reflect(self, i: int, v: VectorH) -> VectorH:
        if not 1 <= i <= self.rank:
            raise IndexError(f"simple reflection index {i} out of range 1..{self.rank}")
        c = self.coroot_pairing(v, i)
        if not c:
            return v
        out = list(v)
        out[i - 1] -= c
        return VectorH(out)

    def reflect_along(self, alpha: VectorH, v: VectorH) -> VectorH:
        return v - alpha * (2 * self.pair(v, alpha) / self.norm2(alpha))

    @cached_property
    def roots(self) -> tuple[VectorH, ...]:
        return self.positive_roots + tuple(-a for a in self.positive_roots)

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    @cached_property
    def weyl_order(self) -> int:
        return prod(self.degrees)

    @cached_property
    def coxeter_number(self) -> int:
        return 1 + sum(self.marks)

    def height(self, v: Sequence) -> Fraction:
        return sum(v, Fraction(0))

    def is_dominant(self, v: VectorH) -> bool:
        return all(self.coroot_pairing(v, i) >= 0 for i in range(1, self.rank + 1))

    def dominant_representative(self, v: VectorH) -> tuple[VectorH, list[int]]:
        """Return (dominant conjugate, word w) with apply_weyl_word(w, v) dominant."""
        word: list[int] = []
        while True:
            for i in range(1, self.rank + 1):
                if self.coroot_pairing(v, i) < 0:
                    v = self.reflect(i, v)
                    word.insert(0, i)
                    break
            else:
                return v, word

    def weight_coords(self, v: Sequence) -> list[Fraction]:
        """Coordinates in the fundamental-weight basis: (<v, alpha_i^vee>)_i."""
        return [self.coroot_pairing(v, i) for i in range(1, self.rank + 1)]

    def from_weight_coords(self, coords: Sequence) -> VectorH:
        acc = VectorH.zero(self.rank)
        for c, w in zip(coords, self.fundamental_weights):
            acc = acc + w * c
        return acc

    def reflection_matrix(self, i: int) -> list[list[Fraction]]:
        cols = [self.reflect(i, self.simple_root(j)) for j in range(1, self.rank + 1)]
        return [[cols[j][r] for j in range(self.rank)] for r in range(self.rank)]

    def to_json(self) -> dict:
        def vec(v):
            return [str(x) for x in v]

        return {
            "type_label": self.type_label,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "gram": [[str(x) for x in r] for r in self.gram],
            "positive_roots": [vec(a) for a in self.positive_roots],
            "highest_root": vec(self.highest_root),
            "rho": vec(self.rho),
            "fundamental_coweights": [vec(v) for v in self.fundamental_coweights],
            "marks": list(self.marks),
            "dual_coxeter": self.dual_coxeter,
        }


def _positive_roots(rank: int, gram) -> list[VectorH]:
    simple = [VectorH.unit(rank, i) for i in range(rank)]
    roots = set(simple)
    layer = list(simple)
    ordered = list(simple)

    def cpair(v, i):
        return 2 * sum((x * y for x, y in zip(v, gram[i])), Fraction(0)) / gram[i][i]

    while layer:
        nxt = []
        for beta in layer:
            for i in range(rank):
                p = 0
                down = beta - simple[i]
                while down in roots:
                    p += 1
                    down = down - simple[i]
                if p - cpair(beta, i) > 0:
                    up = beta + simple[i]
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        nxt.sort(key=lambda v: tuple(-x for x in v))
        ordered.extend(nxt)
        layer = nxt
    return ordered


def build_root_system(type_label: str) -> RootSystem:
    family, n = parse_type_label(type_label)
    return _build(family, n)


@lru_cache(maxsize=None)
def _build(family: str, n: int) -> RootSystem:
    norms, edges = _diagram(family, n)
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = norms[i]
    for a, b in edges:
        g = -max(norms[a - 1], norms[b - 1]) / 2
        gram[a - 1][b - 1] = gram[b - 1][a - 1] = g
    cartan = tuple(tuple(int(2 * gram[i][j] / gram[i][i]) for j in range(n)) for i in range(n))

    pos = _positive_roots(n, gram)
    theta = max(pos, key=lambda v: sum(v))
    rho = VectorH.zero(n)
    for a in pos:
        rho = rho + a
    rho = rho / 2

    # fundamental weights: <omega_i, alpha_j^vee> = delta_ij
    coroot_rows = [[2 * gram[j][c] / gram[j][j] for c in range(n)] for j in range(n)]
    inv = inverse(coroot_rows)
    weights = tuple(VectorH(inv[r][i] for r in range(n)) for i in range(n))
    coweights = tuple(weights[i] * (2 / gram[i][i]) for i in range(n))

    marks = tuple(int(x) for x in theta)
    comarks = tuple(int(marks[i] * gram[i][i] / 2) for i in range(n))
    label = f"{family}{n}"
    return RootSystem(
        type_label=label,
        rank=n,
        cartan=cartan,
        gram=tuple(tuple(r) for r in gram),
        positive_roots=tuple(pos),
        highest_root=theta,
        rho=rho,
        fundamental_weights=weights,
        fundamental_coweights=coweights,
        marks=marks,
        comarks=comarks,
        dual_coxeter=1 + sum(comarks),
        degrees=tuple(_degrees(family, n)),
    )


def apply_weyl_word(rs: RootSystem, word: Sequence[int], v: VectorH) -> VectorH:
    """s_{i_1} ... s_{i_m}(v); the rightmost reflection acts first."""
    for i in reversed(list(word)):
        v = rs.reflect(i, v)
    return v


def word_matrix(rs: RootSystem, word: Sequence[int]) -> list[list[Fraction]]:
    """Matrix (acting on coordinate columns) of the Weyl element given by a word."""
    cols = [apply_weyl_word(rs, word, rs.simple_root(j)) for j in range(1, rs.rank + 1)]
    return [[cols[j][r] for j in range(rs.rank)] for r in range(rs.rank)]


def act(matrix: Sequence[Sequence[Fraction]], v: Sequence) -> VectorH:
    return VectorH(mat_vec(matrix, v))


def weyl_orbit(rs: RootSystem, v: VectorH) -> frozenset:
    seen = {VectorH(v)}
    stack = [VectorH(v)]
    while stack:
        x = stack.pop()
        for i in range(1, rs.rank + 1):
            y = rs.reflect(i, x)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def casimir_constant(rs: RootSystem, lam: VectorH) -> Fraction:
    shifted = VectorH(lam) + rs.rho
    return rs.norm2(shifted) - rs.norm2(rs.rho)
