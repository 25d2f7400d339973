"""Arithmetic in Z[zeta_m] (and its rational extension) as polynomials mod Phi_m."""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from typing import Union

Scalar = Union[int, Fraction]


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # coefficient lists, lowest degree first; den monic
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for shift in range(len(num) - len(den), -1, -1):
        c = num[shift + len(den) - 1]
        if c:
            q[shift] = c
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


def divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        num, rem = _poly_divmod(num, list(cyclotomic_poly(d)))
        assert not any(rem)
    while num and num[-1] == 0:
        num.pop()
    return tuple(num)


def euler_phi(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


class CyclotomicRing:
    """Z[zeta_m] with zeta_m = exp(2 pi i / m).

    Elements are plain ints/Fractions when phi(m) == 1 and tuples of length
    phi(m) otherwise (coefficients of 1, zeta, zeta^2, ...).
    """

    def __init__(self, m: int = 1):
        if m < 1:
            raise ValueError("order must be positive")
        self.m = m
        self.phi = euler_phi(m)
        self.scalar = self.phi == 1
        self._modulus = cyclotomic_poly(m)
        # zeta^k for k < m, reduced
        self._powers = [self._reduce_poly([0] * k + [1]) for k in range(m)]

    def __eq__(self, other):
        return isinstance(other, CyclotomicRing) and other.m == self.m

    def __hash__(self):
        return hash(("Zzeta", self.m))

    def __repr__(self):
        return f"CyclotomicRing({self.m})"

    def _reduce_poly(self, coeffs: list):
        coeffs = list(coeffs)
        d = self.phi
        mod = self._modulus
        for top in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[top]
            if c:
                for i in range(d + 1):
                    coeffs[top - d + i] -= c * mod[i]
        coeffs = coeffs[:d] + [0] * (d - len(coeffs))
        if self.scalar:
            return coeffs[0]
        return tuple(coeffs)

    # ring operations -----------------------------------------------------
    @property
    def zero(self):
        return 0 if self.scalar else (0,) * self.phi

    @property
    def one(self):
        return 1 if self.scalar else (1,) + (0,) * (self.phi - 1)

    def from_scalar(self, c: Scalar):
        return c if self.scalar else (c,) + (0,) * (self.phi - 1)

    def zeta_power(self, k: int):
        return self._powers[k % self.m]

    def is_zero(self, a) -> bool:
        return a == 0 if self.scalar else not any(a)

    def add(self, a, b):
        if self.scalar:
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        if self.scalar:
            return a - b
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return -a if self.scalar else tuple(-x for x in a)

    def scale(self, a, c: Scalar):
        return a * c if self.scalar else tuple(x * c for x in a)

    def mul(self, a, b):
        if self.scalar:
            return a * b
        prod = [0] * (2 * self.phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return self._reduce_poly(prod)

    def is_unit_one(self, a) -> bool:
        return a == self.one

    def as_rational(self, a):
        """Rational value if a lies in Q, else None."""
        if self.scalar:
            return a
        if any(a[1:]):
            return None
        return a[0]

    def to_complex(self, a) -> complex:
        if self.scalar:
            return complex(a)
        z = cmath.exp(2j * cmath.pi / self.m)
        return sum(complex(x) * z**i for i, x in enumerate(a) if x)

    def to_list(self, a) -> list:
        return [a] if self.scalar else list(a)

    def from_list(self, xs):
        if self.scalar:
            return xs[0]
        return tuple(xs) + (0,) * (self.phi - len(xs))
