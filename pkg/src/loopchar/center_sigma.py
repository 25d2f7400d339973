"""Center elements, the twisting data (lambda_c, w_c, sigma_c) and levels."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Optional, Union

from ._cyclotomic import cyclotomic_poly, euler_phi
from ._exact import (
    common_denominator,
    gf2_solve,
    identity,
    mat_add,
    mat_mul,
    mat_scale,
    nullspace,
    rank,
    rational_row_basis,
    solve,
)
from .affine_root import extended_diagram
from .cartan_core import RootSystem, VectorH, act, apply_weyl_word, word_matrix


class CenterError(ValueError):
    pass


@dataclass(frozen=True)
class SigmaData:
    rs: RootSystem
    c_node: int  # 0 encodes the identity
    lambda_c: VectorH
    w_c_word: tuple[int, ...]
    w_c_matrix: tuple[tuple[Fraction, ...], ...]
    sigma_perm: tuple[int, ...]
    order: int
    eigendims: tuple[int, ...]
    h0: VectorH

    @property
    def is_identity(self) -> bool:
        return self.c_node == 0

    def w(self, v) -> VectorH:
        return act(self.w_c_matrix, v)

    def to_json(self) -> dict:
        return {
            "c_node": self.c_node,
            "lambda_c": [str(x) for x in self.lambda_c],
            "w_c_word": list(self.w_c_word),
            "sigma_perm": list(self.sigma_perm),
            "order": self.order,
            "eigendims": list(self.eigendims),
            "h0": [str(x) for x in self.h0],
        }


@dataclass(frozen=True)
class LevelData:
    k_f: int
    k_b: int
    witness: Union[str, tuple[tuple[int, ...], ...]]
    basis: tuple[VectorH, ...]

    def to_json(self) -> dict:
        w = self.witness if isinstance(self.witness, str) else [list(r) for r in self.witness]
        return {
            "k_f": self.k_f,
            "k_b": self.k_b,
            "witness": w,
            "lattice_basis": [[str(x) for x in b] for b in self.basis],
        }


def center_elements(rs: RootSystem) -> list[int]:
    return [i + 1 for i, m in enumerate(rs.marks) if m == 1]


def _check_node(rs: RootSystem, c_node: int) -> None:
    if c_node != 0 and c_node not in center_elements(rs):
        raise CenterError(f"node {c_node} of {rs.type_label} does not give a center element")


def lambda_c(rs: RootSystem, c_node: int) -> VectorH:
    if c_node == 0:
        return VectorH.zero(rs.rank)
    return rs.fundamental_coweights[c_node - 1]


def _permutes(rs: RootSystem, word) -> Optional[dict]:
    # image of each element of Pi u {-theta}; keys 0 (for -theta) and 1..l
    targets = {VectorH(-rs.highest_root): 0}
    for i in range(1, rs.rank + 1):
        targets[rs.simple_root(i)] = i
    image = {}
    for v, idx in targets.items():
        u = apply_weyl_word(rs, word, v)
        if u not in targets:
            return None
        image[idx] = targets[u]
    return image


def compute_w_c(rs: RootSystem, c_node: int) -> tuple[int, ...]:
    """Reduced word for w_c = w_0^J w_0, J = Pi minus {alpha_c}."""
    _check_node(rs, c_node)
    if c_node == 0:
        return ()
    J = [j for j in range(1, rs.rank + 1) if j != c_node]
    # w_0(rho) = -rho; then w_0^J sorts it into the J-dominant chamber
    y = -rs.rho
    changed = True
    while changed:
        changed = False
        for j in J:
            if rs.coroot_pairing(y, j) < 0:
                y = rs.reflect(j, y)
                changed = True
    # y = w_c(rho); walk back to rho recording the word
    word: list[int] = []
    while True:
        for i in range(1, rs.rank + 1):
            if rs.coroot_pairing(y, i) < 0:
                y = rs.reflect(i, y)
                word.append(i)
                break
        else:
            break
    img = _permutes(rs, word)
    if img is None or img[0] != c_node:
        raise RuntimeError("w_c search failed; no permuting element found")
    return tuple(word)


def affine_image(rs: RootSystem, w_matrix, lam: VectorH, alpha: VectorH, n: int) -> tuple[VectorH, int]:
    """sigma_c(alpha + n delta) = w_c(alpha) + (n - <lambda_c, w_c(alpha)>) delta."""
    wa = act(w_matrix, alpha)
    shift = rs.pair(lam, wa)
    if shift.denominator != 1:
        raise RuntimeError("non-integral degree shift")
    return wa, n - int(shift)


def _perm_order(perm) -> int:
    k, p = 1, list(perm)
    ident = list(range(len(perm)))
    while p != ident:
        p = [perm[x] for x in p]
        k += 1
    return k


def sigma_permutation(rs: RootSystem, c_node: int, word=None) -> tuple[int, ...]:
    _check_node(rs, c_node)
    if word is None:
        word = compute_w_c(rs, c_node)
    M = word_matrix(rs, word)
    lam = lambda_c(rs, c_node)
    dia = extended_diagram(rs)
    index = {(node.finite_part, node.degree): i for i, node in enumerate(dia.nodes)}
    perm = []
    for node in dia.nodes:
        img = affine_image(rs, M, lam, node.finite_part, node.degree)
        if img not in index:
            raise RuntimeError("sigma_c does not permute the affine simple roots")
        perm.append(index[img])
    return tuple(perm)


def _matrix_poly(M, coeffs):
    n = len(M)
    acc = mat_scale(identity(n), 0)
    power = identity(n)
    for c in coeffs:
        if c:
            acc = mat_add(acc, mat_scale(power, c))
        power = mat_mul(power, M)
    return acc


def sigma_eigendims(rs: RootSystem, c_node: int, word=None, order: Optional[int] = None) -> tuple[int, ...]:
    """dim of the exp(2 pi i j / ord)-eigenspace of w_c, j = 0..ord-1."""
    if word is None:
        word = compute_w_c(rs, c_node)
    M = word_matrix(rs, word)
    if order is None:
        order = _perm_order(sigma_permutation(rs, c_node, word))
    by_d = {}
    dims = []
    for j in range(order):
        d = order // gcd(j, order)
        if d not in by_d:
            P = _matrix_poly(M, cyclotomic_poly(d))
            by_d[d] = (rs.rank - rank(P)) // euler_phi(d)
        dims.append(by_d[d])
    return tuple(dims)


def solve_h0(rs: RootSystem, M, lam: VectorH) -> VectorH:
    """Minimum-norm solution of w_c(h0) - h0 = lambda_c."""
    n = rs.rank
    A = [[M[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    fixed = nullspace(A)
    rows = [list(r) for r in A] + [[rs.pair(f, VectorH.unit(n, j)) for j in range(n)] for f in fixed]
    rhs = list(lam) + [Fraction(0)] * len(fixed)
    x = solve(rows, rhs)
    if x is None:
        raise RuntimeError("lambda_c is not in the image of w_c - 1")
    return VectorH(x)


@lru_cache(maxsize=None)
def sigma_data(rs: RootSystem, c_node: int) -> SigmaData:
    _check_node(rs, c_node)
    word = compute_w_c(rs, c_node)
    M = word_matrix(rs, word)
    perm = sigma_permutation(rs, c_node, word)
    order = _perm_order(perm)
    lam = lambda_c(rs, c_node)
    return SigmaData(
        rs=rs,
        c_node=c_node,
        lambda_c=lam,
        w_c_word=word,
        w_c_matrix=tuple(tuple(r) for r in M),
        sigma_perm=perm,
        order=order,
        eigendims=sigma_eigendims(rs, c_node, word, order),
        h0=solve_h0(rs, M, lam),
    )


# ---------------------------------------------------------------- levels

def cocharacter_basis(rs: RootSystem, c_node: int) -> list[VectorH]:
    """Z-basis of Lambda(T) = coroot lattice + Z lambda_c."""
    _check_node(rs, c_node)
    gens = [rs.simple_coroot(i) for i in range(1, rs.rank + 1)]
    if c_node:
        gens.append(lambda_c(rs, c_node))
    return [VectorH(b) for b in rational_row_basis(gens)]


def _lattice_gram(rs: RootSystem, basis) -> list[list[Fraction]]:
    return [[rs.pair(a, b) for b in basis] for a in basis]


def basic_level(rs: RootSystem, c_node: int) -> int:
    basis = cocharacter_basis(rs, c_node)
    return common_denominator(x for row in _lattice_gram(rs, basis) for x in row)


def is_even_lattice(rs: RootSystem, c_node: int, k) -> bool:
    """True iff Lambda(T) with k<.,.> is an even lattice."""
    basis = cocharacter_basis(rs, c_node)
    g = _lattice_gram(rs, basis)
    for i, row in enumerate(g):
        for j, x in enumerate(row):
            y = k * x
            if y.denominator != 1:
                return False
            if i == j and y.numerator % 2:
                return False
    return True


def _coordinates(basis, v) -> list[int]:
    cols = [[b[r] for b in basis] for r in range(len(v))]
    x = solve(cols, list(v))
    if x is None or any(c.denominator != 1 for c in x):
        raise RuntimeError("vector not in lattice")
    return [int(c) for c in x]


def _compat_system(rs: RootSystem, c_node: int, k: int):
    """Linear constraints mod 2 on the upper-triangular entries of Omega."""
    basis = cocharacter_basis(rs, c_node)
    r = len(basis)
    pairs = [(a, b) for a in range(r) for b in range(a + 1, r)]
    rows, rhs = [], []
    for i in range(1, rs.rank + 1):
        cor = rs.simple_coroot(i)
        x = _coordinates(basis, cor)
        for j in range(r):
            target = k * rs.pair(cor, basis[j])
            if target.denominator != 1:
                return basis, pairs, None, None
            # (x^T Omega e_j) = sum_a x_a Omega[a][j]
            row = []
            for a, b in pairs:
                coeff = 0
                if b == j:
                    coeff += x[a]
                if a == j:
                    coeff += x[b]
                row.append(coeff % 2)
            rows.append(row)
            rhs.append(int(target) % 2)
    return basis, pairs, rows, rhs


def _omega_from(pairs, r, sol) -> tuple[tuple[int, ...], ...]:
    om = [[0] * r for _ in range(r)]
    for (a, b), v in zip(pairs, sol):
        om[a][b] = om[b][a] = v % 2
    return tuple(tuple(row) for row in om)


def commutator_form_exists(rs: RootSystem, c_node: int, k: int):
    """Decide whether an alternating form matching the compatibility constraint exists.

    Returns (exists, omega) with omega an alternating 0/1 matrix on a basis of
    Lambda(T), or None.
    """
    if k < 1:
        raise ValueError("level must be positive")
    basis, pairs, rows, rhs = _compat_system(rs, c_node, k)
    if rows is None:
        return False, None
    sol = gf2_solve(rows, rhs) if pairs else ([] if not any(rhs) else None)
    if sol is None:
        return False, None
    return True, _omega_from(pairs, len(basis), sol)


def commutator_form_exists_bruteforce(rs: RootSystem, c_node: int, k: int) -> bool:
    """Exhaustive search over all alternating forms mod 2 (small ranks only)."""
    basis, pairs, rows, rhs = _compat_system(rs, c_node, k)
    if rows is None:
        return False
    for bits in product((0, 1), repeat=len(pairs)):
        if all(sum(c * b for c, b in zip(row, bits)) % 2 == t for row, t in zip(rows, rhs)):
            return True
    return False


def levels(rs: RootSystem, c_node: int) -> LevelData:
    _check_node(rs, c_node)
    k_b = basic_level(rs, c_node)
    k_f, witness = None, None
    for k in (1, 2):
        ok, om = commutator_form_exists(rs, c_node, k)
        if ok:
            k_f, witness = k, om
            break
    if k_f is None:
        raise RuntimeError("no commutator form at level 2")
    if k_b % k_f:
        raise RuntimeError(f"basic level {k_b} is not a multiple of fundamental level {k_f}")
    if not any(any(r) for r in witness):
        witness = "none needed"
    return LevelData(k_f=k_f, k_b=k_b, witness=witness, basis=tuple(cocharacter_basis(rs, c_node)))
