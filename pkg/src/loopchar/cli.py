"""Command-line interface.

Exit codes: 0 ok, 1 usage error, 2 domain error, 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cartan_core import RootSystem, UnsupportedType, VectorH, build_root_system
from .center_sigma import CenterError, center_elements, levels, sigma_data
from .characters import (
    CharacterError,
    CharacterResult,
    cocycle_equivariance_check,
    freudenthal_multiplicities,
    heat_residual,
    kac_weyl_character,
    quasi_periodicity_check,
    twisted_character,
)
from .folding import fold, labels_of
from .lattices_weyl import (
    ExcludedCase,
    coroot_lattice,
    twisted_weyl_data,
    untwisted_weyl_data,
)
from .qseries import SeriesError

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ------------------------------------------------------------- parsing

_GROUP_RE = re.compile(r"^(SL|Spin|Sp)(\d+)$", re.IGNORECASE)


def resolve_type(label: str) -> str:
    """Accept Cartan labels (A1, E7) and group names (SL2, Spin10, Sp4)."""
    m = _GROUP_RE.match(label.strip())
    if m:
        kind, n = m.group(1).lower(), int(m.group(2))
        if kind == "sl" and n >= 2:
            return f"A{n - 1}"
        if kind == "sp" and n >= 2 and n % 2 == 0:
            return f"C{n // 2}"
        if kind == "spin" and n >= 5 and n % 2 == 1:
            return f"B{(n - 1) // 2}"
        if kind == "spin" and n >= 8 and n % 2 == 0:
            return f"D{n // 2}"
        raise UsageError(f"unsupported group name {label!r}")
    return label.strip()


def coweight_order(rs: RootSystem, node: int) -> int:
    L = coroot_lattice(rs)
    w = rs.fundamental_coweights[node - 1]
    m = 1
    while not L.contains(w * m):
        m += 1
    return m


def resolve_center(rs: RootSystem, selector: str) -> int:
    """Map a center selector to a node index (0 for the identity)."""
    s = selector.strip().lower()
    nodes = center_elements(rs)
    family, n = rs.type_label[0], rs.rank
    if s in ("trivial", "1", "id", "0"):
        return 0
    if s.isdigit():
        node = int(s)
        if node not in nodes:
            raise CenterError(f"node {node} of {rs.type_label} does not give a central element")
        return node
    if family == "D":
        named = {"z2^0": 1, "z2^+": n, "z2^-": n - 1}
        if s in named:
            if s != "z2^0" and n % 2:
                raise CenterError(f"{selector} needs D_n with n even")
            return named[s]
        if s == "z4":
            if n % 2 == 0:
                raise CenterError("the center of D_n with n even has no element of order 4")
            return n
    m = re.match(r"^z(\d+)$", s)
    if not m:
        raise UsageError(f"unknown center selector {selector!r}")
    r = int(m.group(1))
    if family == "A":
        size = n + 1
        if size % r:
            raise CenterError(f"Z{r} is not a subgroup of the center of {rs.type_label}")
        return size // r
    cands = [c for c in nodes if coweight_order(rs, c) == r]
    if not cands:
        raise CenterError(f"{rs.type_label} has no central element of order {r}")
    if len(cands) > 1 and family == "D" and n % 2 == 0:
        raise UsageError(f"{selector!r} is ambiguous for {rs.type_label}; use z2^0, z2^+ or z2^-")
    # cyclic center: all candidates generate the same subgroup
    return min(cands)


def parse_lambda(rs: RootSystem, text: str) -> VectorH:
    try:
        parts = [Fraction(p) for p in text.split(",")] if text.strip() else []
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse lambda {text!r}") from None
    if parts == [0]:
        parts = [Fraction(0)] * rs.rank
    if len(parts) != rs.rank:
        raise UsageError(f"lambda needs {rs.rank} fundamental-weight coordinates, got {len(parts)}")
    return rs.from_weight_coords(parts)


@dataclass(frozen=True)
class Config:
    command: str
    type_label: Optional[str] = None
    center: Optional[str] = None
    lam: Optional[str] = None
    k: Optional[int] = None
    N: int = 6
    fmt: Optional[str] = None
    seed: int = 0
    numeric_N: int = 18
    target: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "Config":
        return cls(
            command=args.command,
            type_label=getattr(args, "type_label", None),
            center=getattr(args, "center", None),
            lam=getattr(args, "lam", None),
            k=getattr(args, "k", None),
            N=getattr(args, "N", 6),
            fmt=args.fmt,
            seed=args.seed,
            numeric_N=getattr(args, "numeric_N", 18),
            target=getattr(args, "target", None),
        )

    def validate(self) -> "Config":
        if self.N < 0 or self.numeric_N < 0:
            raise UsageError("truncation orders must be nonnegative")
        if self.k is not None and self.k < 0:
            raise UsageError("level k must be nonnegative")
        if self.fmt == "tsv" and self.command not in ("table", "char", "twisted-char"):
            raise UsageError("tsv output is available for table, char and twisted-char")
        return self

    def root_system(self) -> RootSystem:
        return build_root_system(resolve_type(self.type_label))


# --------------------------------------------------------------- table

# group, center, Cartan type, selector, family used to name the folded type
TABLE_ROWS = (
    ("SL2", "Z2", "A1", "z2", "A"),
    ("Spin7", "Z2", "B3", "z2", "A"),
    ("Sp4", "Z2", "C2", "z2", "A"),
    ("Sp6", "Z2", "C3", "z2", "C"),
    ("Spin8", "Z2^0", "D4", "z2^0", "C"),
    ("Spin8", "Z2^+", "D4", "z2^+", "B"),
    ("Spin10", "Z2", "D5", "z2", "C"),
    ("Spin10", "Z4", "D5", "z4", "C"),
    ("E6", "Z3", "E6", "z3", "G"),
    ("E7", "Z2", "E7", "z2", "F"),
)
TABLE_HEADER = ("group", "center", "cartan_type", "node", "k_b", "folded_type")


def _render(label: str, family: str) -> str:
    for name in labels_of(label):
        if name[0] == family:
            return name
    return label


def table_rows() -> list[tuple[str, ...]]:
    out = []
    for group, center, t, selector, family in TABLE_ROWS:
        rs = build_root_system(t)
        node = resolve_center(rs, selector)
        lv = levels(rs, node)
        folded = fold(rs, sigma_data(rs, node)).folded_type
        out.append((group, center, t, str(node), str(lv.k_b), _render(folded, family)))
    return out


def format_table(rows, fmt: str) -> str:
    if fmt == "json":
        return _dumps([dict(zip(TABLE_HEADER, r)) for r in rows])
    lines = ["\t".join(TABLE_HEADER)] + ["\t".join(r) for r in rows]
    return "\n".join(lines)


# -------------------------------------------------------------- verify

def _weight_reflections(ch: CharacterResult):
    rs = ch.rs
    if ch.sigma.is_identity:
        data = untwisted_weyl_data(rs)
    else:
        data = twisted_weyl_data(rs, ch.sigma)
    return [w.vector for w in data.walls if w.degree == 0], data


def anti_invariance_check(ch: CharacterResult) -> bool:
    """The character is fixed by every simple reflection of W (or W0)."""
    vectors, data = _weight_reflections(ch)
    terms = ch.series.terms
    for v in vectors:
        moved = {(data.reflect(v, m), d): c for (m, d), c in terms.items()}
        if moved != terms:
            return False
    return True


def verify_report(ch: CharacterResult, seed: int, numeric: Optional[CharacterResult] = None) -> dict:
    """Run all checks; numeric checks use `numeric` (a longer expansion) when given."""
    checks = []
    leading = ch.zero or ch.series.coefficient(ch.lam, 0) == ch.series.ring.one
    checks.append({"name": "leading_term", "pass": bool(leading), "max_error": 0.0 if leading else 1.0})
    res = heat_residual(ch)
    checks.append({"name": "heat_residual", "pass": res.is_zero(), "nonzero_terms": len(res)})
    checks.append({"name": "anti_invariance", "pass": anti_invariance_check(ch)})
    if not ch.twisted:
        oracle = freudenthal_multiplicities(ch.rs, ch.lam, ch.k, int(ch.N))
        same = oracle == dict(ch.series.terms)
        checks.append({"name": "freudenthal_oracle", "pass": same})
    if not ch.zero:
        num = numeric or ch
        qp = quasi_periodicity_check(num, trials=50, seed=seed)
        checks.append({"name": "quasi_periodicity", "pass": qp <= 1e-8, "max_error": float(f"{qp:.3e}")})
        ce = cocycle_equivariance_check(num, trials=20, seed=seed)
        checks.append({"name": "cocycle_equivariance", "pass": ce <= 1e-8, "max_error": float(f"{ce:.3e}")})
    return {
        "type": ch.rs.type_label,
        "center": ch.sigma.c_node,
        "k": ch.k,
        "N": str(ch.N),
        "zero": ch.zero,
        "checks": checks,
        "all_pass": all(c["pass"] for c in checks),
    }


# -------------------------------------------------------------- driver

def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="loopchar", description="Loop group characters and twisted affine data.")
    p.add_argument("--format", choices=("json", "tsv"), default=None, dest="fmt",
                   help="output format (table defaults to tsv, everything else is json)")
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("roots", help="root system data")
    s.add_argument("type_label")
    for name in ("levels", "fold"):
        s = sub.add_parser(name)
        s.add_argument("type_label")
        s.add_argument("center")
    sub.add_parser("table", help="folded types and basic levels")

    def char_args(s, with_center: bool):
        s.add_argument("type_label")
        if with_center:
            s.add_argument("center")
        s.add_argument("lam", metavar="lambda")
        s.add_argument("k", type=int)
        s.add_argument("-N", type=int, default=6)

    char_args(sub.add_parser("char"), False)
    char_args(sub.add_parser("twisted-char"), True)
    v = sub.add_parser("verify", help="run consistency checks on a character")
    v.add_argument("--numeric-N", type=int, default=18, dest="numeric_N",
                   help="truncation used for the numerical checks (default 18)")
    vs = v.add_subparsers(dest="target", required=True, parser_class=_Parser)
    char_args(vs.add_parser("char"), False)
    char_args(vs.add_parser("twisted-char"), True)
    return p


def _character(cfg: Config, N: Optional[int] = None) -> CharacterResult:
    rs = cfg.root_system()
    N = cfg.N if N is None else N
    lam = parse_lambda(rs, cfg.lam)
    if (cfg.target or cfg.command) == "char":
        return kac_weyl_character(rs, lam, cfg.k, N)
    sigma = sigma_data(rs, resolve_center(rs, cfg.center))
    return twisted_character(rs, sigma, lam, cfg.k, N)


def _series_tsv(ch: CharacterResult) -> str:
    lines = ["mu\td\tcoeff"]
    for row in ch.series.to_json():
        lines.append(f"{','.join(row['mu'])}\t{row['d']}\t{','.join(map(str, row['coeff']))}")
    return "\n".join(lines)


def run(argv: Sequence[str]) -> tuple[int, str]:
    cfg = Config.from_args(build_parser().parse_args(list(argv))).validate()
    cmd = cfg.command
    if cmd == "roots":
        return EXIT_OK, _dumps(cfg.root_system().to_json())
    if cmd == "levels":
        rs = cfg.root_system()
        node = resolve_center(rs, cfg.center)
        if node == 0:
            raise CenterError("levels need a nontrivial central element")
        out = {"type": rs.type_label, "center": node, **levels(rs, node).to_json()}
        return EXIT_OK, _dumps(out)
    if cmd == "fold":
        rs = cfg.root_system()
        node = resolve_center(rs, cfg.center)
        return EXIT_OK, _dumps(fold(rs, sigma_data(rs, node)).to_json())
    if cmd == "table":
        return EXIT_OK, format_table(table_rows(), cfg.fmt or "tsv")
    if cmd in ("char", "twisted-char"):
        ch = _character(cfg)
        return EXIT_OK, (_series_tsv(ch) if cfg.fmt == "tsv" else _dumps(ch.to_json()))
    if cmd == "verify":
        ch = _character(cfg)
        numeric = _character(cfg, cfg.numeric_N) if cfg.numeric_N > cfg.N and not ch.zero else None
        report = verify_report(ch, cfg.seed, numeric)
        return (EXIT_OK if report["all_pass"] else EXIT_VERIFY), _dumps(report)
    raise UsageError(f"unknown command {cmd!r}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        code, text = run(argv)
    except UsageError as e:
        print(f"loopchar: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UnsupportedType, CenterError, ExcludedCase, CharacterError, SeriesError, ValueError) as e:
        msg = str(e).splitlines()[0] if str(e) else type(e).__name__
        print(f"loopchar: {msg}", file=sys.stderr)
        return EXIT_DOMAIN
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
