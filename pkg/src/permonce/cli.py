"""
Command-line front end.

    permonce gf --avoid 132,321 --contain 123
    permonce seq --avoid 123,231,312 --contain 321 --n 3..6 --source both
    permonce verify --families pairs --k-max 5 --n-max 9
    permonce classify --avoid 123,132 --contain 213
    permonce wilf --k 3 --n-max 10

Exit codes: 0 success, 2 usage, 3 pattern not in class, 4 verification
mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from . import oracle
from .classify import (
    Family, NotInClass, QUADS_AND_QUINTS, TRIPLES, PAIRS, canonicalize, decompose,
    family_of, forbidden_set, violation,
)
from .formulas import COFACTOR_MODES, GfResult, Unsupported, dispatch
from .perm import DEFAULT_GUARD, Perm, PermError, fmt, parse
from .series import DEFAULT_ORDER

EXIT_OK, EXIT_USAGE, EXIT_NOT_IN_CLASS, EXIT_MISMATCH = 0, 2, 3, 4

# the traditional single-letter names of the pair and triple families
LETTERS = {
    Family.PAIR_123_132: "A", Family.PAIR_132_321: "B",
    Family.PAIR_132_213: "C", Family.PAIR_132_231: "D",
    Family.TRIPLE_123_132_213: "E", Family.TRIPLE_123_132_231: "F",
    Family.TRIPLE_123_231_312: "G", Family.TRIPLE_132_213_231: "H",
}

FAMILY_GROUPS = {
    "pairs": PAIRS,
    "triples": TRIPLES,
    "quads": QUADS_AND_QUINTS,
    "all": PAIRS + TRIPLES + QUADS_AND_QUINTS,
}


class Source(str, Enum):
    FORMULA = "formula"
    ORACLE = "oracle"
    BOTH = "both"


class Format(str, Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"
    BFILE = "bfile"


def _set_label(T: Sequence[Perm]) -> str:
    return "{" + ",".join(fmt(t) for t in T) + "}"


def pair_label(T: Sequence[Perm], tau: Perm) -> str:
    """``A_231`` for canonical pairs and triples, ``{...};tau`` otherwise."""
    fam = family_of(T)
    if fam in LETTERS:
        return f"{LETTERS[fam]}_{fmt(tau)}"
    return f"{_set_label(T)};{fmt(tau)}"


@dataclass(frozen=True)
class QuerySpec:
    T: tuple[Perm, ...]
    tau: Perm
    n_range: tuple[int, int] = (0, DEFAULT_ORDER)
    source: Source = Source.FORMULA
    format: Format = Format.TEXT


@dataclass(frozen=True)
class SeqRow:
    n: int
    formula: int | None
    oracle: int | None

    @property
    def match(self) -> bool | None:
        if self.formula is None or self.oracle is None:
            return None
        return self.formula == self.oracle


@dataclass(frozen=True)
class SeqReport:
    T: tuple[Perm, ...]
    tau: Perm
    rows: tuple[SeqRow, ...]

    def to_dict(self) -> dict:
        return {"T": [fmt(t) for t in self.T], "tau": fmt(self.tau),
                "rows": [{"n": r.n, "formula": r.formula, "oracle": r.oracle, "match": r.match}
                         for r in self.rows]}

    @classmethod
    def from_dict(cls, d: dict) -> SeqReport:
        return cls(tuple(parse(t) for t in d["T"]), parse(d["tau"]),
                   tuple(SeqRow(r["n"], r["formula"], r["oracle"]) for r in d["rows"]))


@dataclass(frozen=True)
class Mismatch:
    T: tuple[Perm, ...]
    tau: Perm
    formula: tuple[int, ...]
    oracle: tuple[int, ...]
    derivation: tuple[dict, ...] = ()

    def to_dict(self) -> dict:
        return {"T": [fmt(t) for t in self.T], "tau": fmt(self.tau),
                "formula": list(self.formula), "oracle": list(self.oracle),
                "derivation": list(self.derivation)}

    @classmethod
    def from_dict(cls, d: dict) -> Mismatch:
        return cls(tuple(parse(t) for t in d["T"]), parse(d["tau"]), tuple(d["formula"]),
                   tuple(d["oracle"]), tuple(d["derivation"]))


@dataclass(frozen=True)
class VerifyReport:
    k_max: int
    n_max: int
    checked: int
    mismatches: tuple[Mismatch, ...] = ()

    def to_dict(self) -> dict:
        return {"k_max": self.k_max, "n_max": self.n_max, "checked": self.checked,
                "mismatches": [m.to_dict() for m in self.mismatches]}

    @classmethod
    def from_dict(cls, d: dict) -> VerifyReport:
        return cls(d["k_max"], d["n_max"], d["checked"],
                   tuple(Mismatch.from_dict(m) for m in d["mismatches"]))


@dataclass(frozen=True)
class WilfReport:
    """Pairs (T, tau) grouped by equal counting sequences on 0..n_max."""

    k: int
    n_max: int
    groups: tuple[tuple[tuple[str, tuple[int, ...]], ...], ...] = field(default=())

    def to_dict(self) -> dict:
        return {"k": self.k, "n_max": self.n_max,
                "groups": [{"sequence": list(g[0][1]), "members": [m for m, _ in g]}
                           for g in self.groups]}

    @classmethod
    def from_dict(cls, d: dict) -> WilfReport:
        groups = tuple(tuple((m, tuple(g["sequence"])) for m in g["members"])
                       for g in d["groups"])
        return cls(d["k"], d["n_max"], groups)

    def members(self) -> list[list[str]]:
        return [[m for m, _ in g] for g in self.groups]


# commands -------------------------------------------------------------------

def run_seq(spec: QuerySpec, cofactor: str = "oracle", guard: int = DEFAULT_GUARD) -> SeqReport:
    lo, hi = spec.n_range
    formula = oracle_counts = None
    if spec.source in (Source.FORMULA, Source.BOTH):
        formula = dispatch(spec.T, spec.tau, max(hi, DEFAULT_ORDER), cofactor, guard).coefficients(hi)
    if spec.source in (Source.ORACLE, Source.BOTH):
        oracle_counts = oracle.exactly_once_counts(spec.T, spec.tau, hi, guard)
    rows = tuple(SeqRow(n, None if formula is None else formula[n],
                        None if oracle_counts is None else oracle_counts[n])
                 for n in range(lo, hi + 1))
    return SeqReport(spec.T, spec.tau, rows)


def run_verify(families: Sequence[Family], k_max: int, n_max: int,
               guard: int = DEFAULT_GUARD, k_min: int = 1) -> VerifyReport:
    checked = 0
    bad = []
    for fam in families:
        for k in range(k_min, k_max + 1):
            for tau in sorted(oracle.generate_avoiders(fam.T, k, guard)):
                res = dispatch(fam.T, tau, max(n_max, DEFAULT_ORDER), "oracle", guard)
                got = res.coefficients(n_max)
                want = oracle.exactly_once_counts(fam.T, tau, n_max, guard)
                checked += 1
                if got != want:
                    bad.append(Mismatch(fam.T, tau, got, want,
                                        tuple(s.to_dict() for s in res.derivation)))
    return VerifyReport(k_max, n_max, checked, tuple(bad))


def run_wilf(k: int, n_max: int, guard: int = DEFAULT_GUARD) -> WilfReport:
    seen: dict[tuple[int, ...], list[str]] = {}
    for fam in FAMILY_GROUPS["all"]:
        for tau in sorted(oracle.generate_avoiders(fam.T, k, guard)):
            seq = oracle.exactly_once_counts(fam.T, tau, n_max, guard)
            seen.setdefault(seq, []).append(pair_label(fam.T, tau))
    groups = tuple(tuple((m, seq) for m in members) for seq, members in seen.items())
    return WilfReport(k, n_max, groups)


# rendering ------------------------------------------------------------------

def render_gf(res: GfResult, T: Sequence[Perm], tau: Perm, fmt_: Format) -> str:
    if fmt_ is Format.JSON:
        d = res.to_dict()
        d.update({"T": [fmt(t) for t in T], "tau": fmt(tau)})
        return json.dumps(d, indent=2)
    lines = []
    note = violation(tau, T)
    if note is not None:
        lines.append(f"note: tau contains a forbidden pattern ({fmt(note[0])} at {note[1]})")
    kind = "closed" if res.closed else "series"
    lines.append(f"{pair_label(T, tau)} [{kind}]: {res.value}")
    if res.closed:
        lines.append(f"expansion: {res.series()}")
    return "\n".join(lines)


def _cell(v) -> str:
    return str(v).lower() if isinstance(v, bool) else str(v)


def render_seq(rep: SeqReport, fmt_: Format, source: Source) -> str:
    if fmt_ is Format.JSON:
        return json.dumps(rep.to_dict(), indent=2)
    if fmt_ is Format.BFILE:
        counts = [r.formula if r.formula is not None else r.oracle for r in rep.rows]
        head = (f"# T={_set_label(rep.T)} tau={fmt(rep.tau)} source={source.value}"
                f" offset={rep.rows[0].n if rep.rows else 0}")
        return "\n".join([head] + [f"{r.n} {c}" for r, c in zip(rep.rows, counts) if r.n >= 1])
    cols = ["n"]
    if source in (Source.FORMULA, Source.BOTH):
        cols.append("formula")
    if source in (Source.ORACLE, Source.BOTH):
        cols.append("oracle")
    if source is Source.BOTH:
        cols.append("match")
    table = [[_cell(getattr(r, c)) for c in cols] for r in rep.rows]
    if fmt_ is Format.CSV:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows(table)
        return buf.getvalue().rstrip("\n")
    width = [max(len(c), *(len(row[i]) for row in table)) if table else len(c)
             for i, c in enumerate(cols)]
    out = ["  ".join(c.rjust(w) for c, w in zip(cols, width))]
    out += ["  ".join(v.rjust(w) for v, w in zip(row, width)) for row in table]
    return "\n".join(out)


def render_verify(rep: VerifyReport, fmt_: Format) -> str:
    if fmt_ is Format.JSON:
        return json.dumps(rep.to_dict(), indent=2)
    out = [f"checked {rep.checked} patterns, k <= {rep.k_max}, n <= {rep.n_max}: "
           f"{len(rep.mismatches)} mismatches"]
    for m in rep.mismatches:
        out.append(f"MISMATCH {pair_label(m.T, m.tau)}")
        out.append(f"  formula {list(m.formula)}")
        out.append(f"  oracle  {list(m.oracle)}")
        for s in m.derivation:
            out.append(f"    {s['rule']}: {s['paper_locator']} | factor {s['factor']}"
                       f" | remainder {s['remainder']}")
    return "\n".join(out)


def render_wilf(rep: WilfReport, fmt_: Format) -> str:
    if fmt_ is Format.JSON:
        return json.dumps(rep.to_dict(), indent=2)
    out = []
    for g in rep.groups:
        seq = ",".join(map(str, g[0][1]))
        out.append(f"[{seq}] " + " ".join(m for m, _ in g))
    return "\n".join(out)


def render_classify(T: Sequence[Perm], tau: Perm, res: GfResult) -> str:
    out = [f"member: yes ({fmt(tau)} avoids {_set_label(T)})"]
    if (1, 2, 3) in T and (3, 2, 1) in T:
        out.append("symmetry: none needed, T contains both 123 and 321")
    else:
        image, t, g = canonicalize(T, tau)
        fam = family_of(image)
        out.append(f"symmetry: {g} -> {fam.label}, tau -> {fmt(t)}")
        d = decompose(t, fam)
        out.append(f"shape: {d.shape} {json.dumps(d.to_dict()['params'])}")
    for i, s in enumerate(res.derivation, 1):
        out.append(f"{i}. {s.rule}: {s.paper_locator}; factor {s.factor}; remainder {s.remainder}")
    out.append(f"result: {res.value}")
    return "\n".join(out)


# argument handling ----------------------------------------------------------

def _n_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..")
            lo, hi = int(a), int(b)
        else:
            lo, hi = 0, int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    if not 0 <= lo <= hi:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return lo, hi


def _tset(text: str) -> tuple[Perm, ...]:
    try:
        return forbidden_set(text)
    except PermError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _perm(text: str) -> Perm:
    try:
        return parse(text)
    except PermError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="permonce",
                                description="Count permutations avoiding a set of 3-letter "
                                            "patterns and containing another pattern exactly once.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, pattern=True):
        if pattern:
            sp.add_argument("--avoid", type=_tset, required=True, help="forbidden set, e.g. 123,132")
            sp.add_argument("--contain", type=_perm, required=True, help="pattern tau, e.g. 2413")
        sp.add_argument("--format", type=Format, choices=list(Format), default=Format.TEXT,
                        metavar="{" + ",".join(f.value for f in Format) + "}")
        sp.add_argument("--guard", type=int, default=DEFAULT_GUARD, help="largest n for the oracle")
        sp.add_argument("--cofactor", choices=COFACTOR_MODES, default="oracle",
                        help="how to obtain avoidance cofactors")

    g = sub.add_parser("gf", help="generating function")
    common(g)
    g.add_argument("--order", type=int, default=DEFAULT_ORDER)

    s = sub.add_parser("seq", help="counting sequence")
    common(s)
    s.add_argument("--n", type=_n_range, default=(0, DEFAULT_ORDER), help="N or A..B")
    s.add_argument("--source", type=Source, choices=list(Source), default=Source.FORMULA,
                   metavar="{" + ",".join(f.value for f in Source) + "}")

    v = sub.add_parser("verify", help="compare formulas against the oracle")
    common(v, pattern=False)
    v.add_argument("--families", choices=sorted(FAMILY_GROUPS), default=None)
    v.add_argument("--avoid", type=_tset, action="append", default=None,
                   help="canonical forbidden set; may repeat")
    v.add_argument("--k-max", type=int, default=5)
    v.add_argument("--n-max", type=int, default=9)

    c = sub.add_parser("classify", help="membership, symmetry and decomposition trace")
    common(c)

    w = sub.add_parser("wilf", help="group canonical pairs by counting sequence")
    common(w, pattern=False)
    w.add_argument("--k", type=int, default=3)
    w.add_argument("--n-max", type=int, default=10)
    return p


def _not_in_class(T, tau) -> int:
    t, occ = violation(tau, T)
    print(f"not in class: {fmt(tau)} contains {fmt(t)} at {occ}", file=sys.stderr)
    return EXIT_NOT_IN_CLASS


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except (PermError, Unsupported, ValueError) as e:
        if isinstance(e, NotInClass):
            print(f"not in class: {e}", file=sys.stderr)
            return EXIT_NOT_IN_CLASS
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def _run(args: argparse.Namespace) -> int:
    if args.command == "gf":
        res = dispatch(args.avoid, args.contain, args.order, args.cofactor, args.guard)
        print(render_gf(res, args.avoid, args.contain, args.format))
        return EXIT_OK
    if args.command == "seq":
        lo, hi = args.n
        if args.source is not Source.FORMULA and hi > args.guard:
            raise PermError(f"n={hi} exceeds the oracle guard {args.guard}")
        spec = QuerySpec(args.avoid, args.contain, args.n, args.source, args.format)
        rep = run_seq(spec, args.cofactor, args.guard)
        print(render_seq(rep, args.format, args.source))
        return EXIT_OK
    if args.command == "verify":
        fams: list[Family] = []
        if args.families:
            fams += FAMILY_GROUPS[args.families]
        for T in args.avoid or ():
            fam = family_of(T)
            if fam is None:
                raise PermError(f"{_set_label(T)} is not a canonical family")
            fams.append(fam)
        if not fams:
            fams = list(FAMILY_GROUPS["all"])
        rep = run_verify(fams, args.k_max, args.n_max, args.guard)
        print(render_verify(rep, args.format))
        return EXIT_MISMATCH if rep.mismatches else EXIT_OK
    if args.command == "classify":
        if violation(args.contain, args.avoid) is not None:
            return _not_in_class(args.avoid, args.contain)
        res = dispatch(args.avoid, args.contain, DEFAULT_ORDER, args.cofactor, args.guard)
        if args.format is Format.JSON:
            print(render_gf(res, args.avoid, args.contain, Format.JSON))
        else:
            print(render_classify(args.avoid, args.contain, res))
        return EXIT_OK
    if args.command == "wilf":
        rep = run_wilf(args.k, args.n_max, args.guard)
        print(render_wilf(rep, args.format))
        return EXIT_OK
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
