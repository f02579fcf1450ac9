"""Batch command-line frontend.

Subcommands drive the library's audits, dichotomy searches, witness
computations, and coloring reductions with reproducible output:
identical configuration and inputs produce byte-identical text and
json output (timing is only emitted under --timing, and the csv
format's seconds column is empty without it).

Exit codes: 0 success (bounded-pass / dichotomy certified / witness
found / monochromatic reduct), 1 counterexample or lower-bound-only,
2 usage or input errors, 3 inconclusive or exhausted bound, 4 refusal
because a size estimate exceeds a ceiling.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .audit import AuditBounds, audit_axioms
from .errors import CeilingExceededError, ParseError, RamspaceError
from .forcing import (
    ALT1,
    ALT2,
    FrontFamily,
    GalvinParams,
    galvin_search,
)
from .core import Stem
from .ramsey import (
    EXHAUSTED,
    EXHAUSTIVE_CEILING,
    FOUND,
    LOWER_BOUND,
    Coloring,
    abs_ramsey_reduce,
    classical_ramsey_number,
    finite_ramsey_witness,
    glr_witness,
    gr_paramset_witness,
)
from .spaces import (
    ell_space,
    matrix_space,
    parse_params_str,
    partition_space,
    space_from_params,
)

ENV_CEILING = "RAMSPACE_CEILING"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
EXIT_REFUSED = 4


def _default_ceiling() -> int:
    raw = os.environ.get(ENV_CEILING)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise SystemExit(f"bad {ENV_CEILING} value: {raw!r}")
    return EXHAUSTIVE_CEILING


def _build_space(args) -> object:
    if args.space == "ellentuck":
        if args.ground is None:
            raise ParseError("--ground is required for the ellentuck space")
        return ell_space(args.ground)
    if args.space == "matrix":
        if args.max_cols is None:
            raise ParseError("--max-cols is required for the matrix space")
        return matrix_space(args.q, args.max_cols)
    if args.space == "partition":
        if args.domain is None:
            raise ParseError("--domain is required for the partition space")
        return partition_space(args.domain)
    raise ParseError(f"unknown space {args.space!r}")


def _read_lines(path: str) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip()]


def parse_family_file(lines: list[str]) -> FrontFamily:
    """Family files: a space header line, an optional length_bound line,
    then one canonical member serialization per line."""
    if not lines:
        raise ParseError("empty family file")
    space = space_from_params(parse_params_str(lines[0]))
    bound = None
    body = lines[1:]
    if body and body[0].startswith("length_bound="):
        bound = int(body[0].split("=", 1)[1])
        body = body[1:]
    members = tuple(space.parse(ln) for ln in body)
    if bound is None:
        bound = max((m.length for m in members), default=0)
    return FrontFamily(space, members, bound)


def parse_coloring_file(lines: list[str]) -> Coloring:
    """Coloring files: a space header, a `k=..;s=..` line, then
    `serialization:color` lines."""
    if len(lines) < 2:
        raise ParseError("coloring file needs a space header and a k/s line")
    space = space_from_params(parse_params_str(lines[0]))
    meta = parse_params_str(lines[1])
    k, s = int(meta["k"]), int(meta["s"])
    mapping = {}
    for ln in lines[2:]:
        body, sep, color = ln.rpartition(":")
        if not sep:
            raise ParseError(f"bad coloring line: {ln!r}")
        a = space.parse(body)
        mapping[space.serialize(a)] = int(color)
    return Coloring(space, k, s, mapping)


class Output:
    def __init__(self, args):
        self.format = args.format
        self.path = args.output
        self.timing = args.timing
        self.started = time.perf_counter()

    def seconds(self):
        return round(time.perf_counter() - self.started, 3) if self.timing else None

    def emit(self, payload: dict, text_lines: list[str], csv_rows: list[str]):
        if self.format == "json":
            payload = dict(payload, seconds=self.seconds())
            content = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        elif self.format == "csv":
            secs = "" if self.seconds() is None else f"{self.seconds()}"
            header = "instance,outcome,value,count_checked,seconds"
            content = "\n".join([header] + [r + secs for r in csv_rows]) + "\n"
        else:
            lines = list(text_lines)
            if self.timing:
                lines.append(f"seconds: {self.seconds()}")
            content = "\n".join(lines) + "\n"
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(content)
        else:
            sys.stdout.write(content)


def cmd_audit(args) -> int:
    out = Output(args)
    try:
        space = _build_space(args)
        bounds = AuditBounds(
            max_len=args.max_len,
            max_depth=args.depth,
            include_a6=args.a6,
            a6_max_len=args.max_len,
        )
    except (RamspaceError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = audit_axioms(space, bounds)
    except CeilingExceededError as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    code = EXIT_OK if report.passed else EXIT_NEGATIVE
    rows = [
        {
            "axiom": c.axiom,
            "name": c.name,
            "status": c.status,
            "instances": c.instances,
            "notes": c.notes,
            "witness": c.witness,
        }
        for c in report.checks
    ]
    payload = {
        "command": "audit",
        "parameters": {"space": space.params_str(), "bounds": vars(bounds) | {}},
        "outcome": "bounded-pass" if report.passed else "counterexample",
        "exit_code": code,
        "report": rows,
        "stats": {
            "depth_pairs_checked": report.depth_pairs_checked,
            "depth_violations": report.depth_violations,
        },
    }
    csv_rows = [
        f"audit:{space.params_str()},{payload['outcome']},,"
        f"{sum(c.instances for c in report.checks)},"
    ]
    out.emit(payload, report.summary_lines(), csv_rows)
    return code


def cmd_galvin(args) -> int:
    out = Output(args)
    try:
        if args.family:
            family = parse_family_file(_read_lines(args.family))
        else:
            space = _build_space(args)
            members = tuple(space.parse(m) for m in args.member)
            bound = args.length_bound
            if bound is None:
                bound = max((m.length for m in members), default=0)
            family = FrontFamily(space, members, bound)
        space = family.space
        if args.horizon is not None and args.horizon < family.length_bound:
            raise ParseError("--horizon below the family length bound")
        if args.stem:
            ambient = Stem(space, space.parse(args.stem))
        elif hasattr(space, "full_stem"):
            ambient = space.full_stem()
        elif hasattr(space, "identity_stem"):
            ambient = space.identity_stem()
        else:
            ambient = space.discrete_stem()
    except (RamspaceError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    params = GalvinParams(
        horizon=args.horizon,
        max_reducts=args.max_reducts,
        allow_greedy=not args.no_greedy,
    )
    try:
        result = galvin_search(ambient, family, params)
    except CeilingExceededError as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    code = EXIT_OK if result.outcome in (ALT1, ALT2) else EXIT_INCONCLUSIVE
    payload = {
        "command": "galvin",
        "parameters": {
            "space": space.params_str(),
            "family": family.serialize_members(),
            "length_bound": family.length_bound,
            "ambient": ambient.serialize(),
        },
        "outcome": result.outcome,
        "exit_code": code,
        "stem": result.stem.serialize() if result.stem else None,
        "certificates": {"dichotomy": result.certificate} if result.certificate else {},
        "diagnostics": result.diagnostics or None,
        "stats": result.stats,
    }
    text = [f"outcome: {result.outcome}"]
    if result.stem:
        text.append(f"stem: {result.stem.serialize()}")
    if result.diagnostics:
        text.append(f"diagnostics: {result.diagnostics}")
    if result.certificate:
        text.append(result.certificate.rstrip("\n"))
    csv_rows = [
        f"galvin:{space.params_str()},{result.outcome},,"
        f"{result.stats.get('reducts_scanned', 0)},"
    ]
    out.emit(payload, text, csv_rows)
    return code


def _run_ramsey(args):
    kw = dict(
        mode=args.mode,
        exhaustive_ceiling=_default_ceiling(),
        node_budget=args.node_budget,
        jobs=args.jobs,
    )
    if args.variant == "classical":
        instance = f"classical;k={args.k};n={args.n};s={args.s}"
        return instance, classical_ramsey_number(args.k, args.n, args.s, args.bound, **kw)
    if args.variant == "glr":
        instance = f"glr;q={args.q};k={args.k};n={args.n};s={args.s}"
        return instance, glr_witness(args.q, args.k, args.n, args.s, args.bound, **kw)
    if args.variant == "paramset":
        instance = f"paramset;k={args.k};m={args.m};s={args.s}"
        return instance, gr_paramset_witness(args.k, args.m, args.s, args.bound, **kw)
    instance = f"witness;space={args.space};k={args.k};n={args.n};s={args.s}"
    return instance, finite_ramsey_witness(
        args.space, args.k, args.n, args.s, args.bound, q=args.q, **kw
    )


def cmd_ramsey(args) -> int:
    out = Output(args)
    try:
        instance, result = _run_ramsey(args)
    except CeilingExceededError as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except (RamspaceError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    code = {
        FOUND: EXIT_OK,
        LOWER_BOUND: EXIT_NEGATIVE,
        EXHAUSTED: EXIT_INCONCLUSIVE,
    }[result.outcome]
    certs = {}
    if result.found_certificate:
        certs["found"] = result.found_certificate
    if result.lower_bound_certificate:
        certs["lower_bound"] = result.lower_bound_certificate
    payload = {
        "command": "ramsey",
        "parameters": {"instance": instance, "bound": args.bound, "mode": args.mode},
        "outcome": result.outcome,
        "value": result.value,
        "exit_code": code,
        "certificates": certs,
        "stats": result.stats,
    }
    text = [f"outcome: {result.outcome}", f"value: {result.value}"]
    for name in sorted(certs):
        text.append(certs[name].rstrip("\n"))
    out.emit(payload, text, [result.csv_row(instance) ])
    return code


def cmd_reduce(args) -> int:
    out = Output(args)
    try:
        coloring = parse_coloring_file(_read_lines(args.coloring))
        space = coloring.space
        if args.stem:
            ambient = Stem(space, space.parse(args.stem))
        else:
            ambient = space.full_stem()
        result = abs_ramsey_reduce(coloring, ambient)
    except (RamspaceError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    code = EXIT_OK if result.outcome == "mono" else EXIT_INCONCLUSIVE
    payload = {
        "command": "reduce",
        "parameters": {"space": space.params_str(), "k": coloring.k, "s": coloring.s},
        "outcome": result.outcome,
        "exit_code": code,
        "stem": result.stem.serialize() if result.stem else None,
        "color": result.color,
        "certificates": {
            f"stage{i}": c for i, c in enumerate(result.certificates) if c
        },
        "diagnostics": result.diagnostics or None,
        "stats": {},
    }
    text = [f"outcome: {result.outcome}"]
    if result.stem:
        text.append(f"stem: {result.stem.serialize()}")
        text.append(f"color: {result.color}")
    csv_rows = [f"reduce:{space.params_str()},{result.outcome},{result.color if result.color is not None else ''},,"]
    out.emit(payload, text, csv_rows)
    return code


def _add_common(p):
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--output", help="write output to this path instead of stdout")
    p.add_argument(
        "--timing",
        action="store_true",
        help="include wall time (off by default so output is byte-stable)",
    )


def _add_space_options(p):
    p.add_argument("--space", choices=("ellentuck", "matrix", "partition"))
    p.add_argument("--ground", type=int, help="ellentuck ground bound")
    p.add_argument("--q", type=int, default=2, help="matrix field order")
    p.add_argument("--max-cols", type=int, help="matrix column truncation")
    p.add_argument("--domain", type=int, help="partition domain truncation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramspace",
        description="Audits, dichotomy searches, and Ramsey witnesses "
        "on truncated approximation spaces.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="check the structural laws of a space")
    _add_space_options(p)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--max-len", type=int, default=2)
    p.add_argument("--a6", action="store_true", help="include the pigeonhole audit")
    _add_common(p)
    p.set_defaults(fn=cmd_audit)

    p = sub.add_parser("galvin", help="run the dichotomy search for a front family")
    _add_space_options(p)
    p.add_argument("--family", help="family file (header + one member per line)")
    p.add_argument(
        "--member",
        action="append",
        default=[],
        help="inline family member (repeatable; requires --space options)",
    )
    p.add_argument("--length-bound", type=int)
    p.add_argument("--stem", help="ambient stem serialization (default: full stem)")
    p.add_argument("--horizon", type=int)
    p.add_argument("--max-reducts", type=int, default=1 << 16)
    p.add_argument(
        "--no-greedy",
        action="store_true",
        help="refuse oversized universes instead of excluding greedily",
    )
    _add_common(p)
    p.set_defaults(fn=cmd_galvin)

    p = sub.add_parser("ramsey", help="compute a finite Ramsey-type witness")
    variant = p.add_subparsers(dest="variant", required=True)
    for name in ("classical", "glr", "paramset", "witness"):
        v = variant.add_parser(name)
        v.add_argument("--k", type=int, required=True)
        if name == "paramset":
            v.add_argument("--m", type=int, required=True)
        else:
            v.add_argument("--n", type=int, required=True)
        v.add_argument("--s", type=int, required=True)
        v.add_argument("--bound", type=int, required=True)
        v.add_argument("--mode", choices=("exhaustive", "backtracking"), default="exhaustive")
        v.add_argument("--node-budget", type=int)
        v.add_argument("--jobs", type=int, default=1)
        if name in ("glr", "witness"):
            v.add_argument("--q", type=int, default=2)
        if name == "witness":
            v.add_argument(
                "--space", choices=("ellentuck", "matrix", "partition"), required=True
            )
        _add_common(v)
        v.set_defaults(fn=cmd_ramsey)

    p = sub.add_parser("reduce", help="find a reduct on which a coloring is constant")
    p.add_argument("--coloring", required=True, help="coloring file")
    p.add_argument("--stem", help="ambient stem serialization (default: full stem)")
    _add_common(p)
    p.set_defaults(fn=cmd_reduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors already
        return int(e.code or 0)
    try:
        return args.fn(args)
    except (ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
