"""Command-line front end: ``alphaspectra <subcommand> ...``.

Exit status is 0 on success, 1 when a verification suite fails, 2 on input
errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import alphamat, bounds, closedform, verify
from .alphamat import AlphaError, parse_alpha
from .digraph import Digraph, DigraphError, Family, format_digraph, make_family, parse_digraph, parse_family

SUBCOMMANDS = ("spectrum", "bounds", "family", "verify", "trees", "km-search")


class UsageError(Exception):
    pass


@dataclass
class CommandPlan:
    subcommand: str
    input_path: str | None = None
    family: Family | None = None
    alphas: list = field(default_factory=list)
    output_format: str = "text"
    out: str | None = None
    characterization: str = "isolated"
    n: int | None = None
    n_max: int | None = None
    suite: str = "exhaustive"
    allow_large: bool = False
    workers: int | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _alpha_list(text: str) -> list:
    try:
        return [parse_alpha(x) for x in text.split(",") if x.strip()]
    except AlphaError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _family(text: str) -> Family:
    try:
        return parse_family(text)
    except DigraphError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alphaspectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    def output_flags(p, formats=("text", "json", "csv")):
        p.add_argument("--format", choices=formats, default="text", dest="output_format")
        p.add_argument("--out", help="write output to this path instead of stdout")

    def source_flags(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--input", dest="input_path", help="edge-list file")
        src.add_argument("--family", type=_family,
                         help="path:n, cycle:n, kbip:r,s, symk:n, shrikhande, discrete:n")

    def char_flag(p):
        p.add_argument("--characterization", choices=bounds.CHARACTERIZATIONS, default="isolated",
                       help="which equality/rank-one characterization to check against")

    p = sub.add_parser("spectrum", help="alpha-singular values and norms")
    source_flags(p)
    p.add_argument("--alpha", type=_alpha_list, default=[parse_alpha("0")], dest="alphas")
    output_flags(p)

    p = sub.add_parser("bounds", help="bound report with equality cases")
    source_flags(p)
    p.add_argument("--alpha", type=_alpha_list, default=[parse_alpha("0")], dest="alphas")
    char_flag(p)
    output_flags(p)

    p = sub.add_parser("family", help="emit a family member as an edge list")
    p.add_argument("--family", type=_family, required=True)
    output_flags(p, ("text", "json"))

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=("exhaustive", "cycle-coefficient"), default="exhaustive")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--n-max", type=int, default=12, dest="n_max",
                   help="largest cycle for --suite cycle-coefficient")
    p.add_argument("--grid", type=_alpha_list, default=list(verify.RANK_GRID), dest="alphas")
    p.add_argument("--allow-large", action="store_true", help="permit n = 5")
    p.add_argument("--workers", type=int)
    char_flag(p)
    output_flags(p, ("text", "json"))

    p = sub.add_parser("trees", help="minimum trace norm over oriented trees")
    p.add_argument("--n", type=int)
    p.add_argument("--n-max", type=int, default=6, dest="n_max")
    output_flags(p)

    p = sub.add_parser("km-search", help="digraphs attaining the a/n + sqrt(...) upper bound")
    p.add_argument("--n-max", type=int, default=3, dest="n_max")
    p.add_argument("--grid", type=_alpha_list, default=[parse_alpha("0"), parse_alpha("1/2")],
                   dest="alphas")
    output_flags(p)
    return parser


def parse_args(argv: Sequence[str]) -> CommandPlan:
    args = build_parser().parse_args(list(argv))
    if args.subcommand is None:
        raise UsageError(f"missing subcommand; choose one of {', '.join(SUBCOMMANDS)}")
    fields = {k: v for k, v in vars(args).items() if k in CommandPlan.__dataclass_fields__}
    plan = CommandPlan(**fields)
    if plan.subcommand in ("spectrum", "bounds", "verify", "km-search") and not plan.alphas:
        raise UsageError("--alpha/--grid: at least one value required")
    return plan


# --------------------------------------------------------------------------


def _load_source(plan: CommandPlan) -> tuple[Digraph, str]:
    if plan.family is not None:
        return make_family(plan.family), str(plan.family)
    path = Path(plan.input_path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DigraphError(f"{path}: {exc.strerror or exc}") from None
    try:
        return parse_digraph(text), str(path)
    except DigraphError as exc:
        raise DigraphError(f"{path}: {exc}") from None


def _fmt(x) -> str:
    return bounds.format_number(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _spectrum(plan: CommandPlan) -> tuple[int, str]:
    D, label = _load_source(plan)
    fam = plan.family if plan.family and closedform.supports_closed_form(plan.family) else None
    entries = []
    for alpha in plan.alphas:
        spec = alphamat.alpha_spectrum(D, alpha)
        cf = closedform.closed_form_spectrum(fam, alpha).values if fam else None
        entries.append((alpha, spec, cf))

    if plan.output_format == "json":
        doc = [{
            "digraph": label, "n": D.n, "a": D.arc_count, "alpha": float(a),
            "singular_values": s.values.tolist(), "trace_norm": s.trace_norm,
            "spectral_norm": s.spectral_norm,
            "closed_form": None if cf is None else cf.tolist(),
        } for a, s, cf in entries]
        return 0, json.dumps(doc, indent=2) + "\n"
    if plan.output_format == "csv":
        rows = [[label, _fmt(float(a)), _fmt(s.trace_norm), _fmt(s.spectral_norm),
                 " ".join(map(_fmt, s.values)), "" if cf is None else " ".join(map(_fmt, cf))]
                for a, s, cf in entries]
        return 0, _csv(["digraph", "alpha", "trace_norm", "spectral_norm",
                        "singular_values", "closed_form"], rows)
    lines = []
    for a, s, cf in entries:
        lines.append(f"digraph: {label} (n={D.n}, a={D.arc_count})")
        lines.append(f"alpha: {_fmt(float(a))}")
        lines.append("singular values: " + " ".join(map(_fmt, s.values)))
        if cf is not None:
            lines.append("closed form:     " + " ".join(map(_fmt, cf)))
        lines.append(f"trace norm: {_fmt(s.trace_norm)}")
        lines.append(f"spectral norm: {_fmt(s.spectral_norm)}")
        lines.append("")
    return 0, "\n".join(lines)


def _bounds(plan: CommandPlan) -> tuple[int, str]:
    D, label = _load_source(plan)
    reps = [bounds.bound_report(D, a) for a in plan.alphas]
    char = plan.characterization
    if plan.output_format == "csv":
        return 0, _csv(bounds.CSV_COLUMNS, [bounds.csv_row(r, D, char) for r in reps])
    if plan.output_format == "json":
        doc = [bounds.report_json(r, D, char) for r in reps]
        return 0, json.dumps(doc, indent=2) + "\n"
    lines = []
    for r in reps:
        lines.append(f"digraph: {label} (n={r.n}, a={r.a}, sum d+^2={r.sum_sq_outdeg})")
        lines.append(f"alpha: {_fmt(r.alpha)}")
        lines.append(f"trace norm: {_fmt(r.trace_norm)}")
        lines.append(f"spectral norm: {_fmt(r.spectral_norm)}")
        if not r.applicable:
            lines.append("bounds: not applicable for n = 1")
        else:
            lines.append(f"|det|: {_fmt(r.abs_det)}")
            for name in ("lower_basic", "lower_det", "spectral_floor", "upper_mcclelland"):
                lines.append(f"{name}: {_fmt(getattr(r, name))} (slack {_fmt(r.slacks[name])})")
            if r.km_applicable:
                lines.append(f"upper_km: {_fmt(r.upper_km)} (slack {_fmt(r.slacks['upper_km'])})")
            else:
                lines.append(f"upper_km: not applicable (a < n*beta, beta={_fmt(r.km_beta)})")
            lines.append("equality: " + (bounds.equality_tags(r, D, char) or "none"))
        lines.append("")
    return 0, "\n".join(lines)


def _family_cmd(plan: CommandPlan) -> tuple[int, str]:
    D = make_family(plan.family)
    if plan.output_format == "json":
        doc = {"family": str(plan.family), "n": D.n, "a": D.arc_count, "arcs": D.arcs(),
               "code": D.code}
        return 0, json.dumps(doc) + "\n"
    return 0, f"# {plan.family}\n" + format_digraph(D)


def _verify(plan: CommandPlan) -> tuple[int, str]:
    if plan.suite == "cycle-coefficient":
        summary = verify.arbitrate_cycle_coefficient(plan.n_max)
    else:
        summary = verify.run_exhaustive(
            plan.n, plan.alphas, plan.characterization,
            workers=plan.workers, allow_large=plan.allow_large,
        )
    text = summary.to_json() + "\n" if plan.output_format == "json" else summary.to_text()
    return (0 if summary.passed else 1), text


def _trees(plan: CommandPlan) -> tuple[int, str]:
    orders = [plan.n] if plan.n else list(range(2, plan.n_max + 1))
    summaries = [verify.verify_tree_minimum(n) for n in orders]
    status = 0 if all(s.passed for s in summaries) else 1
    if plan.output_format == "json":
        return status, json.dumps([s.to_dict() for s in summaries], indent=2) + "\n"
    header = ["n", "oriented_trees", "minimum", "sqrt_n_minus_1", "minimizers", "failures"]
    rows = [[str(s.parameters["n"]), str(s.stats["oriented_trees"]),
             _fmt(s.stats["minimum_trace_norm"]), _fmt(math.sqrt(s.parameters["n"] - 1)),
             str(s.stats["minimizers"]), str(s.failure_count)] for s in summaries]
    if plan.output_format == "csv":
        return status, _csv(header, rows)
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    out = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    out += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    for s in summaries:
        out += [f"note (n={s.parameters['n']}): {note}" for note in s.notes]
    return status, "\n".join(out) + "\n"


def _km_search(plan: CommandPlan) -> tuple[int, str]:
    found = verify.find_km_equality_candidates(plan.n_max, plan.alphas)
    if plan.output_format == "json":
        doc = {"n_max": plan.n_max, "alpha_grid": [str(a) for a in plan.alphas],
               "complete_only_for_this_sweep": True,
               "candidates": [{"digraph": c, "alpha": str(a)} for c, a in found]}
        return 0, json.dumps(doc, indent=2) + "\n"
    rows = [[c, str(a)] for c, a in found]
    if plan.output_format == "csv":
        return 0, _csv(["digraph", "alpha"], rows)
    lines = [f"{len(found)} candidate(s) with n <= {plan.n_max}:"]
    lines += [f"  {c} alpha={a}" for c, a in found]
    return 0, "\n".join(lines) + "\n"


HANDLERS = {
    "spectrum": _spectrum, "bounds": _bounds, "family": _family_cmd,
    "verify": _verify, "trees": _trees, "km-search": _km_search,
}


def execute(plan: CommandPlan) -> tuple[int, str]:
    try:
        return HANDLERS[plan.subcommand](plan)
    except (DigraphError, AlphaError, ValueError) as exc:
        return 2, f"error: {exc}\n"


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        plan = parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    status, text = execute(plan)
    if status == 2:
        sys.stderr.write(text)
        return status
    if plan.out:
        try:
            Path(plan.out).write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            sys.stderr.write(f"error: {plan.out}: {exc.strerror or exc}\n")
            return 2
    else:
        sys.stdout.write(text)
    return status
