"""Command-line interface.

Exit codes: 0 success, 1 usage or validation error, 2 the closed-form and
Pfaffian routes disagree, 3 a Monte Carlo check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__
from .ginibre import (
    InvalidPartition,
    charpoly_expansion,
    charpoly_pair_average,
    pfaffian_route,
    schur_average_closed,
    schur_average_pfaffian,
    trace_power_average,
)
from .montecarlo import (
    MIN_SAMPLES,
    charpoly_id,
    charpoly_pair_statistic,
    density_histogram_check,
    run_statistics,
    schur_id,
    schur_statistic,
    trace_id,
    trace_statistic,
)
from .partitions import Partition, enumerate_partitions, hooks_of

EXIT_OK, EXIT_USAGE, EXIT_DISAGREE, EXIT_STAT = 0, 1, 2, 3
Z_THRESHOLD = 5.0

DEFAULT_PARTITIONS = ("2", "4", "2,2", "4,2", "2,2,2", "1", "3,1")
DEFAULT_DIMS = (2, 4, 6)
DEFAULT_TRACE_POWERS = (2, 3, 4, 6)
DEFAULT_PAIRS = ((0.3, -0.2), (0.5, 0.5))

log = logging.getLogger("schur_ginibre")


class UsageError(Exception):
    pass


@dataclass
class Report:
    """What a command produced: rows for csv/json and lines for text."""

    rows: list[dict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    text: list[str] = field(default_factory=list)
    code: int = EXIT_OK


def _exact(v) -> str:
    # exact values travel as decimal strings
    return str(Fraction(v))


def _route_values(lam: Partition, n: int, method: str, embed_dim: int | None) -> dict:
    out = {}
    if method in ("closed", "both"):
        out["closed"] = schur_average_closed(lam, n).value
    if method in ("pfaffian", "both"):
        if len(lam) > n:
            out["pfaffian"] = Fraction(0)
        else:
            out["pfaffian"] = schur_average_pfaffian(lam, n, embed_dim).value
    return out


def cmd_avg(args) -> Report:
    lam, n = args.partition, args.dim
    values = _route_values(lam, n, args.method, args.embed_dim)
    agree = len(set(values.values())) == 1
    value = next(iter(values.values()))
    row = {"partition": str(lam), "dim": n, "value": _exact(value), "method": args.method}
    if args.method == "both":
        row.update({f"{k}_value": _exact(v) for k, v in values.items()})
        row["routes_agree"] = agree
    rep = Report(rows=[row])
    routes = " = ".join(f"{v} ({k})" for k, v in values.items())
    rep.text.append(f"<s_({lam})>_{n} = {routes}")
    if not agree:
        rep.text.append("routes disagree")
        rep.code = EXIT_DISAGREE
    return rep


def cmd_table(args) -> Report:
    if args.max_weight < 0:
        raise UsageError("--max-weight must be >= 0")
    rep = Report(meta={"dim": args.dim, "max_weight": args.max_weight, "method": args.method})
    for lam in enumerate_partitions(args.max_weight, args.dim, args.max_weight):
        values = _route_values(lam, args.dim, args.method, None)
        value = next(iter(values.values()))
        if len(set(values.values())) != 1:
            rep.code = EXIT_DISAGREE
        rep.rows.append({"partition": str(lam), "weight": lam.weight(), "value": _exact(value)})
        rep.text.append(f"({lam})\t{value}")
    return rep


def cmd_pfaffian(args) -> Report:
    lam, n = args.partition, args.dim
    if len(lam) > n:
        raise UsageError(f"partition {lam} has more than {n} parts")
    route = pfaffian_route(lam, n, args.embed_dim)
    value = schur_average_pfaffian(lam, n, args.embed_dim).value
    row = {
        "partition": str(lam),
        "dim": n,
        "embed_dim": route.embed_dim,
        "rows": list(route.rows),
        "epsilon_inverse_pfaffian": _exact(route.epsilon_pfaffian),
        "a_prefactor": str(route.prefactor),
        "value": _exact(value),
    }
    rep = Report(rows=[row])
    rep.text += [
        f"rows {list(route.rows)} of eps^-1 in dimension {route.embed_dim}",
        f"Pfaff(eps^-1 submatrix) = {route.epsilon_pfaffian}",
        f"prod a_k = {route.prefactor}",
        f"<s_({lam})>_{n} = {value}",
    ]
    return rep


def _superscript(k: int) -> str:
    return "" if k == 1 else str(k).translate(str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹"))


def cmd_expand(args) -> Report:
    n = args.dim
    rep = Report(meta={"dim": n})
    if args.power_sum is not None:
        p = args.power_sum
        if p < 1:
            raise UsageError("--power-sum must be >= 1")
        total = Fraction(0)
        for lam, sign in hooks_of(p):
            v = schur_average_closed(lam, n).value
            total += sign * v
            rep.rows.append({"partition": str(lam), "sign": sign, "value": _exact(v)})
            rep.text.append(f"{'+' if sign > 0 else '-'} <s_({lam})> = {v}")
        rep.meta["power"] = p
        rep.meta["total"] = _exact(total)
        rep.text.append(f"<t_{p}>_{n} = {total}")
        if total != trace_power_average(p, n):
            rep.code = EXIT_DISAGREE
        return rep
    k = args.charpoly
    if k < 1:
        raise UsageError("--charpoly must be >= 1")
    rep.meta["factors"] = k
    terms = charpoly_expansion(k, n)
    if k == 2:
        coeffs = charpoly_pair_average(n)
        pieces = []
        for shape, c in terms:
            power = shape.first
            rep.rows.append({"shape": str(shape), "power": power, "coefficient": _exact(c)})
            pieces.append(str(c) if power == 0 else f"{c}·(x1x2){_superscript(power)}")
        if [c for _, c in terms] != coeffs:
            rep.code = EXIT_DISAGREE
    else:
        xs = ",".join(f"x{j}" for j in range(1, k + 1))
        pieces = []
        for shape, c in terms:
            rep.rows.append({"shape": str(shape), "coefficient": _exact(c)})
            pieces.append(str(c) if not shape.parts else f"{c}·s_({shape})({xs})")
    rep.text.append(" + ".join(pieces))
    return rep


def _parse_pairs(text: str) -> list[tuple[float, float]]:
    pairs = []
    for chunk in text.split(";"):
        if chunk.strip():
            a, b = chunk.split(",")
            pairs.append((float(a), float(b)))
    return pairs


def verification_targets(partitions, dims, trace_powers, pairs) -> dict[int, dict]:
    """Per dimension, map statistic id -> (statistic, exact target)."""
    plan: dict[int, dict] = {}
    for n in dims:
        stats = {}
        for lam in partitions:
            stats[schur_id(lam, n)] = (schur_statistic(lam), schur_average_closed(lam, n).value)
        for p in trace_powers:
            stats[trace_id(p, n)] = (trace_statistic(p), Fraction(trace_power_average(p, n)))
        for x1, x2 in pairs:
            coeffs = charpoly_pair_average(n)
            target = sum(Fraction(c) * (Fraction(x1) * Fraction(x2)) ** k for k, c in enumerate(coeffs))
            stats[charpoly_id(x1, x2, n)] = (charpoly_pair_statistic(x1, x2), target)
        plan[n] = stats
    return plan


def cmd_mc_verify(args) -> Report:
    if args.samples < MIN_SAMPLES:
        raise UsageError(f"--samples must be >= {MIN_SAMPLES}")
    partitions = [Partition.parse(p) for p in args.partitions.split(";")] if args.partitions else [Partition.parse(p) for p in DEFAULT_PARTITIONS]
    dims = [int(d) for d in args.dims.split(",")] if args.dims else list(DEFAULT_DIMS)
    powers = [int(p) for p in args.trace_powers.split(",")] if args.trace_powers else list(DEFAULT_TRACE_POWERS)
    pairs = _parse_pairs(args.pairs) if args.pairs else list(DEFAULT_PAIRS)
    if any(n < 1 for n in dims):
        raise UsageError("dimensions must be >= 1")

    rep = Report(meta={"seed": args.seed, "samples": args.samples, "threshold": Z_THRESHOLD})
    failed = 0
    for n, stats in verification_targets(partitions, dims, powers, pairs).items():
        estimates = run_statistics(n, args.samples, args.seed, {k: v[0] for k, v in stats.items()})
        for sid, (_, target) in stats.items():
            est = estimates[sid]
            target_f = float(target) + args.inject_bias
            z = est.z_score(target_f)
            ok = abs(z) < Z_THRESHOLD
            failed += not ok
            rep.rows.append({
                "statistic": sid,
                "target": _exact(target),
                "estimate": est.mean,
                "std_error": est.std_error,
                "z_score": z,
                "n_samples": est.n_samples,
                "seed": args.seed,
                "passed": ok,
            })
            rep.text.append(
                f"{'PASS' if ok else 'FAIL'} {sid:28s} target={float(target):<12.6g} "
                f"estimate={est.mean:<12.6g} se={est.std_error:<10.3g} z={z:+.2f}"
            )
    rep.meta["failed"] = failed
    rep.meta["passed"] = failed == 0
    if failed:
        rep.code = EXIT_STAT
    return rep


def cmd_density(args) -> Report:
    if args.samples < MIN_SAMPLES:
        raise UsageError(f"--samples must be >= {MIN_SAMPLES}")
    if args.dim < 2:
        raise UsageError("--dim must be >= 2")
    result = density_histogram_check(args.dim, args.samples, args.seed, bins=(args.bins_x, args.bins_y), band=args.band)
    rep = Report(meta={k: v for k, v in result.to_dict().items() if k not in ("observed", "expected", "z_scores")})
    for i, row in enumerate(result.observed):
        for j, obs in enumerate(row):
            rep.rows.append({
                "x_lo": result.x_edges[i], "x_hi": result.x_edges[i + 1],
                "y_lo": result.y_edges[j], "y_hi": result.y_edges[j + 1],
                "observed": obs, "expected": result.expected[i][j], "z_score": result.z_scores[i][j],
            })
    rep.text.append(
        f"N={args.dim} samples={result.n_samples} bins checked={result.bins_checked} "
        f"max |z|={result.max_abs_z:.2f} complex count={result.complex_count} "
        f"(expected {result.complex_expected:.1f}, z={result.complex_z:+.2f}) "
        f"{'PASS' if result.passed else 'FAIL'}"
    )
    if not result.passed:
        rep.code = EXIT_STAT
    return rep


def _partition_arg(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="schur-ginibre", description="Schur function averages over the real Ginibre ensemble")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("avg", parents=[common], help="exact <s_lam(H)>_N")
    s.add_argument("--partition", type=_partition_arg, required=True, help='e.g. "4,2,2"')
    s.add_argument("--dim", type=_positive, required=True)
    s.add_argument("--method", choices=("closed", "pfaffian", "both"), default="closed")
    s.add_argument("--embed-dim", type=int, default=None, help="override the even embedding dimension M")
    s.set_defaults(func=cmd_avg)

    s = sub.add_parser("table", parents=[common], help="averages for all partitions up to a weight")
    s.add_argument("--max-weight", type=int, required=True)
    s.add_argument("--dim", type=_positive, required=True)
    s.add_argument("--method", choices=("closed", "pfaffian", "both"), default="closed")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("pfaffian", parents=[common], help="show the Pfaffian construction for one partition")
    s.add_argument("--partition", type=_partition_arg, required=True)
    s.add_argument("--dim", type=_positive, required=True)
    s.add_argument("--embed-dim", type=int, default=None)
    s.set_defaults(func=cmd_pfaffian)

    s = sub.add_parser("expand", parents=[common], help="hook expansion of <t_n> or the charpoly product")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--power-sum", type=int, metavar="N")
    g.add_argument("--charpoly", type=int, metavar="FACTORS")
    s.add_argument("--dim", type=_positive, required=True)
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("mc-verify", parents=[common], help="Monte Carlo check of the closed forms")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--partitions", help='";"-separated, e.g. "2;2,2;3,1"')
    s.add_argument("--dims", help='comma-separated, e.g. "2,4,6"')
    s.add_argument("--trace-powers", help='comma-separated, e.g. "2,3,4"')
    s.add_argument("--pairs", help='";"-separated x1,x2 pairs, e.g. "0.3,-0.2;0.5,0.5"')
    s.add_argument("--inject-bias", type=float, default=0.0, help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_mc_verify)

    s = sub.add_parser("density", parents=[common], help="histogram check of the complex eigenvalue density")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--bins-x", type=_positive, default=16)
    s.add_argument("--bins-y", type=_positive, default=8)
    s.add_argument("--band", type=float, default=0.05, help="exclude 0 < Im z < BAND")
    s.set_defaults(func=cmd_density)
    return p


def render(rep: Report, fmt: str, command: str) -> str:
    if fmt == "json":
        return json.dumps({"command": command, **rep.meta, "rows": rep.rows}, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        if not rep.rows:
            return ""
        buf = io.StringIO()
        fields = list(dict.fromkeys(k for row in rep.rows for k in row))
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for row in rep.rows:
            w.writerow({k: json.dumps(v) if isinstance(v, list) else v for k, v in row.items()})
        return buf.getvalue()
    return "\n".join(rep.text) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        rep = args.func(args)
    except (UsageError, InvalidPartition, ValueError) as exc:
        print(f"schur-ginibre: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = render(rep, args.output, args.command)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return rep.code


if __name__ == "__main__":
    sys.exit(main())
