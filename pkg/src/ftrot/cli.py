"""Command-line driver: seeded batch runs emitting CSV or JSON.

Exit codes: 0 success, 1 validation failure (codes validate), 2 usage
error, 3 infeasible or diverged computation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import time

from . import analytics, bench, codes, mcsim, schemes

ANALYZE_COLUMNS = (
    "theta",
    "theta_L",
    "eps_first_order",
    "eps_total",
    "eps_readout",
    "p_s",
    "p_s_in",
    "p_s_coh",
    "coherent_std",
)

_ANGLE_LITERAL = re.compile(r"2pi/2\^(\d+)")


def parse_angle(text: str) -> float:
    """Float radians, or the exact dyadic literal '2pi/2^k'."""
    text = text.strip()
    m = _ANGLE_LITERAL.fullmatch(text)
    if m:
        return math.tau / (1 << int(m.group(1)))
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad angle {text!r}: expected radians or 2pi/2^k"
        ) from None


def parse_theta_range(text: str) -> list[float]:
    """'start:stop:steps' sweep, or a single angle."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"bad range {text!r}: want start:stop:steps")
        try:
            start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
        if steps < 1:
            raise argparse.ArgumentTypeError("steps must be >= 1")
        if steps == 1:
            return [start]
        return [start + i * (stop - start) / (steps - 1) for i in range(steps)]
    return [parse_angle(text)]


def _fresh_seed() -> int:
    return int.from_bytes(os.urandom(8), "big") >> 1


def _emit(payload, fmt: str, out: str | None, columns=None) -> None:
    """Serialize deterministically; rows need a column tuple for CSV."""
    if fmt == "json":
        text = json.dumps(_json_safe(payload), indent=2) + "\n"
    else:
        if columns is None:
            raise ValueError("CSV output needs tabular data")
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in payload:
            writer.writerow(row)
        text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_safe(obj):
    # json refuses NaN only with allow_nan=False; emit null instead so
    # downstream parsers do not need a dialect flag
    if isinstance(obj, float):
        return None if math.isnan(obj) else obj
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def cmd_codes(args) -> int:
    if args.action == "list":
        rows = [
            {
                "name": name,
                "parametrized": codes.is_parametrized(name),
                "description": codes.CODE_DESCRIPTIONS[name],
            }
            for name in codes.list_codes()
        ]
        _emit(rows, args.format, args.out, columns=("name", "parametrized", "description"))
        return 0
    code = codes.get_code(args.code, args.d)
    report = codes.validate(code)
    payload = {
        "code": code.name,
        "n": code.n,
        "k": code.k,
        "d": code.d,
        "ok": report.ok,
        "failures": list(report.failures),
        "distance": report.distance,
    }
    _emit(payload, "json", args.out)
    return 0 if report.ok else 1


def cmd_analyze(args) -> int:
    code = codes.get_code(args.code, args.d)
    mult = code.error_multiplicities
    rows = []
    for theta in args.theta:
        cfg = analytics.RotationConfig(
            theta=theta, d=code.d, p_in=args.p_in, r=args.r, sigma_theta=args.sigma
        )
        theta_l = analytics.logical_angle(theta, code.d)
        try:
            eps_total = analytics.incoherent_error_total(
                cfg, analytics.binomial_multiplicity(mult.first_order)
            )
        except analytics.SubstrateLimitedError:
            eps_total = math.nan
        if theta > 0.0 and args.sigma > 0.0:
            coh = analytics.coherent_angle_std(code.d, theta_l, args.sigma / theta)
        else:
            coh = 0.0
        sr = analytics.success_rate(cfg, code.n, len(code.stabilizers))
        rows.append(
            {
                "theta": theta,
                "theta_L": theta_l,
                "eps_first_order": analytics.incoherent_error_first_order(
                    cfg, mult.first_order
                ),
                "eps_total": eps_total,
                "eps_readout": analytics.readout_error(cfg, mult.readout_combos),
                "p_s": sr.p_s,
                "p_s_in": sr.p_s_in,
                "p_s_coh": sr.p_s_coh,
                "coherent_std": coh,
            }
        )
    _emit(rows, args.format, args.out, columns=ANALYZE_COLUMNS)
    return 0


def cmd_simulate(args) -> int:
    if args.trials < 1:
        raise ValueError("--trials must be >= 1")
    code = codes.get_code(args.code, args.d)
    noise = mcsim.NoiseModel(p_in=args.p_in, r=args.r, readout_flip=args.readout_flip)
    seed = args.seed if args.seed is not None else _fresh_seed()
    theta_l = (
        args.theta_l_target
        if args.theta_l_target is not None
        else analytics.logical_angle(args.theta, code.d)
    )
    t0 = time.monotonic()
    stats = mcsim.estimate(
        code,
        args.theta,
        theta_l,
        noise,
        args.trials,
        seed,
        threads=args.threads,
        inject_z=args.inject_z,
    )
    print(
        f"simulate: {args.trials} trials in {time.monotonic() - t0:.1f}s "
        f"(acceptance {stats.acceptance_rate:.4f})",
        file=sys.stderr,
    )
    _emit(stats.to_dict(), "json", args.out)
    return 0


def cmd_walk(args) -> int:
    seed = args.seed if args.seed is not None else _fresh_seed()
    stats = schemes.simulate_walk(args.m, args.walks, seed)
    _emit(stats.to_dict(), "json", args.out)
    return 0


def cmd_scaffold(args) -> int:
    noise = mcsim.NoiseModel(p_in=args.p_in, r=args.r)
    bounds = {
        "d_values": list(args.d_values),
        "k_max": args.k_max,
        "m_max": args.m_max,
    }
    try:
        plan = schemes.scaffold_optimize(
            args.theta_l,
            args.code,
            noise,
            d_values=args.d_values,
            k_max=args.k_max,
            m_max=args.m_max,
            error_ceiling=args.error_ceiling,
        )
    except schemes.InfeasibleError as exc:
        payload = {
            "infeasible": True,
            "message": str(exc),
            "noise": {"p_in": args.p_in, "r": args.r},
            "bounds": bounds,
            "best_plan": exc.best_plan.to_dict(),
        }
        _emit(payload, "json", args.out)
        return 3
    payload = {
        "infeasible": False,
        "noise": {"p_in": args.p_in, "r": args.r},
        "bounds": bounds,
        "plan": plan.to_dict(),
    }
    _emit(payload, "json", args.out)
    return 0


def cmd_bench(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    distill = None
    if args.distill_costs is not None:
        if args.distill_costs == "bundled":
            distill = bench.DistillCostTable.bundled()
        else:
            distill = bench.DistillCostTable.load(args.distill_costs)
    config = bench.BenchConfig(
        theta_l_target=args.theta_l,
        noise=mcsim.NoiseModel(p_in=args.p_in, r=args.r),
        code_family=args.code,
        distill=distill,
        include_clifford=not args.no_clifford,
        d_values=args.d_values,
        k_max=args.k_max,
        m_max=args.m_max,
    )
    rows = bench.pareto_report(methods, config)
    _emit(rows, args.format, args.out, columns=bench.REPORT_COLUMNS)
    return 0


def _csv_ints(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty integer list")
    return values


def _add_output_flags(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument(
        "--format", choices=("csv", "json"), default=default_format,
        help=f"output format (default: {default_format})",
    )


def _add_noise_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p-in", type=float, default=1e-3, help="depolarizing rate per qubit per cycle")
    p.add_argument("--r", type=int, default=2, help="detection cycles")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftrot",
        description="Post-selected rotation-state preparation: analytics, "
        "Monte Carlo, composition schemes, and resource benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codes", help="list registered codes or validate one")
    p.add_argument("action", choices=("list", "validate"))
    p.add_argument("code", nargs="?", help="code name (validate)")
    p.add_argument("--d", type=int, default=None, help="distance for parametrized families")
    _add_output_flags(p, "json")
    p.set_defaults(func=cmd_codes)

    p = sub.add_parser("analyze", help="closed-form error and success-rate sweep")
    p.add_argument("--code", default="surface")
    p.add_argument("--d", type=int, default=3)
    p.add_argument(
        "--theta", type=parse_theta_range, required=True,
        help="angle sweep start:stop:steps, a float, or 2pi/2^k",
    )
    _add_noise_flags(p)
    p.add_argument("--sigma", type=float, default=0.0, help="per-qubit coherent angle std (radians)")
    _add_output_flags(p, "csv")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="Monte Carlo preparation trials")
    p.add_argument("--code", default="surface")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--theta", type=parse_angle, required=True)
    _add_noise_flags(p)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=None, help="RNG seed (generated and recorded if omitted)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads; does not affect results")
    p.add_argument("--theta-l-target", type=parse_angle, default=None,
                   help="reference angle for infidelity (default: the accepted logical angle)")
    p.add_argument("--readout-flip", type=float, default=None,
                   help="override per-stabilizer readout flip probability (default 2*p_in/3)")
    p.add_argument("--inject-z", type=int, default=None, metavar="QUBIT",
                   help="deterministically inject one Z on this qubit each trial")
    _add_output_flags(p, "json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("walk", help="teleportation random-walk Monte Carlo")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--walks", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    _add_output_flags(p, "json")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("scaffold", help="optimize a (d, k, m) composition plan")
    p.add_argument("--theta-l", type=parse_angle, required=True, help="target logical angle")
    p.add_argument("--code", default="surface")
    _add_noise_flags(p)
    p.add_argument("--d-values", type=_csv_ints, default=(3, 5, 7))
    p.add_argument("--k-max", type=int, default=9)
    p.add_argument("--m-max", type=int, default=64)
    p.add_argument("--error-ceiling", type=float, default=None)
    _add_output_flags(p, "json")
    p.set_defaults(func=cmd_scaffold)

    p = sub.add_parser("bench", help="cost-vs-error comparison table")
    p.add_argument("--theta-l", type=parse_angle, required=True)
    p.add_argument("--methods", default="ours", help="comma list from ours,rs,coh")
    p.add_argument("--code", default="surface")
    _add_noise_flags(p)
    p.add_argument("--distill-costs", default=None, metavar="PATH",
                   help="distillation table JSON, or 'bundled'")
    p.add_argument("--no-clifford", action="store_true",
                   help="count T-state costs only in the synthesis baseline")
    p.add_argument("--d-values", type=_csv_ints, default=(3, 5, 7))
    p.add_argument("--k-max", type=int, default=9)
    p.add_argument("--m-max", type=int, default=64)
    _add_output_flags(p, "csv")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "codes" and args.action == "validate" and args.code is None:
        parser.error("codes validate needs a code name")
    try:
        return args.func(args)
    except schemes.InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, LookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
