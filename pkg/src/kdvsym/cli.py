"""Command-line interface for running experiments and paper presets.

Exit codes: 0 success, 1 numerical abort (tangling or blow-up),
2 configuration error.  Everything is deterministic; --seed is rejected.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError, KdvError
from .harness import load_config, preset_names, run_experiment, run_preset


def _reject_seed(argv):
    for arg in argv:
        if arg == "--seed" or arg.startswith("--seed="):
            print("error: --seed is not supported; every run is deterministic", file=sys.stderr)
            return True
    return False


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kdvsym", description="KdV invariant finite-difference benchmark")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="directory for CSV output")
    p_run.add_argument("--report-every", type=int, default=None)

    p_preset = sub.add_parser("preset", help="run a named paper experiment")
    p_preset.add_argument("name")
    p_preset.add_argument("--out", default=None)
    p_preset.add_argument("--report-every", type=int, default=0)

    sub.add_parser("list", help="list available presets")

    p_sweep = sub.add_parser("sweep", help="run a config over a parameter list")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--param", required=True, help="e.g. N=16,24,32,48")
    p_sweep.add_argument("--out", default=None)
    return parser


def _cmd_run(args) -> int:
    spec = load_config(args.config)
    if args.report_every is not None:
        spec = spec.with_updates(report_every=args.report_every)
    report = run_experiment(spec)
    if args.out:
        from pathlib import Path

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        report.to_csv(out / f"{spec.name}.csv")
    last = report.rows[-1]
    print(f"{spec.name}: t={last[1]} rmse={last[2]} linf={last[3]} momentum={last[4]}")
    if report.aborted:
        print(f"aborted at step {report.aborted_step}: {report.aborted}", file=sys.stderr)
        return 1
    return 0


def _cmd_preset(args) -> int:
    result = run_preset(args.name, out_dir=args.out, report_every=args.report_every)
    for key in sorted(result.summary):
        kind, value = result.summary[key]
        print(f"{key}: {kind}={value}")
    if result.expect_abort:
        print("run aborted as documented (expected failure preset)" if result.ok else "run unexpectedly completed")
        return 0 if result.ok else 1
    return 0 if result.ok else 1


def _cmd_sweep(args) -> int:
    key, _, raw_values = args.param.partition("=")
    if not raw_values:
        raise ConfigError("--param must look like N=16,24,32,48")
    base = load_config(args.config)
    results = []
    for raw in raw_values.split(","):
        if key in ("N", "n"):
            spec = base.with_updates(n=int(raw), name=f"{base.name}_n{raw}")
        elif key == "dt":
            spec = base.with_updates(dt=float(raw), name=f"{base.name}_dt{raw}")
        else:
            raise ConfigError(f"unknown sweep parameter {key!r} (use N or dt)")
        report = run_experiment(spec)
        if report.aborted:
            print(f"{spec.name}: aborted at step {report.aborted_step}", file=sys.stderr)
            return 1
        last = report.rows[-1]
        results.append((spec, last))
        print(f"{spec.name}: rmse={last[2]} linf={last[3]}")
        if args.out:
            from pathlib import Path

            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            report.to_csv(out / f"{spec.name}.csv")
    if key in ("N", "n") and len(results) >= 2 and all(r[1][3] == r[1][3] for r in results):
        from .diagnostics import convergence_order

        order = convergence_order([(s.n, row[3]) for s, row in results])
        print(f"fitted order (linf): {order:.3f}")
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if _reject_seed(argv):
        return 2
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "list":
            for name in preset_names():
                print(name)
            return 0
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "preset":
            return _cmd_preset(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except KdvError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
