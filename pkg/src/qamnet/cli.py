"""Command-line entry point.

Usage::

    qamnet <mode> --config FILE [--set KEY=VALUE ...] [--jobs N] [--seed S] [--out DIR]
    qamnet reproduce table1|fig3 [--nmr] [--plot] --out DIR

Exit codes: 0 success, 2 invalid configuration, 3 system too large,
4 a reproduce command failed its own comparison.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .config import MODES, ExperimentConfig, default_output_dir, expand_sweep, run_config, set_dotted
from .errors import CapacityError, ValidationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_REPRODUCE_FAILED = 4


def _parse_set(items) -> list:
    out = []
    for item in items or []:
        if "=" not in item:
            raise ValidationError(f"expected KEY=VALUE, got {item!r}", field="--set")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        out.append((key, value))
    return out


def load_raw_config(args) -> dict:
    raw = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ValidationError(f"no such file {args.config}", field="--config") from None
        except json.JSONDecodeError as e:
            raise ValidationError(f"invalid JSON: {e}", field="--config") from None
        if not isinstance(raw, dict):
            raise ValidationError("config file must hold a JSON object", field="--config")
    raw["mode"] = args.mode
    for key, value in _parse_set(args.set):
        set_dotted(raw, key, value)
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.out is not None:
        raw["output_dir"] = args.out
    raw.setdefault("output_dir", default_output_dir())
    return raw


def _run_one(raw: dict) -> dict:
    return run_config(ExperimentConfig.from_dict(raw)).to_dict()


def _summary(record: dict) -> str:
    res = record["results"]
    mode = record["mode"]
    lines = [f"mode: {mode}   wall time: {record['wall_time']:.3f} s"]
    rows = []
    if res.get("pattern_probabilities"):
        rows = [(str(r["pattern"]), f"{r['probability']:.4f}") for r in res["pattern_probabilities"]]
    elif "recognized" in res:
        rows = [(str(r["pattern"]), f"{r['probability']:.4f}") for r in res["recognized"]]
    elif "ranking" in res:
        rows = [(str(r["pattern"]), f"{r['probability']:.4f}") for r in res["ranking"]]
    elif mode == "classical":
        rows = [("kind", res["kind"]), ("period", str(res["period"])),
                ("final", str(res["trajectory"][-1]))]
    elif mode == "bounds":
        rows = [(k, str(res[k])) for k in ("coupling_p1", "projector_a", "gamma_upper")]
        if "brute_force" in res:
            rows.append(("witness", str(res["brute_force"]["witness"])))
    elif mode == "gap":
        rows = [("min_gap", str(res["min_gap"])), ("s_at_min", str(res["s_at_min"]))]
    if "fidelity_vs_expected" in res and res["fidelity_vs_expected"] is not None:
        rows.append(("overlap", f"{res['fidelity_vs_expected']:.4f}"))
    width = max([len(a) for a, _ in rows] + [8])
    lines += [f"  {a:<{width}}  {b}" for a, b in rows]
    return "\n".join(lines)


def cmd_mode(args) -> int:
    raw = load_raw_config(args)
    runs = expand_sweep(raw)
    configs = [ExperimentConfig.from_dict(r) for r in runs]  # validate everything up front
    if args.print_config:
        resolved = [c.to_dict() for c in configs]
        print(json.dumps(resolved[0] if len(resolved) == 1 else resolved, indent=2, sort_keys=True))
        return EXIT_OK
    if args.jobs > 1 and len(runs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_run_one, runs))
    else:
        records = [_run_one(r) for r in runs]
    for rec in records:
        print(_summary(rec))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import reproduce_fig3, reproduce_table1

    out = args.out or default_output_dir()
    if args.suite == "table1":
        record, passed = reproduce_table1(args.nmr, out, args.plot, args.normalization,
                                          args.steps, args.jobs)
        print(f"table1 ({record.config['units']}, normalization "
              f"{record.results['operator_normalization']}):")
        for r in record.results["rows"]:
            ov = "" if r["overlap"] is None else f"  overlap {r['overlap']:.4f}"
            print(f"  input {str(r['input']):<9} w={r['w']:+d}  expected "
                  f"{' + '.join(map(str, r['expected'])):<20} got "
                  f"{' '.join(f'{p:.4f}' for p in r['expected_probabilities'])}{ov}  "
                  f"{'pass' if r['pass'] else 'FAIL'}")
    else:
        record, passed = reproduce_fig3(out, args.plot)
        res = record.results
        print("fig3 pattern probabilities (exact / first order / golden):")
        for p, a, b, g in zip(res["patterns"], res["exact"], res["first_order"], res["golden_exact"]):
            print(f"  {str(p):<22} {a:.4f}  {b:.4f}  {g:.3f}")
        print(f"  leakage {res['leakage']:.2e}   {'pass' if passed else 'FAIL'}")
    print(f"wrote {Path(out).resolve()}")
    return EXIT_OK if passed else EXIT_REPRODUCE_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qamnet", description="Adiabatic quantum pattern recognition")
    p.add_argument("--version", action="version", version=f"qamnet {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for mode in MODES:
        m = sub.add_parser(mode, help=f"run a {mode} experiment")
        m.set_defaults(mode=mode, func=cmd_mode)
        m.add_argument("--config", help="JSON experiment configuration")
        m.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config field (dotted keys, JSON values)")
        m.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
        m.add_argument("--seed", type=int, default=None)
        m.add_argument("--out", default=None, help="output directory (default $QAMNET_OUT)")
        m.add_argument("--print-config", action="store_true",
                       help="print the fully resolved configuration and exit")
    r = sub.add_parser("reproduce", help="self-grading reproduction suites")
    r.set_defaults(func=cmd_reproduce)
    r.add_argument("suite", choices=("table1", "fig3"))
    r.add_argument("--nmr", action="store_true", help="table1 in NMR units")
    r.add_argument("--normalization", choices=("spin_half", "pauli"), default="spin_half")
    r.add_argument("--steps", type=int, default=None, help="override the number of intervals L")
    r.add_argument("--plot", action="store_true", help="also render PNG figures")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--out", default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as e:
        print(f"capacity error: {e}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
