"""Command-line front end: generate instances, verify the bounds, compare strategies.

Subcommands:

    generate  write a cost-instance file (text or .json)
    verify    run the exact bound/identity checks on one instance or a sweep
              of randomized configurations; exit 0 iff every check holds
    compare   run search strategies side by side on one instance

Reports are line-delimited JSON (or CSV), one record per configuration, each
carrying the full configuration needed to reproduce it.  Rerunning the same
command with the same seed reproduces the records byte for byte; only the
meta record's timestamp differs.

Exit codes: 0 all checks pass, 1 a claim check failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import platform
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .algorithm import (
    ATOL_BOUND,
    ATOL_IDENTITY,
    RunConfig,
    chain_decomposition,
    exact_analysis,
    run_repeat_until_success,
    sequential_vs_joint_check,
)
from .baselines import (
    grover_simulate,
    amplitude_amplification_success,
    hill_climb,
    optimal_iterations,
    random_search,
)
from .costfn import CostInstance, count_below, generate, load_instance, min_cost, save_instance
from .encoding import AmplitudeEncoder, JunkPolicy
from .errors import PostoptError
from .statevec import NORM_ATOL

SWEEP_ENCODERS = ("identity", "oracle", "cospow:0.5", "cospow:1", "cospow:2", "cospow:8", "linear")
SWEEP_KINDS = ("uniform_random", "number_partition", "hamming_structured")
SWEEP_QUANTILES = (0.1, 0.25, 0.5, 0.9)
TABLE_N_MAX = 20  # explicit cost tables stop being practical past 2**20 entries


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="postopt",
        description="Simulate the post-selection optimization procedure and "
        "verify that its success probability never beats random search (M/N).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a cost instance file")
    gen.add_argument("--kind", required=True,
                     choices=["explicit", "uniform_random", "number_partition", "hamming_structured"])
    gen.add_argument("--n", type=int, help="data qubit count (uniform_random, hamming_structured)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--costs", help="comma-separated cost table (explicit)")
    gen.add_argument("--weights", help="comma-separated positive weights (number_partition)")
    gen.add_argument("--low", type=float, default=0.0, help="uniform_random lower bound")
    gen.add_argument("--high", type=float, default=1.0, help="uniform_random upper bound")
    gen.add_argument("--lipschitz", type=float, default=1.0,
                     help="single-bit-flip cost bound (hamming_structured)")
    gen.add_argument("--centers", type=int, default=3,
                     help="number of basins (hamming_structured)")
    gen.add_argument("-o", "--out", required=True, help="output path (.json for structured form)")

    ver = sub.add_parser("verify", help="check the M/N and 1/N bounds and the measurement identities")
    ver.add_argument("instance", nargs="?", help="instance file to verify")
    ver.add_argument("--sweep", type=int, metavar="COUNT",
                     help="verify COUNT randomized configurations instead of a file")
    ver.add_argument("--n", type=int, help="cap on swept data qubit count (default 12)", default=12)
    ver.add_argument("--encoder", default="identity",
                     help="identity | oracle:<tau> | cospow:<b> | linear")
    ver.add_argument("--junk", default="concentrated", choices=["concentrated", "spread"])
    ver.add_argument("--n-anc", type=int, default=1, help="ancilla qubit count")
    ver.add_argument("--c-tol", type=float, help="success threshold (strict); required with a file")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("-o", "--out", help="report path")
    ver.add_argument("--format", default="jsonl", choices=["jsonl", "csv"])

    cmp_ = sub.add_parser("compare", help="run strategies side by side on one instance")
    cmp_.add_argument("instance", help="instance file")
    cmp_.add_argument("--c-tol", type=float, required=True)
    cmp_.add_argument("--strategy", required=True,
                      help="comma list of random | hillclimb | grover:<t|auto> | postselect")
    cmp_.add_argument("--encoder", default="cospow:1", help="encoder for the postselect strategy")
    cmp_.add_argument("--junk", default="concentrated", choices=["concentrated", "spread"])
    cmp_.add_argument("--n-anc", type=int, default=1)
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--repeats", type=int, default=32, help="independent runs per strategy")
    cmp_.add_argument("--budget", type=int, default=10_000,
                      help="per-run budget: draws (random), preparations (postselect), "
                           "cost evaluations, approximately (hillclimb)")
    cmp_.add_argument("-o", "--out", help="report path")
    cmp_.add_argument("--format", default="jsonl", choices=["jsonl", "csv"])

    return parser


# ---------------------------------------------------------------------------
# report plumbing

def _meta(command: str, seed: int) -> dict:
    return {
        "record": "meta",
        "command": command,
        "seed": seed,
        "versions": {
            "postopt": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _render_report(meta: dict, records: list[dict], fmt: str) -> str:
    if fmt == "jsonl":
        lines = [json.dumps(meta, sort_keys=True)]
        lines += [json.dumps(r, sort_keys=True) for r in records]
        return "\n".join(lines) + "\n"
    # csv: meta goes into a leading comment line, records into sorted columns
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    fields = sorted({key for r in records for key in r})
    writer = csv.DictWriter(buf, fieldnames=fields)
    writer.writeheader()
    for r in records:
        writer.writerow({k: ("" if v is None else v) for k, v in r.items()})
    return buf.getvalue()


def _write_report(out: str | None, meta: dict, records: list[dict], fmt: str) -> None:
    if out:
        Path(out).write_text(_render_report(meta, records, fmt))


def _fmt(x) -> str:
    if x is None:
        return "undef"
    return f"{x:.6g}"


# ---------------------------------------------------------------------------
# verify

def check_configuration(instance: CostInstance, config: RunConfig, key: str,
                        instance_desc: dict) -> dict:
    """Run every exact check for one configuration; returns a flat record."""
    ana = exact_analysis(instance, config)
    chain = chain_decomposition(instance, config)
    tv = sequential_vs_joint_check(instance, config)
    max_product = float(ana.per_state_products.max())

    checks = {
        "check_joint_bound": bool(ana.p_joint <= ana.bound + ATOL_BOUND),
        "check_per_state_bound": bool(max_product <= 1.0 / ana.n + ATOL_BOUND),
        "check_product_identity": bool(
            ana.p_cond is None
            or abs(ana.p_joint - ana.p_first * ana.p_cond) <= ATOL_IDENTITY
        ),
        "check_chain_identity": bool(
            all(
                abs(route - chain.direct) <= ATOL_IDENTITY
                for route in (chain.via_ancilla, chain.via_cost)
                if route is not None
            )
        ),
        "check_sequential_joint": bool(tv <= NORM_ATOL),
    }
    record = {
        "record": "verify",
        "key": key,
        **instance_desc,
        "n_anc": config.n_anc,
        "encoder": config.encoder.spec(),
        "junk": config.junk.value,
        "c_tol": float(config.c_tol),
        "n": ana.n,
        "m": ana.m,
        "p_first": float(ana.p_first),
        "p_cond": None if ana.p_cond is None else float(ana.p_cond),
        "p_joint": float(ana.p_joint),
        "bound": float(ana.bound),
        "max_per_state_product": max_product,
        "per_state_bound": 1.0 / ana.n,
        "chain_direct": float(chain.direct),
        "chain_via_ancilla": None if chain.via_ancilla is None else float(chain.via_ancilla),
        "chain_via_cost": None if chain.via_cost is None else float(chain.via_cost),
        "p_b_given_a": None if chain.p_b_given_a is None else float(chain.p_b_given_a),
        "tv_distance": float(tv),
        **checks,
        "ok": all(checks.values()),
    }
    return record


def sweep_configurations(count: int, seed: int, n_max: int) -> list[tuple[str, CostInstance, RunConfig, dict]]:
    """Deterministically draw `count` (instance, config) pairs, sorted by key."""
    rng = np.random.default_rng(seed)
    drawn = []
    for i in range(count):
        n_data = int(rng.integers(1, n_max + 1))
        kind = SWEEP_KINDS[rng.integers(len(SWEEP_KINDS))]
        inst_seed = int(rng.integers(2**31))
        if kind == "uniform_random":
            params = {"n_data": n_data}
        elif kind == "number_partition":
            params = {"weights": np.round(rng.uniform(0.5, 10.0, size=n_data), 3).tolist()}
        else:
            params = {
                "n_data": n_data,
                "lipschitz": round(float(rng.uniform(0.5, 2.0)), 3),
                "n_centers": int(rng.integers(1, 4)),
            }
        instance = generate(kind, params, inst_seed)

        if rng.random() < 0.1:
            c_tol = float(instance.costs.min()) - 1.0  # M = 0 corner
        else:
            c_tol = float(np.quantile(instance.costs, SWEEP_QUANTILES[rng.integers(len(SWEEP_QUANTILES))]))
        spec = SWEEP_ENCODERS[rng.integers(len(SWEEP_ENCODERS))]
        encoder = AmplitudeEncoder.oracle_threshold(c_tol) if spec == "oracle" else AmplitudeEncoder.parse(spec)
        junk = JunkPolicy.SPREAD if rng.random() < 0.5 else JunkPolicy.CONCENTRATED
        n_anc = int(rng.integers(1, 4))

        config = RunConfig(c_tol=c_tol, encoder=encoder, junk=junk, n_anc=n_anc)
        key = (f"{kind}/n{n_data:02d}/s{inst_seed}/{encoder.spec()}/"
               f"{junk.value}/anc{n_anc}/ctol{c_tol:.6g}")
        desc = {"instance_kind": kind, "instance_seed": inst_seed,
                "instance_params": json.dumps(params, sort_keys=True), "n_data": n_data}
        drawn.append((key, instance, config, desc))
    drawn.sort(key=lambda item: item[0])
    return drawn


_VERIFY_COLUMNS = ("key", "n", "m", "p_first", "p_cond", "p_joint", "bound",
                   "max_per_state_product", "tv_distance", "ok")


def _print_verify_table(records: list[dict]) -> None:
    header = f"{'configuration':<58} {'n':>5} {'m':>5} {'p_first':>10} {'p_cond':>10} " \
             f"{'p_joint':>10} {'M/N':>10} {'max p_k':>10} {'TV':>9} ok"
    print(header)
    print("-" * len(header))
    for r in records:
        print(f"{r['key']:<58} {r['n']:>5} {r['m']:>5} {_fmt(r['p_first']):>10} "
              f"{_fmt(r['p_cond']):>10} {_fmt(r['p_joint']):>10} {_fmt(r['bound']):>10} "
              f"{_fmt(r['max_per_state_product']):>10} {_fmt(r['tv_distance']):>9} "
              f"{'yes' if r['ok'] else 'NO'}")


def cmd_verify(args: argparse.Namespace) -> int:
    if (args.instance is None) == (args.sweep is None):
        print("verify: give exactly one of an instance file or --sweep COUNT", file=sys.stderr)
        return 2

    if args.sweep is not None:
        if args.sweep < 1:
            print("verify: --sweep must be >= 1", file=sys.stderr)
            return 2
        swept = sweep_configurations(args.sweep, args.seed, args.n)
        records = [check_configuration(inst, cfg, key, desc) for key, inst, cfg, desc in swept]
    else:
        if args.c_tol is None:
            print("verify: --c-tol is required when verifying an instance file", file=sys.stderr)
            return 2
        instance = load_instance(args.instance)
        config = RunConfig(
            c_tol=args.c_tol,
            encoder=AmplitudeEncoder.parse(args.encoder),
            junk=JunkPolicy(args.junk),
            n_anc=args.n_anc,
        )
        key = f"file:{args.instance}/{config.encoder.spec()}/{args.junk}/anc{args.n_anc}/ctol{args.c_tol:.6g}"
        desc = {"instance_kind": "file", "instance_seed": None,
                "instance_params": json.dumps({"path": args.instance}), "n_data": instance.n_data}
        records = [check_configuration(instance, config, key, desc)]

    meta = _meta("verify", args.seed)
    _write_report(args.out, meta, records, args.format)
    _print_verify_table(records)

    failures = [r for r in records if not r["ok"]]
    if failures:
        print(f"\n{len(failures)} configuration(s) FAILED a claim check:", file=sys.stderr)
        for r in failures:
            bad = [name for name in r if name.startswith("check_") and not r[name]]
            print(f"  {r['key']}: {', '.join(bad)}", file=sys.stderr)
        return 1
    print(f"\nall {len(records)} configuration(s) pass: p_joint <= M/N, "
          f"per-state products <= 1/N, identities hold")
    return 0


# ---------------------------------------------------------------------------
# compare

def _compare_one(strategy: str, instance: CostInstance, args: argparse.Namespace,
                 seeds: list[int]) -> dict:
    record: dict = {
        "record": "compare",
        "strategy": strategy,
        "c_tol": float(args.c_tol),
        "repeats": len(seeds),
        "budget": args.budget,
        "seeds": json.dumps(seeds),
    }
    m = count_below(instance, args.c_tol)
    n = instance.size
    record["n"], record["m"] = n, m

    if strategy in ("random", "hillclimb"):
        if strategy == "random":
            results = [random_search(instance, args.c_tol, s, max_trials=args.budget) for s in seeds]
        else:
            restarts = max(1, args.budget // (instance.n_data + 1))
            results = [hill_climb(instance, args.c_tol, s, max_restarts=restarts) for s in seeds]
        hits = [r for r in results if r.hit]
        record["hit_rate"] = len(hits) / len(results)
        record["mean_trials_used"] = float(np.mean([r.trials_used for r in results]))
        record["mean_trials_to_hit"] = float(np.mean([r.trials_used for r in hits])) if hits else None
        record["best_cost"] = float(min(r.best_cost for r in results))
        return record

    if strategy.startswith("grover"):
        _, _, arg = strategy.partition(":")
        t = optimal_iterations(instance.n_data, m) if arg in ("", "auto") else int(arg)
        record["iterations"] = t
        record["success_probability"] = grover_simulate(instance, args.c_tol, t)
        record["closed_form"] = amplitude_amplification_success(instance.n_data, m, t)
        record["expected_repetitions_per_hit"] = (
            1.0 / record["success_probability"] if record["success_probability"] > 0 else None
        )
        return record

    if strategy == "postselect":
        config = RunConfig(
            c_tol=args.c_tol,
            encoder=AmplitudeEncoder.parse(args.encoder),
            junk=JunkPolicy(args.junk),
            n_anc=args.n_anc,
            max_preparations=args.budget,
        )
        ana = exact_analysis(instance, config)
        record["encoder"] = config.encoder.spec()
        record["p_joint_exact"] = float(ana.p_joint)
        record["bound"] = float(ana.bound)
        record["expected_preparations_per_hit"] = (
            1.0 / ana.p_joint if ana.p_joint > 0 else None
        )
        stats = [
            run_repeat_until_success(instance, RunConfig(
                c_tol=args.c_tol, encoder=config.encoder, junk=config.junk,
                n_anc=config.n_anc, max_preparations=args.budget, seed=s,
            ))
            for s in seeds
        ]
        first_hits = [s.first_hit_preparation for s in stats if s.first_hit_preparation]
        record["hit_rate"] = sum(1 for s in stats if s.low_cost_hits) / len(stats)
        record["mean_trials_to_hit"] = float(np.mean(first_hits)) if first_hits else None
        record["mean_p_joint_estimate"] = float(np.mean([s.p_joint_estimate for s in stats]))
        return record

    raise PostoptError(f"unknown strategy {strategy!r}")


def cmd_compare(args: argparse.Namespace) -> int:
    strategies = [s.strip() for s in args.strategy.split(",") if s.strip()]
    if not strategies:
        print("compare: empty strategy list", file=sys.stderr)
        return 2
    if args.repeats < 1 or args.budget < 1:
        print("compare: --repeats and --budget must be >= 1", file=sys.stderr)
        return 2
    instance = load_instance(args.instance)
    if count_below(instance, args.c_tol) < 1:
        print(f"compare: no state has cost below c_tol={args.c_tol}; nothing to find",
              file=sys.stderr)
        return 2

    master = np.random.default_rng(args.seed)
    records = []
    for strategy in strategies:
        seeds = [int(s) for s in master.integers(2**63, size=args.repeats)]
        records.append(_compare_one(strategy, instance, args, seeds))

    meta = _meta("compare", args.seed)
    _write_report(args.out, meta, records, args.format)

    print(f"instance: N={instance.size}, M={records[0]['m']}, c_tol={args.c_tol:g} "
          f"(random-search mean trials N/M = {instance.size / records[0]['m']:.4g})")
    header = f"{'strategy':<16} {'hit rate':>9} {'mean trials-to-hit':>19} {'notes'}"
    print(header)
    print("-" * 72)
    for r in records:
        if r["strategy"].startswith("grover"):
            note = (f"success prob {r['success_probability']:.6g} at t={r['iterations']}, "
                    f"expected reps/hit {_fmt(r['expected_repetitions_per_hit'])}")
            print(f"{r['strategy']:<16} {'':>9} {'':>19} {note}")
        elif r["strategy"] == "postselect":
            note = (f"exact p_joint {r['p_joint_exact']:.6g} <= M/N {r['bound']:.6g}, "
                    f"expected preps/hit {_fmt(r['expected_preparations_per_hit'])}")
            print(f"{r['strategy']:<16} {r['hit_rate']:>9.3f} "
                  f"{_fmt(r['mean_trials_to_hit']):>19} {note}")
        else:
            print(f"{r['strategy']:<16} {r['hit_rate']:>9.3f} "
                  f"{_fmt(r['mean_trials_to_hit']):>19} mean trials used {r['mean_trials_used']:.4g}")
    return 0


# ---------------------------------------------------------------------------
# generate

def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise PostoptError(f"{flag}: {exc}") from exc


def cmd_generate(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind == "explicit":
        if not args.costs:
            print("generate: --costs is required for kind=explicit", file=sys.stderr)
            return 2
        params = {"costs": _parse_floats(args.costs, "--costs")}
    elif kind == "uniform_random":
        if args.n is None:
            print("generate: --n is required for kind=uniform_random", file=sys.stderr)
            return 2
        params = {"n_data": args.n, "low": args.low, "high": args.high}
    elif kind == "number_partition":
        if not args.weights:
            print("generate: --weights is required for kind=number_partition", file=sys.stderr)
            return 2
        params = {"weights": _parse_floats(args.weights, "--weights")}
    else:
        if args.n is None:
            print("generate: --n is required for kind=hamming_structured", file=sys.stderr)
            return 2
        params = {"n_data": args.n, "lipschitz": args.lipschitz, "n_centers": args.centers}

    instance = generate(kind, params, args.seed)
    if instance.n_data > TABLE_N_MAX:
        print(f"generate: n_data={instance.n_data} exceeds the table cap of {TABLE_N_MAX}",
              file=sys.stderr)
        return 2
    save_instance(instance, args.out)
    k_min, c_min = min_cost(instance)
    print(f"wrote {args.out}: kind={kind} n_data={instance.n_data} N={instance.size} "
          f"min_cost={c_min:g} at index {k_min} max_cost={instance.c_max:g} seed={args.seed}")
    return 0


# ---------------------------------------------------------------------------

def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_compare(args)
    except (PostoptError, OSError) as exc:
        print(f"postopt {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
