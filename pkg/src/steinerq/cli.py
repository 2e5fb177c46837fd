"""Command-line entry point: ``steinerq {solve,verify,bench,analyze,splits}``.

Exit codes:
  0  success
  1  infeasible instance (terminals not connected)
  2  STP parse error or unreadable input
  3  verification mismatch or a failed split-optimality check
  4  guard limit exceeded or invalid parameters
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import analysis
from .dw import dw_solve
from .graph import DisconnectedError, GuardError, SteinerError, brute_force_steiner
from .split import OracleWeights, SplitParams, enumerate_2splits, hybrid_solve, verify_split_optimality, find_balanced_split
from .stp import Instance, ResultRecord, STPParseError, corpus, emit_results, generate, read_stp, results_csv

log = logging.getLogger("steinerq")

EXIT_OK, EXIT_INFEASIBLE, EXIT_PARSE, EXIT_MISMATCH, EXIT_GUARD = 0, 1, 2, 3, 4
ALGORITHMS = ("dw", "hybrid", "oracle")


def _gen_spec(text: str) -> tuple[int, int, float, int]:
    try:
        n, k, density, wmax = text.split(",")
        return int(n), int(k), float(density), int(wmax)
    except ValueError:
        raise argparse.ArgumentTypeError("--gen expects n,k,density,wmax") from None


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _params(args) -> SplitParams:
    return SplitParams(
        levels=args.levels,
        beta=analysis.BETA_STAR if args.beta is None else args.beta,
        epsilon=args.epsilon,
        a_cap=args.a_cap,
        dh_constant=args.dh_constant,
    )


def _instances(args) -> list[Instance]:
    if args.gen and args.inputs:
        raise SystemExit("give STP files or --gen, not both")
    if args.gen:
        n, k, density, wmax = args.gen
        return [generate(args.seed + i, n, k, density, (1, wmax)) for i in range(args.count)]
    out = []
    for p in args.inputs:
        p = Path(p)
        files = sorted(p.glob("*.stp")) if p.is_dir() else [p]
        out.extend(read_stp(f) for f in files)
    return out


def run_algorithm(inst: Instance, algorithm: str, params: SplitParams | None = None) -> ResultRecord:
    t0 = time.perf_counter()
    ledger = None
    if algorithm == "dw":
        tree = dw_solve(inst.graph, inst.terminals)
    elif algorithm == "hybrid":
        tree, ledger = hybrid_solve(inst.graph, inst.terminals, params)
    elif algorithm == "oracle":
        tree = brute_force_steiner(inst.graph, inst.terminals)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    ms = (time.perf_counter() - t0) * 1000
    return ResultRecord.from_run(inst.name, algorithm, tree, ms, ledger, params if algorithm == "hybrid" else None)


def _print_record(rec: ResultRecord, out) -> None:
    print(f"{rec.instance}: {rec.algorithm} weight={rec.weight} time_ms={rec.time_ms:.1f}", file=out)
    print("  edges: " + " ".join(f"{u + 1}-{v + 1}" for u, v in rec.tree), file=out)
    if rec.ledger:
        for lv in rec.ledger["levels"]:
            print(
                f"  level {lv['level']}: invocations={lv['invocations']} N_total={lv['classical']} "
                f"queries={lv['quantum']}",
                file=out,
            )
        print(f"  widenings={rec.widenings} a_cap={rec.a_cap}", file=out)


def cmd_solve(args) -> int:
    insts = _instances(args)
    params = _params(args)
    records = []
    for inst in insts:
        rec = run_algorithm(inst, args.algorithm, params)
        _print_record(rec, sys.stdout)
        records.append(rec)
    if args.out:
        emit_results(records, args.out)
    return EXIT_OK


def _verify_one(job):
    inst, params = job
    weights = {}
    for alg in ALGORITHMS:
        try:
            weights[alg] = run_algorithm(inst, alg, params).weight
        except GuardError as e:
            weights[alg] = f"guard: {e}"
    return inst.name, inst.optimum, weights


def cmd_verify(args) -> int:
    insts = corpus(args.seed, args.corpus) if args.corpus else _instances(args)
    if not insts:
        log.warning("empty corpus, nothing to verify")
        print("0 instances verified")
        return EXIT_OK
    params = _params(args)
    jobs = [(inst, params) for inst in insts]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    bad = []
    for name, optimum, weights in results:
        values = set(weights.values())
        if optimum is not None:
            values.add(optimum)
        if len(values) != 1:
            bad.append((name, optimum, weights))
    if bad:
        print(f"{'instance':<20} {'known':>8} " + " ".join(f"{a:>10}" for a in ALGORITHMS))
        for name, optimum, weights in bad:
            known = "-" if optimum is None else optimum
            print(f"{name:<20} {known!s:>8} " + " ".join(f"{weights[a]!s:>10}" for a in ALGORITHMS))
    print(f"{len(results)} instances, {len(bad)} mismatches")
    return EXIT_MISMATCH if bad else EXIT_OK


def _bench_one(job):
    inst, params = job
    return run_algorithm(inst, "hybrid", params)


def cmd_bench(args) -> int:
    params = _params(args)
    rows, jobs = [], []
    for k in args.k:
        n = args.n or k
        for i in range(args.count):
            inst = generate(args.seed + 1000 * k + i, n, k, args.density, (1, args.wmax))
            jobs.append((inst, params))
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            records = list(pool.map(_bench_one, jobs))
    else:
        records = [_bench_one(j) for j in jobs]
    header = results_csv([]).rstrip("\n") + ",n,k,pred_level1_N,pred_level2_driver,pred_level3_driver"
    rows.append(header)
    for (inst, _), rec in zip(jobs, records):
        pred = analysis.predicted_search_sizes(inst.k, params.beta, params.levels, params.epsilon)
        drivers = [p.driver for p in pred] + [""] * 3
        level1 = drivers[0] * analysis.a_factor(inst.n, params.a_cap)
        rows.append(
            results_csv([rec]).splitlines()[1]
            + f",{inst.n},{inst.k},{level1},{drivers[1]},{drivers[2]}"
        )
    text = "\n".join(rows) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_analyze(args) -> int:
    if args.beta is not None:
        rep = analysis.exponent_report(args.beta, args.levels)
        print(f"beta={rep.beta} levels={rep.levels}")
        print(f"classical exponent {rep.classical_exponent:.6f}")
        print(f"quantum exponent   {rep.quantum_exponent:.6f}")
        print(f"printed-form quantum exponent {analysis.printed_quantum_exponent(args.beta, args.levels):.6f}")
        print(f"overall {rep.overall_exponent:.6f} base {rep.base:.6f} ({rep.binding})")
        return EXIT_OK
    rep = analysis.solve_beta(args.levels)
    print(f"levels={rep.levels} beta*={rep.beta:.6f} exponent={rep.overall_exponent:.6f} base={rep.base:.6f} ({rep.binding})")
    print(f"classical {rep.classical_exponent:.6f} quantum {rep.quantum_exponent:.6f}")
    table = analysis.table2(sorted({1, 2, 3, 4, args.levels}))
    print(table.to_csv() if args.csv else table.to_text())
    return EXIT_OK


def cmd_splits(args) -> int:
    insts = _instances(args)
    oracle = OracleWeights()
    status = EXIT_OK
    for inst in insts:
        tree = dw_solve(inst.graph, inst.terminals)
        splits = enumerate_2splits(tree, inst.terminals)
        failed = [s for s in splits if not verify_split_optimality(inst.graph, inst.terminals, tree, s, oracle).ok]
        witness = find_balanced_split(inst.graph, inst.terminals, tree, args.alpha, args.eta)
        print(f"{inst.name}: weight={tree.weight} splits={len(splits)} optimality-failures={len(failed)}")
        if witness is None:
            print(f"  no witness for alpha={args.alpha} eta={args.eta}")
        else:
            t1 = " ".join(f"{u + 1}-{v + 1}" for u, v in witness.t1)
            print(
                f"  witness: K1={[t + 1 for t in witness.K1]} A={[a + 1 for a in witness.A]} "
                f"K2={[t + 1 for t in witness.K2]} T1=[{t1}]"
            )
        if failed:
            status = EXIT_MISMATCH
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="*", help="STP files or directories of .stp files")
    common.add_argument("--gen", type=_gen_spec, help="generate instances: n,k,density,wmax")
    common.add_argument("--count", type=int, default=1, help="instances per generator setting")
    common.add_argument("--algorithm", choices=ALGORITHMS, default="dw")
    common.add_argument("--beta", type=float, help=f"last-level split fraction (default {analysis.BETA_STAR})")
    common.add_argument("--epsilon", type=float, default=0.25)
    common.add_argument("--a-cap", type=int, default=2)
    common.add_argument("--levels", type=int, default=3)
    common.add_argument("--dh-constant", type=float, default=1.0)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", help="output directory (solve) or CSV file (bench)")

    p = argparse.ArgumentParser(prog="steinerq", description="Exact minimum Steiner tree solvers and cost analysis.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", parents=[common], help="solve instances")
    s.set_defaults(func=cmd_solve)
    s = sub.add_parser("verify", parents=[common], help="cross-check dw, hybrid and oracle")
    s.add_argument("--corpus", type=int, default=0, help="verify a seeded corpus of this many instances")
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("bench", parents=[common], help="hybrid ledger sweep with predicted sizes")
    s.add_argument("--k", type=_int_list, default=[4, 6, 8], help="terminal counts, e.g. 4-12 or 4,8")
    s.add_argument("--n", type=int, default=0, help="vertex count (default: n = k)")
    s.add_argument("--density", type=float, default=0.4)
    s.add_argument("--wmax", type=int, default=10)
    s.set_defaults(func=cmd_bench)
    s = sub.add_parser("analyze", parents=[common], help="exponents, balanced beta and the level table")
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_analyze)
    s = sub.add_parser("splits", parents=[common], help="validate 2-splits of an optimal tree")
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--eta", type=float, default=0.25)
    s.set_defaults(func=cmd_splits)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("STEINER_LOG", "WARNING").upper(), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except STPParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"cannot read input: {e}", file=sys.stderr)
        return EXIT_PARSE
    except DisconnectedError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except GuardError as e:
        print(f"guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (SteinerError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
