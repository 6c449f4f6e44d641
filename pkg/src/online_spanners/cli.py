"""Command line front end: ``online-spanners <subcommand> ...``.

Subcommands
  gen         write a seeded graph + demand pair
  run         stream demands through the online spanner, one JSONL record per round
  eval        audit a run log and report competitive ratios
  montecarlo  many seeds of one instance across worker processes
  covering    online fractional covering over a row stream
  packing     online fractional packing over a column stream

Exit codes: 0 success, 2 invalid or infeasible input, 1 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from . import exact, io
from .covering import CoveringState, OracleContractError
from .generators import KINDS, generate
from .graph import (UNBOUNDED, Demand, InfeasibleDemand, InvalidGraphError, distance_in_subgraph,
                    within)
from .packing import PackingState
from .simplex import SimplexError
from .spanner import Mode, lp_schedule, params_for, run_spanner

EXIT_OK, EXIT_BREACH, EXIT_INPUT = 0, 1, 2


class InvariantBreach(RuntimeError):
    pass


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _open_out(path: Optional[str]):
    return sys.stdout if path in (None, "-") else open(path, "w")


def _emit_json(obj, path: Optional[str]) -> None:
    fh = _open_out(path)
    try:
        fh.write(json.dumps(obj, sort_keys=True) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


def _log_bound(m: int) -> float:
    return 16 * math.log(2 * m) if m else 1.0


def _params(args, g, demands):
    mode = Mode(args.mode)
    d = args.d
    if mode is Mode.BOUNDED_D and d is None:
        finite = [dem.d for dem in demands if dem.bounded]
        if not finite:
            raise ValueError("bounded-d mode needs --d or at least one finite demand distance")
        d = int(max(finite))
    return params_for(mode, g.n, d_opt=d, epsilon=args.epsilon, seed=args.seed)


def _record(out) -> dict:
    return {
        "round": out.round,
        "branch": out.branch,
        "edges_added": len(out.edges_added) + len(out.repair_edges),
        "num_edges": out.num_edges,
        "lp_objective": out.lp_objective,
        "settled": out.settled,
        "repaired": out.repaired,
        "added_ids": sorted(out.edges_added + out.repair_edges),
        "roots": out.roots,
    }


def _exact_opt(g, demands, mode):
    """Brute-force OPT on the demand set as the algorithm sees it, or None if too big."""
    if mode is Mode.STEINER_FOREST:
        demands = [Demand(x.s, x.t, UNBOUNDED) for x in demands]
    try:
        return exact.brute_force_opt(g, demands)
    except exact.SizeLimit:
        return None


def cmd_gen(args) -> int:
    g, demands = generate(args.kind, args.n, args.density, args.seed, k=args.k)
    if args.out:
        with open(args.out + ".graph", "w") as fh:
            fh.write(io.format_graph(g))
        with open(args.out + ".demands", "w") as fh:
            fh.write(io.format_demands(demands))
        _say(f"wrote {args.out}.graph ({g.n} vertices, {g.m} edges) and "
             f"{args.out}.demands ({len(demands)} demands)")
    else:
        sys.stdout.write(io.format_graph(g))
        sys.stdout.write("---\n")
        sys.stdout.write(io.format_demands(demands))
    return EXIT_OK


def cmd_run(args) -> int:
    g = io.load_graph(args.graph)
    demands = io.load_demands(args.demands)
    params = _params(args, g, demands)
    run = run_spanner(g, demands, params)
    fh = _open_out(args.out)
    try:
        for out in run.outcomes:
            fh.write(json.dumps(_record(out), sort_keys=True) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    if not all(o.settled for o in run.outcomes):
        raise InvariantBreach("a demand is unsettled after its round")
    size = len(run.edges)
    lp = float(run.x.sum())
    repairs = sum(o.repaired for o in run.outcomes)
    _say(f"mode={params.mode.value} T={params.T} t={params.t:g} rounds={len(run.outcomes)} "
         f"|E'|={size} lp_objective={lp:.6g} repairs={repairs}")
    if lp > 0:
        _say(f"ratio vs LP lower bound lp/(16 ln 2|E|): {size * _log_bound(g.m) / lp:.6g}")
    else:
        _say("ratio vs LP lower bound: 0")
    if args.exact:
        opt = _exact_opt(g, demands, params.mode)
        if opt is None:
            _say("exact OPT skipped: instance exceeds the brute-force size limit")
        else:
            _say(f"brute-force OPT={opt} ratio |E'|/OPT={size / opt if opt else 0:.6g}")
    return EXIT_OK


def _read_records(path):
    records = []
    for no, line in enumerate(io.read_text(path).splitlines(), 1):
        if line.strip():
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise io.FormatError(f"run log line {no}: {exc.msg}") from None
    return records


def audit(g, demands, records, mode=Mode.GENERAL) -> list[str]:
    """Replay a run log and list every violated invariant (empty when clean)."""
    problems = []
    if len(records) != len(demands):
        problems.append(f"{len(records)} records for {len(demands)} demands")
    edges: set = set()
    prev = 0
    for rec, dem in zip(records, demands):
        i = rec.get("round")
        for k in rec.get("added_ids", []):
            if not 0 <= k < g.m:
                problems.append(f"round {i}: edge id {k} out of range")
            else:
                edges.add(k)
        if rec.get("num_edges") != len(edges):
            problems.append(f"round {i}: logged |E'|={rec.get('num_edges')} but replay has {len(edges)}")
        if rec.get("num_edges", 0) < prev:
            problems.append(f"round {i}: |E'| decreased")
        prev = rec.get("num_edges", 0)
        d = UNBOUNDED if mode is Mode.STEINER_FOREST else dem.d
        dist = distance_in_subgraph(g, edges, dem.s, dem.t)
        if not within(dist, d):
            problems.append(f"round {i}: demand {dem.s}->{dem.t} has distance {dist} > {d}")
        if not rec.get("settled", False):
            problems.append(f"round {i}: record reports the demand unsettled")
    return problems


def cmd_eval(args) -> int:
    g = io.load_graph(args.graph)
    demands = io.load_demands(args.demands)
    records = _read_records(args.run)
    mode = Mode(args.mode)
    problems = audit(g, demands, records, mode)
    size = records[-1]["num_edges"] if records else 0
    lp_online = records[-1]["lp_objective"] if records else 0.0
    report = {"rounds": len(records), "num_edges": size, "audit_passed": not problems,
              "problems": problems, "lp_objective": lp_online}
    seen = [Demand(x.s, x.t, UNBOUNDED) for x in demands] if mode is Mode.STEINER_FOREST else demands
    opt = _exact_opt(g, seen, mode) if demands else 0
    if opt is not None:
        report["lower_bound"], report["lower_bound_kind"] = opt, "brute_force_opt"
    else:
        try:
            report["lower_bound"] = exact.exact_lp_opt(g, seen)
            report["lower_bound_kind"] = "exact_lp_opt"
        except exact.SizeLimit:
            report["lower_bound"] = lp_online / _log_bound(g.m)
            report["lower_bound_kind"] = "online_lp_over_16ln2m"
    lb = report["lower_bound"]
    report["ratio"] = size / lb if lb > 0 else (1.0 if size == 0 else math.inf)
    _emit_json(report, args.out)
    verdict = "PASSED" if not problems else "FAILED"
    _say(f"audit {verdict}: {len(records)} rounds, |E'|={size}, "
         f"{report['lower_bound_kind']}={lb:.6g}, ratio={report['ratio']:.6g}")
    for p in problems:
        _say(f"  {p}")
    return EXIT_OK if not problems else EXIT_BREACH


def _mc_worker(job):
    g, demands, params, schedule = job
    run = run_spanner(g, demands, params, x_schedule=schedule)
    return (params.seed, len(run.edges), sorted(run.edges),
            all(o.settled for o in run.outcomes), sum(o.repaired for o in run.outcomes))


def cmd_montecarlo(args) -> int:
    g = io.load_graph(args.graph)
    demands = io.load_demands(args.demands)
    base = _params(args, g, demands)
    schedule = lp_schedule(g, demands, base.mode)
    jobs = [(g, demands, params_for(base.mode, g.n, base.d, base.epsilon, seed=args.seed + r), schedule)
            for r in range(args.runs)]
    if args.workers > 1 and args.runs > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_mc_worker, jobs, chunksize=max(1, args.runs // (4 * args.workers))))
    else:
        results = [_mc_worker(job) for job in jobs]
    results.sort(key=lambda r: r[0])
    sizes = np.array([r[1] for r in results], dtype=float)
    freq = np.zeros(g.m)
    for r in results:
        freq[r[2]] += 1
    report = {
        "runs": len(results),
        "first_seed": args.seed,
        "mean_edges": float(sizes.mean()) if len(results) else 0.0,
        "max_edges": int(sizes.max()) if len(results) else 0,
        "min_edges": int(sizes.min()) if len(results) else 0,
        "all_settled": all(r[3] for r in results),
        "total_repairs": int(sum(r[4] for r in results)),
        "edge_frequency": (freq / max(1, len(results))).tolist(),
        "lp_objective": float(schedule[-1].sum()) if schedule else 0.0,
    }
    _emit_json(report, args.out)
    _say(f"{report['runs']} runs: |E'| mean={report['mean_edges']:.4g} "
         f"min={report['min_edges']} max={report['max_edges']} repairs={report['total_repairs']}")
    if not report["all_settled"]:
        raise InvariantBreach("some run left a demand unsettled")
    return EXIT_OK


def cmd_covering(args) -> int:
    costs, rows = io.parse_sparse_stream(io.read_text(args.file))
    state = CoveringState(costs)
    doubled = 0
    for row in rows:
        rep = state.process(row)
        doubled += bool(rep.variables_doubled)
    x = state.solution()
    report = {"rows": len(rows), "objective": state.objective(), "x": x.tolist(),
              "phases": state.phase, "alphas": list(state.alphas), "fixes": state.fixes,
              "fixes_with_doubling": doubled}
    if args.exact and rows:
        opt = exact.exact_covering_lp(costs, rows)
        report["offline_opt"] = opt
        report["ratio"] = state.objective() / opt if opt > 0 else 0.0
    A = np.array([r.dense(len(costs)) for r in rows]).reshape(len(rows), len(costs))
    if rows and np.any(A @ x < 1 - 1e-9):
        raise InvariantBreach("covering solution violates a processed row")
    _emit_json(report, args.out)
    _say(f"covering: {len(rows)} rows, objective={state.objective():.6g}, fixes={state.fixes}"
         + (f", offline OPT={report['offline_opt']:.6g}" if "offline_opt" in report else ""))
    return EXIT_OK


def cmd_packing(args) -> int:
    costs, cols = io.parse_sparse_stream(io.read_text(args.file))
    state = PackingState(costs, args.B)
    for col in cols:
        state.process_column(col)
    rep = state.report()
    scaled = state.report(scaled=True)
    usage = float(rep.violation.max()) if len(cols) else 0.0
    scaled_usage = usage * args.B / rep.b_prime if rep.b_prime > 0 else 0.0
    report = {"columns": len(cols), "objective": rep.objective, "covering_objective": rep.covering_objective,
              "b_prime": rep.b_prime, "y": rep.y.tolist(), "y_scaled": scaled.y.tolist(),
              "max_row_usage": usage, "scaled_max_row_usage": scaled_usage}
    if scaled_usage > 1 + 1e-9:
        raise InvariantBreach(f"scaled packing solution overloads a row by factor {scaled_usage:g}")
    _emit_json(report, args.out)
    _say(f"packing: {len(cols)} columns, objective={rep.objective:.6g}, B'={rep.b_prime:.6g}, "
         f"scaled objective={scaled.objective:.6g}")
    return EXIT_OK


def _add_run_flags(p) -> None:
    p.add_argument("graph", help="graph file ('n m' header then 'u v len' lines)")
    p.add_argument("demands", help="demand file ('s t d' per line, d may be inf)")
    p.add_argument("--mode", default="general", choices=[m.value for m in Mode])
    p.add_argument("--d", type=int, default=None, help="distance bound for bounded-d parameters")
    p.add_argument("--epsilon", type=float, default=None, help="steiner-forest trade-off in (0, 1/3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="online-spanners", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--kind", choices=KINDS, default="random")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--k", type=int, default=5, help="number of demands")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="path prefix; writes PREFIX.graph and PREFIX.demands")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run the online spanner on a demand stream")
    _add_run_flags(p)
    p.add_argument("--exact", action="store_true", help="also report |E'| / brute-force OPT")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("eval", help="audit a run log and report ratios")
    p.add_argument("run", help="JSONL log written by 'run'")
    p.add_argument("graph")
    p.add_argument("demands")
    p.add_argument("--mode", default="general", choices=[m.value for m in Mode])
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("montecarlo", help="many seeded runs of one instance")
    _add_run_flags(p)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_montecarlo)

    for name, helptext, func in (("covering", "online covering over a row stream", cmd_covering),
                                 ("packing", "online packing over a column stream", cmd_packing)):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file")
        p.add_argument("--out", default=None)
        if name == "covering":
            p.add_argument("--exact", action="store_true", help="also solve the offline LP")
        else:
            p.add_argument("--B", type=float, required=True, help="packing scale parameter B > 0")
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (io.FormatError, InvalidGraphError, InfeasibleDemand, OSError) as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT
    except (InvariantBreach, OracleContractError, SimplexError, AssertionError) as exc:
        _say(f"invariant breach: {exc}")
        return EXIT_BREACH
    except ValueError as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
