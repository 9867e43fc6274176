"""Command-line entry point: ``lbcons <command> ...`` (also ``python -m lbconsensus``)."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FsPath

from .adversaries import parse_strategy, split_strategy_list
from .feasibility import check
from .graph_core import GraphError, write_graph
from .harness import (
    PROTOCOLS,
    RunKey,
    SweepReport,
    SweepSpec,
    execute,
    generate_graph,
    judge_trace,
    load_graph,
    make_protocol,
    parse_bits,
    parse_ids,
    replay,
    run_sweep,
)
from .indistinguishability import CONSTRUCTIONS, build_split_network, derive_executions, find_split_spec, write_demo
from .netsim import ProtocolError, RoundBudgetExceeded, SimulationError, default_budget


def _add_common(p, protocol=True):
    p.add_argument("--graph", required=True, help="graph file, or a family such as cycle:5 / fig1b")
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--t", type=int, default=0)
    if protocol:
        p.add_argument("--protocol", choices=PROTOCOLS, default="alg1")
        p.add_argument("--lenient", action="store_true", help="do not abort when the graph lacks required paths")
    p.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lbcons", description="Byzantine consensus under local broadcast: checks, runs, sweeps, demos.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="feasibility verdict for a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--model", choices=("lb", "hybrid", "p2p"), default="lb")
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--t", type=int, default=0)

    p = sub.add_parser("run", help="one execution")
    _add_common(p)
    p.add_argument("--inputs", required=True, help="bit string, one bit per node")
    p.add_argument("--faulty", default="", help="comma-separated ids")
    p.add_argument("--equivocators", default="", help="comma-separated ids (subset of --faulty)")
    p.add_argument("--strategy", default="silent")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sweep", help="every combination of inputs, fault placements and strategies")
    _add_common(p)
    p.add_argument("--inputs", default="exhaustive", help="exhaustive, sample:<k>, or comma-separated bit strings")
    p.add_argument("--faulty", default="exhaustive", help="exhaustive, or ';'-separated id lists")
    p.add_argument("--strategy", default="silent", help="comma-separated strategy specs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--invariants", action="store_true", help="also check per-phase invariants (alg1/alg3)")

    p = sub.add_parser("replay", help="re-run a recorded execution")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--key", help="replay key from a sweep report or run")
    g.add_argument("--report", help="sweep report file; replays --run (default: first failure)")
    p.add_argument("--run", type=int)
    p.add_argument("--out")

    p = sub.add_parser("demo-necessity", help="split-network demonstration on a graph that fails the conditions")
    _add_common(p, protocol=False)
    p.add_argument("--construction", choices=CONSTRUCTIONS, required=True)
    p.add_argument("--protocol", choices=PROTOCOLS)
    p.add_argument("--strict", action="store_true", help="let missing paths abort the protocol")

    p = sub.add_parser("gen-graph", help="write a generated graph")
    p.add_argument("--family", required=True, help="cycle, complete, path, fig1b, random-k-connected")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return ap


def cmd_check(a) -> int:
    g = load_graph(a.graph)
    rep = check(g, a.model, a.f, a.t)
    print(rep.summary())
    print("RECORD " + json.dumps(rep.record(), sort_keys=True))
    return 0 if rep.achievable else 1


def _report_run(tr, faulty, key: RunKey, out) -> int:
    agree, valid, outs = judge_trace(tr, faulty)
    done = all(s in tr.decisions for s in tr.honest)
    sys.stdout.write(tr.decide_block())
    print(f"RESULT agreement={'ok' if agree else 'FAIL'} validity={'ok' if valid else 'FAIL'} "
          f"termination={'ok' if done else 'FAIL'} rounds={tr.round_count} outputs={outs}")
    print(f"KEY {key.encode()}")
    if out:
        d = FsPath(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "trace.txt").write_text(tr.to_text())
        (d / "key.txt").write_text(key.encode() + "\n")
    return 0 if agree and valid and done else 1


def cmd_run(a) -> int:
    g = load_graph(a.graph)
    faulty = parse_ids(a.faulty)
    eq = parse_ids(a.equivocators)
    parse_strategy(a.strategy)
    proto = make_protocol(a.protocol, g, a.f, a.t, not a.lenient)
    budget = default_budget(g.n, getattr(proto, "phase_count", 1))
    key = RunKey(a.protocol, a.f, a.t, g, parse_bits(a.inputs, g.n), faulty, eq, a.strategy, budget, a.seed, not a.lenient)
    try:
        tr = execute(key, proto)
    except RoundBudgetExceeded as e:
        print(f"RESULT termination=FAIL {e}")
        return 1
    return _report_run(tr, faulty, key, a.out)


def cmd_sweep(a) -> int:
    g = load_graph(a.graph)
    spec = SweepSpec(
        graph=g,
        protocol=a.protocol,
        f=a.f,
        t=a.t,
        inputs=a.inputs,
        faulty=a.faulty,
        strategies=split_strategy_list(a.strategy),
        seed=a.seed,
        strict=not a.lenient,
        invariants=a.invariants,
    )
    rep = run_sweep(spec)
    if a.out:
        d = FsPath(a.out)
        d.mkdir(parents=True, exist_ok=True)
        rep.write(d / "report.txt")
    for key in rep.failures[:10]:
        print(f"FAILED {key}")
    for v in rep.violations[:10]:
        print(f"INVARIANT {v}")
    print(rep.summary())
    return 0 if rep.pass_rate == 1.0 and not rep.violations else 1


def cmd_replay(a) -> int:
    if a.key:
        text = a.key
    else:
        rep = SweepReport.read(a.report)
        if a.run is not None:
            matches = [r for r in rep.records if r.index == a.run]
            if not matches:
                print(f"no run {a.run} in {a.report}", file=sys.stderr)
                return 2
            text = matches[0].key
        elif rep.failures:
            text = rep.failures[0]
        else:
            print("report has no failing runs; pass --run", file=sys.stderr)
            return 2
    try:
        key = RunKey.decode(text)
    except (KeyError, ValueError) as e:
        print(f"rejected key: {e}", file=sys.stderr)
        return 2
    try:
        tr = replay(key)
    except RoundBudgetExceeded as e:
        print(f"RESULT termination=FAIL {e}")
        return 1
    return _report_run(tr, key.faulty, key, a.out)


def cmd_demo(a) -> int:
    g = load_graph(a.graph)
    spec = find_split_spec(g, a.construction, a.f, a.t)
    if spec is None:
        print(f"VERDICT {a.construction}: no partition satisfies the construction (graph meets this condition)")
        return 1
    sn = build_split_network(g, spec)
    name = a.protocol or ("alg3" if a.t else "alg1")
    proto = make_protocol(name, g, a.f, a.t, a.strict)
    demo = derive_executions(sn, proto)
    print(f"partition {spec.describe()}")
    if a.out:
        for p in write_demo(demo, a.out):
            print(f"wrote {p}")
    for ex in demo.executions:
        outs = " ".join(f"{v}:{ex.trace.decisions[v][0]}" for v in sorted(ex.model) if ex.trace and v in ex.trace.decisions)
        print(f"{ex.name} faulty={sorted(ex.faulty)} equivocating={sorted(ex.equivocators)} "
              f"inputs={''.join(map(str, ex.inputs))} {ex.outcome} outputs {outs or '-'} projection={'sound' if ex.sound else ex.sound}")
    print(demo.verdict())
    return 0 if demo.demonstrated else 1


def cmd_gen(a) -> int:
    g = generate_graph(a.family, a.n, a.k, a.seed)
    if a.out:
        write_graph(g, a.out)
        print(f"wrote {a.out}")
    else:
        sys.stdout.write(g.to_text())
    return 0


COMMANDS = {
    "check": cmd_check,
    "run": cmd_run,
    "sweep": cmd_sweep,
    "replay": cmd_replay,
    "demo-necessity": cmd_demo,
    "gen-graph": cmd_gen,
}


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    try:
        return COMMANDS[a.command](a)
    except (GraphError, ValueError, ProtocolError, SimulationError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
