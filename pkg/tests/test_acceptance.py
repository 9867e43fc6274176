"""End-to-end acceptance checks, one test (or group of tests) per criterion.

Each test carries a ``criterion`` mark; the summary hook in conftest prints one
PASS/FAIL line per criterion after the run.
"""

import dataclasses
import time
from itertools import combinations

import pytest

import oracles
from lbconsensus.adversaries import parse_strategy
from lbconsensus.feasibility import check_hybrid, check_local_broadcast
from lbconsensus.graph_core import Graph, vertex_connectivity
from lbconsensus.harness import SweepSpec, complete, cycle, execute, fig1b, make_protocol, path_graph, run_sweep, sweep_keys
from lbconsensus.indistinguishability import (
    CONNECTIVITY,
    DEGREE,
    build_split_network,
    check_hearing,
    derive_executions,
    find_split_spec,
    replay_derived,
    write_demo,
)
from lbconsensus.protocols import Algorithm1, reliable_receive, run_algorithm1
from lbconsensus.protocols.payloads import TraceCodec

C5_LIBRARY = ["silent", "constant:0", "constant:1", "flip", "tamper:all", "tamper:alternate", "tamper:origin=0", "tamper:first-hop=1", "garbage"]
FIG_STRATEGIES = ["silent", "flip", "tamper:all", "tamper:alternate"]
FIG_PAIRS = [list(p) for p in combinations(range(8), 2)]


def timed_sweep(spec):
    start = time.perf_counter()
    rep = run_sweep(spec)
    return rep, time.perf_counter() - start


@pytest.fixture(scope="module")
def c3_sweep():
    return timed_sweep(SweepSpec(graph=cycle(5), protocol="alg1", f=1, strategies=C5_LIBRARY, invariants=True))


@pytest.fixture(scope="module")
def c4_sweep():
    return timed_sweep(SweepSpec(graph=fig1b(), protocol="alg1", f=2, faulty=FIG_PAIRS, strategies=FIG_STRATEGIES, invariants=True))


def assert_all_pass(rep):
    bad = [r for r in rep.records if not r.passed]
    assert not bad, f"{len(bad)} failing runs, first: {bad[0].to_line()}"


# ---------------------------------------------------------------- 1


@pytest.mark.criterion(1, "vertex connectivity equals brute-force cuts on every graph with n <= 6")
def test_connectivity_exact_on_all_small_graphs():
    start = time.perf_counter()
    checked = 0
    for n in range(1, 7):
        pairs = list(combinations(range(n), 2))
        for bits in range(1 << len(pairs)):
            edges = [p for i, p in enumerate(pairs) if bits >> i & 1]
            got = vertex_connectivity(Graph.from_edges(n, edges))
            want = oracles.brute_connectivity(n, edges)
            assert got == want, (n, edges, got, want)
            checked += 1
    elapsed = time.perf_counter() - start
    assert checked == sum(1 << (n * (n - 1) // 2) for n in range(1, 7))
    assert elapsed < 300, f"{elapsed:.0f}s"


# ---------------------------------------------------------------- 2


@pytest.mark.criterion(2, "feasibility verdicts at the boundary examples")
def test_boundary_verdicts():
    assert check_local_broadcast(cycle(5), 1).achievable
    assert check_local_broadcast(fig1b(), 2).achievable
    assert not check_local_broadcast(cycle(5), 2).achievable
    g = fig1b()
    edges = g.sorted_edges()
    assert len(edges) == 16
    for e in edges:
        thinner = Graph.from_edges(8, [x for x in edges if x != e])
        verdict = check_local_broadcast(thinner, 2)
        assert not verdict.achievable, e


# ---------------------------------------------------------------- 3


@pytest.mark.criterion(3, "Algorithm 1 on C5, f=1: exhaustive inputs, placements, strategy library")
def test_alg1_c5_exhaustive(c3_sweep):
    rep, elapsed = c3_sweep
    assert rep.total == 32 * 6 * len(C5_LIBRARY)
    assert_all_pass(rep)
    assert {r.rounds for r in rep.records} == {5 * (1 + 5)}
    assert elapsed < 120, f"{elapsed:.0f}s"


# ---------------------------------------------------------------- 4


@pytest.mark.criterion(4, "Algorithm 1 on fig1b, f=2: all inputs, all fault pairs, 4 strategies")
def test_alg1_fig1b_pairs(c4_sweep):
    rep, elapsed = c4_sweep
    assert rep.total == 256 * 28 * 4
    assert_all_pass(rep)
    assert elapsed < 1800, f"{elapsed:.0f}s"


# ---------------------------------------------------------------- 5


@pytest.mark.criterion(5, "Algorithm 2 passes the same sweeps within 3n rounds")
@pytest.mark.parametrize(
    "graph,f,faulty,strategies",
    [(cycle(5), 1, "exhaustive", C5_LIBRARY), (fig1b(), 2, FIG_PAIRS, FIG_STRATEGIES)],
    ids=["c5", "fig1b"],
)
def test_alg2_sweeps(graph, f, faulty, strategies):
    rep = run_sweep(SweepSpec(graph=graph, protocol="alg2", f=f, faulty=faulty, strategies=strategies))
    assert rep.total == (1 << graph.n) * len(SweepSpec(graph=graph, protocol="alg2", f=f, faulty=faulty).placements()) * len(strategies)
    assert_all_pass(rep)
    assert rep.max_rounds <= 3 * graph.n


# ---------------------------------------------------------------- 6


@pytest.mark.criterion(6, "Algorithm 3 with t=0 reproduces Algorithm 1 traces byte for byte")
def test_hybrid_reduction_traces_identical():
    spec = SweepSpec(graph=cycle(5), protocol="alg1", f=1, strategies=C5_LIBRARY)
    alg1 = make_protocol("alg1", spec.graph, 1)
    alg3 = make_protocol("alg3", spec.graph, 1, 0)
    codec = TraceCodec()
    count = 0
    for key in sweep_keys(spec, alg1):
        a = execute(key, alg1).to_text(codec)
        b = execute(dataclasses.replace(key, protocol="alg3"), alg3).to_text(codec)
        assert a == b, key.encode()
        count += 1
    assert count == 32 * 6 * len(C5_LIBRARY)


# ---------------------------------------------------------------- 7


@pytest.mark.criterion(7, "Algorithm 3 on K6, f=2, t=1: all fault pairs, one equivocator each")
def test_hybrid_sweep_k6():
    g = complete(6)
    assert check_hybrid(g, 2, 1).achievable
    assert not check_hybrid(complete(5), 2, 1).achievable
    spec = SweepSpec(
        graph=g,
        protocol="alg3",
        f=2,
        t=1,
        inputs="sample:64",
        faulty=[list(p) for p in combinations(range(6), 2)],
        strategies=["equivocate/flip", "equivocate/silent", "equivocate/tamper:all", "equivocate/constant:0"],
        equivocators=1,
        seed=11,
    )
    keys = list(sweep_keys(spec, make_protocol("alg3", g, 2, 1)))
    assert all(k.equivocators == (min(k.faulty),) for k in keys)
    rep = run_sweep(spec)
    assert rep.total == 15 * 4 * 64
    assert_all_pass(rep)


# ---------------------------------------------------------------- 8


@pytest.mark.criterion(8, "phase invariants hold on every criterion 3 and 4 trace")
@pytest.mark.parametrize("which", ["c3_sweep", "c4_sweep"])
def test_phase_invariants(which, request):
    rep, _ = request.getfixturevalue(which)
    assert rep.violations == []


# ---------------------------------------------------------------- 9


@pytest.mark.criterion(9, "necessity demos on P3 (degree) and C5 f=2 (connectivity)")
@pytest.mark.parametrize("g,kind,f", [(path_graph(3), DEGREE, 1), (cycle(5), CONNECTIVITY, 2)], ids=["p3-degree", "c5-connectivity"])
def test_necessity_demo(g, kind, f, tmp_path):
    assert not check_local_broadcast(g, f).achievable
    spec = find_split_spec(g, kind, f)
    assert spec is not None
    if kind == CONNECTIVITY:
        assert vertex_connectivity(g) == 2
        assert len(spec.part("C1") | spec.part("C2")) <= 3
    sn = build_split_network(g, spec)
    check_hearing(sn)
    demo = derive_executions(sn, Algorithm1(g, f, strict=False))
    assert len(demo.executions) == 3
    assert all(ex.sound for ex in demo.executions)
    assert demo.demonstrated and demo.executions[1].violations
    assert derive_executions(sn, Algorithm1(g, f)).demonstrated
    write_demo(demo, tmp_path)
    for ex in demo.executions:
        again = replay_derived(g, Algorithm1(g, f, strict=False), tmp_path / f"{ex.name}.script", ex.faulty, ex.inputs, ex.equivocators)
        assert again.to_text(TraceCodec()) == (tmp_path / f"{ex.name}.trace").read_text()


# ---------------------------------------------------------------- 10


def reliable_cases():
    c5 = [(cycle(5), 1, [b], s, bits) for b in range(5) for s in ("silent", "flip", "tamper:all", "tamper:alternate", "garbage") for bits in ([0, 1, 1, 0, 1], [1, 1, 1, 1, 1])]
    c5 += [(cycle(5), 1, [], "silent", [0, 1, 1, 0, 1])]
    fig = [(fig1b(), 2, p, s, [0, 1, 1, 0, 1, 0, 0, 1]) for p in FIG_PAIRS for s in FIG_STRATEGIES]
    fig += [(fig1b(), 2, [p[0]], "tamper:alternate", [1, 1, 0, 0, 1, 0, 1, 1]) for p in FIG_PAIRS[::7]]
    return c5 + fig


@pytest.mark.criterion(10, "reliable receive matches brute-force path enumeration on C5 and fig1b")
def test_reliable_receive_matches_brute_force():
    start = time.perf_counter()
    protos = {}
    compared = 0
    for g, f, faulty, strat, bits in reliable_cases():
        proto = protos.setdefault((g.n, f), Algorithm1(g, f))
        adj = oracles.adjacency(g.n, g.sorted_edges())
        tr = run_algorithm1(g, f, bits, parse_strategy(strat), set(faulty), protocol=proto)
        for v in tr.honest:
            snaps = tr.annotations[v]
            for snap in (snaps[0], snaps[-1]):
                recs = proto.flood.records(snap.token)
                for u in range(g.n):
                    got = reliable_receive(g, v, u, recs, f, snap.gamma_start)
                    want = oracles.brute_reliable_value(adj, v, u, recs, f, snap.gamma_start)
                    assert (None if got is None else got.value) == want, (faulty, strat, v, u)
                    compared += 1
    assert compared > 10_000
    assert time.perf_counter() - start < 300
