import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lbconsensus.feasibility import check_hybrid, check_local_broadcast
from lbconsensus.graph_core import Graph
from lbconsensus.harness import complete, cycle, fig1b, path_graph
from lbconsensus.indistinguishability import (
    CONNECTIVITY,
    DEGREE,
    HYBRID_CONNECTIVITY,
    HYBRID_DEGREE,
    SplitSpec,
    SplitSpecError,
    build_split_network,
    check_hearing,
    derive_executions,
    find_split_spec,
    replay_derived,
    write_demo,
)
from lbconsensus.netsim import Network
from lbconsensus.protocols import Algorithm1, Algorithm3
from lbconsensus.protocols.payloads import TraceCodec

from test_graph_core import graphs

# two 4-cliques joined by the edges 0-4 and 1-5: every node has 3 neighbours, connectivity 2
TWO_K4 = Graph.from_edges(8, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7), (0, 4), (1, 5)])


def named_edges(sn, pairs):
    return {(sn.network.name(a), sn.network.name(b)) for a, b in pairs}


# ---------------------------------------------------------------- specs


def test_p3_degree_spec():
    g = path_graph(3)
    spec = SplitSpec.of(DEGREE, 1, z={0}, F1=(), F2={1}, W={2})
    sn = build_split_network(g, spec)
    assert sn.slots == ((0, 0), (1, 0), (2, 0), (2, 1))
    # F2 = {1} hears the W1 copy; W0 still hears 1 one-way
    assert named_edges(sn, sn.undirected_edges()) == {("0", "1"), ("1", "2_1")}
    assert named_edges(sn, sn.directed_edges()) == {("1", "2_0")}
    assert find_split_spec(g, DEGREE, 1) == spec


def test_p3_centre_node_cannot_be_z():
    # the middle node has two neighbours, and with f = 1 at most one may sit in F2
    g = path_graph(3)
    with pytest.raises(SplitSpecError):
        SplitSpec.of(DEGREE, 1, z={1}, F1=(), F2={0}, W={2}).validate(g)
    with pytest.raises(SplitSpecError):
        SplitSpec.of(DEGREE, 1, z={1}, F1=(), F2={0, 2}).validate(g)


def test_degree_copies_never_hear_each_other():
    for g, f in ((path_graph(3), 1), (cycle(5), 2), (cycle(6), 2)):
        sn = build_split_network(g, find_split_spec(g, DEGREE, f))
        W = sn.spec.part("W")
        w0 = {sn.slot(w, 0) for w in W}
        w1 = {sn.slot(w, 1) for w in W}
        for a, recv in enumerate(sn.network.listeners):
            if a in w0:
                assert not set(recv) & w1
            if a in w1:
                assert not set(recv) & w0


def test_c5_connectivity_spec_structure():
    g = cycle(5)
    spec = SplitSpec.of(CONNECTIVITY, 2, A={0}, B={2, 3}, C1={1}, C2={4})
    sn = build_split_network(g, spec)
    und = named_edges(sn, sn.undirected_edges())
    assert und == {("0_0", "1"), ("0_0", "4"), ("1", "2_0"), ("2_0", "3_0"), ("2_1", "3_1"), ("3_1", "4")}
    assert named_edges(sn, sn.directed_edges()) == {("1", "0_1"), ("4", "0_1"), ("1", "2_1"), ("4", "3_0")}


def test_spec_validation_errors():
    g = cycle(5)
    with pytest.raises(SplitSpecError):
        SplitSpec.of(CONNECTIVITY, 2, A={0}, B={1, 2, 3}, C1={4}).validate(g)  # A and B adjacent
    with pytest.raises(SplitSpecError):
        SplitSpec.of(CONNECTIVITY, 2, A={0}, B={2, 3}, C1={1, 4}).validate(g)  # C1 too large
    with pytest.raises(SplitSpecError):
        SplitSpec.of(CONNECTIVITY, 2, A={0}, B={2}, C1={1}, C2={4}).validate(g)  # 3 uncovered
    with pytest.raises(SplitSpecError):
        SplitSpec.of("nope", 1)
    with pytest.raises(SplitSpecError):
        SplitSpec.of(DEGREE, 1, Q={1})


def test_conforming_graphs_admit_no_spec():
    for kind in (DEGREE, CONNECTIVITY):
        assert find_split_spec(fig1b(), kind, 2) is None
        assert find_split_spec(cycle(5), kind, 1) is None
    for kind in (HYBRID_DEGREE, HYBRID_CONNECTIVITY):
        assert find_split_spec(complete(6), kind, 2, 1) is None


def test_disconnected_graph_uses_empty_cut():
    spec = find_split_spec(Graph.from_edges(2, []), CONNECTIVITY, 1)
    assert spec.part("A") == {0} and spec.part("B") == {1}


@settings(max_examples=120, deadline=None)
@given(graphs(max_n=6, min_n=2), st.integers(1, 2), st.data())
def test_spec_exists_exactly_when_conditions_fail(g, f, data):
    if f >= g.n:
        return
    t = data.draw(st.integers(0, f))
    if t == 0:
        ok = check_local_broadcast(g, f).achievable
        specs = [find_split_spec(g, k, f) for k in (DEGREE, CONNECTIVITY)]
    else:
        ok = check_hybrid(g, f, t).achievable
        specs = [find_split_spec(g, k, f, t) for k in (HYBRID_DEGREE, HYBRID_CONNECTIVITY)]
    assert ok == all(s is None for s in specs)
    for s in specs:
        if s is not None:
            check_hearing(build_split_network(g, s))  # raises on any hearing defect


def test_hearing_check_catches_defects():
    g = path_graph(3)
    sn = build_split_network(g, find_split_spec(g, DEGREE, 1))
    listeners = [list(x) for x in sn.network.listeners]
    listeners[sn.slot(2, 0)].append(sn.slot(2, 1))  # 2_1 now hears a copy of itself
    broken = type(sn)(sn.spec, g, sn.slots, Network(sn.network.labels, tuple(map(tuple, listeners)), sn.network.names), sn.inputs)
    with pytest.raises(SplitSpecError):
        check_hearing(broken)


# ---------------------------------------------------------------- executions


@pytest.mark.parametrize(
    "g,kind,f,t",
    [
        (path_graph(3), DEGREE, 1, 0),
        (cycle(5), CONNECTIVITY, 2, 0),
        (cycle(5), DEGREE, 2, 0),
        (complete(3), HYBRID_DEGREE, 1, 1),
        (TWO_K4, HYBRID_CONNECTIVITY, 1, 1),
    ],
)
def test_demo_exhibits_failure_with_sound_projections(g, kind, f, t):
    spec = find_split_spec(g, kind, f, t)
    sn = build_split_network(g, spec)
    proto = Algorithm3(g, f, t, strict=False) if t else Algorithm1(g, f, strict=False)
    demo = derive_executions(sn, proto)
    assert demo.demonstrated
    assert len(demo.executions) == 3
    assert all(ex.sound for ex in demo.executions)
    assert demo.executions[1].violations
    assert demo.verdict().startswith(f"VERDICT {kind}: protocol")


def test_degree_demo_outputs_follow_validity():
    g = path_graph(3)
    sn = build_split_network(g, find_split_spec(g, DEGREE, 1))
    demo = derive_executions(sn, Algorithm1(g, 1, strict=False))
    e1, e2, e3 = demo.executions
    assert set(e1.trace.outputs().values()) == {0}
    assert set(e3.trace.outputs().values()) == {1}
    assert e2.trace.outputs() == {0: 0, 1: 1, 2: 1}


def test_strict_protocol_aborts_on_split_network():
    g = path_graph(3)
    sn = build_split_network(g, find_split_spec(g, DEGREE, 1))
    demo = derive_executions(sn, Algorithm1(g, 1))
    assert demo.demonstrated
    assert demo.split_outcome.startswith("aborted")


def test_written_scripts_replay_byte_identically(tmp_path):
    g = cycle(5)
    sn = build_split_network(g, find_split_spec(g, CONNECTIVITY, 2))
    proto = Algorithm1(g, 2, strict=False)
    demo = derive_executions(sn, proto)
    write_demo(demo, tmp_path)
    assert (tmp_path / "summary.txt").read_text().splitlines()[-1] == demo.verdict()
    for ex in demo.executions:
        again = replay_derived(g, Algorithm1(g, 2, strict=False), tmp_path / f"{ex.name}.script", ex.faulty, ex.inputs, ex.equivocators)
        assert again.to_text(TraceCodec()) == (tmp_path / f"{ex.name}.trace").read_text()
