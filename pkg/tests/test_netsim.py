from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lbconsensus.adversaries import parse_strategy
from lbconsensus.harness import complete, cycle
from lbconsensus.netsim import (
    EquivocationError,
    NodeStepError,
    ProtocolError,
    RoundBudgetExceeded,
    Targeted,
    default_budget,
    deliveries_of,
    run_synchronous,
)
from lbconsensus.protocols import Algorithm1, run_algorithm1

GOLDEN = Path(__file__).parent / "golden"


class Trivial:
    def __init__(self, v, bit):
        self.decision = (bit, 0)

    def step(self, r, inbox):
        return ()


class Echo:
    """Broadcast the input, then output what the lower-numbered cycle neighbour sent."""

    def __init__(self, v, bit, n=5):
        self.v, self.bit, self.n = v, bit, n
        self.decision = None

    def step(self, r, inbox):
        if r == 0:
            return (self.bit,)
        left = (self.v - 1) % self.n
        self.decision = (dict(inbox)[left], r)
        return ()


class Never:
    decision = None

    def __init__(self, v, bit):
        pass

    def step(self, r, inbox):
        return ("ping",)


class Boom:
    decision = None

    def __init__(self, v, bit):
        self.v = v

    def step(self, r, inbox):
        if r == 2 and self.v == 3:
            raise ProtocolError("bad state")
        if r == 2 and self.v == 4:
            raise KeyError("oops")
        return ()


class Shouter:
    """Adversary that sends one targeted message to node 3 at round 0."""

    def machine(self, protocol, v, bit, equivocating=False):
        return self

    decision = None

    def step(self, r, inbox):
        return (Targeted(3, "secret"),) if r == 0 else ()


def test_trivial_protocol_decides_at_round_zero(c5):
    tr = run_synchronous(c5, Trivial, inputs=[0] * 5)
    assert tr.outputs() == {v: 0 for v in range(5)}
    assert tr.round_count == 0
    assert tr.transmissions == ()


def test_echo_outputs_left_neighbour(c5):
    inputs = [1, 0, 0, 1, 1]
    tr = run_synchronous(c5, Echo, inputs=inputs)
    assert tr.outputs() == {v: inputs[(v - 1) % 5] for v in range(5)}
    assert deliveries_of(tr, 0, 0) == []
    assert deliveries_of(tr, 0, 1) == [(1, 0), (4, 1)]


def test_inputs_accept_mapping_and_validate(c5):
    tr = run_synchronous(c5, Trivial, inputs={v: 1 for v in range(5)})
    assert set(tr.outputs().values()) == {1}
    with pytest.raises(ValueError):
        run_synchronous(c5, Trivial, inputs={0: 1})
    with pytest.raises(ValueError):
        run_synchronous(c5, Trivial, inputs=[0, 1, 2, 0, 0])


def test_broadcast_receivers_are_exact_neighbourhoods(fig):
    tr = run_algorithm1(fig, 2, [0, 1] * 4, parse_strategy("tamper:all"), {0, 5})
    for t in tr.transmissions:
        assert t.audience is None
        assert t.receivers == fig.neighbors(t.sender)


def test_targeted_send_requires_registration(c5):
    with pytest.raises(EquivocationError):
        run_synchronous(c5, Trivial, Shouter(), {2}, [0] * 5)
    tr = run_synchronous(c5, Trivial, Shouter(), {2}, [0] * 5, equivocators={2})
    (t,) = tr.transmissions
    assert (t.audience, t.receivers) == (3, (3,))
    assert deliveries_of(tr, 3, 1) == [(2, "secret")]
    assert deliveries_of(tr, 1, 1) == []


def test_targeted_send_must_reach_a_neighbour(c5):
    class Far(Shouter):
        def step(self, r, inbox):
            return (Targeted(4, "x"),) if r == 0 else ()

    with pytest.raises(EquivocationError):
        run_synchronous(c5, Trivial, Far(), {2}, [0] * 5, equivocators={2})


def test_equivocators_must_be_faulty(c5):
    with pytest.raises(ValueError):
        run_synchronous(c5, Trivial, None, {1}, [0] * 5, equivocators={2})


def test_budget_overflow_is_an_error(c5):
    with pytest.raises(RoundBudgetExceeded) as e:
        run_synchronous(c5, Never, inputs=[0] * 5, max_rounds=7)
    assert e.value.trace.rounds_run == 7
    assert default_budget(5, 6) == 120


def test_step_errors_carry_node_and_round(c5):
    with pytest.raises(ProtocolError) as e:
        run_synchronous(c5, Boom, inputs=[0] * 5, max_rounds=9)
    assert (e.value.node, e.value.round) == (3, 2)

    class OnlyFour(Boom):
        def step(self, r, inbox):
            return super().step(r, inbox) if self.v == 4 else ()

    with pytest.raises(NodeStepError) as e:
        run_synchronous(c5, OnlyFour, inputs=[0] * 5, max_rounds=9)
    assert (e.value.node, e.value.round) == (4, 2)


def test_deliveries_of_bounds(c5):
    tr = run_synchronous(c5, Echo, inputs=[0] * 5)
    with pytest.raises(ValueError):
        deliveries_of(tr, 5, 1)
    with pytest.raises(ValueError):
        deliveries_of(tr, 0, 99)


def test_declared_fault_bound_enforced(c5):
    with pytest.raises(ValueError):
        run_algorithm1(c5, 1, [0] * 5, None, {1, 2})


def test_silent_fault_golden_trace(c5):
    tr = run_algorithm1(c5, 1, [0] * 5, None, {2})
    assert tr.to_text() == (GOLDEN / "c5_alg1_node2_silent.trace").read_text()
    # the silent node's neighbours relay the default value along the one-hop path
    first_relays = {t.sender: t.payload for t in tr.transmissions if t.round == 1}
    assert (1, (2,)) in first_relays[1] and (1, (2,)) in first_relays[3]


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.integers(0, 1), min_size=5, max_size=5),
    st.sampled_from(["silent", "flip", "constant:0", "tamper:all", "garbage"]),
    st.integers(0, 4),
)
def test_runs_are_deterministic(inputs, strategy, bad):
    g = cycle(5)
    a = run_algorithm1(g, 1, inputs, parse_strategy(strategy), {bad}, protocol=Algorithm1(g, 1))
    b = run_algorithm1(g, 1, inputs, parse_strategy(strategy), {bad}, protocol=Algorithm1(g, 1))
    assert a.to_text() == b.to_text()


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=3, max_size=3), st.integers(0, 2))
def test_equivocation_only_from_registered_nodes(inputs, bad):
    from lbconsensus.protocols import run_algorithm3

    g = complete(3)
    tr = run_algorithm3(g, 1, 1, inputs, parse_strategy("equivocate"), {bad}, {bad}, strict=False)
    for t in tr.transmissions:
        if t.audience is not None:
            assert t.sender in tr.equivocators
