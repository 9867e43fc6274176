"""Deterministic lockstep round engine with local-broadcast delivery.

A :class:`Network` is a set of *slots*. Each slot carries a *label* (the node id
its occupant believes it is and that receivers see as the sender) and the set
of slots that hear its broadcasts. On an ordinary graph slots and labels
coincide; the split networks built for the impossibility demos reuse labels
across copies.

Every slot runs a *machine*: any object with ``step(round, inbox)`` returning an
iterable of outgoing items, plus a ``decision`` attribute that is ``None`` until
the machine outputs ``(bit, round)``. An outgoing item is either a bare payload
(broadcast) or a :class:`Targeted` wrapper (only legal for registered
equivocators). Inboxes are lists of ``(sender label, payload)`` ordered by
sender label and, within one sender, in emission order.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .graph_core import Graph

BROADCAST = None


class SimulationError(RuntimeError):
    pass


class EquivocationError(SimulationError):
    pass


class RoundBudgetExceeded(SimulationError):
    def __init__(self, budget: int, trace: "ExecutionTrace"):
        super().__init__(f"round budget {budget} exhausted before every non-faulty node decided")
        self.budget = budget
        self.trace = trace


class NodeStepError(SimulationError):
    def __init__(self, node: int, round_: int, cause: BaseException):
        super().__init__(f"node {node} failed in round {round_}: {cause!r}")
        self.node = node
        self.round = round_


class ProtocolError(RuntimeError):
    """Raised by protocol machines; the engine annotates it with node and round."""

    node: int | None = None
    round: int | None = None


@dataclass(frozen=True)
class Targeted:
    target: int
    payload: Any


@dataclass(frozen=True)
class Transmission:
    round: int
    sender: int
    payload: Any
    audience: int | None
    receivers: tuple[int, ...]

    @property
    def broadcast(self) -> bool:
        return self.audience is None


@dataclass(frozen=True)
class Network:
    labels: tuple[int, ...]
    listeners: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = ()

    @classmethod
    def of_graph(cls, g: Graph) -> "Network":
        return cls(tuple(range(g.n)), g.adj, tuple(str(i) for i in range(g.n)))

    @property
    def size(self) -> int:
        return len(self.labels)

    def name(self, slot: int) -> str:
        return self.names[slot] if self.names else str(slot)


@dataclass
class ExecutionTrace:
    network: Network
    transmissions: tuple[Transmission, ...]
    decisions: dict[int, tuple[int, int]]
    faulty: frozenset[int]
    equivocators: frozenset[int]
    inputs: tuple[int, ...]
    rounds_run: int
    annotations: dict[int, list] = field(default_factory=dict, compare=False, repr=False)

    @property
    def round_count(self) -> int:
        return max((r for _, r in self.decisions.values()), default=0)

    @property
    def honest(self) -> list[int]:
        return [s for s in range(self.network.size) if s not in self.faulty]

    def outputs(self) -> dict[int, int]:
        return {s: b for s, (b, _) in self.decisions.items()}

    def to_text(self, codec=None) -> str:
        """Trace file text: report header, one line per transmission, then decisions."""
        if codec is None:
            from .protocols.payloads import TraceCodec

            codec = TraceCodec()
        body = []
        for t in self.transmissions:
            aud = "B" if t.audience is None else f"T{t.audience}"
            recv = " ".join(map(str, t.receivers))
            body.append(f"{t.round} {t.sender} {aud} {codec.encode(t.payload).hex()} {recv}".rstrip())
        for s in sorted(self.decisions):
            b, r = self.decisions[s]
            body.append(f"DECIDE {s} {b} {r}")
        return "\n".join(codec.header() + body) + "\n"

    def digest(self, codec=None) -> str:
        return hashlib.sha256(self.to_text(codec).encode()).hexdigest()

    def decide_block(self) -> str:
        return "".join(f"DECIDE {s} {b} {r}\n" for s, (b, r) in sorted(self.decisions.items()))


def deliveries_of(trace: ExecutionTrace, node: int, round_: int) -> list[tuple[int, Any]]:
    """The inbox ``node`` saw at ``round_``: everything addressed to it in ``round_ - 1``."""
    if not 0 <= node < trace.network.size:
        raise ValueError(f"node {node} is not in the network")
    if not 0 <= round_ <= trace.rounds_run + 1:
        raise ValueError(f"round {round_} is outside the trace (0..{trace.rounds_run + 1})")
    got = [t for t in trace.transmissions if t.round == round_ - 1 and node in t.receivers]
    labels = trace.network.labels
    got.sort(key=lambda t: labels[t.sender])  # stable: keeps per-sender emission order
    return [(labels[t.sender], t.payload) for t in got]


def default_budget(n: int, phases: int = 1) -> int:
    return 4 * n * max(1, phases)


def run_network(
    net: Network,
    machines: list,
    faulty: Iterable[int] = (),
    equivocators: Iterable[int] = (),
    inputs: Iterable[int] = (),
    max_rounds: int | None = None,
) -> ExecutionTrace:
    """Run one machine per slot in lockstep until every non-faulty slot has decided."""
    size = net.size
    faulty = frozenset(faulty)
    equivocators = frozenset(equivocators)
    if not equivocators <= faulty:
        raise ValueError("equivocating nodes must be faulty")
    if len(machines) != size:
        raise ValueError("need exactly one machine per slot")
    if max_rounds is None:
        max_rounds = default_budget(size)
    if max_rounds <= 0:
        raise ValueError("max_rounds must be positive")
    honest = [s for s in range(size) if s not in faulty]
    labels = net.labels
    listeners = net.listeners
    listener_sets = [frozenset(x) for x in listeners]
    order = sorted(range(size), key=lambda s: labels[s])
    log: list[Transmission] = []
    inbox: list[list] = [[] for _ in range(size)]
    annotations: dict[int, list] = {}
    r = 0
    while True:
        nxt: list[list] = [[] for _ in range(size)]
        for s in order:
            m = machines[s]
            try:
                out = m.step(r, inbox[s])
            except ProtocolError as e:
                if e.node is None:
                    e.node, e.round = s, r
                raise
            except Exception as e:
                raise NodeStepError(s, r, e) from e
            if not out:
                continue
            lab = labels[s]
            for item in out:
                if type(item) is Targeted:
                    if s not in equivocators:
                        raise EquivocationError(f"slot {s} sent a targeted message but is not an equivocator")
                    if item.target not in listener_sets[s]:
                        raise EquivocationError(f"slot {s} targeted {item.target}, which cannot hear it")
                    log.append(Transmission(r, s, item.payload, item.target, (item.target,)))
                    nxt[item.target].append((lab, item.payload))
                else:
                    recv = listeners[s]
                    log.append(Transmission(r, s, item, None, recv))
                    entry = (lab, item)
                    for w in recv:
                        nxt[w].append(entry)
        # receivers see senders in label order; appends above already follow ``order``
        inbox = nxt
        if all(machines[s].decision is not None for s in honest):
            break
        if r >= max_rounds:
            trace = _finish(net, log, machines, faulty, equivocators, inputs, r, annotations)
            raise RoundBudgetExceeded(max_rounds, trace)
        r += 1
    return _finish(net, log, machines, faulty, equivocators, inputs, r, annotations)


def _finish(net, log, machines, faulty, equivocators, inputs, r, annotations):
    decisions = {}
    for s, m in enumerate(machines):
        if s not in faulty and m.decision is not None:
            decisions[s] = tuple(m.decision)
        notes = getattr(m, "snapshots", None)
        if notes is not None and s not in faulty:
            annotations[s] = notes
    return ExecutionTrace(net, tuple(log), decisions, faulty, frozenset(equivocators), tuple(inputs), r, annotations)


def run_synchronous(
    g: Graph | Network,
    protocol,
    adversary=None,
    faulty: Iterable[int] = (),
    inputs: Mapping[int, int] | Iterable[int] = (),
    max_rounds: int | None = None,
    equivocators: Iterable[int] = (),
) -> ExecutionTrace:
    """Simulate ``protocol`` on ``g`` with ``faulty`` nodes driven by ``adversary``.

    ``protocol`` is either an object with ``node(v, bit)`` (and optionally
    ``phase_count``) or a plain factory ``(v, bit) -> machine``. ``adversary``
    is ``None`` (faulty nodes stay silent), an object with
    ``machine(protocol, v, bit, equivocating)``, or a mapping from node to such
    an object.
    """
    net = g if isinstance(g, Network) else Network.of_graph(g)
    size = net.size
    if isinstance(inputs, Mapping):
        missing = [s for s in range(size) if s not in inputs]
        if missing:
            raise ValueError(f"inputs missing for nodes {missing}")
        bits = tuple(int(inputs[s]) for s in range(size))
    else:
        bits = tuple(int(b) for b in inputs)
        if len(bits) != size:
            raise ValueError(f"need {size} inputs, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("inputs must be bits")
    faulty = frozenset(faulty)
    equivocators = frozenset(equivocators)
    declared = getattr(protocol, "f", None)
    if declared is not None and len(faulty) > declared:
        raise ValueError(f"{len(faulty)} faulty nodes exceed the declared bound f={declared}")
    make = protocol.node if hasattr(protocol, "node") else protocol
    machines = []
    for s in range(size):
        if s in faulty:
            strat = adversary.get(s) if isinstance(adversary, Mapping) else adversary
            machines.append(_Silent() if strat is None else strat.machine(protocol, s, bits[s], s in equivocators))
        else:
            machines.append(make(s, bits[s]))
    if max_rounds is None:
        max_rounds = default_budget(size, getattr(protocol, "phase_count", 1))
    return run_network(net, machines, faulty, equivocators, bits, max_rounds)


class _Silent:
    decision = None

    def step(self, r, inbox):
        return ()
