"""Split networks and the three executions projected from one run on them.

A split network duplicates some parts of a partitioned graph into copies 0
and 1 and wires them so that, for every edge ``uv`` of the original graph,
each copy of ``u`` hears exactly one copy of ``v``. Running a protocol on the
split network (every copy runs the honest machine of its label) yields one
execution from which three executions on the original graph are carved out:
in each, some parts are faulty and replay what their copies sent, while the
remaining nodes behave exactly like the copies that model them.

Four constructions are supported:

==================== ========================= ===========================
kind                 parts                     duplicated
==================== ========================= ===========================
degree               z, F1, F2, W              W
connectivity         A, B, C1, C2, C3          A, B
hybrid-degree        S, F1, F2, R, T, W        T, W
hybrid-connectivity  A, B, C1, C2, C3, R, T    A, B, R, T
==================== ========================= ===========================

For a protocol that really solved consensus, the first and third executions
force opposite outputs by validity and the second then breaks agreement.
Running our protocols through the construction on a graph that fails the
conditions therefore shows a concrete failure (or an abort), which is the
evidence this module produces. It proves nothing about other protocols.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain, combinations
from math import ceil
from pathlib import Path as FsPath

from .adversaries import Scripted, write_script
from .graph_core import Graph, connected, neighbors_of_set, subsets_upto
from .netsim import (
    ExecutionTrace,
    Network,
    ProtocolError,
    RoundBudgetExceeded,
    default_budget,
    run_network,
    run_synchronous,
)
from .protocols.payloads import TraceCodec

DEGREE = "degree"
CONNECTIVITY = "connectivity"
HYBRID_DEGREE = "hybrid-degree"
HYBRID_CONNECTIVITY = "hybrid-connectivity"
CONSTRUCTIONS = (DEGREE, CONNECTIVITY, HYBRID_DEGREE, HYBRID_CONNECTIVITY)


class SplitSpecError(ValueError):
    pass


class ProjectionError(RuntimeError):
    """A derived execution does not reproduce the split-network behaviour it models."""


@dataclass(frozen=True)
class Layout:
    parts: tuple[str, ...]
    duplicated: frozenset
    # (receiver part, receiver copy) -> {duplicated sender part: copy heard}
    hears: dict
    # (part, copy) -> input bit on the split network
    inputs: dict
    # per execution: (faulty parts, equivocating parts, {honest part: modelling copy})
    executions: tuple


def _layout_degree() -> Layout:
    hears = {
        ("z", 0): {},
        ("F1", 0): {"W": 0},
        ("F2", 0): {"W": 1},
        ("W", 0): {"W": 0},
        ("W", 1): {"W": 1},
    }
    inputs = {("z", 0): 0, ("F1", 0): 0, ("F2", 0): 1, ("W", 0): 0, ("W", 1): 1}
    execs = (
        ({"F2"}, set(), {"z": 0, "F1": 0, "W": 0}),
        ({"F1"}, set(), {"z": 0, "F2": 0, "W": 1}),
        ({"F1", "z"}, set(), {"F2": 0, "W": 1}),
    )
    return Layout(("z", "F1", "F2", "W"), frozenset({"W"}), hears, inputs, execs)


def _layout_connectivity() -> Layout:
    hears = {
        ("C1", 0): {"A": 0, "B": 0},
        ("C2", 0): {"A": 0, "B": 1},
        ("C3", 0): {"A": 1, "B": 1},
        ("A", 0): {"A": 0},
        ("A", 1): {"A": 1},
        ("B", 0): {"B": 0},
        ("B", 1): {"B": 1},
    }
    inputs = {("A", 0): 0, ("B", 0): 0, ("C1", 0): 0, ("A", 1): 1, ("B", 1): 1, ("C2", 0): 1, ("C3", 0): 1}
    execs = (
        ({"C2", "C3"}, set(), {"A": 0, "B": 0, "C1": 0}),
        ({"C1", "C3"}, set(), {"A": 0, "B": 1, "C2": 0}),
        ({"C1", "C2"}, set(), {"A": 1, "B": 1, "C3": 0}),
    )
    return Layout(("A", "B", "C1", "C2", "C3"), frozenset({"A", "B"}), hears, inputs, execs)


def _layout_hybrid_degree() -> Layout:
    hears = {
        ("S", 0): {"T": 0},
        ("F1", 0): {"T": 0, "W": 0},
        ("F2", 0): {"T": 1, "W": 1},
        ("R", 0): {"T": 1, "W": 1},
        ("T", 0): {"T": 0, "W": 0},
        ("T", 1): {"T": 1, "W": 1},
        ("W", 0): {"T": 0, "W": 0},
        ("W", 1): {"T": 1, "W": 1},
    }
    inputs = {("S", 0): 0, ("F1", 0): 0, ("T", 0): 0, ("W", 0): 0, ("F2", 0): 1, ("R", 0): 1, ("T", 1): 1, ("W", 1): 1}
    execs = (
        ({"F2", "R"}, set(), {"S": 0, "F1": 0, "T": 0, "W": 0}),
        ({"F1", "T"}, {"T"}, {"S": 0, "F2": 0, "R": 0, "W": 1}),
        ({"F1", "S"}, set(), {"R": 0, "F2": 0, "T": 1, "W": 1}),
    )
    return Layout(("S", "F1", "F2", "R", "T", "W"), frozenset({"T", "W"}), hears, inputs, execs)


def _layout_hybrid_connectivity() -> Layout:
    hears = {
        ("C1", 0): {"A": 0, "B": 0, "R": 0, "T": 0},
        ("C2", 0): {"A": 0, "B": 1, "R": 1, "T": 1},
        ("C3", 0): {"A": 1, "B": 1, "R": 1, "T": 0},
        ("A", 0): {"A": 0, "R": 0, "T": 1},
        ("A", 1): {"A": 1, "R": 1, "T": 0},
        ("B", 0): {"B": 0, "R": 0, "T": 0},
        ("B", 1): {"B": 1, "R": 1, "T": 1},
        ("R", 0): {"A": 0, "B": 0, "R": 0, "T": 0},
        ("R", 1): {"A": 1, "B": 1, "R": 1, "T": 1},
        ("T", 0): {"A": 1, "B": 0, "R": 0, "T": 0},
        ("T", 1): {"A": 0, "B": 1, "R": 1, "T": 1},
    }
    zero = {("A", 0), ("B", 0), ("R", 0), ("T", 0), ("C1", 0)}
    inputs = {k: int(k not in zero) for k in hears}
    execs = (
        ({"C2", "C3", "T"}, {"T"}, {"A": 0, "B": 0, "R": 0, "C1": 0}),
        ({"C1", "C3", "R"}, {"R"}, {"A": 0, "B": 1, "T": 1, "C2": 0}),
        ({"C1", "C2", "T"}, {"T"}, {"A": 1, "B": 1, "R": 1, "C3": 0}),
    )
    return Layout(("A", "B", "C1", "C2", "C3", "R", "T"), frozenset({"A", "B", "R", "T"}), hears, inputs, execs)


LAYOUTS = {
    DEGREE: _layout_degree(),
    CONNECTIVITY: _layout_connectivity(),
    HYBRID_DEGREE: _layout_hybrid_degree(),
    HYBRID_CONNECTIVITY: _layout_hybrid_connectivity(),
}


@dataclass(frozen=True)
class SplitSpec:
    """A construction kind plus the partition of the graph's nodes into its parts."""

    kind: str
    parts: tuple  # sorted (part name, frozenset of nodes)
    f: int
    t: int = 0

    @classmethod
    def of(cls, kind: str, f: int, t: int = 0, **parts) -> "SplitSpec":
        if kind not in LAYOUTS:
            raise SplitSpecError(f"unknown construction {kind!r}")
        names = LAYOUTS[kind].parts
        unknown = set(parts) - set(names)
        if unknown:
            raise SplitSpecError(f"{kind} has no parts {sorted(unknown)}")
        full = {p: frozenset(parts.get(p, ())) for p in names}
        return cls(kind, tuple(sorted(full.items())), f, t)

    def part(self, name: str) -> frozenset:
        return dict(self.parts)[name]

    def part_of(self) -> dict[int, str]:
        return {u: p for p, nodes in self.parts for u in nodes}

    def describe(self) -> str:
        return " ".join(f"{p}={{{','.join(map(str, sorted(s)))}}}" for p, s in self.parts)

    def validate(self, g: Graph) -> None:
        """Raise :class:`SplitSpecError` unless the partition meets the construction's bounds."""
        f, t = self.f, self.t
        seen: set[int] = set()
        for _, nodes in self.parts:
            g.check_nodes(nodes)
            if seen & nodes:
                raise SplitSpecError("parts overlap")
            seen |= nodes
        if seen != set(range(g.n)):
            raise SplitSpecError(f"parts miss nodes {sorted(set(range(g.n)) - seen)}")
        P = self.part
        need = []
        if self.kind == DEGREE:
            if len(P("z")) != 1:
                raise SplitSpecError("z must be a single node")
            (z,) = P("z")
            if P("F1") | P("F2") != frozenset(g.neighbors(z)):
                raise SplitSpecError("F1 and F2 must partition the neighbourhood of z")
            need = [("F1", len(P("F1")) < f), ("F2", 0 < len(P("F2")) <= f)]
        elif self.kind == CONNECTIVITY:
            need = [
                ("A", bool(P("A"))),
                ("B", bool(P("B"))),
                ("C1", len(P("C1")) <= f // 2),
                ("C2", len(P("C2")) <= f // 2),
                ("C3", len(P("C3")) <= ceil(f / 2)),
            ]
            _require_separated(g, P("A"), P("B"))
        elif self.kind == HYBRID_DEGREE:
            phi = f - t
            S = P("S")
            N = P("F1") | P("F2") | P("R") | P("T")
            if N != neighbors_of_set(g, S):
                raise SplitSpecError("F1, F2, R and T must partition the neighbourhood of S")
            need = [
                ("S", 0 < len(S) <= t),
                ("F1", len(P("F1")) <= phi),
                ("F2", len(P("F2")) <= phi),
                ("R", 0 < len(P("R")) <= t),
                ("T", len(P("T")) <= t),
            ]
        else:
            phi = f - t
            need = [
                ("A", bool(P("A"))),
                ("B", bool(P("B"))),
                ("C1", len(P("C1")) <= phi // 2),
                ("C2", len(P("C2")) <= phi // 2),
                ("C3", len(P("C3")) <= ceil(phi / 2)),
                ("R", len(P("R")) <= t),
                ("T", len(P("T")) <= t),
            ]
            _require_separated(g, P("A"), P("B"))
        bad = [name for name, ok in need if not ok]
        if bad:
            raise SplitSpecError(f"{self.kind} size bounds fail for {', '.join(bad)} (f={f}, t={t})")


def _require_separated(g: Graph, A, B) -> None:
    if any(g.has_edge(a, b) for a in A for b in B):
        raise SplitSpecError("A and B must not be adjacent")


def find_split_spec(g: Graph, kind: str, f: int, t: int = 0) -> SplitSpec | None:
    """First partition (in a fixed enumeration order) satisfying ``kind``'s bounds, else None."""
    for spec in _candidates(g, kind, f, t):
        try:
            spec.validate(g)
        except SplitSpecError:
            continue
        return spec
    return None


def _candidates(g: Graph, kind: str, f: int, t: int):
    if kind == DEGREE:
        if f <= 0:
            return
        for z in range(g.n):
            nb = list(g.neighbors(z))
            if not nb or len(nb) >= 2 * f:
                continue
            rest = [w for w in range(g.n) if w != z and w not in nb]
            for k in range(min(f - 1, len(nb) - 1), -1, -1):
                for F1 in combinations(nb, k):
                    F2 = [w for w in nb if w not in F1]
                    yield SplitSpec.of(kind, f, t, z={z}, F1=F1, F2=F2, W=rest)
    elif kind == HYBRID_DEGREE:
        if t <= 0:
            return
        phi = f - t
        for S in subsets_upto(range(g.n), t):
            N = sorted(neighbors_of_set(g, S))
            if not N or len(N) > 2 * f:
                continue
            rest = [w for w in range(g.n) if w not in S and w not in N]
            sizes = (("R", t), ("T", t), ("F1", phi), ("F2", phi))
            parts, i = {}, 0
            for name, cap in sizes:
                parts[name] = N[i : i + cap]
                i += cap
            yield SplitSpec.of(kind, f, t, S=S, W=rest, **parts)
    else:
        phi = f - t if kind == HYBRID_CONNECTIVITY else f
        cap = 3 * phi // 2 + (2 * t if kind == HYBRID_CONNECTIVITY else 0)
        for C in chain([()], subsets_upto(range(g.n), min(cap, g.n - 2))):
            if connected(g, C):
                continue
            A = _component(g, C)
            B = [u for u in range(g.n) if u not in C and u not in A]
            if kind == CONNECTIVITY:
                sizes = (("C1", f // 2), ("C2", f // 2), ("C3", ceil(f / 2)))
            else:
                sizes = (("C1", phi // 2), ("C2", phi // 2), ("C3", ceil(phi / 2)), ("R", t), ("T", t))
            parts, i = {}, 0
            for name, k in sizes:
                parts[name] = C[i : i + k]
                i += k
            if i < len(C):
                continue
            yield SplitSpec.of(kind, f, t, A=A, B=B, **parts)


def _component(g: Graph, removed) -> list[int]:
    removed = set(removed)
    start = min(u for u in range(g.n) if u not in removed)
    seen, stack = {start}, [start]
    while stack:
        u = stack.pop()
        for w in g.neighbors(u):
            if w not in removed and w not in seen:
                seen.add(w)
                stack.append(w)
    return sorted(seen)


@dataclass(frozen=True)
class SplitNetwork:
    """Slots are ``(node, copy)`` pairs; ``network`` is the engine view with labels = node ids."""

    spec: SplitSpec
    graph: Graph
    slots: tuple[tuple[int, int], ...]
    network: Network
    inputs: tuple[int, ...]

    def slot(self, node: int, copy: int = 0) -> int:
        return self.slots.index((node, copy))

    def heard_copy(self, receiver: tuple[int, int], sender: int) -> int:
        """Which copy of ``sender`` the slot ``receiver`` hears (0 for single-copy parts)."""
        lay = LAYOUTS[self.spec.kind]
        part_of = self.spec.part_of()
        rp, sp = part_of[receiver[0]], part_of[sender]
        if sp not in lay.duplicated:
            return 0
        table = lay.hears[(rp, receiver[1])]
        if sp not in table:
            raise SplitSpecError(f"no hearing rule for {rp}{receiver[1]} <- {sp} (edge {receiver[0]}-{sender})")
        return table[sp]

    def directed_edges(self) -> list[tuple[int, int]]:
        """Slot pairs ``(a, b)`` where b hears a but a does not hear b."""
        hear = [set(x) for x in self.network.listeners]
        return [(a, b) for a in range(len(self.slots)) for b in hear[a] if a not in hear[b]]

    def undirected_edges(self) -> list[tuple[int, int]]:
        hear = [set(x) for x in self.network.listeners]
        return [(a, b) for a in range(len(self.slots)) for b in hear[a] if a < b and a in hear[b]]


def build_split_network(g: Graph, spec: SplitSpec) -> SplitNetwork:
    spec.validate(g)
    lay = LAYOUTS[spec.kind]
    part_of = spec.part_of()
    slots = []
    for u in range(g.n):
        copies = (0, 1) if part_of[u] in lay.duplicated else (0,)
        slots.extend((u, c) for c in copies)
    index = {s: i for i, s in enumerate(slots)}
    stub = SplitNetwork(spec, g, tuple(slots), Network((), ()), ())
    listeners: list[list[int]] = [[] for _ in slots]
    for i, (u, c) in enumerate(slots):
        for w in g.neighbors(u):
            listeners[index[(w, stub.heard_copy((u, c), w))]].append(i)
    names = tuple(f"{u}" if (u, 1) not in index else f"{u}_{c}" for u, c in slots)
    net = Network(tuple(u for u, _ in slots), tuple(tuple(sorted(x)) for x in listeners), names)
    inputs = tuple(lay.inputs[(part_of[u], c)] for u, c in slots)
    sn = SplitNetwork(spec, g, tuple(slots), net, inputs)
    check_hearing(sn)
    return sn


def check_hearing(sn: SplitNetwork) -> None:
    """Every copy of u hears exactly one copy of each G-neighbour, nothing else, and copies never hear each other."""
    g, slots, net = sn.graph, sn.slots, sn.network
    heard_by: list[list[int]] = [[] for _ in slots]
    for a, recv in enumerate(net.listeners):
        for b in recv:
            heard_by[b].append(a)
    for b, (v, c) in enumerate(slots):
        labels = [slots[a][0] for a in heard_by[b]]
        if sorted(labels) != sorted(g.neighbors(v)):
            raise SplitSpecError(f"slot {net.name(b)} hears {sorted(labels)}, expected one copy each of {list(g.neighbors(v))}")
        if any(slots[a][0] == v for a in heard_by[b]):
            raise SplitSpecError(f"slot {net.name(b)} hears another copy of itself")


@dataclass
class DerivedExecution:
    name: str
    faulty: frozenset
    equivocators: frozenset
    inputs: tuple[int, ...]
    model: dict  # honest node -> slot of the split network that it mirrors
    table: dict  # scripted behaviour of the faulty nodes
    trace: ExecutionTrace | None = None
    outcome: str = ""
    sound: bool | None = None
    violations: list[str] = field(default_factory=list)


@dataclass
class NecessityDemo:
    split: SplitNetwork
    protocol_name: str
    split_trace: ExecutionTrace | None
    split_outcome: str
    executions: list[DerivedExecution]

    @property
    def demonstrated(self) -> bool:
        """True when the run shows the protocol failing (violation, abort or no termination)."""
        if self.split_outcome != "decided":
            return True
        return any(e.violations or e.outcome != "decided" for e in self.executions)

    def verdict(self) -> str:
        if self.split_outcome != "decided":
            return f"VERDICT {self.split.spec.kind}: protocol {self.protocol_name} {self.split_outcome} on the split network"
        bad = [f"{e.name}: {'; '.join(e.violations) or e.outcome}" for e in self.executions if e.violations or e.outcome != "decided"]
        if bad:
            return f"VERDICT {self.split.spec.kind}: protocol {self.protocol_name} fails ({' | '.join(bad)})"
        return f"VERDICT {self.split.spec.kind}: no failure exhibited by protocol {self.protocol_name}"


def _run_split(sn: SplitNetwork, protocol):
    machines = [protocol.node(u, b) for (u, _), b in zip(sn.slots, sn.inputs)]
    budget = default_budget(len(sn.slots), getattr(protocol, "phase_count", 1))
    try:
        return run_network(sn.network, machines, (), (), sn.inputs, budget), "decided"
    except RoundBudgetExceeded as e:
        return e.trace, "exhausted the round budget"
    except ProtocolError as e:
        return None, f"aborted ({type(e).__name__}: {e})"


def _by_slot_round(trace: ExecutionTrace) -> dict:
    rows: dict = {}
    for t in trace.transmissions:
        rows.setdefault(t.sender, {}).setdefault(t.round, []).append(t.payload)
    return rows


def project(sn: SplitNetwork, split_trace: ExecutionTrace, index: int) -> DerivedExecution:
    """Carve execution ``index`` (0, 1 or 2) out of the split-network run."""
    lay = LAYOUTS[sn.spec.kind]
    faulty_parts, eq_parts, model_parts = lay.executions[index]
    g = sn.graph
    part_of = sn.spec.part_of()
    faulty = frozenset(u for u in range(g.n) if part_of[u] in faulty_parts)
    equivocators = frozenset(u for u in faulty if part_of[u] in eq_parts)
    model = {u: sn.slot(u, model_parts[part_of[u]]) for u in range(g.n) if u not in faulty}
    for v, s in model.items():
        for w in g.neighbors(v):
            if w in model and sn.heard_copy(sn.slots[s], w) != sn.slots[model[w]][1]:
                raise ProjectionError(f"E{index + 1}: {v} would hear the wrong copy of {w}")
    rows = _by_slot_round(split_trace)
    table: dict = {}
    for y in sorted(faulty):
        heard = {x: sn.heard_copy(sn.slots[model[x]], y) for x in g.neighbors(y) if x in model}
        rounds: dict = {}
        if y in equivocators:
            for x, c in sorted(heard.items()):
                for r, payloads in rows.get(sn.slot(y, c), {}).items():
                    rounds.setdefault(r, []).extend((x, p) for p in payloads)
        else:
            copies = set(heard.values()) or {0}
            if len(copies) > 1:
                raise ProjectionError(f"E{index + 1}: non-equivocating {y} must be heard as one copy")
            (c,) = copies
            for r, payloads in rows.get(sn.slot(y, c), {}).items():
                rounds[r] = [(None, p) for p in payloads]
        table[y] = {r: rounds[r] for r in sorted(rounds)}
    inputs = tuple(sn.inputs[model[u]] if u in model else _faulty_input(sn, u, part_of) for u in range(g.n))
    return DerivedExecution(f"E{index + 1}", faulty, equivocators, inputs, model, table)


def _faulty_input(sn, u, part_of) -> int:
    return LAYOUTS[sn.spec.kind].inputs[(part_of[u], 0)]


def check_projection(sn: SplitNetwork, split_trace: ExecutionTrace, ex: DerivedExecution) -> bool:
    """Honest nodes of ``ex`` sent byte-identical payloads, round for round, to the slots modelling them."""
    codec = TraceCodec()
    rows = _by_slot_round(split_trace)
    mine = _by_slot_round(ex.trace)
    last = ex.trace.rounds_run
    for v, s in ex.model.items():
        want = {r: [codec.encode(p) for p in ps] for r, ps in rows.get(s, {}).items() if r <= last}
        got = {r: [codec.encode(p) for p in ps] for r, ps in mine.get(v, {}).items()}
        if want != got:
            return False
        if v in ex.trace.decisions and split_trace.decisions.get(s) != ex.trace.decisions[v]:
            return False
    return True


def judge(ex: DerivedExecution) -> list[str]:
    """Agreement and validity violations among the honest nodes of a finished execution."""
    tr = ex.trace
    honest = sorted(ex.model)
    outs = {v: tr.decisions[v][0] for v in honest if v in tr.decisions}
    bad = []
    if len(set(outs.values())) > 1:
        zeros = [v for v, b in outs.items() if b == 0]
        ones = [v for v, b in outs.items() if b == 1]
        bad.append(f"agreement violated: {zeros} output 0, {ones} output 1")
    allowed = {ex.inputs[v] for v in honest}
    wrong = sorted(v for v, b in outs.items() if b not in allowed)
    if wrong:
        bad.append(f"validity violated: {wrong} output {outs[wrong[0]]}, honest inputs are {sorted(allowed)}")
    return bad


def derive_executions(sn: SplitNetwork, protocol) -> NecessityDemo:
    """Run ``protocol`` on the split network, then replay the three projected executions on the graph."""
    name = getattr(protocol, "name", type(protocol).__name__)
    split_trace, outcome = _run_split(sn, protocol)
    if split_trace is None:
        return NecessityDemo(sn, name, None, outcome, [])
    execs = []
    for i in range(3):
        ex = project(sn, split_trace, i)
        ex.trace, ex.outcome = _replay_execution(sn.graph, protocol, ex, split_trace.rounds_run)
        if ex.trace is not None:
            ex.sound = check_projection(sn, split_trace, ex)
            if not ex.sound:
                raise ProjectionError(f"{ex.name} diverged from the split-network run")
            ex.violations = judge(ex) if ex.outcome == "decided" else []
        execs.append(ex)
    return NecessityDemo(sn, name, split_trace, outcome, execs)


def _replay_execution(g, protocol, ex: DerivedExecution, rounds: int):
    adversary = Scripted(f"split:{ex.name}", table=ex.table)
    budget = max(rounds, default_budget(g.n, getattr(protocol, "phase_count", 1)))
    try:
        tr = run_synchronous(g, protocol, adversary, ex.faulty, ex.inputs, budget, ex.equivocators)
        return tr, "decided"
    except RoundBudgetExceeded as e:
        return e.trace, "exhausted the round budget"
    except ProtocolError as e:
        return None, f"aborted ({type(e).__name__}: {e})"


def replay_derived(g: Graph, protocol, script_path, faulty, inputs, equivocators=()) -> ExecutionTrace:
    """Rerun one derived execution from its script file."""
    from .adversaries import read_script

    table = read_script(script_path)
    adversary = Scripted(f"script:{script_path}", table=table)
    return run_synchronous(g, protocol, adversary, faulty, inputs, None, equivocators)


def write_demo(demo: NecessityDemo, out_dir) -> list[FsPath]:
    """Write per-execution script and trace files plus a summary; returns the paths written."""
    out = FsPath(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    lines = [
        f"construction {demo.split.spec.kind}",
        f"partition {demo.split.spec.describe()}",
        f"protocol {demo.protocol_name}",
        f"split-network {demo.split_outcome}",
    ]
    if demo.split_trace is not None:
        p = out / "split.trace"
        p.write_text(demo.split_trace.to_text())
        written.append(p)
    for ex in demo.executions:
        sp = out / f"{ex.name}.script"
        write_script(sp, ex.table)
        written.append(sp)
        if ex.trace is not None:
            tp = out / f"{ex.name}.trace"
            tp.write_text(ex.trace.to_text())
            written.append(tp)
        outs = " ".join(f"{v}:{ex.trace.decisions[v][0]}" for v in sorted(ex.model) if ex.trace and v in ex.trace.decisions)
        lines.append(
            f"{ex.name} faulty={_fmt(ex.faulty)} equivocating={_fmt(ex.equivocators)} "
            f"inputs={''.join(map(str, ex.inputs))} outcome={ex.outcome.replace(' ', '-')} outputs={outs or '-'}"
        )
        for msg in ex.violations:
            lines.append(f"{ex.name} {msg}")
    lines.append(demo.verdict())
    s = out / "summary.txt"
    s.write_text("\n".join(lines) + "\n")
    written.append(s)
    return written


def _fmt(nodes) -> str:
    return ",".join(map(str, sorted(nodes))) or "-"
