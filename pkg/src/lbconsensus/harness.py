"""Graph generators, sweeps over inputs, fault placements and strategies, and replay keys.

A sweep runs the product ``fault placements x strategies x input vectors`` in
that nesting order and records one line per run. Every line carries a replay
key: a self-contained description of the run (graph edges included) sealed
with a checksum, so :func:`replay` can rebuild the exact execution.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from itertools import combinations, product
from pathlib import Path as FsPath

from .adversaries import parse_strategy
from .graph_core import Graph, GraphError, read_graph, vertex_connectivity
from .invariants import check_phase_invariants
from .netsim import ExecutionTrace, ProtocolError, RoundBudgetExceeded, SimulationError, default_budget, run_synchronous
from .protocols import Algorithm1, Algorithm2, Algorithm3

PROTOCOLS = ("alg1", "alg2", "alg3")
MAX_EXHAUSTIVE_NODES = 16
KEY_VERSION = "k1"


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 nodes")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("need at least one node")
    return Graph.from_edges(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("need at least one node")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def fig1b() -> Graph:
    """Eight nodes: 0-3 each adjacent to all of 4-7, and no other edges."""
    return Graph.from_edges(8, [(i, j) for i in range(4) for j in range(4, 8)])


def random_k_connected(n: int, k: int, seed: int = 0) -> Graph:
    """Seeded rejection sampling of G(n, p) until the connectivity reaches ``k``.

    ``p`` starts at ``k / (n - 1)`` and creeps up every 20 rejections, so the
    search always ends (the complete graph has connectivity ``n - 1``).
    """
    if n < 1 or k < 0 or k > n - 1:
        raise GraphError(f"no graph on {n} nodes has connectivity {k}")
    rng = random.Random(seed)
    pairs = list(combinations(range(n), 2))
    p = min(1.0, k / max(1, n - 1))
    tries = 0
    while True:
        g = Graph.from_edges(n, [e for e in pairs if rng.random() < p])
        if vertex_connectivity(g) >= k:
            return g
        tries += 1
        if tries % 20 == 0:
            p = min(1.0, p + 0.05)


def generate_graph(family: str, n: int | None = None, k: int | None = None, seed: int = 0) -> Graph:
    """Build a named graph; ``family`` may carry its arguments, e.g. ``cycle:5`` or ``random-k-connected:8,3,7``."""
    name, _, arg = family.partition(":")
    args = [int(x) for x in arg.split(",")] if arg else []
    if name == "fig1b":
        return fig1b()
    if name in ("cycle", "complete", "path"):
        size = args[0] if args else n
        if size is None:
            raise GraphError(f"{name} needs a node count")
        return {"cycle": cycle, "complete": complete, "path": path_graph}[name](size)
    if name == "random-k-connected":
        if args:
            n, k = args[0], args[1]
            seed = args[2] if len(args) > 2 else seed
        if n is None or k is None:
            raise GraphError("random-k-connected needs n and k")
        return random_k_connected(n, k, seed)
    raise GraphError(f"unknown graph family {family!r}")


def load_graph(source: str) -> Graph:
    """A graph file path, or a family spec accepted by :func:`generate_graph`."""
    p = FsPath(source)
    if p.is_file():
        return read_graph(p)
    return generate_graph(source)


def make_protocol(name: str, g: Graph, f: int, t: int = 0, strict: bool = True):
    if name == "alg1":
        if t:
            raise ValueError("alg1 has no equivocation bound; use alg3 for t > 0")
        return Algorithm1(g, f, strict)
    if name == "alg2":
        if t:
            raise ValueError("alg2 does not handle equivocation")
        return Algorithm2(g, f, strict)
    if name == "alg3":
        return Algorithm3(g, f, t, strict)
    raise ValueError(f"unknown protocol {name!r}")


# ---------------------------------------------------------------- replay keys


@dataclass(frozen=True)
class RunKey:
    protocol: str
    f: int
    t: int
    graph: Graph
    inputs: tuple[int, ...]
    faulty: tuple[int, ...]
    equivocators: tuple[int, ...]
    strategy: str
    budget: int
    seed: int = 0
    strict: bool = True

    def body(self) -> str:
        edges = ".".join(f"{u}-{v}" for u, v in self.graph.sorted_edges())
        return ";".join(
            [
                KEY_VERSION,
                f"p={self.protocol}",
                f"f={self.f}",
                f"t={self.t}",
                f"n={self.graph.n}",
                f"E={edges or '-'}",
                f"in={''.join(map(str, self.inputs))}",
                f"F={_ids(self.faulty)}",
                f"Q={_ids(self.equivocators)}",
                f"s={self.strategy}",
                f"b={self.budget}",
                f"seed={self.seed}",
                f"strict={int(self.strict)}",
            ]
        )

    def encode(self) -> str:
        body = self.body()
        return f"{body}#{_checksum(body)}"

    @classmethod
    def decode(cls, text: str) -> "RunKey":
        body, sep, check = text.strip().rpartition("#")
        if not sep or _checksum(body) != check:
            raise KeyError("replay key checksum mismatch")
        fields = body.split(";")
        if fields[0] != KEY_VERSION:
            raise KeyError(f"unknown replay key version {fields[0]!r}")
        kv = dict(x.split("=", 1) for x in fields[1:])
        n = int(kv["n"])
        edges = [] if kv["E"] == "-" else [tuple(map(int, e.split("-"))) for e in kv["E"].split(".")]
        return cls(
            protocol=kv["p"],
            f=int(kv["f"]),
            t=int(kv["t"]),
            graph=Graph.from_edges(n, edges),
            inputs=tuple(int(c) for c in kv["in"]),
            faulty=_parse_ids(kv["F"]),
            equivocators=_parse_ids(kv["Q"]),
            strategy=kv["s"],
            budget=int(kv["b"]),
            seed=int(kv["seed"]),
            strict=kv["strict"] == "1",
        )


def _checksum(body: str) -> str:
    return hashlib.sha256(body.encode()).hexdigest()[:16]


def _ids(nodes) -> str:
    return ",".join(map(str, nodes)) or "-"


def _parse_ids(text: str) -> tuple[int, ...]:
    return () if text in ("-", "") else tuple(int(x) for x in text.split(","))


def execute(key: RunKey, protocol=None) -> ExecutionTrace:
    """Run the execution a key describes (raises on budget overflow or protocol abort)."""
    proto = protocol or make_protocol(key.protocol, key.graph, key.f, key.t, key.strict)
    adversary = parse_strategy(key.strategy)
    return run_synchronous(key.graph, proto, adversary, key.faulty, key.inputs, key.budget, key.equivocators)


def replay(key: str | RunKey) -> ExecutionTrace:
    """Rebuild a run from its key; tampered keys are rejected with :class:`KeyError`."""
    k = RunKey.decode(key) if isinstance(key, str) else key
    return execute(k)


# ---------------------------------------------------------------- sweeps


@dataclass
class SweepSpec:
    graph: Graph
    protocol: str
    f: int
    t: int = 0
    inputs: str | list = "exhaustive"  # "exhaustive", "sample:<k>" or explicit bit vectors
    faulty: str | list = "exhaustive"  # "exhaustive" (every set of size <= f) or explicit sets
    strategies: list = field(default_factory=lambda: ["silent"])
    budget: int | None = None
    seed: int = 0
    strict: bool = True
    equivocators: int | None = None  # lowest ids of each placement that may equivocate; default min(t, |F|)
    invariants: bool = False
    cache_limit: int = 400_000

    def input_vectors(self) -> list[tuple[int, ...]]:
        n = self.graph.n
        if isinstance(self.inputs, str):
            if self.inputs == "exhaustive":
                if n > MAX_EXHAUSTIVE_NODES:
                    raise ValueError(f"exhaustive inputs refused for n={n} > {MAX_EXHAUSTIVE_NODES}")
                return [tuple(b) for b in product((0, 1), repeat=n)]
            if self.inputs.startswith("sample:"):
                k = int(self.inputs.split(":", 1)[1])
                rng = random.Random(self.seed)
                return [tuple(rng.randrange(2) for _ in range(n)) for _ in range(k)]
            return [parse_bits(x, n) for x in self.inputs.split(",")]
        return [tuple(v) for v in self.inputs]

    def placements(self) -> list[tuple[int, ...]]:
        if isinstance(self.faulty, str):
            if self.faulty == "exhaustive":
                return [c for k in range(self.f + 1) for c in combinations(range(self.graph.n), k)]
            return [parse_ids(x) for x in self.faulty.split(";")]
        return [tuple(sorted(x)) for x in self.faulty]

    def equivocating(self, faulty: tuple[int, ...]) -> tuple[int, ...]:
        k = min(self.t, len(faulty)) if self.equivocators is None else min(self.equivocators, len(faulty))
        return tuple(sorted(faulty)[:k])

    def round_budget(self, protocol) -> int:
        return self.budget or default_budget(self.graph.n, getattr(protocol, "phase_count", 1))

    def size(self) -> int:
        return len(self.input_vectors()) * len(self.placements()) * len(self.strategies)


def parse_bits(text: str, n: int | None = None) -> tuple[int, ...]:
    text = text.strip()
    if not text or any(c not in "01" for c in text):
        raise ValueError(f"bad input bit string {text!r}")
    if n is not None and len(text) != n:
        raise ValueError(f"need {n} input bits, got {len(text)}")
    return tuple(int(c) for c in text)


def parse_ids(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "-", "none"):
        return ()
    return tuple(sorted(int(x) for x in text.split(",")))


@dataclass
class RunRecord:
    index: int
    key: str
    agreement: bool
    validity: bool
    terminated: bool
    rounds: int
    outputs: str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.agreement and self.validity and self.terminated and not self.detail

    def to_line(self) -> str:
        ok = lambda b: "ok" if b else "FAIL"  # noqa: E731
        parts = [
            f"run={self.index}",
            f"verdict={'pass' if self.passed else 'fail'}",
            f"agreement={ok(self.agreement)}",
            f"validity={ok(self.validity)}",
            f"termination={ok(self.terminated)}",
            f"rounds={self.rounds}",
            f"outputs={self.outputs or '-'}",
        ]
        if self.detail:
            parts.append("detail=" + self.detail.replace(" ", "_"))
        parts.append(f"key={self.key}")
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> "RunRecord":
        head, _, key = line.partition(" key=")
        kv = dict(x.split("=", 1) for x in head.split(" "))
        return cls(
            index=int(kv["run"]),
            key=key,
            agreement=kv["agreement"] == "ok",
            validity=kv["validity"] == "ok",
            terminated=kv["termination"] == "ok",
            rounds=int(kv["rounds"]),
            outputs="" if kv["outputs"] == "-" else kv["outputs"],
            detail=kv.get("detail", "").replace("_", " "),
        )


@dataclass
class SweepReport:
    records: list[RunRecord]
    header: str = ""
    violations: list[str] = field(default_factory=list)  # invariant findings, when requested

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def passed(self) -> int:
        return sum(r.passed for r in self.records)

    @property
    def pass_rate(self) -> float:
        return self.passed / self.total if self.total else 1.0

    @property
    def failures(self) -> list[str]:
        return [r.key for r in self.records if not r.passed]

    @property
    def max_rounds(self) -> int:
        return max((r.rounds for r in self.records), default=0)

    def summary(self) -> str:
        s = f"SUMMARY runs={self.total} passed={self.passed} failed={self.total - self.passed} pass_rate={self.pass_rate:.4f} max_rounds={self.max_rounds}"
        if self.violations:
            s += f" invariant_violations={len(self.violations)}"
        return s

    def to_text(self) -> str:
        lines = [f"# {self.header}"] if self.header else []
        lines += [r.to_line() for r in self.records]
        lines += [f"# invariant {v}" for v in self.violations]
        lines.append(self.summary())
        return "\n".join(lines) + "\n"

    def write(self, path) -> None:
        FsPath(path).write_text(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "SweepReport":
        recs, header, viol = [], "", []
        for line in text.splitlines():
            if line.startswith("run="):
                recs.append(RunRecord.from_line(line))
            elif line.startswith("# invariant "):
                viol.append(line[len("# invariant ") :])
            elif line.startswith("# ") and not header:
                header = line[2:]
        return cls(recs, header, viol)

    @classmethod
    def read(cls, path) -> "SweepReport":
        return cls.from_text(FsPath(path).read_text())


def judge_trace(trace: ExecutionTrace, faulty) -> tuple[bool, bool, str]:
    """(agreement, validity, outputs) over the honest nodes of a finished run."""
    honest = [s for s in range(len(trace.inputs)) if s not in set(faulty)]
    outs = {s: trace.decisions[s][0] for s in honest if s in trace.decisions}
    agreement = len(set(outs.values())) <= 1
    allowed = {trace.inputs[s] for s in honest}
    validity = set(outs.values()) <= allowed
    return agreement, validity, "".join(str(outs[s]) if s in outs else "x" for s in range(len(trace.inputs)))


def run_one(key: RunKey, protocol, index: int = 0, invariants: bool = False) -> tuple[RunRecord, list[str]]:
    found: list[str] = []
    try:
        tr = execute(key, protocol)
    except RoundBudgetExceeded as e:
        a, v, outs = judge_trace(e.trace, key.faulty)
        return RunRecord(index, key.encode(), a, v, False, e.trace.rounds_run, outs, "round budget exhausted"), found
    except (ProtocolError, SimulationError) as e:
        return RunRecord(index, key.encode(), False, False, False, 0, "", f"{type(e).__name__}: {e}"), found
    a, v, outs = judge_trace(tr, key.faulty)
    terminated = all(s in tr.decisions for s in tr.honest)
    if invariants:
        found = [f"run={index} {msg}" for msg in check_phase_invariants(tr, protocol)]
    return RunRecord(index, key.encode(), a, v, terminated, tr.round_count, outs), found


def sweep_keys(spec: SweepSpec, protocol):
    budget = spec.round_budget(protocol)
    vectors = spec.input_vectors()
    for faulty in spec.placements():
        eq = spec.equivocating(faulty)
        for strat in spec.strategies:
            for bits in vectors:
                yield RunKey(spec.protocol, spec.f, spec.t, spec.graph, bits, faulty, eq, strat, budget, spec.seed, spec.strict)


def run_sweep(spec: SweepSpec, progress=None) -> SweepReport:
    """Run every combination in deterministic order; ``progress(i, total)`` is called per run if given."""
    for s in spec.strategies:
        parse_strategy(s)
    protocol = make_protocol(spec.protocol, spec.graph, spec.f, spec.t, spec.strict)
    total = spec.size()
    records, violations = [], []
    for i, key in enumerate(sweep_keys(spec, protocol)):
        rec, found = run_one(key, protocol, i, spec.invariants)
        records.append(rec)
        violations.extend(found)
        if hasattr(protocol, "memo_size") and protocol.memo_size() > spec.cache_limit:
            protocol.clear_cache()
        if progress is not None:
            progress(i + 1, total)
    header = f"sweep protocol={spec.protocol} f={spec.f} t={spec.t} n={spec.graph.n} seed={spec.seed} runs={total}"
    return SweepReport(records, header, violations)
