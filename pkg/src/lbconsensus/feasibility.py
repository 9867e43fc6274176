"""Graph conditions under which binary Byzantine consensus is achievable.

Three communication models are covered: local broadcast (no faulty node can
equivocate), the hybrid model (at most ``t`` of the ``f`` faulty nodes can), and
classical point-to-point links as a comparison baseline.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .graph_core import (
    Graph,
    min_degree,
    minimum_vertex_cut,
    neighbors_of_set,
    subsets_upto,
    vertex_connectivity,
)

LOCAL_BROADCAST = "local-broadcast"
HYBRID = "hybrid"
POINT_TO_POINT = "point-to-point"

_MODEL_ALIASES = {
    "lb": LOCAL_BROADCAST,
    LOCAL_BROADCAST: LOCAL_BROADCAST,
    "hybrid": HYBRID,
    "p2p": POINT_TO_POINT,
    POINT_TO_POINT: POINT_TO_POINT,
}


@dataclass(frozen=True)
class FaultModel:
    f: int
    t: int = 0
    kind: str = LOCAL_BROADCAST

    def __post_init__(self):
        kind = _MODEL_ALIASES.get(self.kind)
        if kind is None:
            raise ValueError(f"unknown model kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind == POINT_TO_POINT and self.t == 0:
            object.__setattr__(self, "t", self.f)
        if self.f < 0 or self.t < 0 or self.t > self.f:
            raise ValueError(f"need 0 <= t <= f, got f={self.f}, t={self.t}")
        if kind == LOCAL_BROADCAST and self.t != 0:
            raise ValueError("local broadcast admits no equivocating nodes (t must be 0)")
        if kind == POINT_TO_POINT and self.t != self.f:
            raise ValueError("point-to-point means every faulty node can equivocate (t = f)")


@dataclass(frozen=True)
class Check:
    name: str
    required: Any
    actual: Any
    passed: bool


@dataclass(frozen=True)
class FeasibilityReport:
    model: FaultModel
    checks: tuple[Check, ...]
    witness: dict | None = field(default=None)

    @property
    def achievable(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> str:
        m = self.model
        head = f"model={m.kind} f={m.f} t={m.t}: " + ("ACHIEVABLE" if self.achievable else "NOT ACHIEVABLE")
        lines = [head]
        for c in self.checks:
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}: required {c.required}, actual {c.actual}")
        if self.witness:
            lines.append(f"  witness: {format_witness(self.witness)}")
        return "\n".join(lines)

    def record(self) -> dict:
        return {
            "model": self.model.kind,
            "f": self.model.f,
            "t": self.model.t,
            "achievable": self.achievable,
            "checks": [
                {"name": c.name, "required": c.required, "actual": c.actual, "passed": c.passed}
                for c in self.checks
            ],
            "witness": _jsonable(self.witness),
        }


def _jsonable(w):
    if w is None:
        return None
    return {k: sorted(v) if isinstance(v, (set, frozenset)) else v for k, v in w.items()}


def format_witness(w: dict) -> str:
    return ", ".join(f"{k}={sorted(v) if isinstance(v, (set, frozenset)) else v}" for k, v in w.items())


def required_connectivity(fm: FaultModel) -> int:
    if fm.kind == LOCAL_BROADCAST:
        return 3 * fm.f // 2 + 1
    if fm.kind == HYBRID:
        return 3 * (fm.f - fm.t) // 2 + 2 * fm.t + 1
    return 2 * fm.f + 1


def _check_f(g: Graph, f: int) -> None:
    if f < 0:
        raise ValueError("f must be nonnegative")
    if f >= g.n:
        raise ValueError(f"f={f} must be smaller than n={g.n}")


def _connectivity_check(g: Graph, need: int):
    kappa = vertex_connectivity(g)
    chk = Check("vertex connectivity", need, kappa, kappa >= need)
    witness = None
    if not chk.passed:
        cut = minimum_vertex_cut(g)
        witness = {"cut": frozenset(cut)} if cut is not None else {"too_few_nodes": g.n}
    return chk, witness


def _degree_check(g: Graph, need: int):
    d = min_degree(g)
    chk = Check("minimum degree", need, d, d >= need)
    witness = None
    if not chk.passed:
        node = next(u for u in g.nodes if g.degree(u) == d)
        witness = {"low_degree_node": node, "degree": d}
    return chk, witness


def _report(fm, parts) -> FeasibilityReport:
    checks = tuple(c for c, _ in parts)
    witness = next((w for _, w in parts if w is not None), None)
    return FeasibilityReport(fm, checks, witness)


def check_local_broadcast(g: Graph, f: int) -> FeasibilityReport:
    _check_f(g, f)
    fm = FaultModel(f, 0, LOCAL_BROADCAST)
    return _report(fm, [_degree_check(g, 2 * f), _connectivity_check(g, required_connectivity(fm))])


def check_hybrid(g: Graph, f: int, t: int) -> FeasibilityReport:
    _check_f(g, f)
    fm = FaultModel(f, t, HYBRID)
    parts = [_connectivity_check(g, required_connectivity(fm))]
    if t == 0:
        parts.append(_degree_check(g, 2 * f))
    else:
        parts.append(_small_set_check(g, t, 2 * f + 1))
    return _report(fm, parts)


def _small_set_check(g: Graph, t: int, need: int):
    worst = None
    for s in subsets_upto(g.nodes, t):
        k = len(neighbors_of_set(g, s))
        if worst is None or k < worst[1]:
            worst = (s, k)
        if k < need:
            chk = Check(f"neighbors of every set of size <= {t}", need, k, False)
            return chk, {"set": frozenset(s), "neighbors": k}
    actual = worst[1] if worst else None
    return Check(f"neighbors of every set of size <= {t}", need, actual, True), None


def check_point_to_point(g: Graph, f: int) -> FeasibilityReport:
    _check_f(g, f)
    fm = FaultModel(f, f, POINT_TO_POINT)
    size = Check("node count", 3 * f + 1, g.n, g.n >= 3 * f + 1)
    parts = [(size, None if size.passed else {"too_few_nodes": g.n})]
    parts.append(_connectivity_check(g, required_connectivity(fm)))
    return _report(fm, parts)


def check(g: Graph, model: str, f: int, t: int | None = None) -> FeasibilityReport:
    """Dispatch on a model name (``lb``, ``hybrid``, ``p2p`` or the long forms)."""
    kind = _MODEL_ALIASES.get(model)
    if kind == LOCAL_BROADCAST:
        return check_local_broadcast(g, f)
    if kind == HYBRID:
        return check_hybrid(g, f, 0 if t is None else t)
    if kind == POINT_TO_POINT:
        return check_point_to_point(g, f)
    raise ValueError(f"unknown model {model!r}")
