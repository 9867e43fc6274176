"""Consensus by sweeping every candidate fault set (local broadcast and hybrid).

Each node holds a state bit. One phase per candidate pair ``(F, T)``: flood the
state for ``n`` rounds, split the non-``T`` nodes into those whose value arrived
as 0 along a chosen path avoiding ``F | T`` and the rest, then possibly adopt a
value that arrived identically along ``f + 1`` disjoint paths from the other
side of the split. With ``t = 0`` only ``T = ∅`` occurs, which is the plain
local-broadcast protocol.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from ..graph_core import Graph, disjoint_set_paths_excluding, path_excluding
from ..netsim import ProtocolError, run_synchronous
from .flooding import FloodMemo, is_bit
from .pathsearch import find_family


class ProtocolInfeasible(ProtocolError):
    """The graph lacks a path structure the protocol relies on."""


@dataclass(frozen=True)
class PhaseConfig:
    F: frozenset
    T: frozenset = frozenset()

    def phi(self, f: int) -> int:
        return f - len(self.T)

    @property
    def excluded(self) -> frozenset:
        return self.F | self.T


def enumerate_phases(n: int, f: int, t: int = 0) -> list[PhaseConfig]:
    """Candidate pairs ordered by |T|, then |F|, then T and F lexicographically."""
    if not 0 <= t <= f:
        raise ValueError(f"need 0 <= t <= f, got f={f}, t={t}")
    out = []
    for tsize in range(t + 1):
        for T in combinations(range(n), tsize):
            rest = [x for x in range(n) if x not in T]
            for fsize in range(f - tsize + 1):
                for F in combinations(rest, fsize):
                    out.append((tsize, fsize, T, F))
    out.sort()
    return [PhaseConfig(frozenset(F), frozenset(T)) for _, _, T, F in out]


def phase_count(n: int, f: int, t: int = 0) -> int:
    if t == 0:
        return sum(comb(n, k) for k in range(f + 1))
    return len(enumerate_phases(n, f, t))


def compute_partition(
    g: Graph, v: int, gamma: int, records: dict, cfg: PhaseConfig, strict: bool = True
) -> tuple[frozenset, frozenset]:
    """Split ``V - T`` by the value recorded along each chosen path avoiding ``F | T``.

    ``records`` maps a received path (origin first, last hop last, ``v``
    omitted) to the value that arrived along it. ``v`` files itself by
    ``gamma``. A node with no usable path goes to the non-zero side when
    ``strict`` is off; otherwise :class:`ProtocolInfeasible` is raised.
    """
    X = cfg.excluded
    zero, other = [], []
    for u in range(g.n):
        if u in cfg.T:
            continue
        if u == v:
            val = gamma
        else:
            p = path_excluding(g, u, v, X)
            if p is None:
                if strict:
                    raise ProtocolInfeasible(f"no path from {u} to {v} avoiding {sorted(X)}")
                val = None
            else:
                val = records.get(p[:-1])
        (zero if is_bit(val) and val == 0 else other).append(u)
    return frozenset(zero), frozenset(other)


def step_c_case_select(Z: frozenset, N: frozenset, F: frozenset, phi: int, f: int):
    """Return ``(A, B, case)`` following the four-way split on ``|Z ∩ F|``."""
    if len(Z & F) <= phi // 2:
        return (N, Z, 1) if len(N) > f else (Z, N, 2)
    return (Z, N, 3) if len(Z) > f else (N, Z, 4)


def monochrome_family(g: Graph, records: dict, v: int, sources, value, excluded, k: int, masks=None):
    """``k`` recorded paths from ``sources`` to ``v`` that carried ``value``,
    avoid ``excluded`` internally and share no node but ``v``; None if impossible."""
    if masks is None:
        from .flooding import FloodTables

        masks = FloodTables.of(g).mask
    xmask = sum(1 << x for x in excluded)
    src = sources if isinstance(sources, (set, frozenset)) else set(sources)
    by_mask: dict[int, tuple] = {}
    for key, val in records.items():
        if val != value or type(val) is not type(value) or key[0] not in src:
            continue
        m = masks[key]
        if (m & ~(1 << key[0])) & xmask:
            continue
        old = by_mask.get(m)
        if old is None or key < old:
            by_mask[m] = key
    fam = find_family(by_mask, k)
    if fam is None:
        return None
    return tuple(sorted(p + (v,) for p in fam))


def step_c_update(
    g: Graph, v: int, gamma: int, records: dict, A, B, cfg: PhaseConfig, f: int, strict: bool = True, masks=None
):
    """New state and the justifying family (None when the state is kept)."""
    if v not in B:
        return gamma, None
    for delta in (0, 1):
        fam = monochrome_family(g, records, v, A, delta, cfg.excluded, f + 1, masks)
        if fam is not None:
            return delta, fam
    if strict and (not A or disjoint_set_paths_excluding(g, A, v, f + 1, cfg.excluded) is None):
        raise ProtocolInfeasible(f"node {v} has no {f + 1} disjoint paths from {sorted(A)} avoiding {sorted(cfg.excluded)}")
    return gamma, None


@dataclass(frozen=True)
class PhaseSnapshot:
    phase: int
    F: frozenset
    T: frozenset
    gamma_start: int
    gamma_end: int
    case: int
    Z: frozenset
    N: frozenset
    family: tuple | None
    token: int


class PhaseProtocol:
    """Shared, memoizing protocol object; ``node(v, bit)`` builds one node's machine."""

    name = "alg3"

    def __init__(self, g: Graph, f: int, t: int = 0, strict: bool = True):
        if not 0 <= f < g.n:
            raise ValueError(f"need 0 <= f < n, got f={f}, n={g.n}")
        self.g, self.n, self.f, self.t, self.strict = g, g.n, f, t, strict
        self.phases = enumerate_phases(g.n, f, t)
        self.phase_count = len(self.phases)
        self.rounds = self.n * self.phase_count
        self.flood = FloodMemo(g)
        self.cache: dict = {}
        self._results: dict = {}
        self._structural: dict = {}

    def clear_cache(self) -> None:
        self.flood.clear()
        self.cache.clear()
        self._results.clear()

    def memo_size(self) -> int:
        return len(self.flood)

    def node(self, v: int, bit: int) -> "PhaseNode":
        return PhaseNode(self, v, bit)

    def finish(self, token: int, index: int) -> PhaseSnapshot:
        key = (token, index)
        snap = self._results.get(key)
        if snap is None:
            snap = self._results[key] = self._finish(token, index)
        return snap

    def _finish(self, token: int, index: int) -> PhaseSnapshot:
        fl = self.flood
        v = fl.node_of(token)
        gamma = fl.start_value(token)
        records = fl.records(token)
        cfg = self.phases[index]
        Z, N = compute_partition(self.g, v, gamma, records, cfg, self.strict)
        A, B, case = step_c_case_select(Z, N, cfg.F, cfg.phi(self.f), self.f)
        new, fam = self._update(v, gamma, records, A, B, cfg)
        return PhaseSnapshot(index, cfg.F, cfg.T, gamma, new, case, Z, N, fam, token)

    def _update(self, v, gamma, records, A, B, cfg):
        new, fam = step_c_update(self.g, v, gamma, records, A, B, cfg, self.f, False, self.flood.tables.mask)
        if fam is None and v in B and self.strict:
            k = self.f + 1
            skey = (v, A, cfg.excluded)
            ok = self._structural.get(skey)
            if ok is None:
                ok = self._structural[skey] = bool(A) and disjoint_set_paths_excluding(self.g, A, v, k, cfg.excluded) is not None
            if not ok:
                raise ProtocolInfeasible(
                    f"node {v} has no {k} disjoint paths from {sorted(A)} avoiding {sorted(cfg.excluded)}"
                )
        return new, fam


class PhaseNode:
    __slots__ = ("proto", "v", "gamma", "token", "decision", "snapshots")

    def __init__(self, proto: PhaseProtocol, v: int, bit: int):
        self.proto = proto
        self.v = v
        self.gamma = bit
        self.token = None
        self.decision = None
        self.snapshots: list[PhaseSnapshot] = []

    def step(self, r: int, inbox):
        proto = self.proto
        fl = proto.flood
        n = proto.n
        if r == 0:
            self.token = fl.root(self.v, self.gamma)
            return (fl.initiation(self.gamma),)
        p, k = divmod(r, n)
        if p >= proto.phase_count and k:
            return ()
        if k:
            self.token, batch = fl.absorb(self.token, inbox, k == 1, is_bit, 1)
            return (batch,) if batch else ()
        tok, _ = fl.absorb(self.token, inbox, n == 1, is_bit, 1)
        snap = proto.finish(tok, p - 1)
        self.snapshots.append(snap)
        self.gamma = snap.gamma_end
        if p == proto.phase_count:
            self.decision = (self.gamma, r)
            return ()
        self.token = fl.root(self.v, self.gamma)
        return (fl.initiation(self.gamma),)


class Algorithm1(PhaseProtocol):
    name = "alg1"

    def __init__(self, g: Graph, f: int, strict: bool = True):
        super().__init__(g, f, 0, strict)


class Algorithm3(PhaseProtocol):
    name = "alg3"


def run_algorithm1(g, f, inputs, adversary=None, faulty=(), strict=True, protocol=None, max_rounds=None):
    proto = protocol or Algorithm1(g, f, strict)
    return run_synchronous(g, proto, adversary, faulty, inputs, max_rounds)


def run_algorithm3(g, f, t, inputs, adversary=None, faulty=(), equivocators=(), strict=True, protocol=None, max_rounds=None):
    eq = frozenset(equivocators)
    if len(eq) > t:
        raise ValueError(f"{len(eq)} equivocators exceed t={t}")
    if not eq <= frozenset(faulty):
        raise ValueError("equivocators must be faulty")
    proto = protocol or Algorithm3(g, f, t, strict)
    return run_synchronous(g, proto, adversary, faulty, inputs, max_rounds, eq)
