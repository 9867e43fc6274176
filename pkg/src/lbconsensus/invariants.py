"""Trace-level checks of the phase protocols' per-phase guarantees.

All checks read a finished :class:`~lbconsensus.netsim.ExecutionTrace` of an
:class:`~lbconsensus.protocols.PhaseProtocol` run plus the protocol object
whose flooding memo still holds that run's tokens (call before clearing the
protocol cache). Each returns a list of human-readable violations; an empty
list means the property held.
"""
from __future__ import annotations

from .netsim import ExecutionTrace
from .protocols.flooding import is_bit


def _snapshots(trace: ExecutionTrace) -> dict[int, list]:
    return {v: snaps for v, snaps in trace.annotations.items() if v not in trace.faulty}


def per_phase_validity(trace: ExecutionTrace) -> list[str]:
    """Every honest end-of-phase state equals some honest node's start-of-phase state."""
    snaps = _snapshots(trace)
    out = []
    phases = min((len(s) for s in snaps.values()), default=0)
    for p in range(phases):
        starts = {s[p].gamma_start for s in snaps.values()}
        for v, s in sorted(snaps.items()):
            if s[p].gamma_end not in starts:
                out.append(f"phase {p}: node {v} ended with {s[p].gamma_end}, honest starts were {sorted(starts)}")
    return out


def covering_phase_agreement(trace: ExecutionTrace) -> list[str]:
    """In a phase whose candidate sets cover the actual faults, honest states end equal.

    A phase covers the faults when its equivocating candidate set equals the
    actual equivocators and its other candidate set contains every other
    faulty node.
    """
    snaps = _snapshots(trace)
    out = []
    eq = trace.equivocators
    rest = trace.faulty - eq
    phases = min((len(s) for s in snaps.values()), default=0)
    for p in range(phases):
        any_snap = next(iter(snaps.values()))[p]
        if any_snap.T != eq or not rest <= any_snap.F:
            continue
        ends = {v: s[p].gamma_end for v, s in snaps.items()}
        if len(set(ends.values())) > 1:
            out.append(f"covering phase {p} (F={sorted(any_snap.F)}, T={sorted(any_snap.T)}) ended split: {ends}")
    return out


def _broadcast_initiations(trace: ExecutionTrace, n: int) -> dict:
    """(phase, node) -> first bit a node broadcast with the empty path at the phase's first round."""
    first: dict = {}
    for t in trace.transmissions:
        if t.round % n or t.audience is not None or type(t.payload) is not tuple:
            continue
        k = (t.round // n, t.sender)
        if k in first:
            continue
        for m in t.payload:
            if type(m) is tuple and len(m) == 2 and m[1] == () and is_bit(m[0]):
                first[k] = m[0]
                break
    return first


def fault_free_path_consistency(trace: ExecutionTrace, protocol) -> list[str]:
    """A value recorded along a path with honest internal nodes is what its origin broadcast.

    Origins that stayed silent (or sent nothing usable) count as having
    broadcast the default 1. Equivocating origins are skipped.
    """
    snaps = _snapshots(trace)
    n = protocol.n
    sent = _broadcast_initiations(trace, n)
    fmask = sum(1 << x for x in trace.faulty)
    out = []
    for v, ss in sorted(snaps.items()):
        for p, snap in enumerate(ss):
            for u, vals in _fault_free_values(protocol, snap.token, fmask).items():
                if u in trace.equivocators:
                    continue
                expected = sent.get((p, u), 1)
                for val, key in vals:
                    if val != expected:
                        out.append(f"phase {p}: node {v} recorded {val!r} along {key} but {u} broadcast {expected}")
    return out


def _fault_free_values(protocol, token: int, fmask: int) -> dict:
    """origin -> distinct (value, example path) recorded by ``token`` along paths avoiding ``fmask`` internally."""
    k = ("fault-free", token, fmask)
    hit = protocol.cache.get(k)
    if hit is not None:
        return hit
    masks = protocol.flood.tables.mask
    by_origin: dict = {}
    for key, val in protocol.flood.records(token).items():
        u = key[0]
        if masks[key] & fmask & ~(1 << u):
            continue
        seen = by_origin.setdefault(u, {})
        seen.setdefault(val, key)
    hit = protocol.cache[k] = {u: sorted((val, key) for val, key in d.items()) for u, d in by_origin.items()}
    return hit


def flooding_quiescence(trace: ExecutionTrace, protocol) -> list[str]:
    """Honest relays at round ``p*n + k`` carry paths of exactly ``k`` nodes, so flooding ends within ``n`` rounds."""
    n = protocol.n
    last = protocol.phase_count * n
    cache = protocol.cache
    out = []
    for t in trace.transmissions:
        if t.sender in trace.faulty:
            continue
        if t.round > last:
            out.append(f"node {t.sender} transmitted at round {t.round}, after the final round {last}")
            continue
        k = t.round % n
        ck = ("quiet", id(t.payload), k)
        hit = cache.get(ck)
        if hit is None or hit[1] is not t.payload:
            msgs = t.payload if type(t.payload) is tuple else ()
            bad = [len(m[1]) for m in msgs if len(m[1]) != k or len(m[1]) > n - 1]
            hit = cache[ck] = (bad, t.payload)
        for length in hit[0]:
            out.append(f"node {t.sender} sent a path of {length} nodes at round {t.round} (offset {k})")
    return out


def check_phase_invariants(trace: ExecutionTrace, protocol) -> list[str]:
    """All four checks for phase protocols; other protocols yield no findings."""
    if not hasattr(protocol, "phases"):
        return []
    return (
        per_phase_validity(trace)
        + covering_phase_agreement(trace)
        + fault_free_path_consistency(trace, protocol)
        + flooding_quiescence(trace, protocol)
    )
