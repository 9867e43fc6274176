"""Three-phase consensus for graphs whose connectivity is at least ``2f``.

Phase 1 floods inputs. Phase 2 floods, from every node, a report of everything
it heard from its neighbours during phase 1. From the reports a node learns
what other nodes transmitted in phase 1 (their *transcripts*) and flags, on
each of ``2f`` disjoint paths from a source to itself, the first node whose
transcript does not relay the source's reliably received value. A node that
flags ``f`` nodes (type A) waits in phase 3 for the decision of a node that
flagged fewer (type B), accepting it only along a path that avoids the flagged
nodes. Type B nodes decide by majority over the inputs they received reliably.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..graph_core import Graph, disjoint_uv_paths, path_excluding, vertex_connectivity
from ..netsim import run_synchronous
from .exhaustive import ProtocolInfeasible
from .flooding import FloodMemo, is_bit
from .pathsearch import find_family
from .payloads import Decision, Report


@dataclass(frozen=True)
class ReliableReceipt:
    source: int
    value: object
    justification: str  # "self", "neighbor" or "paths"
    family: tuple | None = None


def _internal_family(records: dict, source: int, v: int, value, k: int, masks) -> tuple | None:
    by_mask: dict[int, tuple] = {}
    drop = ~(1 << source)
    for key, val in records.items():
        if key[0] != source or val != value or type(val) is not type(value):
            continue
        m = masks[key] & drop
        old = by_mask.get(m)
        if old is None or key < old:
            by_mask[m] = key
    fam = find_family(by_mask, k)
    return None if fam is None else tuple(sorted(p + (v,) for p in fam))


def reliable_receive(g: Graph, v: int, source: int, records: dict, f: int, own_value=None, masks=None):
    """Decide whether ``v`` reliably received ``source``'s flooded bit.

    ``records`` is ``v``'s received-path table for the flood in question.
    Returns a :class:`ReliableReceipt` or None.
    """
    if source == v:
        return ReliableReceipt(source, own_value, "self")
    if g.has_edge(source, v):
        val = records.get((source,))
        return None if val is None else ReliableReceipt(source, val, "neighbor")
    if masks is None:
        from .flooding import FloodTables

        masks = FloodTables.of(g).mask
    for delta in (0, 1):
        fam = _internal_family(records, source, v, delta, f + 1, masks)
        if fam is not None:
            return ReliableReceipt(source, delta, "paths", fam)
    return None


class ReportView:
    """What ``v`` can establish about other nodes' phase-1 transmissions.

    A node's *transcript* is the sequence of ``(round, payload)`` it broadcast
    in phase 1. ``v`` knows its own, hears its neighbours' directly, and learns
    anyone else's from the phase-2 reports of that node's neighbours: a
    transcript counts once ``f + 1`` report paths ``z, r, ..., v`` with pairwise
    disjoint interiors all carry it.

    ``own`` is ``v``'s transcript, ``own_report`` the report ``v`` itself
    flooded and ``reports`` ``v``'s received-path table for the report flood.
    """

    def __init__(self, g: Graph, v: int, f: int, own, own_report: Report, reports: dict, masks, cache: dict | None = None):
        self.g, self.v, self.f = g, v, f
        self.own = tuple(own)
        self.own_report = own_report
        self.masks = masks
        self._cache = {} if cache is None else cache
        self._memo: dict = {}
        by_rep: dict[int, list] = {}
        reps: dict[int, Report] = {}
        for key, rep in reports.items():
            if isinstance(rep, Report):
                by_rep.setdefault(id(rep), []).append(key)
                reps[id(rep)] = rep
        self._groups = [(reps[i], keys) for i, keys in by_rep.items()]

    @staticmethod
    def _extract(rep: Report, z: int) -> tuple:
        out = []
        for item in rep:
            if type(item) is tuple and len(item) == 3 and item[0] == z:
                out.append((item[1], item[2]))
        return tuple(out)

    def _about(self, rep: Report, z: int) -> tuple:
        k = ("tx", id(rep), z)
        hit = self._cache.get(k)
        if hit is None or hit[1] is not rep:
            hit = self._cache[k] = (self._extract(rep, z), rep)
        return hit[0]

    def transcript(self, z: int):
        """``z``'s reliably known transcript, or None."""
        k = ("tx", z)
        if k not in self._memo:
            self._memo[k] = self._transcript(z)
        return self._memo[k]

    def _transcript(self, z: int):
        if z == self.v:
            return self.own
        if z in self.g.adj[self.v]:
            return self._extract(self.own_report, z)
        adj = self.g.adj
        zbit = 1 << z
        # group report paths by the transcript they attribute to z
        claims: list[list] = []  # [transcript, {mask: key}]
        by_identity: dict[tuple, int] = {}
        for rep, keys in self._groups:
            usable = [key for key in keys if not self.masks[key] & zbit and z in adj[key[0]]]
            if not usable:
                continue
            tx = self._about(rep, z)
            ident = tuple((r, id(p)) for r, p in tx)
            slot = by_identity.get(ident)
            if slot is None:
                for j, (other, _) in enumerate(claims):
                    if other == tx:
                        slot = j
                        break
                else:
                    slot = len(claims)
                    claims.append([tx, {}])
                by_identity[ident] = slot
            table = claims[slot][1]
            for key in usable:
                m = self.masks[key]
                old = table.get(m)
                if old is None or key < old:
                    table[m] = key
        for tx, table in claims:
            if find_family(table, self.f + 1) is not None:
                return tx
        return None

    def relayed(self, z: int, path: tuple):
        """First bit ``z`` sent with ``path`` according to its known transcript (None if absent)."""
        first = self.first_relays(z)
        return None if first is None else first.get(path)

    def first_relays(self, z: int) -> dict | None:
        """Path -> first bit ``z`` sent with it, from its known transcript; None if unknown."""
        k = ("first", z)
        if k in self._memo:
            return self._memo[k]
        tx = self.transcript(z)
        if tx is None:
            self._memo[k] = None
            return None
        k = ("first", id(tx))
        hit = self._cache.get(k)
        if hit is None or hit[1] is not tx:
            first: dict = {}
            for _, payload in tx:
                if type(payload) is not tuple:
                    continue
                for m in payload:
                    if type(m) is tuple and len(m) == 2 and is_bit(m[0]):
                        try:
                            first.setdefault(m[1], m[0])
                        except TypeError:
                            pass
            hit = self._cache[k] = (first, tx)
        self._memo[("first", z)] = hit[0]
        return hit[0]

    def sent(self, z: int, msg) -> bool:
        tx = self.transcript(z)
        if tx is None:
            return False
        return any(type(p) is tuple and msg in p for _, p in tx)


DEVIATION = "deviation"
FLIPPED = "flipped"


def identify_faulty(g: Graph, f: int, reliable: dict, view: ReportView, path_cache: dict | None = None, strict=True, rule=DEVIATION):
    """Nodes ``v`` can prove faulty.

    For every ``w`` whose bit ``b`` arrived reliably and every other node ``u``,
    walk ``2f`` disjoint paths from ``w`` to ``u``. On each, mark the first node
    ``z`` whose known transcript shows it did not pass ``b`` along: with the
    default ``deviation`` rule, its first bit relayed for the path prefix
    before ``z`` is missing or differs from ``b``. The ``flipped`` rule only
    marks a node that provably sent the opposite bit, which misses relays
    that stay silent.
    """
    found = set()
    cache = {} if path_cache is None else path_cache
    if 2 * f == 0:
        return frozenset()
    for w in sorted(reliable):
        b = reliable[w]
        if not is_bit(b):
            continue
        flip = 1 - b
        for u in range(g.n):
            if u == w:
                continue
            fam = cache.get((w, u))
            if fam is None:
                fam = cache[(w, u)] = disjoint_uv_paths(g, w, u, 2 * f) or ()
            if not fam:
                if strict:
                    raise ProtocolInfeasible(f"fewer than {2 * f} disjoint paths between {w} and {u}")
                continue
            for P in fam:
                for i, z in enumerate(P):
                    if rule == DEVIATION:
                        first = view.first_relays(z)
                        if first is not None and first.get(P[:i]) != b:
                            found.add(z)
                            break
                    elif view.sent(z, (flip, P[:i])):
                        found.add(z)
                        break
    return frozenset(found)


def majority(values) -> int:
    ones = sum(1 for b in values if b == 1)
    zeros = sum(1 for b in values if b == 0)
    return 1 if ones > zeros else 0


@dataclass(frozen=True)
class Assessment:
    reliable: dict
    identified: frozenset
    type_a: bool
    decision: int | None  # type B decision


def _is_report(x) -> bool:
    return isinstance(x, Report)


def _is_decision(x) -> bool:
    return type(x) is Decision


class Algorithm2:
    name = "alg2"

    def __init__(self, g: Graph, f: int, strict: bool = True, rule: str = DEVIATION):
        if not 0 <= f < g.n:
            raise ValueError(f"need 0 <= f < n, got f={f}, n={g.n}")
        if rule not in (DEVIATION, FLIPPED):
            raise ValueError(f"unknown identification rule {rule!r}")
        self.rule = rule
        if strict and vertex_connectivity(g) < 2 * f:
            raise ProtocolInfeasible(f"graph connectivity is below 2f = {2 * f}")
        self.g, self.n, self.f, self.strict = g, g.n, f, strict
        self.phase_count = 3
        self.rounds = 3 * g.n
        self.flood = FloodMemo(g)
        self.cache: dict = {}
        self._reports: dict = {}
        self._assess: dict = {}
        self._claim_index: dict = {}
        self._paths: dict = {}

    def clear_cache(self) -> None:
        self.flood.clear()
        self.cache.clear()
        self._reports.clear()
        self._assess.clear()
        self._claim_index.clear()

    def memo_size(self) -> int:
        return len(self.flood)

    def node(self, v: int, bit: int) -> "IdentificationNode":
        return IdentificationNode(self, v, bit)

    def report(self, token: int) -> Report:
        rep = self._reports.get(token)
        if rep is None:
            items = []
            for i, inbox in enumerate(self.flood.step_inboxes(token), 1):
                for u, payload in inbox:
                    items.append((u, i - 1, payload))
            rep = self._reports[token] = Report(items)
        return rep

    def assess(self, token: int) -> Assessment:
        got = self._assess.get(token)
        if got is None:
            got = self._assess[token] = self._assess_uncached(token)
        return got

    def phase1_token(self, token: int) -> int:
        return self.flood.previous_phase(token)

    def _assess_uncached(self, token: int) -> Assessment:
        fl, g, f = self.flood, self.g, self.f
        v = fl.node_of(token)
        tok1 = fl.previous_phase(token)
        own = fl.start_value(tok1)
        rec1 = fl.records(tok1)
        masks = fl.tables.mask
        reliable = {}
        for w in range(g.n):
            got = reliable_receive(g, v, w, rec1, f, own, masks)
            if got is not None:
                reliable[w] = got.value
        own_tx = [(0, fl.initiation(own))]
        for i, batch in enumerate(fl.step_batches(tok1)[: self.n - 1], 1):
            if batch:
                own_tx.append((i, batch))
        view = ReportView(g, v, f, own_tx, self.report(tok1), fl.records(token), masks, self._claim_index)
        identified = identify_faulty(g, f, reliable, view, self._paths, self.strict, self.rule)
        type_a = len(identified) == f
        decision = None if type_a else majority(reliable.values())
        return Assessment(reliable, identified, type_a, decision)

    def fallback(self, token: int, identified: frozenset) -> int:
        """Majority over inputs of unidentified nodes read along culprit-free phase-1 paths."""
        fl = self.flood
        v = fl.node_of(token)
        rec1 = fl.records(token)
        vals = []
        for u in range(self.n):
            if u in identified:
                continue
            if u == v:
                vals.append(fl.start_value(token))
                continue
            p = path_excluding(self.g, u, v, identified)
            if p is not None and is_bit(rec1.get(p[:-1])):
                vals.append(rec1[p[:-1]])
        return majority(vals)


class IdentificationNode:
    __slots__ = ("proto", "v", "bit", "token", "tok1", "decision", "assessment", "snapshots", "_idmask")

    def __init__(self, proto: Algorithm2, v: int, bit: int):
        self.proto = proto
        self.v = v
        self.bit = bit
        self.token = None
        self.tok1 = None
        self.decision = None
        self.assessment = None
        self.snapshots = []
        self._idmask = 0

    def step(self, r: int, inbox):
        proto = self.proto
        fl = proto.flood
        n = proto.n
        p, k = divmod(r, n)
        if r == 0:
            self.token = fl.root(self.v, self.bit)
            return (fl.initiation(self.bit),)
        if p == 0 or (p == 1 and k == 0):
            tok, batch = fl.absorb(self.token, inbox, k == 1 or n == 1, is_bit, 1)
            if p == 0:
                self.token = tok
                return (batch,) if batch and k < n else ()
            self.tok1 = tok
            rep = proto.report(tok)
            self.token = fl.root(self.v, rep, tok)
            return (fl.initiation(rep),)
        if p == 1 or (p == 2 and k == 0):
            tok, batch = fl.absorb(self.token, inbox, False, _is_report, None)
            if p == 1:
                self.token = tok
                return (batch,) if batch else ()
            a = self.assessment = proto.assess(tok)
            self.snapshots.append(a)
            if a.type_a:
                self._idmask = sum(1 << x for x in a.identified)
                self.token = fl.root(self.v, None, tok)
                return ()
            d = Decision(a.decision)
            self.decision = (a.decision, r)
            self.token = fl.root(self.v, d, tok)
            return (fl.initiation(d),)
        if p == 2 or (p == 3 and k == 0):
            tok, batch = fl.absorb(self.token, inbox, False, _is_decision, None)
            self.token = tok
            if self.decision is None:
                masks = fl.tables.mask
                for val, key in batch:
                    if not masks[key] & self._idmask:
                        self.decision = (int(val), r)
                        break
                if self.decision is None and p == 3:
                    self.decision = (proto.fallback(self.tok1, self.assessment.identified), r)
            return (batch,) if batch and p == 2 else ()
        return ()


def run_algorithm2(g, f, inputs, adversary=None, faulty=(), strict=True, protocol=None, max_rounds=None, rule=DEVIATION):
    proto = protocol or Algorithm2(g, f, strict, rule)
    return run_synchronous(g, proto, adversary, faulty, inputs, max_rounds)
