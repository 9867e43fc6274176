"""Per-phase flooding of ``(value, path)`` messages under the four discard rules.

A node receiving message ``(b, p)`` from neighbour ``u``:

1. drops it unless ``p + (u,)`` is a simple path of the graph,
2. drops it if the same ``p`` already arrived from ``u`` this phase,
3. drops it if the node itself lies on ``p + (u,)``,
4. otherwise records ``b`` along ``p + (u,)`` and forwards ``(b, p + (u,))``.

Rules 1 and 3 are precomputed: for each ordered neighbour pair ``(v, u)`` an
accept table maps every admissible ``p`` to the recorded key ``p + (u,)``. The
key (origin first, last hop last, receiver omitted) also serves as the rule 2
"already seen" set.

Node state within a phase is an integer *token*. Absorbing an inbox maps
``(token, inbox identity)`` to a new token plus the batch to forward, and that
mapping is memoized. Honest batches are only ever built on a memo miss, so a
batch object stands for exactly one content and identical histories share
objects, which makes repeated phases and repeated sweep runs close to free.
The memo keeps every keyed payload alive so object ids are never recycled
while they are in use as keys.
"""
from __future__ import annotations

from typing import Any, Callable

from ..graph_core import Graph

Key = tuple[int, ...]


def is_bit(x) -> bool:
    return type(x) is int and (x == 0 or x == 1)


class FloodTables:
    """Accept tables and path bitmasks for one graph."""

    _cache: dict[Graph, "FloodTables"] = {}

    def __init__(self, g: Graph):
        self.g = g
        self.accept: list[dict[int, dict[Key, Key]]] = [{u: {} for u in g.adj[v]} for v in range(g.n)]
        self.mask: dict[Key, int] = {}
        stack: list[Key] = [(s,) for s in range(g.n)]
        while stack:
            p = stack.pop()
            on = set(p)
            u = p[-1]
            self.mask[p] = sum(1 << x for x in p)
            prefix = p[:-1]
            for v in g.adj[u]:
                if v not in on:
                    self.accept[v][u][prefix] = p
                    stack.append(p + (v,))

    @classmethod
    def of(cls, g: Graph) -> "FloodTables":
        t = cls._cache.get(g)
        if t is None:
            t = cls._cache[g] = cls(g)
        return t


def apply_flood_rules(tables: FloodTables, v: int, seen: dict, inbox, first: bool, accept_value=is_bit, default=1) -> list:
    """Process one round's inbox at ``v``; mutates ``seen`` and returns the messages to forward.

    ``first`` marks the round that carries the neighbours' initiations: any
    neighbour whose initiation is missing is treated as having sent
    ``(default, ())`` unless ``default`` is None.
    """
    acc = tables.accept[v]
    new = []
    for u, payload in inbox:
        a = acc.get(u)
        if a is None or type(payload) is not tuple:
            continue
        for m in payload:
            try:
                val, p = m
                k = a.get(p)
            except (TypeError, ValueError):
                continue
            if k is None or k in seen or not accept_value(val):
                continue
            seen[k] = val
            new.append((val, k))
    if first and default is not None:
        for u in tables.g.adj[v]:
            if (u,) not in seen:
                seen[(u,)] = default
                new.append((default, (u,)))
    return new


class FloodMemo:
    """Token store shared by every node of every run using one protocol object."""

    def __init__(self, g: Graph):
        self.tables = FloodTables.of(g)
        self.g = g
        self.clear()

    def clear(self) -> None:
        # per token: (parent token or None, batch recorded at this step, node, base)
        # base is (previous phase's final token, start value) for phase roots
        self.info: list[tuple] = []
        self.inboxes: list = []
        self._roots: dict = {}
        self._steps: dict = {}
        self._init_batches: dict = {}

    def __len__(self) -> int:
        return len(self.info)

    def root(self, v: int, value: Any, prev: int | None = None) -> int:
        k = (v, prev, value if is_bit(value) else id(value))
        tok = self._roots.get(k)
        if tok is None:
            tok = len(self.info)
            self.info.append((None, (), v, (prev, value)))
            self.inboxes.append(None)
            self._roots[k] = tok
        return tok

    def initiation(self, value: Any) -> tuple:
        k = value if is_bit(value) else id(value)
        b = self._init_batches.get(k)
        if b is None:
            b = self._init_batches[k] = ((value, ()),)
        return b

    def absorb(self, token: int, inbox: list, first: bool, accept_value: Callable, default) -> tuple[int, tuple]:
        """Apply the discard rules to ``inbox``; return the new token and the batch to forward."""
        key = (token, first, tuple([(u, id(p)) for u, p in inbox]))
        hit = self._steps.get(key)
        if hit is not None:
            return hit[0], hit[1]
        v = self.info[token][2]
        new = apply_flood_rules(self.tables, v, self.records(token), inbox, first, accept_value, default)
        batch = tuple(new)
        tok = len(self.info)
        self.info.append((token, batch, v, None))
        self.inboxes.append(inbox)
        self._steps[key] = (tok, batch, inbox)
        return tok, batch

    def chain(self, token: int) -> list[int]:
        """Tokens from the phase root up to ``token``."""
        out = []
        t = token
        while t is not None:
            out.append(t)
            t = self.info[t][0]
        out.reverse()
        return out

    def records(self, token: int) -> dict[Key, Any]:
        rec: dict[Key, Any] = {}
        for t in self.chain(token):
            for val, k in self.info[t][1]:
                rec[k] = val
        return rec

    def phase_root(self, token: int) -> int:
        t = token
        while self.info[t][0] is not None:
            t = self.info[t][0]
        return t

    def node_of(self, token: int) -> int:
        return self.info[token][2]

    def start_value(self, token: int):
        return self.info[self.phase_root(token)][3][1]

    def previous_phase(self, token: int) -> int | None:
        return self.info[self.phase_root(token)][3][0]

    def step_batches(self, token: int) -> list[tuple]:
        """Batch recorded at each absorb step of the phase, oldest first."""
        return [self.info[t][1] for t in self.chain(token)[1:]]

    def step_inboxes(self, token: int) -> list[list]:
        return [self.inboxes[t] for t in self.chain(token)[1:]]
