"""Undirected graphs, simple paths, vertex connectivity and disjoint path families.

Node ids are ``0..n-1``. Paths are plain tuples of node ids. Every search that
can return more than one valid answer is deterministic: BFS and augmenting
path scans visit neighbours in ascending id order, and single paths are the
lexicographically least among the shortest ones.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator

Path = tuple[int, ...]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = frozenset()
    adj: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"graph needs at least one node, got n={self.n}")
        canon = set()
        for e in self.edges:
            u, v = e
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {u}-{v} has an endpoint outside [0, {self.n})")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            canon.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(canon))
        nbrs = [[] for _ in range(self.n)]
        for u, v in canon:
            nbrs[u].append(v)
            nbrs[v].append(u)
        object.__setattr__(self, "adj", tuple(tuple(sorted(a)) for a in nbrs))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @property
    def nodes(self) -> range:
        return range(self.n)

    def neighbors(self, u: int) -> tuple[int, ...]:
        self._check(u)
        return self.adj[u]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    def without_nodes(self, removed: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on the kept nodes, relabelled; also returns the old ids."""
        gone = set(removed)
        keep = [u for u in range(self.n) if u not in gone]
        index = {u: i for i, u in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph.from_edges(max(len(keep), 1), edges), keep

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges | {(min(u, v), max(u, v))})

    def without_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges - {(min(u, v), max(u, v))})

    def _check(self, u: int) -> None:
        if not (isinstance(u, int) and 0 <= u < self.n):
            raise GraphError(f"node id {u!r} out of range for n={self.n}")

    def check_nodes(self, nodes: Iterable[int]) -> None:
        for u in nodes:
            self._check(u)

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines += [f"{u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                rows.append(line)
        if not rows:
            raise GraphError("empty graph file")
        try:
            n = int(rows[0])
            edges = []
            for row in rows[1:]:
                a, b = row.split()
                edges.append((int(a), int(b)))
        except ValueError as exc:
            raise GraphError(f"malformed graph text: {exc}") from None
        for u, v in edges:
            if u >= v:
                raise GraphError(f"edge line '{u} {v}' must have u < v")
        return cls.from_edges(n, edges)


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return Graph.from_text(fh.read())


def write_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(g.to_text())


# -- paths -----------------------------------------------------------------


def is_path(g: Graph, nodes: Iterable[int]) -> bool:
    """True for a nonempty simple path whose consecutive nodes are adjacent."""
    p = tuple(nodes)
    if not p or len(set(p)) != len(p):
        return False
    if any(not (isinstance(x, int) and 0 <= x < g.n) for x in p):
        return False
    return all(g.has_edge(a, b) for a, b in zip(p, p[1:]))


def internal_nodes(p: Path) -> tuple[int, ...]:
    return p[1:-1]


def excludes(p: Path, excluded: Iterable[int]) -> bool:
    """A path excludes X when none of its internal nodes lie in X."""
    x = set(excluded)
    return not any(w in x for w in p[1:-1])


@dataclass(frozen=True)
class PathFamily:
    """A disjoint family of paths.

    ``kind`` is ``"uv"`` for paths sharing both endpoints and pairwise disjoint
    internal nodes, or ``"Uv"`` for paths ending at a common node and sharing
    nothing else.
    """

    paths: tuple[Path, ...]
    kind: str

    def __len__(self):
        return len(self.paths)

    def __iter__(self) -> Iterator[Path]:
        return iter(self.paths)

    def validate(self, g: Graph) -> None:
        if self.kind not in ("uv", "Uv"):
            raise GraphError(f"unknown family kind {self.kind!r}")
        for p in self.paths:
            if not is_path(g, p):
                raise GraphError(f"{p} is not a simple path of the graph")
        if not self.paths:
            return
        end = self.paths[0][-1]
        if any(p[-1] != end for p in self.paths):
            raise GraphError("family members do not share the final endpoint")
        if self.kind == "uv":
            start = self.paths[0][0]
            if any(p[0] != start for p in self.paths):
                raise GraphError("uv-family members do not share the start")
            seen: set[int] = set()
            for p in self.paths:
                inner = set(p[1:-1])
                if inner & seen:
                    raise GraphError("uv-family paths share an internal node")
                seen |= inner
            if len(set(self.paths)) != len(self.paths):
                raise GraphError("uv-family repeats a path")
        else:
            seen = set()
            for p in self.paths:
                body = set(p[:-1])
                if body & seen:
                    raise GraphError("Uv-family paths share a node other than the endpoint")
                seen |= body


# -- degree ----------------------------------------------------------------


def min_degree(g: Graph) -> int:
    return min(len(a) for a in g.adj)


def neighbors_of_set(g: Graph, s: Iterable[int]) -> frozenset[int]:
    members = set(s)
    g.check_nodes(members)
    out = set()
    for v in members:
        out.update(g.adj[v])
    return frozenset(out - members)


# -- unit-capacity max-flow on the node-split network ------------------------


class _SplitFlow:
    """Node-split flow network: node x becomes 2x (in) -> 2x+1 (out).

    Arc capacities are 1 unless stated. Residual capacities live in a dict of
    dicts; BFS explores heads in ascending order so augmenting paths, and the
    extracted witnesses, are deterministic.
    """

    def __init__(self, size: int):
        self.cap: list[dict[int, int]] = [dict() for _ in range(size)]

    def arc(self, a: int, b: int, c: int = 1) -> None:
        self.cap[a][b] = self.cap[a].get(b, 0) + c
        self.cap[b].setdefault(a, 0)

    def augment(self, s: int, t: int) -> bool:
        parent = {s: s}
        q = deque([s])
        while q:
            a = q.popleft()
            for b in sorted(self.cap[a]):
                if b not in parent and self.cap[a][b] > 0:
                    parent[b] = a
                    if b == t:
                        while b != s:
                            a = parent[b]
                            self.cap[a][b] -= 1
                            self.cap[b][a] += 1
                            b = a
                        return True
                    q.append(b)
        return False

    def maxflow(self, s: int, t: int, limit: int | None = None) -> int:
        flow = 0
        while (limit is None or flow < limit) and self.augment(s, t):
            flow += 1
        return flow

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        q = deque([s])
        while q:
            a = q.popleft()
            for b, c in self.cap[a].items():
                if c > 0 and b not in seen:
                    seen.add(b)
                    q.append(b)
        return seen


_INF = 1 << 30


def _uv_network(g: Graph, u: int, v: int) -> _SplitFlow:
    net = _SplitFlow(2 * g.n)
    for x in range(g.n):
        net.arc(2 * x, 2 * x + 1, _INF if x in (u, v) else 1)
    for a, b in g.sorted_edges():
        c = 1 if {a, b} == {u, v} else _INF
        net.arc(2 * a + 1, 2 * b, c)
        net.arc(2 * b + 1, 2 * a, c)
    return net


def _local_connectivity(g: Graph, u: int, v: int, limit: int | None = None) -> int:
    return _uv_network(g, u, v).maxflow(2 * u + 1, 2 * v, limit)


def _trace_paths(net: _SplitFlow, orig: dict, start_out: int, sink: int) -> list[list[int]]:
    """Decompose unit flow leaving ``start_out`` into node sequences.

    ``orig`` maps (a, b) arcs to their original capacity; an arc carries flow
    when its residual dropped below that.
    """
    paths = []
    used: dict[tuple[int, int], int] = {}

    def flow_on(a, b):
        return orig.get((a, b), 0) - net.cap[a].get(b, 0) - used.get((a, b), 0)

    for b in sorted(net.cap[start_out]):
        while flow_on(start_out, b) > 0:
            used[(start_out, b)] = used.get((start_out, b), 0) + 1
            seq = [start_out, b]
            cur = b
            while cur != sink:
                nxt = next(c for c in sorted(net.cap[cur]) if flow_on(cur, c) > 0)
                used[(cur, nxt)] = used.get((cur, nxt), 0) + 1
                seq.append(nxt)
                cur = nxt
            paths.append(seq)
    return paths


def _snapshot(net: _SplitFlow) -> dict:
    return {(a, b): c for a, row in enumerate(net.cap) for b, c in row.items()}


def vertex_connectivity(g: Graph) -> int:
    """Largest k with n > k such that no fewer than k node removals disconnect g."""
    if g.is_complete():
        return g.n - 1
    best = g.n - 1
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if not g.has_edge(u, v):
                best = min(best, _local_connectivity(g, u, v, best))
                if best == 0:
                    return 0
    return best


def minimum_vertex_cut(g: Graph) -> frozenset[int] | None:
    """A smallest separating node set, or None for complete graphs.

    Ties resolve to the first nonadjacent pair (u, v) in ascending order that
    attains the minimum.
    """
    if g.is_complete():
        return None
    k = vertex_connectivity(g)
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.has_edge(u, v):
                continue
            net = _uv_network(g, u, v)
            if net.maxflow(2 * u + 1, 2 * v) != k:
                continue
            side = net.reachable(2 * u + 1)
            cut = {x for x in range(g.n) if 2 * x in side and 2 * x + 1 not in side}
            return frozenset(cut)
    raise AssertionError("no pair attains the vertex connectivity")


def disjoint_uv_paths(g: Graph, u: int, v: int, k: int) -> PathFamily | None:
    """k internally disjoint u-v paths, or None when fewer exist."""
    g.check_nodes((u, v))
    if u == v:
        raise GraphError("disjoint_uv_paths needs distinct endpoints")
    if k < 1:
        raise GraphError("k must be positive")
    net = _uv_network(g, u, v)
    orig = _snapshot(net)
    if net.maxflow(2 * u + 1, 2 * v, k) < k:
        return None
    raw = _trace_paths(net, orig, 2 * u + 1, 2 * v)
    paths = tuple(tuple([u] + [x // 2 for x in seq[1::2]]) for seq in raw)
    fam = PathFamily(tuple(sorted(paths, key=lambda p: (len(p), p))), "uv")
    fam.validate(g)
    return fam


def _set_network(g: Graph, sources: set[int], v: int, endpoint_only: set[int], removed: set[int]):
    s = 2 * g.n
    net = _SplitFlow(2 * g.n + 1)
    for x in range(g.n):
        if x in removed:
            continue
        net.arc(2 * x, 2 * x + 1, _INF if x == v else 1)
    for a, b in g.sorted_edges():
        if a in removed or b in removed:
            continue
        if b not in endpoint_only:
            net.arc(2 * a + 1, 2 * b, _INF)
        if a not in endpoint_only:
            net.arc(2 * b + 1, 2 * a, _INF)
    for x in sorted(sources):
        net.arc(s, 2 * x)
    return net, s


def _set_paths(g, sources, v, k, endpoint_only=frozenset(), removed=frozenset()):
    g.check_nodes(list(sources) + [v])
    if k < 1:
        raise GraphError("k must be positive")
    srcs = set(sources) - {v}
    if not set(sources):
        raise GraphError("source set is empty")
    if len(srcs) < k:
        return None
    net, s = _set_network(g, srcs, v, set(endpoint_only), set(removed))
    orig = _snapshot(net)
    if net.maxflow(s, 2 * v, k) < k:
        return None
    raw = _trace_paths(net, orig, s, 2 * v)
    paths = tuple(tuple(x // 2 for x in seq[1::2]) for seq in raw)
    fam = PathFamily(tuple(sorted(paths, key=lambda p: (len(p), p))), "Uv")
    fam.validate(g)
    return fam


def disjoint_set_paths(g: Graph, sources: Iterable[int], v: int, k: int) -> PathFamily | None:
    """k paths from distinct nodes of ``sources`` to v sharing only v."""
    return _set_paths(g, frozenset(sources), v, k)


def disjoint_set_paths_excluding(
    g: Graph, sources: Iterable[int], v: int, k: int, excluded: Iterable[int]
) -> PathFamily | None:
    """Like :func:`disjoint_set_paths` but no internal node may lie in ``excluded``.

    Excluded nodes that are also sources stay available as path starts only.
    """
    src = frozenset(sources)
    ex = set(excluded)
    fam = _set_paths(g, src, v, k, endpoint_only=ex & src, removed=ex - src - {v})
    if fam is not None:
        assert all(excludes(p, ex) for p in fam)
    return fam


def path_excluding(g: Graph, u: int, v: int, excluded: Iterable[int]) -> Path | None:
    """Lexicographically least shortest u-v path with no internal node in ``excluded``."""
    g.check_nodes((u, v))
    if u == v:
        return (u,)
    return _path_excluding(g, u, v, frozenset(excluded))


@lru_cache(maxsize=None)
def _path_excluding(g: Graph, u: int, v: int, ex: frozenset) -> Path | None:
    dist = {v: 0}
    q = deque([v])
    while q:
        x = q.popleft()
        if x != v and x in ex:
            continue
        for w in g.adj[x]:
            if w not in dist:
                dist[w] = dist[x] + 1
                q.append(w)
    if u not in dist:
        return None
    path = [u]
    cur = u
    while cur != v:
        d = dist[cur] - 1
        cur = min(w for w in g.adj[cur] if dist.get(w) == d and (w == v or w not in ex))
        path.append(cur)
    return tuple(path)


def simple_paths_from(g: Graph, source: int) -> Iterator[Path]:
    """Every simple path starting at ``source``, depth-first in id order."""
    stack = [(source,)]
    while stack:
        p = stack.pop()
        yield p
        on = set(p)
        for w in reversed(g.adj[p[-1]]):
            if w not in on:
                stack.append(p + (w,))


def connected(g: Graph, removed: Iterable[int] = ()) -> bool:
    gone = set(removed)
    keep = [x for x in range(g.n) if x not in gone]
    if len(keep) <= 1:
        return True
    seen = {keep[0]}
    q = deque([keep[0]])
    while q:
        x = q.popleft()
        for w in g.adj[x]:
            if w not in gone and w not in seen:
                seen.add(w)
                q.append(w)
    return len(seen) == len(keep)


def subsets_upto(nodes: Iterable[int], k: int) -> Iterator[tuple[int, ...]]:
    """Nonempty subsets of size at most k, by size then lexicographically."""
    items = sorted(nodes)
    for r in range(1, k + 1):
        yield from combinations(items, r)
