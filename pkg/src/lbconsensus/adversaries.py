"""Byzantine behaviours, built by rewriting what an honest copy of the node would send.

Every strategy except ``silent``, ``garbage`` and ``script`` runs the honest
protocol machine for the faulty node on its real inbox and transforms each
outgoing batch. A message is an *initiation* when its path is empty and a
*relay* otherwise. Transforms are memoized per batch object so that the
flooding memo keeps hitting across runs.

Spec strings::

    silent                  send nothing (receivers substitute their default)
    constant:<b>            initiate b, relay honestly
    flip                    initiate the opposite of the honest value
    tamper:all              relay every message with its value flipped
    tamper:alternate        flip every other relayed message in a batch
    tamper:origin=<x>       flip relays whose path starts at x
    tamper:via=<x>          flip relays whose path contains x
    tamper:first-hop=<x>    flip relays that arrived directly from neighbour x
    equivocate              send each neighbour w the value w mod 2 on every message
    equivocate:<w>=<b>,...  per-neighbour values (others get w mod 2)
    garbage                 replace every batch with undecodable bytes
    script:<file>           replay a recorded table verbatim
    <a>/<b>                 strategy a for equivocating nodes, b for the others
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path as FsPath

from .netsim import Targeted
from .protocols.flooding import is_bit
from .protocols.payloads import Decision, Report, TraceCodec

GARBAGE = b"\x00\xffnot-a-flood-message"


def flip_value(val, memo: dict | None = None):
    if is_bit(val):
        return 1 - val
    if type(val) is Decision:
        return Decision(1 - val)
    if isinstance(val, Report):
        hit = memo.get(("rep", id(val))) if memo is not None else None
        if hit is not None:
            return hit[0]
        out = Report((z, r, _flip_batch(p, memo)) for z, r, p in val)
        if memo is not None:
            memo[("rep", id(val))] = (out, val)
        return out
    return val


def _flip_batch(payload, memo):
    if type(payload) is not tuple:
        return payload
    if memo is not None:
        hit = memo.get(("batch", id(payload)))
        if hit is not None and hit[1] is payload:
            return hit[0]
    out = []
    for m in payload:
        if isinstance(m, tuple) and len(m) == 2:
            out.append((flip_value(m[0], memo), m[1]))
        else:
            out.append(m)
    out = tuple(out)
    if memo is not None:
        memo[("batch", id(payload))] = (out, payload)
    return out


def _set_value(val, bit):
    if is_bit(val):
        return bit
    if type(val) is Decision:
        return Decision(bit)
    return val


@dataclass(frozen=True)
class Strategy:
    spec: str
    equivocating: bool = False

    def machine(self, protocol, v: int, bit: int, equivocating: bool = False):
        return _Wrapped(self, protocol, v, bit)

    def rewrite(self, protocol, v: int, payload, memo: dict) -> list:
        """Outgoing items replacing one honest payload."""
        return [payload]


class _Wrapped:
    __slots__ = ("strategy", "protocol", "v", "inner", "decision", "memo")

    def __init__(self, strategy: Strategy, protocol, v: int, bit: int):
        self.strategy = strategy
        self.protocol = protocol
        self.v = v
        self.inner = protocol.node(v, bit)
        self.decision = None
        self.memo = protocol.cache if hasattr(protocol, "cache") else {}

    def step(self, r, inbox):
        out = self.inner.step(r, inbox)
        if not out:
            return ()
        res = []
        memo = self.memo
        for payload in out:
            key = (self.strategy.spec, self.v, id(payload))
            hit = memo.get(key)
            if hit is None or hit[1] is not payload:
                hit = memo[key] = (self.strategy.rewrite(self.protocol, self.v, payload, memo), payload)
            res.extend(hit[0])
        return res


def _map_messages(payload, fn):
    if type(payload) is not tuple:
        return payload
    changed = False
    out = []
    for i, m in enumerate(payload):
        new = fn(i, m)
        changed |= new is not m
        out.append(new)
    return tuple(out) if changed else payload


@dataclass(frozen=True)
class Silent(Strategy):
    def machine(self, protocol, v, bit, equivocating=False):
        return _Quiet()


class _Quiet:
    decision = None

    def step(self, r, inbox):
        return ()


@dataclass(frozen=True)
class Constant(Strategy):
    bit: int = 0

    def rewrite(self, protocol, v, payload, memo):
        return [_map_messages(payload, lambda i, m: (_set_value(m[0], self.bit), m[1]) if _is_init(m) else m)]


@dataclass(frozen=True)
class Flip(Strategy):
    def rewrite(self, protocol, v, payload, memo):
        return [_map_messages(payload, lambda i, m: (flip_value(m[0], memo), m[1]) if _is_init(m) else m)]


def _is_init(m) -> bool:
    return isinstance(m, tuple) and len(m) == 2 and m[1] == ()


def _is_relay(m) -> bool:
    return isinstance(m, tuple) and len(m) == 2 and isinstance(m[1], tuple) and len(m[1]) > 0


@dataclass(frozen=True)
class Tamper(Strategy):
    rule: str = "all"
    target: int | None = None

    def matches(self, i: int, path: tuple) -> bool:
        if self.rule == "all":
            return True
        if self.rule == "alternate":
            return i % 2 == 0
        if self.rule == "origin":
            return path[0] == self.target
        if self.rule == "via":
            return self.target in path
        if self.rule == "first-hop":
            return path[-1] == self.target
        raise ValueError(f"unknown tamper rule {self.rule!r}")

    def rewrite(self, protocol, v, payload, memo):
        def fn(i, m):
            if _is_relay(m) and self.matches(i, m[1]):
                return (flip_value(m[0], memo), m[1])
            return m

        return [_map_messages(payload, fn)]


@dataclass(frozen=True)
class Equivocate(Strategy):
    values: tuple = ()  # sorted (neighbour, bit) pairs
    equivocating: bool = True

    def value_for(self, w: int) -> int:
        return dict(self.values).get(w, w % 2)

    def rewrite(self, protocol, v, payload, memo):
        out = []
        for w in protocol.g.adj[v]:
            b = self.value_for(w)
            sent = _map_messages(payload, lambda i, m: (_set_value(m[0], b), m[1]) if isinstance(m, tuple) and len(m) == 2 else m)
            out.append(Targeted(w, sent))
        return out


@dataclass(frozen=True)
class Garbage(Strategy):
    def rewrite(self, protocol, v, payload, memo):
        return [GARBAGE]


@dataclass(frozen=True)
class Scripted(Strategy):
    """Replays ``table[node][round]``, a list of ``(audience, payload)``; audience None broadcasts."""

    table: dict = field(default_factory=dict, hash=False, compare=False)

    def machine(self, protocol, v, bit, equivocating=False):
        return _Replay(self.table.get(v, {}))


class _Replay:
    __slots__ = ("rows", "decision")

    def __init__(self, rows):
        self.rows = rows
        self.decision = None

    def step(self, r, inbox):
        return [p if aud is None else Targeted(aud, p) for aud, p in self.rows.get(r, ())]


@dataclass(frozen=True)
class Composite(Strategy):
    """``equivocator`` drives registered equivocating nodes, ``other`` the rest."""

    equivocator: Strategy | None = None
    other: Strategy | None = None

    def machine(self, protocol, v, bit, equivocating=False):
        s = self.equivocator if equivocating else self.other
        return s.machine(protocol, v, bit, equivocating)


def write_script(path, table: dict) -> None:
    """Write a replay table: ``NODE <v>`` blocks of ``<round> <audience> <payload-hex>`` lines."""
    codec = TraceCodec()
    body = []
    for v in sorted(table):
        body.append(f"NODE {v}")
        for r in sorted(table[v]):
            for aud, p in table[v][r]:
                a = "B" if aud is None else f"T{aud}"
                body.append(f"{r} {a} {codec.encode(p).hex()}")
    FsPath(path).write_text("\n".join(codec.header() + body) + "\n")


def read_script(path) -> dict:
    codec = TraceCodec()
    table: dict = {}
    cur = None
    for line in FsPath(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("REPORT "):
            codec.load_header_line(line)
            continue
        if line.startswith("NODE "):
            cur = table.setdefault(int(line.split()[1]), {})
            continue
        if cur is None:
            raise ValueError("script row before any NODE line")
        r, aud, hexed = line.split(" ")
        target = None if aud == "B" else int(aud[1:])
        cur.setdefault(int(r), []).append((target, codec.decode(bytes.fromhex(hexed))))
    return table


def parse_strategy(spec: str) -> Strategy:
    spec = spec.strip()
    if spec.startswith("script:") and len(spec) > 7:
        return Scripted(spec, table=read_script(spec[7:]))
    if "/" in spec:
        a, b = spec.split("/", 1)
        return Composite(spec, equivocator=parse_strategy(a), other=parse_strategy(b))
    kind, _, arg = spec.partition(":")
    if kind == "silent" and not arg:
        return Silent(spec)
    if kind == "constant" and arg in ("0", "1"):
        return Constant(spec, bit=int(arg))
    if kind in ("flip", "input-flip") and not arg:
        return Flip(spec)
    if kind == "tamper":
        rule, _, target = arg.partition("=")
        if rule in ("all", "alternate") and not target:
            return Tamper(spec, rule=rule)
        if rule in ("origin", "via", "first-hop") and target.isdigit():
            return Tamper(spec, rule=rule, target=int(target))
    if kind == "equivocate":
        pairs = []
        if arg:
            for part in arg.split(","):
                w, _, b = part.partition("=")
                if not (w.strip().isdigit() and b.strip() in ("0", "1")):
                    raise ValueError(f"bad equivocation entry {part!r} in {spec!r}")
                pairs.append((int(w), int(b)))
        return Equivocate(spec, values=tuple(sorted(pairs)))
    if kind == "garbage" and not arg:
        return Garbage(spec)
    raise ValueError(f"unknown strategy spec {spec!r}")


def split_strategy_list(text: str) -> list[str]:
    """Split a comma list of specs, keeping ``equivocate:3=0,4=1`` in one piece."""
    out: list[str] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if out and ":" not in part and "=" in part and "/" not in part:
            out[-1] += "," + part
        else:
            out.append(part)
    return out


def act(strategy: Strategy, protocol, v: int, payload) -> list:
    """One-shot rewrite of an honest payload (the per-message policy, without memo)."""
    return strategy.rewrite(protocol, v, payload, {})
