"""In-memory message shapes and their canonical text encoding.

A flood message is a pair ``(value, path)`` with ``path`` a tuple of node ids
(``()`` is the empty path). ``value`` is a bit, a :class:`Report` bundle or a
:class:`Decision`. Honest nodes transmit one *batch* per round: a tuple of
messages. Anything else a Byzantine node puts on the wire is kept as-is and
encoded as ``X <hex>``.

Text grammar (a batch joins its messages with ``;``)::

    F <bit> <path>                     flooded bit
    D <bit> <path>                     flooded decision
    P <path> [R <z> <round> {<batch>},...]   flooded report bundle
    X <hex>                            opaque bytes

Paths are dash-joined ids, or ``⊥`` when empty.

Trace and script files use :class:`TraceCodec`, which writes each distinct
report bundle once as a ``REPORT <k> <hex>`` header line and refers to it as
``P <path> @<k>`` afterwards. Report bundles are flooded unchanged along every
path, so this keeps files proportional to the number of distinct bundles.
"""
from __future__ import annotations

from typing import Any

EMPTY_PATH_TOKEN = "⊥"


class Report(tuple):
    """Items ``(sender, round, payload)`` a node heard from its neighbours."""

    __slots__ = ()


class Decision(int):
    __slots__ = ()


def encode_path(path) -> str:
    return "-".join(map(str, path)) if path else EMPTY_PATH_TOKEN


def decode_path(text: str) -> tuple[int, ...]:
    if text == EMPTY_PATH_TOKEN:
        return ()
    return tuple(int(x) for x in text.split("-"))


def encode_message(msg, codec=None) -> str:
    if not (isinstance(msg, tuple) and len(msg) == 2 and isinstance(msg[1], tuple)):
        return encode_opaque(msg)
    value, path = msg
    try:
        p = encode_path(path)
    except (TypeError, ValueError):
        return encode_opaque(msg)
    if isinstance(value, Report):
        if codec is not None:
            return f"P {p} @{codec.intern(value)}"
        return f"P {p} [{encode_report(value)}]"
    if isinstance(value, Decision):
        return f"D {int(value)} {p}"
    if type(value) is int and value in (0, 1):
        return f"F {value} {p}"
    return encode_opaque(msg)


def encode_report(rep: Report, codec=None) -> str:
    return ",".join(f"R {z} {r} {{{encode_payload(p, codec)}}}" for z, r, p in rep)


def encode_opaque(obj) -> str:
    raw = obj if isinstance(obj, bytes) else repr(obj).encode()
    return "X " + raw.hex()


def encode_payload(payload, codec=None) -> str:
    if isinstance(payload, tuple) and not isinstance(payload, Report):
        return ";".join(encode_message(m, codec) for m in payload)
    return encode_opaque(payload)


def serialize(payload) -> bytes:
    return encode_payload(payload).encode()


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "[{":
            depth += 1
        elif ch in "]}":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def decode_message(text: str, codec=None) -> Any:
    kind, _, rest = text.partition(" ")
    if kind == "F":
        bit, p = rest.split(" ")
        return (int(bit), decode_path(p))
    if kind == "D":
        bit, p = rest.split(" ")
        return (Decision(int(bit)), decode_path(p))
    if kind == "P":
        p, _, body = rest.partition(" ")
        if body.startswith("@") and codec is not None:
            return (codec.lookup(int(body[1:])), decode_path(p))
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"bad report bundle {body!r}")
        return (decode_report(body[1:-1], codec), decode_path(p))
    if kind == "X":
        return bytes.fromhex(rest)
    raise ValueError(f"unknown message kind {kind!r}")


def decode_report(text: str, codec=None) -> Report:
    items = []
    if text:
        for part in _split_top(text, ","):
            tag, z, r, inner = part.split(" ", 3)
            if tag != "R" or not (inner.startswith("{") and inner.endswith("}")):
                raise ValueError(f"bad report item {part!r}")
            items.append((int(z), int(r), decode_payload(inner[1:-1], codec)))
    return Report(items)


def decode_payload(text: str, codec=None) -> Any:
    if text.startswith("X "):
        return bytes.fromhex(text[2:])
    if text == "":
        return ()
    return tuple(decode_message(m, codec) for m in _split_top(text, ";"))


def deserialize(raw: bytes) -> Any:
    return decode_payload(raw.decode())


class TraceCodec:
    """Stateful encoder/decoder that interns report bundles (see module docstring)."""

    def __init__(self):
        self._ids: dict[int, int] = {}
        self._keep: list[Report] = []
        self._lines: list[str] = []
        self._payload_cache: dict[int, tuple[Any, bytes]] = {}

    def intern(self, rep: Report) -> int:
        k = self._ids.get(id(rep))
        if k is None:
            for j, other in enumerate(self._keep):
                if other == rep:
                    k = j
                    break
            else:
                body = encode_report(rep, self)
                k = len(self._keep)
                self._keep.append(rep)
                self._lines.append(f"REPORT {k} {body.encode().hex()}")
            self._ids[id(rep)] = k
        return k

    def lookup(self, k: int) -> Report:
        return self._keep[k]

    def encode(self, payload) -> bytes:
        hit = self._payload_cache.get(id(payload))
        if hit is not None and hit[0] is payload:
            return hit[1]
        raw = encode_payload(payload, self).encode()
        self._payload_cache[id(payload)] = (payload, raw)
        return raw

    def header(self) -> list[str]:
        return list(self._lines)

    def load_header_line(self, line: str) -> None:
        tag, k, hexed = line.split(" ", 2)
        if tag != "REPORT" or int(k) != len(self._keep):
            raise ValueError(f"bad or out-of-order report line {line[:40]!r}")
        self._keep.append(decode_report(bytes.fromhex(hexed).decode(), self))

    def decode(self, raw: bytes) -> Any:
        return decode_payload(raw.decode(), self)
