"""Exact search for pairwise node-disjoint families among recorded paths.

Each candidate path is reduced to the bitmask of nodes it must not share with
the other members of a family. A path whose mask contains another candidate's
mask can always be swapped for that smaller one, so only inclusion-minimal
masks are searched. The remaining search is a small depth-first set packing.
"""
from __future__ import annotations

from typing import Iterable, Sequence


def minimal_masks(masks: Iterable[int]) -> list[int]:
    ordered = sorted(set(masks), key=lambda m: (m.bit_count(), m))
    kept: list[int] = []
    for m in ordered:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def pack(masks: Sequence[int], k: int) -> list[int] | None:
    """Return ``k`` pairwise disjoint masks from ``masks`` (empty masks allowed once each), or None."""
    if k <= 0:
        return []
    zero = [m for m in masks if m == 0]
    if zero:
        rest = pack([m for m in masks if m != 0], k - 1)
        return None if rest is None else [0] + rest
    cands = minimal_masks(masks)
    if len(cands) < k:
        return None
    # only masks disjoint from some k-1 others matter; the DFS below finds them
    return _dfs(cands, k, 0, 0, [])


def _dfs(cands: list[int], k: int, start: int, used: int, chosen: list[int]) -> list[int] | None:
    if len(chosen) == k:
        return list(chosen)
    need = k - len(chosen)
    for i in range(start, len(cands) - need + 1):
        m = cands[i]
        if m & used:
            continue
        chosen.append(m)
        got = _dfs(cands, k, i + 1, used | m, chosen)
        if got is not None:
            return got
        chosen.pop()
    return None


def find_family(paths_by_mask: dict[int, tuple], k: int) -> tuple | None:
    """Pick ``k`` disjoint paths given a mask -> representative path mapping."""
    got = pack(list(paths_by_mask), k)
    if got is None:
        return None
    return tuple(paths_by_mask[m] for m in got)
