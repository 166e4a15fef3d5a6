"""Enumeration of small frames up to isomorphism.

Frames are grown one point at a time. Every constraint except connectivity
is inherited by induced subframes, so each level only extends frames that
already satisfy them; connectivity is filtered at the end.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from ._bits import iter_bits, popcount
from .errors import CapExceeded
from .frame import (
    Frame,
    is_antisymmetric,
    is_connected,
    is_quasiorder,
    order_stats,
)

HARD_CAP = 7


@dataclass(frozen=True)
class CatalogQuery:
    max_points: int
    quasiorder: bool = True
    poset: bool = False
    connected: bool = False
    max_height: int | None = None
    max_local_width: int | None = None
    fork: bool = False
    min_points: int = 1
    up_to_iso: bool = True
    cap: int = HARD_CAP

    def __post_init__(self) -> None:
        if self.max_points > self.cap:
            raise CapExceeded(f"{self.max_points} points exceeds the cap of {self.cap}")

    @property
    def effective_height(self) -> int | None:
        if self.fork:
            return 2 if self.max_height is None else min(2, self.max_height)
        return self.max_height

    @property
    def effective_local_width(self) -> int | None:
        if self.fork:
            return 2 if self.max_local_width is None else min(2, self.max_local_width)
        return self.max_local_width

    @property
    def needs_poset(self) -> bool:
        return self.poset or self.fork

    def hereditary_ok(self, f: Frame) -> bool:
        if not is_quasiorder(f):
            return False
        if self.needs_poset and not is_antisymmetric(f):
            return False
        h_cap, lw_cap = self.effective_height, self.effective_local_width
        if h_cap is not None or lw_cap is not None:
            h, _, lw = order_stats(f)
            if h_cap is not None and h > h_cap:
                return False
            if lw_cap is not None and lw > lw_cap:
                return False
        return True

    def accepts(self, f: Frame) -> bool:
        return self.hereditary_ok(f) and (not self.connected or is_connected(f))


def _invariants(f: Frame) -> list[tuple[int, int, int]]:
    return [
        (popcount(f.succ[x]), popcount(f.pred[x]), f.succ[x] >> x & 1) for x in range(f.n)
    ]


def _bitstring(f: Frame, order: tuple[int, ...]) -> int:
    """Adjacency matrix read row-major after placing ``order[i]`` at position ``i``."""
    pos = {x: i for i, x in enumerate(order)}
    key = 0
    for x in order:
        row = 0
        for y in iter_bits(f.succ[x]):
            row |= 1 << (f.n - 1 - pos[y])
        key = (key << f.n) | row
    return key


def _canonical(f: Frame) -> tuple[tuple, tuple[int, ...]]:
    inv = _invariants(f)
    groups: dict[tuple, list[int]] = {}
    for x in range(f.n):
        groups.setdefault(inv[x], []).append(x)
    keys = sorted(groups)
    best, best_order = -1, tuple(range(f.n))
    for parts in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        order = tuple(x for part in parts for x in part)
        bits = _bitstring(f, order)
        if bits > best:
            best, best_order = bits, order
    signature = tuple(k + (len(groups[k]),) for k in keys)
    return (f.n, signature, best), best_order


def canonical_form(f: Frame, cap: int = 9) -> tuple:
    """Isomorphism-invariant key.

    Points are sorted by (out-degree, in-degree, loop); the key is the
    invariant vector plus the greatest adjacency bit-string over all orderings
    that respect it.
    """
    if f.n > cap:
        raise CapExceeded(f"canonical form limited to {cap} points")
    return _canonical(f)[0]


def canonical_frame(f: Frame) -> Frame:
    """A representative of the isomorphism class of ``f`` with labels 0..n-1."""
    _, order = _canonical(f)
    perm = [0] * f.n
    for i, x in enumerate(order):
        perm[x] = i
    return f.permute(perm).relabel([str(i) for i in range(f.n)])


def _extensions(base: Frame) -> Iterator[Frame]:
    """All one-point extensions of ``base``; the new point is index ``base.n``."""
    n = base.n
    new = 1 << n
    for down in range(1 << n):
        for up in range(1 << n):
            rows = [r | (new if down >> x & 1 else 0) for x, r in enumerate(base.succ)]
            rows.append(up | new)
            yield Frame(n + 1, tuple(rows))


def _layers(q: CatalogQuery) -> Iterator[list[Frame]]:
    layer = [Frame(1, (1,))]
    yield layer
    for _ in range(2, q.max_points + 1):
        seen: dict[tuple, Frame] = {}
        for base in layer:
            for cand in _extensions(base):
                if not q.hereditary_ok(cand):
                    continue
                key = canonical_form(cand)
                if key not in seen:
                    seen[key] = canonical_frame(cand)
        layer = [seen[k] for k in sorted(seen)]
        yield layer


def enumerate_frames(q: CatalogQuery) -> Iterator[Frame]:
    """Every frame meeting the query exactly once up to isomorphism.

    Output is ordered by point count, then by canonical key.
    """
    if not q.up_to_iso:
        yield from _labelled(q)
        return
    if not q.quasiorder and not q.needs_poset:
        raise ValueError("only quasiorder-based catalogs are supported up to isomorphism")
    for size, layer in enumerate(_layers(q), start=1):
        if size < q.min_points:
            continue
        for fr in layer:
            if q.accepts(fr):
                yield fr


def _labelled(q: CatalogQuery) -> Iterator[Frame]:
    for n in range(q.min_points, q.max_points + 1):
        cells = [(x, y) for x in range(n) for y in range(n) if x != y]
        for bits in range(1 << len(cells)):
            rows = [1 << x for x in range(n)]
            for k, (x, y) in enumerate(cells):
                if bits >> k & 1:
                    rows[x] |= 1 << y
            fr = Frame(n, tuple(rows))
            if q.accepts(fr):
                yield fr


def count(q: CatalogQuery) -> int:
    return sum(1 for _ in enumerate_frames(q))


def fork_frames(max_points: int, *, connected: bool = False) -> list[Frame]:
    return list(enumerate_frames(CatalogQuery(max_points, fork=True, connected=connected)))


def quasiorders(max_points: int) -> list[Frame]:
    return list(enumerate_frames(CatalogQuery(max_points)))


def posets(max_points: int, *, connected: bool = False) -> list[Frame]:
    return list(enumerate_frames(CatalogQuery(max_points, poset=True, connected=connected)))
