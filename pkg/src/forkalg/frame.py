"""Finite frames, their order statistics, generated subframes and bounded morphisms.

Points are indexed ``0..n-1``. A relation is stored row-wise as bit masks:
``succ[x]`` has bit ``y`` set iff ``x R y``. Point sets are plain ``int`` masks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from ._bits import bits_list, from_indices, full, iter_bits, lowest, popcount
from .errors import NotForkFrame, NotQuasiorder, SearchBudgetExceeded

PointSet = int


@dataclass(frozen=True)
class Frame:
    n: int
    succ: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.succ) != self.n:
            raise ValueError("succ must have one row per point")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.n)))
        if len(self.labels) != self.n:
            raise ValueError("labels must name every point")
        if len(set(self.labels)) != self.n:
            raise ValueError("labels must be distinct")
        top = full(self.n)
        if any(row & ~top for row in self.succ):
            raise ValueError("relation refers to points outside the frame")

    # construction ---------------------------------------------------------

    @classmethod
    def from_pairs(
        cls,
        points: int | Sequence[str],
        pairs: Iterable[tuple],
        *,
        reflexive: bool = False,
    ) -> Frame:
        """Build a frame from ordered pairs given as indices or labels."""
        if isinstance(points, int):
            n, labels = points, ()
        else:
            labels = tuple(points)
            n = len(labels)
        if n < 1:
            raise ValueError("a frame needs at least one point")
        index = {lab: i for i, lab in enumerate(labels)}
        rows = [0] * n
        for a, b in pairs:
            i = index[a] if isinstance(a, str) else a
            j = index[b] if isinstance(b, str) else b
            rows[i] |= 1 << j
        if reflexive:
            rows = [r | (1 << i) for i, r in enumerate(rows)]
        return cls(n, tuple(rows), labels)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[bool]], labels: Sequence[str] = ()) -> Frame:
        rows = tuple(from_indices(j for j, v in enumerate(row) if v) for row in matrix)
        return cls(len(rows), rows, tuple(labels))

    @classmethod
    def empty(cls) -> Frame:
        """The frame with no points; only used as the dual of the trivial algebra."""
        return cls(0, ())

    # basic access ---------------------------------------------------------

    def rel(self, x: int, y: int) -> bool:
        return bool(self.succ[x] >> y & 1)

    def matrix(self) -> list[list[bool]]:
        return [[self.rel(x, y) for y in range(self.n)] for x in range(self.n)]

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in iter_bits(self.succ[x])]

    @property
    def all_points(self) -> PointSet:
        return full(self.n)

    @cached_property
    def pred(self) -> tuple[int, ...]:
        """Rows of the converse relation."""
        rows = [0] * self.n
        for x in range(self.n):
            for y in iter_bits(self.succ[x]):
                rows[y] |= 1 << x
        return tuple(rows)

    def up(self, x: int) -> PointSet:
        return self.succ[x]

    def down(self, x: int) -> PointSet:
        return self.pred[x]

    def strict_up(self, x: int) -> PointSet:
        """Points strictly above ``x``: ``x R y`` but not ``y R x``."""
        return self.succ[x] & ~self.pred[x]

    def strict_down(self, x: int) -> PointSet:
        return self.pred[x] & ~self.succ[x]

    def up_set(self, s: PointSet) -> PointSet:
        out = 0
        for x in iter_bits(s):
            out |= self.succ[x]
        return out

    def down_set(self, s: PointSet) -> PointSet:
        out = 0
        for x in iter_bits(s):
            out |= self.pred[x]
        return out

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no point named {label!r}") from None

    def mask(self, labels: Iterable[str]) -> PointSet:
        return from_indices(self.index(lab) for lab in labels)

    def names(self, s: PointSet) -> list[str]:
        return [self.labels[i] for i in iter_bits(s)]

    def transpose(self) -> Frame:
        return Frame(self.n, self.pred, self.labels)

    def relabel(self, labels: Sequence[str]) -> Frame:
        return Frame(self.n, self.succ, tuple(labels))

    def permute(self, perm: Sequence[int]) -> Frame:
        """Move point ``i`` to position ``perm[i]``."""
        rows = [0] * self.n
        labels = [""] * self.n
        for x in range(self.n):
            rows[perm[x]] = from_indices(perm[y] for y in iter_bits(self.succ[x]))
            labels[perm[x]] = self.labels[x]
        return Frame(self.n, tuple(rows), tuple(labels))

    def __repr__(self) -> str:
        edges = ", ".join(
            f"{self.labels[x]}<{self.labels[y]}" for x, y in self.pairs() if x != y
        )
        return f"Frame(n={self.n}, {edges or 'no proper edges'})"


@dataclass(frozen=True)
class Morphism:
    source: Frame
    target: Frame
    map: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.map) != self.source.n:
            raise ValueError("morphism must be total on the source")
        if any(not 0 <= m < self.target.n for m in self.map):
            raise ValueError("morphism maps outside the target")

    def __call__(self, x: int) -> int:
        return self.map[x]

    def image(self) -> PointSet:
        return from_indices(self.map)

    def preimage(self, s: PointSet) -> PointSet:
        return from_indices(x for x, m in enumerate(self.map) if s >> m & 1)

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def is_surjective(self) -> bool:
        return self.image() == self.target.all_points

    def then(self, other: Morphism) -> Morphism:
        """``other`` after ``self``."""
        return Morphism(self.source, other.target, tuple(other.map[m] for m in self.map))

    def as_dict(self) -> dict[str, str]:
        return {
            self.source.labels[x]: self.target.labels[m] for x, m in enumerate(self.map)
        }


@dataclass(frozen=True)
class ClusterPoset:
    """Clusters of a quasiorder and the partial order they inherit."""

    classes: tuple[PointSet, ...]
    # above[i]: mask over cluster indices strictly above cluster i
    above: tuple[int, ...] = field(repr=False)

    def representative(self, i: int) -> int:
        return lowest(self.classes[i])


# predicates ---------------------------------------------------------------


def is_reflexive(f: Frame) -> bool:
    return all(f.succ[x] >> x & 1 for x in range(f.n))


def is_transitive(f: Frame) -> bool:
    return all(f.up_set(f.succ[x]) & ~f.succ[x] == 0 for x in range(f.n))


def is_quasiorder(f: Frame) -> bool:
    return is_reflexive(f) and is_transitive(f)


def is_antisymmetric(f: Frame) -> bool:
    return all(f.succ[x] & f.pred[x] == 1 << x or f.succ[x] & f.pred[x] == 0 for x in range(f.n))


def is_partial_order(f: Frame) -> bool:
    return is_quasiorder(f) and is_antisymmetric(f)


def require_quasiorder(f: Frame) -> None:
    if not is_quasiorder(f):
        raise NotQuasiorder("relation is not reflexive and transitive")


def reflexive_transitive_closure(f: Frame) -> Frame:
    rows = [r | (1 << i) for i, r in enumerate(f.succ)]
    for k in range(f.n):
        bit = 1 << k
        for i in range(f.n):
            if rows[i] & bit:
                rows[i] |= rows[k]
    return Frame(f.n, tuple(rows), f.labels)


# connectivity -------------------------------------------------------------


def components(f: Frame) -> list[PointSet]:
    """Maximal connected sets under R and its converse, ordered by least point."""
    seen = 0
    out = []
    for start in range(f.n):
        if seen >> start & 1:
            continue
        comp = frontier = 1 << start
        while frontier:
            nxt = 0
            for x in iter_bits(frontier):
                nxt |= f.succ[x] | f.pred[x]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        out.append(comp)
    return out


def is_connected(f: Frame) -> bool:
    return f.n > 0 and len(components(f)) == 1


# clusters and order statistics ---------------------------------------------


def cluster_poset(f: Frame) -> ClusterPoset:
    require_quasiorder(f)
    classes: list[int] = []
    owner = [-1] * f.n
    for x in range(f.n):
        if owner[x] < 0:
            cls = f.succ[x] & f.pred[x]
            for y in iter_bits(cls):
                owner[y] = len(classes)
            classes.append(cls)
    above = []
    for cls in classes:
        x = lowest(cls)
        above.append(from_indices(owner[y] for y in iter_bits(f.strict_up(x))))
    return ClusterPoset(tuple(classes), tuple(above))


def _height(above: Sequence[int]) -> int:
    memo: dict[int, int] = {}

    def longest(i: int) -> int:
        if i not in memo:
            memo[i] = 1 + max((longest(j) for j in iter_bits(above[i])), default=0)
        return memo[i]

    return max((longest(i) for i in range(len(above))), default=0)


def _width(above: Sequence[int], members: int) -> int:
    """Largest antichain among ``members`` of a strict order (Dilworth via matching)."""
    nodes = bits_list(members)
    match_right: dict[int, int] = {}

    def augment(i: int, visited: set[int]) -> bool:
        for j in iter_bits(above[i] & members):
            if j in visited:
                continue
            visited.add(j)
            if j not in match_right or augment(match_right[j], visited):
                match_right[j] = i
                return True
        return False

    matched = sum(augment(i, set()) for i in nodes)
    return len(nodes) - matched


def order_stats(f: Frame) -> tuple[int, int, int]:
    """Height, width and local width, all measured on clusters."""
    cp = cluster_poset(f)
    m = len(cp.classes)
    height = _height(cp.above)
    width = _width(cp.above, full(m))
    local = max(_width(cp.above, cp.above[i] | (1 << i)) for i in range(m))
    return height, width, local


def is_fork_frame(f: Frame) -> bool:
    """Partial order of height at most 2 and local width at most 2."""
    if f.n == 0 or not is_partial_order(f):
        return False
    h, _, lw = order_stats(f)
    return h <= 2 and lw <= 2


def levels(f: Frame) -> tuple[PointSet, PointSet]:
    """Lower and upper level of a partial order of height at most 2.

    The upper level holds the points with something strictly below them;
    every other point, isolated ones included, is on the lower level.
    """
    if f.n == 0 or not is_partial_order(f) or order_stats(f)[0] > 2:
        raise NotForkFrame("levels need a partial order of height at most 2")
    upper = from_indices(x for x in range(f.n) if f.strict_down(x))
    return f.all_points & ~upper, upper


def maximal_points(f: Frame) -> PointSet:
    return from_indices(x for x in range(f.n) if not f.strict_up(x))


# subframes and morphisms ----------------------------------------------------


def subframe(f: Frame, s: PointSet) -> tuple[Frame, Morphism]:
    """Induced substructure on ``s`` together with its inclusion map."""
    pts = bits_list(s)
    pos = {x: i for i, x in enumerate(pts)}
    rows = tuple(from_indices(pos[y] for y in iter_bits(f.succ[x] & s)) for x in pts)
    sub = Frame(len(pts), rows, tuple(f.labels[x] for x in pts))
    return sub, Morphism(sub, f, tuple(pts))


def disjoint_union(f1: Frame, f2: Frame) -> Frame:
    shift = f1.n
    rows = f1.succ + tuple(r << shift for r in f2.succ)
    labels = [*f1.labels, *f2.labels]
    if len(set(labels)) != len(labels):
        labels = [f"{lab}.1" for lab in f1.labels] + [f"{lab}.2" for lab in f2.labels]
    return Frame(f1.n + f2.n, rows, tuple(labels))


def is_up_closed(f: Frame, s: PointSet) -> bool:
    return f.up_set(s) & ~s == 0


def is_generated_subframe(sub: Frame, sup: Frame, embedding: Morphism) -> bool:
    """Image is up-closed in ``sup`` and ``sub`` carries exactly the induced relation."""
    if embedding.source != sub or embedding.target != sup or not embedding.is_injective():
        return False
    e = embedding.map
    for x in range(sub.n):
        for y in range(sub.n):
            if sub.rel(x, y) != sup.rel(e[x], e[y]):
                return False
    return is_up_closed(sup, embedding.image())


def is_bounded_morphism(m: Morphism) -> bool:
    src, dst, g = m.source, m.target, m.map
    for x in range(src.n):
        image_up = 0
        for y in iter_bits(src.succ[x]):
            if not dst.rel(g[x], g[y]):
                return False
            image_up |= 1 << g[y]
        if dst.succ[g[x]] & ~image_up:
            return False
    return True


def search_bounded_morphisms(
    src: Frame,
    dst: Frame,
    *,
    domains: Sequence[int] | None = None,
    injective: bool = False,
    surjective: bool = False,
    budget: int | None = None,
) -> Iterator[tuple[int, ...]]:
    """Backtracking enumeration of bounded morphisms ``src -> dst``.

    ``domains[x]`` restricts the candidate images of ``x``. Maps are produced
    in lexicographic order of the image tuple. ``budget`` caps the number of
    tentative placements.
    """
    n = src.n
    if n == 0:
        if dst.n == 0 or not surjective:
            yield ()
        return
    if dst.n == 0:
        return
    doms = list(domains) if domains is not None else [dst.all_points] * n
    # back condition at x can be checked once every successor of x is placed
    ready: list[list[int]] = [[] for _ in range(n)]
    for x in range(n):
        ready[max(iter_bits(src.succ[x] | (1 << x)))].append(x)
    g = [0] * n
    used = 0
    nodes = 0

    def place(k: int) -> Iterator[tuple[int, ...]]:
        nonlocal used, nodes
        if k == n:
            if not surjective or used == dst.all_points:
                yield tuple(g)
            return
        if surjective and popcount(dst.all_points & ~used) > n - k:
            return
        cand = doms[k]
        if injective:
            cand &= ~used
        for c in iter_bits(cand):
            nodes += 1
            if budget is not None and nodes > budget:
                raise SearchBudgetExceeded(f"morphism search exceeded {budget} placements")
            ok = True
            for y in iter_bits(src.succ[k] & ((1 << (k + 1)) - 1)):
                gy = c if y == k else g[y]
                if not dst.rel(c, gy):
                    ok = False
                    break
            if ok:
                for y in iter_bits(src.pred[k] & ((1 << k) - 1)):
                    if not dst.rel(g[y], c):
                        ok = False
                        break
            if not ok:
                continue
            g[k] = c
            for x in ready[k]:
                image_up = from_indices(g[y] for y in iter_bits(src.succ[x]))
                if dst.succ[g[x]] & ~image_up:
                    ok = False
                    break
            if not ok:
                continue
            before = used
            used |= 1 << c
            yield from place(k + 1)
            used = before

    yield from place(0)


# mu-sets --------------------------------------------------------------------


UNITARY = "1"
FINITARY = "omega"
INFINITARY = "infinity"
NULLARY = "0"


def dense_antichains(f: Frame) -> list[PointSet]:
    """All dense antichains built from cluster representatives.

    Exhaustive include/exclude search over clusters with two sound prunings:
    a maximal cluster can never be left out (nothing else lies above it), and
    a cluster comparable to an included one can never be added.
    """
    cp = cluster_poset(f)
    m = len(cp.classes)
    below = [0] * m
    for i in range(m):
        for j in iter_bits(cp.above[i]):
            below[j] |= 1 << i
    comparable = [cp.above[i] | below[i] for i in range(m)]
    maximal = [cp.above[i] == 0 for i in range(m)]
    order = sorted(range(m), key=lambda i: (not maximal[i], i))
    found: list[PointSet] = []

    def covered(chosen: int) -> bool:
        reach = chosen
        for i in iter_bits(chosen):
            reach |= below[i]
        return reach == full(m)

    def step(k: int, chosen: int) -> None:
        if k == m:
            if chosen and covered(chosen):
                found.append(from_indices(cp.representative(i) for i in iter_bits(chosen)))
            return
        i = order[k]
        if not comparable[i] & chosen:
            step(k + 1, chosen | (1 << i))
        if not maximal[i]:
            step(k + 1, chosen)

    step(0, 0)
    return sorted(found)


def mu_sets(f: Frame) -> tuple[list[PointSet], str]:
    """Dense antichains of a finite quasiorder and the resulting type tag."""
    require_quasiorder(f)
    found = dense_antichains(f)
    sizes = {popcount(s) for s in found}
    if len(sizes) > 1:
        raise AssertionError(f"mu-sets of different cardinalities: {sorted(sizes)}")
    if not found:
        return found, NULLARY
    return found, UNITARY if sizes == {1} else FINITARY
