from __future__ import annotations

import itertools

import pytest

from forkalg.axioms import frame_condition_bd2, frame_condition_bw2
from forkalg.builtins import fork_frame, w_frame
from forkalg.catalog import (
    CatalogQuery,
    canonical_form,
    canonical_frame,
    count,
    enumerate_frames,
    fork_frames,
    posets,
    quasiorders,
)
from forkalg.errors import CapExceeded
from forkalg.frame import Frame, is_antisymmetric, is_connected, is_fork_frame, is_partial_order


def naive_classes(n: int, keep) -> int:
    """Isomorphism classes of labelled reflexive relations, by brute-force permutation."""
    cells = [(x, y) for x in range(n) for y in range(n) if x != y]
    seen: set[tuple] = set()
    classes = 0
    for bits in range(1 << len(cells)):
        rows = [1 << x for x in range(n)]
        for k, (x, y) in enumerate(cells):
            if bits >> k & 1:
                rows[x] |= 1 << y
        fr = Frame(n, tuple(rows))
        if not keep(fr) or fr.succ in seen:
            continue
        classes += 1
        for perm in itertools.permutations(range(n)):
            seen.add(fr.permute(perm).succ)
    return classes


def test_known_counts():
    by_size = lambda q: [sum(1 for f in enumerate_frames(q) if f.n == k) for k in range(1, q.max_points + 1)]
    assert by_size(CatalogQuery(5)) == [1, 3, 9, 33, 139]
    assert by_size(CatalogQuery(5, poset=True)) == [1, 2, 5, 16, 63]
    assert by_size(CatalogQuery(5, fork=True)) == [1, 2, 4, 8, 16]
    assert by_size(CatalogQuery(5, fork=True, connected=True)) == [1, 1, 2, 3, 6]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_posets_match_naive(n):
    q = CatalogQuery(n, poset=True, min_points=n)
    assert count(q) == naive_classes(n, is_partial_order)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fork_frames_match_naive(n):
    q = CatalogQuery(n, fork=True, min_points=n)
    assert count(q) == naive_classes(n, is_fork_frame)


def test_labelled_path_agrees():
    for n in (1, 2, 3):
        q = CatalogQuery(n, poset=True, min_points=n, up_to_iso=False)
        labelled = list(enumerate_frames(q))
        keys = {canonical_form(f) for f in labelled}
        assert len(keys) == count(CatalogQuery(n, poset=True, min_points=n))


def test_small_counts():
    assert len([f for f in posets(2) if f.n == 2]) == 2
    q = CatalogQuery(3, poset=True, connected=True, max_height=2, max_local_width=2, min_points=3)
    assert count(q) == 2
    assert count(CatalogQuery(1)) == 1


def test_canonical_form():
    f = fork_frame()
    assert canonical_form(f) == canonical_form(f.permute([2, 0, 1]).relabel("abc"))
    cofork = Frame.from_pairs(3, [(1, 0), (2, 0)], reflexive=True)
    assert canonical_form(f) != canonical_form(cofork)
    w = w_frame()
    # swap u with u' and t with w
    swapped = w.permute([1, 0, 4, 3, 2])
    assert swapped.succ == w.succ
    assert canonical_form(w) == canonical_form(w.permute([3, 1, 4, 0, 2]))
    assert canonical_frame(w).labels == tuple("01234")


def test_cap():
    with pytest.raises(CapExceeded):
        CatalogQuery(8)
    with pytest.raises(CapExceeded):
        canonical_form(Frame(10, tuple(1 << i for i in range(10))))


def test_fork_constraint_matches_predicates():
    forks = {canonical_form(f) for f in fork_frames(5)}
    for f in posets(5):
        want = frame_condition_bd2(f) and frame_condition_bw2(f) and is_antisymmetric(f)
        assert (canonical_form(f) in forks) == want
    assert all(is_connected(f) for f in fork_frames(5, connected=True))


def test_deterministic_order():
    assert quasiorders(4) == quasiorders(4)
    sizes = [f.n for f in quasiorders(4)]
    assert sizes == sorted(sizes)
