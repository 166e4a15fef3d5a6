from __future__ import annotations

from hypothesis import strategies as st

from forkalg.frame import Frame, reflexive_transitive_closure


@st.composite
def quasiorders(draw, max_points: int = 5, min_points: int = 1) -> Frame:
    n = draw(st.integers(min_points, max_points))
    rows = [draw(st.integers(0, (1 << n) - 1)) for _ in range(n)]
    return reflexive_transitive_closure(Frame(n, tuple(rows)))


@st.composite
def posets(draw, max_points: int = 5) -> Frame:
    """Random partial orders: closure of a relation that only points upward."""
    n = draw(st.integers(1, max_points))
    rows = []
    for x in range(n):
        higher = ((1 << n) - 1) & ~((1 << (x + 1)) - 1)
        rows.append(draw(st.integers(0, (1 << n) - 1)) & higher)
    fr = reflexive_transitive_closure(Frame(n, tuple(rows)))
    perm = draw(st.permutations(range(n)))
    return fr.permute(perm)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for r in sorted(RESULTS, key=lambda r: r.number):
            terminalreporter.write_line(r.line())
