from __future__ import annotations

import pytest

from forkalg.algebra import cm, product, trivial_algebra, two
from forkalg.axioms import (
    BUILTINS,
    FORK_AXIOMS,
    atom_shape_checks,
    check_axiom,
    check_equation,
    frame_condition_bd2,
    frame_condition_bw2,
    is_fork_algebra,
    wdp_witness_check,
)
from forkalg.builtins import b_fork, b_w, fork_frame
from forkalg.catalog import posets, quasiorders
from forkalg.errors import NotForkAlgebra, SearchBudgetExceeded, TrivialAlgebra
from forkalg.frame import Frame
from forkalg.terms import Var, f, parse_term


def chain(n: int) -> Frame:
    return Frame.from_pairs(n, [(i, j) for i in range(n) for j in range(i, n)])


def three_fork() -> Frame:
    return Frame.from_pairs(4, [(0, 1), (0, 2), (0, 3)], reflexive=True)


def test_fork_axioms_hold_on_fork_and_w():
    for a in (b_fork(), b_w()):
        for name in FORK_AXIOMS:
            assert check_axiom(name, a).holds, name


def test_geach_fails_with_witness():
    a = b_fork()
    rep = check_axiom("geach", a)
    assert not rep.holds
    assert rep.witness == {"x": a.element("{v}")}
    w = b_w()
    assert check_axiom("geach", w).witness == {"x": w.element("{t}")}


def test_bd2_counts_all_assignments():
    rep = check_axiom("bd2", b_w())
    assert rep.holds and rep.checked == 32
    assert check_axiom("bw2", b_w()).checked == 1024


def test_budget_guard():
    with pytest.raises(SearchBudgetExceeded):
        check_equation(BUILTINS["bw2"], b_w(), budget=100)


def test_frame_conditions_examples():
    assert frame_condition_bd2(fork_frame()) and frame_condition_bw2(fork_frame())
    assert not frame_condition_bd2(chain(3))
    assert not frame_condition_bw2(three_fork())


def test_is_fork_algebra_examples():
    assert is_fork_algebra(b_w())
    assert not is_fork_algebra(cm(chain(3)))
    assert is_fork_algebra(two())
    with pytest.raises(TrivialAlgebra):
        is_fork_algebra(trivial_algebra())


@pytest.mark.parametrize("fr", posets(4), ids=repr)
def test_equation_and_frame_routes_agree(fr):
    a = cm(fr)
    assert is_fork_algebra(a) == is_fork_algebra(a, method="frame")


@pytest.mark.parametrize("fr", quasiorders(4), ids=repr)
def test_grz_means_partial_order(fr):
    from forkalg.frame import is_partial_order

    assert check_axiom("grz", cm(fr)).holds == is_partial_order(fr)


def test_wdp():
    assert wdp_witness_check(b_fork()).holds
    assert wdp_witness_check(two()).holds
    rep = wdp_witness_check(product(b_fork(), b_fork()))
    assert not rep.holds
    x, y = rep.witness["x"], rep.witness["y"]
    assert x | y == (1 << 6) - 1 and x & y == 0


def test_atom_shape():
    assert atom_shape_checks(b_fork()).holds
    w = b_w()
    rep = atom_shape_checks(w)
    assert rep.holds and not rep.violations
    assert w.element("{u}") & ~w.closure(w.element("{t}")) == 0
    assert w.is_closed(w.element("{u}"))
    with pytest.raises(NotForkAlgebra):
        atom_shape_checks(cm(chain(3)))


def test_parsed_axiom_matches_builtin():
    a = b_fork()
    parsed = parse_term("fd(f(x . f(-x)) + x) <= x")
    assert parsed == BUILTINS["grz"]
    assert check_equation(parsed, a).holds
    assert check_equation(f(Var("x")), a, name="f").witness == {"x": 0}
