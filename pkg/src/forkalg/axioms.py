"""Equational validity on finite algebras, the fork axioms and their frame conditions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import ClosureAlgebra, Element, cf
from .errors import NotForkAlgebra, SearchBudgetExceeded, TrivialAlgebra
from .frame import Frame, is_fork_frame, require_quasiorder
from .terms import Term, Var, f, fd, leq

x, y = Var("x"), Var("y")

GRZ = leq(fd(f(x * f(-x)) + x), x)
BD2 = leq(-x * f(x), f(fd(x)))
BW2 = -(x * y * f(x * -y) * f(-x * y) * f(-x * -y))
GEACH = leq(f(fd(x)), fd(f(x)))

BUILTINS: dict[str, Term] = {"grz": GRZ, "bd2": BD2, "bw2": BW2, "geach": GEACH}
FORK_AXIOMS = ("grz", "bd2", "bw2")

DEFAULT_BUDGET = 1 << 22


@dataclass
class AxiomReport:
    axiom: str
    holds: bool
    witness: dict[str, Element] | None = None
    checked: int = 0
    details: dict = field(default_factory=dict)


def check_equation(
    t: Term,
    a: ClosureAlgebra,
    *,
    name: str = "",
    budget: int = DEFAULT_BUDGET,
) -> AxiomReport:
    """Exhaustively test ``t = 1`` on ``a``; the first failing assignment is the witness.

    Assignments are visited in lexicographic order of the variables as they
    first occur in ``t``.
    """
    names = t.variables()
    total = a.size ** len(names)
    if total > budget:
        raise SearchBudgetExceeded(f"{total} assignments exceed the budget of {budget}")
    label = name or str(t)
    checked = 0
    for values in itertools.product(a.elements(), repeat=len(names)):
        env = dict(zip(names, values))
        checked += 1
        if t.eval(a, env) != a.top:
            return AxiomReport(label, False, env, checked)
    return AxiomReport(label, True, None, checked)


def check_axiom(name: str, a: ClosureAlgebra, **kw) -> AxiomReport:
    return check_equation(BUILTINS[name], a, name=name, **kw)


# first-order frame conditions, checked literally ------------------------------


def frame_condition_bd2(fr: Frame) -> bool:
    require_quasiorder(fr)
    pts = range(fr.n)
    r = fr.rel
    return all(
        not r(p, q)
        or p == q
        or any(r(p, z1) and all(not r(z1, z2) or q == z2 for z2 in pts) for z1 in pts)
        for p in pts
        for q in pts
    )


def frame_condition_bw2(fr: Frame) -> bool:
    require_quasiorder(fr)
    pts = range(fr.n)
    r = fr.rel
    for p in pts:
        for y1 in pts:
            for y2 in pts:
                if not (r(p, y1) and r(p, y2)):
                    continue
                if p == y1 or p == y2 or y1 == y2:
                    continue
                if not all(not r(p, z) or z in (p, y1, y2) for z in pts):
                    return False
    return True


def is_fork_algebra(a: ClosureAlgebra, method: str = "equations") -> bool:
    """Membership of a finite nontrivial algebra in the variety generated by the fork.

    ``method="equations"`` checks Grz, BD2 and BW2 exhaustively;
    ``method="frame"`` checks that the atom frame is a partial order of height
    and local width at most 2.
    """
    if a.is_trivial:
        raise TrivialAlgebra("fork algebras are nontrivial")
    if method == "frame":
        return is_fork_frame(cf(a))
    if method != "equations":
        raise ValueError(f"unknown method {method!r}")
    return all(check_axiom(name, a).holds for name in FORK_AXIOMS)


def require_fork_algebra(a: ClosureAlgebra) -> None:
    if a.is_trivial:
        raise TrivialAlgebra("fork algebras are nontrivial")
    if not is_fork_frame(a.atom_frame):
        raise NotForkAlgebra("atom frame is not a partial order of height and local width <= 2")


def wdp_witness_check(a: ClosureAlgebra) -> AxiomReport:
    """Whether two open elements can only join to 1 if one of them is 1."""
    opens = a.open_elements()
    for p in opens:
        for q in opens:
            if p | q == a.top and p != a.top and q != a.top:
                return AxiomReport("wdp", False, {"x": p, "y": q}, 0)
    return AxiomReport("wdp", True, None, len(opens) ** 2)


@dataclass
class AtomShapeReport:
    below_closure_closed: bool
    open_or_closed: bool
    violations: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.below_closure_closed and self.open_or_closed


def atom_shape_checks(a: ClosureAlgebra) -> AtomShapeReport:
    """For every atom ``p``: elements below ``f(p)`` and disjoint from ``p`` are
    closed, and ``p`` itself is open or closed."""
    if a.is_trivial or not is_fork_algebra(a, method="frame"):
        raise NotForkAlgebra("atom shape checks apply to fork algebras only")
    violations = []
    for i in range(a.n_atoms):
        p = 1 << i
        rest = a.closure(p) & ~p
        sub = rest
        while True:
            if not a.is_closed(sub):
                violations.append(f"{a.format(sub)} <= f({a.format(p)}) is not closed")
            if sub == 0:
                break
            sub = (sub - 1) & rest
        if not (a.is_open(p) or a.is_closed(p)):
            violations.append(f"atom {a.format(p)} is neither open nor closed")
    part1 = not any("<=" in v for v in violations)
    part2 = not any("neither" in v for v in violations)
    return AtomShapeReport(part1, part2, violations)
