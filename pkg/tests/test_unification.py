from __future__ import annotations

import pytest

from forkalg.algebra import (
    AlgHom,
    ClosedIdeal,
    cm,
    hom_search,
    product,
    trivial_algebra,
    two,
)
from forkalg.builtins import b_fork, b_w
from forkalg.catalog import fork_frames
from forkalg.errors import NotForkAlgebra, NotUnifiable
from forkalg.frame import FINITARY, UNITARY, Frame, Morphism, subframe
from forkalg.projectivity import build_retraction, is_projective_fork
from forkalg.unification import (
    Unifier,
    admissible_congruences,
    all_unifiers,
    brute_force_mu,
    canonical_unifier,
    equivalent,
    filtering_probe,
    is_unifiable,
    more_general,
    mu_set,
    mu_sets_match,
    projective_targets,
    unification_type,
)


def E(a, text):
    return a.element("{" + text + "}")


def test_is_unifiable():
    assert is_unifiable(b_w())
    assert not is_unifiable(trivial_algebra())
    assert is_unifiable(product(b_fork(), b_fork()))


def test_admissible_congruences_of_w():
    a = b_w()
    quotients = sorted(
        tuple(a.names(a.top & ~k.generator)) for k in admissible_congruences(a)
    )
    assert quotients == sorted(
        [("t",), ("v",), ("w",), ("u", "t", "v"), ("u'", "v", "w")]
    )


def test_admissible_congruences_small():
    assert ClosedIdeal(b_fork(), 0) in admissible_congruences(b_fork())
    assert admissible_congruences(two()) == [ClosedIdeal(two(), 0)]
    with pytest.raises(NotForkAlgebra):
        chain = Frame.from_pairs(3, [(0, 1), (1, 2), (0, 2)], reflexive=True)
        admissible_congruences(cm(chain))


def test_incomparable_quotients_of_w():
    a = b_w()
    u1 = canonical_unifier(a, ClosedIdeal(a, a.closure(E(a, "t"))))
    u2 = canonical_unifier(a, ClosedIdeal(a, a.closure(E(a, "w"))))
    for x, y in ((u1, u2), (u2, u1)):
        assert more_general(x, y) is None
        assert more_general(x, y, prefilter=False) is None


def test_identity_unifier_dominates():
    a = b_fork()
    ident = canonical_unifier(a, ClosedIdeal(a, 0))
    for u in all_unifiers(a):
        h = more_general(ident, u)
        assert h is not None
        assert ident.hom.then(h).dual.map == u.hom.dual.map


def test_distinct_surjections_onto_two_are_incomparable():
    homs = [Unifier(h) for h in hom_search(b_fork(), two(), surjective=True)]
    assert len(homs) == 2
    assert more_general(homs[0], homs[1], prefilter=False) is None
    assert more_general(homs[1], homs[0], prefilter=False) is None


def test_mu_set_of_w():
    a = b_w()
    rep = mu_set(a)
    assert rep.type == FINITARY
    assert rep.kernels == sorted([a.closure(E(a, "t")), a.closure(E(a, "w"))])
    assert unification_type(a) == FINITARY
    for i, (j, h) in rep.order_certificates.items():
        assert rep.unifiers[j].hom.then(h).dual.map == rep.unifiers[i].hom.dual.map


def test_unitary_examples():
    assert unification_type(b_fork()) == UNITARY
    assert unification_type(two()) == UNITARY


def test_product_type_matches_oracle():
    a = product(b_fork(), two())
    rep = mu_set(a)
    assert rep.type in (UNITARY, FINITARY)
    assert mu_sets_match(rep, brute_force_mu(a))


def test_brute_force_examples():
    assert len(brute_force_mu(b_w(), 5).mu_set) == 2
    assert len(brute_force_mu(two(), 2).mu_set) == 1
    assert len(brute_force_mu(b_fork(), 4).mu_set) == 1
    with pytest.raises(NotUnifiable):
        brute_force_mu(trivial_algebra())


def test_projective_targets():
    sizes = [b.n_atoms for b in projective_targets(4)]
    assert sizes == sorted(sizes)
    assert all(is_projective_fork(b) for b in projective_targets(4))


@pytest.mark.parametrize("fr", fork_frames(5), ids=repr)
def test_mu_set_matches_oracle(fr):
    a = cm(fr)
    rep = mu_set(a)
    brute = brute_force_mu(a)
    assert rep.type in (UNITARY, FINITARY)
    assert mu_sets_match(rep, brute)
    assert len(rep.cardinalities) == 1 and len(brute.cardinalities) == 1
    for u in brute.unifiers:
        assert any(more_general(m, u) is not None for m in rep.mu_set)
    for x in rep.mu_set:
        for y in rep.mu_set:
            if x is not y:
                assert more_general(x, y) is None


@pytest.mark.parametrize("fr", fork_frames(4), ids=repr)
def test_prefilter_is_sound(fr):
    a = cm(fr)
    us = all_unifiers(a)
    for x in us:
        for y in us:
            slow = more_general(x, y, prefilter=False)
            fast = more_general(x, y)
            assert (slow is None) == (fast is None)
            if not x.kernel <= y.kernel:
                assert slow is None


def test_retract_absorption():
    """A unifier into a retract B of C is equivalent to its composite into C."""
    c_frame = fork_frame_with_tail()
    v = c_frame.up(c_frame.index("u"))
    b_frame, inc = subframe(c_frame, v)
    plan = build_retraction(c_frame, inc)
    b, c = cm(b_frame), cm(c_frame)
    assert is_projective_fork(b) and is_projective_fork(c)
    section = AlgHom(b, c, plan.map)
    assert section.is_valid() and section.is_injective()
    for a in (b_w(), b_fork(), product(two(), two())):
        for h in hom_search(a, b):
            u = Unifier(h)
            lifted = Unifier(h.then(section))
            assert equivalent(u, lifted)


def fork_frame_with_tail() -> Frame:
    return Frame.from_pairs(
        ["u", "v", "w", "x"], [("u", "v"), ("u", "w"), ("x", "v"), ("x", "w")], reflexive=True
    )


def test_filtering_probe():
    catalog = projective_targets(4)
    rep = filtering_probe(catalog, fork=b_fork())
    assert rep.pairs and rep.projective_products == 0
    assert not rep.geach_on_fork.holds
    assert rep.geach_on_fork.witness == {"x": E(b_fork(), "v")}
    pair = filtering_probe([b_fork()])
    assert pair.pairs == [{"left_atoms": 3, "right_atoms": 3, "product_projective": False}]
    assert filtering_probe([two()]).projective_products == 0


def test_unifier_fields():
    a = b_w()
    u = canonical_unifier(a, ClosedIdeal(a, a.closure(E(a, "t"))))
    assert u.proj
    assert u.quotient.n_atoms == 3
    assert u.describe()["kernel"] == "{u,t}"
    assert u.hom.kernel() == u.kernel
    with pytest.raises(ValueError):
        more_general(u, Unifier(hom_search(b_fork(), two())[0]))
    assert isinstance(u.hom.dual, Morphism)
