from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings

from forkalg.algebra import (
    AlgHom,
    ClosedIdeal,
    ClosureAlgebra,
    cf,
    clopen_elements,
    cm,
    hom_search,
    is_directly_indecomposable,
    is_homomorphism_table,
    is_isomorphic,
    parse_element,
    product,
    quotient,
    relative_algebra,
    relative_projection,
    subalgebra_from_partition,
    subalgebras,
    trivial_algebra,
    two,
)
from forkalg.builtins import b_fork, b_w, fork_frame, w_frame
from forkalg.catalog import quasiorders as all_quasiorders
from forkalg.errors import (
    NotClosed,
    NotHomomorphism,
    NotQuasiorder,
    ParseError,
    TrivialAlgebra,
    ZeroBound,
)
from forkalg.frame import Frame, Morphism, components, is_bounded_morphism

from conftest import quasiorders


def E(a: ClosureAlgebra, text: str) -> int:
    return a.element("{" + text + "}")


def element_level_homs(a: ClosureAlgebra, b: ClosureAlgebra) -> list[tuple[int, ...]]:
    """Every homomorphism as an element table, found without the dual frames.

    A Boolean homomorphism is fixed by sending each atom of ``b`` to an atom
    of ``a``; every such map is tried and kept when the table commutes with
    the closure operators.
    """
    out = []
    for choice in itertools.product(range(a.n_atoms), repeat=b.n_atoms):
        table = [
            sum(1 << j for j in range(b.n_atoms) if x >> choice[j] & 1) for x in a.elements()
        ]
        if is_homomorphism_table(a, b, table):
            out.append(tuple(table))
    return sorted(out)


def test_fork_algebra_structure():
    a = b_fork()
    assert a.size == 8 and a.n_atoms == 3
    want = {0, E(a, "u"), E(a, "u,v"), E(a, "u,w"), a.top}
    assert set(a.closed_elements()) == want


def test_two_has_identity_closure():
    a = cm(Frame(1, (1,)))
    assert a.size == 2
    assert [a.closure(x) for x in a.elements()] == [0, 1]


def test_w_closures():
    a = b_w()
    assert a.size == 32
    assert a.closure(E(a, "t")) == E(a, "u,t")
    assert a.closure(E(a, "v")) == E(a, "u,u',v")
    assert a.closure(E(a, "w")) == E(a, "u',w")
    assert a.closure(E(a, "u")) == E(a, "u")


def test_interior_and_openness():
    a = b_fork()
    v = E(a, "v")
    assert a.interior(v) == v and a.is_open(v)
    assert a.closure(v) == E(a, "u,v")
    assert a.closure(0) == 0 and a.interior(a.top) == a.top
    assert a.is_clopen(0) and a.is_clopen(a.top)
    assert clopen_elements(a) == [0, a.top]


def test_cm_rejects_non_quasiorder():
    with pytest.raises(NotQuasiorder):
        cm(Frame(1, (0,)))


def test_cf_round_trip_examples():
    assert cf(b_fork()) == fork_frame()
    assert cf(two()) == Frame(1, (1,), ("a",))
    assert is_isomorphic(cm(cf(b_w())), b_w()) is not None


@pytest.mark.parametrize("fr", all_quasiorders(5), ids=repr)
def test_duality_round_trip(fr):
    assert cf(cm(fr)) == fr


@settings(max_examples=100, deadline=None)
@given(quasiorders(max_points=5))
def test_closure_laws(fr):
    a = cm(fr)
    assert a.closure(0) == 0
    for x in a.elements():
        fx = a.closure(x)
        assert x & ~fx == 0
        assert a.closure(fx) == fx
        assert a.interior(x) == a.complement(a.closure(a.complement(x)))
    for x, y in itertools.product(range(min(a.size, 16)), repeat=2):
        assert a.closure(x | y) == a.closure(x) | a.closure(y)


def test_parse_element():
    a = b_w()
    assert parse_element(a, "{ u , u' }") == E(a, "u,u'")
    assert parse_element(a, "{}") == 0
    with pytest.raises(ParseError):
        parse_element(a, "u")
    with pytest.raises(ParseError) as info:
        parse_element(a, "{u,q}")
    assert info.value.column == 4
    assert a.format(E(a, "t,w")) == "{t,w}"


def test_closed_ideal():
    a = b_fork()
    k = ClosedIdeal(a, E(a, "u,v"))
    assert E(a, "u") in k and E(a, "w") not in k
    assert ClosedIdeal(a, E(a, "u")) < k
    with pytest.raises(NotClosed):
        ClosedIdeal(a, E(a, "v"))


def test_relative_algebra():
    a = b_w()
    rel = relative_algebra(a, a.closure(E(a, "v")))
    assert rel.n_atoms == 3
    assert relative_algebra(a, a.top).atom_frame == a.atom_frame
    with pytest.raises(ZeroBound):
        relative_algebra(a, 0)
    with pytest.raises(NotClosed):
        relative_algebra(a, E(a, "t"))


def test_clopen_splitting():
    a = product(b_fork(), b_fork())
    left = sum(1 << i for i in range(3))
    right = a.top & ~left
    h1, h2 = relative_projection(a, left), relative_projection(a, right)
    assert h1.is_valid() and h1.is_surjective() and h2.is_surjective()
    for x in a.elements():
        assert h1(x) | (h2(x) << 3) == x


def test_relative_projection_needs_open_bound():
    a = b_fork()
    with pytest.raises(NotHomomorphism):
        relative_projection(a, E(a, "u"))


def test_product():
    p = product(two(), two())
    assert p.size == 4 and len(components(p.atom_frame)) == 2
    ff = product(b_fork(), b_fork())
    assert ff.n_atoms == 6 and not is_directly_indecomposable(ff)
    pw = product(b_fork(), b_w())
    assert len(components(pw.atom_frame)) == 2


def test_quotients():
    a = b_w()
    for atom in ("t", "w"):
        k = ClosedIdeal(a, a.closure(E(a, atom)))
        q, p = quotient(a, k)
        assert q.n_atoms == 3
        assert is_isomorphic(q, b_fork()) is not None
        assert p.is_valid() and p.is_surjective()
        assert p.kernel() == k
    q, p = quotient(a, ClosedIdeal(a, 0))
    assert is_isomorphic(q, a) is not None
    q, _ = quotient(a, ClosedIdeal(a, a.top))
    assert q.is_trivial


def test_hom_search_examples():
    homs = hom_search(b_fork(), two(), surjective=True)
    assert len(homs) == 2
    assert len(homs) == len(element_level_homs(b_fork(), two()))
    into = hom_search(two(), b_fork())
    assert len(into) == 1 and into[0].table() == [0, b_fork().top]
    onto = hom_search(b_w(), b_fork(), surjective=True)
    assert onto
    images = {frozenset(b_w().names(h.dual.image())) for h in onto}
    assert frozenset({"u'", "v", "w"}) in images


def _small_algebras():
    return [cm(fr) for fr in all_quasiorders(3)]


SMALL = len(all_quasiorders(3))


@pytest.mark.parametrize("pair", list(itertools.product(range(SMALL), repeat=2)))
def test_hom_search_matches_element_level(pair):
    algs = _small_algebras()
    a, b = algs[pair[0]], algs[pair[1]]
    tables = sorted(tuple(h.table()) for h in hom_search(a, b))
    assert tables == element_level_homs(a, b)


@pytest.mark.parametrize("i,j", list(itertools.product(range(SMALL), repeat=2)))
def test_duality_of_injective_and_surjective(i, j):
    algs = _small_algebras()
    a, b = algs[i], algs[j]
    for h in hom_search(a, b):
        table = h.table()
        injective = len(set(table)) == len(table)
        surjective = set(table) == set(b.elements())
        assert h.is_injective() == injective == h.dual.is_surjective()
        assert h.is_surjective() == surjective == h.dual.is_injective()
        kernel = max(x for x in a.elements() if table[x] == 0)
        assert h.kernel().generator == kernel
        if surjective:
            q, _ = quotient(a, h.kernel())
            assert is_isomorphic(q, b) is not None


def test_directly_indecomposable():
    assert is_directly_indecomposable(b_fork())
    assert is_directly_indecomposable(b_w())
    assert not is_directly_indecomposable(product(b_fork(), b_fork()))
    with pytest.raises(TrivialAlgebra):
        is_directly_indecomposable(trivial_algebra())


def test_isomorphism():
    f = fork_frame()
    relabeled = f.permute([2, 0, 1]).relabel(["a", "b", "c"])
    iso = is_isomorphic(cm(f), cm(relabeled))
    assert iso is not None and iso.is_valid()
    cube = product(product(two(), two()), two())
    assert is_isomorphic(b_fork(), cube) is None
    assert is_isomorphic(b_w(), cm(w_frame())) is not None


def test_subalgebras_of_fork():
    subs = list(subalgebras(b_fork()))
    sizes = sorted(s.n_atoms for s, _ in subs)
    # the whole algebra, {u, v+w} and the two-element one
    assert sizes == [1, 2, 3]
    for sub, emb in subs:
        assert emb.is_valid() and emb.is_injective()


def test_subalgebra_from_partition_rejects_unclosed():
    a = b_fork()
    assert subalgebra_from_partition(a, [E(a, "v"), E(a, "u,w")]) is None
    with pytest.raises(ValueError):
        subalgebra_from_partition(a, [E(a, "v")])


def test_alghom_requires_matching_dual():
    a = b_fork()
    with pytest.raises(ValueError):
        AlgHom(a, two(), Morphism(a.atom_frame, a.atom_frame, (0, 1, 2)))


def test_composition():
    a = b_w()
    p = hom_search(a, b_fork(), surjective=True)[0]
    to_two = hom_search(b_fork(), two(), surjective=True)[0]
    comp = p.then(to_two)
    assert is_bounded_morphism(comp.dual)
    assert comp.table() == [to_two(p(x)) for x in a.elements()]
