"""Finite closure algebras carried by their atom frames.

An element is an ``int`` mask over the atoms. The closure of an atom ``b`` is
the set of atoms ``a`` with ``a R b``; closure is extended additively, so
``f(X)`` is the down-set of ``X``. Closed elements are down-sets and open
elements are up-sets of the atom frame.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from ._bits import bits_list, from_indices, full, iter_bits
from .errors import (
    NotClosed,
    NotHomomorphism,
    ParseError,
    TrivialAlgebra,
    ZeroBound,
)
from .frame import (
    Frame,
    Morphism,
    components,
    disjoint_union,
    is_bounded_morphism,
    require_quasiorder,
    search_bounded_morphisms,
    subframe,
)

Element = int


@dataclass(frozen=True)
class ClosureAlgebra:
    atom_frame: Frame

    def __post_init__(self) -> None:
        require_quasiorder(self.atom_frame)

    @cached_property
    def atom_closure(self) -> tuple[Element, ...]:
        return self.atom_frame.pred

    @property
    def n_atoms(self) -> int:
        return self.atom_frame.n

    @property
    def size(self) -> int:
        return 1 << self.n_atoms

    @property
    def top(self) -> Element:
        return full(self.n_atoms)

    @property
    def is_trivial(self) -> bool:
        return self.n_atoms == 0

    def elements(self) -> range:
        return range(self.size)

    def atoms(self) -> list[Element]:
        return [1 << i for i in range(self.n_atoms)]

    # operations ---------------------------------------------------------

    def join(self, x: Element, y: Element) -> Element:
        return x | y

    def meet(self, x: Element, y: Element) -> Element:
        return x & y

    def complement(self, x: Element) -> Element:
        return self.top & ~x

    def closure(self, x: Element) -> Element:
        out = 0
        for a in iter_bits(x):
            out |= self.atom_closure[a]
        return out

    def interior(self, x: Element) -> Element:
        return self.complement(self.closure(self.complement(x)))

    def is_closed(self, x: Element) -> bool:
        return self.closure(x) == x

    def is_open(self, x: Element) -> bool:
        return self.interior(x) == x

    def is_clopen(self, x: Element) -> bool:
        return self.is_closed(x) and self.is_open(x)

    def closed_elements(self) -> list[Element]:
        return [x for x in self.elements() if self.is_closed(x)]

    def open_elements(self) -> list[Element]:
        return [x for x in self.elements() if self.is_open(x)]

    def closed_atoms(self) -> Element:
        return from_indices(i for i in range(self.n_atoms) if self.atom_closure[i] == 1 << i)

    def nonclosed_atoms(self) -> Element:
        return self.top & ~self.closed_atoms()

    # naming ---------------------------------------------------------------

    def element(self, labels) -> Element:
        """Element from an iterable of atom labels or a literal like ``{u,v}``."""
        if isinstance(labels, str):
            return parse_element(self, labels)
        return self.atom_frame.mask(labels)

    def format(self, x: Element) -> str:
        return "{" + ",".join(self.atom_frame.names(x)) + "}"

    def names(self, x: Element) -> list[str]:
        return self.atom_frame.names(x)

    def __repr__(self) -> str:
        return f"ClosureAlgebra(atoms={list(self.atom_frame.labels)})"


_ELEMENT = re.compile(r"^\s*\{\s*(.*?)\s*\}\s*$")


def parse_element(a: ClosureAlgebra, text: str) -> Element:
    m = _ELEMENT.match(text)
    if not m:
        raise ParseError(f"element literal must look like {{a,b}}: {text!r}", 1, 1)
    body = m.group(1)
    if not body:
        return 0
    out = 0
    for part in body.split(","):
        name = part.strip()
        try:
            out |= 1 << a.atom_frame.index(name)
        except KeyError:
            raise ParseError(f"unknown atom {name!r}", 1, text.find(name) + 1) from None
    return out


@dataclass(frozen=True)
class ClosedIdeal:
    algebra: ClosureAlgebra
    generator: Element

    def __post_init__(self) -> None:
        if not self.algebra.is_closed(self.generator):
            raise NotClosed("ideal generator must be closed")

    def __contains__(self, x: Element) -> bool:
        return x & ~self.generator == 0

    def __le__(self, other: ClosedIdeal) -> bool:
        return self.generator & ~other.generator == 0

    def __lt__(self, other: ClosedIdeal) -> bool:
        return self <= other and self.generator != other.generator


@dataclass(frozen=True)
class AlgHom:
    """Homomorphism ``source -> target`` given by its dual bounded morphism.

    ``dual`` maps atoms of ``target`` to atoms of ``source``; the homomorphism
    sends ``x`` to the set of target atoms whose dual image lies in ``x``.
    """

    source: ClosureAlgebra
    target: ClosureAlgebra
    dual: Morphism

    def __post_init__(self) -> None:
        if self.dual.source != self.target.atom_frame or self.dual.target != self.source.atom_frame:
            raise ValueError("dual must run from the target's atoms to the source's atoms")

    def __call__(self, x: Element) -> Element:
        return self.dual.preimage(x)

    def is_valid(self) -> bool:
        return is_bounded_morphism(self.dual)

    def is_injective(self) -> bool:
        return self.dual.is_surjective()

    def is_surjective(self) -> bool:
        return self.dual.is_injective()

    def kernel(self) -> ClosedIdeal:
        return ClosedIdeal(self.source, self.source.top & ~self.dual.image())

    def then(self, other: AlgHom) -> AlgHom:
        """``other`` after ``self``."""
        return AlgHom(self.source, other.target, other.dual.then(self.dual))

    def table(self) -> list[Element]:
        return [self(x) for x in self.source.elements()]


def is_homomorphism_table(a: ClosureAlgebra, b: ClosureAlgebra, table) -> bool:
    """Direct element-level check of a map given as a list indexed by elements."""
    if table[0] != 0 or table[a.top] != b.top:
        return False
    for x in a.elements():
        hx = table[x]
        if table[a.complement(x)] != b.complement(hx):
            return False
        if table[a.closure(x)] != b.closure(hx):
            return False
        for y in a.elements():
            if table[x | y] != hx | table[y]:
                return False
    return True


# constructions ---------------------------------------------------------------


def cm(f: Frame) -> ClosureAlgebra:
    """Complex algebra of a quasiorder."""
    return ClosureAlgebra(f)


def cf(a: ClosureAlgebra) -> Frame:
    """Atom frame recovered from the closure operator: ``a <= f(b)`` gives ``a R b``."""
    n = a.n_atoms
    rows = [0] * n
    for b in range(n):
        fb = a.closure(1 << b)
        for x in iter_bits(fb):
            rows[x] |= 1 << b
    return Frame(n, tuple(rows), a.atom_frame.labels)


def trivial_algebra() -> ClosureAlgebra:
    return ClosureAlgebra(Frame.empty())


def two() -> ClosureAlgebra:
    return ClosureAlgebra(Frame(1, (1,), ("a",)))


def product(a1: ClosureAlgebra, a2: ClosureAlgebra) -> ClosureAlgebra:
    """Direct product; the first factor occupies the low atom indices."""
    return ClosureAlgebra(disjoint_union(a1.atom_frame, a2.atom_frame))


def _require_nontrivial(a: ClosureAlgebra) -> None:
    if a.is_trivial:
        raise TrivialAlgebra("the one-element algebra is excluded here")


def relative_algebra(a: ClosureAlgebra, b: Element) -> ClosureAlgebra:
    """The closure algebra on the ideal below a closed element ``b``."""
    if b == 0:
        raise ZeroBound("relative algebra needs a nonzero bound")
    if not a.is_closed(b):
        raise NotClosed(f"{a.format(b)} is not closed")
    sub, _ = subframe(a.atom_frame, b)
    return ClosureAlgebra(sub)


def relative_projection(a: ClosureAlgebra, b: Element) -> AlgHom:
    """The map ``x -> b . x`` onto the relative algebra, when it is a homomorphism.

    It commutes with closure exactly when the atoms of ``b`` are up-closed,
    i.e. when ``b`` is open as well as closed.
    """
    rel = relative_algebra(a, b)
    _, inclusion = subframe(a.atom_frame, b)
    hom = AlgHom(a, rel, Morphism(rel.atom_frame, a.atom_frame, inclusion.map))
    if not hom.is_valid():
        raise NotHomomorphism(f"x -> {a.format(b)}.x does not preserve closure")
    return hom


def quotient(a: ClosureAlgebra, k: ClosedIdeal) -> tuple[ClosureAlgebra, AlgHom]:
    """Quotient by a closed ideal, realised on the atoms outside its generator."""
    keep = a.top & ~k.generator
    if keep == 0:
        q = trivial_algebra()
        return q, AlgHom(a, q, Morphism(q.atom_frame, a.atom_frame, ()))
    sub, inclusion = subframe(a.atom_frame, keep)
    q = ClosureAlgebra(sub)
    return q, AlgHom(a, q, Morphism(sub, a.atom_frame, inclusion.map))


def hom_search(
    a: ClosureAlgebra,
    b: ClosureAlgebra,
    *,
    surjective: bool = False,
    injective: bool = False,
) -> list[AlgHom]:
    """All homomorphisms ``a -> b``, found as bounded morphisms of atom frames."""
    found = search_bounded_morphisms(
        b.atom_frame, a.atom_frame, injective=surjective, surjective=injective
    )
    return [AlgHom(a, b, Morphism(b.atom_frame, a.atom_frame, g)) for g in found]


def is_directly_indecomposable(a: ClosureAlgebra) -> bool:
    """Only 0 and 1 are clopen."""
    _require_nontrivial(a)
    if a.n_atoms <= 12:
        return not any(a.is_clopen(x) for x in range(1, a.top))
    return len(components(a.atom_frame)) == 1


def clopen_elements(a: ClosureAlgebra) -> list[Element]:
    return [x for x in a.elements() if a.is_clopen(x)]


def is_isomorphic(a: ClosureAlgebra, b: ClosureAlgebra) -> AlgHom | None:
    """An isomorphism ``a -> b`` if the atom frames are isomorphic."""
    if a.n_atoms != b.n_atoms:
        return None
    if sorted(bin(r).count("1") for r in a.atom_frame.succ) != sorted(
        bin(r).count("1") for r in b.atom_frame.succ
    ):
        return None
    for g in search_bounded_morphisms(
        b.atom_frame, a.atom_frame, injective=True, surjective=True
    ):
        dual = Morphism(b.atom_frame, a.atom_frame, g)
        # a bounded bijection between quasiorders reflects the relation too
        if all(
            a.atom_frame.rel(g[x], g[y]) == b.atom_frame.rel(x, y)
            for x in range(b.n_atoms)
            for y in range(b.n_atoms)
        ):
            return AlgHom(a, b, dual)
    return None


def subalgebra_from_partition(a: ClosureAlgebra, blocks: list[Element], labels=()) -> tuple[ClosureAlgebra, AlgHom] | None:
    """Subalgebra whose atoms are the given blocks, if closure keeps it closed.

    Returns the subalgebra and its embedding, or ``None`` when the Boolean
    subalgebra generated by the blocks is not closed under ``f``.
    """
    if sum(blocks) != a.top or any(x & y for i, x in enumerate(blocks) for y in blocks[i + 1:]):
        raise ValueError("blocks must partition the atoms")
    if any(x == 0 for x in blocks):
        raise ValueError("blocks must be nonzero")
    m = len(blocks)
    owner = [0] * a.n_atoms
    for i, blk in enumerate(blocks):
        for x in iter_bits(blk):
            owner[x] = i
    rows = [0] * m
    for j, blk in enumerate(blocks):
        fb = a.closure(blk)
        hit = from_indices(owner[x] for x in iter_bits(fb))
        if sum(blocks[i] for i in iter_bits(hit)) != fb:
            return None
        for i in iter_bits(hit):
            rows[i] |= 1 << j
    sub = ClosureAlgebra(Frame(m, tuple(rows), tuple(labels) or ()))
    emb = AlgHom(sub, a, Morphism(a.atom_frame, sub.atom_frame, tuple(owner)))
    if not emb.is_valid():
        raise AssertionError("closed partition did not give a bounded morphism")
    return sub, emb


def subalgebras(a: ClosureAlgebra) -> Iterator[tuple[ClosureAlgebra, AlgHom]]:
    """Every subalgebra, one per closed partition of the atoms."""
    for blocks in _set_partitions(bits_list(a.top)):
        got = subalgebra_from_partition(a, blocks)
        if got is not None:
            yield got


def _set_partitions(items: list[int]) -> Iterator[list[int]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [1 << first, *part]
        for i in range(len(part)):
            yield [*part[:i], part[i] | (1 << first), *part[i + 1:]]
