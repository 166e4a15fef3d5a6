"""Algebraic unifiers of finite fork algebras.

A unifier of ``A`` is a homomorphism into a finite projective algebra. Its
kernel is a closed ideal; the canonical unifier for an admissible kernel is
the quotient map onto ``A`` modulo that ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ._bits import iter_bits, popcount
from .algebra import (
    AlgHom,
    ClosedIdeal,
    ClosureAlgebra,
    hom_search,
    product,
    quotient,
    two,
)
from .axioms import AxiomReport, check_axiom, require_fork_algebra
from .catalog import CatalogQuery, enumerate_frames
from .errors import ConsistencyError, NotUnifiable
from .frame import (
    FINITARY,
    UNITARY,
    Frame,
    Morphism,
    mu_sets,
    search_bounded_morphisms,
)
from .projectivity import is_projective_fork


@dataclass(frozen=True)
class Unifier:
    hom: AlgHom

    @property
    def source(self) -> ClosureAlgebra:
        return self.hom.source

    @property
    def target(self) -> ClosureAlgebra:
        return self.hom.target

    @cached_property
    def kernel(self) -> ClosedIdeal:
        return self.hom.kernel()

    @cached_property
    def quotient(self) -> ClosureAlgebra:
        return quotient(self.source, self.kernel)[0]

    @cached_property
    def proj(self) -> bool:
        """Whether the quotient itself is projective."""
        q = self.quotient
        return not q.is_trivial and is_projective_fork(q)

    def describe(self) -> dict:
        a = self.source
        return {
            "kernel": a.format(self.kernel.generator),
            "image_atoms": a.atom_frame.names(self.hom.dual.image()),
            "target_atoms": self.target.n_atoms,
        }


@dataclass
class MuReport:
    mu_set: list[Unifier]
    type: str
    order_certificates: dict[int, tuple[int, AlgHom]] = field(default_factory=dict)
    unifiers: list[Unifier] = field(default_factory=list)
    mu_set_count: int = 1
    cardinalities: list[int] = field(default_factory=list)

    @property
    def kernels(self) -> list[int]:
        return sorted(u.kernel.generator for u in self.mu_set)


def is_unifiable(a: ClosureAlgebra) -> bool:
    if a.is_trivial:
        return False
    return bool(hom_search(a, two(), surjective=True))


def canonical_unifier(a: ClosureAlgebra, ideal: ClosedIdeal) -> Unifier:
    return Unifier(quotient(a, ideal)[1])


def admissible_congruences(a: ClosureAlgebra) -> list[ClosedIdeal]:
    """Closed ideals whose quotient is projective, by ascending generator."""
    require_fork_algebra(a)
    out = []
    for g in a.closed_elements():
        if g == a.top:
            continue
        ideal = ClosedIdeal(a, g)
        q, _ = quotient(a, ideal)
        if is_projective_fork(q):
            out.append(ideal)
    return out


def more_general(u1: Unifier, u2: Unifier, *, prefilter: bool = True) -> AlgHom | None:
    """A homomorphism ``h`` with ``u2 = h . u1``, if one exists.

    ``prefilter`` rejects early when the kernel of ``u1`` is not contained in
    the kernel of ``u2``, which no such ``h`` survives.
    """
    if u1.source != u2.source:
        raise ValueError("unifiers of different algebras are not comparable")
    if prefilter and not u1.kernel <= u2.kernel:
        return None
    b, c = u1.target, u2.target
    d1, d2 = u1.hom.dual.map, u2.hom.dual.map
    fibre: dict[int, int] = {}
    for i, x in enumerate(d1):
        fibre[x] = fibre.get(x, 0) | (1 << i)
    domains = [fibre.get(d2[j], 0) for j in range(c.n_atoms)]
    for g in search_bounded_morphisms(c.atom_frame, b.atom_frame, domains=domains):
        h = AlgHom(b, c, Morphism(c.atom_frame, b.atom_frame, g))
        composed = u1.hom.then(h)
        if composed.dual.map != u2.hom.dual.map:
            raise ConsistencyError("found homomorphism does not make the triangle commute")
        return h
    return None


def _generality_frame(unifiers: list[Unifier], matrix: list[list[bool]]) -> Frame:
    """Quasiorder on unifiers: ``i R j`` iff unifier ``j`` is more general than ``i``."""
    rows = []
    for i in range(len(unifiers)):
        row = 0
        for j in range(len(unifiers)):
            if matrix[j][i]:
                row |= 1 << j
        rows.append(row)
    return Frame(len(unifiers), tuple(rows))


def _report(unifiers: list[Unifier], general: list[list[AlgHom | None]]) -> MuReport:
    matrix = [[h is not None for h in row] for row in general]
    fr = _generality_frame(unifiers, matrix)
    found, kind = mu_sets(fr)
    chosen = list(iter_bits(found[0]))
    certs = {}
    for i in range(len(unifiers)):
        if i in chosen:
            continue
        for j in chosen:
            if general[j][i] is not None:
                certs[i] = (j, general[j][i])
                break
        else:
            raise ConsistencyError(f"unifier {i} lies below no mu-set member")
    members = [unifiers[j] for j in chosen]
    sizes = sorted({popcount(s) for s in found})
    return MuReport(members, kind, certs, unifiers, len(found), sizes)


def mu_set(a: ClosureAlgebra) -> MuReport:
    """Mu-set of the canonical unifiers.

    Generality among canonical unifiers is decided by kernel inclusion and
    certified by an explicit homomorphism search; disagreement aborts.
    """
    require_fork_algebra(a)
    if not is_unifiable(a):
        raise NotUnifiable("algebra has no homomorphism onto the two-element algebra")
    unifiers = [canonical_unifier(a, k) for k in admissible_congruences(a)]
    m = len(unifiers)
    general: list[list[AlgHom | None]] = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            fast = unifiers[i].kernel <= unifiers[j].kernel
            h = more_general(unifiers[i], unifiers[j], prefilter=False)
            if fast != (h is not None):
                raise ConsistencyError(
                    f"kernel inclusion and homomorphism search disagree on ({i}, {j})"
                )
            general[i][j] = h
    report = _report(unifiers, general)
    minimal = [
        k.generator
        for k in (u.kernel for u in unifiers)
        if not any(o.kernel < k for o in unifiers)
    ]
    if sorted(minimal) != report.kernels:
        raise ConsistencyError("mu-set differs from the inclusion-minimal kernels")
    return report


def unification_type(a: ClosureAlgebra) -> str:
    kind = mu_set(a).type
    if kind not in (UNITARY, FINITARY):
        raise ConsistencyError(f"fork algebra with unification type {kind}")
    return kind


def projective_targets(bound: int) -> list[ClosureAlgebra]:
    """Projective fork algebras with at most ``bound`` atoms, up to isomorphism."""
    frames = enumerate_frames(CatalogQuery(bound, fork=True, connected=True))
    out = []
    for fr in frames:
        b = ClosureAlgebra(fr)
        if is_projective_fork(b):
            out.append(b)
    return out


def _automorphisms(fr: Frame) -> list[tuple[int, ...]]:
    return list(search_bounded_morphisms(fr, fr, injective=True, surjective=True))


def all_unifiers(a: ClosureAlgebra, bound: int | None = None) -> list[Unifier]:
    """Unifiers into every projective target with at most ``bound`` atoms.

    Homomorphisms that differ by an automorphism of the target are
    equivalent, so only the lexicographically least dual map of each orbit is
    kept.
    """
    bound = a.n_atoms if bound is None else bound
    out = []
    for b in projective_targets(bound):
        autos = _automorphisms(b.atom_frame)
        for h in hom_search(a, b):
            d = h.dual.map
            if all(d <= tuple(d[s[i]] for i in range(len(d))) for s in autos):
                out.append(Unifier(h))
    return out


def brute_force_mu(a: ClosureAlgebra, bound: int | None = None) -> MuReport:
    """Mu-set straight from the definition over all unifiers with small targets.

    Unifiers are first grouped into equivalence classes by explicit
    homomorphism search against one representative per class; the order is
    then computed between representatives.
    """
    if not is_unifiable(a):
        raise NotUnifiable("algebra has no homomorphism onto the two-element algebra")
    reps: list[Unifier] = []
    for u in all_unifiers(a, bound):
        if not any(equivalent(u, r) for r in reps):
            reps.append(u)
    m = len(reps)
    general = [[more_general(reps[i], reps[j]) for j in range(m)] for i in range(m)]
    return _report(reps, general)


def equivalent(u1: Unifier, u2: Unifier) -> bool:
    return more_general(u1, u2) is not None and more_general(u2, u1) is not None


def mu_sets_match(r1: MuReport, r2: MuReport) -> bool:
    """Same size, and every member of one is equivalent to a member of the other."""
    if len(r1.mu_set) != len(r2.mu_set) or r1.type != r2.type:
        return False
    return all(any(equivalent(x, y) for y in r2.mu_set) for x in r1.mu_set) and all(
        any(equivalent(x, y) for x in r1.mu_set) for y in r2.mu_set
    )


@dataclass
class FilteringReport:
    pairs: list[dict]
    geach_on_fork: AxiomReport | None

    @property
    def projective_products(self) -> int:
        return sum(p["product_projective"] for p in self.pairs)


def filtering_probe(catalog: list[ClosureAlgebra], *, fork: ClosureAlgebra | None = None) -> FilteringReport:
    """Test whether products of projective algebras stay projective."""
    pairs = []
    for i, b1 in enumerate(catalog):
        for b2 in catalog[i:]:
            prod = product(b1, b2)
            pairs.append(
                {
                    "left_atoms": b1.n_atoms,
                    "right_atoms": b2.n_atoms,
                    "product_projective": is_projective_fork(prod),
                }
            )
    geach = check_axiom("geach", fork) if fork is not None else None
    return FilteringReport(pairs, geach)
