"""Projectivity of fork algebras and bounded retractions of fork frames."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ._bits import bits_list, from_indices, iter_bits, lowest, popcount
from .algebra import (
    AlgHom,
    ClosureAlgebra,
    Element,
    is_directly_indecomposable,
    subalgebra_from_partition,
)
from .axioms import require_fork_algebra
from .builtins import b_w, w_frame
from .errors import (
    NotForkFrame,
    NotGenerated,
    NotIndecomposable,
    NotProjectiveSubalgebra,
    ProofGap,
    WrongVariety,
)
from .frame import (
    Frame,
    Morphism,
    components,
    is_bounded_morphism,
    is_connected,
    is_fork_frame,
    is_generated_subframe,
    is_partial_order,
    is_quasiorder,
    maximal_points,
    order_stats,
    search_bounded_morphisms,
    subframe,
)


# algebraic conditions ----------------------------------------------------------


def necessary_condition_v2m(a: ClosureAlgebra, m: int) -> bool:
    """Indecomposable, and any ``<= m`` non-closed atoms have nonzero closure meet."""
    if m < 2:
        raise WrongVariety("the prong bound m must be at least 2")
    fr = a.atom_frame
    if a.is_trivial or not is_partial_order(fr):
        raise WrongVariety("atom frame must be a nonempty partial order")
    h, _, lw = order_stats(fr)
    if h > 2 or lw > m:
        raise WrongVariety(f"height {h} / local width {lw} outside the class for m={m}")
    if not is_directly_indecomposable(a):
        return False
    nonclosed = bits_list(a.nonclosed_atoms())
    for k in range(2, m + 1):
        for combo in itertools.combinations(nonclosed, k):
            meet = a.top
            for i in combo:
                meet &= a.closure(1 << i)
            if meet == 0:
                return False
    return True


def zero_meet_pairs(a: ClosureAlgebra) -> list[tuple[int, int]]:
    """Non-closed atom pairs ``(i, j)``, ``i < j``, whose closures are disjoint."""
    nonclosed = bits_list(a.nonclosed_atoms())
    return [
        (i, j)
        for i, j in itertools.combinations(nonclosed, 2)
        if a.closure(1 << i) & a.closure(1 << j) == 0
    ]


def is_projective_fork(a: ClosureAlgebra) -> bool:
    require_fork_algebra(a)
    return is_directly_indecomposable(a) and not zero_meet_pairs(a)


def projectivity_obstruction(a: ClosureAlgebra) -> dict | None:
    """Why ``a`` fails to be projective, or ``None`` when it is projective."""
    require_fork_algebra(a)
    if not is_directly_indecomposable(a):
        comps = components(a.atom_frame)
        return {"reason": "decomposable", "clopen": a.format(comps[0])}
    pairs = zero_meet_pairs(a)
    if pairs:
        i, j = pairs[0]
        labels = a.atom_frame.labels
        return {"reason": "zero-meet", "pair": [labels[i], labels[j]]}
    return None


def is_projective_frame(f: Frame) -> bool:
    """Dual form: connected, and any two upper-level points share a lower bound."""
    if f.n == 0 or not is_connected(f):
        return False
    upper = [x for x in range(f.n) if f.strict_down(x)]
    return all(f.down(x) & f.down(y) for x, y in itertools.combinations(upper, 2))


# the B_W witness ------------------------------------------------------------------


@dataclass
class BWWitness:
    a: int
    b: int
    elements: dict[str, Element]
    subalgebra: ClosureAlgebra
    embedding: AlgHom

    def describe(self, algebra: ClosureAlgebra) -> dict[str, str]:
        return {k: algebra.format(v) for k, v in self.elements.items()}


def _bw_from_pair(a: ClosureAlgebra, i: int, j: int) -> BWWitness:
    fa, fb = a.closure(1 << i), a.closure(1 << j)
    v = a.complement(a.closure((1 << i) | (1 << j)))
    d = a.complement(v) & a.closure(v)
    u = d & fa
    t = a.complement(d) & fa
    u2 = d & fb
    w = a.complement(d) & fb
    blocks = {"u": u, "u'": u2, "t": t, "v": v, "w": w}
    checks = {
        "nonzero": all(blocks.values()),
        "disjoint": all(x & y == 0 for x, y in itertools.combinations(blocks.values(), 2)),
        "sum is 1": sum(blocks.values()) == a.top,
        "u closed": a.is_closed(u),
        "u' closed": a.is_closed(u2),
        "f(t) = f(a)": a.closure(t) == fa,
        "f(w) = f(b)": a.closure(w) == fb,
        "f(v) = u+u'+v": a.closure(v) == u | u2 | v,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise ProofGap(f"B_W construction broke: {', '.join(failed)}")
    got = subalgebra_from_partition(a, list(blocks.values()), labels=list(blocks))
    if got is None:
        raise ProofGap("B_W blocks do not span a closure subalgebra")
    sub, _ = got
    bw = b_w()
    if sub.atom_frame != w_frame():
        raise ProofGap("generated subalgebra is not B_W")
    owner = [0] * a.n_atoms
    for k, blk in enumerate(blocks.values()):
        for x in iter_bits(blk):
            owner[x] = k
    emb = AlgHom(bw, a, Morphism(a.atom_frame, bw.atom_frame, tuple(owner)))
    if not emb.is_valid():
        raise ProofGap("embedding of B_W is not a homomorphism")
    elements = {"v": v, "d": d, "u": u, "t": t, "u'": u2, "w": w}
    return BWWitness(i, j, elements, bw, emb)


def find_bw_subalgebra(a: ClosureAlgebra, *, all_pairs: bool = False):
    """Embed B_W from the first non-closed atom pair with disjoint closures.

    With ``all_pairs`` a list of witnesses, one per such pair, is returned.
    """
    require_fork_algebra(a)
    if not is_directly_indecomposable(a):
        raise NotIndecomposable("the B_W construction needs a directly indecomposable algebra")
    pairs = zero_meet_pairs(a)
    if all_pairs:
        return [_bw_from_pair(a, i, j) for i, j in pairs]
    if not pairs:
        return None
    return _bw_from_pair(a, *pairs[0])


# retractions ------------------------------------------------------------------------


@dataclass
class RetractionPlan:
    sup: Frame
    sub: Frame
    map: Morphism
    case_log: list[dict] = field(default_factory=list)
    groups: dict[str, list[str]] = field(default_factory=dict)

    def cases(self) -> dict[str, str]:
        return {entry["point"]: entry["case"] for entry in self.case_log}


def _check_embedding(w: Frame, emb: Morphism) -> None:
    if not is_fork_frame(w):
        raise NotForkFrame("the outer frame must be a fork frame")
    if not is_generated_subframe(emb.source, w, emb):
        raise NotGenerated("embedding image is not a generated subframe")


def build_retraction(w: Frame, v_embedding: Morphism) -> RetractionPlan:
    """Bounded retraction of ``w`` onto an embedded projective generated subframe.

    Every choice among admissible points takes the least index.
    """
    _check_embedding(w, v_embedding)
    sub = v_embedding.source
    vset = v_embedding.image()
    if not is_projective_frame(subframe(w, vset)[0]):
        raise NotProjectiveSubalgebra("embedded subframe is not dual to a projective algebra")

    n = w.n
    p = [-1] * n
    log: list[dict] = []
    lab = w.labels

    def assign(x: int, value: int, case: str) -> None:
        if p[x] >= 0 and p[x] != value:
            raise ProofGap(f"{lab[x]} reassigned in case {case}")
        p[x] = value
        log.append({"point": lab[x], "case": case, "value": lab[value]})

    for x in iter_bits(vset):
        p[x] = x
    top_v = maximal_points(w) & vset
    collapse_to = lowest(top_v)
    home = next(c for c in components(w) if c & vset)
    for x in iter_bits(w.all_points & ~home):
        assign(x, collapse_to, "collapse")

    groups = {"V": w.names(vset), "W1": [], "W2": [], "W3": []}
    if popcount(vset) == 1:
        for x in iter_bits(home & ~vset):
            assign(x, collapse_to, "collapse")
    else:
        upper_v = from_indices(x for x in iter_bits(vset) if w.strict_down(x) & vset)
        lower_v = vset & ~upper_v
        lower_w = from_indices(x for x in iter_bits(home) if not w.strict_down(x))
        outside = lower_w & ~vset
        w1 = from_indices(x for x in iter_bits(outside) if w.strict_up(x) & ~vset == 0)
        w3 = from_indices(x for x in iter_bits(outside) if w.strict_up(x) & vset == 0)
        w2 = outside & ~w1 & ~w3
        groups.update(W1=w.names(w1), W2=w.names(w2), W3=w.names(w3))

        def common_lower(s: int, t: int, pool: int) -> int:
            u = lowest(w.down(s) & w.down(t) & pool)
            if u < 0:
                raise ProofGap(f"no common lower bound of {lab[s]} and {lab[t]}")
            return u

        # case 1: everything strictly above x already lies in V
        for x in iter_bits(w1):
            above = bits_list(w.strict_up(x))
            if len(above) == 1:
                assign(x, above[0], "1a")
            elif len(above) == 2:
                assign(x, common_lower(above[0], above[1], vset), "1b")
            else:
                raise ProofGap(f"{lab[x]} has {len(above)} points strictly above it")

        # case 2: x sees one point of V and one point outside
        ys = 0
        for x in iter_bits(w2):
            ys |= w.strict_up(x)
        ys &= ~vset
        covered = 0
        for y in iter_bits(ys):
            xs = [x for x in iter_bits(lower_w & w.down(y)) if w.strict_up(x) & upper_v]
            if any(covered >> x & 1 for x in xs):
                raise ProofGap(f"W2 blocks overlap at {lab[y]}")
            covered |= from_indices(xs)
            tops = []
            for x in xs:
                hit = w.strict_up(x) & upper_v
                if popcount(hit) != 1:
                    raise ProofGap(f"{lab[x]} sees {popcount(hit)} upper points of V")
                tops.append(lowest(hit))
            v1 = tops[0]
            assign(y, v1, "2-y")
            for x, vi in zip(xs, tops):
                if vi == v1:
                    assign(x, v1, "2-same")
                else:
                    assign(x, common_lower(v1, vi, lower_v), "2-split")
        if covered != w2:
            raise ProofGap("W2 is not covered by the blocks X_y")

        # case 3: nothing above x lies in V
        fresh_top = lowest(upper_v)
        for x in iter_bits(w3):
            above = bits_list(w.strict_up(x))
            if len(above) == 1:
                (y,) = above
                if p[y] >= 0:
                    if not upper_v >> p[y] & 1:
                        raise ProofGap(f"{lab[y]} was sent below the upper level of V")
                    assign(x, p[y], "3a-defined")
                else:
                    assign(y, fresh_top, "3a-fresh")
                    assign(x, fresh_top, "3a-fresh")
            elif len(above) == 2:
                y, z = above
                if p[y] >= 0 and p[z] >= 0:
                    if p[y] == p[z]:
                        assign(x, p[y], "3b-same")
                    else:
                        assign(x, common_lower(p[y], p[z], vset), "3b-both")
                elif p[y] >= 0 or p[z] >= 0:
                    done, todo = (y, z) if p[y] >= 0 else (z, y)
                    assign(todo, fresh_top, "3b-one")
                    if p[done] == fresh_top:
                        assign(x, fresh_top, "3b-one")
                    else:
                        assign(x, common_lower(p[done], fresh_top, vset), "3b-one")
                else:
                    pair = next(
                        (
                            (top, low)
                            for top in iter_bits(upper_v)
                            for low in iter_bits(lower_v)
                            if w.strict_up(low) == 1 << top
                        ),
                        None,
                    )
                    if pair is not None:
                        top, low = pair
                        assign(y, top, "3b-none")
                        assign(z, top, "3b-none")
                        assign(x, low, "3b-none")
                    else:
                        assign(y, fresh_top, "3b-none-collapse")
                        assign(z, fresh_top, "3b-none-collapse")
                        assign(x, fresh_top, "3b-none-collapse")
            else:
                raise ProofGap(f"{lab[x]} has {len(above)} points strictly above it")

    missing = [lab[x] for x in range(n) if p[x] < 0]
    if missing:
        raise ProofGap(f"construction left points unassigned: {missing}")
    back = {e: i for i, e in enumerate(v_embedding.map)}
    result = Morphism(w, sub, tuple(back[p[x]] for x in range(n)))
    if not is_bounded_morphism(result):
        raise ProofGap("constructed map is not a bounded morphism")
    if not result.is_surjective():
        raise ProofGap("constructed map is not onto")
    if any(result.map[e] != i for i, e in enumerate(v_embedding.map)):
        raise ProofGap("constructed map does not fix the subframe")
    return RetractionPlan(w, sub, result, log, groups)


def brute_force_retraction(
    w: Frame, v_embedding: Morphism, *, budget: int | None = 10**6
) -> Morphism | None:
    """Lexicographically least bounded retraction found by exhaustive search."""
    if not v_embedding.is_injective() or not is_bounded_morphism(v_embedding):
        raise NotGenerated("embedding must be an injective bounded morphism")
    sub = v_embedding.source
    domains = [sub.all_points] * w.n
    for i, e in enumerate(v_embedding.map):
        domains[e] = 1 << i
    for g in search_bounded_morphisms(w, sub, domains=domains, budget=budget):
        return Morphism(w, sub, g)
    return None


# bounded injectivity probe -----------------------------------------------------------


@dataclass
class ProbeResult:
    extension: Frame
    retraction: Morphism | None


@dataclass
class ProbeReport:
    base: Frame
    max_points: int
    constraint: str
    results: list[ProbeResult]

    @property
    def all_retractable(self) -> bool:
        return all(r.retraction is not None for r in self.results)

    def failures(self) -> list[Frame]:
        return [r.extension for r in self.results if r.retraction is None]


def _fresh_labels(base: Frame, k: int) -> list[str]:
    out, i = [], 1
    while len(out) < k:
        name = f"x{i}"
        if name not in base.labels:
            out.append(name)
        i += 1
    return out


def _fork_extensions(v: Frame, k: int):
    n = v.n
    tops = maximal_points(v)
    news = list(range(n, n + k))
    options = []
    for i in news:
        pool = bits_list(tops) + [j for j in news if j != i]
        opts = [()]
        opts += [(a,) for a in pool]
        opts += list(itertools.combinations(pool, 2))
        options.append(opts)
    labels = (*v.labels, *_fresh_labels(v, k))
    for choice in itertools.product(*options):
        rows = list(v.succ)
        for i, ups in zip(news, choice):
            rows.append((1 << i) | from_indices(ups))
        yield Frame(n + k, tuple(rows), labels)


def _quasiorder_extensions(v: Frame, k: int):
    n = v.n
    labels = (*v.labels, *_fresh_labels(v, k))
    cells = [(i, j) for i in range(n, n + k) for j in range(n + k) if i != j]
    for bits in range(1 << len(cells)):
        rows = list(v.succ) + [1 << i for i in range(n, n + k)]
        for c, (i, j) in enumerate(cells):
            if bits >> c & 1:
                rows[i] |= 1 << j
        yield Frame(n + k, tuple(rows), labels)


def bounded_injectivity_probe(
    v: Frame, max_points: int, *, constraint: str = "fork", budget: int | None = 10**6
) -> ProbeReport:
    """Try to retract every small extension of ``v`` that keeps it generated.

    ``constraint`` is ``"fork"`` (extensions must be fork frames) or
    ``"quasiorder"``.
    """
    if constraint == "fork":
        if not is_fork_frame(v):
            raise NotForkFrame("probe base must be a fork frame")
        make, keep = _fork_extensions, is_fork_frame
    elif constraint == "quasiorder":
        if not is_quasiorder(v):
            raise NotForkFrame("probe base must be a quasiorder")
        make, keep = _quasiorder_extensions, is_quasiorder
    else:
        raise ValueError(f"unknown constraint {constraint!r}")
    results = []
    seen = set()
    for k in range(1, max_points - v.n + 1):
        for ext in make(v, k):
            if ext.succ in seen or not keep(ext):
                continue
            seen.add(ext.succ)
            emb = Morphism(v, ext, tuple(range(v.n)))
            results.append(ProbeResult(ext, brute_force_retraction(ext, emb, budget=budget)))
    return ProbeReport(v, max_points, constraint, results)
