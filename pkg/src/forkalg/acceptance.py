"""The acceptance suite: twelve reproducible checks shared by the CLI and the tests.

Each check returns a :class:`CheckResult`. :func:`run_all` also turns an
unexpected exception into a failed row, so a full run always produces a
complete table.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from ._bits import iter_bits, popcount
from .algebra import (
    ClosureAlgebra,
    AlgHom,
    cm,
    is_isomorphic,
    product,
    subalgebras,
)
from .axioms import (
    FORK_AXIOMS,
    check_axiom,
    frame_condition_bd2,
    frame_condition_bw2,
    wdp_witness_check,
)
from .builtins import b_fork, b_w, w_frame
from .catalog import fork_frames, quasiorders
from .frame import (
    FINITARY,
    UNITARY,
    Frame,
    Morphism,
    dense_antichains,
    is_bounded_morphism,
    maximal_points,
    subframe,
)
from .projectivity import (
    bounded_injectivity_probe,
    brute_force_retraction,
    build_retraction,
    find_bw_subalgebra,
    is_projective_fork,
)
from .unification import (
    MuReport,
    brute_force_mu,
    more_general,
    mu_set,
    mu_sets_match,
    projective_targets,
    unification_type,
)

DEFAULT_SEED = 20260418
RANDOM_SAMPLES = 500


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.number:2d} {self.title}: {self.detail}"


@dataclass
class MuLedger:
    """Mu-set cardinalities seen during a run, for the invariance check."""

    reports: list[tuple[str, list[int]]] = field(default_factory=list)

    def add(self, name: str, report: MuReport) -> MuReport:
        self.reports.append((name, report.cardinalities))
        return report


def _set(a: ClosureAlgebra, labels: str) -> int:
    return a.element("{" + labels + "}")


def check_fork_structure() -> CheckResult:
    a = b_fork()
    want = {_set(a, s) for s in ("", "u", "u,v", "u,w", "u,v,w")}
    closed = set(a.closed_elements())
    ok = a.size == 8 and a.n_atoms == 3 and closed == want
    shown = ", ".join(a.format(x) for x in sorted(closed))
    return CheckResult(1, "fork algebra structure", ok, f"{a.size} elements, closed: {shown}")


def check_w_closures() -> CheckResult:
    a = b_w()
    want = {"u": "u", "u'": "u'", "t": "u,t", "v": "u,u',v", "w": "u',w"}
    got = {name: a.closure(_set(a, name)) for name in want}
    ok = all(got[k] == _set(a, v) for k, v in want.items())
    detail = "; ".join(f"f({k})={a.format(got[k])}" for k in want)
    return CheckResult(2, "atom closures of B_W", ok, detail)


def check_axioms() -> CheckResult:
    results = []
    for a in (b_fork(), b_w()):
        for name in FORK_AXIOMS:
            results.append(check_axiom(name, a).holds)
    bf = b_fork()
    geach = check_axiom("geach", bf)
    witness_ok = not geach.holds and geach.witness == {"x": _set(bf, "v")}
    ok = all(results) and witness_ok
    w = bf.format(geach.witness["x"]) if geach.witness else "none"
    return CheckResult(3, "axioms on B_F and B_W", ok, f"fork axioms hold: {all(results)}; Geach witness x={w}")


def check_correspondence(max_points: int = 5) -> CheckResult:
    bad = []
    frames = quasiorders(max_points)
    for fr in frames:
        a = cm(fr)
        if check_axiom("bd2", a).holds != frame_condition_bd2(fr):
            bad.append(("bd2", fr))
        if check_axiom("bw2", a).holds != frame_condition_bw2(fr):
            bad.append(("bw2", fr))
    return CheckResult(
        4, "frame correspondence", not bad, f"{len(frames)} quasiorders, {len(bad)} exceptions"
    )


def _has_bw_subalgebra(a: ClosureAlgebra) -> bool:
    target = b_w()
    return any(
        sub.n_atoms == 5 and is_isomorphic(sub, target) is not None for sub, _ in subalgebras(a)
    )


def projectivity_routes(fr: Frame) -> tuple[bool, bool, bool]:
    """Atom condition, absence of a B_W subalgebra, and retractability of small extensions."""
    a = cm(fr)
    atom = is_projective_fork(a)
    no_bw = not _has_bw_subalgebra(a)
    probe = bounded_injectivity_probe(fr, fr.n + 2)
    return atom, no_bw, probe.all_retractable


def check_projectivity(max_points: int = 6) -> CheckResult:
    frames = fork_frames(max_points, connected=True)
    bad = 0
    projective = 0
    for fr in frames:
        routes = projectivity_routes(fr)
        projective += routes[0]
        witness = find_bw_subalgebra(cm(fr))
        certified = (witness is None) == routes[0]
        if len(set(routes)) != 1 or not certified:
            bad += 1
    return CheckResult(
        5,
        "projectivity characterization",
        bad == 0,
        f"{len(frames)} connected fork frames, {projective} projective, {bad} disagreements",
    )


def check_bw_certificate() -> CheckResult:
    a = b_w()
    meet = a.closure(_set(a, "t")) & a.closure(_set(a, "w"))
    wit = find_bw_subalgebra(a)
    want = {"v": "v", "d": "u,u'", "u": "u", "t": "t", "u'": "u'", "w": "w"}
    ok = meet == 0 and wit is not None
    if wit is not None:
        ok = ok and all(wit.elements[k] == _set(a, v) for k, v in want.items())
        shown = ", ".join(f"{k}={a.format(v)}" for k, v in wit.elements.items())
    else:
        shown = "no witness"
    return CheckResult(6, "B_W certificate", ok, f"f(t).f(w)={a.format(meet)}; {shown}")


# random retraction instances ------------------------------------------------------


def random_projective_frame(rng: random.Random, max_points: int) -> Frame:
    """A connected fork frame in which every two upper points share a lower bound."""
    if max_points == 1 or rng.random() < 0.1:
        return Frame(1, (1,))
    max_tops = 1
    while (max_tops + 1) + (max_tops + 1) * max_tops // 2 <= max_points:
        max_tops += 1
    tops = rng.randint(1, max_tops)
    rows = [1 << i for i in range(tops)]
    pairs = [(i, j) for i in range(tops) for j in range(i + 1, tops)]
    for i, j in pairs:
        rows.append((1 << len(rows)) | (1 << i) | (1 << j))
    if tops == 1:
        rows.append((1 << len(rows)) | 1)
    while len(rows) < max_points and rng.random() < 0.6:
        ups = rng.sample(range(tops), min(tops, rng.randint(1, 2)))
        rows.append((1 << len(rows)) | sum(1 << u for u in ups))
    return Frame(len(rows), tuple(rows))


def random_extension(rng: random.Random, v: Frame, max_points: int) -> Frame:
    """Add points to ``v`` keeping it a generated subframe of a fork frame."""
    rows = list(v.succ)
    maximal = list(iter_bits(maximal_points(v)))
    extra = rng.randint(0, max_points - v.n)
    new_tops = rng.randint(0, extra // 2)
    for _ in range(new_tops):
        maximal.append(len(rows))
        rows.append(1 << len(rows))
    for _ in range(extra - new_tops):
        k = rng.choice((0, 1, 2, 2, 2))
        ups = rng.sample(maximal, min(k, len(maximal)))
        rows.append((1 << len(rows)) | sum(1 << u for u in ups))
    return Frame(len(rows), tuple(rows))


def random_instance(rng: random.Random, max_points: int = 12) -> tuple[Frame, Morphism]:
    v = random_projective_frame(rng, rng.randint(1, min(7, max_points)))
    w = random_extension(rng, v, max_points)
    perm = list(range(w.n))
    rng.shuffle(perm)
    w = w.permute(perm)
    return w, Morphism(v, w, tuple(perm[i] for i in range(v.n)))


def check_retractions(samples: int = RANDOM_SAMPLES, seed: int = DEFAULT_SEED) -> CheckResult:
    rng = random.Random(seed)
    failures = 0
    compared = 0
    for _ in range(samples):
        w, emb = random_instance(rng)
        try:
            plan = build_retraction(w, emb)
        except Exception:
            failures += 1
            continue
        m = plan.map
        identity = all(m.map[emb.map[i]] == i for i in range(emb.source.n))
        if not (is_bounded_morphism(m) and m.is_surjective() and identity):
            failures += 1
            continue
        if w.n <= 8:
            compared += 1
            if brute_force_retraction(w, emb) is None:
                failures += 1
    return CheckResult(
        7,
        "constructive retraction",
        failures == 0,
        f"{samples} random instances, {compared} compared with brute force, {failures} failures",
    )


# unification ------------------------------------------------------------------


def check_bw_unification(ledger: MuLedger | None = None) -> CheckResult:
    ledger = ledger or MuLedger()
    a = b_w()
    rep = ledger.add("B_W", mu_set(a))
    want = sorted([a.closure(_set(a, "t")), a.closure(_set(a, "w"))])
    kernels_ok = rep.kernels == want
    incomparable = len(rep.mu_set) == 2 and all(
        more_general(x, y, prefilter=False) is None
        for x, y in ((rep.mu_set[0], rep.mu_set[1]), (rep.mu_set[1], rep.mu_set[0]))
    )
    brute = ledger.add("B_W brute force", brute_force_mu(a))
    ok = kernels_ok and incomparable and unification_type(a) == FINITARY and mu_sets_match(rep, brute)
    shown = ", ".join(a.format(k) for k in rep.kernels)
    return CheckResult(8, "unification of B_W", ok, f"kernels {shown}; type {rep.type}; brute force {len(brute.mu_set)} classes")


def check_type_theorem(max_atoms: int = 5, ledger: MuLedger | None = None) -> CheckResult:
    ledger = ledger or MuLedger()
    frames = fork_frames(max_atoms)
    bad = 0
    kinds = {UNITARY: 0, FINITARY: 0}
    for fr in frames:
        a = cm(fr)
        rep = ledger.add(f"fork frame {fr}", mu_set(a))
        brute = ledger.add(f"fork frame {fr} brute force", brute_force_mu(a))
        if rep.type not in kinds or not mu_sets_match(rep, brute):
            bad += 1
            continue
        kinds[rep.type] += 1
    return CheckResult(
        9,
        "unification type theorem",
        bad == 0,
        f"{len(frames)} fork algebras: {kinds[UNITARY]} unitary, {kinds[FINITARY]} finitary, {bad} exceptions",
    )


def check_variety() -> CheckResult:
    a = b_w()
    axioms = all(check_axiom(name, a).holds for name in FORK_AXIOMS)
    w = w_frame()
    gen = w.up(w.index("u'"))
    sub, inc = subframe(w, gen)
    iso = is_isomorphic(cm(sub), b_fork()) is not None
    hom = AlgHom(a, cm(sub), inc)
    onto = iso and hom.is_valid() and hom.is_surjective()
    shown = "{" + ",".join(w.names(gen)) + "}"
    return CheckResult(
        10,
        "variety sanity",
        axioms and onto,
        f"B_W satisfies fork axioms: {axioms}; generated subframe {shown} maps B_W onto B_F: {onto}",
    )


def check_wdp_and_filtering(max_atoms: int = 5) -> CheckResult:
    bf = b_fork()
    wdp_f = wdp_witness_check(bf).holds
    wdp_ff = wdp_witness_check(product(bf, bf)).holds
    catalog = projective_targets(max_atoms)
    projective_products = 0
    pairs = 0
    for i, b1 in enumerate(catalog):
        for b2 in catalog[i:]:
            pairs += 1
            projective_products += is_projective_fork(product(b1, b2))
    ok = wdp_f and not wdp_ff and projective_products == 0
    return CheckResult(
        11,
        "weak disjunction and filtering",
        ok,
        f"WDP on B_F: {wdp_f}, on B_F x B_F: {wdp_ff}; {pairs} products, {projective_products} projective",
    )


def check_mu_invariance(ledger: MuLedger | None = None, max_points: int = 5) -> CheckResult:
    ledger = ledger or MuLedger()
    if not ledger.reports:
        check_bw_unification(ledger)
        check_type_theorem(ledger=ledger)
    bad = [name for name, sizes in ledger.reports if len(sizes) != 1]
    frames = quasiorders(max_points)
    for fr in frames:
        sizes = {popcount(s) for s in dense_antichains(fr)}
        if len(sizes) != 1:
            bad.append(str(fr))
    return CheckResult(
        12,
        "mu-set cardinality invariance",
        not bad,
        f"{len(ledger.reports)} unifier orders and {len(frames)} quasiorders, {len(bad)} exceptions",
    )


def run_all(*, seed: int = DEFAULT_SEED, samples: int = RANDOM_SAMPLES) -> list[CheckResult]:
    ledger = MuLedger()
    checks: list[Callable[[], CheckResult]] = [
        check_fork_structure,
        check_w_closures,
        check_axioms,
        check_correspondence,
        check_projectivity,
        check_bw_certificate,
        lambda: check_retractions(samples, seed),
        lambda: check_bw_unification(ledger),
        lambda: check_type_theorem(ledger=ledger),
        check_variety,
        check_wdp_and_filtering,
        lambda: check_mu_invariance(ledger),
    ]
    out = []
    for k, run in enumerate(checks, start=1):
        start = time.perf_counter()
        try:
            res = run()
        except Exception as exc:
            res = CheckResult(k, "error", False, f"{type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - start
        out.append(res)
    return out
