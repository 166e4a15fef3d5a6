"""Command-line entry point.

Exit status is 0 for a positive verdict, 1 for a negative one and 2 for
errors, so commands can be chained in shell scripts.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .algebra import ClosureAlgebra, cm
from .axioms import BUILTINS, FORK_AXIOMS, check_equation
from .catalog import CatalogQuery, enumerate_frames
from .errors import ForkAlgError, ParseError
from .frame import (
    Frame,
    components,
    is_connected,
    is_fork_frame,
    is_partial_order,
    is_quasiorder,
    levels,
    mu_sets,
    order_stats,
    subframe,
)
from .acceptance import DEFAULT_SEED, RANDOM_SAMPLES, run_all
from .projectivity import build_retraction, find_bw_subalgebra, projectivity_obstruction
from .terms import parse_term
from .unification import admissible_congruences, brute_force_mu, mu_set

OK, FALSE, ERROR = 0, 1, 2

GROUP_COLORS = {"V": "lightblue", "W1": "palegreen", "W2": "khaki", "W3": "lightpink"}


class UsageError(Exception):
    pass


# rendering ---------------------------------------------------------------------------


def _covers(fr: Frame) -> list[tuple[int, int]]:
    out = []
    for x in range(fr.n):
        above = fr.strict_up(x)
        for y in range(fr.n):
            if not above >> y & 1:
                continue
            if any(above >> z & 1 and fr.strict_up(z) >> y & 1 for z in range(fr.n)):
                continue
            out.append((x, y))
    return out


def to_dot(fr: Frame, *, colors: dict[int, str] | None = None, name: str = "frame") -> str:
    """Hasse diagram, drawn bottom-up; atoms closed in the complex algebra are filled."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for x, label in enumerate(fr.labels):
        attrs = [f'label="{label}"']
        closed = fr.strict_down(x) == 0
        if colors and x in colors:
            attrs.append(f'style="filled{",bold" if closed else ""}"')
            attrs.append(f'fillcolor="{colors[x]}"')
        elif closed:
            attrs += ["style=filled", 'fillcolor="black"', 'fontcolor="white"']
        lines.append(f"  p{x} [{', '.join(attrs)}];")
    for x, y in _covers(fr):
        lines.append(f"  p{x} -> p{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _emit(args, data: dict, text: str, dot: str | None = None) -> None:
    if args.format == "json":
        print(io.dump_json(data))
    elif args.format == "dot":
        if dot is None:
            raise UsageError("this command has no DOT rendering")
        sys.stdout.write(dot)
    else:
        print(text)


def _load(args) -> Frame:
    return io.load(args.input, close=args.close)


def _algebra(args) -> ClosureAlgebra:
    return cm(_load(args))


# verbs ------------------------------------------------------------------------------


def cmd_frame_stats(args) -> int:
    fr = _load(args)
    data: dict = {
        "points": fr.n,
        "quasiorder": is_quasiorder(fr),
        "partial_order": is_partial_order(fr),
        "connected": is_connected(fr),
        "components": [fr.names(c) for c in components(fr)],
    }
    h, w, lw = order_stats(fr)
    data.update(height=h, width=w, local_width=lw, fork=is_fork_frame(fr))
    if data["fork"]:
        low, high = levels(fr)
        data["levels"] = {"lower": fr.names(low), "upper": fr.names(high)}
    text = "\n".join(f"{k}: {v}" for k, v in data.items())
    _emit(args, data, text, to_dot(fr))
    return OK


def cmd_frame_mu(args) -> int:
    fr = _load(args)
    found, kind = mu_sets(fr)
    sets = [fr.names(s) for s in found]
    data = {"mu_sets": sets, "type": kind}
    text = "\n".join([f"type: {kind}"] + ["mu-set: {" + ", ".join(s) + "}" for s in sets])
    _emit(args, data, text)
    return OK


def cmd_algebra_axioms(args) -> int:
    a = _algebra(args)
    if args.equation:
        terms = {"equation": parse_term(args.equation)}
    else:
        names = args.axiom or list(FORK_AXIOMS)
        unknown = [n for n in names if n not in BUILTINS]
        if unknown:
            raise UsageError(f"unknown axiom {unknown[0]!r}; choose from {sorted(BUILTINS)}")
        terms = {n: BUILTINS[n] for n in names}
    reports = {}
    for name, term in terms.items():
        rep = check_equation(term, a, name=name)
        witness = None
        if rep.witness is not None:
            witness = {k: a.format(v) for k, v in rep.witness.items()}
        reports[name] = {"holds": rep.holds, "witness": witness, "checked": rep.checked}
    lines = []
    for name, rep in reports.items():
        line = f"{name}: {'holds' if rep['holds'] else 'fails'}"
        if rep["witness"]:
            line += " at " + ", ".join(f"{k}={v}" for k, v in rep["witness"].items())
        lines.append(line)
    _emit(args, {"axioms": reports}, "\n".join(lines))
    return OK if all(r["holds"] for r in reports.values()) else FALSE


def cmd_algebra_projective(args) -> int:
    a = _algebra(args)
    obstruction = projectivity_obstruction(a)
    data = {"projective": obstruction is None, "obstruction": obstruction}
    text = f"projective: {str(obstruction is None).lower()}"
    if obstruction:
        if obstruction["reason"] == "zero-meet":
            text += "\nwitness pair: (" + ", ".join(obstruction["pair"]) + ")"
        else:
            text += f"\nclopen element: {obstruction['clopen']}"
    _emit(args, data, text, to_dot(a.atom_frame))
    return OK if obstruction is None else FALSE


def cmd_algebra_retract(args) -> int:
    w = _load(args)
    wanted = [s.strip() for s in args.sub.split(",") if s.strip()]
    sub, inclusion = subframe(w, w.mask(wanted))
    plan = build_retraction(w, inclusion)
    mapping = {w.labels[x]: sub.labels[y] for x, y in enumerate(plan.map.map)}
    data = {"retraction": mapping, "groups": plan.groups}
    if args.explain:
        data["case_log"] = plan.case_log
    lines = [f"{k} -> {v}" for k, v in mapping.items()]
    if args.explain:
        lines.append("cases:")
        lines += [f"  {e['point']}: {e['case']} -> {e['value']}" for e in plan.case_log]
    colors = {}
    for group, names in plan.groups.items():
        for label in names:
            colors[w.index(label)] = GROUP_COLORS[group]
    _emit(args, data, "\n".join(lines), to_dot(w, colors=colors, name="retraction"))
    return OK


def cmd_algebra_bw_witness(args) -> int:
    a = _algebra(args)
    wit = find_bw_subalgebra(a)
    if wit is None:
        _emit(args, {"witness": None}, "no B_W subalgebra: the algebra is projective")
        return FALSE
    labels = a.atom_frame.labels
    elements = wit.describe(a)
    data = {"pair": [labels[wit.a], labels[wit.b]], "witness": elements}
    text = f"pair: ({labels[wit.a]}, {labels[wit.b]})\n" + "\n".join(
        f"{k} = {v}" for k, v in elements.items()
    )
    _emit(args, data, text)
    return OK


def cmd_unify_report(args) -> int:
    a = _algebra(args)
    rep = mu_set(a)
    adm = [a.names(k.generator) for k in admissible_congruences(a)]
    certificates = []
    for i, (j, h) in sorted(rep.order_certificates.items()):
        certificates.append(
            {
                "dominated": a.names(rep.unifiers[i].kernel.generator),
                "by": a.names(rep.unifiers[j].kernel.generator),
                "hom": h.dual.as_dict(),
            }
        )
    mu = [a.names(u.kernel.generator) for u in rep.mu_set]
    data = {
        "admissible": adm,
        "mu_set": mu,
        "type": rep.type,
        "certificates": certificates,
    }
    if args.brute:
        brute = brute_force_mu(a, args.bound)
        data["brute_force"] = {"classes": len(brute.mu_set), "type": brute.type}
    fmt = lambda s: "{" + ",".join(s) + "}"
    lines = ["admissible kernels: " + " ".join(fmt(k) for k in adm)]
    lines.append("mu-set kernels: " + " ".join(fmt(k) for k in mu))
    lines.append(f"type: {rep.type}")
    for c in certificates:
        lines.append(f"kernel {fmt(c['dominated'])} is dominated by kernel {fmt(c['by'])}")
    if args.brute:
        lines.append(f"brute force: {data['brute_force']['classes']} classes, type {data['brute_force']['type']}")
    _emit(args, data, "\n".join(lines))
    return OK


def cmd_catalog_dump(args) -> int:
    q = CatalogQuery(
        args.max_points,
        poset=args.poset,
        connected=args.connected,
        max_height=args.max_height,
        max_local_width=args.max_local_width,
        fork=args.fork,
        min_points=args.min_points,
    )
    frames = list(enumerate_frames(q))
    if args.count:
        sizes: dict[int, int] = {}
        for fr in frames:
            sizes[fr.n] = sizes.get(fr.n, 0) + 1
        data = {"total": len(frames), "by_points": {str(k): v for k, v in sorted(sizes.items())}}
        text = "\n".join(f"{k} points: {v}" for k, v in sorted(sizes.items()))
        _emit(args, data, text + f"\ntotal: {len(frames)}")
        return OK
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, fr in enumerate(frames):
            (out / f"frame_{i:04d}.frame").write_text(io.dumps(fr))
        print(f"wrote {len(frames)} frames to {out}")
        return OK
    if args.format == "json":
        print(io.dump_json([io.to_json(fr) for fr in frames]))
    else:
        sys.stdout.write("---\n".join(io.dumps(fr) for fr in frames))
    return OK


def cmd_verify(args) -> int:
    results = run_all(seed=args.seed, samples=args.samples)
    if args.format == "json":
        rows = [
            {"criterion": r.number, "title": r.title, "passed": r.passed, "detail": r.detail}
            for r in results
        ]
        print(io.dump_json(rows))
    else:
        for r in results:
            print(r.line())
        passed = sum(r.passed for r in results)
        print(f"{passed}/{len(results)} criteria passed")
    return OK if all(r.passed for r in results) else FALSE


# parser -------------------------------------------------------------------------------


def _format_option(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--format", choices=("text", "json", "dot"), default=default)


def _input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="frame file, '-' for stdin, or @fork / @w")
    p.add_argument("--close", action="store_true", help="take the reflexive transitive closure first")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="forkalg", description=__doc__.splitlines()[0])
    _format_option(parser, "text")
    common = argparse.ArgumentParser(add_help=False)
    _format_option(common, argparse.SUPPRESS)
    top = parser.add_subparsers(dest="group", required=True)

    frame = top.add_parser("frame").add_subparsers(dest="verb", required=True)
    p = frame.add_parser("stats", parents=[common], help="order statistics and fork structure")
    _input(p)
    p.set_defaults(func=cmd_frame_stats)
    p = frame.add_parser("mu", parents=[common], help="mu-sets of the quasiorder")
    _input(p)
    p.set_defaults(func=cmd_frame_mu)

    alg = top.add_parser("algebra").add_subparsers(dest="verb", required=True)
    p = alg.add_parser("axioms", parents=[common], help="check equations on the complex algebra")
    _input(p)
    p.add_argument("--axiom", action="append", help=f"one of {sorted(BUILTINS)}; repeatable")
    p.add_argument("--equation", help="an arbitrary equation such as 'f(f(x)) = f(x)'")
    p.set_defaults(func=cmd_algebra_axioms)
    p = alg.add_parser("projective", parents=[common], help="decide projectivity")
    _input(p)
    p.set_defaults(func=cmd_algebra_projective)
    p = alg.add_parser("retract", parents=[common], help="retract onto a generated subframe")
    _input(p)
    p.add_argument("--sub", required=True, help="comma-separated points of the subframe")
    p.add_argument("--explain", action="store_true", help="include the per-point case log")
    p.set_defaults(func=cmd_algebra_retract)
    p = alg.add_parser("bw-witness", parents=[common], help="embed B_W into a non-projective algebra")
    _input(p)
    p.set_defaults(func=cmd_algebra_bw_witness)

    uni = top.add_parser("unify").add_subparsers(dest="verb", required=True)
    p = uni.add_parser("report", parents=[common], help="admissible kernels, mu-set and unification type")
    _input(p)
    p.add_argument("--brute", action="store_true", help="cross-check with the brute-force oracle")
    p.add_argument("--bound", type=int, default=None, help="target size bound for --brute")
    p.set_defaults(func=cmd_unify_report)

    cat = top.add_parser("catalog").add_subparsers(dest="verb", required=True)
    p = cat.add_parser("dump", parents=[common], help="enumerate frames up to isomorphism")
    p.add_argument("--max-points", type=int, required=True)
    p.add_argument("--min-points", type=int, default=1)
    p.add_argument("--poset", action="store_true")
    p.add_argument("--connected", action="store_true")
    p.add_argument("--fork", action="store_true")
    p.add_argument("--max-height", type=int)
    p.add_argument("--max-local-width", type=int)
    p.add_argument("--count", action="store_true", help="print counts only")
    p.add_argument("--out", help="directory for one file per frame")
    p.set_defaults(func=cmd_catalog_dump)

    p = top.add_parser("verify-paper", parents=[common], help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=RANDOM_SAMPLES)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except (ForkAlgError, UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
