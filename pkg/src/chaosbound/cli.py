"""Command-line interface.

Rationals are given and printed as exact ``p/q`` strings.  Exit codes:
0 success, 2 bad input or violated precondition, 3 truncation limit,
4 internal oracle failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import boundary, markov, renorm, symbolic
from .covers import CoverError, PlateauConfig, canonical_cover, format_rational, parse_rational
from .symbolic import ClassLabel, SymbolError

EXIT_OK, EXIT_PRECONDITION, EXIT_TRUNCATION, EXIT_ORACLE = 0, 2, 3, 4


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (CoverError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --- symbolic -----------------------------------------------------------------------


def cmd_order(args) -> str:
    cls = ClassLabel.parse(args.cls)
    s, t = symbolic.parse_seq(args.seqs[0]), symbolic.parse_seq(args.seqs[1])
    return str(symbolic.compare(cls, s, t))


def cmd_compat(args) -> str:
    cls = ClassLabel.parse(args.cls)
    k = (symbolic.parse_seq(args.seqs[0]), symbolic.parse_seq(args.seqs[1]))
    return "true" if symbolic.is_compatible_pair(cls, k) else "false"


def cmd_words(args) -> str:
    pq = args.pq
    p, q = pq.numerator, pq.denominator
    omega = symbolic.balanced_word(p, q)
    big, small = symbolic.rotation_extremes(p, q)
    rm, rp = symbolic.sturmian_bounds(p, q)
    return "\n".join(
        [f"omega=({omega.period})", f"r-={rm}", f"r+={rp}", f"M=({big})", f"m=({small})"]
    )


def cmd_cascade(args) -> str:
    cls = ClassLabel.parse(args.cls)
    periods = symbolic.cascade_periods(cls, args.n)
    lines = [" ".join(map(str, periods))]
    w = "0"
    for _ in range(min(args.n, 4)):
        w = symbolic.apply_replacement(cls, w)
        lines.append(w)
    return "\n".join(lines)


# --- entropy and dimension ------------------------------------------------------------


def _config(args) -> PlateauConfig:
    return PlateauConfig(canonical_cover(ClassLabel.parse(args.cls), args.lam), args.a, args.b)


def cmd_entropy(args) -> str:
    config = _config(args)
    res = markov.entropy(markov.build_markov(config))
    rec = {
        "a": format_rational(config.a),
        "b": format_rational(config.b),
        "positive": res.positive,
        "entropy_estimate": res.value,
        "entropy_bounds_estimate": [res.lower, res.upper],
        "matrix_size": res.matrix_size,
    }
    if args.format == "json":
        return _json(rec)
    verdict = "positive" if res.positive else "zero"
    return f"{verdict} h={res.value:.15g} in [{res.lower:.15g}, {res.upper:.15g}] matrix={res.matrix_size}"


def cmd_dimension(args) -> str:
    cv = canonical_cover(ClassLabel.parse(args.cls), args.lam)
    d = markov.survivor_dimension(cv, args.a, args.b)
    rec = {
        "a": format_rational(args.a),
        "b": format_rational(args.b),
        "markov_exact_estimate": d.value,
        "markov_exact_bounds_estimate": [d.lower, d.upper],
    }
    if args.n:
        n_n, cd = markov.cylinder_count(cv, args.a, args.b, args.n)
        rec["cylinder_count"] = n_n
        rec["cylinder_estimate"] = cd.value
    if args.format == "json":
        return _json(rec)
    text = f"{d.value:.15g} in [{d.lower:.15g}, {d.upper:.15g}]"
    if args.n:
        text += f" cylinders(n={args.n})={rec['cylinder_count']} estimate={rec['cylinder_estimate']:.15g}"
    return text


# --- boxes ---------------------------------------------------------------------------------


def _svg(levels: dict[int, list[renorm.ParamBox]], root: renorm.ParamBox) -> str:
    r = root.rect
    sx = 1000 / (r.a_hi - r.a_lo)
    sy = 1000 / (r.b_hi - r.b_lo)
    fmt = lambda x: f"{float(x):.12g}"  # noqa: E731
    strokes = ["#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" width="1000" height="1000">',
        '<rect x="0" y="0" width="1000" height="1000" fill="none" stroke="#000000"/>',
    ]
    for d in sorted(levels):
        if d == 0:
            continue
        for bx in levels[d]:
            q = bx.rect
            x = (q.a_lo - r.a_lo) * sx
            y = (r.b_hi - q.b_hi) * sy
            w = (q.a_hi - q.a_lo) * sx
            h = (q.b_hi - q.b_lo) * sy
            out.append(
                f'<rect x="{fmt(x)}" y="{fmt(y)}" width="{fmt(w)}" height="{fmt(h)}" fill="none" '
                f'stroke="{strokes[d % len(strokes)]}" stroke-width="1"><title>{bx.full_label}</title></rect>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_boxes(args) -> str:
    cls = ClassLabel.parse(args.cls)
    levels = renorm.box_tree(cls, args.depth, args.qmax, args.nmax, args.lam)
    recs = [r for r in renorm.boxes_to_records(levels) if r["depth"] > 0]
    doc = {
        "class": cls.value,
        "lambda": args.lam,
        "depth": args.depth,
        "q_max": args.qmax,
        "n_max": args.nmax,
        "counts": {str(d): len(levels[d]) for d in sorted(levels) if d > 0},
        "boxes": recs,
    }
    text = _json(doc)
    if args.format == "svg":
        # JSON first, so a failing SVG write cannot leave it half-written
        if args.out:
            Path(args.out).with_suffix(".json").write_text(text)
        return _svg(levels, levels[0][0])
    return text


# --- boundary --------------------------------------------------------------------------------


def cmd_trace(args) -> str:
    cv = canonical_cover(ClassLabel.parse(args.cls), args.lam)
    pts = boundary.trace(cv, args.cmin, args.cmax, args.steps, args.tol, jobs=args.jobs)
    if args.format == "json":
        return _json(
            [
                {
                    "c": format_rational(p.c),
                    "a_lo": format_rational(p.a_lo),
                    "a_hi": format_rational(p.a_hi),
                    "line": p.line,
                }
                for p in pts
            ]
        )
    return boundary.trace_to_csv(pts)


def cmd_classify(args) -> str:
    config = _config(args)
    res = boundary.classify_point(config, args.depth, args.qmax, args.nmax)
    return res.to_json()


def cmd_anharmonic(args) -> str:
    cv = canonical_cover(ClassLabel.parse(args.cls), args.lam)
    enc = boundary.anharmonic_point(cv, args.b, args.tol)
    lo, hi = boundary.anharmonic_bisection(cv, args.b, args.tol)
    doc = {
        "b": format_rational(args.b),
        "nested": [format_rational(enc.a_lo), format_rational(enc.a_hi)],
        "bisection": [format_rational(lo), format_rational(hi)],
        "overlap": lo <= enc.a_hi and enc.a_lo <= hi,
        "path": enc.path,
        "estimate": float((enc.a_lo + enc.a_hi) / 2),
    }
    return _json(doc)


# --- parser --------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chaosbound", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, cls_default="A"):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--class", dest="cls", default=cls_default, help="cover class A/B/C/D")
        sp.add_argument("--lambda", dest="lam", type=int, default=2, help="slope magnitude (default 2)")
        sp.add_argument("--format", choices=["text", "csv", "json", "svg"], default=None)
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--jobs", type=int, default=1)
        return sp

    sp = add("order", cmd_order, "compare two sequences in the parity-twisted order")
    sp.add_argument("seqs", nargs=2)
    sp = add("compat", cmd_compat, "check a kneading pair for compatibility")
    sp.add_argument("seqs", nargs=2)
    sp = add("words", cmd_words, "balanced word and Sturmian bounds for p/q")
    sp.add_argument("--pq", type=_rational, required=True)
    sp = add("cascade", cmd_cascade, "anharmonic cascade periods", "C")
    sp.add_argument("--n", type=int, default=4)
    for name, func, text in (("entropy", cmd_entropy, "entropy of the plateau map"),
                             ("dimension", cmd_dimension, "survivor-set dimension of the open map")):
        sp = add(name, func, text)
        sp.add_argument("--a", type=_rational, required=True)
        sp.add_argument("--b", type=_rational, required=True)
        if name == "dimension":
            sp.add_argument("--n", type=int, default=0, help="also count cylinders of length n")
    sp = add("boxes", cmd_boxes, "renormalization box tree")
    sp.add_argument("--depth", type=int, default=1)
    sp.add_argument("--qmax", type=int, default=5)
    sp.add_argument("--nmax", type=int, default=5)
    sp = add("trace", cmd_trace, "trace the boundary of chaos along a+b=c")
    sp.add_argument("--cmin", type=_rational, required=True)
    sp.add_argument("--cmax", type=_rational, required=True)
    sp.add_argument("--steps", type=int, default=41)
    sp.add_argument("--tol", type=_rational, default=Fraction(1, 4096))
    sp = add("classify", cmd_classify, "classify a boundary point")
    sp.add_argument("--a", type=_rational, required=True)
    sp.add_argument("--b", type=_rational, required=True)
    sp.add_argument("--depth", type=int, default=6)
    sp.add_argument("--qmax", type=int, default=5)
    sp.add_argument("--nmax", type=int, default=5)
    sp = add("anharmonic", cmd_anharmonic, "enclose the anharmonic parameter at height b", "C")
    sp.add_argument("--b", type=_rational, required=True)
    sp.add_argument("--tol", type=_rational, default=Fraction(1, 2**20))
    return p


_DEFAULT_FORMAT = {"trace": "csv", "boxes": "json", "classify": "json", "anharmonic": "json"}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PRECONDITION
    if args.format is None:
        args.format = _DEFAULT_FORMAT.get(args.command, "text")
    try:
        text = args.func(args)
    except (boundary.TruncationLimit, markov.kernels.OrbitBudgetExceeded) as exc:
        print(f"truncation limit: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (renorm.OracleFailure, markov.MarkovError) as exc:
        print(f"oracle failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (boundary.BoundaryError, CoverError, SymbolError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
