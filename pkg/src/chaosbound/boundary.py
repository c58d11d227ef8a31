"""Tracing and classifying the boundary of chaos.

Along each line a + b = c the entropy verdict is monotone in a (zero for
small a, positive for large a), so the boundary point alpha(c) is located
by bisection with exact verdicts at dyadic probes.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, log2

from .covers import (
    DoubleCover,
    PlateauConfig,
    address,
    canonical_cover,
    format_rational,
    kneading_invariant,
)
from .markov import is_chaotic
from .renorm import (
    OracleFailure,
    ParamBox,
    RotationEnclosure,
    _make_child,
    anharmonic_tail,
    child_boxes,
    on_curve_R,
    root_box,
    rotation_data,
    side_verdict,
)
from .symbolic import ClassLabel, Seq, sturmian_bounds

__all__ = [
    "BoundaryError",
    "TruncationLimit",
    "BoundaryPoint",
    "BoundaryClass",
    "HeteroclinicSegment",
    "AnharmonicEnclosure",
    "line_range",
    "alpha_of_c",
    "trace",
    "continuity_violations",
    "admissible_range",
    "anharmonic_chain",
    "anharmonic_point",
    "anharmonic_bisection",
    "heteroclinic_segment",
    "classify_point",
    "trace_to_csv",
]


class BoundaryError(ValueError):
    """Precondition violation (parameter out of range, failed verification)."""


class TruncationLimit(RuntimeError):
    """The point sits where the finite box families stop resolving it."""


def _chaotic(cover: DoubleCover, a: Fraction, b: Fraction) -> bool:
    return is_chaotic(PlateauConfig(cover, a, b))


# --- alpha(c) -------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPoint:
    """Enclosure [a_lo, a_hi] of alpha(c).

    For a crossing line the verdict is zero at a_lo and positive at a_hi.
    ``line`` is "zero" or "positive" when the whole line carries one verdict;
    the enclosure is then the single line end where alpha(c) sits.
    """

    c: Fraction
    a_lo: Fraction
    a_hi: Fraction
    probes: int
    line: str | None = None

    @property
    def width(self) -> Fraction:
        return self.a_hi - self.a_lo

    @property
    def b_lo(self) -> Fraction:
        return self.c - self.a_hi

    @property
    def b_hi(self) -> Fraction:
        return self.c - self.a_lo


def line_range(cover: DoubleCover, c: Fraction) -> tuple[Fraction, Fraction]:
    """Range of a on the line a + b = c inside the parameter square."""
    lo = max(cover.a_m, c - cover.b_m)
    hi = min(cover.a_M, c - cover.b_M)
    if lo > hi:
        raise BoundaryError(f"the line a+b={c} misses the parameter square")
    return lo, hi


def _dyadic_between(lo: Fraction, hi: Fraction) -> Fraction:
    """A dyadic rational near the midpoint of (lo, hi)."""
    mid = (lo + hi) / 2
    k = max(1, ceil(log2(4 / (hi - lo))))
    den = 2**k
    x = Fraction(int(mid * den), den)
    if not lo < x < hi:
        x = Fraction(int(mid * den) + 1, den)
    if not lo < x < hi:  # pragma: no cover - k is chosen so this cannot happen
        x = mid
    return x


def alpha_of_c(cover: DoubleCover, c: Fraction, tol: Fraction) -> BoundaryPoint:
    c, tol = Fraction(c), Fraction(tol)
    if tol <= 0:
        raise BoundaryError("tol must be positive")
    lo, hi = line_range(cover, c)
    if not _chaotic(cover, hi, c - hi):
        return BoundaryPoint(c, hi, hi, 1, "zero")
    if _chaotic(cover, lo, c - lo):
        return BoundaryPoint(c, lo, lo, 2, "positive")
    probes = 2
    while hi - lo > tol:
        m = _dyadic_between(lo, hi)
        probes += 1
        if _chaotic(cover, m, c - m):
            hi = m
        else:
            lo = m
    return BoundaryPoint(c, lo, hi, probes)


def _alpha_job(args):
    cls, lam, c, tol = args
    return alpha_of_c(canonical_cover(cls, lam), c, tol)


def continuity_violations(points: list[BoundaryPoint]) -> list[int]:
    """Indices i where points i-1, i break alpha(c0) <= alpha(c) <= alpha(c0) + (c - c0)."""
    bad = []
    for i in range(1, len(points)):
        p, q = points[i - 1], points[i]
        if q.a_hi < p.a_lo or q.a_lo > p.a_hi + (q.c - p.c):
            bad.append(i)
    return bad


def trace(
    cover: DoubleCover, c_lo: Fraction, c_hi: Fraction, steps: int, tol: Fraction, jobs: int = 1
) -> list[BoundaryPoint]:
    c_lo, c_hi = Fraction(c_lo), Fraction(c_hi)
    if not c_lo < c_hi:
        raise BoundaryError("need c_lo < c_hi")
    if steps < 2:
        raise BoundaryError("need at least two steps")
    cs = [c_lo + (c_hi - c_lo) * i / (steps - 1) for i in range(steps)]
    if jobs > 1:
        args = [(cover.cls, cover.lam, c, Fraction(tol)) for c in cs]
        with ProcessPoolExecutor(jobs) as ex:
            pts = list(ex.map(_alpha_job, args))
    else:
        pts = [alpha_of_c(cover, c, tol) for c in cs]
    bad = continuity_violations(pts)
    if bad:
        raise OracleFailure(f"traced points break the continuity bound at rows {bad}")
    return pts


def admissible_range(cover: DoubleCover, tol: Fraction = Fraction(1, 1024)) -> tuple[Fraction, Fraction]:
    """(c_1, c_2): the lines a + b = c that cross the boundary of chaos.

    A line crosses when its large-hole end has zero entropy and its
    small-hole end positive entropy.  Outside (c_1, c_2) a whole line
    carries one verdict.  Both ends are dyadic bisection enclosures and the
    outer ends are returned.
    """
    c_min, c_max = cover.a_m + cover.b_M, cover.a_M + cover.b_m

    def crosses(c):
        lo, hi = line_range(cover, c)
        return not _chaotic(cover, lo, c - lo) and _chaotic(cover, hi, c - hi)

    def edge(pred, lo, hi):
        # pred(lo) true, pred(hi) false
        while hi - lo > tol:
            m = _dyadic_between(lo, hi)
            if pred(m):
                lo = m
            else:
                hi = m
        return lo, hi

    grid = [c_min + (c_max - c_min) * k / 64 for k in range(1, 64)]
    inside = [c for c in grid if crosses(c)]
    if not inside:
        raise BoundaryError("no line a + b = c crosses the boundary of chaos")
    c1 = edge(lambda c: not crosses(c), c_min, inside[0])[0] if not crosses(c_min) else c_min
    c2 = edge(crosses, inside[-1], c_max)[1] if not crosses(c_max) else c_max
    return c1, c2


def trace_to_csv(points: list[BoundaryPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["c", "a_lo", "a_hi", "b_lo", "b_hi", "verdict_checks"])
    for p in points:
        checks = p.line if p.line else f"zero@a_lo;positive@a_hi;probes={p.probes}"
        w.writerow([format_rational(x) for x in (p.c, p.a_lo, p.a_hi, p.b_lo, p.b_hi)] + [checks])
    return buf.getvalue()


# --- anharmonic points ------------------------------------------------------------


@dataclass(frozen=True)
class AnharmonicEnclosure:
    a_lo: Fraction
    a_hi: Fraction
    b: Fraction
    boxes: tuple[ParamBox, ...]

    @property
    def width(self) -> Fraction:
        return self.a_hi - self.a_lo

    @property
    def path(self) -> list[str]:
        return [bx.label for bx in self.boxes]


_CASCADE = {
    ClassLabel.C: [(ClassLabel.B, "00", "1"), (ClassLabel.C, "010", "1")],
    ClassLabel.B: [(ClassLabel.C, "010", "1"), (ClassLabel.B, "00", "1")],
}


def anharmonic_chain(cls: ClassLabel | str, depth: int, lam: int = 2) -> list[ParamBox]:
    """The first ``depth`` boxes of the alternating B/C cascade below the root."""
    cls = ClassLabel(cls)
    if cls not in _CASCADE:
        raise BoundaryError("anharmonic cascades exist only for classes B and C")
    box, out = root_box(cls, lam), []
    for i in range(depth):
        k, v, u = _CASCADE[cls][i % 2]
        box = _make_child(box, k, v, u, validate=False)
        out.append(box)
    return out


def anharmonic_point(cover: DoubleCover, b: Fraction, tol: Fraction, max_depth: int = 40) -> AnharmonicEnclosure:
    """Enclosure of the anharmonic parameter at height b by nested boxes.

    The cascade boxes alternate between classes B and C; their a-ranges are
    strictly nested and shrink to the threshold.  b has to lie in every
    box's b-range, otherwise the cascade does not reach that height.
    """
    b, tol = Fraction(b), Fraction(tol)
    if cover.cls not in _CASCADE:
        raise BoundaryError("anharmonic points exist only for classes B and C")
    if not (cover.b_M <= b <= cover.b_m):
        raise BoundaryError(f"b = {b} outside [{cover.b_M}, {cover.b_m}]")
    box, boxes = root_box(cover.cls, cover.lam), []
    for i in range(max_depth):
        k, v, u = _CASCADE[cover.cls][i % 2]
        box = _make_child(box, k, v, u, validate=False)
        r = box.rect
        if not (r.b_lo <= b <= r.b_hi):
            raise BoundaryError(
                f"b = {b} is outside the b-range [{format_rational(r.b_lo)}, {format_rational(r.b_hi)}] "
                f"of cascade box {box.full_label}; no anharmonic point at this height"
            )
        if boxes and not (boxes[-1].rect.a_lo <= r.a_lo and r.a_hi <= boxes[-1].rect.a_hi):
            raise OracleFailure("cascade a-ranges are not nested")
        boxes.append(box)
        if r.a_hi - r.a_lo <= tol:
            return AnharmonicEnclosure(r.a_lo, r.a_hi, b, tuple(boxes))
    raise BoundaryError(f"tolerance {tol} not reached within {max_depth} cascade levels")


def anharmonic_bisection(cover: DoubleCover, b: Fraction, tol: Fraction) -> tuple[Fraction, Fraction]:
    """Threshold in a at fixed b by exact-verdict bisection: zero at lo, positive at hi."""
    b, tol = Fraction(b), Fraction(tol)
    lo, hi = cover.a_m, cover.a_M
    if _chaotic(cover, lo, b) or not _chaotic(cover, hi, b):
        raise BoundaryError(f"no threshold in a at b = {b}")
    while hi - lo > tol:
        m = _dyadic_between(lo, hi)
        if _chaotic(cover, m, b):
            hi = m
        else:
            lo = m
    return lo, hi


# --- heteroclinic segments ----------------------------------------------------------


@dataclass(frozen=True)
class HeteroclinicSegment:
    """Segment of an A-box edge carrying one of the four heteroclinic kneading forms.

    Forms 1 (v^, uv^) and 2 (vuv^, uv^) lie on the edge b = a(uv^);
    forms 3 (vu^, u^) and 4 (vu^, uvu^) on the edge a = a(vu^).
    """

    box: str
    pq: Fraction | None
    form: int
    pinned: str  # "a" or "b"
    value: Fraction
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool
    kneading: tuple[Seq, Seq]
    samples: tuple[tuple[Fraction, Fraction], ...]

    def point(self, t: Fraction) -> tuple[Fraction, Fraction]:
        return (self.value, t) if self.pinned == "a" else (t, self.value)

    def contains(self, a: Fraction, b: Fraction) -> bool:
        fixed, free = (a, b) if self.pinned == "a" else (b, a)
        if fixed != self.value:
            return False
        return (self.lo < free or (self.lo_closed and free == self.lo)) and (
            free < self.hi or (self.hi_closed and free == self.hi)
        )

    def to_dict(self) -> dict:
        return {
            "box": self.box,
            "pq": None if self.pq is None else format_rational(self.pq),
            "form": self.form,
            "pinned": self.pinned,
            "value": format_rational(self.value),
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
            "kneading": [str(self.kneading[0]), str(self.kneading[1])],
        }


def _pullback(cover: DoubleCover, word: str, y: Fraction) -> Fraction:
    for s in reversed(word):
        y = cover.inverse(int(s), y)
    return y


def _forms(v: str, u: str) -> dict[int, tuple[Seq, Seq]]:
    P = Seq.periodic
    return {
        1: (P(v), P(v, u)),
        2: (P(v, v + u), P(v, u)),
        3: (P(u, v), P(u)),
        4: (P(u, v), P(u, u + v)),
    }


def _box_pq(box: ParamBox) -> Fraction | None:
    """p/q of an A-box born in a class-A parent (root A counts as 0/1)."""
    if box.cls is not ClassLabel.A:
        return None
    if box.parent is None:
        return Fraction(0)
    if box.parent.cls is not ClassLabel.A:
        return None
    w = box.rel_minus
    return Fraction(w.count("1"), len(w))


def _resolve_box(chain: list[ParamBox], pq: Fraction | None, lam: int = 2) -> ParamBox:
    if pq is None:
        if not chain:
            return root_box(ClassLabel.A, lam)
        return chain[-1]
    parent = chain[-1] if chain else root_box(ClassLabel.A, lam)
    if parent.cls is not ClassLabel.A:
        raise BoundaryError("p/q children exist only below class-A boxes")
    pq = Fraction(pq)
    if not 0 < pq < 1:
        raise BoundaryError("p/q must lie in (0, 1)")
    rm, rp = sturmian_bounds(pq.numerator, pq.denominator)
    return _make_child(parent, ClassLabel.A, rm, rp, validate=True)


def _kneading_matches(box: ParamBox, a: Fraction, b: Fraction, target: tuple[Seq, Seq], n: int) -> bool:
    got = kneading_invariant(PlateauConfig(box.cover, a, b), n)
    return got == (target[0].prefix(n), target[1].prefix(n))


def heteroclinic_segment(chain: list[ParamBox], pq: Fraction | None, form: int, lam: int = 2) -> HeteroclinicSegment:
    """Parameter segment realizing heteroclinic kneading form 1..4 of an A-box.

    The box is the p/q child of ``chain[-1]`` (the class-A root when the
    chain is empty), or ``chain[-1]`` itself when ``pq`` is None.  Endpoints
    are exact; each end is closed exactly when its kneading matches.  Five
    points (the ends, or points just inside open ends, and three interior
    points) are verified; any failure refuses the segment.
    """
    if form not in (1, 2, 3, 4):
        raise BoundaryError("form must be 1, 2, 3 or 4")
    box = _resolve_box(list(chain), pq, lam)
    if box.cls is not ClassLabel.A:
        raise BoundaryError(f"{box.full_label} is not a class-A box")
    v, u, cv, r = box.omega_minus, box.omega_plus, box.cover, box.rect
    c = Fraction(1, 2)
    target = _forms(v, u)[form]
    if form in (1, 2):
        pinned, value = "b", address(cv, Seq.periodic(v, u))
        split = _pullback(cv, v, c)
        lo, hi = (r.a_lo, split) if form == 1 else (split, address(cv, Seq.periodic(v, v + u)))
    else:
        pinned, value = "a", address(cv, Seq.periodic(u, v))
        split = _pullback(cv, u, c)
        lo, hi = (address(cv, Seq.periodic(u, u + v)), split) if form == 4 else (split, r.b_hi)
    if lo > hi:
        raise BoundaryError(f"form {form} is not realized on {box.full_label}")
    n = 4 * (len(v) + len(u)) + 16

    def at(t):
        return (value, t) if pinned == "a" else (t, value)

    lo_ok = _kneading_matches(box, *at(lo), target, n)
    hi_ok = _kneading_matches(box, *at(hi), target, n)
    if lo == hi:
        if not lo_ok:
            raise BoundaryError(f"form {form} kneading not realized at {box.full_label}; refusing")
        samples = [at(lo)] * 5
    else:
        eps = (hi - lo) / 2**20
        ends = [lo if lo_ok else lo + eps, hi if hi_ok else hi - eps]
        inner = [lo + (hi - lo) * k / 4 for k in (1, 2, 3)]
        samples = [at(ends[0])] + [at(t) for t in inner] + [at(ends[1])]
        for p in samples:
            if not _kneading_matches(box, *p, target, n):
                raise BoundaryError(
                    f"form {form} kneading fails at {tuple(map(format_rational, p))} in {box.full_label}; refusing"
                )
    return HeteroclinicSegment(
        box.full_label, _box_pq(box), form, pinned, value, lo, hi, lo_ok, hi_ok, target, tuple(samples)
    )


# --- classification -----------------------------------------------------------------


@dataclass
class BoundaryClass:
    kind: str  # HeteroclinicSegment | AnharmonicPoint | InfiniteRenorm | IrrationalRotation | Undetermined
    chain: list[str]
    depth: int
    pq: Fraction | None = None
    form: int | None = None
    cascade_class: ClassLabel | None = None
    rotation: RotationEnclosure | None = None
    segment: HeteroclinicSegment | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"class": self.kind, "path": self.chain, "evidence_depth": self.depth}
        if self.pq is not None:
            d["pq"] = format_rational(self.pq)
        if self.form is not None:
            d["form"] = self.form
        if self.cascade_class is not None:
            d["cascade_class"] = self.cascade_class.value
        if self.rotation is not None:
            d["rotation"] = [format_rational(self.rotation.lo), format_rational(self.rotation.hi)]
        if self.segment is not None:
            d["segment"] = self.segment.to_dict()
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _segment_hit(chain: list[ParamBox], box: ParamBox, a: Fraction, b: Fraction) -> HeteroclinicSegment | None:
    r = box.rect
    if not ((b == r.b_lo and r.a_lo <= a <= r.a_hi) or (a == r.a_hi and r.b_lo <= b <= r.b_hi)):
        return None
    for form in (1, 2, 3, 4):
        try:
            seg = heteroclinic_segment(chain, None, form, box.cover.lam)
        except BoundaryError:
            continue
        if seg.contains(a, b):
            return seg
    return None


def _bracket(cover: DoubleCover, a: Fraction, b: Fraction, radius: Fraction) -> None:
    zero_a, zero_b = max(a - radius, cover.a_m), min(b + radius, cover.b_m)
    pos_a, pos_b = min(a + radius, cover.a_M), max(b - radius, cover.b_M)
    if _chaotic(cover, zero_a, zero_b) or not _chaotic(cover, pos_a, pos_b):
        raise BoundaryError(f"({a}, {b}) is not within {radius} of the boundary of chaos")


def classify_point(
    config: PlateauConfig,
    max_depth: int = 6,
    q_max: int = 5,
    n_max: int = 5,
    radius: Fraction | None = Fraction(1, 2**20),
) -> BoundaryClass:
    """Place a near-boundary parameter in the case list of the main theorem."""
    cover, a, b = config.cover, config.a, config.b
    if radius is not None:
        _bracket(cover, a, b, Fraction(radius))
    box = root_box(cover.cls, cover.lam)
    chain: list[ParamBox] = []
    labels = lambda: [bx.label for bx in chain]  # noqa: E731
    for depth in range(max_depth + 1):
        if box.cls is ClassLabel.A:
            seg = _segment_hit(chain, box, a, b)
            if seg is not None:
                return BoundaryClass("HeteroclinicSegment", labels(), depth, seg.pq, seg.form, segment=seg)
        if depth == max_depth:
            break
        kids, trunc = child_boxes(box, q_max, n_max, validate=False)
        pool = kids[:]
        if box.cls is ClassLabel.C:
            pool.insert(0, _make_child(box, ClassLabel.A, "00", "11", validate=False))
        inside = [k for k in pool if k.rect.contains(a, b)]
        if not inside:
            return _leaf(config, chain, box, kids, trunc, depth, q_max)
        inside.sort(key=lambda k: k.cls is not ClassLabel.A)
        box = inside[0]
        chain.append(box)
    start = anharmonic_tail(labels())
    if start is not None:
        return _anharmonic(chain, start, max_depth)
    return BoundaryClass("InfiniteRenorm", labels(), max_depth)


def _anharmonic(chain: list[ParamBox], start: int, depth: int) -> BoundaryClass:
    labels = [bx.label for bx in chain]
    parent = chain[start - 1].cls if start > 0 else chain[0].parent.cls
    return BoundaryClass("AnharmonicPoint", labels, depth, cascade_class=parent, extra={"tail_start": start})


def _leaf(config, chain, box, kids, trunc, depth, q_max) -> BoundaryClass:
    a, b = config.a, config.b
    labels = [bx.label for bx in chain]
    start = anharmonic_tail(labels)
    if start is not None:
        return _anharmonic(chain, start, depth)
    if box.parent is None and box.cls is ClassLabel.A and on_curve_R(config):
        rot = rotation_data(config.cover, a, b)
        if rot.exact is None:
            return BoundaryClass("IrrationalRotation", labels, depth, rotation=rot)
        if rot.exact.denominator > q_max:
            raise TruncationLimit(f"rotation number {rot.exact} needs q_max >= {rot.exact.denominator}")
    v = side_verdict(a, b, box, kids)
    if v is None and (box.cls is ClassLabel.A or (trunc is not None and trunc.rect.contains(a, b))):
        raise TruncationLimit(f"({a}, {b}) lies beyond the truncated families of {box.full_label}")
    return BoundaryClass("Undetermined", labels, depth, extra={"side": None if v is None else v.value})
