"""Renormalization boxes in the (a, b) hole-parameter plane.

A box X(w-, w+) is the parameter rectangle on which the map induced by
(F^{|w-|}, F^{|w+|}) on [a_g, b_g] is a complete plateau family of class X.
Words are stored composed down to the base cover, so every corner is the
exact address of an eventually periodic sequence.  With v = w- and u = w+
the corners are

    A  [a(v^), a(v u^)]      x [a(u v^), a(u^)]
    B  [a(v^), a(v u v^)]    x [a(u u v^), a(u v^)]
    C  [a((vu)^), a(v (vu)^)] x [a(u (uv)^), a((uv)^)]

and class D is the mirror image of class B.  In every case
[a_g, b_g] = [a_lo, b_hi].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator

from .covers import (
    CoverError,
    DoubleCover,
    PlateauConfig,
    Side,
    address,
    canonical_cover,
    evaluate,
)
from .symbolic import ClassLabel, Seq, sturmian_bounds, substitute

__all__ = [
    "Rect",
    "ParamBox",
    "EdgeAnchor",
    "OracleFailure",
    "TruncatedRegion",
    "Verdict",
    "Descent",
    "root_box",
    "box_corners",
    "induced_class",
    "validate_box",
    "induced_map_ok",
    "child_boxes",
    "edge_anchors",
    "descend",
    "box_tree",
    "rotation_data",
    "RotationEnclosure",
    "boxes_to_records",
    "side_verdict",
    "anharmonic_tail",
    "on_curve_R",
]


class OracleFailure(RuntimeError):
    """A constructed box failed the induced-map return check."""


@dataclass(frozen=True)
class Rect:
    a_lo: Fraction
    a_hi: Fraction
    b_lo: Fraction
    b_hi: Fraction

    def contains(self, a: Fraction, b: Fraction, strict: bool = False) -> bool:
        if strict:
            return self.a_lo < a < self.a_hi and self.b_lo < b < self.b_hi
        return self.a_lo <= a <= self.a_hi and self.b_lo <= b <= self.b_hi

    def contains_rect(self, other: "Rect") -> bool:
        return (
            self.a_lo <= other.a_lo
            and other.a_hi <= self.a_hi
            and self.b_lo <= other.b_lo
            and other.b_hi <= self.b_hi
        )

    def intersection(self, other: "Rect") -> "Rect | None":
        a_lo, a_hi = max(self.a_lo, other.a_lo), min(self.a_hi, other.a_hi)
        b_lo, b_hi = max(self.b_lo, other.b_lo), min(self.b_hi, other.b_hi)
        if a_lo > a_hi or b_lo > b_hi:
            return None
        return Rect(a_lo, a_hi, b_lo, b_hi)

    def interiors_meet(self, other: "Rect") -> bool:
        return (
            max(self.a_lo, other.a_lo) < min(self.a_hi, other.a_hi)
            and max(self.b_lo, other.b_lo) < min(self.b_hi, other.b_hi)
        )

    @property
    def center(self) -> tuple[Fraction, Fraction]:
        return (self.a_lo + self.a_hi) / 2, (self.b_lo + self.b_hi) / 2

    def mirrored(self, total: Fraction) -> "Rect":
        """Image under (a, b) -> (total - b, total - a)."""
        return Rect(total - self.b_hi, total - self.b_lo, total - self.a_hi, total - self.a_lo)

    def __iter__(self) -> Iterator[Fraction]:
        return iter((self.a_lo, self.a_hi, self.b_lo, self.b_hi))


@dataclass(frozen=True)
class ParamBox:
    """Renormalization box X(w-, w+) with words composed down to the base cover.

    ``rel_minus``/``rel_plus`` are the words relative to the parent box, as
    they appear in the parent's decomposition.
    """

    cls: ClassLabel
    omega_minus: str
    omega_plus: str
    rect: Rect
    cover: DoubleCover = field(compare=False, repr=False)
    parent: "ParamBox | None" = field(default=None, compare=False, repr=False)
    depth: int = 0
    rel_minus: str = "0"
    rel_plus: str = "1"

    @property
    def label(self) -> str:
        return f"{self.cls.value}({self.rel_minus},{self.rel_plus})"

    @property
    def full_label(self) -> str:
        return f"{self.cls.value}({self.omega_minus},{self.omega_plus})"

    @property
    def a_g(self) -> Fraction:
        return self.rect.a_lo

    @property
    def b_g(self) -> Fraction:
        return self.rect.b_hi

    def chain(self) -> list["ParamBox"]:
        out = []
        box: ParamBox | None = self
        while box is not None and box.depth > 0:
            out.append(box)
            box = box.parent
        return out[::-1]

    def path(self) -> list[str]:
        return [b.label for b in self.chain()]


def _swap(w: str) -> str:
    return w.translate(str.maketrans("01", "10"))


def _parity(cover: DoubleCover, w: str) -> int:
    p0, p1 = cover.cls.parity
    out = 1
    for ch in w:
        out *= p0 if ch == "0" else p1
    return out


def induced_class(cover: DoubleCover, omega_minus: str, omega_plus: str) -> ClassLabel:
    """Class of the induced map, read from the orientation of the two composite branches."""
    return ClassLabel.from_parities(_parity(cover, omega_minus), _parity(cover, omega_plus))


def _mirror_cover(cover: DoubleCover) -> DoubleCover:
    return canonical_cover(cover.cls.mirror, cover.lam)


def box_corners(cover: DoubleCover, cls: ClassLabel, v: str, u: str) -> Rect:
    """Exact rectangle of the box of class ``cls`` with composed words (v, u)."""
    cls = ClassLabel(cls)
    al = lambda pre, per: address(cover, Seq.periodic(per, pre))  # noqa: E731
    if cls is ClassLabel.A:
        return Rect(al("", v), al(v, u), al(u, v), al("", u))
    if cls is ClassLabel.B:
        return Rect(al("", v), al(v + u, v), al(u + u, v), al(u, v))
    if cls is ClassLabel.C:
        return Rect(al("", v + u), al(v, v + u), al(u, u + v), al("", u + v))
    # class D: reflect, read the class-B corners, reflect back
    total = cover.a_m + cover.b_m
    return box_corners(_mirror_cover(cover), ClassLabel.B, _swap(u), _swap(v)).mirrored(total)


def root_box(cls: ClassLabel | str, lam: int = 2) -> ParamBox:
    cover = canonical_cover(ClassLabel(cls), lam)
    rect = Rect(cover.a_m, cover.a_M, cover.b_M, cover.b_m)
    return ParamBox(cover.cls, "0", "1", rect, cover)


# --- induced-map oracle -------------------------------------------------------


def _image(config: PlateauConfig, lo: Fraction, hi: Fraction, sym: str, first: bool):
    """Image of [lo, hi] under F on the side named by ``sym`` (None if it straddles c)."""
    c = config.c
    if sym == "0":
        if hi > c:
            return None
        ends = (evaluate(config, lo, Side.MINUS), evaluate(config, hi, Side.MINUS))
    else:
        if lo < c or (lo == c and not first):
            return None
        ends = (evaluate(config, lo, Side.PLUS), evaluate(config, hi, Side.PLUS))
    return min(ends), max(ends)


def induced_map_ok(box: ParamBox, a: Fraction, b: Fraction) -> bool:
    """Return check for the induced map of ``box`` at the parameter (a, b).

    The branches (a_g, c) and (c, b_g] are pushed forward along w- and w+:
    intermediate images must avoid the open interval (a_g, b_g) on the side
    named by the word, and the final image must lie inside [a_g, b_g].
    """
    cover = box.cover
    try:
        config = PlateauConfig(cover, a, b)
    except CoverError:
        return False
    c, ag, bg = config.c, box.a_g, box.b_g
    if not (ag <= a <= c <= b <= bg):
        return False
    for word, lo, hi in ((box.omega_minus, ag, c), (box.omega_plus, c, bg)):
        for k, sym in enumerate(word):
            if k > 0:
                if sym == "0" and not hi <= ag:
                    return False
                if sym == "1" and not lo >= bg:
                    return False
            img = _image(config, lo, hi, sym, first=(k == 0))
            if img is None:
                return False
            lo, hi = img
        if not (ag <= lo and hi <= bg):
            return False
    return True


def _samples(rect: Rect) -> list[tuple[Fraction, Fraction]]:
    """Center and four near-corner points (1/64 of the way in)."""
    da = (rect.a_hi - rect.a_lo) / 64
    db = (rect.b_hi - rect.b_lo) / 64
    pts = [rect.center]
    for a in (rect.a_lo + da, rect.a_hi - da):
        for b in (rect.b_lo + db, rect.b_hi - db):
            pts.append((a, b))
    return pts


def validate_box(box: ParamBox) -> None:
    if box.depth == 0:
        return
    if box.cls is not induced_class(box.cover, box.omega_minus, box.omega_plus):
        raise OracleFailure(f"{box.full_label}: word orientations do not give class {box.cls.value}")
    r = box.rect
    if not (r.a_lo < r.a_hi and r.b_lo < r.b_hi):
        raise OracleFailure(f"{box.full_label}: degenerate rectangle")
    for a, b in _samples(r):
        if not induced_map_ok(box, a, b):
            raise OracleFailure(f"{box.full_label}: induced map fails at a={a}, b={b}")


# --- child decompositions -----------------------------------------------------


@dataclass(frozen=True)
class TruncatedRegion:
    """Hull of the omitted boxes C(010^{n+1},10^n), n > n_max, of a class-B (or mirrored) parent."""

    parent_label: str
    n_max: int
    rect: Rect


def _relative_children(cls: ClassLabel, q_max: int, n_max: int) -> list[tuple[ClassLabel, str, str]]:
    L = ClassLabel
    if cls is L.C:
        return [(L.A, "01", "11"), (L.D, "0", "11"), (L.B, "00", "1"), (L.A, "00", "10")]
    if cls is L.B:
        out = [(L.A, "0", "11"), (L.D, "01", "11")]
        out += [(L.C, "01" + "0" * (n + 1), "1" + "0" * n) for n in range(n_max + 1)]
        return out
    if cls is L.D:
        return [(k.mirror, _swap(u), _swap(v)) for k, v, u in _relative_children(L.B, q_max, n_max)]
    out = []
    for q in range(2, q_max + 1):
        for p in range(1, q):
            if gcd(p, q) == 1:
                rm, rp = sturmian_bounds(p, q)
                out.append((L.A, rm, rp))
    return out


def _make_child(parent: ParamBox, cls: ClassLabel, rv: str, ru: str, validate: bool) -> ParamBox:
    v = substitute(rv, parent.omega_minus, parent.omega_plus)
    u = substitute(ru, parent.omega_minus, parent.omega_plus)
    rect = box_corners(parent.cover, cls, v, u)
    box = ParamBox(cls, v, u, rect, parent.cover, parent, parent.depth + 1, rv, ru)
    if validate:
        validate_box(box)
    return box


def child_boxes(
    box: ParamBox, q_max: int = 5, n_max: int = 5, validate: bool = True
) -> tuple[list[ParamBox], TruncatedRegion | None]:
    """Depth-one decomposition of ``box``; the second item records class-B/D truncation."""
    kids = [_make_child(box, k, v, u, validate) for k, v, u in _relative_children(box.cls, q_max, n_max)]
    trunc = None
    if box.cls in (ClassLabel.B, ClassLabel.D):
        trunc = TruncatedRegion(box.label, n_max, _truncation_hull(box, n_max))
    return kids, trunc


def _truncation_hull(box: ParamBox, n_max: int) -> Rect:
    """Bounding rectangle of the omitted family members and their limit point."""
    k, rv, ru = _relative_children(box.cls, 0, n_max + 1)[-1]
    first = _make_child(box, k, rv, ru, validate=False).rect
    if box.cls is ClassLabel.B:
        lim_v, lim_u = Seq.periodic("0", "01"), Seq.periodic("0", "1")
    else:
        lim_v, lim_u = Seq.periodic("1", "0"), Seq.periodic("1", "10")
    sub = lambda s: Seq.periodic(  # noqa: E731
        substitute(s.period, box.omega_minus, box.omega_plus),
        substitute(s.pre, box.omega_minus, box.omega_plus),
    )
    la, lb = address(box.cover, sub(lim_v)), address(box.cover, sub(lim_u))
    return Rect(min(first.a_lo, la), max(first.a_hi, la), min(first.b_lo, lb), max(first.b_hi, lb))


# --- edge anchors -------------------------------------------------------------


@dataclass(frozen=True)
class EdgeAnchor:
    """A point where the boundary of chaos meets a box edge."""

    point: tuple[Fraction, Fraction]
    label: str
    kneading: tuple[Seq, Seq]
    edge: str  # "a" (a = a_hi), "b" (b = b_lo) or "corner"


def _seq(cover_box: ParamBox, pre: str, per: str) -> Seq:
    return Seq.periodic(per, pre)


def _own_anchors(box: ParamBox) -> tuple[EdgeAnchor, EdgeAnchor]:
    """(b-edge anchor, a-edge anchor) of the box's own induced family."""
    v, u, cls, cv = box.omega_minus, box.omega_plus, box.cls, box.cover
    S = Seq.periodic
    if cls is ClassLabel.A:
        kb = (S(v, v + u), S(v, u))
        ka = (S(u, v), S(u, u + v))
    elif cls is ClassLabel.B:
        kb = (S(v, v + u + u), S(v, u + u))
        ka = (S(v, v + u), S(v, u))
    elif cls is ClassLabel.C:
        kb = (S(u + v, v + u + u), S(u + v, u))
        ka = (S(v + u, v), S(v + u, u + v + v))
    else:
        kb = (S(u, v), S(u, u + v))
        ka = (S(u, v + v), S(u, u + v + v))
    r = box.rect
    pb = (address(cv, kb[0]), r.b_lo)
    pa = (r.a_hi, address(cv, ka[1]))
    if address(cv, kb[1]) != r.b_lo or address(cv, ka[0]) != r.a_hi:
        raise OracleFailure(f"{box.full_label}: anchor kneading does not sit on the box edges")
    eb = "corner" if cls is ClassLabel.D else "b"
    ea = "corner" if cls is ClassLabel.B else "a"
    return EdgeAnchor(pb, "Pb", kb, eb), EdgeAnchor(pa, "Pa", ka, ea)


def edge_anchors(box: ParamBox, q_max: int = 5, n_max: int = 5) -> list[EdgeAnchor]:
    """Boundary-on-boundary points of ``box``.

    Class C: P1 (a-edge), P2 and P3 (where the boundary passes between the
    depth-one boxes) and P4 (b-edge).  Class B: P1 (b-edge), P2 (between
    A(0,11) and D(01,11)) and the corner limit of the C-family; class D is
    the mirror image.  Class A: the b-edge and a-edge points.
    """
    pb, pa = _own_anchors(box)
    cls = box.cls
    if cls is ClassLabel.A:
        return [pb, pa]
    kids = {k.label: k for k in child_boxes(box, q_max, n_max, validate=False)[0]}
    relabel = lambda a, name: EdgeAnchor(a.point, name, a.kneading, a.edge)  # noqa: E731
    if cls is ClassLabel.C:
        p2 = _own_anchors(kids["B(00,1)"])[1]
        p3 = _own_anchors(kids["D(0,11)"])[0]
        return [relabel(pa, "P1"), relabel(p2, "P2"), relabel(p3, "P3"), relabel(pb, "P4")]
    if cls is ClassLabel.B:
        p2 = _own_anchors(kids["A(0,11)"])[1]
        return [relabel(pb, "P1"), relabel(p2, "P2"), relabel(pa, "Plim")]
    p2 = _own_anchors(kids["A(00,1)"])[0]
    return [relabel(pa, "P1"), relabel(p2, "P2"), relabel(pb, "Plim")]


# --- geometric side verdicts --------------------------------------------------


class Verdict(enum.Enum):
    CHAOTIC = "Chaotic"
    NON_CHAOTIC = "NonChaotic"
    UNDETERMINED = "Undetermined"
    TRUNCATION_LIMIT = "TruncationLimit"


def _side_by_anchors(a: Fraction, b: Fraction, box: ParamBox) -> Verdict | None:
    """Verdict implied by one box's anchors, using that zero entropy is
    inherited by larger holes and positive entropy by smaller ones.
    """
    pb, pa = _own_anchors(box)
    (ab, bb), (aa, ba) = pb.point, pa.point
    if (a <= ab and b >= bb) or (a <= aa and b >= ba):
        return Verdict.NON_CHAOTIC
    if (a > ab and b <= bb) or (a >= aa and b < ba):
        return Verdict.CHAOTIC
    return None


def side_verdict(a: Fraction, b: Fraction, box: ParamBox, kids: Iterable[ParamBox]) -> Verdict | None:
    """Geometric verdict for a point of ``box`` lying outside all of ``kids``.

    Returns None when neither the box's anchors nor any child's anchors
    decide the point.
    """
    votes = set()
    for k in (box, *kids):
        v = _side_by_anchors(a, b, k)
        if v is not None:
            votes.add(v)
    if len(votes) > 1:
        raise OracleFailure(f"contradictory side verdicts at ({a}, {b}) in {box.full_label}")
    return votes.pop() if votes else None


# --- descent ------------------------------------------------------------------


@dataclass
class Descent:
    path: list[str]
    boxes: list[ParamBox]
    verdict: Verdict
    depth: int  # level at which the verdict was issued
    tail: str | None = None  # "anharmonic" when the path ends in the B/C or D/C alternation
    tail_start: int | None = None

    @property
    def last(self) -> ParamBox | None:
        return self.boxes[-1] if self.boxes else None


_ANHARMONIC_PAIRS = ({"B(00,1)", "C(010,1)"}, {"D(0,11)", "C(0,101)"})


def anharmonic_tail(path: list[str], min_len: int = 4) -> int | None:
    """Start of the first run of at least ``min_len`` alternating
    B(00,1)/C(010,1) or D(0,11)/C(0,101) labels, or None.

    A rational parameter near an anharmonic point follows the cascade for a
    while and then leaves it, so the run need not reach the end of the path.
    """
    best = None
    for pair in _ANHARMONIC_PAIRS:
        i = 0
        while i < len(path):
            if path[i] not in pair:
                i += 1
                continue
            j = i + 1
            while j < len(path) and path[j] in pair and path[j] != path[j - 1]:
                j += 1
            if j - i >= min_len and (best is None or i < best):
                best = i
            i = j
    return best


def _overlap_child(box: ParamBox, kids: list[ParamBox]) -> ParamBox | None:
    """The A(00,11) box where D(0,11) and B(00,1) of a class-C box intersect."""
    if box.cls is not ClassLabel.C:
        return None
    return _make_child(box, ClassLabel.A, "00", "11", validate=False)


def _pick(kids: list[ParamBox], a: Fraction, b: Fraction) -> ParamBox | None:
    inside = [k for k in kids if k.rect.contains(a, b)]
    if not inside:
        return None
    inside.sort(key=lambda k: k.cls is not ClassLabel.A)
    return inside[0]


def descend(
    config: PlateauConfig | tuple,
    max_depth: int = 6,
    q_max: int = 5,
    n_max: int = 5,
    lam: int = 2,
) -> Descent:
    """Walk the box tree towards (a, b) and report the path and a verdict.

    ``config`` is a PlateauConfig or a tuple (class, a, b).
    """
    if isinstance(config, PlateauConfig):
        cls, a, b = config.cls, config.a, config.b
        lam = config.cover.lam
    else:
        cls, a, b = ClassLabel(config[0]), Fraction(config[1]), Fraction(config[2])
    box = root_box(cls, lam)
    if not box.rect.contains(a, b):
        raise CoverError(f"({a}, {b}) is outside the parameter square")
    boxes: list[ParamBox] = []
    for depth in range(max_depth):
        kids, trunc = child_boxes(box, q_max, n_max, validate=False)
        pool = kids[:]
        ov = _overlap_child(box, kids)
        if ov is not None:
            pool.insert(0, ov)
        nxt = _pick(pool, a, b)
        if nxt is None:
            v = side_verdict(a, b, box, kids)
            if v is None:
                v = Verdict.TRUNCATION_LIMIT if (box.cls is ClassLabel.A or trunc is not None) else Verdict.UNDETERMINED
            return _finish(boxes, v, depth + 1)
        boxes.append(nxt)
        box = nxt
    return _finish(boxes, Verdict.UNDETERMINED, max_depth)


def _finish(boxes: list[ParamBox], verdict: Verdict, depth: int) -> Descent:
    path = [bx.label for bx in boxes]
    start = anharmonic_tail(path)
    return Descent(path, boxes, verdict, depth, "anharmonic" if start is not None else None, start)


# --- trees and export ---------------------------------------------------------


def box_tree(
    cls: ClassLabel | str, depth: int, q_max: int = 5, n_max: int = 5, lam: int = 2, validate: bool = True
) -> dict[int, list[ParamBox]]:
    """All boxes down to ``depth`` (level 0 is the root square)."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    levels = {0: [root_box(cls, lam)]}
    for d in range(1, depth + 1):
        out = []
        for parent in levels[d - 1]:
            out.extend(child_boxes(parent, q_max, n_max, validate)[0])
        levels[d] = sorted(out, key=lambda bx: (bx.omega_minus, bx.omega_plus))
    return levels


def boxes_to_records(levels: dict[int, list[ParamBox]]) -> list[dict]:
    """One record per box, ordered by depth then w-; rationals as p/q strings."""
    from .covers import format_rational

    recs = []
    for d in sorted(levels):
        for bx in sorted(levels[d], key=lambda x: (x.omega_minus, x.omega_plus)):
            recs.append(
                {
                    "depth": d,
                    "class": bx.cls.value,
                    "label": bx.label,
                    "omega_minus": bx.omega_minus,
                    "omega_plus": bx.omega_plus,
                    "parent": None if bx.parent is None else bx.parent.full_label,
                    "a_lo": format_rational(bx.rect.a_lo),
                    "a_hi": format_rational(bx.rect.a_hi),
                    "b_lo": format_rational(bx.rect.b_lo),
                    "b_hi": format_rational(bx.rect.b_hi),
                }
            )
    return recs


# --- the class-A circle-map curve ---------------------------------------------


@dataclass(frozen=True)
class RotationEnclosure:
    lo: Fraction
    hi: Fraction
    exact: Fraction | None
    n: int


def on_curve_R(config: PlateauConfig) -> bool:
    """F^2(a) = F^2(b) with F(b) <= c <= F(a)."""
    a, b, c = config.a, config.b, config.c
    if not (a < c < b):
        return False
    fa, fb = evaluate(config, a, Side.MINUS), evaluate(config, b, Side.PLUS)
    if not (fb <= c <= fa):
        return False
    return evaluate(config, fa, Side.MINUS) == evaluate(config, fb, Side.MINUS)


def rotation_data(cover: DoubleCover, a: Fraction, b: Fraction, n: int = 256) -> RotationEnclosure:
    """Rotation number of the circle map F on [F(b), F(a)] with its ends identified.

    The lift adds one turn on (c, F(a)); k = floor((G^n(x) - x) / L) gives
    k/n <= rho <= (k+1)/n.  A closed orbit detected on the way pins rho
    exactly.
    """
    if cover.cls is not ClassLabel.A:
        raise CoverError("rotation data is defined for class A")
    config = PlateauConfig(cover, Fraction(a), Fraction(b))
    if not on_curve_R(config):
        raise CoverError(f"({a}, {b}) is not on the curve F^2(a) = F^2(b), F(b) <= c <= F(a)")
    c = config.c
    lo_end, hi_end = config.plateau(config.b), config.plateau(config.a)
    L = hi_end - lo_end

    def lift(y: Fraction) -> Fraction:
        k, r = divmod(y - lo_end, L)
        x = lo_end + r
        if x == c:
            img = config.left_value
        elif x < c:
            img = config.plateau(x)
        else:
            img = config.plateau(x) + L
        return img + k * L

    x0 = hi_end  # F(a): its orbit carries the plateau and closes up for rational data
    y = x0
    seen: dict[Fraction, tuple[int, Fraction]] = {}
    for i in range(1, n + 1):
        y = lift(y)
        k, r = divmod(y - lo_end, L)
        if r in seen:
            j, kj = seen[r]
            rho = Fraction(int(k - kj), i - j)
            return RotationEnclosure(rho, rho, rho, i)
        seen[r] = (i, k)
    turns = (y - x0) // L
    return RotationEnclosure(Fraction(int(turns), n), Fraction(int(turns) + 1, n), None, n)
