"""Piecewise-linear expanding double covers, plateau maps and open maps.

All coordinates are :class:`fractions.Fraction`.  A canonical cover lives on
[0, 1] with branches of slope +-lam and integer intercepts, so the grid
(1/D)Z for any D that is a multiple of every input denominator is mapped
into itself.  That makes orbits of rational points eventually periodic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .symbolic import ClassLabel, KneadingInvariant, Seq, SymbolError

__all__ = [
    "Side",
    "DoubleCover",
    "PlateauConfig",
    "CoverError",
    "canonical_cover",
    "evaluate",
    "itinerary",
    "orbit_addresses",
    "kneading_invariant",
    "address",
    "right_fixed_point",
    "parse_rational",
    "format_rational",
]

Rat = Fraction


class CoverError(ValueError):
    """Point outside the domain, or a construction the cover does not admit."""


class Side(enum.Enum):
    MINUS = "-"
    PLUS = "+"

    def flip(self) -> "Side":
        return Side.PLUS if self is Side.MINUS else Side.MINUS


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Exact rational from ``p/q``, an integer or a terminating decimal string."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class DoubleCover:
    """Two affine branches f_i(x) = slope_i * x + icpt_i.

    The left branch maps [a_m, a_M] and the right branch [b_M, b_m] onto
    [a_m, b_m].  Only integer intercepts and |slope| = lam are constructed.
    """

    cls: ClassLabel
    lam: int
    a_m: Fraction
    a_M: Fraction
    b_M: Fraction
    b_m: Fraction
    slope0: int
    icpt0: int
    slope1: int
    icpt1: int

    def __post_init__(self) -> None:
        if not (self.a_m < self.a_M <= self.b_M < self.b_m):
            raise CoverError("need a_m < a_M <= b_M < b_m")

    def branch(self, i: int, x: Fraction) -> Fraction:
        if i == 0:
            return self.slope0 * x + self.icpt0
        return self.slope1 * x + self.icpt1

    def inverse(self, i: int, y: Fraction) -> Fraction:
        if i == 0:
            return (y - self.icpt0) / self.slope0
        return (y - self.icpt1) / self.slope1

    def slope(self, i: int) -> int:
        return self.slope0 if i == 0 else self.slope1

    @property
    def denominator(self) -> int:
        """Smallest grid denominator carrying the cover's breakpoints."""
        return lcm(*(v.denominator for v in (self.a_m, self.a_M, self.b_M, self.b_m)))

    def __call__(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        if self.a_m <= x <= self.a_M:
            return self.branch(0, x)
        if self.b_M <= x <= self.b_m:
            return self.branch(1, x)
        raise CoverError(f"{x} is not in the domain of the cover")


def canonical_cover(cls: ClassLabel | str, lam: int = 2) -> DoubleCover:
    """Affine cover of class ``cls`` on [0, 1] with |slope| = lam.

    For lam = 2 the branch domains meet at 1/2; for lam > 2 they are
    [0, 1/lam] and [1 - 1/lam, 1].
    """
    cls = ClassLabel(cls) if not isinstance(cls, ClassLabel) else cls
    if not isinstance(lam, int) or lam < 2:
        raise CoverError(f"slope magnitude must be an integer >= 2, got {lam!r}")
    left = {1: (lam, 0), -1: (-lam, 1)}
    right = {1: (lam, 1 - lam), -1: (-lam, lam)}
    p0, p1 = cls.parity
    s0, k0 = left[p0]
    s1, k1 = right[p1]
    return DoubleCover(
        cls=cls,
        lam=lam,
        a_m=Fraction(0),
        a_M=Fraction(1, lam),
        b_M=Fraction(lam - 1, lam),
        b_m=Fraction(1),
        slope0=s0,
        icpt0=k0,
        slope1=s1,
        icpt1=k1,
    )


@dataclass(frozen=True)
class PlateauConfig:
    """Hole (a, b) with split point c over a cover.

    Defines the plateau map F (constant f(a) on (a, c), f(b) on (c, b)) and
    the open map f_{a,b} (undefined on (a, b)).
    """

    cover: DoubleCover
    a: Fraction
    b: Fraction
    c: Fraction = Fraction(1, 2)

    def __post_init__(self) -> None:
        cv = self.cover
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (cv.a_m <= self.a <= cv.a_M):
            raise CoverError(f"a = {self.a} outside [{cv.a_m}, {cv.a_M}]")
        if not (cv.b_M <= self.b <= cv.b_m):
            raise CoverError(f"b = {self.b} outside [{cv.b_M}, {cv.b_m}]")
        if not (cv.a_M <= self.c <= cv.b_M):
            raise CoverError(f"c = {self.c} outside [{cv.a_M}, {cv.b_M}]")

    @property
    def cls(self) -> ClassLabel:
        return self.cover.cls

    @property
    def left_value(self) -> Fraction:
        """F(c-)."""
        return self.cover.branch(0, self.a if self.a < self.c else self.c)

    @property
    def right_value(self) -> Fraction:
        """F(c+)."""
        return self.cover.branch(1, self.b if self.b > self.c else self.c)

    @property
    def denominator(self) -> int:
        return lcm(self.cover.denominator, self.a.denominator, self.b.denominator, self.c.denominator)

    def plateau(self, x: Fraction) -> Fraction:
        """F(x) for x != c (F is continuous away from c)."""
        if x < self.c:
            return self.cover.branch(0, x) if x <= self.a else self.left_value
        if x > self.c:
            return self.cover.branch(1, x) if x >= self.b else self.right_value
        raise CoverError("F is two-valued at c; use evaluate with a side")

    def with_hole(self, a: Fraction, b: Fraction) -> "PlateauConfig":
        return PlateauConfig(self.cover, Fraction(a), Fraction(b), self.c)


def evaluate(config: PlateauConfig, x: Fraction, side: Side = Side.MINUS) -> Fraction:
    """One-sided value of the plateau map; the side only matters at x = c."""
    x = Fraction(x)
    cv = config.cover
    if not (cv.a_m <= x <= cv.b_m):
        raise CoverError(f"{x} outside [{cv.a_m}, {cv.b_m}]")
    if x == config.c:
        return config.left_value if side is Side.MINUS else config.right_value
    return config.plateau(x)


def _step(config: PlateauConfig, x: Fraction, s: Side | None, tie: Side) -> tuple[str, Fraction, Side | None]:
    """Address, image and propagated side of the one-sided point (x, s).

    ``s is None`` marks an exact point: its one-sided structure was lost on
    a plateau, so a landing on c is resolved by ``tie``.
    """
    c, a, b = config.c, config.a, config.b
    p0, p1 = config.cls.parity
    if x == c:
        eff = s if s is not None else tie
        if eff is Side.MINUS:
            nxt = None if a < c else (eff if p0 > 0 else eff.flip())
            return "0", config.left_value, nxt
        nxt = None if b > c else (eff if p1 > 0 else eff.flip())
        return "1", config.right_value, nxt
    if x < c:
        on_branch = x < a or (x == a and s is Side.MINUS) or (x == a and a == c)
        nxt = None if (s is None or not on_branch) else (s if p0 > 0 else s.flip())
        return "0", config.plateau(x), nxt
    on_branch = x > b or (x == b and s is Side.PLUS) or (x == b and b == c)
    nxt = None if (s is None or not on_branch) else (s if p1 > 0 else s.flip())
    return "1", config.plateau(x), nxt


def orbit_addresses(
    config: PlateauConfig, x: Fraction, side: Side | None, n: int, tie: Side
) -> str:
    """First n addresses of the one-sided orbit of x (``side=None`` for the exact point)."""
    if n < 1:
        raise ValueError("n must be positive")
    cv = config.cover
    x = Fraction(x)
    if not (cv.a_m <= x <= cv.b_m):
        raise CoverError(f"{x} outside [{cv.a_m}, {cv.b_m}]")
    out = []
    s = side
    for _ in range(n):
        sym, x, s = _step(config, x, s, tie)
        out.append(sym)
    return "".join(out)


def itinerary(config: PlateauConfig, x: Fraction, side: Side, n: int) -> str:
    """First n addresses of x approached from ``side``.

    Exact landings on c later in the orbit (possible once a plateau has
    erased the one-sided information) are read from the same side.
    """
    return orbit_addresses(config, x, side, n, tie=side)


def kneading_tie(config: PlateauConfig) -> Side:
    """Reading of exact landings on c inside the critical orbits.

    With b = c the right limit is the natural one (the plateau on the left
    carries the point onto the unflattened right branch); otherwise the
    left-limit convention F(c) = F(c-) applies.
    """
    if config.b == config.c and config.a < config.c:
        return Side.PLUS
    return Side.MINUS


def kneading_invariant(config: PlateauConfig, n: int) -> tuple[str, str]:
    """Truncations (k-, k+) of length n of the kneading invariant of F."""
    tie = kneading_tie(config)
    return (
        orbit_addresses(config, config.c, Side.MINUS, n, tie),
        orbit_addresses(config, config.c, Side.PLUS, n, tie),
    )


def address(cover: DoubleCover, s: Seq) -> Fraction:
    """The point whose one-sided itinerary is s (exact for eventually periodic s)."""
    if s.is_finite:
        raise SymbolError("address needs an eventually periodic sequence")
    # composite affine map along the period: g(x) = S x + K
    S, K = Fraction(1), Fraction(0)
    for ch in s.period:
        i = int(ch)
        S, K = cover.slope(i) * S, cover.slope(i) * K + (cover.icpt0 if i == 0 else cover.icpt1)
    x = K / (1 - S)
    for ch in reversed(s.pre):
        x = cover.inverse(int(ch), x)
    return x


def address_of_word(cover: DoubleCover, word: str, tail: Seq) -> Fraction:
    return address(cover, tail.prepend(word))


def right_fixed_point(cover: DoubleCover) -> Fraction:
    """Fixed point of the right branch."""
    x = Fraction(cover.icpt1, 1 - cover.slope1)
    if not (cover.b_M <= x <= cover.b_m):
        raise CoverError("right branch has no fixed point in its domain")
    return x


def kneading_pair(k_minus: str, k_plus: str) -> KneadingInvariant:
    """Convenience wrapper parsing two ``PRE(PERIOD)`` strings."""
    from .symbolic import parse_seq

    return KneadingInvariant(parse_seq(k_minus), parse_seq(k_plus))
