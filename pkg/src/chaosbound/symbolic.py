"""Combinatorics on binary words for two-branch interval maps.

Eventually periodic sequences are stored in canonical form (shortest
preperiod, primitive period) so that equality is structural.  The textual
format is ``PRE(PERIOD)``: ``0(01)`` is the sequence 0 01 01 01 ..., and a
string without parentheses is a finite word.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from math import gcd
from typing import Iterator

__all__ = [
    "ClassLabel",
    "Order",
    "Seq",
    "KneadingInvariant",
    "SymbolError",
    "parse_seq",
    "shift",
    "compare",
    "is_compatible_pair",
    "is_balanced",
    "balanced_word",
    "sturmian_bounds",
    "rotation_extremes",
    "apply_replacement",
    "anharmonic_prefix",
    "cascade_periods",
    "substitute",
]


class SymbolError(ValueError):
    """Malformed word or sequence, or an operation outside its domain."""


class ClassLabel(str, enum.Enum):
    """Orientation class of a two-branch map."""

    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def parity(self) -> tuple[int, int]:
        """Orientation signs (p(0), p(1)) of the left and right branch."""
        return _PARITY[self]

    @property
    def mirror(self) -> "ClassLabel":
        """Class obtained by conjugating with the reflection x -> a_m + b_m - x."""
        return _MIRROR[self]

    @classmethod
    def from_parities(cls, p0: int, p1: int) -> "ClassLabel":
        for label, par in _PARITY.items():
            if par == (p0, p1):
                return label
        raise SymbolError(f"no class with parities {(p0, p1)}")

    @classmethod
    def parse(cls, text: str) -> "ClassLabel":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise SymbolError(f"unknown class {text!r}") from None


_PARITY = {
    ClassLabel.A: (1, 1),
    ClassLabel.B: (1, -1),
    ClassLabel.C: (-1, -1),
    ClassLabel.D: (-1, 1),
}
_MIRROR = {
    ClassLabel.A: ClassLabel.A,
    ClassLabel.B: ClassLabel.D,
    ClassLabel.C: ClassLabel.C,
    ClassLabel.D: ClassLabel.B,
}


class Order(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    PREFIX = "Prefix"

    def __str__(self) -> str:
        return self.value


def _check_word(w: str) -> str:
    if any(ch not in "01" for ch in w):
        raise SymbolError(f"word {w!r} is not over the alphabet {{0,1}}")
    return w


def _primitive_root(w: str) -> str:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w  # pragma: no cover


@dataclass(frozen=True)
class Seq:
    """A finite word (``period == ""``) or an eventually periodic sequence.

    Construct with :meth:`periodic` / :meth:`finite` or :func:`parse_seq`;
    the raw constructor canonicalizes as well.
    """

    pre: str
    period: str = ""

    def __post_init__(self) -> None:
        _check_word(self.pre)
        _check_word(self.period)
        if self.period:
            per = _primitive_root(self.period)
            pre = self.pre
            while pre and pre[-1] == per[-1]:
                pre = pre[:-1]
                per = per[-1] + per[:-1]
            object.__setattr__(self, "pre", pre)
            object.__setattr__(self, "period", per)

    @classmethod
    def periodic(cls, period: str, pre: str = "") -> "Seq":
        if not period:
            raise SymbolError("period of an infinite sequence must be nonempty")
        return cls(pre, period)

    @classmethod
    def finite(cls, word: str) -> "Seq":
        return cls(word, "")

    @property
    def is_finite(self) -> bool:
        return not self.period

    def __len__(self) -> int:
        if self.is_finite:
            return len(self.pre)
        raise TypeError("infinite sequence has no length")

    def __getitem__(self, i: int) -> str:
        if i < 0:
            raise IndexError(i)
        if i < len(self.pre):
            return self.pre[i]
        if self.is_finite:
            raise IndexError(i)
        return self.period[(i - len(self.pre)) % len(self.period)]

    def __iter__(self) -> Iterator[str]:
        yield from self.pre
        if self.period:
            while True:
                yield from self.period

    def prefix(self, n: int) -> str:
        """First ``n`` symbols as a plain string."""
        if self.is_finite:
            return self.pre[:n]
        out = self.pre[:n]
        if len(out) < n:
            k = n - len(out)
            reps = k // len(self.period) + 1
            out += (self.period * reps)[:k]
        return out

    def prepend(self, word: str) -> "Seq":
        return Seq(_check_word(word) + self.pre, self.period)

    @property
    def n_shifts(self) -> int:
        """Number of distinct shifts sigma^r s, r >= 0 (bounded above)."""
        return len(self.pre) + len(self.period)

    def __str__(self) -> str:
        if self.is_finite:
            return self.pre
        return f"{self.pre}({self.period})"


@dataclass(frozen=True)
class KneadingInvariant:
    """Pair (k-, k+) with k- starting with 0 and k+ starting with 1."""

    k_minus: Seq
    k_plus: Seq

    def __post_init__(self) -> None:
        if self.k_minus[0] != "0" or self.k_plus[0] != "1":
            raise SymbolError("k- must start with 0 and k+ with 1")

    def __str__(self) -> str:
        return f"({self.k_minus}, {self.k_plus})"


_SEQ_RE = re.compile(r"^\s*([01]*)(?:\(([01]+)\))?\s*$")


def parse_seq(text: str) -> Seq:
    """Parse ``PRE(PERIOD)`` or a finite word; errors report the offending position."""
    m = _SEQ_RE.match(text)
    if not m:
        for pos, ch in enumerate(text):
            if ch not in "01()":
                raise SymbolError(f"unexpected {ch!r} at position {pos} in {text!r}")
        raise SymbolError(f"malformed sequence {text!r}: expected PRE(PERIOD)")
    pre, period = m.group(1), m.group(2)
    if period is None:
        return Seq.finite(pre)
    return Seq.periodic(period, pre)


def shift(s: Seq) -> Seq:
    """Drop the first symbol."""
    if s.pre:
        return Seq(s.pre[1:], s.period)
    if s.is_finite:
        raise SymbolError("cannot shift the empty word")
    return Seq("", s.period[1:] + s.period[0])


def _first_difference(s: Seq, t: Seq) -> int | None:
    if s.is_finite or t.is_finite:
        n = min(len(s.pre), len(t.pre)) if (s.is_finite and t.is_finite) else None
        if n is None:
            raise SymbolError("cannot compare a finite word with an infinite sequence")
        for i in range(n):
            if s.pre[i] != t.pre[i]:
                return i
        return None
    p, q = len(s.period), len(t.period)
    bound = max(len(s.pre), len(t.pre)) + p * q // gcd(p, q)
    for i in range(bound):
        if s[i] != t[i]:
            return i
    return None


def compare(cls: ClassLabel, s: Seq, t: Seq) -> Order:
    """Parity-twisted order: agrees with the spatial order of the points coded by s, t.

    At the first disagreement n, the product of parities of the common
    prefix decides whether 0 < 1 (product +1) or 1 < 0 (product -1).
    Two finite words where one is a prefix of the other give ``Order.PREFIX``.
    """
    n = _first_difference(s, t)
    if n is None:
        if s.is_finite and len(s.pre) != len(t.pre):
            return Order.PREFIX
        return Order.EQUAL
    p0, p1 = cls.parity
    sign = 1
    for i in range(n):
        sign *= p0 if s[i] == "0" else p1
    s_lower = (s[n] == "0") if sign > 0 else (s[n] == "1")
    return Order.LESS if s_lower else Order.GREATER


def _le(cls: ClassLabel, s: Seq, t: Seq) -> bool:
    return compare(cls, s, t) in (Order.LESS, Order.EQUAL)


def is_compatible_pair(cls: ClassLabel, k: KneadingInvariant | tuple[Seq, Seq]) -> bool:
    """Every shift of k- and k+ lies weakly below k- or weakly above k+."""
    if isinstance(k, tuple):
        k_minus, k_plus = k
    else:
        k_minus, k_plus = k.k_minus, k.k_plus
    if k_minus.is_finite or k_plus.is_finite:
        raise SymbolError("compatibility is defined for infinite sequences")
    if k_minus[0] != "0" or k_plus[0] != "1":
        return False
    for s in (k_minus, k_plus):
        cur = s
        for _ in range(s.n_shifts):
            if not (_le(cls, cur, k_minus) or _le(cls, k_plus, cur)):
                return False
            cur = shift(cur)
    return True


def is_balanced(word: str, cyclic: bool = True) -> bool:
    """Brute-force balance check over all segments (cyclically if requested)."""
    n = len(word)
    text = word * 2 if cyclic else word
    for length in range(1, n + 1):
        starts = range(n) if cyclic else range(n - length + 1)
        counts = {text[i : i + length].count("1") for i in starts}
        if counts and max(counts) - min(counts) > 1:
            return False
    return True


def _check_pq(p: int, q: int) -> None:
    if not (0 < p < q) or gcd(p, q) != 1:
        raise SymbolError(f"need 0 < p < q with gcd(p, q) = 1, got {p}/{q}")


def balanced_word(p: int, q: int) -> Seq:
    """Mechanical word of slope p/q: symbol k is floor((k+1)p/q) - floor(kp/q)."""
    _check_pq(p, q)
    w = "".join(str((k + 1) * p // q - k * p // q) for k in range(q))
    return Seq.periodic(w)


def rotation_extremes(p: int, q: int) -> tuple[str, str]:
    """Lexicographic (max, min) over the cyclic rotations of the p/q word, as period blocks."""
    w = balanced_word(p, q).period
    rots = [w[i:] + w[:i] for i in range(q)]
    return max(rots), min(rots)


def sturmian_bounds(p: int, q: int) -> tuple[str, str]:
    """Return (r-, r+): first q symbols of 0M and of 1m."""
    big, small = rotation_extremes(p, q)
    return ("0" + big)[:q], ("1" + small)[:q]


_REPLACEMENT = {ClassLabel.C: "00100", ClassLabel.B: "010010"}


def apply_replacement(cls: ClassLabel, w: str) -> str:
    """Substitute 0 -> 00100 (class C) or 0 -> 010010 (class B); 1 is fixed."""
    try:
        zero = _REPLACEMENT[ClassLabel(cls)]
    except KeyError:
        raise SymbolError(f"replacement rule defined only for classes B and C, not {cls}") from None
    return "".join(zero if ch == "0" else "1" for ch in _check_word(w))


def anharmonic_prefix(cls: ClassLabel, length: int) -> str:
    """First ``length`` symbols of the fixed point of the replacement rule seeded at 0."""
    if length < 1:
        raise SymbolError("length must be positive")
    w = "0"
    while len(w) < length:
        w = apply_replacement(cls, w)
    return w[:length]


def cascade_periods(cls: ClassLabel, n_max: int) -> list[int]:
    """Periods p_0..p_{n_max} of the anharmonic cascade.

    Class C: p_n = (4*2^n - (-1)^n)/3, obeying p_{n+1} = 2 p_n + (-1)^n.
    Class B: p_n = (5*2^n + (-1)^n)/3, obeying p_{n+1} = 2 p_n - (-1)^n.
    The closed form is cross-checked against the recurrence.
    """
    cls = ClassLabel(cls)
    if n_max < 0:
        raise SymbolError("n_max must be non-negative")
    if cls is ClassLabel.C:
        num = [4 * 2**n - (-1) ** n for n in range(n_max + 1)]
        step_sign = 1
    elif cls is ClassLabel.B:
        num = [5 * 2**n + (-1) ** n for n in range(n_max + 1)]
        step_sign = -1
    else:
        raise SymbolError("anharmonic cascades exist only for classes B and C")
    periods = []
    for v in num:
        if v % 3:
            raise ArithmeticError(f"closed form not integral: {v}/3")
        periods.append(v // 3)
    for n in range(n_max):
        if periods[n + 1] != 2 * periods[n] + step_sign * (-1) ** n:
            raise ArithmeticError(f"period recurrence broken at n={n}: {periods[n:n + 2]}")
    return periods


def substitute(word: str, zero: str, one: str) -> str:
    """Replace each 0 by ``zero`` and each 1 by ``one``."""
    return "".join(zero if ch == "0" else one for ch in _check_word(word))
