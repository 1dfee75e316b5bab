"""Exact rationals, certified enclosures and log-ratio exponents.

Everything here works on :class:`fractions.Fraction`.  Irrational exponents
such as ``log 2 / log 3`` are never evaluated in floating point for a
decision; they are compared by integer cross-exponentiation and bracketed
by rationals when a power has to be bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from sympy import factorint, integer_nthroot

RationalLike = Union[int, str, Fraction]


def parse_rational(value: RationalLike) -> Fraction:
    """Parse text of the form ``"p/q"`` or an exact number type.  Floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"not an exact rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"malformed rational: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational: {value!r}") from exc
    raise ValueError(f"malformed rational: {value!r}")


def fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


@dataclass(frozen=True)
class Enclosure:
    """Closed rational interval ``[lo, hi]`` known to contain some real quantity."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value) -> "Enclosure":
        v = Fraction(value)
        return cls(v, v)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def __add__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo + other.lo, self.hi + other.hi)
        v = Fraction(other)
        return Enclosure(self.lo + v, self.hi + v)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo - other.hi, self.hi - other.lo)
        v = Fraction(other)
        return Enclosure(self.lo - v, self.hi - v)

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def scale(self, factor) -> "Enclosure":
        c = Fraction(factor)
        if c >= 0:
            return Enclosure(self.lo * c, self.hi * c)
        return Enclosure(self.hi * c, self.lo * c)

    def clamp_below(self, floor=0) -> "Enclosure":
        f = Fraction(floor)
        return Enclosure(max(self.lo, f), max(self.hi, f))

    def to_json(self) -> dict:
        return {"lo": fmt(self.lo), "hi": fmt(self.hi)}

    def __repr__(self):
        if self.is_exact:
            return f"Enclosure({fmt(self.lo)})"
        return f"Enclosure({fmt(self.lo)}, {fmt(self.hi)})"


def _prime_vector(q: Fraction) -> dict[int, int]:
    vec = dict(factorint(q.numerator)) if q.numerator != 1 else {}
    for p, e in (factorint(q.denominator).items() if q.denominator != 1 else ()):
        vec[p] = vec.get(p, 0) - e
    return vec


def _sym_product(u: dict[int, int], v: dict[int, int]) -> dict[tuple[int, int], int]:
    # coefficients of (u . L)(v . L) as a polynomial in the independent symbols L_p = log p
    out: dict[tuple[int, int], int] = {}
    for p, a in u.items():
        for q, b in v.items():
            key = (p, q) if p <= q else (q, p)
            out[key] = out.get(key, 0) + a * b
    return {k: c for k, c in out.items() if c}


def root_bracket(x: Fraction, q: int, bits: int = 48) -> tuple[Fraction, Fraction]:
    """Rational bounds ``lo <= x**(1/q) <= hi`` for ``x > 0``."""
    if x <= 0:
        raise ValueError("root of a non-positive number")
    if q == 1:
        return x, x
    n, d = x.numerator, x.denominator
    scale = 1 << bits
    # x^(1/q) = (n d^(q-1))^(1/q) / d
    root, is_exact = integer_nthroot(n * d ** (q - 1) * scale**q, q)
    lo = Fraction(int(root), d * scale)
    return (lo, lo) if is_exact else (lo, Fraction(int(root) + 1, d * scale))


def rational_power_bracket(base: Fraction, exponent: Fraction, bits: int = 48) -> tuple[Fraction, Fraction]:
    """Bounds on ``base ** exponent`` for a rational exponent and positive base."""
    p, q = exponent.numerator, exponent.denominator
    return root_bracket(base**p, q, bits)


@dataclass(frozen=True)
class LogRatio:
    """The positive real ``log(num) / log(den)`` with rational ``num, den > 1``.

    A self-similar weight/ratio pair ``p = rho**d`` gives ``d`` as
    ``LogRatio(1/p, 1/rho)``.
    """

    num: Fraction
    den: Fraction

    def __post_init__(self):
        if self.num <= 1 or self.den <= 1:
            raise ValueError("LogRatio needs num > 1 and den > 1")

    def same_value(self, other: "LogRatio") -> bool:
        """Exact equality decided symbolically over independent prime logarithms."""
        a1, b1 = _prime_vector(self.num), _prime_vector(self.den)
        a2, b2 = _prime_vector(other.num), _prime_vector(other.den)
        return _sym_product(a1, b2) == _sym_product(a2, b1)

    @property
    def exact(self) -> Fraction | None:
        """The value as a Fraction when it is rational, else None."""
        return _exact_log_ratio(self.num, self.den)

    def __float__(self):
        return math.log(self.num) / math.log(self.den)

    def compare_rational(self, q: Fraction) -> int:
        """Sign of ``self - q``, exact."""
        q = Fraction(q)
        if q <= 0:
            return 1
        a, b = q.numerator, q.denominator
        # log(num)/log(den) vs a/b  <=>  num**b vs den**a
        lhs, rhs = self.num**b, self.den**a
        return (lhs > rhs) - (lhs < rhs)

    def bracket(self, max_den: int = 64) -> tuple[Fraction, Fraction]:
        """Tightest ``[lo, hi]`` with denominators up to ``max_den`` containing the value."""
        return _bracket(self.num, self.den, max_den)

    def compare(self, other: "LogRatio") -> int:
        if self.same_value(other):
            return 0
        max_den = 64
        while max_den <= 1 << 16:
            lo1, hi1 = self.bracket(max_den)
            lo2, hi2 = other.bracket(max_den)
            if hi1 < lo2:
                return -1
            if hi2 < lo1:
                return 1
            max_den *= 4
        raise ArithmeticError("exponents too close to separate")

    def __lt__(self, other):
        return self.compare(other) < 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __str__(self):
        ex = self.exact
        if ex is not None:
            return fmt(ex)
        return f"log({fmt(self.num)})/log({fmt(self.den)})"


@lru_cache(maxsize=None)
def _exact_log_ratio(num: Fraction, den: Fraction) -> Fraction | None:
    u, v = _prime_vector(num), _prime_vector(den)
    if set(u) != set(v):
        return None
    ratio = None
    for p in u:
        r = Fraction(u[p], v[p])
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio


@lru_cache(maxsize=None)
def _bracket(num: Fraction, den: Fraction, max_den: int) -> tuple[Fraction, Fraction]:
    ex = _exact_log_ratio(num, den)
    if ex is not None:
        return ex, ex
    guess = math.log(num) / math.log(den)
    lo, hi = Fraction(0), Fraction(math.ceil(guess) + 1)
    for q in range(1, max_den + 1):
        numq = num**q
        # largest k with den**k <= num**q, starting near the float guess
        k = max(0, int(math.floor(guess * q)) - 1)
        while den ** (k + 1) <= numq:
            k += 1
        while k > 0 and den**k > numq:
            k -= 1
        lo = max(lo, Fraction(k, q))
        hi = min(hi, Fraction(k + 1, q))
    return lo, hi


Exponent = Union[Fraction, LogRatio]


def exponent_bracket(d: Exponent, max_den: int = 64) -> tuple[Fraction, Fraction]:
    if isinstance(d, LogRatio):
        return d.bracket(max_den)
    d = Fraction(d)
    return d, d


def power_bracket(base: Fraction, d: Exponent, max_den: int = 64, bits: int = 48) -> tuple[Fraction, Fraction]:
    """Rational ``[lo, hi]`` containing ``base ** d`` for ``base > 0`` and ``d >= 0``."""
    base = Fraction(base)
    if base <= 0:
        raise ValueError("power of a non-positive base")
    d_lo, d_hi = exponent_bracket(d, max_den)
    if base == 1:
        return Fraction(1), Fraction(1)
    if base > 1:
        lo, _ = rational_power_bracket(base, d_lo, bits)
        _, hi = rational_power_bracket(base, d_hi, bits)
    else:
        lo, _ = rational_power_bracket(base, d_hi, bits)
        _, hi = rational_power_bracket(base, d_lo, bits)
    return lo, hi
