"""Digit arithmetic for the ternary Cantor function and the forbidden-pattern cover.

A point of the Cantor set is ``x = sum 2 a_k / 3**k`` with ``a_k`` in {0, 1};
its Cantor function value is ``sum a_k / 2**k``.  Only eventually constant
digit sequences are admitted, written as a finite prefix followed by a
repeating tail digit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .config import BudgetExceeded, node_budget
from .exact import fmt
from .maximal import average
from .measures import cantor_measure

PATTERN = (1, 0, 0)


@dataclass(frozen=True)
class TernaryPoint:
    """Digits ``prefix`` followed by ``tail`` repeated forever."""

    prefix: tuple[int, ...]
    tail: int = 0

    def __post_init__(self):
        if self.tail not in (0, 1) or any(a not in (0, 1) for a in self.prefix):
            raise ValueError("digits must be 0 or 1")

    @classmethod
    def of(cls, digits: Sequence[int], tail: int = 0) -> "TernaryPoint":
        return cls(tuple(int(a) for a in digits), int(tail))

    @property
    def value(self) -> Fraction:
        n = len(self.prefix)
        x = sum((Fraction(2 * a, 3**k) for k, a in enumerate(self.prefix, 1)), Fraction(0))
        # sum_{k > n} 2/3**k = 1/3**n
        return x + Fraction(self.tail, 3**n)

    def digit(self, k: int) -> int:
        return self.prefix[k - 1] if k <= len(self.prefix) else self.tail

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "tail": self.tail, "value": fmt(self.value)}


def cantor_value(p: TernaryPoint) -> Fraction:
    n = len(p.prefix)
    y = sum((Fraction(a, 2**k) for k, a in enumerate(p.prefix, 1)), Fraction(0))
    return y + Fraction(p.tail, 2**n)


@dataclass(frozen=True)
class ToyGap:
    K: int
    x: TernaryPoint
    l: TernaryPoint
    r: TernaryPoint
    image_gap: tuple[Fraction, Fraction]
    average: Fraction

    def to_json(self) -> dict:
        return {"K": self.K, "x": self.x.to_json(), "l": self.l.to_json(), "r": self.r.to_json(),
                "image_gap": [fmt(v) for v in self.image_gap], "average": fmt(self.average)}


def toy_gap_construct(prefix: Sequence[int], K: int) -> ToyGap:
    """Points ``x = (prefix, 1, 0, 0, ...)``, ``l``, ``r`` and the image gap ``(h(x), h(x) + 2**(-K-2))``.

    The interval ``(l, r)`` is centred at x with radius ``3**-K``; its average
    is computed exactly and must equal the right end of the image gap.
    """
    prefix = tuple(prefix)
    if K < 1 or len(prefix) != K - 1:
        raise ValueError("prefix must have exactly K - 1 digits and K >= 1")
    x = TernaryPoint(prefix + (1,), 0)
    l = TernaryPoint(prefix + (0,), 1)
    r = TernaryPoint(prefix + (1,), 1)
    hx = cantor_value(x)
    top = hx + Fraction(1, 2 ** (K + 2))
    # the mean of the staircase over (l, r), computed exactly from cylinder integrals
    avg = average(cantor_measure(), x.value, Fraction(1, 3**K), depth=K + 2)
    if not avg.is_exact or avg.lo != top:
        raise ArithmeticError(f"average over (l, r) is {avg}, expected {top}")
    z = TernaryPoint(prefix + (1, 0, 0), 1)
    if z.value != (8 * x.value + r.value) / 9 or cantor_value(z) != top:
        raise ArithmeticError("(8x + r)/9 does not match the shifted digit sequence")
    return ToyGap(K, x, l, r, (hx, top), avg.lo)


@dataclass(frozen=True)
class PatternReport:
    y: Fraction
    bits: tuple[int, ...]
    positions: tuple[int, ...]
    dyadic: bool

    def to_json(self) -> dict:
        return {"y": fmt(self.y), "bits": "".join(map(str, self.bits)),
                "positions": list(self.positions), "dyadic": self.dyadic}


def binary_digits(y: Fraction, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        y *= 2
        bit = 1 if y >= 1 else 0
        out.append(bit)
        y -= bit
    return tuple(out)


def is_dyadic(y: Fraction) -> bool:
    den = Fraction(y).denominator
    return den & (den - 1) == 0


def pattern_scan(y, window: int) -> PatternReport:
    """1-based positions where ``(1, 0, 0)`` starts among the first ``window`` binary digits of y."""
    y = Fraction(y)
    if not 0 <= y <= 1:
        raise ValueError("y must lie in [0, 1]")
    if window < 3:
        raise ValueError("window must be at least 3")
    bits = (1,) * window if y == 1 else binary_digits(y, window)
    pos = tuple(k + 1 for k in range(window - 2) if bits[k:k + 3] == PATTERN)
    return PatternReport(y, bits, pos, is_dyadic(y))


@dataclass(frozen=True)
class CoverReport:
    K_max: int
    bits: int
    block_positions: tuple[int, ...]
    gaps: tuple[ToyGap, ...]
    disjoint: bool
    prefix_match: bool
    residual: Fraction
    residual_bruteforce: Fraction
    residual_all_positions: Fraction

    @property
    def covered(self) -> Fraction:
        return sum((g.image_gap[1] - g.image_gap[0] for g in self.gaps), Fraction(0))

    @property
    def exact_match(self) -> bool:
        return self.residual == self.residual_bruteforce

    def to_json(self) -> dict:
        return {"K_max": self.K_max, "bits": self.bits, "block_positions": list(self.block_positions),
                "n_gaps": len(self.gaps), "covered": fmt(self.covered), "disjoint": self.disjoint,
                "prefix_match": self.prefix_match, "residual": fmt(self.residual),
                "residual_bruteforce": fmt(self.residual_bruteforce), "exact_match": self.exact_match,
                "residual_all_positions": fmt(self.residual_all_positions)}


def _union_length(intervals) -> Fraction:
    total, reach = Fraction(0), None
    for lo, hi in sorted(intervals):
        if reach is None or lo >= reach:
            total += hi - lo
            reach = hi
        elif hi > reach:
            total += hi - reach
            reach = hi
    return total


def excluded_interval_cover(K_max: int, budget: int | None = None) -> CoverReport:
    """Image gaps at block positions ``K = 1, 4, 7, ...`` with ``K + 2 <= max(K_max, 3)``.

    Only minimal prefixes are used: a prefix that already carries the pattern
    at an earlier block position is covered by that block's gap.  The emitted
    gaps are then disjoint and the uncovered mass is ``(7/8)**blocks``.  The
    residual over all positions ``K <= bits - 2`` (overlapping gaps merged) is
    reported alongside.
    """
    if K_max < 1:
        raise ValueError("K_max must be >= 1")
    budget = node_budget() if budget is None else budget
    n = max(K_max, 3)
    blocks = tuple(range(1, n - 1, 3))
    gaps = []
    work = 0
    for K in blocks:
        for prefix in product((0, 1), repeat=K - 1):
            if any(prefix[j - 1:j + 2] == PATTERN for j in blocks if j < K):
                continue
            work += 1
            if work > budget:
                raise BudgetExceeded("cover enumeration exceeds node budget")
            gaps.append(toy_gap_construct(prefix, K))
    gaps.sort(key=lambda g: g.image_gap)
    disjoint = all(p.image_gap[1] <= q.image_gap[0] for p, q in zip(gaps, gaps[1:]))
    prefix_match = True
    for g in gaps:
        lo, hi = g.image_gap
        want = g.x.prefix + (0, 0)
        step = Fraction(1, 2 ** len(want))
        if lo != sum((Fraction(b, 2**k) for k, b in enumerate(want, 1)), Fraction(0)) or hi - lo != step:
            prefix_match = False
        probe = lo + step / 3
        if binary_digits(probe, len(want)) != want:
            prefix_match = False
    residual = 1 - sum((g.image_gap[1] - g.image_gap[0] for g in gaps), Fraction(0))
    misses = sum(1 for s in product((0, 1), repeat=n) if not any(s[K - 1:K + 2] == PATTERN for K in blocks))
    misses_all = sum(1 for s in product((0, 1), repeat=n) if PATTERN not in zip(s, s[1:], s[2:]))
    all_gaps = []
    for K in range(1, n - 1):
        for prefix in product((0, 1), repeat=K - 1):
            base = sum((Fraction(b, 2**k) for k, b in enumerate(prefix, 1)), Fraction(0)) + Fraction(1, 2**K)
            all_gaps.append((base, base + Fraction(1, 2 ** (K + 2))))
    residual_all = 1 - _union_length(all_gaps)
    if residual_all != Fraction(misses_all, 2**n):
        raise ArithmeticError("union of all pattern gaps disagrees with the brute-force count")
    return CoverReport(K_max, n, blocks, tuple(gaps), disjoint, prefix_match, residual,
                       Fraction(misses, 2**n), residual_all)
