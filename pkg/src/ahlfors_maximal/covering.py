"""Complementary gaps of IFS supports and Besicovitch / Vitali interval selection."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .config import DEFAULT_DEPTH, BudgetExceeded, node_budget
from .exact import Enclosure, fmt, power_bracket
from .measures import IFSMeasure, measure_of_interval

Interval = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Gap:
    """Complementary interval ``(a, b)`` of the support; ``c``/``r`` are centre and radius."""

    index: int
    a: Fraction
    b: Fraction
    generation: int = 0

    @property
    def c(self) -> Fraction:
        return (self.a + self.b) / 2

    @property
    def r(self) -> Fraction:
        return (self.b - self.a) / 2

    def to_json(self) -> dict:
        return {"index": self.index, "a": fmt(self.a), "b": fmt(self.b), "generation": self.generation}


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple[int, ...]
    kind: str
    truncated_radii: Optional[dict[int, Fraction]] = None


@dataclass(frozen=True)
class DensityReport:
    lhs: Enclosure
    rhs: Fraction
    holds: bool
    mass_J: Enclosure
    selected: Optional[SelectionResult] = None
    disjoint: bool = True

    def to_json(self) -> dict:
        out = {"lhs": self.lhs.to_json(), "rhs": fmt(self.rhs), "holds": self.holds,
               "mass_J": self.mass_J.to_json(), "disjoint": self.disjoint}
        if self.selected is not None:
            out["selected"] = list(self.selected.selected)
        return out


def _check_J(J) -> Interval:
    alpha, beta = Fraction(J[0]), Fraction(J[1])
    if not alpha < beta:
        raise ValueError("J must be a nonempty open interval")
    return alpha, beta


def gap_enumerate(mu: IFSMeasure, J, depth: int, budget: int | None = None) -> list[Gap]:
    """Gaps of generation <= ``depth`` lying inside ``J``, left to right.

    Indices follow breadth-first order: generation first, then position.
    """
    alpha, beta = _check_J(J)
    budget = node_budget() if budget is None else budget
    found: list[tuple[Fraction, Fraction, int]] = []
    level = [(Fraction(0), Fraction(1))]
    visited = 0
    for gen in range(1, depth + 1):
        nxt = []
        for left, right in level:
            span = right - left
            children = [(left + span * t, left + span * (t + rho)) for rho, t in mu.maps]
            for (_, a_end), (b_start, _) in zip(children, children[1:]):
                if alpha <= a_end and b_start <= beta:
                    found.append((a_end, b_start, gen))
            for lo, hi in children:
                if lo < beta and hi > alpha:
                    nxt.append((lo, hi))
        visited += len(nxt)
        if visited > budget:
            raise BudgetExceeded("gap enumeration exceeds node budget")
        level = nxt
    gaps = [Gap(i, a, b, g) for i, (a, b, g) in enumerate(found)]
    return sorted(gaps, key=lambda g: g.a)


def enclosing_generation(mu: IFSMeasure, J) -> int:
    """Depth of the smallest cylinder containing ``J``; gaps inside J are deeper."""
    alpha, beta = _check_J(J)
    left, right, k = Fraction(0), Fraction(1), 0
    while True:
        span = right - left
        for rho, t in mu.maps:
            lo, hi = left + span * t, left + span * (t + rho)
            if lo <= alpha and beta <= hi:
                left, right, k = lo, hi, k + 1
                break
        else:
            return k


def length_generation(mu: IFSMeasure, J) -> int:
    """Smallest k with every generation-k cylinder no longer than ``m(J)``."""
    alpha, beta = _check_J(J)
    rho = max(r for r, _ in mu.maps)
    k, span = 0, Fraction(1)
    while span > beta - alpha:
        span *= rho
        k += 1
    return k


def support_hull(mu: IFSMeasure, J, depth: int) -> Optional[Interval]:
    """Hull of J intersected with the union of generation-``depth`` cylinders meeting J."""
    alpha, beta = _check_J(J)
    level = [(Fraction(0), Fraction(1))]
    for _ in range(depth):
        nxt = []
        for left, right in level:
            span = right - left
            for rho, t in mu.maps:
                lo, hi = left + span * t, left + span * (t + rho)
                if lo < beta and hi > alpha:
                    nxt.append((lo, hi))
        level = nxt
    if not level:
        return None
    return max(alpha, level[0][0]), min(beta, level[-1][1])


def scale_generation(mu: IFSMeasure, J) -> int:
    """Generation matching the size of the part of J that meets the support."""
    gen = max(enclosing_generation(mu, J), length_generation(mu, J))
    for _ in range(64):
        hull = support_hull(mu, J, gen)
        if hull is None or hull[0] >= hull[1]:
            return gen
        g = max(enclosing_generation(mu, hull), length_generation(mu, hull))
        if g <= gen:
            return gen
        gen = g
    return gen


def gap_enumerate_relative(mu: IFSMeasure, J, extra: int, budget: int | None = None) -> list[Gap]:
    """Gaps in J down to ``extra`` generations below the scale of J's support part."""
    return gap_enumerate(mu, J, scale_generation(mu, J) + extra, budget)


def besicovitch_select(family: Sequence[Gap]) -> SelectionResult:
    """Subfamily of ``(b - r, b + r)`` with the same union and overlap at most 2.

    Sweep by left end; inside each connected component of the union, always
    take the interval that starts within the covered part and reaches furthest.
    """
    items = sorted(((g.b - g.r, g.b + g.r, g.index) for g in family), key=lambda t: (t[0], -t[1], t[2]))
    chosen: list[int] = []
    i, n = 0, len(items)
    while i < n:
        left, reach, idx = items[i]
        chosen.append(idx)
        i += 1
        while True:
            best = None
            while i < n and items[i][0] < reach:
                if items[i][1] > reach and (best is None or items[i][1] > best[1]):
                    best = items[i]
                i += 1
            if best is None:
                break
            chosen.append(best[2])
            reach = best[1]
    return SelectionResult(tuple(chosen), "besicovitch")


def truncated_radius(g: Gap, beta: Fraction) -> Fraction:
    return min(g.r, beta - g.b)


def vitali_select(family: Sequence[Gap], J) -> SelectionResult:
    """Greedy Vitali selection of ``(b - rt, b + rt)`` with ``rt = min(r, beta - b)``.

    Largest radius first (ties by index); an interval is kept when it misses
    every interval kept so far.  Zero-radius members are ignored.
    """
    _, beta = _check_J(J)
    radii = {g.index: truncated_radius(g, beta) for g in family}
    order = sorted((g for g in family if radii[g.index] > 0), key=lambda g: (-radii[g.index], g.index))
    kept: list[tuple[Fraction, Fraction]] = []
    chosen = []
    for g in order:
        rt = radii[g.index]
        lo, hi = g.b - rt, g.b + rt
        if all(hi <= klo or khi <= lo for klo, khi in kept):
            kept.append((lo, hi))
            chosen.append(g.index)
    return SelectionResult(tuple(chosen), "vitali", radii)


def merge_intervals(intervals) -> list[Interval]:
    """Union of open intervals as sorted disjoint open intervals (touching ends kept apart)."""
    out: list[list[Fraction]] = []
    for lo, hi in sorted(intervals):
        if lo >= hi:
            continue
        if out and lo < out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


def union_measure(mu: IFSMeasure, intervals, depth: int) -> Enclosure:
    total = Enclosure.exact(0)
    for lo, hi in merge_intervals(intervals):
        total = total + measure_of_interval(mu, lo, hi, depth)
    return total


def density_constant_L1(mu: IFSMeasure) -> Fraction:
    """Upper rational bound of ``C**-2 * 4**-d / 2``."""
    _, four_hi = power_bracket(Fraction(1, 4), mu.dimension)
    return four_hi / (2 * mu.C**2)


def density_constant_L2(mu: IFSMeasure) -> Fraction:
    """Upper rational bound of ``C**-4 * 12**-d / 2``."""
    _, twelve_hi = power_bracket(Fraction(1, 12), mu.dimension)
    return twelve_hi / (2 * mu.C**4)


def _measure_depth(depth: int) -> int:
    return max(DEFAULT_DEPTH, depth + 8)


def density_check_L1(mu: IFSMeasure, J, depth: int) -> DensityReport:
    alpha, beta = _check_J(J)
    mdepth = _measure_depth(depth)
    mass_J = measure_of_interval(mu, alpha, beta, mdepth)
    family = gap_enumerate(mu, J, depth)
    lhs = union_measure(mu, [(g.b, min(g.b + g.r, beta)) for g in family], mdepth)
    rhs = density_constant_L1(mu) * mass_J.hi
    holds = mass_J.hi == 0 or lhs.lo >= rhs
    return DensityReport(lhs, rhs, holds, mass_J)


def density_check_L2(mu: IFSMeasure, J, depth: int) -> DensityReport:
    alpha, beta = _check_J(J)
    mdepth = _measure_depth(depth)
    mass_J = measure_of_interval(mu, alpha, beta, mdepth)
    family = gap_enumerate(mu, J, depth)
    sel = vitali_select(family, J)
    by_index = {g.index: g for g in family}
    rt = sel.truncated_radii
    right_parts = sorted((by_index[i].b, by_index[i].b + rt[i]) for i in sel.selected)
    disjoint = all(h1 <= l2 for (_, h1), (l2, _) in zip(right_parts, right_parts[1:]))
    lhs = union_measure(mu, [(by_index[i].b - rt[i], by_index[i].b + rt[i]) for i in sel.selected], mdepth)
    rhs = density_constant_L2(mu) * mass_J.hi
    holds = disjoint and (mass_J.hi == 0 or lhs.lo >= rhs)
    return DensityReport(lhs, rhs, holds, mass_J, sel, disjoint)
