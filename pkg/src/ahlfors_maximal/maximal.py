"""Certified centered averages and local / restricted maximal functions.

The supremum over radii is found by branch-and-bound on radius cells.  For a
cell ``[r1, r2]`` the integral ``N(r)`` of f over ``[x - r, x + r]`` splits into
``G(x + r)``, which is convex in ``r`` and lies under its chord, and
``-G(x - r)``, which is concave and lies under both end tangents (slopes are
values of f).  The resulting piecewise-linear majorant of ``N(r)`` divided by
``2r`` is monotone on each piece, so the cell bound is a maximum over at most
three radii.  Radii below an adaptive floor are covered by ``f(x + r_min)``,
since every average of a nondecreasing function is at most its value at the
right end.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .config import DEFAULT_DEPTH, DEFAULT_TOL, node_budget
from .exact import Enclosure, fmt
from .measures import IFSMeasure, MeasureSum, as_sum, cylinder_endpoints

Target = Union[IFSMeasure, MeasureSum]


@dataclass(frozen=True)
class AverageQuery:
    target: MeasureSum
    x: Fraction
    r: Fraction
    depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class MaximalResult:
    value: Enclosure
    witness_radius: Fraction
    radius_bound: Optional[Fraction]
    to_tolerance: bool = True
    nodes: int = 0

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json(),
            "witness_radius": fmt(self.witness_radius),
            "radius_bound": None if self.radius_bound is None else fmt(self.radius_bound),
            "to_tolerance": self.to_tolerance,
            "nodes": self.nodes,
        }


@dataclass(frozen=True)
class Detached:
    """Certified ``M_delta f(x) - f(x) >= margin > 0``."""

    margin: Fraction

    def to_json(self) -> dict:
        return {"verdict": "detached", "margin": fmt(self.margin)}


@dataclass(frozen=True)
class Undetermined:
    def to_json(self) -> dict:
        return {"verdict": "undetermined"}


ContactVerdict = Union[Detached, Undetermined]


def interval_average(q: AverageQuery) -> Enclosure:
    """Enclosure of the mean of f over ``[x - r, x + r]``."""
    f = q.target
    total = f.antiderivative(q.x + q.r, q.depth) - f.antiderivative(q.x - q.r, q.depth)
    return total.clamp_below(0).scale(1 / (2 * q.r))


def average(f: Target, x, r, depth: int = DEFAULT_DEPTH) -> Enclosure:
    return interval_average(AverageQuery(as_sum(f), Fraction(x), Fraction(r), depth))


class _Evaluator:
    """Memoised f and G enclosures at a fixed centre, with precision tied to tol."""

    def __init__(self, f: MeasureSum, x: Fraction, tol: Fraction, depth: int):
        self.f, self.x, self.tol = f, x, tol
        self.cdf_depth = max(depth, f.depth_for_cdf(tol / 16))
        self.min_depth = depth
        self._cdf: dict[Fraction, Enclosure] = {}
        self._G: dict[Fraction, Enclosure] = {}
        self._avg: dict[Fraction, Enclosure] = {}

    def cdf(self, y: Fraction) -> Enclosure:
        e = self._cdf.get(y)
        if e is None:
            e = self._cdf[y] = self.f.cdf(y, self.cdf_depth)
        return e

    def G(self, y: Fraction, r: Fraction) -> Enclosure:
        # averaging divides by 2r, so G is needed to absolute precision ~ tol * r
        e = self._G.get(y)
        depth = max(self.min_depth, self.f.depth_for_antiderivative(self.tol * r / 16))
        if e is None or (not e.is_exact and e.width > self.tol * r / 16):
            e = self._G[y] = self.f.antiderivative(y, depth)
        return e

    def avg(self, r: Fraction) -> Enclosure:
        e = self._avg.get(r)
        if e is None:
            x = self.x
            e = (self.G(x + r, r) - self.G(x - r, r)).clamp_below(0).scale(1 / (2 * r))
            self._avg[r] = e
        return e

    def cell_upper(self, r1: Fraction, r2: Fraction) -> Fraction:
        x = self.x
        gp1, gp2 = self.G(x + r1, r1).hi, self.G(x + r2, r1).hi
        gm1, gm2 = self.G(x - r1, r1).lo, self.G(x - r2, r1).lo
        fm1, fm2 = self.cdf(x - r1).hi, self.cdf(x - r2).lo
        slope = (gp2 - gp1) / (r2 - r1)

        def bound(r: Fraction) -> Fraction:
            chord = gp1 + (r - r1) * slope
            tangent = min(-gm1 + (r - r1) * fm1, -gm2 - (r2 - r) * fm2)
            return (chord + tangent) / (2 * r)

        best = max(bound(r1), bound(r2))
        if fm1 != fm2:
            cross = (gm1 - gm2 + r1 * fm1 - r2 * fm2) / (fm1 - fm2)
            if r1 < cross < r2:
                best = max(best, bound(cross))
        return best


def _radius_floor(ev: _Evaluator, n: int, cap: Fraction) -> Fraction:
    r = min(ev.tol / (4 * n), cap)
    for _ in range(400):
        if ev.cdf(ev.x + r).hi - ev.cdf(ev.x - r).lo <= ev.tol / 2:
            return r
        r /= 2
    raise ArithmeticError("could not find a radius floor; increase depth")


def _seed_radii(f: MeasureSum, x: Fraction, lo: Fraction, hi: Fraction, seed_depth: int = 4) -> list[Fraction]:
    out = set()
    for mu in f.components:
        for e in cylinder_endpoints(mu, seed_depth):
            r = abs(x - e)
            if lo < r <= hi:
                out.add(r)
    return sorted(out)


def maximal_local(f: Target, x, delta, tol=DEFAULT_TOL, depth: int = DEFAULT_DEPTH,
                  budget: int | None = None) -> MaximalResult:
    """Enclosure of ``sup_{0 < r <= delta}`` of the centered average of f at x."""
    f = as_sum(f)
    x, delta, tol = Fraction(x), Fraction(delta), Fraction(tol)
    if delta <= 0 or tol <= 0:
        raise ValueError("delta and tol must be positive")
    budget = node_budget() if budget is None else budget
    ev = _Evaluator(f, x, tol, depth)
    r_min = _radius_floor(ev, f.total_mass, delta)

    best_lo, best_r = Fraction(-1), r_min

    def offer(r: Fraction):
        nonlocal best_lo, best_r
        lo = ev.avg(r).lo
        if lo > best_lo or (lo == best_lo and r < best_r):
            best_lo, best_r = lo, r

    offer(r_min)
    floor_hi = ev.cdf(x + r_min).hi
    if r_min >= delta:
        hi = max(floor_hi, best_lo)
        return MaximalResult(Enclosure(best_lo, hi), best_r, delta, hi - best_lo <= tol, 0)

    for r in _seed_radii(f, x, r_min, delta):
        offer(r)
    heap: list[tuple[Fraction, Fraction, Fraction]] = []
    top = delta
    while top > r_min:
        bottom = max(top / 2, r_min)
        offer(top)
        heapq.heappush(heap, (-ev.cell_upper(bottom, top), bottom, top))
        top = bottom

    nodes = 0
    to_tol = True
    while heap:
        neg_ub, r1, r2 = heap[0]
        if max(-neg_ub, floor_hi) - best_lo <= tol:
            break
        if -neg_ub <= best_lo:
            heapq.heappop(heap)
            continue
        if nodes >= budget:
            to_tol = False
            break
        heapq.heappop(heap)
        nodes += 1
        mid = (r1 + r2) / 2
        offer(mid)
        for a, b in ((r1, mid), (mid, r2)):
            ub = ev.cell_upper(a, b)
            if ub > best_lo:
                heapq.heappush(heap, (-ub, a, b))
    cell_hi = -heap[0][0] if heap else best_lo
    hi = max(cell_hi, floor_hi, best_lo)
    if hi - best_lo > tol:
        to_tol = False
    return MaximalResult(Enclosure(best_lo, hi), best_r, delta, to_tol, nodes)


def maximal_restricted(f: Target, x, interval: tuple, tol=DEFAULT_TOL, depth: int = DEFAULT_DEPTH,
                       budget: int | None = None) -> MaximalResult:
    """Supremum over radii keeping ``(x - r, x + r)`` inside the open interval.

    Endpoints may be ``None`` for an infinite end.  With both ends infinite
    the radii beyond ``1 + |x|`` are handled in closed form: there the average
    equals ``n/2 + c/(2r)`` for an exact constant ``c``.
    """
    f = as_sum(f)
    x, tol = Fraction(x), Fraction(tol)
    alpha, beta = interval
    alpha = None if alpha is None else Fraction(alpha)
    beta = None if beta is None else Fraction(beta)
    if (alpha is not None and x <= alpha) or (beta is not None and x >= beta):
        raise ValueError(f"x = {x} is not inside the interval")
    reach = [v for v in ((x - alpha) if alpha is not None else None,
                         (beta - x) if beta is not None else None) if v is not None]
    if reach:
        return maximal_local(f, x, min(reach), tol, depth, budget)
    n = f.total_mass
    r0 = 1 + abs(x)
    near = maximal_local(f, x, r0, tol / 2, depth, budget)
    c = f.integral_01 + n * (x - 1)
    if c >= 0:
        return MaximalResult(near.value, near.witness_radius, None, near.to_tolerance, near.nodes)
    # average increases towards n/2 as r grows; pick a radius within tol/2 of the limit
    limit = Fraction(n, 2)
    r_far = max(r0, -c / tol)
    far = limit + c / (2 * r_far)
    if far > near.value.lo:
        lo, witness = far, r_far
    else:
        lo, witness = near.value.lo, near.witness_radius
    hi = max(near.value.hi, limit)
    return MaximalResult(Enclosure(lo, hi), witness, None, near.to_tolerance and hi - lo <= tol, near.nodes)


def contact_classify(f: Target, x, delta, tol=DEFAULT_TOL, depth: int = DEFAULT_DEPTH,
                     budget: int | None = None) -> ContactVerdict:
    f = as_sum(f)
    res = maximal_local(f, x, delta, tol, depth, budget)
    fx = f.cdf(Fraction(x), max(depth, f.depth_for_cdf(Fraction(tol) / 16)))
    margin = res.value.lo - fx.hi
    return Detached(margin) if margin > 0 else Undetermined()
