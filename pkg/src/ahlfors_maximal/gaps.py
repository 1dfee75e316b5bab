"""Detachment certificates, image gaps, the measure-shrinking recursion and the
multi-dimension inductive step.

Throughout, ``mu`` is the component of smallest dimension of a
:class:`MeasureSum` (the measure whose gaps are used) and ``eta`` is the sum of
the remaining components.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .config import DEFAULT_DEPTH, BudgetExceeded, node_budget
from .covering import Gap, gap_enumerate, gap_enumerate_relative, vitali_select
from .exact import Enclosure, exponent_bracket, fmt, power_bracket, rational_power_bracket
from .measures import IFSMeasure, MeasureSum, as_sum, cylinder_enumerate, measure_of_interval

Target = Union[IFSMeasure, MeasureSum]


def split_smallest(f: MeasureSum) -> tuple[IFSMeasure, int, tuple[IFSMeasure, ...]]:
    """Return ``(mu0, multiplicity, eta_components)``; the smallest class must share one IFS."""
    last = f.classes[-1]
    mu0 = f.components[last[0]]
    for i in last[1:]:
        other = f.components[i]
        if other.maps != mu0.maps or other.weights != mu0.weights:
            raise ValueError("smallest-dimension class mixes different supports")
    eta = tuple(f.components[i] for cls in f.classes[:-1] for i in cls)
    return mu0, len(last), eta


def _mass(parts: Sequence[IFSMeasure], a, b, depth: int, mult: int = 1) -> Enclosure:
    total = Enclosure.exact(0)
    for m in parts:
        total = total + measure_of_interval(m, a, b, depth)
    return total.scale(mult)


@dataclass(frozen=True)
class GapImageInterval:
    """Image interval ``(g(b), g(b) + length)`` excluded from ``g`` of the contact set."""

    gap: Gap
    lo: Enclosure
    length: Enclosure
    certified: bool
    radius: Fraction
    diagnostics: str = ""

    @property
    def top(self) -> Enclosure:
        return self.lo + self.length

    def to_json(self) -> dict:
        return {"gap": self.gap.to_json(), "lo": self.lo.to_json(), "length": self.length.to_json(),
                "certified": self.certified, "radius": fmt(self.radius), "diagnostics": self.diagnostics}


def detachment_check(g: Target, gap: Gap, delta, depth: int = DEFAULT_DEPTH,
                     length_radius: Fraction | None = None) -> GapImageInterval:
    """Certify ``M_delta g(b) >= g(b) + mu([b, b + r]) / 8`` at the right end of a gap.

    Each step of the lower-bound chain is checked with enclosures: the left
    half-average against ``g(a)/2``, ``g(a) = g(b) - eta([a, b])``, the
    domination ``mu([b, b+r]) >= 4 eta([a, b])``, and the right half-average
    against ``(g(b) + g(b + r)) / 4``.  ``length_radius`` (defaults to ``r``)
    sets the reported length ``mu([b, b + length_radius]) / 8``.
    """
    f = as_sum(g)
    mu, mult, eta = split_smallest(f)
    delta = Fraction(delta)
    a, b, r = gap.a, gap.b, gap.r
    if 2 * r > delta:
        raise ValueError("gap radius exceeds delta/2; the enclosing interval is longer than delta")
    rho = r if length_radius is None else Fraction(length_radius)
    if not 0 < rho <= r:
        raise ValueError("length radius must lie in (0, r]")
    fails = []
    mu_gap = _mass([mu], a, b, depth, mult)
    if mu_gap.hi != 0:
        fails.append("gap carries mu-mass")
    mu_right = _mass([mu], b, b + r, depth, mult)
    eta_gap = _mass(eta, a, b, depth)
    if not 4 * eta_gap.hi <= mu_right.lo:
        fails.append("domination mu([b,b+r]) >= 4 eta([b-2r,b]) not verified")
    G = f.antiderivative
    ga, gb, gbr = f.cdf(a, depth), f.cdf(b, depth), f.cdf(b + r, depth)
    left_avg = (G(b, depth) - G(a, depth)).scale(Fraction(1, 4) / r)
    right_avg = (G(b + 2 * r, depth) - G(b, depth)).scale(Fraction(1, 4) / r)
    if not left_avg.lo >= ga.lo / 2:
        fails.append("left half-average below g(a)/2")
    if not ga.lo >= gb.lo - eta_gap.hi - mu_gap.hi:
        fails.append("g(a) below g(b) - eta(gap)")
    if not right_avg.lo >= (gb.lo + gbr.lo) / 4:
        fails.append("right half-average below (g(b) + g(b+r))/4")
    if not gbr.lo >= gb.lo + mu_right.lo:
        fails.append("g(b+r) below g(b) + mu([b,b+r])")
    total_avg = left_avg + right_avg
    length = (mu_right if rho == r else _mass([mu], b, b + rho, depth, mult)).scale(Fraction(1, 8))
    if not total_avg.lo >= gb.hi + length.hi:
        fails.append("average over [b-2r, b+2r] does not reach g(b) + length")
    return GapImageInterval(gap, gb, length, not fails, rho, "; ".join(fails))


@dataclass(frozen=True)
class ImageFamily:
    J: tuple[Fraction, Fraction]
    intervals: tuple[GapImageInterval, ...]
    disjoint: bool
    contained: bool
    all_certified: bool

    @property
    def total_length(self) -> Enclosure:
        total = Enclosure.exact(0)
        for iv in self.intervals:
            if iv.certified:
                total = total + iv.length
        return total

    def to_json(self) -> dict:
        return {"J": [fmt(self.J[0]), fmt(self.J[1])], "intervals": [iv.to_json() for iv in self.intervals],
                "disjoint": self.disjoint, "contained": self.contained, "all_certified": self.all_certified,
                "total_length": self.total_length.to_json()}


def _image_family_from(f: MeasureSum, J, gaps: Sequence[Gap], delta, depth: int) -> ImageFamily:
    alpha, beta = Fraction(J[0]), Fraction(J[1])
    sel = vitali_select(gaps, J)
    by_index = {gp.index: gp for gp in gaps}
    out = []
    for i in sel.selected:
        out.append(detachment_check(f, by_index[i], delta, depth, sel.truncated_radii[i]))
    out.sort(key=lambda iv: iv.gap.b)
    certified = [iv for iv in out if iv.certified]
    disjoint = all(p.top.hi <= q.lo.lo for p, q in zip(certified, certified[1:]))
    f_alpha, f_beta = f.cdf(alpha, depth), f.cdf(beta, depth)
    contained = all(f_alpha.hi <= iv.lo.lo and iv.top.hi <= f_beta.lo for iv in certified)
    return ImageFamily((alpha, beta), tuple(out), disjoint, contained, len(certified) == len(out))


def gap_image_family(f: Target, J, delta, depth: int = DEFAULT_DEPTH) -> ImageFamily:
    """Vitali-selected gaps of ``mu`` in J with their detachment image intervals."""
    f = as_sum(f)
    alpha, beta = Fraction(J[0]), Fraction(J[1])
    if beta - alpha > Fraction(delta):
        raise ValueError("m(J) exceeds delta")
    mu, _, _ = split_smallest(f)
    return _image_family_from(f, J, gap_enumerate(mu, J, depth), delta, depth)


def recursion_constant(mu: IFSMeasure, denominator: int = 32) -> tuple[Fraction, Fraction]:
    """Rational bracket of ``C**-4 * 12**-d / denominator``."""
    lo12, hi12 = power_bracket(Fraction(1, 12), mu.dimension)
    c4 = mu.C**4
    return lo12 / (denominator * c4), hi12 / (denominator * c4)


def quantile_floor(mu: IFSMeasure, y: Fraction, depth: int) -> Fraction:
    """A point x with ``f(x) <= y``, found by descending cylinders (never overshoots)."""
    y = Fraction(y)
    if y <= 0:
        return Fraction(0)
    if y >= 1:
        return Fraction(1)
    F = [Fraction(0)]
    for p in mu.weights:
        F.append(F[-1] + p)
    left, span = Fraction(0), Fraction(1)
    for _ in range(depth):
        for j, (rho, t) in enumerate(mu.maps):
            if y <= F[j + 1]:
                if y == F[j]:
                    return left + span * t
                if y == F[j + 1]:
                    return left + span * (t + rho)
                left += span * t
                span *= rho
                y = (y - F[j]) / mu.weights[j]
                break
    return left


@dataclass
class RecursionLevel:
    level: int
    survivors: list[tuple[Fraction, Fraction]]
    removed_images: list[tuple[Fraction, Fraction]]
    removed_mass: Enclosure
    surviving_mass: Enclosure
    bound: tuple[Fraction, Fraction]
    disjoint: bool
    per_interval_ok: bool

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "survivors": [[fmt(a), fmt(b)] for a, b in self.survivors],
            "removed_images": [[fmt(a), fmt(b)] for a, b in self.removed_images],
            "removed_mass": self.removed_mass.to_json(),
            "surviving_mass": self.surviving_mass.to_json(),
            "bound": [fmt(self.bound[0]), fmt(self.bound[1])],
            "within_bound": self.within_bound,
            "disjoint": self.disjoint,
            "per_interval_ok": self.per_interval_ok,
        }

    @property
    def within_bound(self) -> bool:
        return self.surviving_mass.hi <= self.bound[1]


@dataclass
class RecursionReport:
    I: tuple[Fraction, Fraction]
    delta: Fraction
    K: tuple[Fraction, Fraction]
    mass_I: Enclosure
    levels: list[RecursionLevel] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        decreasing = all(b.surviving_mass.hi <= a.surviving_mass.hi for a, b in zip(self.levels, self.levels[1:]))
        return decreasing and all(lv.within_bound and lv.disjoint and lv.per_interval_ok for lv in self.levels)

    def to_json(self) -> dict:
        return {
            "I": [fmt(self.I[0]), fmt(self.I[1])],
            "delta": fmt(self.delta),
            "K": [fmt(self.K[0]), fmt(self.K[1])],
            "mass_I": self.mass_I.to_json(),
            "holds": self.holds,
            "levels": [lv.to_json() for lv in self.levels],
        }


def image_measure_bound(f: Target, I, delta, levels: int, depth: int = 2,
                        cdf_depth: int = 40, budget: int | None = None) -> RecursionReport:
    """Run ``levels`` rounds of removing detachment preimages from the surviving intervals.

    ``depth`` counts gap generations below the scale of each surviving
    interval (the deeper of its enclosing cylinder and its length).  Level ``L`` records the surviving mass next to
    the a-priori bracket ``(1 - K)**L * mu(I)`` evaluated at both ends of the
    K bracket.
    """
    f = as_sum(f)
    if len(f.components) != 1:
        raise ValueError("image_measure_bound expects a single measure")
    mu = f.components[0]
    alpha, beta = Fraction(I[0]), Fraction(I[1])
    delta = Fraction(delta)
    if beta - alpha > delta:
        raise ValueError("m(I) exceeds delta")
    if levels < 0:
        raise ValueError("levels must be >= 0")
    budget = node_budget() if budget is None else budget
    K_lo, K_hi = recursion_constant(mu, 32)
    mass_I = measure_of_interval(mu, alpha, beta, cdf_depth)
    report = RecursionReport((alpha, beta), delta, (K_lo, K_hi), mass_I)
    survivors = [(alpha, beta)]
    work = 0
    for L in range(1, levels + 1):
        new_survivors, removed_images = [], []
        removed = Enclosure.exact(0)
        per_ok = True
        for J in survivors:
            fam = _image_family_from(f, J, gap_enumerate_relative(mu, J, depth, budget), delta, cdf_depth)
            work += len(fam.intervals) + 1
            if work > budget:
                raise BudgetExceeded("recursion exceeds node budget")
            cuts = []
            for iv in fam.intervals:
                if not iv.certified:
                    continue
                x_top = quantile_floor(mu, iv.top.lo, cdf_depth)
                x_top = min(max(x_top, iv.gap.b), iv.gap.b + iv.radius)
                y0, y1 = mu.cdf(iv.gap.b, cdf_depth), mu.cdf(x_top, cdf_depth)
                if y1.hi > iv.top.lo or x_top <= iv.gap.b:
                    continue
                cuts.append((iv.gap.b, x_top))
                removed_images.append((y0.lo, y1.lo))
                removed = removed + (y1 - y0)
            cut_mass = sum(((mu.cdf(b, cdf_depth) - mu.cdf(a, cdf_depth)).lo for a, b in cuts), Fraction(0))
            mass_J = measure_of_interval(mu, J[0], J[1], cdf_depth)
            if mass_J.hi > 0 and cut_mass < K_hi * mass_J.hi:
                per_ok = False
            edges = [J[0]]
            for a, b in sorted(cuts):
                edges.extend([a, b])
            edges.append(J[1])
            for a, b in zip(edges[::2], edges[1::2]):
                if a < b and measure_of_interval(mu, a, b, cdf_depth).hi > 0:
                    new_survivors.append((a, b))
        surviving = Enclosure.exact(0)
        for a, b in new_survivors:
            surviving = surviving + measure_of_interval(mu, a, b, cdf_depth)
        imgs = sorted(removed_images)
        disjoint = all(p[1] <= q[0] for p, q in zip(imgs, imgs[1:]))
        one_lo, one_hi = (1 - K_hi) ** L, (1 - K_lo) ** L
        report.levels.append(RecursionLevel(L, new_survivors, removed_images, removed, surviving,
                                            (one_lo * mass_I.lo, one_hi * mass_I.lo), disjoint, per_ok))
        survivors = new_survivors
    return report


@dataclass(frozen=True)
class Delta0Certificate:
    delta0: Fraction
    grid: tuple[Fraction, ...]
    margin: Fraction
    method: str
    window: Optional[tuple[Fraction, Fraction]] = None
    spot_checks: int = 0
    spot_failures: tuple = ()

    @property
    def verified(self) -> bool:
        return self.delta0 > 0 and not self.spot_failures

    def to_json(self) -> dict:
        return {"delta0": fmt(self.delta0), "margin": fmt(self.margin), "method": self.method,
                "window": None if self.window is None else [fmt(v) for v in self.window],
                "grid_size": len(self.grid), "spot_checks": self.spot_checks,
                "spot_failures": [[fmt(x), fmt(r)] for x, r in self.spot_failures],
                "verified": self.verified}


def _domination_sum_hi(mu: IFSMeasure, eta: Sequence[IFSMeasure], r: Fraction) -> Optional[Fraction]:
    """Upper bound of ``4 C_mu sum_i C_i (4r)**d_i / r**d_mu``, or None if brackets overlap."""
    total = Fraction(0)
    d_mu_lo, d_mu_hi = exponent_bracket(mu.dimension, 256)
    for m in eta:
        d_lo, _ = exponent_bracket(m.dimension, 256)
        e_lo = d_lo - d_mu_hi
        if e_lo <= 0:
            return None
        _, four_hi = power_bracket(Fraction(4), m.dimension, 256)
        # r**(d_i - d_mu) <= r**e_lo for r < 1
        _, r_hi = rational_power_bracket(r, e_lo)
        total += 4 * mu.C * m.C * four_hi * r_hi
    return total


def _support_clearance(eta: Sequence[IFSMeasure], window: tuple[Fraction, Fraction], depth: int) -> Fraction:
    """Lower bound on the distance from the closed window to the supports of ``eta``."""
    alpha, beta = window
    best = None
    for m in eta:
        stack = [(Fraction(0), Fraction(1), 0)]
        while stack:
            lo, hi, k = stack.pop()
            dist = max(Fraction(0), lo - beta, alpha - hi)
            if best is not None and dist >= best:
                continue
            if k == depth or dist == 0 and k == depth:
                best = dist if best is None else min(best, dist)
                continue
            span = hi - lo
            for rho, t in m.maps:
                stack.append((lo + span * t, lo + span * (t + rho), k + 1))
    return Fraction(1) if best is None else best


def delta0_estimate(f: Target, depth: int = DEFAULT_DEPTH, window=None, samples: int = 1000,
                    seed: int = 0, max_k: int = 400) -> Delta0Certificate:
    """Radius below which the smallest-dimension measure dominates the rest.

    Globally, the largest dyadic ``delta0 = 2**-k`` with
    ``4 C_mu sum_i C_i (4r)**d_i <= r**d_mu`` is taken from exact bracket
    comparisons (the ``4r`` accounts for centres off the other supports).
    With a ``window``, half the certified clearance between the window and the
    other supports is also admissible for centres inside the window.  The
    inequality itself is then re-checked at random cylinder endpoints.
    """
    f = as_sum(f)
    if len(f.classes) < 2:
        return Delta0Certificate(Fraction(1), (), Fraction(1), "single dimension class: eta = 0")
    mu, mult, eta = split_smallest(f)
    grid = []
    delta0, margin = Fraction(0), Fraction(0)
    for k in range(2, max_k):
        r = Fraction(1, 2**k)
        grid.append(r)
        s = _domination_sum_hi(mu, eta, r)
        if s is not None and s <= 1:
            delta0, margin = r, Fraction(math.floor((1 - s) * 2**32), 2**32)
            break
    method = "ahlfors bound"
    win = None
    if window is not None:
        win = (Fraction(window[0]), Fraction(window[1]))
        half = _support_clearance(eta, win, depth) / 2
        if half > delta0:
            delta0, margin, method = half, half, "support clearance"
    if delta0 <= 0:
        raise ArithmeticError("no delta0 found above the resolution floor")
    rng = random.Random(seed)
    points = [p for cyl in cylinder_enumerate(mu, min(depth, 10)) for p in (cyl.left, cyl.right)]
    if win is not None:
        points = [p for p in points if win[0] <= p <= win[1]]
    failures = []
    checked = 0
    for _ in range(samples if points else 0):
        x = rng.choice(points)
        r = delta0 * Fraction(rng.randint(1, 10**6), 10**6)
        mdepth = max(mu.depth_for_cdf(r / 8), *(m.depth_for_cdf(r / 8) for m in eta))
        lhs = _mass([mu], x - r, x + r, mdepth, mult)
        rhs = _mass(eta, x - 2 * r, x + 2 * r, mdepth)
        checked += 1
        if not lhs.lo >= 4 * rhs.hi:
            failures.append((x, r))
    return Delta0Certificate(delta0, tuple(grid), margin, method, win, checked, tuple(failures))


@dataclass(frozen=True)
class Claim1Result:
    pieces: tuple[tuple[Fraction, Fraction], ...]
    L: int
    mass_J: Enclosure
    mass_kept: Enclosure
    eta_mass: Enclosure
    eps: Fraction
    certified: bool

    def to_json(self) -> dict:
        return {"L": self.L, "n_pieces": len(self.pieces), "mass_J": self.mass_J.to_json(),
                "mass_kept": self.mass_kept.to_json(), "eta_mass": self.eta_mass.to_json(),
                "eps": fmt(self.eps), "certified": self.certified}


def _pieces_touching(mu: IFSMeasure, alpha: Fraction, beta: Fraction, L: int) -> list[int]:
    width = (beta - alpha) / L
    hit = set()
    stack = [(Fraction(0), Fraction(1))]
    while stack:
        lo, hi = stack.pop()
        if hi < alpha or lo > beta:
            continue
        if hi - lo <= width:
            first = max(0, int((lo - alpha) // width))
            last = min(L - 1, int((hi - alpha) // width))
            hit.update(range(first, last + 1))
            continue
        span = hi - lo
        for rho, t in mu.maps:
            stack.append((lo + span * t, lo + span * (t + rho)))
    return sorted(hit)


def inductive_claim1(f: Target, J, eps, depth: int = 40, max_log2: int = 24) -> Claim1Result:
    """Split J into ``L = 2**k`` equal pieces, doubling L until the mu-charged pieces carry eta-mass <= eps.

    Pieces that miss the support of mu carry zero mu-mass exactly, so the
    kept pieces preserve ``mu(J)``.
    """
    f = as_sum(f)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    mu, mult, eta = split_smallest(f)
    alpha, beta = Fraction(J[0]), Fraction(J[1])
    mass_J = _mass([mu], alpha, beta, depth, mult)
    if mass_J.hi == 0:
        zero = Enclosure.exact(0)
        return Claim1Result((), 1, mass_J, zero, zero, eps, True)
    last = None
    for k in range(1, max_log2 + 1):
        L = 2**k
        width = (beta - alpha) / L
        kept = []
        mu_kept, eta_kept = Enclosure.exact(0), Enclosure.exact(0)
        for i in _pieces_touching(mu, alpha, beta, L):
            a, b = alpha + i * width, alpha + (i + 1) * width
            m = _mass([mu], a, b, depth, mult)
            if m.hi == 0:
                continue
            kept.append((a, b))
            mu_kept = mu_kept + m
            eta_kept = eta_kept + _mass(eta, a, b, depth)
        last = Claim1Result(tuple(kept), L, mass_J, mu_kept, eta_kept, eps, eta_kept.hi <= eps)
        if last.certified:
            return last
    return last


@dataclass(frozen=True)
class Claim2Result:
    J: tuple[Fraction, Fraction]
    intervals: tuple[tuple[Fraction, Fraction], ...]
    mass: Enclosure
    mass_J: Enclosure
    K: tuple[Fraction, Fraction]
    holds: bool
    diagnostics: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"J": [fmt(v) for v in self.J], "intervals": [[fmt(a), fmt(b)] for a, b in self.intervals],
                "mass": self.mass.to_json(), "mass_J": self.mass_J.to_json(),
                "K": [fmt(self.K[0]), fmt(self.K[1])], "holds": self.holds,
                "diagnostics": list(self.diagnostics)}


def _bisect_mass(f: MeasureSum, b: Fraction, hi: Fraction, target: Fraction, depth: int, steps: int = 80) -> Fraction:
    """Largest bisection point x in [b, hi] with certified ``f(x) - f(b) <= target``."""
    fb = f.cdf(b, depth)
    lo = b
    for _ in range(steps):
        mid = (lo + hi) / 2
        if (f.cdf(mid, depth) - fb).hi <= target:
            lo = mid
        else:
            hi = mid
    return lo


def inductive_claim2(f: Target, J, delta, depth: int = 6, cdf_depth: int = 40,
                     certificate: Delta0Certificate | None = None) -> Claim2Result:
    """Intervals ``J^i = (b_i, b_i + r_i')`` inside J whose images avoid the contact set.

    ``r_i'`` is chosen by bisection so that ``(mu + eta)(J^i)`` stays below
    ``mu((b_i, b_i + rt_i)) / 8``; the claim holds when the mu-mass of the
    ``J^i`` reaches ``K mu(J)`` with ``K = C**-4 12**-d / 64`` taken at the
    upper end of its bracket.
    """
    f = as_sum(f)
    mu, mult, eta = split_smallest(f)
    alpha, beta = Fraction(J[0]), Fraction(J[1])
    delta = Fraction(delta)
    diags = []
    if beta - alpha > delta:
        raise ValueError("m(J) exceeds delta")
    if certificate is None:
        certificate = delta0_estimate(f, window=(alpha, beta))
    if delta > certificate.delta0:
        raise ValueError("delta exceeds the certified delta0")
    if certificate.window is not None and not (certificate.window[0] <= alpha and beta <= certificate.window[1]):
        raise ValueError("delta0 certificate does not cover J")
    K = recursion_constant(mu, 64)
    mass_J = _mass([mu], alpha, beta, cdf_depth, mult)
    if mass_J.hi == 0:
        zero = Enclosure.exact(0)
        return Claim2Result((alpha, beta), (), zero, mass_J, K, True)
    gaps = gap_enumerate_relative(mu, (alpha, beta), depth)
    sel = vitali_select(gaps, (alpha, beta))
    by_index = {gp.index: gp for gp in gaps}
    pieces = []
    total = Enclosure.exact(0)
    for i in sel.selected:
        gp = by_index[i]
        rt = sel.truncated_radii[i]
        dom_mu = _mass([mu], gp.b - gp.r, gp.b + gp.r, cdf_depth, mult)
        dom_eta = _mass(eta, gp.b - 2 * gp.r, gp.b + 2 * gp.r, cdf_depth)
        if not dom_mu.lo >= 4 * dom_eta.hi:
            diags.append(f"domination fails at gap {i}")
            continue
        iv = detachment_check(f, gp, delta, cdf_depth, rt)
        if not iv.certified:
            diags.append(f"gap {i}: {iv.diagnostics}")
            continue
        target = iv.length.lo
        x_end = _bisect_mass(f, gp.b, gp.b + rt, target, cdf_depth)
        if x_end <= gp.b:
            diags.append(f"gap {i}: empty J^i")
            continue
        piece_mu = _mass([mu], gp.b, x_end, cdf_depth, mult)
        sixteenth = _mass([mu], gp.b, gp.b + rt, cdf_depth, mult).scale(Fraction(1, 16))
        if not piece_mu.lo >= sixteenth.hi * (1 - Fraction(1, 2**20)):
            diags.append(f"gap {i}: mu(J^i) below mu((b, b+rt))/16")
        pieces.append((gp.b, x_end))
        total = total + piece_mu
    pieces.sort()
    disjoint = all(p[1] <= q[0] for p, q in zip(pieces, pieces[1:]))
    inside = all(alpha <= a and b <= beta for a, b in pieces)
    if not disjoint or not inside:
        diags.append("pieces are not disjoint subsets of J")
    holds = disjoint and inside and total.lo >= K[1] * mass_J.hi
    return Claim2Result((alpha, beta), tuple(pieces), total, mass_J, K, holds, tuple(diags))
