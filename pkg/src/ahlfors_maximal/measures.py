"""Self-similar Ahlfors-regular measures on [0, 1] and their distribution functions.

A measure is the invariant measure of a strongly separated family of
increasing affine contractions ``S_j(x) = rho_j * x + t_j`` with weights
``p_j = rho_j ** d``.  Values of the distribution function ``f(x) = mu([0, x])``
and of its antiderivative are computed by descending the cylinder tree with
exact rationals; a descent either terminates (gap point, cylinder endpoint,
outside the hull) and gives an exact answer, or stops at the requested depth
and returns an enclosure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence, Union

from .config import DEFAULT_DEPTH, BudgetExceeded, node_budget
from .exact import Enclosure, LogRatio, fmt, parse_rational

CANTOR_MAPS = {"maps": [{"rho": "1/3", "t": "0"}, {"rho": "1/3", "t": "2/3"}], "weights": ["1/2", "1/2"]}
QUARTER_CANTOR_MAPS = {"maps": [{"rho": "1/4", "t": "0"}, {"rho": "1/4", "t": "3/4"}], "weights": ["1/2", "1/2"]}


@dataclass(frozen=True)
class CylinderInterval:
    word: tuple[int, ...]
    left: Fraction
    right: Fraction
    mass: Fraction

    @property
    def length(self) -> Fraction:
        return self.right - self.left


@dataclass(frozen=True)
class IFSMeasure:
    """Invariant measure of a strongly separated self-similar IFS.

    ``regularity_constant`` may be left as ``None``; :attr:`C` then falls back
    to :func:`ahlfors_constant_estimate` at depth 8.
    """

    maps: tuple[tuple[Fraction, Fraction], ...]
    weights: tuple[Fraction, ...]
    regularity_constant: Fraction | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        _validate(self.maps, self.weights)

    @cached_property
    def dimension(self) -> LogRatio:
        rho, _ = self.maps[0]
        return LogRatio(1 / self.weights[0], 1 / rho)

    @cached_property
    def C(self) -> Fraction:
        if self.regularity_constant is not None:
            return self.regularity_constant
        return ahlfors_constant_estimate(self, 8)

    @property
    def n_maps(self) -> int:
        return len(self.maps)

    @cached_property
    def _prefix(self) -> tuple[Fraction, ...]:
        out = [Fraction(0)]
        for p in self.weights:
            out.append(out[-1] + p)
        return tuple(out)

    @cached_property
    def mean(self) -> Fraction:
        """Barycentre of the measure, from its self-similarity equation."""
        num = sum((p * t for (_, t), p in zip(self.maps, self.weights)), Fraction(0))
        den = 1 - sum((p * rho for (rho, _), p in zip(self.maps, self.weights)), Fraction(0))
        return num / den

    @cached_property
    def integral_01(self) -> Fraction:
        """Exact value of the integral of f over [0, 1]."""
        return 1 - self.mean

    @cached_property
    def _antideriv_nodes(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        F = self._prefix
        at_start, at_end = [], []
        g = Fraction(0)
        prev_end = Fraction(0)
        for j, ((rho, t), p) in enumerate(zip(self.maps, self.weights)):
            g += F[j] * (t - prev_end)
            at_start.append(g)
            g += rho * (F[j] + p * self.integral_01)
            at_end.append(g)
            prev_end = t + rho
        if g != self.integral_01:
            raise AssertionError("inconsistent self-similar integral")
        return tuple(at_start), tuple(at_end)

    @cached_property
    def max_weight(self) -> Fraction:
        return max(self.weights)

    @cached_property
    def min_ratio(self) -> Fraction:
        return min(rho for rho, _ in self.maps)

    def depth_for_cdf(self, width) -> int:
        """Depth at which an unresolved cdf enclosure is at most ``width`` wide."""
        return _levels(float(self.max_weight), width)

    def depth_for_antiderivative(self, width) -> int:
        q = max(p * rho for (rho, _), p in zip(self.maps, self.weights))
        return _levels(float(q), width)

    def cdf(self, x, depth: int = DEFAULT_DEPTH) -> Enclosure:
        y = Fraction(x)
        F = self._prefix
        acc, scale = Fraction(0), Fraction(1)
        for _ in range(depth):
            if y <= 0:
                return Enclosure.exact(acc)
            if y >= 1:
                return Enclosure.exact(acc + scale)
            for j, (rho, t) in enumerate(self.maps):
                if y < t:
                    return Enclosure.exact(acc + scale * F[j])
                end = t + rho
                if y <= end:
                    if y == t:
                        return Enclosure.exact(acc + scale * F[j])
                    if y == end:
                        return Enclosure.exact(acc + scale * F[j + 1])
                    acc += scale * F[j]
                    scale *= self.weights[j]
                    y = (y - t) / rho
                    break
        if y <= 0:
            return Enclosure.exact(acc)
        if y >= 1:
            return Enclosure.exact(acc + scale)
        return Enclosure(acc, acc + scale)

    def antiderivative(self, x, depth: int = DEFAULT_DEPTH) -> Enclosure:
        """Enclosure of ``G(x) = integral of f over (-inf, x]``."""
        y = Fraction(x)
        F = self._prefix
        at_start, at_end = self._antideriv_nodes
        # real G(X0 + sx*y) = g0 + f0*sx*y + sf*sx*Gnorm(y) inside the current cylinder
        g0, f0, sx, sf = Fraction(0), Fraction(0), Fraction(1), Fraction(1)

        def close(gnorm):
            return Enclosure.exact(g0 + f0 * sx * y + sf * sx * gnorm)

        for _ in range(depth):
            if y <= 0:
                return close(0)
            if y >= 1:
                return close(self.integral_01 + (y - 1))
            for j, (rho, t) in enumerate(self.maps):
                if y < t:
                    end_prev = self.maps[j - 1][0] + self.maps[j - 1][1]
                    return close(at_end[j - 1] + F[j] * (y - end_prev))
                end = t + rho
                if y <= end:
                    if y == t:
                        return close(at_start[j])
                    if y == end:
                        return close(at_end[j])
                    g0 += f0 * sx * t + sf * sx * at_start[j]
                    f0 += sf * F[j]
                    sx *= rho
                    sf *= self.weights[j]
                    y = (y - t) / rho
                    break
        if y <= 0:
            return close(0)
        if y >= 1:
            return close(self.integral_01 + (y - 1))
        base = g0 + f0 * sx * y
        # 0 <= Gnorm(y) <= y on the unresolved cylinder (f between its end values)
        return Enclosure(base, base + sf * sx * y)

    def cdf_float(self, x: float) -> float:
        """Floating-point cdf; used only for empirical constant estimates."""
        acc, scale = 0.0, 1.0
        F = [float(v) for v in self._prefix]
        maps = [(float(r), float(t)) for r, t in self.maps]
        w = [float(p) for p in self.weights]
        for _ in range(64):
            if x <= 0:
                return acc
            if x >= 1:
                return acc + scale
            for j, (rho, t) in enumerate(maps):
                if x < t:
                    return acc + scale * F[j]
                if x <= t + rho:
                    acc += scale * F[j]
                    scale *= w[j]
                    x = (x - t) / rho
                    break
        return acc + scale * min(max(x, 0.0), 1.0)

    def to_dict(self) -> dict:
        return {
            "maps": [{"rho": fmt(r), "t": fmt(t)} for r, t in self.maps],
            "weights": [fmt(p) for p in self.weights],
        }

    def __str__(self):
        return self.name or json.dumps(self.to_dict())


def _levels(q: float, width) -> int:
    width = float(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if width >= 1:
        return 1
    return max(1, math.ceil(math.log(width) / math.log(q)) + 1)


def _validate(maps, weights) -> None:
    if len(maps) < 2:
        raise ValueError("need at least two maps (one map gives a point mass)")
    if len(weights) != len(maps):
        raise ValueError("number of weights differs from number of maps")
    for rho, _ in maps:
        if not 0 < rho < 1:
            raise ValueError(f"contraction ratio {rho} outside (0, 1)")
    for p in weights:
        if p <= 0:
            raise ValueError(f"weight {p} is not positive")
    if sum(weights) != 1:
        raise ValueError(f"weights sum to {sum(weights)}, not 1")
    prev_end = None
    for rho, t in maps:
        if t < 0 or t + rho > 1:
            raise ValueError(f"image [{t}, {t + rho}] leaves [0, 1]")
        if prev_end is not None and t <= prev_end:
            raise ValueError("images overlap, touch, or are not listed left to right")
        prev_end = t + rho
    if maps[0][1] != 0 or maps[-1][0] + maps[-1][1] != 1:
        raise ValueError("first image must start at 0 and last image must end at 1")
    first = LogRatio(1 / weights[0], 1 / maps[0][0])
    for (rho, _), p in zip(maps[1:], weights[1:]):
        if not LogRatio(1 / p, 1 / rho).same_value(first):
            raise ValueError("weights are not rho**d for a single exponent d")
    if first.compare_rational(Fraction(1)) >= 0:
        raise ValueError("dimension must lie in (0, 1)")


def parse_measure(source: Union[str, dict], name: str = "") -> IFSMeasure:
    """Build an :class:`IFSMeasure` from a JSON measure text or dict."""
    if isinstance(source, str):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ValueError(f"measure text is not valid JSON: {exc}") from exc
    if not isinstance(source, dict) or "maps" not in source or "weights" not in source:
        raise ValueError("measure description needs 'maps' and 'weights'")
    maps = []
    for entry in source["maps"]:
        if not isinstance(entry, dict) or set(entry) != {"rho", "t"}:
            raise ValueError(f"bad map entry {entry!r}")
        maps.append((parse_rational(entry["rho"]), parse_rational(entry["t"])))
    weights = tuple(parse_rational(w) for w in source["weights"])
    return IFSMeasure(tuple(maps), weights, name=name)


def load_measure(path: Union[str, Path]) -> IFSMeasure:
    path = Path(path)
    return parse_measure(path.read_text(), name=path.stem)


def cantor_measure() -> IFSMeasure:
    return parse_measure(CANTOR_MAPS, name="cantor")


def quarter_cantor_measure() -> IFSMeasure:
    return parse_measure(QUARTER_CANTOR_MAPS, name="quarter-cantor")


BUILTIN_MEASURES = {"cantor": cantor_measure, "quarter-cantor": quarter_cantor_measure}


@dataclass(frozen=True)
class MeasureSum:
    """Finite sum of IFS measures, ordered by strictly decreasing dimension class.

    Components with equal dimension stay separate but share a class in
    :attr:`classes`.
    """

    components: tuple[IFSMeasure, ...]
    classes: tuple[tuple[int, ...], ...]

    @property
    def total_mass(self) -> int:
        return len(self.components)

    def cdf(self, x, depth: int = DEFAULT_DEPTH) -> Enclosure:
        return _sum_enclosures(mu.cdf(x, depth) for mu in self.components)

    def antiderivative(self, x, depth: int = DEFAULT_DEPTH) -> Enclosure:
        return _sum_enclosures(mu.antiderivative(x, depth) for mu in self.components)

    def measure(self, a, b, depth: int = DEFAULT_DEPTH) -> Enclosure:
        return _sum_enclosures(measure_of_interval(mu, a, b, depth) for mu in self.components)

    def depth_for_cdf(self, width) -> int:
        n = len(self.components)
        return max(mu.depth_for_cdf(Fraction(width) / n) for mu in self.components)

    def depth_for_antiderivative(self, width) -> int:
        n = len(self.components)
        return max(mu.depth_for_antiderivative(Fraction(width) / n) for mu in self.components)

    @cached_property
    def integral_01(self) -> Fraction:
        return sum((mu.integral_01 for mu in self.components), Fraction(0))

    def __str__(self):
        return " + ".join(str(mu) for mu in self.components)


def _sum_enclosures(items: Iterable[Enclosure]) -> Enclosure:
    lo, hi = Fraction(0), Fraction(0)
    for e in items:
        lo += e.lo
        hi += e.hi
    return Enclosure(lo, hi)


def sum_measures(measures: Sequence[IFSMeasure]) -> MeasureSum:
    """Order by decreasing dimension and group equal dimensions into classes."""
    if not measures:
        raise ValueError("empty measure list")
    classes: list[list[IFSMeasure]] = []
    for mu in measures:
        for cls in classes:
            if cls[0].dimension.same_value(mu.dimension):
                cls.append(mu)
                break
        else:
            classes.append([mu])
    # insertion sort with exact comparisons; few classes
    ordered: list[list[IFSMeasure]] = []
    for cls in classes:
        pos = 0
        while pos < len(ordered) and ordered[pos][0].dimension > cls[0].dimension:
            pos += 1
        ordered.insert(pos, cls)
    components, groups = [], []
    for cls in ordered:
        groups.append(tuple(range(len(components), len(components) + len(cls))))
        components.extend(cls)
    return MeasureSum(tuple(components), tuple(groups))


def as_sum(target: Union[IFSMeasure, MeasureSum]) -> MeasureSum:
    if isinstance(target, MeasureSum):
        return target
    return MeasureSum((target,), ((0,),))


def cdf_eval(mu: Union[IFSMeasure, MeasureSum], x, depth: int = DEFAULT_DEPTH) -> Enclosure:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return mu.cdf(Fraction(x), depth)


def measure_of_interval(mu: Union[IFSMeasure, MeasureSum], a, b, depth: int = DEFAULT_DEPTH) -> Enclosure:
    """Enclosure of the mass of ``[a, b]`` (equal to that of ``(a, b)``: no atoms)."""
    a, b = Fraction(a), Fraction(b)
    if a > b:
        raise ValueError("need a <= b")
    if a == b:
        return Enclosure.exact(0)
    if isinstance(mu, MeasureSum):
        return mu.measure(a, b, depth)
    return (mu.cdf(b, depth) - mu.cdf(a, depth)).clamp_below(0)


def cdf_integral(mu: Union[IFSMeasure, MeasureSum], a, b, depth: int = DEFAULT_DEPTH) -> Enclosure:
    """Enclosure of the integral of f over ``[a, b]``.

    Complete cylinders are integrated exactly through the self-similarity of
    the barycentre; the one unresolved cylinder at each end contributes its
    lower/upper Darboux sum.
    """
    a, b = Fraction(a), Fraction(b)
    if a > b:
        raise ValueError("need a <= b")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if a == b:
        return Enclosure.exact(0)
    return (mu.antiderivative(b, depth) - mu.antiderivative(a, depth)).clamp_below(0)


def cylinder_enumerate(mu: IFSMeasure, depth: int, budget: int | None = None) -> list[CylinderInterval]:
    """All depth-``depth`` cylinders, left to right."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    budget = node_budget() if budget is None else budget
    if mu.n_maps**depth > budget:
        raise BudgetExceeded(f"{mu.n_maps}**{depth} cylinders exceed node budget {budget}")
    level = [CylinderInterval((), Fraction(0), Fraction(1), Fraction(1))]
    for _ in range(depth):
        nxt = []
        for cyl in level:
            span = cyl.length
            for j, ((rho, t), p) in enumerate(zip(mu.maps, mu.weights)):
                left = cyl.left + span * t
                nxt.append(CylinderInterval(cyl.word + (j,), left, left + span * rho, cyl.mass * p))
        level = nxt
    return level


def cylinder_endpoints(mu: IFSMeasure, depth: int) -> list[Fraction]:
    """Sorted endpoints of all cylinders of depth at most ``depth``; all lie in the support."""
    points = set()
    for cyl in cylinder_enumerate(mu, depth):
        points.add(cyl.left)
        points.add(cyl.right)
    return sorted(points)


def ahlfors_constant_estimate(mu: IFSMeasure, depth: int = 8, radii_per_period: int = 64,
                              safety: Fraction = Fraction(2)) -> Fraction:
    """Empirical Ahlfors constant: worst two-sided ratio over one scale period, times ``safety``.

    The ratio ``mu(B(x, r)) / r**d`` is sampled at every depth-``depth``
    cylinder endpoint ``x`` and at radii ``min_rho ** (k / radii_per_period)``.
    The search itself runs in floating point; the result is rounded up to a
    multiple of 1/64.
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    d = float(mu.dimension)
    log_min = math.log(float(mu.min_ratio))
    radii = [math.exp(log_min * k / radii_per_period) for k in range(radii_per_period)]
    worst = 1.0
    for x in cylinder_endpoints(mu, depth):
        xf = float(x)
        for r in radii:
            mass = mu.cdf_float(xf + r) - mu.cdf_float(xf - r)
            ratio = mass / r**d
            worst = max(worst, ratio, 1 / ratio)
    c = Fraction(math.ceil(float(safety) * worst * 64), 64)
    return max(c, Fraction(65, 64))
