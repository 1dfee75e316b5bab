"""Independent reference computations used only by the tests."""

from fractions import Fraction


def staircase_digits(x: Fraction) -> Fraction:
    """Cantor function at a rational x by ternary digit expansion (terminates for triadic x)."""
    x = Fraction(x)
    if x <= 0:
        return Fraction(0)
    if x >= 1:
        return Fraction(1)
    value, weight = Fraction(0), Fraction(1, 2)
    seen = {}
    k = 0
    while x:
        if x in seen:
            # periodic expansion: value = head + tail sum of a geometric repetition
            start_k, start_value, start_weight = seen[x]
            block = value - start_value
            ratio = weight / start_weight
            return start_value + block / (1 - ratio)
        seen[x] = (k, value, weight)
        x *= 3
        digit = int(x)
        x -= digit
        if digit == 1:
            return value + weight
        value += weight * (digit // 2)
        weight /= 2
        k += 1
    return value


def staircase_float(x: float) -> float:
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    value, weight = 0.0, 0.5
    for _ in range(60):
        x *= 3
        if x < 1:
            pass
        elif x < 2:
            return value + weight
        else:
            value += weight
            x -= 2
        weight /= 2
    return value


def staircase_integral_float(x: float, level: int = 0) -> float:
    """Integral of the Cantor function from 0 to x through its self-similarity."""
    if x <= 0:
        return 0.0
    if x >= 1:
        return 0.5 + (x - 1)
    if level > 40:
        return x * staircase_float(x) / 2
    if x <= 1 / 3:
        return staircase_integral_float(3 * x, level + 1) / 6
    if x <= 2 / 3:
        return 1 / 12 + (x - 1 / 3) / 2
    return 1 / 12 + 1 / 6 + (x - 2 / 3) / 2 + staircase_integral_float(3 * x - 2, level + 1) / 6


def staircase_average_float(x: float, r: float) -> float:
    return (staircase_integral_float(x + r) - staircase_integral_float(x - r)) / (2 * r)


def darboux_bounds(mu, a: Fraction, b: Fraction, depth: int) -> tuple[Fraction, Fraction]:
    """Brute-force lower and upper sums of the cdf over [a, b] on the depth-n cylinder partition."""
    from ahlfors_maximal.measures import cylinder_enumerate

    cyls = cylinder_enumerate(mu, depth)
    knots = [Fraction(0)]
    values = [Fraction(0)]
    acc = Fraction(0)
    for c in cyls:
        knots += [c.left, c.right]
        values += [acc, acc + c.mass]
        acc += c.mass
    knots.append(Fraction(1))
    values.append(Fraction(1))
    lo = hi = Fraction(0)
    # pieces (knots[i], knots[i+1]) on which the cdf lies between values[i] and values[i+1]
    pts = [min(max(t, a), b) for t in knots]
    for i in range(len(knots) - 1):
        left, right = pts[i], pts[i + 1]
        if right <= left:
            continue
        lo += (right - left) * values[i]
        hi += (right - left) * values[i + 1]
    # parts of [a, b] outside [0, 1]
    if b > 1:
        tail = b - max(a, Fraction(1))
        lo += tail
        hi += tail
    return lo, hi


def brute_cdf_at_endpoint(mu, x: Fraction, depth: int) -> Fraction | None:
    """Exact cdf at x when x is an endpoint of a depth-n cylinder, from cumulative masses."""
    from ahlfors_maximal.measures import cylinder_enumerate

    acc = Fraction(0)
    for c in cylinder_enumerate(mu, depth):
        if c.left == x:
            return acc
        acc += c.mass
        if c.right == x:
            return acc
    return None


def max_overlap(intervals) -> int:
    """Largest number of open intervals sharing a point, by checking every elementary segment."""
    pts = sorted({p for iv in intervals for p in iv})
    best = 0
    for u, v in zip(pts, pts[1:]):
        m = (u + v) / 2
        best = max(best, sum(1 for lo, hi in intervals if lo < m < hi))
    return best


def covered(intervals, pts) -> list[bool]:
    return [any(lo < p < hi for lo, hi in intervals) for p in pts]
