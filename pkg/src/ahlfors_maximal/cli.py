"""Command line front end.

Every command prints one report (JSON, or CSV for ``contact-scan``) to stdout
or to ``--out``.  Usage errors exit with status 2.  A verification that does
not hold, or a budget that runs out, exits with status 1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from .cantor import TernaryPoint, cantor_value, excluded_interval_cover, pattern_scan, toy_gap_construct
from .config import DEFAULT_DEPTH, DEFAULT_TOL, BudgetExceeded
from .covering import (besicovitch_select, density_check_L1, density_check_L2, gap_enumerate,
                       vitali_select, Gap)
from .exact import Enclosure, fmt, parse_rational, power_bracket
from .gaps import (delta0_estimate, detachment_check, gap_image_family, image_measure_bound,
                   inductive_claim1, inductive_claim2, split_smallest)
from .maximal import average, contact_classify, maximal_local, maximal_restricted, Detached
from .measures import (BUILTIN_MEASURES, IFSMeasure, MeasureSum, cdf_integral, cylinder_enumerate,
                       load_measure, measure_of_interval, sum_measures)

SUITES = ("measures", "covering", "detachment", "cantor", "induction")


class UsageError(Exception):
    pass


def resolve_measure(token: str) -> IFSMeasure:
    if token in BUILTIN_MEASURES:
        return BUILTIN_MEASURES[token]()
    path = Path(token)
    if not path.is_file():
        raise UsageError(f"measure {token!r} is neither a builtin ({', '.join(BUILTIN_MEASURES)}) nor a readable file")
    try:
        return load_measure(path)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"invalid measure file {token}: {exc}") from exc


def _measures(args, default=("cantor",)) -> list[IFSMeasure]:
    return [resolve_measure(t) for t in (args.measure or default)]


def _target(args, default=("cantor",)) -> MeasureSum:
    return sum_measures(_measures(args, default))


def _rat(value: Optional[str], name: str, default=None) -> Optional[Fraction]:
    if value is None:
        if default is None:
            raise UsageError(f"--{name} is required")
        return Fraction(default)
    try:
        return parse_rational(value)
    except ValueError as exc:
        raise UsageError(f"--{name}: {exc}") from exc


def _end(value: Optional[str], name: str) -> Optional[Fraction]:
    if value is None or value in ("inf", "-inf", "+inf"):
        return None
    return _rat(value, name)


def decimal12(q: Fraction) -> str:
    ctx = Context(prec=60, rounding=ROUND_HALF_EVEN)
    d = ctx.divide(Decimal(q.numerator), Decimal(q.denominator))
    return str(d.quantize(Decimal("1e-12"), context=ctx))


def parse_grid(text: str) -> list[Fraction]:
    """``start,stop,count``: the points ``start + i (stop - start) / count`` for ``i < count``."""
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError("--grid expects start,stop,count")
    start, stop = _rat(parts[0], "grid"), _rat(parts[1], "grid")
    try:
        count = int(parts[2])
    except ValueError as exc:
        raise UsageError("--grid count must be an integer") from exc
    if count < 1 or stop < start:
        raise UsageError("--grid needs count >= 1 and start <= stop")
    return [start + i * (stop - start) / count for i in range(count)]


def _check(name: str, holds: bool, **detail) -> dict:
    return {**detail, "name": name, "holds": bool(holds)}


# ---------------------------------------------------------------- suites


def _ahlfors_sample_ok(mu: IFSMeasure, x: Fraction, r: Fraction) -> bool:
    depth = mu.depth_for_cdf(r / 1024)
    mass = measure_of_interval(mu, x - r, x + r, depth)
    lo, hi = power_bracket(r, mu.dimension)
    return mass.hi <= mu.C * lo and mass.lo * mu.C >= hi


def suite_measures(args, rng: random.Random) -> list[dict]:
    out = []
    for mu in _measures(args):
        cyls = cylinder_enumerate(mu, min(args.depth, 10))
        running, exact_ok = Fraction(0), True
        for cyl in cyls:
            if mu.cdf(cyl.left, args.depth + 2) != Enclosure.exact(running):
                exact_ok = False
            running += cyl.mass
        out.append(_check(f"{mu.name}: cdf at cylinder ends equals cumulative mass", exact_ok, cylinders=len(cyls)))
        points = sorted(rng.choice(cyls).left + Fraction(rng.randint(0, 999), 1000) * cyls[0].length
                        for _ in range(200))
        vals = [mu.cdf(p, args.depth) for p in points]
        mono = all(a.lo <= b.hi for a, b in zip(vals, vals[1:]))
        out.append(_check(f"{mu.name}: cdf enclosures are monotone", mono, samples=len(points)))
        integ_ok = True
        for _ in range(20):
            a = Fraction(rng.randint(0, 1000), 1000)
            b = a + Fraction(rng.randint(1, 1000), 1000) * (1 - a)
            enc = cdf_integral(mu, a, b, args.depth)
            fine = cdf_integral(mu, a, b, args.depth + 4)
            if not (enc.lo <= fine.lo and fine.hi <= enc.hi or enc.lo <= fine.hi and fine.lo <= enc.hi):
                integ_ok = False
        out.append(_check(f"{mu.name}: integral enclosures nest under refinement", integ_ok))
        ends = [p for cyl in cylinder_enumerate(mu, 6) for p in (cyl.left, cyl.right)]
        bad = []
        for _ in range(200):
            x = rng.choice(ends)
            r = Fraction(rng.randint(1, 10**6), 10**6)
            if not _ahlfors_sample_ok(mu, x, r):
                bad.append([fmt(x), fmt(r)])
        out.append(_check(f"{mu.name}: Ahlfors bounds with C = {fmt(mu.C)}", not bad, failures=bad[:5], dimension=str(mu.dimension)))
    return out


def _random_cylinder_J(mu: IFSMeasure, rng: random.Random, max_depth: int = 5):
    k = rng.randint(1, max_depth)
    cyls = cylinder_enumerate(mu, k)
    i = rng.randrange(len(cyls))
    j = rng.randrange(i, min(len(cyls), i + 4))
    return cyls[i].left, cyls[j].right


def random_gap_family(rng: random.Random, n: int) -> list[Gap]:
    out = []
    for i in range(n):
        a = Fraction(rng.randint(0, 999), 1000)
        out.append(Gap(i, a, a + Fraction(rng.randint(1, 200), 1000)))
    return out


def multiplicity(intervals) -> int:
    events = sorted([(lo, 1) for lo, _ in intervals] + [(hi, -1) for _, hi in intervals], key=lambda e: (e[0], e[1]))
    best = cur = 0
    for _, step in events:
        cur += step
        best = max(best, cur)
    return best


def suite_covering(args, rng: random.Random, n_random: int = 10, n_families: int = 100) -> list[dict]:
    out = []
    for mu in _measures(args, ("cantor", "quarter-cantor")):
        Js = [(Fraction(0), Fraction(1))] + [_random_cylinder_J(mu, rng) for _ in range(n_random)]
        fails1 = [[fmt(a), fmt(b)] for a, b in Js if not density_check_L1(mu, (a, b), args.depth).holds]
        fails2 = [[fmt(a), fmt(b)] for a, b in Js if not density_check_L2(mu, (a, b), args.depth).holds]
        out.append(_check(f"{mu.name}: first density lemma", not fails1, intervals=len(Js), failures=fails1))
        out.append(_check(f"{mu.name}: second density lemma", not fails2, intervals=len(Js), failures=fails2))
    mult_ok = vit_ok = True
    for _ in range(n_families):
        fam = random_gap_family(rng, rng.randint(1, 40))
        by = {g.index: g for g in fam}
        sel = besicovitch_select(fam)
        chosen = [(by[i].b - by[i].r, by[i].b + by[i].r) for i in sel.selected]
        if multiplicity(chosen) > 2 or _union(chosen) != _union([(g.b - g.r, g.b + g.r) for g in fam]):
            mult_ok = False
        J = (Fraction(0), Fraction(2))
        v = vitali_select(fam, J)
        rt = v.truncated_radii
        kept = sorted((by[i].b - rt[i], by[i].b + rt[i]) for i in v.selected)
        if any(p[1] > q[0] for p, q in zip(kept, kept[1:])):
            vit_ok = False
    out.append(_check("besicovitch selection keeps the union with multiplicity <= 2", mult_ok, families=n_families))
    out.append(_check("vitali selection is pairwise disjoint", vit_ok, families=n_families))
    return out


def _union(intervals) -> list:
    merged = []
    for lo, hi in sorted(intervals):
        if merged and lo < merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return merged


def suite_detachment(args, rng: random.Random, generations: int = 6, levels: int = 3) -> list[dict]:
    out = []
    mu = _measures(args)[0]
    gaps = gap_enumerate(mu, (0, 1), generations)
    bad = [g.index for g in gaps if not detachment_check(mu, g, 1, 40).certified]
    out.append(_check(f"{mu.name}: every gap up to generation {generations} detaches", not bad,
                      gaps=len(gaps), failures=bad))
    fam = gap_image_family(mu, (0, 1), 1, generations)
    out.append(_check(f"{mu.name}: selected image intervals are disjoint and inside f(J)",
                      fam.disjoint and fam.contained and fam.all_certified, intervals=len(fam.intervals),
                      total_length=fam.total_length.to_json()))
    rep = image_measure_bound(mu, (0, 1), 1, levels)
    out.append(_check(f"{mu.name}: surviving image mass within (1 - K)^L for L <= {levels}", rep.holds,
                      surviving=[lv.surviving_mass.to_json() for lv in rep.levels]))
    return out


def suite_cantor(args, rng: random.Random) -> list[dict]:
    out = []
    cantor = BUILTIN_MEASURES["cantor"]()
    agree = True
    for _ in range(200):
        p = TernaryPoint.of([rng.randint(0, 1) for _ in range(rng.randint(0, 10))], rng.randint(0, 1))
        if cantor.cdf(p.value, len(p.prefix) + 2) != Enclosure.exact(cantor_value(p)):
            agree = False
    out.append(_check("digit formula agrees with the measure cdf", agree, samples=200))
    toy_ok = True
    for K in range(1, 6):
        for _ in range(4):
            g = toy_gap_construct([rng.randint(0, 1) for _ in range(K - 1)], K)
            res = maximal_local(cantor, g.x.value, Fraction(1, 3**K), Fraction(1, 10**6))
            if res.value.hi < g.image_gap[1]:
                toy_ok = False
    out.append(_check("toy gaps: centred average reaches h(x) + 2^(-K-2)", toy_ok))
    cover = excluded_interval_cover(12)
    out.append(_check("pattern cover at K_max = 12 matches brute-force count",
                      cover.exact_match and cover.disjoint and cover.prefix_match, **cover.to_json()))
    return out


def first_certified_cylinder(f: MeasureSum, depth: int = 4):
    mu, _, _ = split_smallest(f)
    for cyl in cylinder_enumerate(mu, depth):
        J = (cyl.left, cyl.right)
        cert = delta0_estimate(f, window=J, samples=0)
        if cert.delta0 >= J[1] - J[0]:
            return cyl, cert
    return None, None


def suite_induction(args, rng: random.Random, samples: int = 1000) -> list[dict]:
    out = []
    f = _target(args, ("cantor", "quarter-cantor"))
    if len(f.classes) < 2:
        raise UsageError("the induction suite needs measures of at least two dimensions")
    seed = rng.randrange(2**32)
    cert = delta0_estimate(f, samples=samples, seed=seed)
    out.append(_check("global delta0 re-verifies at random (x, r)", cert.verified, **cert.to_json()))
    eps = _rat(args.eps, "eps", Fraction(1, 100))
    c1 = inductive_claim1(f, (0, 1), eps)
    out.append(_check("first claim: equal split with small eta-mass", c1.certified, **c1.to_json()))
    cyl, local = first_certified_cylinder(f)
    if cyl is None:
        out.append(_check("second claim", False, reason="no depth-4 cylinder with m(J) <= delta0"))
        return out
    J = (cyl.left, cyl.right)
    local = delta0_estimate(f, window=J, samples=samples, seed=seed)
    c2 = inductive_claim2(f, J, J[1] - J[0], certificate=local)
    out.append(_check("second claim on a depth-4 cylinder", c2.holds and local.verified,
                      word=list(cyl.word), delta0=local.to_json(),
                      **{k: v for k, v in c2.to_json().items() if k != "holds"}))
    return out


SUITE_FUNCS: dict[str, Callable] = {
    "measures": suite_measures,
    "covering": suite_covering,
    "detachment": suite_detachment,
    "cantor": suite_cantor,
    "induction": suite_induction,
}


# ---------------------------------------------------------------- commands


def cmd_eval(args) -> tuple[dict, bool]:
    f = _target(args)
    x = _rat(args.x, "x")
    v = f.cdf(x, args.depth)
    return {"x": fmt(x), "value": v.to_json(), "exact": fmt(v.lo) if v.is_exact else None}, True


def cmd_integral(args) -> tuple[dict, bool]:
    f = _target(args)
    a, b = _rat(args.a, "a"), _rat(args.b, "b")
    if a > b:
        raise UsageError("need a <= b")
    total = Enclosure.exact(0)
    for mu in f.components:
        total = total + cdf_integral(mu, a, b, args.depth)
    out = {"a": fmt(a), "b": fmt(b), "integral": total.to_json()}
    if a < b:
        out["average"] = total.scale(1 / (b - a)).to_json()
    return out, True


def cmd_maximal(args) -> tuple[dict, bool]:
    f = _target(args)
    x = _rat(args.x, "x")
    tol = _rat(args.tol, "tol", DEFAULT_TOL)
    if args.delta is not None:
        res = maximal_local(f, x, _rat(args.delta, "delta"), tol, args.depth)
    elif args.a is not None or args.b is not None:
        res = maximal_restricted(f, x, (_end(args.a, "a"), _end(args.b, "b")), tol, args.depth)
    else:
        raise UsageError("maximal needs --delta or an interval via --a/--b")
    fx = f.cdf(x, max(args.depth, f.depth_for_cdf(tol / 16)))
    margin = res.value.lo - fx.hi
    verdict = Detached(margin).to_json() if margin > 0 else {"verdict": "undetermined"}
    return {"x": fmt(x), "f": fx.to_json(), **res.to_json(), **verdict}, True


def cmd_gaps(args) -> tuple[dict, bool]:
    f = _target(args)
    mu, _, _ = split_smallest(f)
    a, b = _rat(args.a, "a", 0), _rat(args.b, "b", 1)
    delta = _rat(args.delta, "delta", b - a)
    gaps = gap_enumerate(mu, (a, b), args.depth)
    fam = gap_image_family(f, (a, b), delta, args.depth)
    ok = fam.disjoint and fam.contained
    return {"J": [fmt(a), fmt(b)], "gaps": [g.to_json() for g in gaps], "image_family": fam.to_json(),
            "holds": ok}, ok


def cmd_image_bound(args) -> tuple[dict, bool]:
    f = _target(args)
    a, b = _rat(args.a, "a", 0), _rat(args.b, "b", 1)
    delta = _rat(args.delta, "delta", b - a)
    rep = image_measure_bound(f, (a, b), delta, args.levels if args.levels is not None else 3)
    return rep.to_json(), rep.holds


def cmd_cantor_pattern(args) -> tuple[dict, bool]:
    out, ok = {}, True
    if args.x is not None:
        out["scan"] = pattern_scan(_rat(args.x, "x"), args.depth).to_json()
    if args.levels is not None or args.x is None:
        cover = excluded_interval_cover(args.levels if args.levels is not None else 12)
        out["cover"] = cover.to_json()
        ok = cover.exact_match and cover.disjoint and cover.prefix_match
    return out, ok


def cmd_verify(args) -> tuple[dict, bool]:
    names = SUITES if args.suite == "all" else (args.suite,)
    rng = random.Random(args.seed)
    report = {"seed": args.seed, "depth": args.depth, "suites": []}
    ok = True
    for name in names:
        checks = SUITE_FUNCS[name](args, rng)
        holds = all(c["holds"] for c in checks)
        ok = ok and holds
        report["suites"].append({"suite": name, "holds": holds, "checks": checks})
    report["holds"] = ok
    return report, ok


def contact_rows(args) -> list[dict]:
    f = _target(args)
    if args.grid is None:
        raise UsageError("contact-scan needs --grid start,stop,count")
    tol = _rat(args.tol, "tol", DEFAULT_TOL)
    delta = _rat(args.delta, "delta", 1)
    rows = []
    for x in parse_grid(args.grid):
        fx = f.cdf(x, max(args.depth, f.depth_for_cdf(tol / 16)))
        res = maximal_local(f, x, delta, tol, args.depth)
        verdict = "detached" if res.value.lo > fx.hi else "undetermined"
        rows.append({"x": x, "f_lo": fx.lo, "f_hi": fx.hi, "M_lo": res.value.lo, "M_hi": res.value.hi,
                     "verdict": verdict})
    return rows


def cmd_contact_scan(args) -> str:
    rows = contact_rows(args)
    cols = ("x", "f_lo", "f_hi", "M_lo", "M_hi")
    if args.format == "json":
        data = [{**{c: fmt(r[c]) for c in cols}, "verdict": r["verdict"]} for r in rows]
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(cols) + ["verdict"] + [c + "_dec" for c in cols])
    for r in rows:
        w.writerow([fmt(r[c]) for c in cols] + [r["verdict"]] + [decimal12(r[c]) for c in cols])
    return buf.getvalue()


COMMANDS = {
    "eval": cmd_eval,
    "integral": cmd_integral,
    "maximal": cmd_maximal,
    "gaps": cmd_gaps,
    "image-bound": cmd_image_bound,
    "cantor-pattern": cmd_cantor_pattern,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ahlfors-maximal",
                                     description="Certified maximal-function computations for self-similar measures.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in list(COMMANDS) + ["contact-scan"]:
        p = sub.add_parser(name)
        p.add_argument("--measure", action="append",
                       help="builtin name (cantor, quarter-cantor) or JSON measure file; repeat for sums")
        p.add_argument("--x")
        p.add_argument("--a")
        p.add_argument("--b")
        p.add_argument("--delta")
        p.add_argument("--eps")
        p.add_argument("--tol")
        p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
        p.add_argument("--levels", type=int)
        p.add_argument("--grid", help="start,stop,count")
        p.add_argument("--format", choices=("csv", "json"), default="json" if name != "contact-scan" else "csv")
        p.add_argument("--out")
        p.add_argument("--seed", type=int, default=0)
        if name == "verify":
            p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.depth < 1:
        parser.error("--depth must be positive")
    if args.seed < 0 or args.seed >= 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    try:
        if args.command == "contact-scan":
            text, ok = cmd_contact_scan(args), True
        else:
            if args.format == "csv":
                raise UsageError("--format csv is only available for contact-scan")
            report, ok = COMMANDS[args.command](args)
            text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    except UsageError as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
