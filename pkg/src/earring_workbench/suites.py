"""Verification suites: named checks of the workbench's identities, grouped per module."""

from __future__ import annotations

import logging
import random
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import TYPE_CHECKING, Any

from pydantic import BaseModel, computed_field

from earring_workbench import chains, currents, earring, freegroup, seqorder
from earring_workbench.certified import format_rational
from earring_workbench.errors import DomainError, GenericityError, WorkbenchError
from earring_workbench.graphs import DistanceFunction, GraphMap, MetricGraph
from earring_workbench.homology import (
    SimplicialComplex,
    SimplicialComplexMatrixSet,
    homology,
    rational_betti,
)

if TYPE_CHECKING:
    from earring_workbench.workbench import Workbench

logger = logging.getLogger(__name__)

SUITES = ("seqorder", "earring", "freegroup", "chains", "currents")


class CheckResult(BaseModel):
    check_id: str
    statement: str
    parameters: dict[str, Any]
    passed: bool
    discrepancy: str = "0"
    detail: str = ""


class SuiteReport(BaseModel):
    suite: str
    checks: list[CheckResult]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[str]:
        return [check.check_id for check in self.checks if not check.passed]


@dataclass
class Outcome:
    passed: bool
    parameters: dict[str, Any] = field(default_factory=dict)
    discrepancy: Fraction | int = 0
    detail: str = ""


CheckFn = Callable[["Workbench"], Outcome]


@dataclass(frozen=True)
class Check:
    check_id: str
    suite: str
    statement: str
    run: CheckFn


_REGISTRY: dict[str, Check] = {}


def register_check(suite: str, check_id: str, statement: str) -> Callable[[CheckFn], CheckFn]:
    def decorator(fn: CheckFn) -> CheckFn:
        if check_id in _REGISTRY:
            raise ValueError(f"duplicate check id {check_id!r}")
        _REGISTRY[check_id] = Check(check_id, suite, statement, fn)
        return fn

    return decorator


def checks_for(suite: str) -> list[Check]:
    if suite == "all":
        return sorted(_REGISTRY.values(), key=lambda c: c.check_id)
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    return sorted((c for c in _REGISTRY.values() if c.suite == suite), key=lambda c: c.check_id)


def _execute(check: Check, wb: Workbench) -> CheckResult:
    try:
        outcome = check.run(wb)
    except (WorkbenchError, AssertionError) as exc:
        logger.warning("check %s raised %s", check.check_id, exc)
        return CheckResult(check_id=check.check_id, statement=check.statement, parameters={},
                           passed=False, detail=f"{type(exc).__name__}: {exc}")
    logger.info("check %s: %s", check.check_id, "pass" if outcome.passed else "FAIL")
    return CheckResult(
        check_id=check.check_id,
        statement=check.statement,
        parameters=outcome.parameters,
        passed=outcome.passed,
        discrepancy=format_rational(Fraction(outcome.discrepancy)),
        detail=outcome.detail,
    )


def run_suite(name: str, wb: Workbench) -> SuiteReport:
    results = [_execute(check, wb) for check in checks_for(name)]
    return SuiteReport(suite=name, checks=sorted(results, key=lambda r: r.check_id))


def _rng(wb: Workbench, salt: str) -> random.Random:
    return random.Random(f"{wb.settings.random_seed}:{salt}")


def _bounded_upto(n: int) -> list[seqorder.Seq]:
    return [s for k in range(1, n + 1) for s in seqorder.enumerate_b(k)]


# ---------------------------------------------------------------------------
# seqorder
# ---------------------------------------------------------------------------


@register_check("seqorder", "seqorder.cardinality", "|B_n| = n! for n = 1..7")
def _cardinality(wb: Workbench) -> Outcome:
    top = min(7, wb.settings.max_enumeration_depth)
    sizes = {n: len(wb.enumerate_b(n)) for n in range(1, top + 1)}
    return Outcome(all(size == factorial(n) for n, size in sizes.items()), {"n_max": top})


@register_check("seqorder", "seqorder.total_order",
                "compare is a total order on B_1..B_6, transitive on B_4")
def _total_order(wb: Workbench) -> Outcome:
    top = min(6, wb.settings.max_enumeration_depth)
    ok = True
    for n in range(1, top + 1):
        elements = seqorder.enumerate_b(n)
        for s in elements:
            for t in elements:
                forward, backward = seqorder.compare(s, t), seqorder.compare(t, s)
                ok = ok and forward.value == -backward.value
                ok = ok and (forward is seqorder.Ordering.EQUAL) == (s == t)
    b4 = seqorder.enumerate_b(4)
    less = {(s, t) for s in b4 for t in b4 if s < t}
    ok = ok and all((s, u) in less for (s, t) in less for u in b4 if (t, u) in less)
    return Outcome(ok, {"n_max": top})


@register_check("seqorder", "seqorder.tau_monotone", "s < t implies tau(s) < tau(t) on B_1..B_6")
def _tau_monotone(wb: Workbench) -> Outcome:
    ordered = sorted(_bounded_upto(min(6, wb.settings.max_enumeration_depth)))
    values = [seqorder.tau(s) for s in ordered]
    ok = all(a < b for a, b in zip(values, values[1:]))
    ok = ok and all(0 <= v <= 1 for v in values)
    return Outcome(ok, {"elements": len(ordered)})


@register_check("seqorder", "seqorder.tau_oracle",
                "tau(s) lies in the truncated-series interval for s in B_1..B_5")
def _tau_oracle(wb: Workbench) -> Outcome:
    depth = wb.settings.oracle_depth
    worst = Fraction(0)
    ok = True
    for s in _bounded_upto(5):
        value = seqorder.tau(s)
        lo, hi = seqorder.tau_oracle(s, max(depth, len(s)))
        ok = ok and lo <= value <= hi
        worst = max(worst, value - lo)
    return Outcome(ok, {"depth": depth}, worst)


@register_check("seqorder", "seqorder.append_one", "tau(s + <1>) - tau(s) = lambda(len s)")
def _append_one(wb: Workbench) -> Outcome:
    ok = all(
        seqorder.tau(s.append(1)) - seqorder.tau(s) == seqorder.lambda_(len(s))
        for s in _bounded_upto(5)
    )
    return Outcome(ok, {"n_max": 5})


@register_check("seqorder", "seqorder.next_sibling",
                "tau(s + <m+1>) - tau(s + <m>) = 2 lambda(len s + 1)")
def _next_sibling(wb: Workbench) -> Outcome:
    ok = all(
        seqorder.tau(s.append(m + 1)) - seqorder.tau(s.append(m))
        == 2 * seqorder.lambda_(len(s) + 1)
        for s in _bounded_upto(4)
        for m in range(1, len(s) + 1)
    )
    return Outcome(ok, {"n_max": 4})


@register_check("seqorder", "seqorder.translation",
                "tau(s + u) - tau(s' + u) = tau(s) - tau(s') for s, s' in B_3, len u <= 2")
def _translation(wb: Workbench) -> Outcome:
    b3 = seqorder.enumerate_b(3)
    suffixes = [seqorder.Seq.of(m) for m in range(1, 5)] + [
        seqorder.Seq.of(m1, m2) for m1, m2 in product(range(1, 5), range(1, 6))
    ]
    ok = True
    count = 0
    for s, s2 in product(b3, b3):
        for u in suffixes:
            left, right = s + u, s2 + u
            if not (left.is_bounded and right.is_bounded):
                continue
            count += 1
            ok = ok and (seqorder.tau(left) - seqorder.tau(right)
                         == seqorder.tau(s) - seqorder.tau(s2))
    return Outcome(ok, {"cases": count})


@register_check("seqorder", "seqorder.difference_formula",
                "the truncated sum over s <= t < s' brackets tau(s') - tau(s) on B_1..B_4")
def _difference_formula(wb: Workbench) -> Outcome:
    depth = wb.settings.oracle_depth
    elements = sorted(_bounded_upto(4))
    ok = True
    for i, s in enumerate(elements):
        for s2 in elements[i:]:
            lo, hi = seqorder.tau_difference_oracle(s, s2, depth)
            ok = ok and lo <= seqorder.tau(s2) - seqorder.tau(s) <= hi
    return Outcome(ok, {"depth": depth})


@register_check("seqorder", "seqorder.interval_disjointness",
                "the intervals of s < s' in B_1..B_6 meet at most in tau(s')")
def _interval_disjointness(wb: Workbench) -> Outcome:
    top = min(6, wb.settings.max_enumeration_depth)
    elements = sorted(_bounded_upto(top))
    starts = [seqorder.tau(s) for s in elements]
    ends = [start + seqorder.lambda_(len(s)) for start, s in zip(starts, elements)]
    ok = all(end <= start for i, end in enumerate(ends) for start in starts[i + 1:])
    return Outcome(ok, {"n_max": top, "pairs": len(elements) * (len(elements) - 1) // 2})


@register_check("seqorder", "seqorder.density",
                "the largest grid gap decreases with depth and is at most 1/50 at depth 8")
def _density(wb: Workbench) -> Outcome:
    grid = wb.settings.density_grid
    gaps = [wb.density(depth, grid).max_gap for depth in range(1, 9)]
    ok = all(a >= b for a, b in zip(gaps, gaps[1:])) and gaps[-1] <= Fraction(1, 50)
    ok = ok and all(isinstance(seqorder.locate(Fraction(1), d), seqorder.Gap) for d in range(1, 9))
    return Outcome(ok, {"grid": grid, "depth_max": 8}, gaps[-1])


# ---------------------------------------------------------------------------
# earring
# ---------------------------------------------------------------------------


@register_check("earring", "earring.choose_n",
                "n_1, n_2, n_3 = 51, 202, 1207 and n_{k+1} > n_k + 1")
def _choose_n(wb: Workbench) -> Outcome:
    values = [earring.choose_n(k, wb.pi) for k in range(1, 6)]
    ok = values[:3] == [51, 202, 1207] and all(b > a + 1 for a, b in zip(values, values[1:]))
    return Outcome(ok, {"values": values})


@register_check("earring", "earring.commutator_speed",
                "c_k is a loop at the origin with speed <= 1")
def _commutator_speed(wb: Workbench) -> Outcome:
    ok = True
    worst = Fraction(0)
    for k in range(1, 4):
        loop = earring.commutator_loop(k, wb.pi)
        speed = earring.max_speed(loop, wb.pi)
        worst = max(worst, speed.hi)
        ok = ok and speed.certainly_le(1)
        ok = ok and loop.start_point.is_origin and loop.end_point.is_origin
        ok = ok and loop.total_length == seqorder.lambda_(k)
    return Outcome(ok, {"k_max": 3}, worst)


@register_check("earring", "earring.sigma_recursion",
                "sigma_{n-1} = c_{n-1} . sigma_n ... sigma_n (n copies) at the configured number "
                "of resolved times")
def _sigma_recursion(wb: Workbench) -> Outcome:
    s = wb.settings
    reports = [
        earring.verify_recursion(n, s.recursion_samples, s.recursion_depth, s.max_recursion_n,
                                 wb.pi)
        for n in range(2, s.max_recursion_n + 1)
    ]
    ok = all(r.passed and r.resolved >= s.recursion_samples for r in reports)
    return Outcome(
        ok,
        {"n_max": s.max_recursion_n, "samples": s.recursion_samples,
         "resolved": [r.resolved for r in reports]},
        max(r.max_discrepancy for r in reports),
    )


@register_check("earring", "earring.sigma_lipschitz",
                "sigma_1 is 1-Lipschitz on random pairs and on close pairs across block boundaries")
def _sigma_lipschitz(wb: Workbench) -> Outcome:
    s = wb.settings
    report = earring.lipschitz_report(s.lipschitz_depth, s.lipschitz_pairs, s.random_seed, wb.pi)
    boundary = report.parameters["boundary_pairs"]
    return Outcome(report.passed and (s.lipschitz_depth < 2 or boundary > 0),
                   {"pairs": report.samples, "boundary_pairs": boundary,
                    "depth": s.lipschitz_depth},
                   report.max_discrepancy)


@register_check("earring", "earring.gap_soundness",
                "a Gap bound dominates the distance of the resolved value to the origin")
def _gap_soundness(wb: Workbench) -> Outcome:
    rng = _rng(wb, "gap")
    shallow = earring.SigmaMap(1, 3, wb.pi)
    deep = earring.SigmaMap(1, wb.settings.recursion_depth, wb.pi)
    ok = True
    checked = 0
    for _ in range(wb.settings.chain_samples * 10):
        t = Fraction(rng.randrange(10**6 + 1), 10**6)
        coarse = shallow.evaluate(t)
        if coarse.error_bound == 0:
            continue
        fine = deep.evaluate(t)
        if fine.error_bound:
            continue
        checked += 1
        gap = earring.distance(fine.point, earring.ORIGIN, wb.pi)
        ok = ok and gap.certainly_le(coarse.error_bound)
    return Outcome(ok and checked > 0, {"checked": checked})


@register_check("earring", "earring.metric_axioms",
                "the length metric is symmetric and satisfies the triangle inequality")
def _metric_axioms(wb: Workbench) -> Outcome:
    rng = _rng(wb, "metric")

    def point() -> earring.EarringPoint:
        if rng.random() < 0.15:
            return earring.ORIGIN
        return earring.EarringPoint.on(rng.randint(1, 5), Fraction(rng.randint(1, 23), 24))

    ok = True
    for _ in range(wb.settings.chain_samples * 5):
        x, y, z = point(), point(), point()
        dxy = earring.distance_coefficient(x, y)
        ok = ok and dxy == earring.distance_coefficient(y, x)
        ok = ok and dxy <= earring.distance_coefficient(x, z) + earring.distance_coefficient(z, y)
        ok = ok and (dxy == 0) == (x == y)
    return Outcome(ok, {"triples": wb.settings.chain_samples * 5})


@register_check("earring", "earring.sigma_endpoints", "every sigma_n starts and ends at the origin")
def _sigma_endpoints(wb: Workbench) -> Outcome:
    ok = True
    for n in range(1, wb.settings.max_recursion_n + 1):
        sigma_n = earring.SigmaMap(n, wb.settings.recursion_depth, wb.pi)
        for t in (Fraction(0), sigma_n.duration):
            value = sigma_n.evaluate(t)
            ok = ok and value.point.is_origin
    return Outcome(ok, {"n_max": wb.settings.max_recursion_n})


@register_check("earring", "earring.word_projection",
                "project_word(sigma_1, k) = [a,b]^(k!) with zero abelianization")
def _word_projection(wb: Workbench) -> Outcome:
    reports = [wb.project_word(k) for k in range(1, wb.settings.max_word_k + 1)]
    ok = all(r.equals_power and r.abelianization == "(0,0)" for r in reports)
    return Outcome(ok, {"k_max": wb.settings.max_word_k})


@register_check("earring", "earring.path_currents",
                "commutator loops integrate to the zero current, phi_n to the unit loop")
def _path_currents(wb: Workbench) -> Outcome:
    n = earring.choose_n(1, wb.pi)
    big = MetricGraph.hawaiian(n + 1)
    c1 = currents.chain_to_current(currents.earring_path_chain(earring.commutator_loop(1, wb.pi),
                                                               big))
    small = MetricGraph.hawaiian(3)
    loops = earring.concat(earring.loop_path(1), earring.concat(
        earring.loop_path(2), earring.concat(earring.reverse(earring.loop_path(1)),
                                             earring.reverse(earring.loop_path(2)))))
    commutator = currents.chain_to_current(currents.earring_path_chain(loops, small))
    single = currents.chain_to_current(currents.earring_path_chain(earring.loop_path(2), small))
    ok = not c1 and not commutator
    ok = ok and isinstance(single, currents.GraphCurrent1)
    ok = ok and currents.winding_vector(single).entries == ((2, 1),)  # type: ignore[arg-type]
    return Outcome(ok, {"circles": n + 1})


# ---------------------------------------------------------------------------
# freegroup
# ---------------------------------------------------------------------------


def _random_letters(rng: random.Random, length: int, generators: int = 2) -> list[tuple[int, int]]:
    return [(rng.randint(1, generators), rng.choice((1, -1))) for _ in range(length)]


def _naive_reduce(letters: list[tuple[int, int]]) -> list[tuple[int, int]]:
    letters = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            (g, e), (h, f) = letters[i], letters[i + 1]
            if g == h and e == -f:
                del letters[i:i + 2]
                changed = True
                break
    return letters


@register_check("freegroup", "freegroup.reduce_retraction",
                "reduce is idempotent, never lengthens and agrees with naive cancellation")
def _reduce_retraction(wb: Workbench) -> Outcome:
    rng = _rng(wb, "reduce")
    samples = wb.settings.chain_samples * 20
    ok = True
    for _ in range(samples):
        letters = _random_letters(rng, rng.randint(0, 16))
        word = freegroup.reduce(letters)
        ok = ok and freegroup.reduce(word.letters) == word and len(word) <= len(letters)
        ok = ok and list(word.letters) == _naive_reduce(letters)
    return Outcome(ok, {"words": samples})


@register_check("freegroup", "freegroup.abelianize_homomorphism",
                "abelianize(uv) = abelianize(u) + abelianize(v)")
def _abelianize_homomorphism(wb: Workbench) -> Outcome:
    rng = _rng(wb, "abelian")
    ok = True
    for _ in range(wb.settings.chain_samples * 5):
        u = freegroup.reduce(_random_letters(rng, rng.randint(0, 10), 3))
        v = freegroup.reduce(_random_letters(rng, rng.randint(0, 10), 3))
        ok = ok and (freegroup.abelianize(u * v, 3)
                     == freegroup.abelianize(u, 3) + freegroup.abelianize(v, 3))
    return Outcome(ok, {"pairs": wb.settings.chain_samples * 5})


@register_check("freegroup", "freegroup.commutator_search",
                "random commutators are found, every witness multiplies out, [a,b]^2 is rejected")
def _commutator_search(wb: Workbench) -> Outcome:
    rng = _rng(wb, "wicks")
    ok = True
    for _ in range(wb.settings.chain_samples):
        x = freegroup.reduce(_random_letters(rng, rng.randint(0, 3)))
        y = freegroup.reduce(_random_letters(rng, rng.randint(0, 3)))
        search = freegroup.is_single_commutator(freegroup.commutator(x, y))
        ok = ok and search.is_commutator and search.witness is not None
        if search.witness is not None:
            ok = ok and freegroup.commutator(search.witness.x, search.witness.y) == search.word
            ok = ok and freegroup.abelianize(search.word).is_zero
    a, b = freegroup.Word.generator(1), freegroup.Word.generator(2)
    square = freegroup.commutator_power(a, b, 2)
    ok = ok and not freegroup.is_single_commutator(square).is_commutator
    return Outcome(ok, {"samples": wb.settings.chain_samples})


@register_check("freegroup", "freegroup.projection_not_commutator",
                "project_word(sigma_1, 2) = [a,b]^2 is not a single commutator")
def _projection_not_commutator(wb: Workbench) -> Outcome:
    first, second = wb.project_word(1), wb.project_word(2)
    ok = first.is_single_commutator is True and second.is_single_commutator is False
    ok = ok and first.equals_power and second.equals_power
    return Outcome(ok, {"k": [1, 2]})


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------


def _random_chain(rng: random.Random, dimension: int, ambient: int = 2,
                  simplices: int = 2) -> chains.Chain:
    def point() -> chains.Point:
        return tuple(Fraction(rng.randint(-8, 8), 4) for _ in range(ambient))

    return chains.Chain(
        ((chains.AffineSimplex(tuple(point() for _ in range(dimension + 1))),
          rng.choice((-2, -1, 1, 2, 3))) for _ in range(simplices)),
        dimension,
    )


@register_check("chains", "chains.boundary_squared", "b(b(c)) = 0 for dimensions 1..3")
def _boundary_squared(wb: Workbench) -> Outcome:
    rng = _rng(wb, "bb")
    ok = all(
        not chains.boundary(chains.boundary(_random_chain(rng, k, 3)))
        for _ in range(wb.settings.chain_samples)
        for k in (1, 2, 3)
    )
    return Outcome(ok, {"samples": wb.settings.chain_samples})


@register_check("chains", "chains.subdivision_commutes", "b(sd^m c) = sd^m(b c) for m = 1, 2")
def _subdivision_commutes(wb: Workbench) -> Outcome:
    rng = _rng(wb, "sd")
    ok = True
    for _ in range(wb.settings.chain_samples):
        k, m = rng.choice((1, 2)), rng.choice((1, 2))
        c = _random_chain(rng, k)
        lhs = chains.boundary(chains.subdivide(c, m))
        ok = ok and lhs == chains.subdivide(chains.boundary(c), m)
    return Outcome(ok, {"samples": wb.settings.chain_samples})


@register_check("chains", "chains.homotopy_identity", "b D_m(c) + D_m(b c) = sd^m(c) - c")
def _homotopy_identity(wb: Workbench) -> Outcome:
    rng = _rng(wb, "dm")
    ok = True
    for _ in range(wb.settings.chain_samples):
        k, m = rng.choice((0, 1, 2)), rng.choice((0, 1, 2))
        c = _random_chain(rng, k, simplices=1 if k == 2 and m == 2 else 2)
        lhs = chains.boundary(chains.subdiv_homotopy(c, m)) + chains.subdiv_homotopy(
            chains.boundary(c), m)
        ok = ok and lhs == chains.subdivide(c, m) - c
    return Outcome(ok, {"samples": wb.settings.chain_samples})


@register_check("chains", "chains.prism_identity", "b P(c) + P(b c) = j_# c - i_# c")
def _prism_identity(wb: Workbench) -> Outcome:
    rng = _rng(wb, "prism")
    ok = True
    for _ in range(wb.settings.chain_samples):
        k = rng.choice((0, 1, 2))
        c = _random_chain(rng, k)
        top = chains.push_forward(chains.AffineMap.time_inclusion(1, 2), c)
        bottom = chains.push_forward(chains.AffineMap.time_inclusion(0, 2), c)
        lhs = chains.boundary(chains.prism(c)) + chains.prism(chains.boundary(c))
        ok = ok and lhs == top - bottom
    return Outcome(ok, {"samples": wb.settings.chain_samples})


@register_check("chains", "chains.cone_fill", "b(cone_fill(c)) = c within diameter factor 2 gamma")
def _cone_fill(wb: Workbench) -> Outcome:
    rng = _rng(wb, "cone")
    ok = True
    for _ in range(wb.settings.chain_samples):
        cycle = chains.boundary(_random_chain(rng, rng.choice((1, 2))))
        if not cycle:
            continue
        filling = chains.cone_fill(cycle)
        ok = ok and chains.boundary(filling.chain) == cycle and filling.within_bound
    return Outcome(ok, {"samples": wb.settings.chain_samples})


@register_check("chains", "chains.homotopy_naturality", "f_# D_m(c) = D_m(f_# c) for affine f")
def _homotopy_naturality(wb: Workbench) -> Outcome:
    rng = _rng(wb, "natural")
    ok = True
    for _ in range(wb.settings.chain_samples):
        f = chains.AffineMap.create(
            [[rng.randint(-3, 3) for _ in range(2)] for _ in range(3)],
            [Fraction(rng.randint(-4, 4), 2) for _ in range(3)],
        )
        c = _random_chain(rng, 1)
        ok = ok and (chains.push_forward(f, chains.subdiv_homotopy(c, 2))
                     == chains.subdiv_homotopy(chains.push_forward(f, c), 2))
    return Outcome(ok, {"samples": wb.settings.chain_samples, "m": 2})


@register_check("chains", "chains.diameter_decay",
                "simplices of sd^m(c) shrink by (k/(k+1))^m in diameter")
def _diameter_decay(wb: Workbench) -> Outcome:
    rng = _rng(wb, "decay")
    ok = True
    for _ in range(wb.settings.chain_samples):
        k, m = rng.choice((1, 2)), rng.choice((1, 2))
        c = _random_chain(rng, k, simplices=1)
        factor = Fraction(k, k + 1) ** (2 * m)
        ok = ok and (chains.subdivide(c, m).max_simplex_diameter_sq()
                     <= factor * c.max_simplex_diameter_sq())
    return Outcome(ok, {"samples": wb.settings.chain_samples})


@register_check("chains", "chains.part_near",
                "the kept part of sd^m(c) meets U and everything dropped misses U")
def _part_near(wb: Workbench) -> Outcome:
    segment = chains.Chain.affine([[0], [1]])
    region = chains.HalfSpace((Fraction(1),), Fraction(1, 3))
    part, m = chains.part_near(segment, region, Fraction(1, 4))
    rest = chains.subdivide(segment, m) - part
    ok = m == 3 and len(part) == 3
    ok = ok and all(region.meets(s.image_vertices()) for s in part.simplices())
    ok = ok and not any(region.meets(s.image_vertices()) for s in rest.simplices())
    ok = ok and part.max_simplex_diameter_sq() < Fraction(1, 16)
    everything, _ = chains.part_near(segment, chains.Everything(), Fraction(1, 4))
    nothing, _ = chains.part_near(segment, chains.Nowhere(), Fraction(1, 4))
    ok = ok and everything == chains.subdivide(segment, 3) and not nothing
    return Outcome(ok, {"epsilon": "1/4", "m": m})


HomologyFixture = tuple[SimplicialComplexMatrixSet, list[int], list[list[int]]]

HOMOLOGY_FIXTURES: dict[str, HomologyFixture] = {}


def _homology_fixtures() -> dict[str, HomologyFixture]:
    if not HOMOLOGY_FIXTURES:
        triangle = [[0, 1], [1, 2], [0, 2]]
        wedge = triangle + [[0, 3], [3, 4], [0, 4]]
        HOMOLOGY_FIXTURES.update({
            "point": (SimplicialComplex.from_facets([[0]]).boundary_matrices(), [1], [[]]),
            "circle": (SimplicialComplex.from_facets(triangle).boundary_matrices(),
                       [1, 1], [[], []]),
            "wedge": (SimplicialComplex.from_facets(wedge).boundary_matrices(),
                      [1, 2], [[], []]),
            "disk": (SimplicialComplex.from_facets([[0, 1, 2]]).boundary_matrices(),
                     [1, 0, 0], [[], [], []]),
            "torsion": (SimplicialComplexMatrixSet.create([1, 1, 1], [[[0]], [[2]]]),
                        [1, 0, 0], [[], [2], []]),
        })
    return HOMOLOGY_FIXTURES


@register_check("chains", "chains.homology", "Smith normal form homology on the fixture complexes")
def _homology(wb: Workbench) -> Outcome:
    ok = True
    for complex_, betti, torsion in _homology_fixtures().values():
        groups = homology(complex_)
        ok = ok and [g.betti for g in groups] == betti
        ok = ok and [list(g.torsion) for g in groups] == torsion
        ok = ok and rational_betti(complex_) == betti
    return Outcome(ok, {"fixtures": sorted(_homology_fixtures())})


@register_check("chains", "chains.contraction_estimate",
                "the straight-line contraction satisfies the strong gamma-Lipschitz estimate")
def _contraction_estimate(wb: Workbench) -> Outcome:
    rng = _rng(wb, "contraction")
    ok = True
    for _ in range(wb.settings.chain_samples):
        c = _random_chain(rng, 1, simplices=3)
        phi = chains.StraightLineContraction.for_chain(c, wb.settings.contraction_gamma)
        vertices = c.image_vertices()
        pairs = [
            (Fraction(rng.randint(0, 8), 8), rng.choice(vertices),
             Fraction(rng.randint(0, 8), 8), rng.choice(vertices))
            for _ in range(10)
        ]
        ok = ok and phi.check_estimate(pairs, chains.diameter_sq(vertices))
    return Outcome(ok, {"samples": wb.settings.chain_samples})


# ---------------------------------------------------------------------------
# currents
# ---------------------------------------------------------------------------


def _test_graphs(wb: Workbench) -> list[MetricGraph]:
    tree = MetricGraph.from_edges([
        ("a", "r", "x", 1), ("b", "x", "y", Fraction(1, 2)), ("c", "x", "z", Fraction(3, 4)),
    ])
    return [MetricGraph.circle(2), tree, MetricGraph.hawaiian(min(3, wb.settings.max_circle))]


@register_check("currents", "currents.slice_identity",
                "slices satisfy the defining identity and live on the level set")
def _slice_identity(wb: Workbench) -> Outcome:
    rng = _rng(wb, "slice")
    graph = wb.earring_graph
    ok = True
    checked = attempts = 0
    while checked < 20 and attempts < 200:
        attempts += 1
        t = currents.random_current(graph, rng)
        d = DistanceFunction(graph, currents.random_point(graph, rng))
        r = Fraction(rng.randint(1, 95), 96)
        try:
            sliced = currents.slice_current(t, d, r)
        except GenericityError:
            continue
        checked += 1
        ok = ok and all(d(p) == r for p in sliced.support)
        ok = ok and currents.slice_to_boundary_holds(t, t.boundary(), d, r)
    return Outcome(ok and checked > 0, {"samples": checked})


@register_check("currents", "currents.retraction_inclusion",
                "(i_n p_n)_# T = T restricted to L_n, and push-forward commutes with boundary")
def _retraction_inclusion(wb: Workbench) -> Outcome:
    rng = _rng(wb, "pn")
    graph = wb.earring_graph
    ok = True
    for _ in range(wb.settings.current_samples):
        t = currents.random_current(graph, rng, arcs=5)
        for n in range(1, wb.settings.max_circle + 1):
            p_n, i_n = GraphMap.retraction(graph, n), GraphMap.inclusion(n, graph)
            image = t.push_forward(p_n)
            ok = ok and image.push_forward(i_n) == t.restrict(currents.edges_only(graph, [f"L{n}"]))
            ok = ok and image.boundary() == t.boundary().push_forward(p_n)
    return Outcome(ok, {"samples": wb.settings.current_samples})


@register_check("currents", "currents.mass_additivity",
                "mass(T) equals the sum of the masses of its restrictions to the circles")
def _mass_additivity(wb: Workbench) -> Outcome:
    rng = _rng(wb, "mass")
    graph = wb.earring_graph
    ok = True
    for _ in range(wb.settings.current_samples):
        t = currents.random_current(graph, rng, arcs=5)
        parts = sum(
            (t.restrict(currents.edges_only(graph, [key])).mass_coefficient()
             for key in graph.edges),
            Fraction(0),
        )
        ok = ok and parts == t.mass_coefficient()
    return Outcome(ok, {"samples": wb.settings.current_samples})


@register_check("currents", "currents.stokes", "[bc] = d[c] and [sd^3 c] = [c] for PL chains")
def _stokes(wb: Workbench) -> Outcome:
    rng = _rng(wb, "stokes")
    ok = True
    for graph in _test_graphs(wb):
        for _ in range(wb.settings.current_samples // 2 or 1):
            c = currents.random_path_chain(graph, rng)
            current = currents.chain_to_current(c)
            assert isinstance(current, currents.GraphCurrent1)
            ok = ok and currents.chain_to_current(c.boundary()) == current.boundary()
            ok = ok and currents.chain_to_current(currents.subdivide_graph_chain(c, 3)) == current
    return Outcome(ok, {"samples": wb.settings.current_samples // 2 or 1})


def _sub_girth_epsilon(graph: MetricGraph, rng: random.Random) -> Fraction:
    """A random epsilon in ``[9/64, 15/64]`` of the girth, or of the diameter scale 2 on a tree."""
    scale = graph.girth if graph.girth is not None else Fraction(2)
    return scale / 4 * Fraction(rng.randint(9, 15), 16)


@register_check("currents", "currents.round_trip",
                "current_to_chain returns c with [c] = T and certified pieces, for epsilon below "
                "a quarter of the girth")
def _round_trip(wb: Workbench) -> Outcome:
    rng = _rng(wb, "roundtrip")
    tree = _test_graphs(wb)[1]
    graphs = [MetricGraph.circle(2), MetricGraph.hawaiian(min(2, wb.settings.max_circle)), tree]
    samples = wb.settings.round_trip_samples
    ok = True
    worst = Fraction(0)
    largest = Fraction(0)
    for index in range(samples):
        graph = graphs[index % len(graphs)]
        t = (currents.random_cycle(graph, rng) if index % 2
             else currents.random_boundary(graph, rng))
        epsilon = _sub_girth_epsilon(graph, rng)
        if graph.girth is not None:
            largest = max(largest, epsilon / graph.girth)
        result = currents.current_to_chain(t, epsilon, wb.settings.contraction_gamma,
                                           wb.settings.cover_max_depth)
        check = currents.verify_certificate(t, result)
        ok = ok and check.passed
        worst = max(worst, Fraction(result.certificate.max_diameter_bound) / epsilon)
    ok = ok and largest < Fraction(1, 4)
    return Outcome(ok, {"samples": samples, "epsilon_over_girth": format_rational(largest)},
                   worst)


@register_check("currents", "currents.point_decomposition",
                "0-currents are represented by their point decomposition")
def _point_decomposition(wb: Workbench) -> Outcome:
    rng = _rng(wb, "points")
    graph = wb.earring_graph
    ok = True
    for _ in range(wb.settings.current_samples):
        t = currents.GraphCurrent0(graph, [
            (currents.random_point(graph, rng), rng.randint(-3, 3)) for _ in range(3)
        ])
        result = currents.current_to_chain(t, 1)
        ok = ok and currents.chain_to_current(result.chain) == t
    return Outcome(ok, {"samples": wb.settings.current_samples})


@register_check("currents", "currents.divisible_is_zero",
                "a cycle whose winding entries are divisible by every k in 2..max+1 is the zero "
                "current")
def _divisible_is_zero(wb: Workbench) -> Outcome:
    rng = _rng(wb, "divisible")
    graph = wb.earring_graph
    ok = currents.winding_vector(currents.GraphCurrent1.zero(graph)).is_zero
    for _ in range(wb.settings.current_samples):
        t = currents.random_cycle(graph, rng)
        vector = currents.winding_vector(t)
        largest = max((abs(w) for _, w in vector.entries), default=0)
        if vector.divisible_by(range(2, largest + 2)):
            ok = ok and not t
        ok = ok and (vector.is_zero == (not t))
    return Outcome(ok, {"samples": wb.settings.current_samples})
