"""ACC and Matching checks, the stability verdict, and perturbation probes.

The verdict is the right-hand side of the characterisation theorem: a map is
declared stable iff it is finite type and passes A1, A2, A3 and Matching.
The Hausdorff/homeomorphism definition of stability quantifies over all
small perturbations and is not decidable directly; ``perturbation_probe``
cross-validates the verdict empirically with exact rational perturbations,
and ``a3_breaking_perturbation`` realizes the explicit attractor-enlarging
perturbation that an A3 violation promises.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .attractor import AttractorResult, compute_attractor
from .ghost import A3Result, GhostGraph, build_ghost_graph, check_A3
from .intervals import MINUS, PLUS, SignedPoint, hausdorff_closure_distance
from .itm import BadOrderError, BadTranslationError, ItmMap, validate
from .return_map import (
    IDENTITY,
    NotFiniteTypeError,
    ReturnMapData,
    classify_return_dynamics,
    compute_return_map,
)

# Probe deltas are drawn on the grid epsilon / 2**10 by a linear congruential
# generator with fixed published constants (Numerical Recipes).
LCG_A = 1664525
LCG_C = 1013904223
LCG_M = 2**32
GRID_BITS = 10


class NoValidSamplesError(RuntimeError):
    """Every probe draw left the parameter polytope."""


class NotRealizableDirectlyError(RuntimeError):
    """The ghost cycle cannot be broken by direct parameter shifts alone
    (legs share branches or hit other discontinuities mid-leg)."""


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: dict | None = None


@dataclass(frozen=True)
class StabilityReport:
    finite_type: bool
    stabilization_step: int | None
    a1: Verdict
    a2: Verdict
    a3: Verdict
    matching: Verdict
    stable: bool


@dataclass(frozen=True)
class FullAnalysis:
    map: ItmMap
    attractor: AttractorResult
    return_maps: tuple[ReturnMapData, ...]
    ghost_graph: GhostGraph | None
    report: StabilityReport


@dataclass(frozen=True)
class PerturbationSpec:
    """Delta vector over (gamma_1..gamma_r, beta_1..beta_{r-1})."""

    epsilon: Fraction
    deltas: tuple[Fraction, ...]
    seed: int | None = None
    index: int | None = None


@dataclass(frozen=True)
class DirectedPerturbation:
    spec: PerturbationSpec
    predicted_interval: tuple[Fraction, Fraction]
    period: int


@dataclass(frozen=True)
class SampleRecord:
    index: int
    accepted: bool
    component_count: int | None = None
    hausdorff: Fraction | None = None
    disc_inside: int | None = None
    disc_outside_closure: int | None = None
    signature_match: bool | None = None


@dataclass(frozen=True)
class ProbeResult:
    epsilon: Fraction
    seed: int
    samples: tuple[SampleRecord, ...]
    accepted: int
    max_hausdorff: Fraction
    min_hausdorff: Fraction
    all_signatures_match: bool
    component_counts: tuple[int, ...]


def _signature(analysis_return_maps: tuple[ReturnMapData, ...]) -> tuple:
    return tuple((d.n_intervals, d.return_times, d.sigma) for d in analysis_return_maps)


def check_A1(m: ItmMap, attractor: AttractorResult, return_maps: tuple[ReturnMapData, ...]) -> Verdict:
    """At most one critical hit along every signed endpoint's journey back to
    its component (a time-0 hit counts when the point itself is critical)."""
    if not attractor.finite_type:
        raise NotFiniteTypeError("A1 needs a finite-type attractor")
    for comp_idx, data in enumerate(return_maps, start=1):
        for chain in data.chains:
            if len(chain.hits) > 1:
                return Verdict(False, {
                    "component": comp_idx,
                    "cut_index": chain.j,
                    "side": chain.side,
                    "point": data.cut_points[chain.j],
                    "hits": [(h.disc, h.time) for h in chain.hits],
                })
    return Verdict(True)


def check_A2(m: ItmMap, attractor: AttractorResult, return_maps: tuple[ReturnMapData, ...]) -> Verdict:
    """Boundary points of dynamically non-trivial components hit no
    discontinuity before returning (time 0 included, so a critical boundary
    point is itself a violation), and no discontinuity sits on the boundary
    of the closure of X.

    The closure-boundary clause also covers dynamically trivial components:
    a pointwise-fixed band whose endpoint is a discontinuity breaks up under
    perturbation even though its boundary chains are skipped, so a critical
    endpoint anywhere on the closure of X is fatal.
    """
    if not attractor.finite_type:
        raise NotFiniteTypeError("A2 needs a finite-type attractor")
    for i in attractor.boundary_hits:
        b = m.beta[i - 1]
        for comp_idx, (l, r) in enumerate(attractor.components(), start=1):
            if b == l or b == r:
                return Verdict(False, {
                    "component": comp_idx,
                    "boundary": "left" if b == l else "right",
                    "point": b,
                    "first_hit": (i, 0),
                    "kind": "closure_boundary",
                })
    for comp_idx, data in enumerate(return_maps, start=1):
        if data.dynamically_trivial:
            continue
        n = data.n_intervals
        for j, side in ((0, PLUS), (n, MINUS)):
            chain = data.chain(j, side)
            if chain.hits:
                return Verdict(False, {
                    "component": comp_idx,
                    "boundary": "left" if side == PLUS else "right",
                    "point": data.cut_points[j],
                    "first_hit": (chain.hits[0].disc, chain.hits[0].time),
                })
    return Verdict(True)


def check_matching(m: ItmMap, attractor: AttractorResult, return_maps: tuple[ReturnMapData, ...]) -> Verdict:
    """Every dynamically non-trivial component returns like a rotation:
    exactly one interior landing point and the two pieces swapped.

    A component with one interior landing whose pieces both return to
    themselves (the return map is then the identity) is reported as a
    violation: its halves join only through the coincidence, and the
    attractor does not survive perturbations there.
    """
    if not attractor.finite_type:
        raise NotFiniteTypeError("Matching needs a finite-type attractor")
    for comp_idx, data in enumerate(return_maps, start=1):
        if data.dynamically_trivial:
            continue
        n = data.n_intervals
        if n != 2:
            return Verdict(False, {
                "component": comp_idx,
                "interior_landing_points": n - 1,
                "reason": "interior landing count != 1",
            })
        if classify_return_dynamics(data) == IDENTITY:
            return Verdict(False, {
                "component": comp_idx,
                "interior_landing_points": 1,
                "reason": "pieces return to themselves (identity with a coincidental cut)",
            })
    return Verdict(True)


def full_analysis(m: ItmMap, max_iter: int | None = None) -> FullAnalysis:
    """Attractor, all return maps, ghost graph and the stability verdict."""
    attractor = compute_attractor(m, max_iter)
    if not attractor.finite_type:
        report = StabilityReport(
            finite_type=False,
            stabilization_step=None,
            a1=Verdict(False, {"reason": "not finite type"}),
            a2=Verdict(False, {"reason": "not finite type"}),
            a3=Verdict(False, {"reason": "not finite type"}),
            matching=Verdict(False, {"reason": "not finite type"}),
            stable=False,
        )
        return FullAnalysis(m, attractor, (), None, report)
    return_maps = tuple(
        compute_return_map(m, comp, attractor) for comp in attractor.components()
    )
    graph = build_ghost_graph(m, attractor)
    a3 = check_A3(graph)
    a1 = check_A1(m, attractor, return_maps)
    a2 = check_A2(m, attractor, return_maps)
    matching = check_matching(m, attractor, return_maps)
    a3_verdict = Verdict(a3.holds, None if a3.holds else {
        "disc": a3.witness.disc,
        "cycle": [list(node) for node in a3.witness.cycle],
        "times": list(a3.witness.times),
    })
    stable = a1.holds and a2.holds and a3.holds and matching.holds
    report = StabilityReport(
        finite_type=True,
        stabilization_step=attractor.stabilization_step,
        a1=a1,
        a2=a2,
        a3=a3_verdict,
        matching=matching,
        stable=stable,
    )
    return FullAnalysis(m, attractor, return_maps, graph, report)


def stability_verdict(m: ItmMap, max_iter: int | None = None) -> StabilityReport:
    return full_analysis(m, max_iter).report


# -- perturbation machinery ------------------------------------------------


def apply_spec(m: ItmMap, spec: PerturbationSpec) -> ItmMap:
    """Perturbed map; raises BadOrderError/BadTranslationError when the
    deltas leave the polytope."""
    gamma = [g + spec.deltas[i] for i, g in enumerate(m.gamma)]
    beta = [b + spec.deltas[m.r + i] for i, b in enumerate(m.beta)]
    return validate(m.r, beta, gamma)


def _draw_deltas(state: int, count: int, epsilon: Fraction) -> tuple[int, tuple[Fraction, ...]]:
    grid = 2**GRID_BITS
    span = 2 * grid - 1  # k in [-(grid-1), grid-1] keeps |delta| < epsilon
    deltas = []
    for _ in range(count):
        state = (LCG_A * state + LCG_C) % LCG_M
        k = state % span - (grid - 1)
        deltas.append(Fraction(k, grid) * epsilon)
    return state, tuple(deltas)


def _probe_one(m: ItmMap, base: FullAnalysis, spec: PerturbationSpec) -> SampleRecord:
    try:
        perturbed = apply_spec(m, spec)
    except (BadOrderError, BadTranslationError):
        return SampleRecord(spec.index, accepted=False)
    analysis = full_analysis(perturbed)
    base_components = base.attractor.components()
    comps = analysis.attractor.components()
    signature_match = (
        analysis.report.finite_type
        and len(comps) == len(base_components)
        and _signature(analysis.return_maps) == _signature(base.return_maps)
    )
    dist = hausdorff_closure_distance(base.attractor.X, analysis.attractor.X)
    return SampleRecord(
        index=spec.index,
        accepted=True,
        component_count=len(comps),
        hausdorff=dist,
        disc_inside=len(analysis.attractor.discontinuities_inside),
        disc_outside_closure=len(analysis.attractor.discontinuities_outside),
        signature_match=signature_match,
    )


def perturbation_probe(
    m: ItmMap, epsilon: Fraction, samples: int, seed: int
) -> ProbeResult:
    """Exact random probe of the neighbourhood of a finite-type map.

    Samples are drawn deterministically from (seed, index); out-of-polytope
    draws are rejected but keep their index. Records component counts,
    discontinuity counts, Hausdorff distances and return-map signature
    matches against the unperturbed map. Threads never change the output:
    records are collected in sample order (cap with ITMLAB_THREADS).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    base = full_analysis(m)
    if not base.report.finite_type:
        raise NotFiniteTypeError("probe needs a finite-type base map")
    state = seed % LCG_M
    specs = []
    for i in range(samples):
        state, deltas = _draw_deltas(state, 2 * m.r - 1, epsilon)
        specs.append(PerturbationSpec(epsilon, deltas, seed, i))
    threads = max(1, int(os.environ.get("ITMLAB_THREADS", "1")))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda s: _probe_one(m, base, s), specs))
    else:
        records = [_probe_one(m, base, s) for s in specs]
    accepted = [rec for rec in records if rec.accepted]
    if not accepted:
        raise NoValidSamplesError("all probe draws left the parameter polytope")
    return ProbeResult(
        epsilon=epsilon,
        seed=seed,
        samples=tuple(records),
        accepted=len(accepted),
        max_hausdorff=max(rec.hausdorff for rec in accepted),
        min_hausdorff=min(rec.hausdorff for rec in accepted),
        all_signatures_match=all(rec.signature_match for rec in accepted),
        component_counts=tuple(sorted({rec.component_count for rec in accepted})),
    )


def a3_breaking_perturbation(
    m: ItmMap, witness, epsilon: Fraction
) -> DirectedPerturbation:
    """Directed deltas that close a violated ghost cycle into a periodic
    interval.

    Each leg of the cycle is pushed past its target by epsilon, to the right
    for minus-type legs and to the left for plus-type legs, so the interval
    hugging the starting discontinuity maps around the cycle continuously
    and returns to itself with period sum(k_j). Implemented only in the
    direct special case: legs must not hit other discontinuities on the way
    and must use pairwise disjoint branch sets, so that adjusting one gamma
    per leg realizes exactly the required shifts.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    cycle = witness.cycle
    times = witness.times
    legs = []
    for idx, node in enumerate(cycle):
        start = SignedPoint(m.beta[node[0] - 1], node[1])
        res = m.iterate(start, times[idx])
        interior = [m.iterate(start, t).point.value for t in range(1, times[idx])]
        if any(v in m.beta for v in interior):
            raise NotRealizableDirectlyError(
                "a cycle leg hits another discontinuity before its landing"
            )
        branches = {s for s in res.itinerary}
        legs.append((node, res.counts, branches))
    for a in range(len(legs)):
        for b in range(a + 1, len(legs)):
            if legs[a][2] & legs[b][2]:
                raise NotRealizableDirectlyError(
                    "cycle legs share branches; direct gamma shifts cannot decouple them"
                )
    deltas = [Fraction(0)] * (2 * m.r - 1)
    for node, counts, branches in legs:
        branch = min(branches)
        sign = 1 if node[1] == MINUS else -1
        deltas[branch - 1] = Fraction(sign, counts[branch - 1]) * epsilon
    spec = PerturbationSpec(epsilon, tuple(deltas))
    try:
        apply_spec(m, spec)
    except (BadOrderError, BadTranslationError) as exc:
        raise NotRealizableDirectlyError(f"directed deltas leave the polytope: {exc}") from exc
    start_node = cycle[0]
    beta0 = m.beta[start_node[0] - 1]
    if start_node[1] == MINUS:
        predicted = (beta0 - epsilon, beta0)
    else:
        predicted = (beta0, beta0 + epsilon)
    return DirectedPerturbation(spec, predicted, sum(times))
