"""Deterministic JSON report assembly.

Every rational is rendered in the ``p/q`` wire format, section order is
fixed, and no timestamps enter the document, so identical inputs and flags
produce byte-identical reports.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from . import __version__
from .attractor import AttractorResult
from .ghost import GhostGraph
from .intervals import format_rational
from .itm import ItmMap
from .return_map import ReturnMapData, classify_return_dynamics
from .stability import (
    GRID_BITS,
    LCG_A,
    LCG_C,
    LCG_M,
    DirectedPerturbation,
    FullAnalysis,
    ProbeResult,
    StabilityReport,
)
from .return_map import verify_touching_equations
from .vectors import build_vectors, check_lin_dep_pattern, product, verify_identities


def _fr(q: Fraction) -> str:
    return format_rational(q)


def _pair(p) -> list[str]:
    return [_fr(p[0]), _fr(p[1])]


def input_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def map_section(m: ItmMap) -> dict:
    return {
        "r": m.r,
        "beta": [_fr(b) for b in m.beta],
        "gamma": [_fr(g) for g in m.gamma],
        "Q": m.Q,
        "image_compactly_contained": m.image_compactly_contained,
    }


def attractor_section(att: AttractorResult, capped: bool = False) -> dict:
    return {
        "components": [_pair(c) for c in att.components()],
        "stabilization_step": att.stabilization_step,
        "infinite_type_suspected": att.infinite_type_suspected,
        "capped": capped,
        "discontinuities_inside": [list(t) for t in att.discontinuities_inside],
        "discontinuities_outside": list(att.discontinuities_outside),
        "boundary_hits": list(att.boundary_hits),
    }


def return_map_section(m: ItmMap, data: ReturnMapData, component: int) -> dict:
    return {
        "component": component,
        "J": _pair(data.J),
        "cut_points": [_fr(c) for c in data.cut_points],
        "return_times": list(data.return_times),
        "landings": [
            {"cut": rec.j, "time": rec.time, "disc": rec.disc} for rec in data.landings
        ],
        "chains": [
            {
                "j": c.j,
                "side": c.side,
                "hits": [{"disc": h.disc, "time": h.time} for h in c.hits],
                "entry_time": c.entry_time,
                "entry_value": _fr(c.entry_value),
            }
            for c in data.chains
        ],
        "sigma": list(data.sigma),
        "tau": list(data.tau),
        "images": [_pair(img) for img in data.images],
        "dynamically_trivial": data.dynamically_trivial,
        "classification": classify_return_dynamics(data),
        "touching_values": [_fr(v) for v in verify_touching_equations(m, data)],
    }


def _tag(tag) -> str:
    if tag[0] == "L":
        return f"L{tag[1]}"
    if tag[0] == "C":
        return f"C{tag[1]}({tag[2]},{tag[3]})"
    return f"R{tag[1]}{tag[2]}"


def vectors_section(m: ItmMap, data: ReturnMapData, component: int) -> dict:
    vecs = build_vectors(m, data)
    checks = verify_identities(m, data, vecs)
    pattern = check_lin_dep_pattern(m, data, vecs)
    return {
        "component": component,
        "vectors": [
            {
                "tag": _tag(v.tag),
                "e": list(v.e),
                "f": list(v.f),
                "product": _fr(product(v, m)),
            }
            for v in vecs
        ],
        "identities_ok": all(c.ok for c in checks),
        "lin_dep_pattern": "holds" if pattern.holds else "violated",
        "nullity": pattern.nullity,
    }


def ghost_section(graph: GhostGraph, a3_verdict) -> dict:
    witness = None
    if a3_verdict.witness is not None:
        witness = {
            "disc": a3_verdict.witness.disc,
            "cycle": [list(n) for n in a3_verdict.witness.cycle],
            "times": list(a3_verdict.witness.times),
        }
    return {
        "nodes": [
            {"disc": i, "side": s, "in_x": graph.in_x[(i, s)]} for i, s in graph.nodes
        ],
        "edges": [
            {"child": list(e.child), "parent": list(e.parent), "time": e.time}
            for e in graph.edges
        ],
        "a3": {"holds": a3_verdict.holds, "witness": witness},
    }


def stability_section(report: StabilityReport) -> dict:
    def verdict(v) -> dict:
        return {"holds": v.holds, "witness": _jsonable(v.witness)}

    return {
        "finite_type": report.finite_type,
        "stabilization_step": report.stabilization_step,
        "a1": verdict(report.a1),
        "a2": verdict(report.a2),
        "a3": verdict(report.a3),
        "matching": verdict(report.matching),
        "stable": report.stable,
    }


def probe_section(pr: ProbeResult) -> dict:
    return {
        "epsilon": _fr(pr.epsilon),
        "seed": pr.seed,
        "samples": len(pr.samples),
        "accepted": pr.accepted,
        "max_hausdorff": _fr(pr.max_hausdorff),
        "min_hausdorff": _fr(pr.min_hausdorff),
        "all_signatures_match": pr.all_signatures_match,
        "component_counts": list(pr.component_counts),
        "records": [
            {
                "index": rec.index,
                "accepted": rec.accepted,
                "component_count": rec.component_count,
                "hausdorff": _fr(rec.hausdorff) if rec.hausdorff is not None else None,
                "disc_inside": rec.disc_inside,
                "disc_outside_closure": rec.disc_outside_closure,
                "signature_match": rec.signature_match,
            }
            for rec in pr.samples
        ],
    }


def directed_section(dp: DirectedPerturbation, analysis: FullAnalysis) -> dict:
    return {
        "deltas": [_fr(d) for d in dp.spec.deltas],
        "epsilon": _fr(dp.spec.epsilon),
        "predicted_interval": _pair(dp.predicted_interval),
        "period": dp.period,
        "perturbed_components": [_pair(c) for c in analysis.attractor.components()],
    }


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return _fr(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def build_report(
    analysis: FullAnalysis,
    digest: str,
    capped: bool = False,
    probe: ProbeResult | None = None,
    directed: dict | None = None,
) -> dict:
    header = {"tool": "itmlab", "version": __version__, "input_digest": digest}
    if probe is not None:
        header["probe"] = {
            "seed": probe.seed,
            "lcg": {"a": LCG_A, "c": LCG_C, "m": LCG_M},
            "grid_denominator": 2**GRID_BITS,
        }
    doc = {
        "header": header,
        "map": map_section(analysis.map),
        "attractor": attractor_section(analysis.attractor, capped),
    }
    if analysis.report.finite_type:
        doc["return_maps"] = [
            return_map_section(analysis.map, data, k)
            for k, data in enumerate(analysis.return_maps, start=1)
        ]
        doc["vectors"] = [
            vectors_section(analysis.map, data, k)
            for k, data in enumerate(analysis.return_maps, start=1)
        ]
        from .ghost import check_A3

        doc["ghost"] = ghost_section(analysis.ghost_graph, check_A3(analysis.ghost_graph))
    doc["stability"] = stability_section(analysis.report)
    if probe is not None:
        doc["probe"] = probe_section(probe)
    if directed is not None:
        doc["directed_perturbation"] = directed
    return doc


def render_document(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"
