"""Ghost preimages, the ghost graph over signed discontinuities, and A3.

A ghost preimage of ``beta*+`` is a minus-type discontinuity whose orbit
lands exactly on the value ``beta*`` (then on ``beta*-``, since iteration
preserves the side); a small perturbation turns the near-miss into an actual
preimage of ``beta*+``. The minus-type case mirrors. A landing only counts
while the orbit stays outside the attractor: once an orbit is inside X it is
pinned to the periodic structure and cannot be pushed past a discontinuity
to enlarge X, and a point of X never ghost-feeds a discontinuity outside the
closure of X.

Condition A3 fails exactly when a discontinuity with both signed parts
outside X sits on a directed cycle of the graph, which by the pigeonhole on
signed nodes is the same as the discontinuity reappearing in its own ghost
tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .attractor import AttractorResult, compute_attractor
from .intervals import MINUS, PLUS, SignedPoint
from .itm import ItmMap

SignedDisc = tuple[int, str]  # (discontinuity index 1..r-1, side)


@dataclass(frozen=True)
class GhostEdge:
    """child -> parent: the child is a ghost preimage of the parent,
    landing after ``time`` steps on the parent's opposite-side companion."""

    child: SignedDisc
    parent: SignedDisc
    time: int


@dataclass(frozen=True)
class GhostGraph:
    nodes: tuple[SignedDisc, ...]
    edges: tuple[GhostEdge, ...]
    in_x: dict[SignedDisc, bool]

    def children(self, node: SignedDisc) -> tuple[GhostEdge, ...]:
        return tuple(e for e in self.edges if e.parent == node)

    def parents(self, node: SignedDisc) -> tuple[GhostEdge, ...]:
        return tuple(e for e in self.edges if e.child == node)


@dataclass(frozen=True)
class A3Witness:
    """A directed cycle through a signed part of the violating discontinuity.

    ``cycle[k]`` is a ghost preimage of ``cycle[k+1]`` (indices mod length),
    landing after ``times[k]`` steps; following the cycle is forward time."""

    disc: int
    cycle: tuple[SignedDisc, ...]
    times: tuple[int, ...]


@dataclass(frozen=True)
class A3Result:
    holds: bool
    witness: A3Witness | None


@dataclass(frozen=True)
class GhostTree:
    root: SignedDisc
    levels: tuple[tuple[SignedDisc, ...], ...]
    repeated: tuple[tuple[int, SignedDisc], ...]  # (level, vertex) seen before


def _signed_value(m: ItmMap, node: SignedDisc) -> SignedPoint:
    return SignedPoint(m.beta[node[0] - 1], node[1])


def ghost_preimages(
    m: ItmMap, target: SignedDisc, attractor: AttractorResult | None = None
) -> tuple[tuple[SignedDisc, int], ...]:
    """All ghost preimages of a signed discontinuity with their landing times.

    For a plus-type target these are the minus-type discontinuities landing
    on the target's value at minimal time k >= 1 with the whole orbit before
    the landing outside X (mirrored for minus-type targets). k <= Q always:
    outside X no state can repeat, so the orbit either lands, enters X, or
    exhausts the grid.
    """
    if attractor is None:
        attractor = compute_attractor(m)
    x_set = attractor.X
    t_index, t_side = target
    child_side = MINUS if t_side == PLUS else PLUS
    target_value = m.beta[t_index - 1]
    found: list[tuple[SignedDisc, int]] = []
    for i in range(1, m.r):
        node = (i, child_side)
        p = _signed_value(m, node)
        k = 0
        while k <= m.Q:
            if x_set.contains_signed(p):
                break
            p = m.step(p)
            k += 1
            if p.value == target_value:
                found.append((node, k))
                break
    return tuple(found)


def build_ghost_graph(m: ItmMap, attractor: AttractorResult | None = None) -> GhostGraph:
    """Full edge set over all 2(r-1) signed discontinuities."""
    if attractor is None:
        attractor = compute_attractor(m)
    nodes: list[SignedDisc] = []
    for i in range(1, m.r):
        nodes.append((i, MINUS))
        nodes.append((i, PLUS))
    edges: list[GhostEdge] = []
    for parent in nodes:
        for child, k in ghost_preimages(m, parent, attractor):
            edges.append(GhostEdge(child, parent, k))
    in_x = {node: attractor.X.contains_signed(_signed_value(m, node)) for node in nodes}
    return GhostGraph(tuple(nodes), tuple(edges), in_x)


def _find_cycle_through(graph: GhostGraph, start: SignedDisc) -> tuple[list[GhostEdge], bool]:
    # DFS over child -> parent edges looking for a path start -> ... -> start.
    stack: list[tuple[SignedDisc, list[GhostEdge]]] = [(start, [])]
    seen: set[SignedDisc] = set()
    while stack:
        node, path = stack.pop()
        for edge in sorted(graph.parents(node), key=lambda e: e.parent):
            if edge.parent == start:
                return path + [edge], True
            if edge.parent not in seen:
                seen.add(edge.parent)
                stack.append((edge.parent, path + [edge]))
    return [], False


def check_A3(graph: GhostGraph) -> A3Result:
    """A3 holds unless a discontinuity with both signed parts outside X lies
    on a directed cycle; the witness is one explicit cycle through it."""
    indices = sorted({i for i, _ in graph.nodes})
    for i in indices:
        if graph.in_x[(i, MINUS)] or graph.in_x[(i, PLUS)]:
            continue
        for side in (MINUS, PLUS):
            path, ok = _find_cycle_through(graph, (i, side))
            if ok:
                cycle = tuple(e.child for e in path)
                times = tuple(e.time for e in path)
                return A3Result(False, A3Witness(i, cycle, times))
    return A3Result(True, None)


def ghost_tree(
    m: ItmMap, root: SignedDisc, depth: int, attractor: AttractorResult | None = None
) -> GhostTree:
    """Breadth-first unrolling of the graph from a signed root.

    Level n + 1 holds the ghost preimages of the level-n vertices, so the
    side types alternate by level; vertices already seen at an earlier level
    are marked as repeats (and still expanded one level later, like any
    other vertex, but a repeat is what makes the tree infinite).
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    graph = build_ghost_graph(m, attractor)
    levels: list[tuple[SignedDisc, ...]] = [(root,)]
    repeated: list[tuple[int, SignedDisc]] = []
    seen: set[SignedDisc] = {root}
    for level in range(1, depth + 1):
        nxt: list[SignedDisc] = []
        for parent in levels[-1]:
            for edge in graph.children(parent):
                nxt.append(edge.child)
                if edge.child in seen:
                    repeated.append((level, edge.child))
                seen.add(edge.child)
        if not nxt:
            break
        levels.append(tuple(sorted(set(nxt))))
    return GhostTree(root, tuple(levels), tuple(repeated))
