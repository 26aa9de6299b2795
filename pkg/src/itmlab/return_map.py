"""Exact first-return structure on an interval component of the attractor.

An interval component J of a finite-type attractor is propagated forward as
a set of in-flight pieces. Whenever a discontinuity falls strictly inside a
piece, the piece splits and the split point pulls back to a cut point of J
(recording its landing time and the discontinuity hit); a piece landing
wholly inside J retires with its return time. Pieces never straddle J and
never partially overlap it.

On top of the piece propagation, every signed endpoint a_j+ / a_j- of the
continuity intervals is iterated as a signed point to obtain its chain of
discontinuity hits (times in [0, entry time), time 0 included) and its entry
time into J. These chains drive the coefficient vectors and the A1/A2
conditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .attractor import AttractorResult, NotFiniteTypeError, compute_attractor
from .intervals import MINUS, PLUS, Pair, SignedPoint
from .itm import ItmMap

IDENTITY = "identity"
ROTATION_LIKE = "rotation_like"
MANY_BRANCHES = "many_branches"


class NotAComponentError(ValueError):
    """The requested interval is not exactly a component of the attractor."""


class TouchingViolatedError(AssertionError):
    """A touching equation failed; impossible on exact data, so a bug."""

    def __init__(self, j: int):
        self.j = j
        super().__init__(f"touching equation {j} violated")


@dataclass(frozen=True)
class ChainHit:
    disc: int
    time: int


@dataclass(frozen=True)
class SignedChain:
    """Critical hits of one signed endpoint before it re-enters J."""

    j: int
    side: str
    hits: tuple[ChainHit, ...]
    entry_time: int
    entry_value: Fraction


@dataclass(frozen=True)
class LandingRecord:
    """Interior cut point a_j: first landing time l_j and discontinuity hit."""

    j: int
    time: int
    disc: int


@dataclass(frozen=True)
class ReturnMapData:
    J: Pair
    cut_points: tuple[Fraction, ...]
    return_times: tuple[int, ...]
    landings: tuple[LandingRecord, ...]
    chains: tuple[SignedChain, ...]
    sigma: tuple[int, ...]
    tau: tuple[int, ...]
    images: tuple[Pair, ...]
    dynamically_trivial: bool

    @property
    def n_intervals(self) -> int:
        return len(self.cut_points) - 1

    def continuity_intervals(self) -> tuple[Pair, ...]:
        cp = self.cut_points
        return tuple((cp[j - 1], cp[j]) for j in range(1, len(cp)))

    def chain(self, j: int, side: str) -> SignedChain:
        for c in self.chains:
            if c.j == j and c.side == side:
                return c
        raise KeyError((j, side))

    def landing(self, j: int) -> LandingRecord:
        for rec in self.landings:
            if rec.j == j:
                return rec
        raise KeyError(j)


def _signed_in(J: Pair, p: SignedPoint) -> bool:
    l, r = J
    if p.side == PLUS:
        return l <= p.value < r
    return l < p.value <= r


def _signed_chain(m: ItmMap, J: Pair, j: int, side: str, start: Fraction, cap: int) -> SignedChain:
    beta_index = {b: i + 1 for i, b in enumerate(m.beta)}
    p = SignedPoint(start, side)
    hits: list[ChainHit] = []
    t = 0
    while True:
        if t >= 1 and _signed_in(J, p):
            return SignedChain(j, side, tuple(hits), t, p.value)
        if p.value in beta_index:
            hits.append(ChainHit(beta_index[p.value], t))
        p = m.step(p)
        t += 1
        if t > cap:
            raise NotFiniteTypeError(f"signed point {start}{side} did not re-enter {J}")


def compute_return_map(
    m: ItmMap, J: Pair, attractor: AttractorResult | None = None
) -> ReturnMapData:
    """Full first-return structure of one attractor component.

    Raises NotFiniteTypeError when the attractor is not finite type (or the
    generous safety cap is exceeded) and NotAComponentError when J is not
    exactly one of its components.
    """
    if attractor is None:
        attractor = compute_attractor(m)
    if not attractor.finite_type:
        raise NotFiniteTypeError("attractor did not stabilize")
    components = attractor.components()
    if tuple(J) not in components:
        raise NotAComponentError(f"{J} is not a component of the attractor")
    x, y = J
    cap = 2 * m.Q * max(1, len(components))

    # In-flight pieces (cur_l, cur_r, src_l); src_l locates the piece's
    # preimage inside J, so a split at value v pulls back to src_l + (v - cur_l).
    flying: list[tuple[Fraction, Fraction, Fraction]] = [(x, y, x)]
    cut_info: dict[Fraction, tuple[int, int]] = {}
    retired: list[tuple[Fraction, Fraction, int]] = []  # (src_l, img_l, time)
    t = 0
    while flying:
        if t > cap:
            raise NotFiniteTypeError("return-time safety cap exceeded")
        if t > 0:
            still: list[tuple[Fraction, Fraction, Fraction]] = []
            for cl, cr, src in flying:
                inside = x <= cl and cr <= y
                outside = cr <= x or cl >= y
                if inside:
                    retired.append((src, cl, t))
                elif outside:
                    still.append((cl, cr, src))
                else:
                    raise AssertionError(f"piece [{cl},{cr}) straddles {J} at time {t}")
            flying = still
        nxt: list[tuple[Fraction, Fraction, Fraction]] = []
        for cl, cr, src in flying:
            bounds = [cl] + [b for b in m.beta if cl < b < cr] + [cr]
            for k in range(len(bounds) - 1):
                lo, hi = bounds[k], bounds[k + 1]
                if k > 0:
                    cut = src + (lo - cl)
                    if cut not in cut_info:
                        cut_info[cut] = (t, m.beta.index(lo) + 1)
                g = m.gamma[m.branch_of(SignedPoint(lo, PLUS)) - 1]
                nxt.append((lo + g, hi + g, src + (lo - cl)))
        flying = sorted(nxt)
        t += 1

    cut_points = (x,) + tuple(sorted(cut_info)) + (y,)
    n = len(cut_points) - 1
    landings = tuple(
        LandingRecord(j, cut_info[cut_points[j]][0], cut_info[cut_points[j]][1])
        for j in range(1, n)
    )

    by_src = {src: (img, rt) for src, img, rt in retired}
    assert len(by_src) == n, "retired pieces do not match continuity intervals"
    return_times = tuple(by_src[cut_points[j]][1] for j in range(n))
    order = sorted(range(1, n + 1), key=lambda j: by_src[cut_points[j - 1]][0])
    sigma = tuple(order)
    tau = tuple(sigma.index(j) + 1 for j in range(1, n + 1))
    images = tuple(
        (by_src[cut_points[j - 1]][0],
         by_src[cut_points[j - 1]][0] + cut_points[j] - cut_points[j - 1])
        for j in range(1, n + 1)
    )
    total = sum((ir - il for il, ir in images), Fraction(0))
    assert total == y - x, "return images do not tile J"
    for p in range(len(sigma) - 1):
        assert images[sigma[p] - 1][1] == images[sigma[p + 1] - 1][0], "images not contiguous"

    chains = []
    for j in range(n):
        chains.append(_signed_chain(m, J, j, PLUS, cut_points[j], cap))
    for j in range(1, n + 1):
        chains.append(_signed_chain(m, J, j, MINUS, cut_points[j], cap))
    chains_t = tuple(chains)

    # Entry times of signed endpoints must agree with the piece return times,
    # and both sides of an interior cut point must first hit the same
    # discontinuity at the landing time.
    for c in chains_t:
        expected = return_times[c.j] if c.side == PLUS else return_times[c.j - 1]
        assert c.entry_time == expected, f"chain entry {c} != return time {expected}"
    for rec in landings:
        for side in (PLUS, MINUS):
            first = next(iter(_chain_hits(chains_t, rec.j, side)), None)
            assert first is not None and first.time == rec.time and first.disc == rec.disc

    # A single-piece return is forced to be the identity (equal-length image
    # inside J), which is exactly the dynamically trivial case.
    if n == 1:
        assert images[0] == (x, y), "single-piece return must be the identity"
    trivial = n == 1
    return ReturnMapData(
        J=(x, y),
        cut_points=cut_points,
        return_times=return_times,
        landings=landings,
        chains=chains_t,
        sigma=sigma,
        tau=tau,
        images=images,
        dynamically_trivial=trivial,
    )


def _chain_hits(chains: Iterable[SignedChain], j: int, side: str):
    for c in chains:
        if c.j == j and c.side == side:
            return c.hits
    raise KeyError((j, side))


def verify_touching_equations(m: ItmMap, data: ReturnMapData) -> tuple[Fraction, ...]:
    """Evaluate both sides of each of the N-1 touching equations exactly.

    The p-th equation says the right end of the p-th image from the left
    touches the left end of the next one: R(a_{sigma(p)}-) ~ R(a_{sigma(p+1)-1}+).
    Returns the touching values; a failure raises TouchingViolatedError.
    """
    sigma = data.sigma
    out: list[Fraction] = []
    for p in range(len(sigma) - 1):
        left = data.chain(sigma[p], MINUS)
        right = data.chain(sigma[p + 1] - 1, PLUS)
        lval = m.iterate(SignedPoint(data.cut_points[sigma[p]], MINUS), left.entry_time).point
        rval = m.iterate(SignedPoint(data.cut_points[sigma[p + 1] - 1], PLUS), right.entry_time).point
        if lval.value != rval.value or lval.side != MINUS or rval.side != PLUS:
            raise TouchingViolatedError(p + 1)
        if (lval.value, rval.value) != (left.entry_value, right.entry_value):
            raise TouchingViolatedError(p + 1)
        out.append(lval.value)
    return tuple(out)


def classify_return_dynamics(data: ReturnMapData) -> str:
    """Identity, rotation-like (N = 2) or many-branches (N >= 3)."""
    n = data.n_intervals
    if n >= 3:
        return MANY_BRANCHES
    if all(img[0] == data.cut_points[j] for j, img in enumerate(data.images)):
        return IDENTITY
    return ROTATION_LIKE
