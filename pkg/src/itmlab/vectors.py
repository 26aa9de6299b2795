"""Coefficient vectors of a return structure and their exact identities.

Each orbit leg of a cut point is encoded as an integer vector in
``Z^r (+) Z^{r-1}``: landing vectors L_j (cut point to its first
discontinuity), critical connection vectors C+-(j, k) (discontinuity to the
next one along a signed chain) and return vectors R+-_j (last discontinuity
back into J). Pairing a vector with the parameter vector
``(gamma_1..gamma_r, beta_1..beta_{r-1})`` recovers the dynamical identity it
encodes, with exact equality.

Any vanishing rational combination of the stacked vectors is forced into a
rigid coefficient pattern (equal coefficients along each signed chain,
opposite across the two sides of a cut point, landing coefficient equal to
the sum). ``check_lin_dep_pattern`` verifies that the exact nullspace is
contained in that pattern subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .intervals import MINUS, PLUS, SignedPoint
from .itm import ItmMap
from .return_map import ReturnMapData

Tag = tuple


class IdentityViolatedError(AssertionError):
    """A product identity failed on exact data; indicates an engine bug."""

    def __init__(self, tag: Tag):
        self.tag = tag
        super().__init__(f"product identity violated for {tag}")


@dataclass(frozen=True)
class CoefficientVector:
    e: tuple[int, ...]
    f: tuple[int, ...]
    tag: Tag

    def entries(self) -> tuple[int, ...]:
        return self.e + self.f


@dataclass(frozen=True)
class IdentityCheck:
    tag: Tag
    kind: str
    value: Fraction
    ok: bool


@dataclass(frozen=True)
class PatternResult:
    holds: bool
    nullity: int
    witness: dict | None


def product(v: CoefficientVector, m: ItmMap) -> Fraction:
    """<v, (gamma beta)> = sum e_s gamma_s + sum f_s beta_s, exact."""
    total = sum((c * g for c, g in zip(v.e, m.gamma)), Fraction(0))
    return total + sum((c * b for c, b in zip(v.f, m.beta)), Fraction(0))


def _counts(m: ItmMap, value: Fraction, side: str, steps: int) -> tuple[int, ...]:
    return m.iterate(SignedPoint(value, side), steps).counts


def _f_unit(m: ItmMap, index: int, sign: int) -> tuple[int, ...]:
    f = [0] * (m.r - 1)
    f[index - 1] += sign
    return tuple(f)


def _f_zero(m: ItmMap) -> tuple[int, ...]:
    return (0,) * (m.r - 1)


def _f_sum(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def build_vectors(m: ItmMap, data: ReturnMapData) -> tuple[CoefficientVector, ...]:
    """All landing / critical connection / return vectors of one component.

    Interior cut points contribute L_j plus both signed chains; boundary
    points contribute their chain's vectors when the chain is non-empty, and
    otherwise only the f-free return vector.
    """
    n = data.n_intervals
    out: list[CoefficientVector] = []
    landings: dict[int, CoefficientVector] = {}

    for c in data.chains:
        a_j = data.cut_points[c.j]
        if c.hits:
            first = c.hits[0]
            if c.j not in landings:
                e = _counts(m, a_j, c.side, first.time)
                landings[c.j] = CoefficientVector(e, _f_unit(m, first.disc, -1), ("L", c.j))
            else:
                # interior cut points: both sides must produce the same L_j
                e = _counts(m, a_j, c.side, first.time)
                assert landings[c.j].e == e and landings[c.j].f == _f_unit(m, first.disc, -1)

    for side in (PLUS, MINUS):
        js = range(n) if side == PLUS else range(1, n + 1)
        for j in js:
            c = data.chain(j, side)
            if j in landings:
                out.append(landings.pop(j))
            if not c.hits:
                e = _counts(m, data.cut_points[j], side, c.entry_time)
                out.append(CoefficientVector(e, _f_zero(m), ("R", side, j)))
                continue
            for k in range(len(c.hits) - 1):
                cur, nxt = c.hits[k], c.hits[k + 1]
                e = _counts(m, m.beta[cur.disc - 1], side, nxt.time - cur.time)
                f = _f_sum(_f_unit(m, cur.disc, 1), _f_unit(m, nxt.disc, -1))
                out.append(CoefficientVector(e, f, ("C", side, j, k + 1)))
            last = c.hits[-1]
            e = _counts(m, m.beta[last.disc - 1], side, c.entry_time - last.time)
            out.append(CoefficientVector(e, _f_unit(m, last.disc, 1), ("R", side, j)))
    return tuple(out)


def verify_identities(
    m: ItmMap, data: ReturnMapData, vectors: tuple[CoefficientVector, ...] | None = None
) -> tuple[IdentityCheck, ...]:
    """Check every vector's defining identity by exact equality / membership."""
    if vectors is None:
        vectors = build_vectors(m, data)
    x, y = data.J
    checks: list[IdentityCheck] = []
    for v in vectors:
        val = product(v, m)
        if v.tag[0] == "L":
            j = v.tag[1]
            ok = val + data.cut_points[j] == 0
            kind = "landing"
        elif v.tag[0] == "C":
            ok = val == 0
            kind = "connection"
        else:
            _, side, j = v.tag
            chain = data.chain(j, side)
            if chain.hits:
                ok = val == chain.entry_value and (
                    x <= val < y if side == PLUS else x < val <= y
                )
                kind = "return"
            else:
                ok = val == chain.entry_value - data.cut_points[j]
                kind = "return_free"
        checks.append(IdentityCheck(v.tag, kind, val, ok))
        if not ok:
            raise IdentityViolatedError(v.tag)
    return tuple(checks)


# -- exact nullspace ------------------------------------------------------


def nullspace(columns: list[list[int]], dim: int) -> list[list[Fraction]]:
    """Exact nullspace basis of the matrix whose columns are given.

    Fraction-free (Bareiss) forward elimination on the integer matrix, first
    nonzero entry in column order as pivot, then rational back-substitution:
    one basis vector per free column.
    """
    ncols = len(columns)
    rows = [[columns[c][r] for c in range(ncols)] for r in range(dim)]
    nrows = dim
    prev = 1
    pivots: list[tuple[int, int]] = []  # (row, col)
    rank = 0
    for col in range(ncols):
        sel = None
        for r in range(rank, nrows):
            if rows[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        if sel != rank:
            rows[sel], rows[rank] = rows[rank], rows[sel]
        piv = rows[rank][col]
        for r in range(rank + 1, nrows):
            factor = rows[r][col]
            for c2 in range(col + 1, ncols):
                rows[r][c2] = (piv * rows[r][c2] - factor * rows[rank][c2]) // prev
            rows[r][col] = 0
        prev = piv
        pivots.append((rank, col))
        rank += 1
    piv_cols = {c for _, c in pivots}
    basis: list[list[Fraction]] = []
    for free in range(ncols):
        if free in piv_cols:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r, c in reversed(pivots):
            if c >= free:
                continue
            s = sum((Fraction(rows[r][c2]) * vec[c2] for c2 in range(c + 1, ncols)), Fraction(0))
            vec[c] = -s / rows[r][c]
        basis.append(vec)
    return basis


def check_lin_dep_pattern(
    m: ItmMap, data: ReturnMapData, vectors: tuple[CoefficientVector, ...] | None = None
) -> PatternResult:
    """Verify that every vanishing combination follows the forced pattern.

    For each basis element of the exact nullspace and each 0 <= j < N:
    the coefficients of C+(j, 1..m-1) and R+_j must all agree (common value
    c+_j), those of C-(j+1, .) and R-_{j+1} must agree (c-_{j+1}), and
    c+_j = -c-_{j+1}; for interior j the landing coefficient alpha_j must
    equal c-_j + c+_j. Boundary blocks without landings keep only their
    return-vector constraint. A violation is returned as a witness, never
    raised: it would falsify the underlying lemma and means an engine bug.
    """
    if vectors is None:
        vectors = build_vectors(m, data)
    n = data.n_intervals
    dim = 2 * m.r - 1
    cols = [list(v.entries()) for v in vectors]
    basis = nullspace(cols, dim)
    index = {v.tag: i for i, v in enumerate(vectors)}

    def block(alpha: list[Fraction], side: str, j: int) -> list[Fraction]:
        coeffs = [alpha[index[t]] for t in index if t[0] == "C" and t[1] == side and t[2] == j]
        coeffs.append(alpha[index[("R", side, j)]])
        return coeffs

    for b_i, alpha in enumerate(basis):
        for j in range(n):
            plus_block = block(alpha, PLUS, j)
            minus_block = block(alpha, MINUS, j + 1)
            if any(c != plus_block[0] for c in plus_block) or any(
                c != minus_block[0] for c in minus_block
            ):
                return PatternResult(False, len(basis), {
                    "basis_index": b_i, "j": j, "reason": "unequal coefficients in a chain block",
                })
            if plus_block[0] != -minus_block[0]:
                return PatternResult(False, len(basis), {
                    "basis_index": b_i, "j": j, "reason": "plus/minus blocks not opposite",
                })
        for j in range(1, n):
            c_minus = block(alpha, MINUS, j)[0]
            c_plus = block(alpha, PLUS, j)[0]
            if alpha[index[("L", j)]] != c_minus + c_plus:
                return PatternResult(False, len(basis), {
                    "basis_index": b_i, "j": j, "reason": "landing coefficient != block sum",
                })
    return PatternResult(True, len(basis), None)
