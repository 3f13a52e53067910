"""Six points in the plane and (3,3,4) tensors.

From six points to a tensor: the cubics through the points, the linear syzygies between them and the tensor reading
`B[i][j][k]` as the coefficient of `z_i` in syzygy `j` against cubic `k`.

From a tensor to points: the points `u` of a projective plane where the 3x4 slice drops rank, either by an exhaustive
scan over `F_p` or, over the rationals, from the common rational zeros of the four maximal minors.
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import numpy as np
import sympy
from sympy import Poly

from .exact import (
    RATIONALS,
    FieldTag,
    MultiPoly,
    Scalar,
    TriTensorError,
    canonical_basis,
    coefficient_vector,
    dense_matrix,
    evaluate,
    graded_multiplication_matrix,
    matrix_kernel,
    matrix_rank,
    monomial_basis,
    poly_det3,
    polynomial_ring,
)
from .scan import DEFAULT_SCAN_PRIME, batched_rank_mod_p, check_scan_prime, contract_mod_p, projective_points
from .tensor import TriTensor, symbolic_slice, tensor_slice

logger = logging.getLogger("TriTensorKit")

SIDES = {"U": 0, "W": 1}
"""Projective planes carrying base points, mapped to the tensor leg they contract."""

ELIMINATION_WEIGHTS = ((1, 2, 3, 5), (1, -1, 4, -2), (2, 1, -3, 1))
"""Fixed combinations of the four minors used to eliminate one variable by resultants."""


class SpecialPositionError(TriTensorError):
    """Raised when six points fail to impose independent conditions on cubics."""

    def __init__(self, dimension: int):
        self.dimension = dimension
        super().__init__(f"Points in special position: cubic system has dimension {dimension}, expected 4")


class SyzygyDimensionError(TriTensorError):
    """Raised when four cubics do not have exactly three independent linear syzygies."""

    def __init__(self, dimension: int):
        self.dimension = dimension
        super().__init__(f"Linear syzygy space has dimension {dimension}, expected 3")


class ScanFieldError(TriTensorError, ValueError):
    """Raised when an exhaustive scan is requested without a usable prime field."""


@dataclass(frozen=True)
class PlanePoint:
    """A point of the projective plane, normalised so that its first nonzero coordinate is 1.

    Use [from_coordinates][..] to create normalised points.
    """

    coords: tuple
    field: FieldTag = RATIONALS

    @classmethod
    def from_coordinates(cls, coords: Sequence, field: FieldTag = RATIONALS) -> "PlanePoint":
        values = [field.element(c) for c in coords]
        if len(values) != 3:
            raise ValueError(f"A plane point has three coordinates, got {len(values)}")
        lead = next((v for v in values if v), None)
        if lead is None:
            raise ValueError("The zero vector is not a projective point")
        return cls(tuple(v / lead for v in values), field)

    def __str__(self) -> str:
        return "(" + ":".join(self.field.compact(c) for c in self.coords) + ")"

    def to_json(self) -> list[str]:
        return [self.field.format(c) for c in self.coords]


@dataclass(frozen=True)
class HilbertBurchData:
    """Points, their cubic system and the tensor of linear syzygies.

    Args:
        points: the six input points.
        cubic_basis: canonical basis of the cubics through the points.
        syzygy_tensor: tensor with legs `(U*, W, V*)`, `B[i][j][k]` the coefficient of `z_i` in syzygy `j` on cubic `k`.
    """

    points: tuple
    cubic_basis: tuple
    syzygy_tensor: TriTensor


@dataclass(frozen=True)
class BasePoints:
    """Rank-drop points of a tensor on one side.

    Args:
        points: the points found, in a deterministic order.
        complete: whether exactly six points were found.
        mode: `"minors"` or `"scan"`.
        side: `"U"` or `"W"`.
        field: field the points live in.
    """

    points: tuple
    complete: bool
    mode: str
    side: str
    field: FieldTag

    def to_json(self) -> dict:
        return {
            "points": [p.to_json() for p in self.points],
            "complete": self.complete,
            "mode": self.mode,
            "side": self.side,
            "field": str(self.field),
        }


@dataclass(frozen=True)
class ScanResult:
    """Minimum slice rank over a projective space and a point where it is attained."""

    min_rank: int
    witness: tuple
    prime: int
    points_scanned: int


def _field_of(points: Sequence[PlanePoint]) -> FieldTag:
    fields = {p.field for p in points}
    if len(fields) != 1:
        raise ValueError("Points must share one field")
    return fields.pop()


def cubics_through_points(points: Sequence[PlanePoint]) -> list[MultiPoly]:
    """Canonical basis of the space of plane cubics vanishing at the given points."""
    field = _field_of(points)
    monomials = monomial_basis(3, 3)
    rows = [[_monomial_value(p.coords, m) for m in monomials] for p in points]
    kernel = matrix_kernel(dense_matrix(rows, field))
    if len(kernel) != 4:
        logger.error("Cubics through %s points form a space of dimension %s", len(points), len(kernel))
        raise SpecialPositionError(len(kernel))
    ring = polynomial_ring(3, field)
    return [ring({m: c for m, c in zip(monomials, vector) if c}) for vector in kernel]


def _monomial_value(coords: Sequence[Scalar], monomial: Sequence[int]) -> Scalar:
    value = coords[0] ** monomial[0]
    for c, e in zip(coords[1:], monomial[1:]):
        value *= c**e
    return value


def linear_syzygies(cubics: Sequence[MultiPoly]) -> list[list[MultiPoly]]:
    """Canonical basis of the linear syzygies `sum_k L_k g_k = 0` of four plane cubics, as a 3x4 matrix.

    The syzygies are the kernel of the 15x12 matrix sending the coefficients of `(L_0, ..., L_3)` to those of the
    quartic `sum_k L_k g_k`, with columns ordered cubic-major.
    """
    ring = cubics[0].ring
    blocks = [graded_multiplication_matrix(g, 1).to_dense().to_list() for g in cubics]
    rows = [sum((block[r] for block in blocks), []) for r in range(len(blocks[0]))]
    kernel = matrix_kernel(dense_matrix(rows, FieldTag.of(ring.domain)))
    if len(kernel) != 3:
        logger.error("Four cubics have a %s-dimensional space of linear syzygies", len(kernel))
        raise SyzygyDimensionError(len(kernel))
    variables = monomial_basis(3, 1)
    return [
        [ring({m: vector[k * 3 + i] for i, m in enumerate(variables) if vector[k * 3 + i]}) for k in range(len(cubics))]
        for vector in kernel
    ]


def maximal_minors(matrix: Sequence[Sequence[MultiPoly]]) -> list[MultiPoly]:
    """Signed maximal minors of a 3x4 matrix, `(-1)**k` times the minor without column `k`."""
    minors = []
    for k in range(4):
        columns = [c for c in range(4) if c != k]
        minor = poly_det3([[row[c] for c in columns] for row in matrix])
        minors.append(minor if k % 2 == 0 else -minor)
    return minors


def cubic_span(polys: Sequence[MultiPoly]) -> list[tuple]:
    """Canonical basis of the span of plane cubics, as coefficient vectors on `monomial_basis(3, 3)`."""
    field = FieldTag.of(polys[0].ring.domain)
    return canonical_basis([coefficient_vector(g, 3) for g in polys if g], field)


def hilbert_burch_data(points: Sequence[PlanePoint]) -> HilbertBurchData:
    """Run the points-to-tensor pipeline and keep every intermediate result."""
    cubics = cubics_through_points(points)
    syzygies = linear_syzygies(cubics)
    field = _field_of(points)
    variables = monomial_basis(3, 1)
    zero = field.zero
    entries = [[[syzygies[j][k].get(variables[i], zero) for k in range(4)] for j in range(3)] for i in range(3)]
    return HilbertBurchData(tuple(points), tuple(cubics), TriTensor(entries, field))


def points_to_tensor(points: Sequence[PlanePoint]) -> TriTensor:
    """The (3,3,4) tensor of the linear syzygies of the cubics through six points."""
    return hilbert_burch_data(points).syzygy_tensor


def dual_resolution_hilbert_function(degree: int) -> int:
    """Value in degree `d` of the alternating sum for `0 -> O(-4) -> O(-1)^4 -> O^3`, equal to 6 for `d >= 2`."""

    def plane(d: int) -> int:
        return comb(d + 2, 2) if d >= 0 else 0

    return 3 * plane(degree) - 4 * plane(degree - 1) + plane(degree - 4)


def _slice_ranks(leg: int, points: np.ndarray, p: int, residues: np.ndarray) -> np.ndarray:
    slices = contract_mod_p(points, np.moveaxis(residues, leg, 0), p)
    return batched_rank_mod_p(slices, p)


def _scan_field(t: TriTensor, p: Optional[int]) -> int:
    if not t.field.is_rational:
        if p is not None and p != t.field.modulus:
            raise ScanFieldError(f"Tensor over {t.field} cannot be scanned over F_{p}")
        return t.field.modulus
    if p is None:
        raise ScanFieldError("Scanning a rational tensor requires a prime modulus")
    try:
        check_scan_prime(p)
    except ValueError as err:
        raise ScanFieldError(str(err)) from err
    return p


def _scan_base_points(t: TriTensor, side: str, p: int) -> BasePoints:
    leg = SIDES[side]
    residues = t.residues(p)
    field = FieldTag(p)
    found = []
    for chunk in projective_points(t.dims[leg] - 1, p):
        ranks = _slice_ranks(leg, chunk, p, residues)
        found.extend(PlanePoint.from_coordinates(row.tolist(), field) for row in chunk[ranks <= 2])
    logger.debug("scan over F_%s found %s rank-drop points on side %s", p, len(found), side)
    return BasePoints(tuple(found), len(found) == 6, "scan", side, field)


def _rational_roots(expr, symbol) -> list:
    expr = sympy.expand(expr)
    if expr == 0:
        return None
    poly = Poly(expr, symbol, domain="QQ")
    if poly.degree() <= 0:
        return []
    return sorted(poly.ground_roots())


def _common_roots(exprs: Sequence, symbol) -> Optional[list]:
    """Rational common roots of univariate expressions, `None` if all vanish identically."""
    nonzero = [e for e in (sympy.expand(x) for x in exprs) if e != 0]
    if not nonzero:
        return None
    gcd = nonzero[0]
    for e in nonzero[1:]:
        gcd = sympy.gcd(gcd, e)
    return _rational_roots(gcd, symbol)


def _minor_base_points(t: TriTensor, side: str) -> BasePoints:
    leg = SIDES[side]
    minors = maximal_minors(symbolic_slice(t, leg))
    incomplete = BasePoints((), False, "minors", side, t.field)
    if not any(minors):
        logger.warning("All maximal minors vanish on side %s, rank drops everywhere", side)
        return incomplete
    z = sympy.symbols("z0:3")
    exprs = [m.as_expr(*z) for m in minors]
    found = []
    chart = [e.subs(z[0], 1) for e in exprs]
    candidates = None
    for weights in ELIMINATION_WEIGHTS:
        first = sum(w * e for w, e in zip(weights, chart))
        second = sum(w * e for w, e in zip(reversed(weights), chart))
        resultant = sympy.resultant(sympy.expand(first), sympy.expand(second), z[2])
        candidates = _rational_roots(resultant, z[1])
        if candidates is not None:
            break
    if candidates is None:
        logger.warning("Rank-drop locus on side %s is not finite in the chart z0 = 1", side)
        return incomplete
    for a in candidates:
        roots = _common_roots([e.subs(z[1], a) for e in chart], z[2])
        if roots is None:
            return incomplete
        found.extend((1, a, b) for b in roots)
    roots = _common_roots([e.subs({z[0]: 0, z[1]: 1}) for e in exprs], z[2])
    if roots is None:
        return incomplete
    found.extend((0, 1, b) for b in roots)
    if all(e.subs({z[0]: 0, z[1]: 0, z[2]: 1}) == 0 for e in exprs):
        found.append((0, 0, 1))
    domain = t.field.domain
    points = tuple(PlanePoint.from_coordinates([domain.from_sympy(sympy.Rational(c)) for c in p], t.field) for p in found)
    if len(points) != 6:
        logger.warning("Found %s rational rank-drop points on side %s, expected 6", len(points), side)
    return BasePoints(points, len(points) == 6, "minors", side, t.field)


def base_points(t: TriTensor, side: str = "U", mode: str = "minors", p: Optional[int] = None) -> BasePoints:
    """Points `u` of the plane on `side` where the 3x4 slice `slice(t, side, u)` has rank at most 2.

    Args:
        t: a (3,3,4) tensor.
        side: `"U"` (contracting the first leg) or `"W"` (contracting the second leg).
        mode: `"minors"` for the exact rational points of the minor system, `"scan"` for an exhaustive scan over `F_p`.
        p: scan prime, required for rational tensors in scan mode.
    """
    t.require_dims()
    if side not in SIDES:
        raise ValueError(f"Side must be one of {sorted(SIDES)}, got {side!r}")
    if mode == "scan" or (mode == "minors" and not t.field.is_rational):
        return _scan_base_points(t, side, _scan_field(t, p))
    if mode != "minors":
        raise ValueError(f"Mode must be 'minors' or 'scan', got {mode!r}")
    return _minor_base_points(t, side)


def slice_rank_at(t: TriTensor, leg: int, point: Sequence) -> int:
    """Exact rank of the slice of `t` at a point of the given leg."""
    return matrix_rank(tensor_slice(t, leg, point))


def min_slice_rank_scan(t: TriTensor, leg: int = 2, p: int = DEFAULT_SCAN_PRIME) -> ScanResult:
    """Exhaustively scan the projective space of leg `leg` over `F_p` for the minimum slice rank."""
    p = _scan_field(t, p)
    residues = t.residues(p)
    best, witness, scanned = None, None, 0
    for chunk in projective_points(t.dims[leg] - 1, p):
        ranks = _slice_ranks(leg, chunk, p, residues)
        scanned += len(chunk)
        position = int(np.argmin(ranks))
        if best is None or ranks[position] < best:
            best, witness = int(ranks[position]), tuple(int(x) for x in chunk[position])
        if best == 0:
            break
    logger.debug("minimum slice rank %s on leg %s over F_%s", best, leg, p)
    return ScanResult(best, witness, p, scanned)


def points_on_line(point: Sequence[Sequence], count: int, field: FieldTag = RATIONALS) -> list[list[Scalar]]:
    """`count` distinct points `a + s b` (and `b` itself) on the line through two given points."""
    a = [field.element(x) for x in point[0]]
    b = [field.element(x) for x in point[1]]
    result = [b]
    for s in range(count - 1):
        result.append([x + field.element(s) * y for x, y in zip(a, b)])
    return result


def evaluate_minors(t: TriTensor, side: str, point: PlanePoint) -> list[Scalar]:
    """Values of the four maximal minors on `side` at a point."""
    return [evaluate(m, point.coords) for m in maximal_minors(symbolic_slice(t, SIDES[side]))]
