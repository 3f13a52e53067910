"""Eagon-Northcott type complexes of a tritensor.

A tensor `B` with legs `(W1*, W2, W3*)` of sizes `(d1+1, d2+1, d3+1)` defines a `(d2+1) x (d3+1)` matrix of linear
forms `L[b][c] = sum_a B[a][b][c] z_a` on `P(W1)`. Writing `F` for the `W3*` leg (rank `f = d3+1`) and `G` for the `W2`
leg (rank `g = d2+1`), the complex resolving the twisted cokernel sheaf `G_t` has terms

* `Lambda^i F x S^(t-i) G x O(-i)` for `i = 0, ..., min(t, f)` when `t >= f - g + 1`,
* the same terms for `i = 0, ..., t`, followed by `Lambda^i F x D_(i-t-g) G* x O(-i)` for `i = t+g, ..., f`, when
  `0 < t <= f - g`.

Differentials contract `F` against `G` through `L`; the two halves of the second shape are joined by the maximal
minors of `L`.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional, Sequence

import numpy as np
from sympy.polys.matrices import DomainMatrix

from .exact import (
    FieldTag,
    MultiPoly,
    TriTensorError,
    dense_matrix,
    evaluate,
    graded_multiplication_matrix,
    homogeneous_degree,
    matrix_kernel,
    matrix_rank,
    monomial_basis,
    poly_det,
    polynomial_ring,
)
from .scan import DEFAULT_SCAN_PRIME, batched_rank_mod_p, contract_mod_p, projective_points
from .tensor import CUBIC_DIMS, TriTensor, symbolic_slice, tensor_slice

logger = logging.getLogger("TriTensorKit")

DEFAULT_ORDER = (2, 0, 1)
"""Leg order used for (3,3,4) tensors: the 4-dimensional leg carries the variables, so the support lives in P^3."""

SAMPLE_BOUND = 9
"""Coordinates of random sample points are drawn from `[-SAMPLE_BOUND, SAMPLE_BOUND]`."""


class TwistRegimeError(TriTensorError, ValueError):
    """Raised when no Eagon-Northcott type complex is defined for the requested twist."""


class EmptyGammaError(TriTensorError):
    """Raised when the incidence variety of the tensor is empty for dimension reasons."""


class InconclusiveExactnessError(TriTensorError):
    """Raised when no sample point off the support is available to test exactness."""


@dataclass(frozen=True)
class ComplexTerm:
    """One term `Lambda^exterior F x S^symmetric G x O(-twist)`, or `D_symmetric G*` when `divided` is set."""

    exterior: int
    symmetric: int
    divided: bool
    twist: int
    rank: int

    def __str__(self) -> str:
        power = f"D^{self.symmetric}G*" if self.divided else f"S^{self.symmetric}G"
        return f"L^{self.exterior}F x {power} x O(-{self.twist})"


@dataclass(frozen=True)
class GradedComplex:
    """A complex of graded free modules with differentials given by matrices of forms.

    Args:
        terms: terms by position, position 0 being `S^t G x O`.
        differentials: `differentials[k]` maps the term at position `k + 1` to the term at position `k`.
        bases: basis labels `(exterior subset, exponent vector)` of each term.
        regime: `"symmetric"` or `"split"`.
        twist: the twist `t`.
        order: the leg order applied to the input tensor.
        forms: the matrix of linear forms `L[b][c]` the differentials are built from.
        dims: leg sizes after reordering.
        field: ground field.
    """

    terms: tuple
    differentials: tuple
    bases: tuple
    regime: str
    twist: int
    order: tuple
    dims: tuple
    field: FieldTag
    forms: tuple

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def nvars(self) -> int:
        return self.dims[0]

    @property
    def generic_rank(self) -> int:
        """Alternating sum of ranks, zero when the cokernel is supported on a proper subvariety."""
        return sum((-1) ** k * term.rank for k, term in enumerate(self.terms))

    @property
    def proper_support(self) -> bool:
        """Whether the support of the cokernel has positive codimension `d3 - d2 + 1`."""
        return self.dims[2] >= self.dims[1]

    @property
    def flagged(self) -> bool:
        """Whether the rank bookkeeping disagrees with the expected support."""
        return self.proper_support and self.generic_rank != 0

    def to_json(self) -> dict:
        return {
            "regime": self.regime,
            "twist": self.twist,
            "order": list(self.order),
            "dims": list(self.dims),
            "terms": [
                {"term": str(term), "position": k, "rank": term.rank, "twist": term.twist}
                for k, term in enumerate(self.terms)
            ],
            "generic_rank": self.generic_rank,
            "flagged": self.flagged,
        }


@dataclass(frozen=True)
class PointExactness:
    """Ranks of the evaluated differentials at one point and exactness at every position."""

    point: tuple
    on_support: bool
    ranks: tuple
    exact: tuple


@dataclass(frozen=True)
class ExactnessResult:
    ok: bool
    checked: tuple
    skipped: int


@dataclass(frozen=True)
class HilbertFunctionTable:
    """Alternating sums of graded dimensions of a complex, per degree."""

    degrees: tuple
    values: tuple

    def __getitem__(self, degree: int) -> int:
        return self.values[self.degrees.index(degree)]

    def to_json(self) -> dict:
        return {str(d): v for d, v in zip(self.degrees, self.values)}


@dataclass(frozen=True)
class DDResult:
    ok: bool
    first_nonzero: Optional[tuple]


@dataclass(frozen=True)
class GammaScan:
    """Points `u` of `P(W1*)` where the slice drops rank, with the kernel vector `w` when it is unique."""

    pairs: tuple
    saturated: bool
    prime: int


def _regime(twist: int, f: int, g: int) -> str:
    if twist >= f - g + 1 and twist >= 0:
        return "symmetric"
    if 0 < twist <= f - g:
        return "split"
    raise TwistRegimeError(f"No complex for twist {twist} with f={f}, g={g}")


def _interior(subset: tuple, removed: Sequence[int]) -> tuple[int, tuple]:
    """Sign and result of contracting `e_subset` with the dual vectors of `removed`, the last one applied first."""
    current = list(subset)
    sign = 1
    for index in reversed(removed):
        position = current.index(index)
        if position % 2:
            sign = -sign
        current.pop(position)
    return sign, tuple(current)


def _shift(alpha: tuple, b: int, step: int) -> tuple:
    return tuple(a + step if position == b else a for position, a in enumerate(alpha))


def en_complex(t: TriTensor, twist: int, order: Optional[Sequence[int]] = None) -> GradedComplex:
    """Build the Eagon-Northcott type complex of `t` twisted by `twist`.

    Args:
        t: tensor of any format.
        twist: the twist `t`, determining which of the two shapes is built.
        order: leg order applied before building, `DEFAULT_ORDER` for (3,3,4) tensors and the identity otherwise.
    """
    if order is None:
        order = DEFAULT_ORDER if t.dims == CUBIC_DIMS else (0, 1, 2)
    work = t.permute_legs(order)
    n1, g, f = work.dims
    if (n1 - 1) + (g - 1) < f:
        logger.error("Incidence variety is empty for dims %s", work.dims)
        raise EmptyGammaError(f"d1 + d2 < d3 + 1 for dims {work.dims}")
    regime = _regime(twist, f, g)
    ring = polynomial_ring(n1, work.field)
    forms = symbolic_slice(work, 0)

    def term(i: int, divided: bool) -> tuple[ComplexTerm, list]:
        degree = i - twist - g if divided else twist - i
        basis = [(subset, alpha) for subset in combinations(range(f), i) for alpha in monomial_basis(g, degree)]
        return ComplexTerm(i, degree, divided, i, len(basis)), basis

    left = [term(i, False) for i in range(min(twist, f) + 1)]
    right = [term(i, True) for i in range(twist + g, f + 1)] if regime == "split" else []
    terms = left + right
    differentials = []
    for position in range(1, len(terms)):
        (source, source_basis), (target, target_basis) = terms[position], terms[position - 1]
        index = {label: r for r, label in enumerate(target_basis)}
        matrix = [[ring.zero] * len(source_basis) for _ in target_basis]
        for col, (subset, alpha) in enumerate(source_basis):
            if source.divided and not target.divided:
                for removed in combinations(subset, g):
                    sign, rest = _interior(subset, removed)
                    minor = poly_det([[forms[b][c] for c in removed] for b in range(g)])
                    matrix[index[(rest, target_basis[0][1])]][col] += minor if sign > 0 else -minor
                continue
            for m, c in enumerate(subset):
                rest = subset[:m] + subset[m + 1 :]
                for b in range(g):
                    if source.divided and alpha[b] == 0:
                        continue
                    image = _shift(alpha, b, -1 if source.divided else 1)
                    entry = forms[b][c] if m % 2 == 0 else -forms[b][c]
                    matrix[index[(rest, image)]][col] += entry
        differentials.append(tuple(tuple(row) for row in matrix))
    complex_ = GradedComplex(
        tuple(x[0] for x in terms),
        tuple(differentials),
        tuple(tuple(x[1]) for x in terms),
        regime,
        twist,
        tuple(order),
        work.dims,
        work.field,
        tuple(tuple(row) for row in forms),
    )
    if complex_.flagged:
        logger.warning("Alternating rank sum %s is nonzero for a complex with proper support", complex_.generic_rank)
    logger.debug("built %s complex of length %s for twist %s", regime, complex_.length, twist)
    return complex_


def _multiply(a: tuple, b: tuple, ring) -> list[list[MultiPoly]]:
    product = []
    for row in a:
        out = []
        for col in range(len(b[0])):
            total = ring.zero
            for m, entry in enumerate(row):
                if entry and b[m][col]:
                    total += entry * b[m][col]
            out.append(total)
        product.append(out)
    return product


def verify_dd_zero(c: GradedComplex) -> DDResult:
    """Check symbolically that consecutive differentials compose to zero."""
    ring = polynomial_ring(c.nvars, c.field)
    for k in range(len(c.differentials) - 1):
        product = _multiply(c.differentials[k], c.differentials[k + 1], ring)
        for r, row in enumerate(product):
            for col, entry in enumerate(row):
                if entry:
                    logger.error("d_%s d_%s is nonzero at (%s, %s)", k + 1, k + 2, r, col)
                    return DDResult(False, (k + 1, r, col, str(entry.as_expr())))
    return DDResult(True, None)


def _evaluated_rank(matrix: tuple, point: Sequence, field: FieldTag) -> int:
    return matrix_rank(dense_matrix([[evaluate(e, point) for e in row] for row in matrix], field))


def exactness_at(c: GradedComplex, point: Sequence) -> PointExactness:
    """Evaluate the complex at a point of `P(W1)` and test exactness at every position.

    The point is on the support when the evaluated matrix of linear forms has rank below `g`.
    """
    values = [c.field.element(x) for x in point]
    forms_rank = _evaluated_rank(c.forms, values, c.field)
    ranks = tuple(_evaluated_rank(d, values, c.field) for d in c.differentials)
    exact = []
    for position, term in enumerate(c.terms):
        incoming = ranks[position] if position < len(ranks) else 0
        outgoing = ranks[position - 1] if position > 0 else 0
        exact.append(incoming + outgoing == term.rank)
    return PointExactness(tuple(point), forms_rank < c.dims[1], ranks, tuple(exact))


def verify_generic_exactness(
    c: GradedComplex, points: Optional[Sequence[Sequence]] = None, samples: int = 20, seed: int = 0
) -> ExactnessResult:
    """Check exactness of the evaluated complex at points off the support.

    Points on the support (where the slice has rank below `g`) are skipped. Without explicit points, `samples`
    random integer points are drawn from a generator seeded with `seed`.
    """
    if points is None:
        rng = np.random.default_rng(seed)
        candidates = (rng.integers(-SAMPLE_BOUND, SAMPLE_BOUND + 1, size=c.nvars).tolist() for _ in range(10 * samples))
    else:
        candidates = iter(points)
    checked, skipped = [], 0
    for candidate in candidates:
        if not any(candidate):
            continue
        result = exactness_at(c, candidate)
        if result.on_support:
            skipped += 1
            continue
        checked.append(result)
        if points is None and len(checked) == samples:
            break
    if not checked:
        logger.error("No sample point off the support among the candidates")
        raise InconclusiveExactnessError("All sample points lie on the support")
    ok = all(all(r.exact) for r in checked)
    if not ok:
        logger.warning("Complex fails to be exact at %s of %s points", sum(not all(r.exact) for r in checked), len(checked))
    return ExactnessResult(ok, tuple(checked), skipped)


def _graded_dimension(nvars: int, degree: int) -> int:
    return comb(degree + nvars - 1, nvars - 1) if degree >= 0 else 0


def hilbert_function(c: GradedComplex, degrees: Sequence[int]) -> HilbertFunctionTable:
    """Alternating sum over the terms of the graded dimensions in each degree."""
    values = [
        sum((-1) ** k * term.rank * _graded_dimension(c.nvars, d - term.twist) for k, term in enumerate(c.terms))
        for d in degrees
    ]
    return HilbertFunctionTable(tuple(degrees), tuple(values))


def cokernel_dimension(c: GradedComplex, degree: int) -> int:
    """Dimension in degree `degree` of the cokernel of the last differential, by exact linear algebra."""
    rows = c.terms[0].rank * _graded_dimension(c.nvars, degree)
    if not c.differentials or rows == 0:
        return rows
    source = c.terms[1]
    target_size = len(monomial_basis(c.nvars, degree))
    source_degree = degree - source.twist
    source_size = len(monomial_basis(c.nvars, source_degree))
    if source_size == 0:
        return rows
    entries: dict[int, dict] = {}
    for r, row in enumerate(c.differentials[0]):
        for col, poly in enumerate(row):
            if not poly:
                continue
            block = graded_multiplication_matrix(poly, degree - homogeneous_degree(poly))
            for (a, b), value in _block_items(block):
                entries.setdefault(r * target_size + a, {})[col * source_size + b] = value
    matrix = DomainMatrix(entries, (rows, len(c.differentials[0][0]) * source_size), c.field.domain)
    return rows - matrix_rank(matrix)


def _block_items(block: DomainMatrix):
    for a, row in enumerate(block.to_dense().to_list()):
        for b, value in enumerate(row):
            if value:
                yield (a, b), value


def gamma_points(t: TriTensor, p: int = DEFAULT_SCAN_PRIME) -> GammaScan:
    """Scan `P(W1*)` over `F_p` for points where the slice has rank below the size of `W2`.

    For each such point the left kernel of the slice is recorded when it is a single point, the scan is marked
    saturated when some kernel has dimension 2 or more.
    """
    work = t.reduce_mod(p) if t.field.is_rational else t
    p = work.field.modulus
    residues = work.residues(p)
    g = work.dims[1]
    pairs, saturated = [], False
    for chunk in projective_points(work.dims[0] - 1, p):
        ranks = batched_rank_mod_p(contract_mod_p(chunk, residues, p), p)
        for u in chunk[ranks < g]:
            kernel = matrix_kernel(tensor_slice(work, 0, u.tolist()).transpose())
            if len(kernel) == 1:
                pairs.append((tuple(int(x) for x in u), tuple(int(x) % p for x in kernel[0])))
            else:
                saturated = True
                pairs.append((tuple(int(x) for x in u), None))
    return GammaScan(tuple(pairs), saturated, p)
