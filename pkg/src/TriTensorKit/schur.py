"""Schur quadric, double six and the cubic correspondence of a (3,3,4) tensor.

The Schur quadric is the unique quadratic form `q` on `V*` (up to scalar) for which the symmetrized 2x2 minors of the
slices vanish. Its inverse is the induced form on `V`, the space containing the lines `A_z` (kernels of the U-side
slices at base points) and `A'_w` (W-side). The double six pairs every `A_z` with the unique disjoint `A'_w`, and
matched lines are orthogonal for the induced form.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from sympy.polys.matrices import DomainMatrix

from .exact import (
    FieldMismatchError,
    FieldTag,
    TriTensorError,
    canonical_basis,
    dense_matrix,
    matrix_entries,
    matrix_kernel,
    matrix_rank,
    monomial_basis,
    proportional,
    substitute_linear,
)
from .hilbert_burch import base_points
from .tensor import TriTensor, cross_product_involution, det_cubic, reversing_construction, tensor_slice, trivial_involution

logger = logging.getLogger("TriTensorKit")

PAIRS = ((0, 1), (0, 2), (1, 2))
"""Index pairs `a < b` of a 3-dimensional space, row order of the Schur map."""

CONVENTIONS = ("forward-q", "forward-qinv", "backward-q", "backward-qinv")
"""Ways of relating the cubic of a tensor and of its reversing construction through the Schur quadric."""

DIRECTION_CLASSES = {
    "q-carries-G-to-G*": frozenset({"forward-q", "backward-qinv"}),
    "q-carries-G*-to-G": frozenset({"forward-qinv", "backward-q"}),
}
"""Conventions expressing the same statement, grouped by the direction in which `q` transports the cubics."""

PINNED_DIRECTION = "q-carries-G-to-G*"
"""The direction class expected for every smooth instance."""


class SchurDegeneracyError(TriTensorError):
    """Raised when the kernel of the Schur map is not 1-dimensional, or the quadric is singular where it must not be."""

    def __init__(self, dimension: int, message: Optional[str] = None):
        self.dimension = dimension
        super().__init__(message or f"Schur map kernel has dimension {dimension}, expected 1")


class DoubleSixError(TriTensorError):
    """Raised when no certified double six can be assembled from the base points."""


class CorrespondenceError(TriTensorError):
    """Raised when the cubics of a tensor and its reversing construction are not related by the Schur quadric."""

    def __init__(self, residuals: dict):
        self.residuals = residuals
        super().__init__(f"No substitution convention relates the cubics: {residuals}")


@dataclass(frozen=True)
class SchurQuadric:
    """A symmetric 4x4 matrix up to scalar, scaled so that its first nonzero entry (row-major) is 1.

    Args:
        matrix: the rows of the symmetric matrix.
        field: ground field.
        nondegenerate: whether the determinant is nonzero.
    """

    matrix: tuple
    field: FieldTag
    nondegenerate: bool

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence], field: FieldTag) -> "SchurQuadric":
        """Canonically scale a symmetric matrix, rejecting the zero matrix."""
        m = dense_matrix(rows, field)
        entries = matrix_entries(m)
        if any(entries[a][b] != entries[b][a] for a in range(4) for b in range(4)):
            raise ValueError("A quadric needs a symmetric matrix")
        lead = next((x for row in entries for x in row if x), None)
        if lead is None:
            raise ValueError("The zero matrix does not define a quadric")
        scaled = tuple(tuple(x / lead for x in row) for row in entries)
        return cls(scaled, field, bool(dense_matrix(scaled, field).det()))

    def as_matrix(self) -> DomainMatrix:
        return dense_matrix(self.matrix, self.field)

    def dual_form(self) -> DomainMatrix:
        """The inverse matrix, i.e. the form induced on `V`."""
        if not self.nondegenerate:
            raise SchurDegeneracyError(1, "A singular quadric induces no form on V")
        return self.as_matrix().inv()

    def is_proportional_to(self, rows: Sequence[Sequence]) -> bool:
        """Whether another symmetric matrix defines the same quadric."""
        try:
            return SchurQuadric.from_matrix(rows, self.field).matrix == self.matrix
        except ValueError:
            return False

    def to_json(self) -> dict:
        return {
            "q": [[self.field.format(x) for x in row] for row in self.matrix],
            "nondegenerate": self.nondegenerate,
        }


@dataclass(frozen=True)
class ProjectiveLine:
    """A line of `P(V)` given by the canonical basis of a 2-dimensional subspace, labelled by its base point."""

    span: tuple
    side: str
    index: int


@dataclass(frozen=True)
class DoubleSix:
    """Twelve lines `A_z`, `A'_w` paired by disjointness.

    Args:
        pairs: six pairs `(A, A')` of matched lines.
        table: span dimensions `dim(A_a + A'_b)` for all `a, b`, 4 meaning disjoint.
        matching: for each U-side index, the index of its disjoint W-side line.
        gamma_matching: for each U-side point, the index of the W-side point spanning the left kernel of its slice.
        field: field of the lines.
    """

    pairs: tuple
    table: tuple
    matching: tuple
    gamma_matching: tuple
    field: FieldTag

    @property
    def schlafli_pattern(self) -> bool:
        """Whether every line meets exactly five lines of the other six."""
        rows_ok = all(sum(1 for d in row if d == 3) == 5 for row in self.table)
        columns_ok = all(sum(1 for row in self.table if row[b] == 3) == 5 for b in range(6))
        return rows_ok and columns_ok

    def to_json(self) -> dict:
        return {
            "field": str(self.field),
            "matching": list(self.matching),
            "gamma_matching": list(self.gamma_matching),
            "span_dimensions": [list(row) for row in self.table],
            "schlafli_pattern": self.schlafli_pattern,
        }


@dataclass(frozen=True)
class OrthogonalityResult:
    """Whether matched lines are orthogonal for the induced form, with violations and a nonzero cross-pair witness."""

    ok: bool
    violations: tuple
    cross_witness: Optional[tuple]

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [list(v) for v in self.violations], "cross_witness": self.cross_witness}


@dataclass(frozen=True)
class CorrespondenceResult:
    """Which substitution conventions relate the two cubics, and the direction class they form."""

    ok: bool
    direction: Optional[str]
    conventions: dict

    @property
    def pinned(self) -> bool:
        return self.direction == PINNED_DIRECTION


def _pairing(t: TriTensor, k: int, l: int, i: tuple, j: tuple):
    """Symmetrized 2x2 minor of the slabs at `e_k`, `e_l` on rows `i` and columns `j`."""
    (a, b), (c, d) = i, j

    def f(x: int, y: int):
        return (
            t[a, c, x] * t[b, d, y] - t[b, c, x] * t[a, d, y] - t[a, d, x] * t[b, c, y] + t[b, d, x] * t[a, c, y]
        ) * t.field.ratio(1, 4)

    return (f(k, l) + f(l, k)) * t.field.ratio(1, 2)


def _monomial_pair(monomial: tuple) -> tuple[int, int]:
    indices = [v for v, e in enumerate(monomial) for _ in range(e)]
    return indices[0], indices[1]


def schur_map(t: TriTensor) -> DomainMatrix:
    """The 9x10 matrix from quadratic forms on `V*` to pairs of 2x2 minor positions.

    Columns follow `monomial_basis(4, 2)`, rows are `(i, i') x (j, j')` with `i < i'` major.
    """
    t.require_dims()
    columns = [_monomial_pair(m) for m in monomial_basis(4, 2)]
    rows = [[_pairing(t, k, l, i, j) for k, l in columns] for i in PAIRS for j in PAIRS]
    return dense_matrix(rows, t.field)


def schur_quadric(t: TriTensor) -> SchurQuadric:
    """The quadric spanning the kernel of the Schur map, raising `SchurDegeneracyError` if that kernel is not a line."""
    kernel = matrix_kernel(schur_map(t))
    if len(kernel) != 1:
        logger.error("Schur map kernel has dimension %s", len(kernel))
        raise SchurDegeneracyError(len(kernel))
    zero = t.field.zero
    rows = [[zero] * 4 for _ in range(4)]
    half = t.field.ratio(1, 2)
    for (k, l), c in zip((_monomial_pair(m) for m in monomial_basis(4, 2)), kernel[0]):
        if k == l:
            rows[k][k] = c
        else:
            rows[k][l] = rows[l][k] = c * half
    return SchurQuadric.from_matrix(rows, t.field)


def schur_carries_U_to_Uprime(t: TriTensor) -> bool:
    """Whether the slabs `B[i]` composed with `q` span the subspace `U'` of the cross-product involution."""
    q = schur_quadric(t).matrix
    involution = cross_product_involution(t)
    zero = t.field.zero
    images = []
    for i in range(3):
        image = []
        for j in range(3):
            for k in range(4):
                value = zero
                for l in range(4):
                    value += t[i, j, l] * q[l][k]
                image.append(value)
        images.append(image)
    return canonical_basis(images, t.field) == list(involution.uprime_basis)


def q_invariant_under_trivial_involution(t: TriTensor) -> bool:
    """Whether swapping the first two legs leaves the Schur quadric unchanged."""
    return schur_quadric(t).matrix == schur_quadric(trivial_involution(t)).matrix


def reversal_quadric_check(t: TriTensor) -> bool:
    """Whether the Schur quadric of the reversing construction is proportional to the inverse of `q`."""
    inverse = matrix_entries(schur_quadric(t).dual_form())
    return schur_quadric(reversing_construction(t)).is_proportional_to(inverse)


def cubic_correspondence_check(t: TriTensor) -> CorrespondenceResult:
    """Relate the cubic `G` of `t` and `G*` of its reversing construction through `q`.

    Four conventions are tried: `G(q y)` or `G(q^-1 y)` proportional to `G*(y)` (forward) and `G*(q x)` or `G*(q^-1 x)`
    proportional to `G(x)` (backward). The check succeeds when the successful conventions form exactly one of the two
    direction classes in `DIRECTION_CLASSES`.
    """
    quadric = schur_quadric(t)
    if not quadric.nondegenerate:
        raise SchurDegeneracyError(1, "The Schur quadric is singular")
    q = quadric.matrix
    q_inverse = matrix_entries(quadric.dual_form())
    cubic = det_cubic(t)
    reversed_cubic = det_cubic(reversing_construction(t))
    results = {
        "forward-q": proportional(substitute_linear(cubic, q), reversed_cubic),
        "forward-qinv": proportional(substitute_linear(cubic, q_inverse), reversed_cubic),
        "backward-q": proportional(substitute_linear(reversed_cubic, q), cubic),
        "backward-qinv": proportional(substitute_linear(reversed_cubic, q_inverse), cubic),
    }
    succeeded = frozenset(name for name, ok in results.items() if ok)
    direction = next((name for name, members in DIRECTION_CLASSES.items() if members == succeeded), None)
    if not succeeded:
        logger.error("No convention relates the determinantal cubics")
        raise CorrespondenceError(results)
    if direction is None:
        logger.warning("Conventions %s do not form a single direction class", sorted(succeeded))
    return CorrespondenceResult(direction is not None, direction, results)


def _line_of(t: TriTensor, leg: int, coords: Sequence) -> list:
    kernel = matrix_kernel(tensor_slice(t, leg, coords))
    if len(kernel) != 2:
        raise DoubleSixError(f"Slice at {coords} has a {len(kernel)}-dimensional kernel, expected a line")
    return kernel


def _left_kernel(t: TriTensor, coords: Sequence) -> list:
    return matrix_kernel(tensor_slice(t, 0, coords).transpose())


def double_six(t: TriTensor, p: Optional[int] = None) -> DoubleSix:
    """Assemble the double six of a tensor from its base points.

    Over the rationals the base points are taken from the minor system and must all be rational; with a prime `p`
    (or for a tensor over a prime field) the tensor is reduced and both planes are scanned instead.
    """
    t.require_dims()
    if p is not None or not t.field.is_rational:
        work = t.reduce_mod(p) if t.field.is_rational else t
        u_side, w_side = base_points(work, "U", "scan", p), base_points(work, "W", "scan", p)
    else:
        work = t
        u_side, w_side = base_points(work, "U"), base_points(work, "W")
    if not (u_side.complete and w_side.complete):
        logger.error("Incomplete base points (%s, %s)", len(u_side.points), len(w_side.points))
        raise DoubleSixError(
            f"Need six base points on each side, found {len(u_side.points)} and {len(w_side.points)} over {work.field}"
        )
    lines = [_line_of(work, 0, z.coords) for z in u_side.points]
    dual_lines = [_line_of(work, 1, w.coords) for w in w_side.points]
    table = tuple(
        tuple(matrix_rank(dense_matrix([*a, *b], work.field)) for b in dual_lines) for a in lines
    )
    matching = []
    for a, row in enumerate(table):
        disjoint = [b for b, d in enumerate(row) if d == 4]
        if len(disjoint) != 1:
            raise DoubleSixError(f"Line A_{a} is disjoint from {len(disjoint)} lines A', expected exactly one")
        matching.append(disjoint[0])
    if sorted(matching) != list(range(6)):
        raise DoubleSixError(f"Disjointness does not define a bijection: {matching}")
    w_spans = [canonical_basis([w.coords], work.field) for w in w_side.points]
    gamma = []
    for z in u_side.points:
        partner = canonical_basis(_left_kernel(work, z.coords), work.field)
        gamma.append(w_spans.index(partner) if partner in w_spans else -1)
    pairs = tuple(
        (ProjectiveLine(tuple(lines[a]), "U", a), ProjectiveLine(tuple(dual_lines[b]), "W", b))
        for a, b in enumerate(matching)
    )
    logger.info("Double six assembled over %s, matching %s", work.field, matching)
    return DoubleSix(pairs, table, tuple(matching), tuple(gamma), work.field)


def orthogonality_check(quadric: SchurQuadric, six: DoubleSix) -> OrthogonalityResult:
    """Evaluate the form induced by `quadric` on every matched pair of lines, and find a nonzero cross pair."""
    if quadric.field != six.field:
        raise FieldMismatchError(f"Quadric over {quadric.field} and double six over {six.field}")
    form = matrix_entries(quadric.dual_form())

    def pairing(x, y):
        total = quadric.field.zero
        for a in range(4):
            for b in range(4):
                total += x[a] * form[a][b] * y[b]
        return total

    violations = []
    for index, (line, dual) in enumerate(six.pairs):
        for r, x in enumerate(line.span):
            for s, y in enumerate(dual.span):
                value = pairing(x, y)
                if value:
                    violations.append((index, r, s, quadric.field.format(value)))
    witness = None
    for line, _ in six.pairs:
        for _, dual in six.pairs:
            if dual.index == six.matching[line.index]:
                continue
            if any(pairing(x, y) for x in line.span for y in dual.span):
                witness = (line.index, dual.index)
                break
        if witness is not None:
            break
    if violations:
        logger.warning("%s matched-pair evaluations are nonzero", len(violations))
    return OrthogonalityResult(not violations and witness is not None, tuple(violations), witness)
