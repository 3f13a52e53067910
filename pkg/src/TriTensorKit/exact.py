"""Exact arithmetic substrate: field tags, dense linear algebra, sparse polynomials and truncated power series.

All arithmetic is delegated to the exact domains of `sympy`:

* scalars are elements of `QQ` or of a prime field `GF(p)` (canonical representatives in `[0, p)`),
* matrices are `sympy.polys.matrices.DomainMatrix` instances,
* polynomials are sparse `PolyElement` instances of a `PolyRing` ordered by `grlex`,
* truncated series are handled through `sympy.polys.ring_series`.

The helpers in this module only add the conventions shared by the whole package, such as canonical subspace
representatives and the graded lexicographic monomial bases.
"""

import logging
import math
import numbers
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from typing import Any, Optional, Sequence

from sympy import isprime
from sympy.polys.domains import FF, QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.ring_series import rs_mul, rs_pow, rs_series_inversion
from sympy.polys.rings import PolyElement, PolyRing

from .utils import parse_field_tag, parse_scalar

logger = logging.getLogger("TriTensorKit")

Scalar = Any
"""An exact field element, i.e. an element of `QQ` or `GF(p)` as created by `FieldTag.element`."""

MultiPoly = PolyElement
"""Sparse multivariate polynomial: a mapping of exponent tuples to nonzero scalars."""

MAX_MODULUS = 2**31
"""Exclusive upper bound on prime field moduli, keeps products of residues inside `int64`."""

MAX_VARIABLES = 8
"""Largest number of variables a polynomial ring may have."""


class TriTensorError(Exception):
    """Base class for all errors raised by `TriTensorKit`."""


class FieldMismatchError(TriTensorError, TypeError):
    """Raised when values from different fields are mixed in a single operation."""


class NonHomogeneousError(TriTensorError, ValueError):
    """Raised when a graded operation receives a polynomial that is not homogeneous."""


class NonInvertibleSeriesError(TriTensorError, ZeroDivisionError):
    """Raised when inverting a truncated power series with zero constant term."""


class BadReductionError(TriTensorError, ValueError):
    """Raised when a rational value has a denominator divisible by the prime it is reduced modulo."""

    def __init__(self, denominator: int, p: int):
        super().__init__(f"Denominator {denominator} is not invertible modulo {p}")
        self.denominator = denominator
        self.p = p


@lru_cache(maxsize=None)
def _domain(modulus: Optional[int]):
    if modulus is None:
        return QQ
    return FF(modulus, symmetric=False)


@dataclass(frozen=True)
class FieldTag:
    """Tag identifying the ground field of a computation: the rationals, or `GF(p)` for a prime `2 < p < 2**31`.

    Args:
        modulus: prime modulus of the field, or `None` for the rationals.
    """

    modulus: Optional[int] = None

    def __post_init__(self):
        if self.modulus is None:
            return
        if not (2 < self.modulus < MAX_MODULUS) or not isprime(self.modulus):
            raise ValueError(f"Field modulus must be an odd prime below 2**31, got {self.modulus}")

    @classmethod
    def parse(cls, tag: str) -> "FieldTag":
        """Create a `FieldTag` from its string form, `"Q"` or `"Fp:<p>"`."""
        return cls(parse_field_tag(tag))

    @classmethod
    def of(cls, domain) -> "FieldTag":
        """Recover the `FieldTag` of a `sympy` ground domain, e.g. `matrix.domain` or `poly.ring.domain`."""
        if domain == QQ:
            return RATIONALS
        return cls(int(domain.mod))

    def __str__(self) -> str:
        return "Q" if self.modulus is None else f"Fp:{self.modulus}"

    @property
    def is_rational(self) -> bool:
        """Whether this is the field of rational numbers."""
        return self.modulus is None

    @property
    def domain(self):
        """The `sympy` ground domain, `QQ` or `GF(p)` with representatives in `[0, p)`."""
        return _domain(self.modulus)

    @property
    def zero(self) -> Scalar:
        return self.domain.zero

    @property
    def one(self) -> Scalar:
        return self.domain.one

    def ratio(self, numerator: int, denominator: int = 1) -> Scalar:
        """Return the field element `numerator / denominator`."""
        if denominator == 0:
            raise ZeroDivisionError("Zero denominator")
        if self.modulus is None:
            return QQ(numerator, denominator)
        if denominator % self.modulus == 0:
            raise ValueError(f"Denominator {denominator} is not invertible modulo {self.modulus}")
        return self.domain(numerator) / self.domain(denominator)

    def element(self, value) -> Scalar:
        """Convert `value` to an element of this field.

        Accepts integers (including `numpy` integers), scalar strings `"num/den"` and elements of this field.
        Elements of any other field are rejected with a `FieldMismatchError`.
        """
        if isinstance(value, str):
            return self.ratio(*parse_scalar(value))
        if isinstance(value, bool):
            raise TypeError("Booleans are not field elements")
        if isinstance(value, numbers.Integral):
            return self.domain(int(value))
        if self.domain.of_type(value):
            return value
        raise FieldMismatchError(f"Value {value!r} of type {type(value).__name__} is not an element of {self}")

    def format(self, value: Scalar) -> str:
        """Serialize a field element: `"num/den"` for rationals, a plain integer string for prime fields."""
        if self.modulus is None:
            return f"{int(value.numerator)}/{int(value.denominator)}"
        return str(int(value) % self.modulus)

    def compact(self, value: Scalar) -> str:
        """Short human readable form of a field element, omitting a unit denominator."""
        if self.modulus is None and int(value.denominator) != 1:
            return f"{int(value.numerator)}/{int(value.denominator)}"
        if self.modulus is None:
            return str(int(value.numerator))
        return str(int(value) % self.modulus)

    def residue(self, value: Scalar, p: int) -> int:
        """Reduce a field element to its canonical residue in `[0, p)`.

        Rationals are reduced when their denominator is a unit modulo `p`, prime field elements only modulo their own `p`.
        """
        if self.modulus is None:
            numerator, denominator = int(value.numerator), int(value.denominator)
            if denominator % p == 0:
                logger.error("Cannot reduce %s modulo %s", value, p)
                raise BadReductionError(denominator, p)
            return numerator * pow(denominator, -1, p) % p
        if self.modulus != p:
            raise FieldMismatchError(f"Cannot reduce an element of {self} modulo {p}")
        return int(value) % p


RATIONALS = FieldTag()
"""The field of rational numbers."""


def dense_matrix(rows: Sequence[Sequence], field: FieldTag = RATIONALS, ncols: Optional[int] = None) -> DomainMatrix:
    """Build a dense `DomainMatrix` over `field` from nested rows of convertible values.

    Args:
        rows: the rows of the matrix, each entry convertible by `FieldTag.element`.
        field: ground field of the matrix.
        ncols: number of columns, only needed when `rows` is empty.
    """
    elements = [[field.element(x) for x in row] for row in rows]
    width = len(elements[0]) if elements else (ncols or 0)
    if any(len(row) != width for row in elements):
        raise ValueError("Rows of a matrix must have equal length")
    return DomainMatrix(elements, (len(elements), width), field.domain)


def sparse_matrix(entries: dict[tuple[int, int], Scalar], shape: tuple[int, int], field: FieldTag) -> DomainMatrix:
    """Build a sparse `DomainMatrix` from a mapping `(row, col) -> value`, dropping zeros."""
    rows: dict[int, dict[int, Scalar]] = {}
    for (r, c), value in entries.items():
        value = field.element(value)
        if value:
            rows.setdefault(r, {})[c] = value
    return DomainMatrix(rows, shape, field.domain)


def matrix_rank(m: DomainMatrix) -> int:
    """Rank of a matrix.

    Over the rationals every row is scaled to integers first and the rank is read off a fraction-free echelon form,
    over a prime field a plain reduced row echelon form is used.
    """
    if 0 in m.shape:
        return 0
    if m.domain == QQ:
        integer_rows = []
        for row in m.to_dense().to_list():
            scale = math.lcm(*(int(x.denominator) for x in row))
            integer_rows.append([ZZ(int(x.numerator) * (scale // int(x.denominator))) for x in row])
        _, _, pivots = DomainMatrix(integer_rows, m.shape, ZZ).rref_den()
        return len(pivots)
    _, pivots = m.rref()
    return len(pivots)


def canonical_basis(vectors: Sequence[Sequence[Scalar]], field: FieldTag) -> list:
    """Canonical basis of the span of `vectors`: the nonzero rows of its reduced row echelon form.

    Two subspaces are equal if and only if their canonical bases are equal.
    """
    vectors = [list(v) for v in vectors]
    if not vectors:
        return []
    rref, pivots = dense_matrix(vectors, field).rref()
    return [tuple(row) for row in rref.to_dense().to_list()[: len(pivots)]]


def same_subspace(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]], field: FieldTag) -> bool:
    """Whether two spanning sets span the same subspace."""
    return canonical_basis(a, field) == canonical_basis(b, field)


def matrix_kernel(m: DomainMatrix) -> list:
    """Canonical basis of the right null space of `m`, as a list of tuples.

    The result has `cols - rank(m)` vectors and is itself in reduced echelon form.
    """
    rows, cols = m.shape
    domain = m.domain
    if rows == 0:
        reduced, pivots = [], ()
    else:
        rref, pivots = m.rref()
        reduced = rref.to_dense().to_list()
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        vector = [domain.zero] * cols
        vector[free] = domain.one
        for r, pivot in enumerate(pivots):
            vector[pivot] = -reduced[r][free]
        basis.append(vector)
    logger.debug("kernel of %sx%s matrix has dimension %s", rows, cols, len(basis))
    return canonical_basis(basis, FieldTag.of(domain)) if basis else []


def matrix_entries(m: DomainMatrix) -> list[list[Scalar]]:
    """Entries of a matrix as nested lists of field elements."""
    return m.to_dense().to_list()


@lru_cache(maxsize=None)
def polynomial_ring(nvars: int, field: FieldTag = RATIONALS) -> PolyRing:
    """Polynomial ring in `x0, ..., x{nvars-1}` over `field` with graded lexicographic order."""
    if not 1 <= nvars <= MAX_VARIABLES:
        raise ValueError(f"Polynomial rings support 1 to {MAX_VARIABLES} variables, got {nvars}")
    return PolyRing(",".join(f"x{i}" for i in range(nvars)), field.domain, grlex)


@lru_cache(maxsize=None)
def monomial_basis(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of all monomials of `degree` in `nvars` variables, in descending graded lexicographic order.

    The first monomial is always `x0**degree`, the empty tuple is returned for negative degrees.
    """
    if degree < 0:
        return ()
    exponents = []
    for combination in combinations_with_replacement(range(nvars), degree):
        monomial = [0] * nvars
        for var in combination:
            monomial[var] += 1
        exponents.append(tuple(monomial))
    return tuple(sorted(exponents, reverse=True))


def homogeneous_degree(f: MultiPoly) -> int:
    """Degree of a nonzero homogeneous polynomial, raising `NonHomogeneousError` otherwise."""
    degrees = {sum(monomial) for monomial in f.keys()}
    if len(degrees) != 1:
        raise NonHomogeneousError(f"Expected a nonzero homogeneous polynomial, got degrees {sorted(degrees)}")
    return degrees.pop()


def graded_multiplication_matrix(f: MultiPoly, degree: int) -> DomainMatrix:
    """Matrix of multiplication by the homogeneous polynomial `f` from degree `degree` to `degree + deg f`.

    Rows and columns follow `monomial_basis`.
    """
    shift = homogeneous_degree(f)
    nvars = f.ring.ngens
    source = monomial_basis(nvars, degree)
    target = {monomial: r for r, monomial in enumerate(monomial_basis(nvars, degree + shift))}
    rows: dict[int, dict[int, Scalar]] = {}
    for c, monomial in enumerate(source):
        for exponent, coefficient in f.items():
            product = tuple(a + b for a, b in zip(exponent, monomial))
            rows.setdefault(target[product], {})[c] = coefficient
    return DomainMatrix(rows, (len(target), len(source)), f.ring.domain)


def _check_square(m: Sequence[Sequence[MultiPoly]], size: Optional[int] = None) -> int:
    n = len(m)
    if (size is not None and n != size) or any(len(row) != n for row in m):
        raise ValueError(f"Expected a square {size or n}x{size or n} matrix of polynomials")
    if len({entry.ring for row in m for entry in row}) > 1:
        raise FieldMismatchError("Matrix entries belong to different polynomial rings")
    return n


def poly_det3(m: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a 3x3 matrix of polynomials by cofactor expansion along the first row."""
    _check_square(m, 3)
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _parity(permutation: Sequence[int]) -> int:
    inversions = sum(1 for x in range(len(permutation)) for y in range(x) if permutation[y] > permutation[x])
    return -1 if inversions % 2 else 1


def poly_det(m: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a square matrix of polynomials of any size, by the Leibniz formula."""
    n = _check_square(m)
    if n == 0:
        raise ValueError("Determinant of an empty matrix needs a ring")
    if n == 3:
        return poly_det3(m)
    ring = m[0][0].ring
    total = ring.zero
    for perm in permutations(range(n)):
        term = ring(_parity(perm))
        for row, col in enumerate(perm):
            term *= m[row][col]
            if not term:
                break
        total += term
    return total


def substitute_linear(f: MultiPoly, matrix: Sequence[Sequence[Scalar]]) -> MultiPoly:
    """Compute `f(A x)`, i.e. substitute `x_i -> sum_j A[i][j] x_j` in `f`."""
    ring = f.ring
    images = []
    for row in matrix:
        image = ring.zero
        for coefficient, generator in zip(row, ring.gens):
            image += generator * ring.domain.convert(coefficient)
        images.append(image)
    result = ring.zero
    for exponent, coefficient in f.items():
        term = ring.ground_new(coefficient)
        for image, power in zip(images, exponent):
            if power:
                term *= image**power
        result += term
    return result


def evaluate(f: MultiPoly, point: Sequence[Scalar]) -> Scalar:
    """Evaluate a polynomial at a point whose coordinates lie in the ground field of its ring."""
    total = f.ring.domain.zero
    for exponent, coefficient in f.items():
        term = coefficient
        for value, power in zip(point, exponent):
            if power:
                term *= value**power
        total += term
    return total


def proportional(f: MultiPoly, g: MultiPoly) -> bool:
    """Whether two nonzero polynomials agree up to a nonzero scalar."""
    if not f or not g:
        return False
    return f * g.LC == g * f.LC


def coefficient_vector(f: MultiPoly, degree: int) -> list[Scalar]:
    """Coefficients of a homogeneous polynomial on `monomial_basis(nvars, degree)`."""
    zero = f.ring.domain.zero
    return [f.get(monomial, zero) for monomial in monomial_basis(f.ring.ngens, degree)]


@lru_cache(maxsize=None)
def series_ring(field: FieldTag = RATIONALS) -> PolyRing:
    """Univariate ring in `t` used to carry truncated power series."""
    return PolyRing("t", field.domain, grlex)


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series `c0 + c1 t + ... + c_{order-1} t^(order-1)` truncated at `t^order`.

    Args:
        coefficients: the field elements `c0, ..., c_{order-1}`; the order is their number.
        field: ground field of the coefficients.
    """

    coefficients: tuple
    field: FieldTag = RATIONALS

    @classmethod
    def from_coefficients(cls, coefficients: Sequence, order: int, field: FieldTag = RATIONALS) -> "TruncatedSeries":
        """Create a series of the given order, padding with zeros or truncating as needed."""
        if order < 1:
            raise ValueError("A truncated series needs order at least 1")
        values = [field.element(c) for c in coefficients][:order]
        values += [field.zero] * (order - len(values))
        return cls(tuple(values), field)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def _element(self) -> PolyElement:
        ring = series_ring(self.field)
        return ring({(k,): c for k, c in enumerate(self.coefficients) if c})

    def _from_element(self, element: PolyElement) -> "TruncatedSeries":
        zero = self.field.zero
        return TruncatedSeries(tuple(element.get((k,), zero) for k in range(self.order)), self.field)

    def _check(self, other: "TruncatedSeries") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"Cannot combine series over {self.field} and {other.field}")
        if other.order != self.order:
            raise ValueError(f"Series orders differ: {self.order} and {other.order}")

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_multiply(self, other)

    def as_integers(self) -> list[int]:
        """Coefficients as Python integers, for series with integral rational coefficients."""
        if any(self.field.is_rational and int(c.denominator) != 1 for c in self.coefficients):
            raise ValueError("Series has non-integral coefficients")
        return [int(c.numerator) if self.field.is_rational else int(c) for c in self.coefficients]


def series_multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Product of two truncated series of the same order."""
    a._check(b)
    t = series_ring(a.field).gens[0]
    return a._from_element(rs_mul(a._element(), b._element(), t, a.order))


def series_invert(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a truncated series, which requires a nonzero constant term."""
    if not s.coefficients[0]:
        raise NonInvertibleSeriesError("Series with zero constant term is not invertible")
    t = series_ring(s.field).gens[0]
    return s._from_element(rs_series_inversion(s._element(), t, s.order))


def series_power(s: TruncatedSeries, exponent: int) -> TruncatedSeries:
    """Integer power of a truncated series, negative exponents going through `series_invert`."""
    if exponent < 0:
        return series_power(series_invert(s), -exponent)
    t = series_ring(s.field).gens[0]
    return s._from_element(rs_pow(s._element(), exponent, t, s.order))
