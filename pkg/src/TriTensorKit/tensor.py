"""The tritensor module.

It contains the [TriTensor][(m).] class holding exact three-way tensors, their slice maps and determinantal cubic, and
the trivial, cross-product and reversing involutions on tensors of format (3,3,4).

For a (3,3,4) tensor the legs are `(U*, W, V*)`: `B[i][j][k]` pairs the dual basis of `U` (index `i`), the basis of `W`
(index `j`) and the dual basis of `V` (index `k`).
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Any, Optional, Sequence

import numpy as np
from sympy.polys.matrices import DomainMatrix

from .exact import (
    RATIONALS,
    FieldMismatchError,
    FieldTag,
    MultiPoly,
    TriTensorError,
    canonical_basis,
    dense_matrix,
    matrix_kernel,
    matrix_rank,
    poly_det3,
    polynomial_ring,
)

logger = logging.getLogger("TriTensorKit")

SCHEMA = "tritensor/1"
"""Schema tag of the tensor JSON format."""

DEFAULT_LEGS = ("U*", "W", "V*")
"""Leg names of a (3,3,4) tensor, the `*` marking dual spaces."""

CUBIC_DIMS = (3, 3, 4)
"""Format of the tensors defining determinantal cubic surfaces."""

BIVECTORS = ((0, 1), (0, 2), (1, 2))
"""Basis of the exterior square of a 3-dimensional space, in this order."""

BIVECTOR_DUALS = {(0, 1): (2, 1), (0, 2): (1, -1), (1, 2): (0, 1)}
"""Fixed orientation: the bivector `e_a ^ e_b` is identified with `sign * e_c`, `(a b c)` a permutation of `(0 1 2)`."""

VOLUME_FORM = 1
"""Fixed orientation of the top exterior power of `U`, `e_0 ^ e_1 ^ e_2 -> 1`."""


class TensorShapeError(TriTensorError, ValueError):
    """Raised when a tensor or vector has the wrong format for an operation."""


class TensorFormatError(TriTensorError, ValueError):
    """Raised when serialized tensor data does not follow the tensor JSON schema."""


class MainAssumptionError(TriTensorError):
    """Raised when the contraction map of a tensor is not of full rank 9."""

    def __init__(self, rank: int):
        self.rank = rank
        super().__init__(f"Main assumption fails: contraction matrix has rank {rank} < 9")


class TriTensor:
    """An exact three-way tensor `B[i][j][k]` over the rationals or a prime field.

    Entries are stored as a read-only `numpy` object array of field elements.
    """

    def __init__(self, entries, field: FieldTag = RATIONALS, legs: Optional[Sequence[str]] = None):
        """Create a tensor from nested entries.

        Args:
            entries: a nested sequence (or array) of shape `(a, b, c)` of values convertible by `FieldTag.element`.
            field: ground field of the tensor.
            legs: names of the three legs, `DEFAULT_LEGS` if not given.
        """
        raw = np.array(entries, dtype=object)
        if raw.ndim != 3 or 0 in raw.shape:
            raise TensorShapeError(f"A tritensor needs three nonempty legs, got shape {raw.shape}")
        converted = np.empty(raw.shape, dtype=object)
        for index in np.ndindex(raw.shape):
            converted[index] = field.element(raw[index])
        converted.flags.writeable = False
        self._entries = converted
        self.field = field
        self.legs = tuple(legs) if legs is not None else DEFAULT_LEGS
        if len(self.legs) != 3:
            raise TensorShapeError(f"A tritensor has three legs, got names {self.legs}")

    @classmethod
    def zeros(cls, dims: Sequence[int] = CUBIC_DIMS, field: FieldTag = RATIONALS) -> "TriTensor":
        """The zero tensor of the given format."""
        return cls(np.zeros(tuple(dims), dtype=np.int64), field)

    @classmethod
    def from_sparse(
        cls, entries: dict[tuple[int, int, int], Any], dims: Sequence[int] = CUBIC_DIMS, field: FieldTag = RATIONALS
    ) -> "TriTensor":
        """Create a tensor from a mapping of `(i, j, k)` to values, all other entries being zero."""
        array = np.zeros(tuple(dims), dtype=object)
        for index, value in entries.items():
            array[index] = value
        return cls(array, field)

    @property
    def dims(self) -> tuple[int, int, int]:
        return tuple(self._entries.shape)

    @property
    def entries(self) -> np.ndarray:
        """Read-only object array of field elements."""
        return self._entries

    def __getitem__(self, index):
        return self._entries[index]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriTensor):
            return NotImplemented
        return self.field == other.field and self.dims == other.dims and bool(np.all(self._entries == other._entries))

    __hash__ = None

    def __repr__(self) -> str:
        return f"TriTensor(dims={self.dims}, field={self.field}, legs={self.legs})"

    def is_zero(self) -> bool:
        return not any(self._entries.flat)

    def require_dims(self, dims: Sequence[int] = CUBIC_DIMS) -> None:
        """Raise a `TensorShapeError` unless the tensor has format `dims`."""
        if self.dims != tuple(dims):
            raise TensorShapeError(f"Expected a tensor of format {tuple(dims)}, got {self.dims}")

    def permute_legs(self, order: Sequence[int]) -> "TriTensor":
        """Reorder the legs, new leg `a` being old leg `order[a]`."""
        order = tuple(order)
        if sorted(order) != [0, 1, 2]:
            raise ValueError(f"Leg order must be a permutation of (0, 1, 2), got {order}")
        return TriTensor(np.transpose(self._entries, order), self.field, [self.legs[a] for a in order])

    def reduce_mod(self, p: int) -> "TriTensor":
        """Reduce a rational tensor modulo the prime `p`; every denominator must be a unit."""
        target = FieldTag(p)
        if self.field == target:
            return self
        if not self.field.is_rational:
            raise FieldMismatchError(f"Cannot reduce a tensor over {self.field} modulo {p}")
        return TriTensor(self.residues(p), target, self.legs)

    def residues(self, p: int) -> np.ndarray:
        """Entries reduced to canonical residues modulo `p`, as an `int64` array."""
        array = np.empty(self.dims, dtype=np.int64)
        for index in np.ndindex(self.dims):
            array[index] = self.field.residue(self._entries[index], p)
        return array

    def slab(self, i: int) -> list[list[Any]]:
        """The matrix `B[i][.][.]` as nested lists."""
        return self._entries[i].tolist()

    def to_json(self) -> dict[str, Any]:
        """Serialize to the tensor JSON schema, scalars as strings."""
        return {
            "schema": SCHEMA,
            "dims": list(self.dims),
            "field": str(self.field),
            "legs": list(self.legs),
            "entries": [[[self.field.format(x) for x in row] for row in slab] for slab in self._entries.tolist()],
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "TriTensor":
        """Deserialize from the tensor JSON schema, raising `TensorFormatError` on malformed input."""
        if not isinstance(data, dict):
            raise TensorFormatError("Tensor JSON must be an object")
        if data.get("schema", SCHEMA) != SCHEMA:
            raise TensorFormatError(f"Unsupported schema {data.get('schema')!r}, expected {SCHEMA!r}")
        try:
            field = FieldTag.parse(data.get("field", "Q"))
            dims = tuple(int(d) for d in data["dims"])
            entries = data["entries"]
            if np.array(entries, dtype=object).shape != dims:
                raise TensorFormatError(f"Entries do not have the declared shape {dims}")
            return cls(
                [[[field.element(x if isinstance(x, str) else int(x)) for x in row] for row in slab] for slab in entries],
                field,
                data.get("legs", DEFAULT_LEGS),
            )
        except TensorFormatError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as err:
            raise TensorFormatError(f"Malformed tensor JSON: {err}") from err


def _vector(t: TriTensor, values: Sequence, length: int) -> np.ndarray:
    if len(values) != length:
        raise TensorShapeError(f"Vector of length {len(values)} does not match a leg of size {length}")
    return np.array([t.field.element(v) for v in values], dtype=object)


def tensor_slice(t: TriTensor, leg: int, vector: Sequence) -> DomainMatrix:
    """Contract leg `leg` (0, 1 or 2) of `t` with `vector`, giving a matrix on the two remaining legs in order.

    For `leg=2` on a (3,3,4) tensor this is the 3x3 matrix `M[i][j] = sum_k B[i][j][k] x_k`.
    """
    vec = _vector(t, vector, t.dims[leg])
    contracted = np.tensordot(vec, t.entries, axes=([0], [leg]))
    rows = [[t.field.element(x) for x in row] for row in contracted.tolist()]
    return dense_matrix(rows, t.field)


def symbolic_slice(t: TriTensor, leg: int) -> list[list[MultiPoly]]:
    """Matrix of linear forms `sum_c x_c B[..c..]` contracting leg `leg` with the variables of its own ring."""
    ring = polynomial_ring(t.dims[leg], t.field)
    moved = np.moveaxis(t.entries, leg, -1)
    matrix = []
    for row in moved:
        matrix.append([ring({_unit(len(coeffs), c): x for c, x in enumerate(coeffs) if x}) for coeffs in row])
    return matrix


def _unit(n: int, position: int) -> tuple[int, ...]:
    return tuple(1 if a == position else 0 for a in range(n))


def det_cubic(t: TriTensor) -> MultiPoly:
    """Determinant of the 3x3 matrix of linear forms in the variables of `V`, a cubic form in 4 variables."""
    t.require_dims()
    return poly_det3(symbolic_slice(t, 2))


def trivial_involution(t: TriTensor) -> TriTensor:
    """Swap the first two legs, `B'[j][i][k] = B[i][j][k]`."""
    t.require_dims()
    return t.permute_legs((1, 0, 2))


def contraction_matrix(t: TriTensor) -> DomainMatrix:
    """The 9x12 matrix of the contraction of the exterior square of `W*` tensor `V` into `U* x W*`.

    Columns are indexed by `(bivector, k)` with the bivector index major, rows by `(i, j')` with `i` major.
    The bivector `e_a ^ e_b` at `k` maps to `B[i][a][k]` at `(i, b)` and to `-B[i][b][k]` at `(i, a)`.
    """
    t.require_dims()
    zero = t.field.zero
    rows = [[zero] * 12 for _ in range(9)]
    for (beta, (a, b)), i, k in product(enumerate(BIVECTORS), range(3), range(4)):
        col = beta * 4 + k
        rows[i * 3 + b][col] += t[i, a, k]
        rows[i * 3 + a][col] -= t[i, b, k]
    return dense_matrix(rows, t.field)


def main_assumption(t: TriTensor) -> bool:
    """Whether the contraction matrix has full rank 9."""
    rank = matrix_rank(contraction_matrix(t))
    logger.debug("contraction matrix rank %s", rank)
    return rank == 9


def u_subspace(t: TriTensor) -> list[tuple]:
    """Canonical basis of the span of the slabs `B[i]` inside the 12-dimensional space `W x V*`, flattened `j * 4 + k`."""
    t.require_dims()
    return canonical_basis([list(t.entries[i].flat) for i in range(3)], t.field)


@dataclass(frozen=True)
class InvolutionResult:
    """Outcome of the cross-product involution.

    Args:
        uprime_basis: canonical basis of the 3-dimensional kernel, as vectors in `W x V` flattened `j * 4 + k`.
        bprime: the tensor of the inclusion of that kernel, legs `(U'*, W, V)`.
        orientation: the identification of bivectors with vectors used, see `BIVECTOR_DUALS`.
        volume: the fixed orientation of the top exterior power of `U`.
    """

    uprime_basis: tuple
    bprime: TriTensor
    orientation: tuple = tuple(sorted(BIVECTOR_DUALS.items()))
    volume: int = VOLUME_FORM


def uprime_slabs(t: TriTensor, kernel: Sequence[Sequence]) -> list[list]:
    """Rewrite kernel vectors of the contraction matrix as 3x4 slabs in `W x V`, flattened `j * 4 + k`."""
    zero = t.field.zero
    slabs = []
    for vector in kernel:
        slab = [zero] * 12
        for beta, pair in enumerate(BIVECTORS):
            j, sign = BIVECTOR_DUALS[pair]
            for k in range(4):
                slab[j * 4 + k] = vector[beta * 4 + k] if sign > 0 else -vector[beta * 4 + k]
        slabs.append(slab)
    return slabs


def cross_product_involution(t: TriTensor) -> InvolutionResult:
    """Apply the cross-product involution to a tensor satisfying the main assumption.

    The kernel of the contraction matrix is 3-dimensional; identifying bivectors of `W*` with vectors of `W` turns it
    into a subspace `U'` of `W x V`, whose inclusion defines the new tensor `B'[a][j][k]`.
    """
    matrix = contraction_matrix(t)
    rank = matrix_rank(matrix)
    if rank < 9:
        logger.error("Cross-product involution undefined, contraction matrix has rank %s", rank)
        raise MainAssumptionError(rank)
    basis = canonical_basis(uprime_slabs(t, matrix_kernel(matrix)), t.field)
    bprime = TriTensor(np.array(basis, dtype=object).reshape(3, 3, 4), t.field, ("U'*", "W", "V"))
    return InvolutionResult(tuple(basis), bprime)


def reversing_construction(t: TriTensor) -> TriTensor:
    """The cross-product image composed with the trivial involution, legs `(W, U'*, V)`."""
    return cross_product_involution(t).bprime.permute_legs((1, 0, 2))


def involution_roundtrip(t: TriTensor) -> bool:
    """Apply the cross-product involution twice and compare the result with the span of the slabs of `t`.

    Raises `MainAssumptionError` when either application is undefined.
    """
    once = cross_product_involution(t)
    twice = cross_product_involution(once.bprime)
    return list(twice.uprime_basis) == u_subspace(t)


def rank_profile(t: TriTensor) -> dict[str, int]:
    """Ranks of the three flattenings and of the contraction matrix, a coarse degeneracy fingerprint."""
    a, b, c = t.dims
    flat = t.entries
    profile = {
        "flattening_0": matrix_rank(dense_matrix(flat.reshape(a, b * c).tolist(), t.field)),
        "flattening_1": matrix_rank(dense_matrix(np.moveaxis(flat, 1, 0).reshape(b, a * c).tolist(), t.field)),
        "flattening_2": matrix_rank(dense_matrix(np.moveaxis(flat, 2, 0).reshape(c, a * b).tolist(), t.field)),
    }
    if t.dims == CUBIC_DIMS:
        profile["contraction"] = matrix_rank(contraction_matrix(t))
    return profile
