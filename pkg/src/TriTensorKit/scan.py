"""Vectorised exhaustive scans over projective spaces `P^n(F_p)`.

Points are enumerated in chunks of canonical representatives (first nonzero coordinate equal to 1) and all linear
algebra is done on stacks of `numpy.int64` residue matrices, which is exact as long as `p < 2**31`.
"""

import logging
from functools import lru_cache
from typing import Iterator

import numpy as np

from .exact import MAX_MODULUS, FieldTag, MultiPoly

logger = logging.getLogger("TriTensorKit")

DEFAULT_SCAN_PRIME = 101
"""Prime used for exhaustive scans when none is given."""

MAX_SCAN_PRIME = MAX_MODULUS - 1
"""Largest admissible scan prime."""

CHUNK_SIZE = 1 << 15
"""Number of points processed per vectorised batch."""

INVERSE_TABLE_LIMIT = 1 << 16
"""Primes up to this bound use a precomputed table of inverses, larger ones use modular exponentiation."""


def count_projective_points(dimension: int, p: int) -> int:
    """Number of points of `P^dimension(F_p)`."""
    return (p ** (dimension + 1) - 1) // (p - 1)


def projective_points(dimension: int, p: int, chunk_size: int = CHUNK_SIZE) -> Iterator[np.ndarray]:
    """Yield all canonical representatives of `P^dimension(F_p)` as `(chunk, dimension + 1)` integer arrays.

    Representatives are grouped by the position of their leading 1, the last coordinate varying fastest.
    """
    n = dimension + 1
    for lead in range(n):
        total = p ** (n - lead - 1)
        for start in range(0, total, chunk_size):
            index = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
            points = np.zeros((len(index), n), dtype=np.int64)
            points[:, lead] = 1
            for position in range(n - 1, lead, -1):
                points[:, position] = index % p
                index //= p
            yield points


@lru_cache(maxsize=4)
def _inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    table[1] = 1
    for a in range(2, p):
        table[a] = (p - (p // a) * table[p % a] % p) % p
    return table


def inverse_mod_p(values: np.ndarray, p: int) -> np.ndarray:
    """Elementwise modular inverse of nonzero residues."""
    if p <= INVERSE_TABLE_LIMIT:
        return _inverse_table(p)[values]
    return np.array([pow(int(v), p - 2, p) for v in values], dtype=np.int64)


def batched_rank_mod_p(stack: np.ndarray, p: int) -> np.ndarray:
    """Ranks over `F_p` of a stack of matrices of shape `(N, rows, cols)`, by vectorised Gaussian elimination.

    Args:
        stack: integer array of matrices, reduced modulo `p` on entry.
        p: prime modulus below `2**31`.
    """
    a = np.array(stack, dtype=np.int64) % p
    count, rows, cols = a.shape
    rank = np.zeros(count, dtype=np.int64)
    row_index = np.arange(rows)
    for col in range(cols):
        candidates = (a[:, :, col] != 0) & (row_index[None, :] >= rank[:, None])
        found = candidates.any(axis=1)
        if not found.any():
            continue
        selected = np.flatnonzero(found)
        pivot = np.argmax(candidates[selected], axis=1)
        target = rank[selected]
        swapped = a[selected, pivot].copy()
        a[selected, pivot] = a[selected, target]
        a[selected, target] = swapped
        scale = inverse_mod_p(a[selected, target, col], p)
        pivot_rows = a[selected, target] * scale[:, None] % p
        a[selected, target] = pivot_rows
        factors = a[selected, :, col].copy()
        factors[np.arange(len(selected)), target] = 0
        a[selected] = (a[selected] - factors[:, :, None] * pivot_rows[:, None, :] % p) % p
        rank[selected] += 1
    return rank


def contract_mod_p(points: np.ndarray, tensor: np.ndarray, p: int) -> np.ndarray:
    """Contract a stack of points with the first axis of a residue tensor, modulo `p`.

    Returns the array `sum_a points[:, a] * tensor[a]` of shape `(N, *tensor.shape[1:])`.
    """
    result = np.zeros((len(points), *tensor.shape[1:]), dtype=np.int64)
    extra = (None,) * (tensor.ndim - 1)
    for a in range(tensor.shape[0]):
        result = (result + points[(slice(None), a, *extra)] * tensor[a][None] % p) % p
    return result


def evaluate_mod_p(f: MultiPoly, points: np.ndarray, p: int) -> np.ndarray:
    """Evaluate a polynomial at a stack of points modulo `p`."""
    field = FieldTag.of(f.ring.domain)
    values = np.zeros(len(points), dtype=np.int64)
    for exponent, coefficient in f.items():
        term = np.full(len(points), field.residue(coefficient, p), dtype=np.int64)
        for var, power in enumerate(exponent):
            for _ in range(power):
                term = term * points[:, var] % p
        values = (values + term) % p
    return values


def check_scan_prime(p: int) -> FieldTag:
    """Validate a scan prime, returning the corresponding `FieldTag`."""
    if not 2 < p <= MAX_SCAN_PRIME:
        raise ValueError(f"Scan prime must satisfy 2 < p < 2**31, got {p}")
    return FieldTag(p)
