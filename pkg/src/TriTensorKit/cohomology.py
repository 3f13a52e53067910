"""Cohomology of the rank-6 kernel bundle on P^3 attached to a (3,3,4) tensor.

The bundle `E` is the kernel of `U x V x O(1) -> W x O(1) + U x O(2)`, the first component contracting with the
tensor and the second multiplying by the coordinates. In degree `n` the global sections of the sequence give the
matrix `Phi_n: U x V x S^(n+1) V -> W x S^(n+1) V + U x S^(n+2) V`, whose nullity is `h^0(E(n))` and whose corank is
`h^1(E(n))` for `n >= -1`. Lower twists follow from the presentation `0 -> E -> U x Omega^1(2) -> W x O(1) -> 0`
and Bott's formula.
"""

import logging
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from sympy.polys.matrices import DomainMatrix

from .exact import (
    RATIONALS,
    FieldTag,
    TriTensorError,
    TruncatedSeries,
    dense_matrix,
    matrix_kernel,
    matrix_rank,
    monomial_basis,
    series_multiply,
    series_power,
)
from .scan import DEFAULT_SCAN_PRIME, batched_rank_mod_p, evaluate_mod_p, projective_points
from .tensor import TriTensor, det_cubic, reversing_construction

logger = logging.getLogger("TriTensorKit")

DEFAULT_TWISTS = range(-6, 3)
"""Twists of the cohomology table computed by default."""

RANK = 6
"""Rank of the kernel bundle."""

COMPUTED = "computed-exactly"
VANISHING = "forced-vanishing"
DERIVED = "from-Euler-and-vanishing"

TODD = (1, 2, "11/6", 1)
"""Todd class of P^3 in powers of the hyperplane class."""


class SectionCountError(TriTensorError):
    """Raised when the bundle does not have exactly six independent global sections."""

    def __init__(self, h0: int):
        self.h0 = h0
        super().__init__(f"Expected 6 global sections, found h0 = {h0}")


class JumpingPointError(TriTensorError):
    """Raised when the fiber map of the presentation drops rank at a point."""


def binomial(a: int, k: int) -> int:
    """Binomial coefficient `a choose k` as a polynomial in `a`, valid for negative `a`."""
    numerator = 1
    for i in range(k):
        numerator *= a - i
    return numerator // _factorial(k)


def _factorial(k: int) -> int:
    result = 1
    for i in range(2, k + 1):
        result *= i
    return result


def bott_dimension(N: int, p: int, k: int, q: int) -> int:
    """`h^q(P^N, Omega^p(k))` by Bott's formula."""
    if not (0 <= p <= N and 0 <= q <= N):
        return 0
    if q == p and k == 0:
        return 1
    if q == 0:
        return comb(k + N - p, k) * comb(k - 1, p) if k > p else 0
    if q == N:
        return comb(-k + p, -k) * comb(-k - 1, N - p) if k < p - N else 0
    return 0


def line_bundle_cohomology(N: int, k: int, q: int) -> int:
    """`h^q(P^N, O(k))`."""
    return bott_dimension(N, 0, k, q)


def chern_polynomial() -> list[int]:
    """Coefficients of the total Chern class of `E`, `(1 + t)^9 (1 + 2t)^-3` truncated after `t^3`."""
    return series_multiply(*chern_factors()).as_integers()


def chern_factors() -> tuple[TruncatedSeries, TruncatedSeries]:
    """The two factors `(1 + t)^9` and `(1 + 2t)^-3` of the total Chern class."""
    first = series_power(TruncatedSeries.from_coefficients([1, 1], 4), 9)
    second = series_power(TruncatedSeries.from_coefficients([1, 2], 4), -3)
    return first, second


def euler_characteristic(n: int) -> int:
    """`chi(E(n)) = 9 chi(O(n+1)) - 3 chi(O(n+2))`, with polynomial binomial coefficients."""
    return 9 * binomial(n + 4, 3) - 3 * binomial(n + 5, 3)


def chern_character(chern: Sequence[int] = (1, 3, 6, 4), rank: int = RANK) -> tuple:
    """Chern character `(ch_0, ..., ch_3)` on P^3 from the Chern classes `(1, c1, c2, c3)`."""
    q = RATIONALS.ratio
    _, c1, c2, c3 = (RATIONALS.element(c) for c in chern)
    return (
        RATIONALS.element(rank),
        c1,
        (c1 * c1 - 2 * c2) * q(1, 2),
        (c1**3 - 3 * c1 * c2 + 3 * c3) * q(1, 6),
    )


def _truncated_product(a: Sequence, b: Sequence) -> list:
    return [sum((a[i] * b[d - i] for i in range(d + 1)), RATIONALS.zero) for d in range(4)]


def _integrate(ch: Sequence) -> int:
    todd = [RATIONALS.element(x) for x in TODD]
    value = _truncated_product(ch, todd)[3]
    if int(value.denominator) != 1:
        raise ValueError(f"Non-integral Euler characteristic {value}")
    return int(value.numerator)


def riemann_roch(n: int, chern: Sequence[int] = (1, 3, 6, 4), rank: int = RANK) -> int:
    """`chi(E(n))` by Hirzebruch-Riemann-Roch on P^3."""
    twist = [RATIONALS.element(n**d) * RATIONALS.ratio(1, _factorial(d)) for d in range(4)]
    return _integrate(_truncated_product(chern_character(chern, rank), twist))


def expected_moduli_dimension(chern: Sequence[int] = (1, 3, 6, 4), rank: int = RANK) -> int:
    """`1 - chi(End E)` for a simple bundle with vanishing `h^2(End E)`."""
    ch = chern_character(chern, rank)
    dual = [ch[0], -ch[1], ch[2], -ch[3]]
    return 1 - _integrate(_truncated_product(ch, dual))


def moduli_count() -> int:
    """`dim P(U* x W x V*) - dim PGL(U) - dim PGL(W) = 35 - 8 - 8`."""
    return (3 * 3 * 4 - 1) - (3 * 3 - 1) - (3 * 3 - 1)


@dataclass(frozen=True)
class CohomologyRow:
    n: int
    h: tuple
    chi: int
    provenance: tuple


@dataclass(frozen=True)
class CohomologyTable:
    """Dimensions `h^q(E(n))` with the Euler characteristic and the provenance of every cell."""

    rows: tuple

    def row(self, n: int) -> CohomologyRow:
        return next(r for r in self.rows if r.n == n)

    def euler_consistent(self) -> bool:
        """Whether every row satisfies `h0 - h1 + h2 - h3 = chi`."""
        return all(r.h[0] - r.h[1] + r.h[2] - r.h[3] == r.chi for r in self.rows)

    def to_frame(self) -> pd.DataFrame:
        """The table as a `pandas.DataFrame` indexed by the twist `n`."""
        records = []
        for r in self.rows:
            record = {"n": r.n, **{f"h{q}": r.h[q] for q in range(4)}, "chi": r.chi}
            record.update({f"h{q}_source": r.provenance[q] for q in range(4)})
            records.append(record)
        return pd.DataFrame.from_records(records).set_index("n")

    def to_json(self) -> list[dict]:
        return [
            {"n": r.n, "h": list(r.h), "chi": r.chi, "provenance": list(r.provenance)}
            for r in self.rows
        ]


MINIMAL_ROWS = {0: (6, 0, 0, 0), -1: (0, 3, 0, 0), -2: (0, 3, 0, 0), -3: (0, 0, 0, 0), -4: (0, 0, 0, 0)}
"""Cohomology of the bundle attached to a general tensor at the twists `-4, ..., 0`."""


def minimal_cohomology(table: CohomologyTable) -> bool:
    """Whether the table matches `MINIMAL_ROWS` and `h^1(E(n))` vanishes for every other computed twist."""
    for r in table.rows:
        if r.n in MINIMAL_ROWS and r.h != MINIMAL_ROWS[r.n]:
            return False
        if r.n not in (-2, -1) and r.h[1] != 0:
            return False
    return True


@dataclass(frozen=True)
class MultiplicationResult:
    """Outcome of reading the multiplication tensor back off `coker Phi_-1`."""

    ok: bool
    recovered: Optional[TriTensor]
    diagnostic: str


@dataclass(frozen=True)
class LocusResult:
    """Comparison of the section degeneracy locus with the zero set of the reversed cubic over `F_p`."""

    ok: bool
    prime: int
    degenerate_points: int
    cubic_points: int
    mismatches: tuple

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "prime": self.prime,
            "degenerate_points": self.degenerate_points,
            "cubic_points": self.cubic_points,
            "mismatches": [list(m) for m in self.mismatches],
        }


class KernelBundleModel:
    """Exact model of the kernel bundle of a (3,3,4) tensor with legs `(U*, W, V*)`.

    The maps `Phi_n` and the section basis are computed on first use and cached on the instance.
    """

    def __init__(self, tensor: TriTensor):
        tensor.require_dims()
        self.tensor = tensor
        self._maps: dict[int, DomainMatrix] = {}
        self._sections: Optional[tuple] = None

    @property
    def field(self) -> FieldTag:
        return self.tensor.field

    def phi(self, n: int) -> DomainMatrix:
        """The map `Phi_n` on global sections, for `n >= -1`, as a sparse matrix.

        Source basis `(i, k, m)` with `m` in `monomial_basis(4, n + 1)`, target basis `(j, m)` followed by `(i, m')`
        with `m'` in `monomial_basis(4, n + 2)`.
        """
        if n < -1:
            raise ValueError(f"Phi_n is only defined for n >= -1, got {n}")
        if n not in self._maps:
            self._maps[n] = self._build_phi(n)
        return self._maps[n]

    def _build_phi(self, n: int) -> DomainMatrix:
        source = monomial_basis(4, n + 1)
        target = monomial_basis(4, n + 2)
        target_index = {m: r for r, m in enumerate(target)}
        offset = 3 * len(source)
        rows: dict[int, dict] = {}
        for i in range(3):
            for k in range(4):
                for s, monomial in enumerate(source):
                    col = (i * 4 + k) * len(source) + s
                    for j in range(3):
                        value = self.tensor[i, j, k]
                        if value:
                            rows.setdefault(j * len(source) + s, {})[col] = value
                    shifted = tuple(e + 1 if v == k else e for v, e in enumerate(monomial))
                    rows.setdefault(offset + i * len(target) + target_index[shifted], {})[col] = self.field.one
        shape = (offset + 3 * len(target), 12 * len(source))
        logger.debug("Phi_%s has shape %s", n, shape)
        return DomainMatrix(rows, shape, self.field.domain)

    def h0(self, n: int) -> int:
        m = self.phi(n)
        return m.shape[1] - matrix_rank(m)

    def h1(self, n: int) -> int:
        m = self.phi(n)
        return m.shape[0] - matrix_rank(m)

    def cohomology_row(self, n: int) -> CohomologyRow:
        """One row of the cohomology table."""
        if n >= -1:
            m = self.phi(n)
            rank = matrix_rank(m)
            h = (m.shape[1] - rank, m.shape[0] - rank, 0, 0)
            provenance = (COMPUTED, COMPUTED, VANISHING, VANISHING)
        else:
            k = n + 2
            h = (
                0,
                3 * bott_dimension(3, 1, k, 1),
                3 * bott_dimension(3, 1, k, 2),
                3 * bott_dimension(3, 1, k, 3) - 3 * line_bundle_cohomology(3, n + 1, 3),
            )
            provenance = (DERIVED,) * 4
        return CohomologyRow(n, h, euler_characteristic(n), provenance)

    def cohomology_table(self, twists: Sequence[int] = DEFAULT_TWISTS) -> CohomologyTable:
        """The cohomology table for the given twists."""
        rows = tuple(self.cohomology_row(n) for n in twists)
        logger.info("Cohomology table computed for twists %s..%s", min(twists), max(twists))
        return CohomologyTable(rows)

    def flattening_rank(self) -> int:
        """Rank of the multiplication map `U x V -> W`."""
        rows = [[self.tensor[i, j, k] for i in range(3) for k in range(4)] for j in range(3)]
        return matrix_rank(dense_matrix(rows, self.field))

    def recovered_multiplication(self) -> Optional[TriTensor]:
        """The tensor `U x V -> W` read off the identification of `coker Phi_-1` with `W`, if that holds.

        Solves `Phi_-1(x) - sum_j c_j (e_j, 0) = (0, e_i x_k)` for every `(i, k)` and returns `R[i][j][k] = c_j`.
        """
        phi = self.phi(-1).to_dense().to_list()
        minus_one = -self.field.one
        augmented = [row + [minus_one if r == j else self.field.zero for j in range(3)] for r, row in enumerate(phi)]
        system = dense_matrix(augmented, self.field)
        if matrix_rank(system) != 15:
            return None
        solution = system.inv().to_dense().to_list()
        entries = [[[solution[12 + j][3 + i * 4 + k] for k in range(4)] for j in range(3)] for i in range(3)]
        return TriTensor(entries, self.field, self.tensor.legs)

    def multiplication_check(self) -> MultiplicationResult:
        """Whether the multiplication map recovered from `coker Phi_-1` equals the tensor."""
        rank = self.flattening_rank()
        if rank < 3:
            return MultiplicationResult(False, None, f"multiplication map U x V -> W has rank {rank} < 3")
        recovered = self.recovered_multiplication()
        if recovered is None:
            return MultiplicationResult(False, None, "cokernel of Phi_-1 is not spanned by W")
        ok = recovered == self.tensor
        return MultiplicationResult(ok, recovered, "recovered tensor equals input" if ok else "recovered tensor differs")

    def section_basis(self) -> tuple:
        """Canonical basis of `H^0(E)` as vectors in `U x V x V`, indexed `(i * 4 + k) * 4 + l`."""
        if self._sections is None:
            kernel = matrix_kernel(self.phi(0))
            if len(kernel) != 6:
                logger.error("Kernel bundle has %s global sections", len(kernel))
                raise SectionCountError(len(kernel))
            self._sections = tuple(kernel)
        return self._sections

    def _fiber_rank(self, y: Sequence) -> int:
        zero = self.field.zero
        rows = []
        for j in range(3):
            rows.append([self.tensor[i, j, k] for i in range(3) for k in range(4)])
        for i2 in range(3):
            rows.append([y[k] if i == i2 else zero for i in range(3) for k in range(4)])
        return matrix_rank(dense_matrix(rows, self.field))

    def degeneracy_test(self, y: Sequence) -> int:
        """Rank of the six section values in the fiber of `E` at the point `y` of `P(V*)`."""
        values = [self.field.element(v) for v in y]
        if self._fiber_rank(values) != 6:
            raise JumpingPointError(f"Fiber map drops rank at {list(y)}")
        zero = self.field.zero
        columns = []
        for section in self.section_basis():
            columns.append(
                [sum((section[(i * 4 + k) * 4 + l] * values[l] for l in range(4)), zero) for i in range(3) for k in range(4)]
            )
        return matrix_rank(dense_matrix(columns, self.field))

    def section_residues(self, p: int) -> np.ndarray:
        """Section basis reduced modulo `p`, shape `(6, 12, 4)`."""
        sections = self.section_basis()
        return np.array([[self.field.residue(x, p) for x in s] for s in sections], dtype=np.int64).reshape(6, 12, 4)


def degeneracy_locus_check(model: KernelBundleModel, p: int = DEFAULT_SCAN_PRIME, limit: int = 10) -> LocusResult:
    """Compare, over `F_p`, the points of `P(V*)` where the sections span less than the fiber with the cubic surface
    of the reversing construction.

    The model's tensor is reduced modulo `p` first when it is rational.
    """
    tensor = model.tensor.reduce_mod(p) if model.field.is_rational else model.tensor
    p = tensor.field.modulus
    reduced = KernelBundleModel(tensor) if tensor is not model.tensor else model
    sections = reduced.section_residues(p)
    cubic = det_cubic(reversing_construction(tensor))
    degenerate = on_cubic = 0
    mismatches = []
    for chunk in projective_points(3, p):
        values = np.zeros((len(chunk), 12, 6), dtype=np.int64)
        for l in range(4):
            values = (values + chunk[:, l, None, None] * np.transpose(sections[:, :, l])[None] % p) % p
        low_rank = batched_rank_mod_p(values, p) <= 5
        zero = evaluate_mod_p(cubic, chunk, p) == 0
        degenerate += int(low_rank.sum())
        on_cubic += int(zero.sum())
        for point in chunk[low_rank != zero][: max(0, limit - len(mismatches))]:
            mismatches.append(tuple(int(x) for x in point))
    ok = degenerate == on_cubic and not mismatches
    if not ok:
        logger.warning("Degeneracy locus and reversed cubic differ over F_%s", p)
    return LocusResult(ok, p, degenerate, on_cubic, tuple(mismatches))
