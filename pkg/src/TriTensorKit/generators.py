"""Deterministic tensor generation: seeded random tensors, tensors from six plane points and named fixtures."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .exact import RATIONALS, FieldTag
from .hilbert_burch import PlanePoint, SpecialPositionError, SyzygyDimensionError, points_to_tensor
from .tensor import CUBIC_DIMS, TriTensor

logger = logging.getLogger("TriTensorKit")

KINDS = ("random-entries", "from-points", "fixture")
"""Kinds of [GeneratorSpec][(m).]."""

DEFAULT_BOUND = 5
"""Random rational entries and point coordinates are drawn from `[-bound, bound]`."""

POINT_ATTEMPTS = 100
"""Number of seeded draws tried before giving up on six points in general position."""

CAYLEY6_POINTS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (1, 4, 9))
"""Six points in general position with rational double six."""


def doubleline_1() -> TriTensor:
    """Tensor whose slices over `P^3` drop to rank 1 along the line `x0 = x1 = 0`."""
    return TriTensor.from_sparse(
        {(0, 0, 0): 1, (0, 2, 1): 1, (1, 1, 1): 1, (1, 2, 0): -1, (2, 0, 2): -1, (2, 1, 3): -1}
    )


def doubleline_2() -> TriTensor:
    """Tensor whose slices over `P^3` drop to rank 1 along the line `x1 = x3 = 0`."""
    return TriTensor.from_sparse(
        {(0, 0, 3): 1, (0, 1, 2): -1, (0, 2, 0): -1, (1, 0, 1): -1, (1, 2, 3): 1, (2, 1, 3): 1, (2, 2, 1): -1}
    )


def cayley6() -> TriTensor:
    """Hilbert-Burch tensor of `CAYLEY6_POINTS`."""
    return points_to_tensor([PlanePoint.from_coordinates(p) for p in CAYLEY6_POINTS])


FIXTURES: dict[str, Callable[[], TriTensor]] = {
    "doubleline-1": doubleline_1,
    "doubleline-2": doubleline_2,
    "cayley6": cayley6,
}
"""Named fixture tensors, all over the rationals."""


def fixture(name: str) -> TriTensor:
    """Build a named fixture tensor."""
    try:
        build = FIXTURES[name]
    except KeyError:
        raise ValueError(f"Unknown fixture {name!r}, choose from {sorted(FIXTURES)}") from None
    return build()


def random_tensor(
    seed: int, field: FieldTag = RATIONALS, bound: int = DEFAULT_BOUND, dims: Sequence[int] = CUBIC_DIMS
) -> TriTensor:
    """Tensor with independent uniform entries: integers in `[-bound, bound]` over Q, residues over `F_p`."""
    rng = np.random.default_rng(seed)
    if field.is_rational:
        entries = rng.integers(-bound, bound + 1, size=tuple(dims))
    else:
        entries = rng.integers(0, field.modulus, size=tuple(dims))
    return TriTensor(entries, field)


def random_points(seed: int, field: FieldTag = RATIONALS, bound: int = DEFAULT_BOUND) -> list[PlanePoint]:
    """Six seeded random points whose cubic system has the expected Hilbert-Burch shape.

    Draws are repeated from the same generator until the six points are distinct and in general enough position for
    `points_to_tensor`.
    """
    rng = np.random.default_rng(seed)
    low, high = (-bound, bound + 1) if field.is_rational else (0, field.modulus)
    for attempt in range(POINT_ATTEMPTS):
        coords = rng.integers(low, high, size=(6, 3))
        if any(not row.any() for row in coords):
            continue
        points = [PlanePoint.from_coordinates(row.tolist(), field) for row in coords]
        if len(set(points)) != 6:
            continue
        try:
            points_to_tensor(points)
        except (SpecialPositionError, SyzygyDimensionError) as err:
            logger.debug("Resampling points (attempt %s): %s", attempt, err)
            continue
        return points
    raise RuntimeError(f"No six points in general position after {POINT_ATTEMPTS} draws with seed {seed}")


def degenerate_section_tensor(seed: int, bound: int = DEFAULT_BOUND) -> TriTensor:
    """Random tensor whose `W`-slab 0 is the rank-one form `e_0 x e_0`, which forces an extra global section."""
    entries = random_tensor(seed, bound=bound).entries.copy()
    entries[:, 0, :] = RATIONALS.zero
    entries[0, 0, 0] = RATIONALS.one
    return TriTensor(entries)


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for a tensor; equal specs always build equal tensors.

    Args:
        kind: one of `KINDS`.
        seed: seed of the random generator.
        field: field of the tensor.
        bound: bound on random entries or point coordinates.
        fixture: fixture name, for `kind="fixture"`.
        points: explicit point coordinates for `kind="from-points"`, random points when omitted.
    """

    kind: str = "random-entries"
    seed: int = 0
    field: FieldTag = RATIONALS
    bound: int = DEFAULT_BOUND
    fixture: Optional[str] = None
    points: Optional[tuple] = None

    def build(self) -> TriTensor:
        if self.kind == "random-entries":
            return random_tensor(self.seed, self.field, self.bound)
        if self.kind == "from-points":
            if self.points is None:
                return points_to_tensor(random_points(self.seed, self.field, self.bound))
            return points_to_tensor([PlanePoint.from_coordinates(p, self.field) for p in self.points])
        if self.kind == "fixture":
            if self.fixture is None:
                raise ValueError("A fixture spec needs a fixture name")
            t = fixture(self.fixture)
            return t if self.field.is_rational else t.reduce_mod(self.field.modulus)
        raise ValueError(f"Unknown generator kind {self.kind!r}, choose from {KINDS}")
