"""Lattice combinatorics of the blow-up of the plane in six points.

A class `n L - a_1 E_1 - ... - a_6 E_6` is stored as a [DivisorClass][(m).]. The module provides the intersection
pairing, the standard Cremona transformations, the reduction loop bringing a class with
`n^2 = sum a_i^2 + 4` and `3n = sum a_i + 6` (the nn2 conditions) down to degree at most 3, and an exhaustive
enumeration of the solutions of these conditions.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .exact import TriTensorError
from .utils import parse_divisor_class

logger = logging.getLogger("TriTensorKit")

REDUCTION_STEP_LIMIT = 100
"""Number of Cremona steps after which a reduction is declared stalled."""

NN2_DESK_BOUND = 64
"""Largest degree accepted by [enumerate_nn2][(m).]."""


class NN2PreconditionError(TriTensorError, ValueError):
    """Raised when an operation needs a class satisfying the nn2 conditions."""


class ReductionStallError(TriTensorError):
    """Raised when the reduction loop does not reach degree 3 within `REDUCTION_STEP_LIMIT` steps."""


@dataclass(frozen=True)
class DivisorClass:
    """The class `n L - sum a_i E_i` in the Picard lattice.

    Args:
        n: degree, the coefficient of the pullback `L` of a line.
        a: multiplicities at the six points.
    """

    n: int
    a: tuple

    def __post_init__(self):
        if len(self.a) != 6:
            raise ValueError(f"A divisor class needs 6 multiplicities, got {len(self.a)}")
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))

    @classmethod
    def parse(cls, text: str) -> "DivisorClass":
        """Create a class from its command-line form `"n:a1,a2,a3,a4,a5,a6"`."""
        return cls(*parse_divisor_class(text))

    def sorted(self) -> "DivisorClass":
        """The class with multiplicities sorted in descending order."""
        return DivisorClass(self.n, tuple(sorted(self.a, reverse=True)))

    def __str__(self) -> str:
        return f"({self.n};{','.join(str(x) for x in self.a)})"

    def to_json(self) -> dict:
        return {"n": self.n, "a": list(self.a)}


HYPERPLANE = DivisorClass(3, (1,) * 6)
"""The anticanonical class `3L - sum E_i`, the hyperplane class of the cubic surface."""


def pairing(c1: DivisorClass, c2: DivisorClass) -> int:
    """Intersection number `n n' - sum a_i a_i'`."""
    return c1.n * c2.n - sum(x * y for x, y in zip(c1.a, c2.a))


def is_nn2(c: DivisorClass) -> bool:
    """Whether `n^2 = sum a_i^2 + 4` and `3n = sum a_i + 6`."""
    return pairing(c, c) == 4 and pairing(c, HYPERPLANE) == 6


def cremona(c: DivisorClass, triple: Sequence[int]) -> DivisorClass:
    """Standard Cremona transformation centered at three of the six points.

    Args:
        c: the class to transform.
        triple: three distinct point indices, numbered from 1.
    """
    i, j, k = (x - 1 for x in triple)
    if len({i, j, k}) != 3 or not all(0 <= x < 6 for x in (i, j, k)):
        raise ValueError(f"Cremona triple must be three distinct indices in 1..6, got {tuple(triple)}")
    a = list(c.a)
    a[i], a[j], a[k] = c.n - c.a[j] - c.a[k], c.n - c.a[i] - c.a[k], c.n - c.a[i] - c.a[j]
    return DivisorClass(2 * c.n - c.a[i] - c.a[j] - c.a[k], tuple(a))


@dataclass(frozen=True)
class ReductionStep:
    before: DivisorClass
    triple: tuple
    after: DivisorClass

    def to_json(self) -> dict:
        return {"before": str(self.before), "triple": list(self.triple), "after": str(self.after)}


@dataclass(frozen=True)
class ReductionTrace:
    """The Cremona steps taken by [reduce][(m).] and the sorted class they end on."""

    steps: tuple
    terminal: DivisorClass
    negative_entries: tuple = ()

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "terminal": str(self.terminal),
            "negative_entries": [str(c) for c in self.negative_entries],
        }


TERMINALS = (DivisorClass(2, (0,) * 6), DivisorClass(3, (2, 1, 0, 0, 0, 0)))
"""The two classes every nn2 class reduces to."""


def reduce(c: DivisorClass) -> ReductionTrace:
    """Apply Cremona transformations at the three largest multiplicities until the degree is at most 3.

    Ties among the largest multiplicities go to the lowest index after sorting, so the triple is always `(1, 2, 3)`.
    """
    if not is_nn2(c) or min(c.a) < 0:
        raise NN2PreconditionError(f"{c} does not satisfy the nn2 conditions with nonnegative multiplicities")
    steps: list[ReductionStep] = []
    negatives: list[DivisorClass] = []
    current = c.sorted()
    while current.n > 3:
        if len(steps) >= REDUCTION_STEP_LIMIT:
            logger.error("Reduction of %s stalled after %s steps", c, len(steps))
            raise ReductionStallError(f"Reduction of {c} did not terminate within {REDUCTION_STEP_LIMIT} steps")
        after = cremona(current, (1, 2, 3))
        if after.n >= current.n and after.sorted() not in TERMINALS:
            logger.error("Cremona step did not lower the degree of %s", current)
            raise ReductionStallError(f"Degree did not decrease at {current}")
        steps.append(ReductionStep(current, (1, 2, 3), after))
        if min(after.a) < 0:
            logger.warning("Negative multiplicity after Cremona step: %s", after)
            negatives.append(after)
        current = after.sorted()
    return ReductionTrace(tuple(steps), current, tuple(negatives))


def _partitions(total: int, squares: int, parts: int, upper: int, prefix: tuple):
    if parts == 0:
        if total == 0 and squares == 0:
            yield prefix
        return
    # Cauchy-Schwarz and the bound on the largest part
    if squares * parts < total * total or squares > upper * total:
        return
    for x in range(min(upper, total), -1, -1):
        if x * x > squares:
            continue
        yield from _partitions(total - x, squares - x * x, parts - 1, x, prefix + (x,))


def enumerate_nn2(n_max: int = NN2_DESK_BOUND) -> list[DivisorClass]:
    """All nn2 classes with `n <= n_max` and sorted nonnegative multiplicities, ordered by degree."""
    if n_max > NN2_DESK_BOUND:
        raise ValueError(f"Enumeration is bounded by n <= {NN2_DESK_BOUND}, got {n_max}")
    solutions = []
    for n in range(2, n_max + 1):
        total, squares = 3 * n - 6, n * n - 4
        for a in _partitions(total, squares, 6, total, ()):
            solutions.append(DivisorClass(n, a))
    logger.debug("Found %s nn2 classes with n <= %s", len(solutions), n_max)
    return solutions


def dcheck(c: DivisorClass) -> tuple[DivisorClass, int, int]:
    """The class `D = c - H` with its intersections `D.H` and `D.D`, which are 3 and -5 for every nn2 class."""
    if not is_nn2(c):
        raise NN2PreconditionError(f"{c} does not satisfy the nn2 conditions")
    d = DivisorClass(c.n - HYPERPLANE.n, tuple(x - y for x, y in zip(c.a, HYPERPLANE.a)))
    return d, pairing(d, HYPERPLANE), pairing(d, d)


def exhaustive_check(n_max: int = NN2_DESK_BOUND, solutions: Optional[list[DivisorClass]] = None) -> dict:
    """Reduce every nn2 class up to degree `n_max` and summarize the terminals reached.

    The summary is `ok` when exactly the two `TERMINALS` occur, no reduction stalls and `dcheck` gives `(3, -5)`
    everywhere.
    """
    solutions = enumerate_nn2(n_max) if solutions is None else solutions
    terminals: Counter = Counter()
    negatives, stalls, dfailures = [], [], []
    for c in solutions:
        try:
            trace = reduce(c)
        except ReductionStallError:
            stalls.append(str(c))
            continue
        terminals[str(trace.terminal)] += 1
        negatives.extend(str(x) for x in trace.negative_entries)
        if dcheck(c)[1:] != (3, -5):
            dfailures.append(str(c))
    all_equal = [str(c) for c in solutions if len(set(c.a)) == 1]
    ok = set(terminals) <= {str(t) for t in TERMINALS} and not stalls and not dfailures
    if negatives:
        logger.warning("%s negative multiplicities met during reductions", len(negatives))
    logger.info("Reduced %s nn2 classes, terminals %s", len(solutions), dict(terminals))
    return {
        "ok": ok,
        "n_max": n_max,
        "solutions": len(solutions),
        "terminals": dict(sorted(terminals.items())),
        "all_equal": all_equal,
        "negative_entries": negatives,
        "stalls": stalls,
        "dcheck_failures": dfailures,
    }
