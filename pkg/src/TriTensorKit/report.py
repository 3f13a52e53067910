"""Analysis reports and verification suites.

[Analyzer][(m).] runs every check on a single (3,3,4) tensor in a fixed dependency order and assembles a
schema-versioned JSON report. [verify][(m).] runs the invariants of one or all modules over seeded random instances
and the fixtures, summarizing the outcomes with `pandas`.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import pandas as pd

from .cohomology import (
    DEFAULT_TWISTS,
    KernelBundleModel,
    SectionCountError,
    degeneracy_locus_check,
    expected_moduli_dimension,
    minimal_cohomology,
    moduli_count,
)
from .cremona import NN2_DESK_BOUND, exhaustive_check
from .eagon_northcott import en_complex, hilbert_function, verify_dd_zero, verify_generic_exactness
from .exact import BadReductionError, TriTensorError
from .generators import FIXTURES, random_points, random_tensor
from .hilbert_burch import base_points, min_slice_rank_scan, points_to_tensor
from .scan import DEFAULT_SCAN_PRIME, check_scan_prime
from .schur import (
    cubic_correspondence_check,
    double_six,
    orthogonality_check,
    q_invariant_under_trivial_involution,
    reversal_quadric_check,
    schur_carries_U_to_Uprime,
    schur_quadric,
)
from .tensor import MainAssumptionError, TriTensor, det_cubic, involution_roundtrip, rank_profile, trivial_involution

logger = logging.getLogger("TriTensorKit")

REPORT_SCHEMA = "tritensor-report/1"
"""Schema tag of analysis reports."""

VERIFY_SCHEMA = "tritensor-verify/1"
"""Schema tag of verification summaries."""

SUITES = ("involution", "schur", "cohomology", "cremona", "en")
"""Verification suites, `"all"` runs every one of them."""

EN_TWISTS = (1, 2, 3)
"""Twists of the Eagon-Northcott complexes checked by the `en` suite."""


class CheckSkipped(Exception):
    """Raised inside a check to mark it as skipped with a reason."""


@dataclass
class CheckOutcome:
    """Status of one check: `"pass"`, `"fail"` or `"skip"`, with a reason and the data it produced."""

    name: str
    status: str
    reason: str = ""
    data: dict = field(default_factory=dict)
    elapsed_ms: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"status": self.status, "reason": self.reason, "data": self.data}
        if self.elapsed_ms is not None:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


class Analyzer:
    """Run all checks on a tensor in dependency order.

    A check runs only when every check it depends on has passed, otherwise it is skipped and names the upstream
    cause. Checks in `smooth_checks` are additionally skipped when the slices of the tensor drop to rank 1 somewhere
    over the scan field, i.e. when the determinantal cubic is singular there.
    A check that has to reduce the tensor modulo the scan prime is skipped when that prime divides the denominator of
    an entry.

    Example:
        ```python
        from TriTensorKit.generators import fixture
        from TriTensorKit.report import Analyzer
        report = Analyzer(scan_prime=101).analyze(fixture("cayley6"))
        ```
    """

    check_order = (
        "main_assumption",
        "det_cubics",
        "slice_rank",
        "base_points",
        "involution",
        "schur",
        "double_six",
        "cohomology",
        "multiplication",
        "degeneracy_locus",
        "moduli",
    )
    """Names of the checks, in the order they run."""

    dependencies = {
        "involution": ("main_assumption",),
        "schur": ("main_assumption", "slice_rank"),
        "base_points": ("slice_rank",),
        "double_six": ("schur", "base_points"),
        "cohomology": ("slice_rank",),
        "multiplication": ("slice_rank",),
        "degeneracy_locus": ("main_assumption", "cohomology"),
    }
    """Upstream checks that have to pass before a check runs."""

    smooth_checks = frozenset({"base_points", "schur", "double_six", "cohomology", "multiplication", "degeneracy_locus"})
    """Checks that need every slice over `P^3` to have rank at least 2."""

    def __init__(
        self,
        scan_prime: int = DEFAULT_SCAN_PRIME,
        skip: Sequence[str] = (),
        twists: Sequence[int] = DEFAULT_TWISTS,
        timing: bool = True,
    ):
        """Configure an analysis run.

        Args:
            scan_prime: prime used for exhaustive scans of projective spaces.
            skip: names of checks not to run; their dependents are skipped too.
            twists: twists of the cohomology table.
            timing: whether outcomes record their running time, disable for byte-stable reports.
        """
        unknown = set(skip) - set(self.check_order)
        if unknown:
            raise ValueError(f"Unknown checks {sorted(unknown)}, choose from {list(self.check_order)}")
        check_scan_prime(scan_prime)
        self.scan_prime = scan_prime
        self.skip = frozenset(skip)
        self.twists = tuple(twists)
        self.timing = timing

    def analyze(self, t: TriTensor) -> dict[str, Any]:
        """Run every check on `t` and return the report as a JSON-ready dict."""
        t.require_dims()
        state: dict[str, Any] = {"tensor": t}
        outcomes: dict[str, CheckOutcome] = {}
        for name in self.check_order:
            outcomes[name] = self._run(name, state, outcomes)
        summary = {
            status: sum(1 for o in outcomes.values() if o.status == status) for status in ("pass", "fail", "skip")
        }
        summary["ok"] = summary["fail"] == 0
        logger.info("Analysis finished: %s passed, %s failed, %s skipped", summary["pass"], summary["fail"], summary["skip"])
        return {
            "schema": REPORT_SCHEMA,
            "tensor": t.to_json(),
            "scan_prime": self.scan_prime,
            "checks": {name: outcomes[name].to_json() for name in sorted(outcomes)},
            "summary": summary,
        }

    def _blocked(self, name: str, state: dict, outcomes: dict[str, CheckOutcome]) -> Optional[str]:
        if name in self.skip:
            return "skipped on request"
        for upstream in self.dependencies.get(name, ()):
            if not outcomes[upstream].passed:
                return f"requires {upstream} ({outcomes[upstream].status})"
        if name in self.smooth_checks and not state.get("smooth", False):
            return f"singular cubic: minimum slice rank {state.get('min_rank')} over F_{self.scan_prime}"
        return None

    def _run(self, name: str, state: dict, outcomes: dict[str, CheckOutcome]) -> CheckOutcome:
        reason = self._blocked(name, state, outcomes)
        if reason is not None:
            return CheckOutcome(name, "skip", reason)
        start = time.perf_counter()
        try:
            ok, data = getattr(self, f"_check_{name}")(state)
            outcome = CheckOutcome(name, "pass" if ok else "fail", "" if ok else f"{name} check failed", data)
        except CheckSkipped as err:
            outcome = CheckOutcome(name, "skip", str(err))
        except BadReductionError as err:
            logger.warning("Check %s cannot reduce the tensor modulo %s", name, err.p)
            outcome = CheckOutcome(name, "skip", f"scan prime {err.p} divides a denominator ({err.denominator})")
        except TriTensorError as err:
            logger.warning("Check %s raised %s", name, type(err).__name__)
            outcome = CheckOutcome(name, "fail", f"{type(err).__name__}: {err}")
        if self.timing:
            outcome.elapsed_ms = (time.perf_counter() - start) * 1000
        logger.debug("check %s: %s", name, outcome.status)
        return outcome

    def _check_main_assumption(self, state: dict) -> tuple[bool, dict]:
        profile = rank_profile(state["tensor"])
        return profile["contraction"] == 9, {"ranks": profile}

    def _check_det_cubics(self, state: dict) -> tuple[bool, dict]:
        t = state["tensor"]
        cubic, swapped = det_cubic(t), det_cubic(trivial_involution(t))
        state["cubic"] = cubic
        data = {"cubic": str(cubic.as_expr()), "cubic_swapped_legs": str(swapped.as_expr())}
        return bool(cubic), data

    def _check_slice_rank(self, state: dict) -> tuple[bool, dict]:
        scan = min_slice_rank_scan(state["tensor"], 2, self.scan_prime)
        state["min_rank"] = scan.min_rank
        state["smooth"] = scan.min_rank >= 2
        return True, {"min_rank": scan.min_rank, "witness": list(scan.witness), "points_scanned": scan.points_scanned}

    def _check_base_points(self, state: dict) -> tuple[bool, dict]:
        t = state["tensor"]
        mode = "minors" if t.field.is_rational else "scan"
        sides = {side: base_points(t, side, mode, None if t.field.is_rational else self.scan_prime) for side in "UW"}
        state["rational_double_six"] = t.field.is_rational and all(s.complete for s in sides.values())
        return True, {side: result.to_json() for side, result in sides.items()}

    def _check_involution(self, state: dict) -> tuple[bool, dict]:
        try:
            ok = involution_roundtrip(state["tensor"])
        except MainAssumptionError as err:
            raise CheckSkipped(f"cross-product image is degenerate: contraction rank {err.rank}") from err
        return ok, {"roundtrip": ok}

    def _check_schur(self, state: dict) -> tuple[bool, dict]:
        t = state["tensor"]
        quadric = schur_quadric(t)
        state["quadric"] = quadric
        results = {
            "nondegenerate": quadric.nondegenerate,
            "carries_U_to_Uprime": schur_carries_U_to_Uprime(t),
            "invariant_under_trivial_involution": q_invariant_under_trivial_involution(t),
            "reversal_is_inverse": reversal_quadric_check(t),
        }
        correspondence = cubic_correspondence_check(t)
        results["correspondence"] = correspondence.direction
        ok = all(v for k, v in results.items() if k != "correspondence") and correspondence.pinned
        return ok, {**quadric.to_json(), **results}

    def _check_double_six(self, state: dict) -> tuple[bool, dict]:
        t = state["tensor"]
        if state.get("rational_double_six"):
            six, quadric = double_six(t), state["quadric"]
        else:
            six = double_six(t, self.scan_prime if t.field.is_rational else None)
            quadric = schur_quadric(t.reduce_mod(six.field.modulus)) if t.field.is_rational else state["quadric"]
        result = orthogonality_check(quadric, six)
        return result.ok and six.schlafli_pattern, {**six.to_json(), "orthogonality": result.to_json()}

    def _model(self, state: dict) -> KernelBundleModel:
        if "model" not in state:
            state["model"] = KernelBundleModel(state["tensor"])
        return state["model"]

    def _check_cohomology(self, state: dict) -> tuple[bool, dict]:
        table = self._model(state).cohomology_table(self.twists)
        return table.euler_consistent() and minimal_cohomology(table), {"table": table.to_json()}

    def _check_multiplication(self, state: dict) -> tuple[bool, dict]:
        result = self._model(state).multiplication_check()
        return result.ok, {"diagnostic": result.diagnostic}

    def _check_degeneracy_locus(self, state: dict) -> tuple[bool, dict]:
        result = degeneracy_locus_check(self._model(state), self.scan_prime)
        return result.ok, result.to_json()

    def _check_moduli(self, state: dict) -> tuple[bool, dict]:
        expected, count = expected_moduli_dimension(), moduli_count()
        return expected == count == 19, {"expected_dimension": expected, "parameter_count": f"35 - 16 = {count}"}


@dataclass
class TrialRecord:
    suite: str
    instance: str
    status: str
    detail: str = ""


def _instances(trials: int, seed: int) -> list[tuple[str, Callable[[], TriTensor]]]:
    randoms = [(f"random-{seed + k}", lambda s=seed + k: random_tensor(s)) for k in range(trials)]
    return randoms + list(FIXTURES.items())


def _suite_involution(trials: int, seed: int, scan_prime: int) -> list[TrialRecord]:
    records = []
    for name, build in _instances(trials, seed):
        try:
            ok = involution_roundtrip(build())
        except MainAssumptionError as err:
            records.append(TrialRecord("involution", name, "resampled", f"contraction rank {err.rank}"))
            continue
        records.append(TrialRecord("involution", name, "pass" if ok else "fail"))
    return records


def _suite_schur(trials: int, seed: int, scan_prime: int) -> list[TrialRecord]:
    records = []
    for name, build in _instances(trials, seed):
        if name.startswith("doubleline"):
            continue
        t = build()
        try:
            ok = (
                schur_quadric(t).nondegenerate
                and schur_carries_U_to_Uprime(t)
                and q_invariant_under_trivial_involution(t)
                and cubic_correspondence_check(t).pinned
            )
        except MainAssumptionError as err:
            records.append(TrialRecord("schur", name, "resampled", f"contraction rank {err.rank}"))
            continue
        except TriTensorError as err:
            records.append(TrialRecord("schur", name, "fail", f"{type(err).__name__}: {err}"))
            continue
        records.append(TrialRecord("schur", name, "pass" if ok else "fail"))
    return records


def _suite_cohomology(trials: int, seed: int, scan_prime: int) -> list[TrialRecord]:
    records = []
    instances = [(f"points-{seed + k}", lambda s=seed + k: points_to_tensor(random_points(s))) for k in range(trials)]
    for name, build in instances + [("cayley6", FIXTURES["cayley6"])]:
        model = KernelBundleModel(build())
        table = model.cohomology_table(range(-6, 5))
        ok = table.euler_consistent() and minimal_cohomology(table) and model.multiplication_check().ok
        detail = ""
        if ok and name == "cayley6":
            try:
                ok = degeneracy_locus_check(model, scan_prime).ok
            except SectionCountError as err:
                ok, detail = False, str(err)
        records.append(TrialRecord("cohomology", name, "pass" if ok else "fail", detail))
    return records


def _suite_cremona(trials: int, seed: int, scan_prime: int) -> list[TrialRecord]:
    summary = exhaustive_check(NN2_DESK_BOUND)
    detail = f"{summary['solutions']} classes, terminals {summary['terminals']}"
    return [TrialRecord("cremona", f"n<={NN2_DESK_BOUND}", "pass" if summary["ok"] else "fail", detail)]


def _suite_en(trials: int, seed: int, scan_prime: int) -> list[TrialRecord]:
    records = []
    for k in range(trials):
        t = random_tensor(seed + k)
        failures = []
        for twist in EN_TWISTS:
            c = en_complex(t, twist)
            if not verify_dd_zero(c).ok:
                failures.append(f"d^2 != 0 at twist {twist}")
            elif not verify_generic_exactness(c, samples=20, seed=seed + k).ok:
                failures.append(f"not exact at twist {twist}")
        values = hilbert_function(en_complex(t, 1, (0, 1, 2)), range(2, 7)).values
        if set(values) != {6}:
            failures.append(f"Hilbert function {values}")
        records.append(TrialRecord("en", f"random-{seed + k}", "fail" if failures else "pass", "; ".join(failures)))
    return records


SUITE_RUNNERS: dict[str, Callable[[int, int, int], list[TrialRecord]]] = {
    "involution": _suite_involution,
    "schur": _suite_schur,
    "cohomology": _suite_cohomology,
    "cremona": _suite_cremona,
    "en": _suite_en,
}


def verify(suite: str = "all", trials: int = 10, seed: int = 0, scan_prime: int = DEFAULT_SCAN_PRIME) -> dict[str, Any]:
    """Run one verification suite (or all of them) and summarize pass counts per suite.

    Args:
        suite: one of `SUITES` or `"all"`.
        trials: number of seeded random instances per suite.
        seed: first seed, instance `k` uses `seed + k`.
        scan_prime: prime used for exhaustive scans.
    """
    names = SUITES if suite == "all" else (suite,)
    if any(name not in SUITE_RUNNERS for name in names):
        raise ValueError(f"Unknown suite {suite!r}, choose from {list(SUITES) + ['all']}")
    check_scan_prime(scan_prime)
    records = []
    for name in names:
        records.extend(SUITE_RUNNERS[name](trials, seed, scan_prime))
        logger.info("Suite %s finished", name)
    frame = pd.DataFrame([vars(r) for r in records], columns=["suite", "instance", "status", "detail"])
    counts = frame.groupby(["suite", "status"]).size().unstack(fill_value=0)
    summary = {
        name: {status: int(counts.loc[name].get(status, 0)) for status in ("pass", "fail", "resampled")}
        for name in counts.index
    }
    failures = frame[frame["status"] == "fail"]
    first = None if failures.empty else failures.iloc[0].to_dict()
    return {
        "schema": VERIFY_SCHEMA,
        "suite": suite,
        "trials": trials,
        "seed": seed,
        "summary": summary,
        "first_counterexample": first,
        "ok": failures.empty,
    }
