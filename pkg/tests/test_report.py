import pytest

from TriTensorKit.report import REPORT_SCHEMA, VERIFY_SCHEMA, Analyzer, verify
from TriTensorKit.tensor import TriTensor

SMALL_PRIME = 11


def test_unknown_skip():
    with pytest.raises(ValueError, match="Unknown checks"):
        Analyzer(skip=["nonsense"])


def test_zero_tensor_report(zero_tensor):
    report = Analyzer(scan_prime=SMALL_PRIME, timing=False).analyze(zero_tensor)
    assert report["schema"] == REPORT_SCHEMA
    checks = report["checks"]
    assert list(checks) == sorted(checks)
    assert checks["main_assumption"]["status"] == "fail"
    assert checks["det_cubics"]["status"] == "fail"
    assert checks["slice_rank"]["data"]["min_rank"] == 0
    assert checks["involution"]["reason"] == "requires main_assumption (fail)"
    assert checks["cohomology"]["status"] == "skip"
    assert checks["moduli"]["status"] == "pass"
    assert report["summary"] == {"pass": 2, "fail": 2, "skip": 7, "ok": False}


def test_doubleline_report(doubleline_tensors):
    analyzer = Analyzer(scan_prime=SMALL_PRIME, timing=False)
    for t in doubleline_tensors.values():
        report = analyzer.analyze(t)
        checks = report["checks"]
        assert checks["main_assumption"]["status"] == "pass"
        assert checks["slice_rank"]["data"]["min_rank"] == 1
        assert checks["involution"]["status"] == "skip"
        assert "degenerate" in checks["involution"]["reason"]
        assert checks["schur"]["reason"].startswith("singular cubic")
        assert report["summary"]["ok"]


def test_timing(zero_tensor):
    timed = Analyzer(scan_prime=SMALL_PRIME).analyze(zero_tensor)["checks"]
    untimed = Analyzer(scan_prime=SMALL_PRIME, timing=False).analyze(zero_tensor)["checks"]
    assert "elapsed_ms" in timed["main_assumption"]
    assert "elapsed_ms" not in untimed["main_assumption"]
    assert "elapsed_ms" not in timed["cohomology"]


def test_skip_on_request(doubleline_tensors):
    report = Analyzer(scan_prime=SMALL_PRIME, skip=["main_assumption"], timing=False).analyze(
        doubleline_tensors["doubleline-1"]
    )
    checks = report["checks"]
    assert checks["main_assumption"]["reason"] == "skipped on request"
    assert checks["involution"]["reason"] == "requires main_assumption (skip)"


def test_reports_are_reproducible(doubleline_tensors):
    analyzer = Analyzer(scan_prime=SMALL_PRIME, timing=False)
    t = doubleline_tensors["doubleline-2"]
    assert analyzer.analyze(t) == analyzer.analyze(t)


@pytest.mark.slow
def test_cayley6_report(cayley6_tensor):
    report = Analyzer(timing=False).analyze(cayley6_tensor)
    assert report["summary"] == {"pass": 11, "fail": 0, "skip": 0, "ok": True}
    assert report["checks"]["schur"]["data"]["correspondence"] == "q-carries-G-to-G*"


def test_verify_involution():
    summary = verify("involution", trials=2, seed=0)
    assert summary["schema"] == VERIFY_SCHEMA
    assert summary["ok"]
    assert summary["first_counterexample"] is None
    assert summary["summary"]["involution"]["resampled"] == 2


def test_verify_unknown_suite():
    with pytest.raises(ValueError, match="Unknown suite"):
        verify("galois")


@pytest.mark.slow
def test_verify_cremona():
    summary = verify("cremona")
    assert summary["ok"]
    assert summary["summary"]["cremona"]["pass"] == 1


def test_scan_prime_dividing_denominator_skips():
    t = TriTensor.from_sparse({(0, 0, 0): "1/11", (1, 1, 1): 1, (2, 2, 2): 1})
    checks = Analyzer(scan_prime=SMALL_PRIME, timing=False).analyze(t)["checks"]
    assert checks["slice_rank"]["status"] == "skip"
    assert checks["slice_rank"]["reason"] == "scan prime 11 divides a denominator (11)"
    assert checks["base_points"]["reason"] == "requires slice_rank (skip)"
    assert checks["moduli"]["status"] == "pass"


@pytest.mark.parametrize("prime", [1, 2, 12, 2**31 + 11])
def test_scan_prime_is_validated(prime):
    with pytest.raises(ValueError):
        Analyzer(scan_prime=prime)
    with pytest.raises(ValueError):
        verify("cremona", scan_prime=prime)


@pytest.mark.slow
def test_verify_involution_hundred_trials():
    summary = verify("involution", trials=100, seed=0)
    counts = summary["summary"]["involution"]
    assert summary["ok"]
    assert counts["fail"] == 0
    assert counts["pass"] + counts["resampled"] == 103
    assert counts["pass"] > 0
