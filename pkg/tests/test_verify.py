"""
Tests for verify module.
"""

import math

import pytest

from infolattice.config import RunConfig
from infolattice.distributions import JointDistribution, VariableSpec, from_mapping
from infolattice.verify import (
    FAMILIES,
    FamilyResult,
    VerificationReport,
    run_verification,
    show_report,
)


def test_xor_passes_every_family(xor: JointDistribution) -> None:
    """Test that XOR passes the whole identity suite."""
    report = run_verification(xor, RunConfig())
    assert len(report.families) == len(FAMILIES)
    assert report.passed
    assert report.max_residual < 1e-9
    names = [f.name for f in report.families]
    assert "conditional oracle" in names
    assert "chain decomposition" in names
    chains = next(f for f in report.families if f.name == "chain decomposition")
    assert chains.instances == 6


def test_random_pmfs_pass(random_pmfs: list[JointDistribution]) -> None:
    """Test that random distributions with two to five variables pass."""
    for d in random_pmfs[:4]:
        report = run_verification(d, RunConfig())
        failed = [f.name for f in report.families if not f.passed]
        assert not failed, f"{d.n} variables: {failed}"


def test_single_variable_and_natural_log() -> None:
    """Test the degenerate one-variable lattice in nats."""
    coin = from_mapping([VariableSpec("X", 2)], {(0,): 0.3, (1,): 0.7})
    report = run_verification(coin, RunConfig(log_base=math.e))
    assert report.passed


def test_verification_is_deterministic(xor: JointDistribution) -> None:
    """Test that repeated runs give identical reports."""
    assert run_verification(xor, RunConfig()) == run_verification(xor, RunConfig())


def test_family_result_threshold() -> None:
    """Test pass/fail at the tolerance and the report aggregate."""
    ok = FamilyResult("ok", 3, 1e-12, 1e-9)
    bad = FamilyResult("bad", 1, 2e-9, 1e-9)
    assert ok.passed and not bad.passed
    report = VerificationReport(3, [ok, bad])
    assert not report.passed
    assert report.max_residual == 2e-9
    assert bad.as_record()["passed"] is False


def test_show_report(xor: JointDistribution, capsys: pytest.CaptureFixture[str]) -> None:
    """Test the printed report table."""
    show_report(run_verification(xor, RunConfig()))
    captured = capsys.readouterr().out
    assert "Identity verification" in captured
    assert "PASS" in captured
    assert "All identity families passed" in captured

    show_report(VerificationReport(1, [FamilyResult("bad", 1, 1.0, 1e-9)]))
    assert "1 identity family(ies) failed" in capsys.readouterr().out
