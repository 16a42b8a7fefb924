"""The check library: each inequality check on light instances, plus failure
and error paths."""

import numpy as np
import pytest

from singheat import (
    CheckReport,
    GronwallInstance,
    ParameterError,
    SolveConfig,
    check_comparison,
    check_gronwall,
    check_heaviside_gap,
    check_lambda_limit,
    check_lower_bound,
    check_max_at_origin,
    check_smoothing_exponent,
    check_subsolution,
    check_uniqueness_contraction,
    default_suite,
    gronwall_envelope,
    run_suite,
    volterra_extremal,
)

LIGHT = SolveConfig(n_schedule=(1, 2, 4, 8))


def test_check_report_summary_and_json():
    rep = CheckReport(name="demo", passed=True, margin=0.0123, tolerance=1e-3, details={"k": 1})
    line = rep.summary_line()
    assert line.startswith("PASS demo margin=")
    assert "tol=" in line
    d = rep.as_json_dict()
    assert d["name"] == "demo" and d["passed"] is True and d["details"] == {"k": 1}
    bad = CheckReport(name="demo", passed=False, margin=-1.0, tolerance=1e-3)
    assert bad.summary_line().startswith("FAIL demo")


# ---------------------------------------------------------------------------
# Barrier checks
# ---------------------------------------------------------------------------

def test_subsolution_check_passes_at_reference_point():
    rep = check_subsolution(0.5, 0.3, 1, times=(0.25, 1.0))
    assert rep.passed
    assert rep.margin > 0


def test_subsolution_check_gamma_zero_equality_case():
    # at gamma = 0, q = 1/2 the barrier satisfies the integral relation with
    # equality, so the margin sits at numerical zero
    rep = check_subsolution(0.5, 0.0, 1, times=(0.5,))
    assert rep.passed
    assert abs(rep.margin) < 1e-4


def test_lower_bound_check_light():
    rep = check_lower_bound(
        "zero", 0.5, 0.3, 1, times=(0.5, 1.0), half_width=12.0, points=256, config=LIGHT
    )
    assert rep.passed
    assert rep.margin > 0
    assert set(rep.details["per_time_margin"]) == {"0.5", "1.0"}


def test_comparison_check_light_and_data_ordering_guard():
    rep = check_comparison(
        "const:1",
        "bump",
        0.5,
        0.3,
        1,
        times=(0.5,),
        half_width=12.0,
        points=128,
        config=SolveConfig(eps_fp=1e-10, n_schedule=(1, 2, 4)),
    )
    assert rep.passed
    with pytest.raises(ParameterError):
        check_comparison("bump", "const:1", 0.5, 0.3, 1, times=(0.5,), points=128)


# ---------------------------------------------------------------------------
# Gronwall machinery
# ---------------------------------------------------------------------------

def test_volterra_alpha_zero_matches_exponential():
    inst = GronwallInstance(a_const=2.0, m_const=1.5, alpha=0.0, t_end=1.0)
    t, psi = volterra_extremal(inst)
    ref = 2.0 * np.exp(1.5 * t)
    assert np.max(np.abs(psi - ref) / ref) < 1e-6


def test_gronwall_envelope_half_order_reference():
    inst = GronwallInstance(a_const=1.0, m_const=1.0, alpha=0.5, t_end=1.0)
    env = gronwall_envelope(inst, np.array([1.0]))
    # E_{1/2}(sqrt(pi)) = e^pi (1 + erf(sqrt pi)) evaluated directly
    import math

    z = math.sqrt(math.pi)
    ref = math.exp(z * z) * (1 + math.erf(z))
    assert env[0] == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("alpha,m", [(0.0, 1.0), (0.3, 1.0), (0.5, 1.0), (0.8, 0.3)])
def test_gronwall_check_across_orders(alpha, m):
    rep = check_gronwall(GronwallInstance(a_const=1.0, m_const=m, alpha=alpha, t_end=1.0))
    assert rep.passed
    assert rep.name == f"gronwall_a{alpha:g}"


def test_gronwall_envelope_overflow_is_reported():
    # alpha near 1 drives the envelope to exp(z^{1/(1-alpha)}), beyond double
    # range already for M = 1 on [0, 1]; the range error must surface
    from singheat import SeriesRangeError

    with pytest.raises(SeriesRangeError):
        check_gronwall(GronwallInstance(a_const=1.0, m_const=1.0, alpha=0.8, t_end=1.0))


def test_gronwall_zero_data_stays_zero():
    rep = check_gronwall(GronwallInstance(a_const=0.0, m_const=2.0, alpha=0.5, t_end=1.0))
    assert rep.passed
    assert rep.details["sup_psi"] == 0.0


def test_gronwall_instance_validation():
    with pytest.raises(ParameterError):
        GronwallInstance(a_const=1.0, m_const=1.0, alpha=1.0, t_end=1.0)
    with pytest.raises(ParameterError):
        GronwallInstance(a_const=-1.0, m_const=1.0, alpha=0.5, t_end=1.0)
    with pytest.raises(ParameterError):
        GronwallInstance(a_const=1.0, m_const=1.0, alpha=0.5, t_end=0.0)


# ---------------------------------------------------------------------------
# Kernel structure checks
# ---------------------------------------------------------------------------

def test_max_at_origin_passes_and_is_deterministic():
    a = check_max_at_origin(n_profiles=6, points=256)
    b = check_max_at_origin(n_profiles=6, points=256)
    assert a.passed and b.passed
    assert a.margin == b.margin  # seeded profiles


def test_max_at_origin_flags_increasing_profiles():
    # a profile rising away from the origin violates the hypothesis and must
    # be rejected up front, not silently averaged
    with pytest.raises(ParameterError):
        check_max_at_origin(profiles=[lambda r: r / (1 + r)], points=256)


def test_heaviside_gap_light():
    rep = check_heaviside_gap(times=(0.5,), half_width=6.0, points=4096)
    assert rep.passed
    assert all(v < 0.5 for v in rep.details["sup_gap"].values())


def test_smoothing_exponent_light():
    rep = check_smoothing_exponent(gamma=0.4, n_dim=1)
    assert rep.passed
    assert rep.details["slope"] == pytest.approx(rep.details["expected_slope"], abs=0.02)
    assert rep.details["intercept"] == pytest.approx(rep.details["expected_intercept"], rel=0.05)


# ---------------------------------------------------------------------------
# Threshold checks
# ---------------------------------------------------------------------------

def test_lambda_limit_passes_on_extended_sequence():
    rep = check_lambda_limit(0.5, 1, gammas=(0.1, 0.01, 0.001, 0.0001))
    assert rep.passed


def test_lambda_limit_linear_rate_blocks_coarse_sequences():
    # the approach to q is linear with slope ~3.5 q, so at gamma = 1e-3 the
    # deviation is ~1.76e-3 for q = 1/2 and a 1e-3 band cannot close
    rep = check_lambda_limit(0.5, 1, gammas=(0.1, 0.01, 0.001))
    assert not rep.passed
    assert rep.details["deviations"][-1] > 1e-3


def test_lambda_limit_rejects_non_decreasing_gammas():
    with pytest.raises(ParameterError):
        check_lambda_limit(0.5, 1, gammas=(0.01, 0.1))
    with pytest.raises(ParameterError):
        check_lambda_limit(0.5, 1, gammas=(0.1,))


def test_uniqueness_contraction_light():
    rep = check_uniqueness_contraction(
        0.5, 0.1, 1, points=128, config=SolveConfig(n_schedule=(1, 2, 4, 8))
    )
    assert rep.passed
    assert rep.details["lambda"] < 1.0


def test_uniqueness_contraction_requires_subthreshold_gamma():
    with pytest.raises(ParameterError):
        check_uniqueness_contraction(0.5, 0.3, 1, points=128)  # lambda = 1.48 >= 1


# ---------------------------------------------------------------------------
# Suite runner
# ---------------------------------------------------------------------------

def test_default_suite_names_are_stable():
    names = set(default_suite())
    assert {
        "subsolution",
        "lower-bound",
        "comparison",
        "gronwall-singular",
        "max-at-origin",
        "heaviside",
        "smoothing",
        "lambda-limit",
        "uniqueness",
    } <= names


def test_run_suite_subset_sorted_and_passing():
    reports = run_suite(["max-at-origin", "gronwall-exp", "heaviside"])
    assert [r.name for r in reports] == sorted(r.name for r in reports)
    assert len(reports) == 3
    assert all(r.passed for r in reports)


def test_run_suite_rejects_unknown_names():
    with pytest.raises(ParameterError):
        run_suite(["no-such-check"])


def test_run_suite_converts_crashes_to_failing_reports(monkeypatch):
    import singheat.verify as verify_mod

    def broken_suite():
        return {"boom": lambda: 1 / 0}

    monkeypatch.setattr(verify_mod, "default_suite", broken_suite)
    reports = verify_mod.run_suite(["boom"])
    assert len(reports) == 1
    assert not reports[0].passed
    assert "ZeroDivisionError" in reports[0].details["error"]


def test_run_suite_parallel_matches_serial():
    names = ["gronwall-exp", "gronwall-zero", "max-at-origin"]
    serial = run_suite(names, jobs=1)
    parallel = run_suite(names, jobs=3)
    assert [r.name for r in serial] == [r.name for r in parallel]
    for a, b in zip(serial, parallel):
        assert a.margin == b.margin
