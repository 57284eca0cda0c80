import math

import numpy as np
import pytest

from entrofunc.families import PowerAffine, PowerDiff, PowerLog, XLogX, family_eval
from entrofunc.fit import (
    BranchError,
    FitResult,
    SampleSet,
    continuity_filter,
    fit_eq1,
    fit_eq2,
)
from entrofunc.reconstruct import IllConditionedError


def synth(fam, n=64, lo=0.02, hi=1.0, noise=0.0, seed=0):
    xs = np.linspace(lo, hi, n)
    fs = np.asarray(family_eval(fam, xs), dtype=float)
    if noise:
        fs = fs + np.random.default_rng(seed).normal(0.0, noise, size=n)
    return SampleSet(list(zip(xs.tolist(), fs.tolist())))


class TestSampleSet:
    def test_valid(self):
        s = SampleSet([(0.5, 1.0), (1.0, 0.0)])
        assert len(s) == 2
        assert s.x.tolist() == [0.5, 1.0]
        assert s.fx.tolist() == [1.0, 0.0]

    def test_rejections(self):
        with pytest.raises(ValueError):
            SampleSet([])
        with pytest.raises(ValueError):
            SampleSet([(0.0, 1.0)])
        with pytest.raises(ValueError):
            SampleSet([(1.1, 1.0)])
        with pytest.raises(ValueError):
            SampleSet([(0.5, 1.0), (0.5, 2.0)])


class TestFitEq1KnownBranch:
    def test_power_branch_recovery(self):
        truth = PowerAffine(c_star=2.0, c=-3.0, q=0.5)
        res = fit_eq1(synth(truth), q=0.5)
        assert isinstance(res.family, PowerAffine)
        assert res.family.c_star == pytest.approx(2.0, abs=1e-9)
        assert res.family.c == pytest.approx(-3.0, abs=1e-9)
        assert res.residual_norm < 1e-12
        assert res.identifiable
        assert any("regular-branch" in n for n in res.notes)

    def test_log_branch_recovery(self):
        truth = XLogX(c=-2.0, c_star=0.7)
        res = fit_eq1(synth(truth), q=1.0)
        assert isinstance(res.family, XLogX)
        assert res.family.c == pytest.approx(-2.0, abs=1e-9)
        assert res.family.c_star == pytest.approx(0.7, abs=1e-9)

    def test_near_one_exponent_strip_is_refused(self):
        s = synth(PowerAffine(1.0, -1.0, 2.0))
        for q in (1.0 + 1e-9, 1.0 - 1e-7):
            with pytest.raises(BranchError, match="q=1"):
                fit_eq1(s, q=q)
        fit_eq1(s, q=1.0 + 2e-6)  # just outside the guard strip

    def test_branch_error_is_a_value_error(self):
        assert issubclass(BranchError, ValueError)

    def test_minimum_sample_counts(self):
        with pytest.raises(ValueError):
            fit_eq1(SampleSet([(0.2, 1.0), (0.4, 2.0)]), q=2.0)
        with pytest.raises(ValueError):
            fit_eq1(SampleSet([(k / 8, 0.1) for k in range(1, 8)]), q=None)

    def test_rank_deficiency_is_reported(self):
        # x^40 underflows against the x column on [0.05, 0.3], so the design
        # matrix loses a direction and the fit must say so
        xs = np.linspace(0.05, 0.3, 16)
        s = SampleSet([(float(x), float(x)) for x in xs])
        res = fit_eq1(s, q=40.0)
        assert not res.identifiable

    def test_noise_robustness(self):
        truth = PowerAffine(c_star=2.0, c=-2.0, q=3.0)
        res = fit_eq1(synth(truth, n=256, noise=1e-4, seed=7), q=3.0)
        assert res.family.c_star == pytest.approx(2.0, abs=1e-2)
        assert res.family.c == pytest.approx(-2.0, abs=1e-2)


class TestFitEq1UnknownExponent:
    def test_profile_search_recovers_q(self):
        truth = PowerAffine(c_star=2.0, c=-3.0, q=0.5)
        res = fit_eq1(synth(truth), q=None)
        assert isinstance(res.family, PowerAffine)
        assert res.family.q == pytest.approx(0.5, abs=1e-6)
        assert res.family.c_star == pytest.approx(2.0, abs=1e-4)
        assert any("profiled least squares" in n for n in res.notes)
        assert any("alternate q=1" in n for n in res.notes)

    def test_profile_search_prefers_log_branch_when_it_wins(self):
        truth = XLogX(c=1.5, c_star=0.0)
        res = fit_eq1(synth(truth), q=None)
        assert isinstance(res.family, XLogX)
        assert res.family.c == pytest.approx(1.5, abs=1e-6)
        assert any("q=1" in n for n in res.notes)

    def test_negative_exponents_are_in_range(self):
        truth = PowerAffine(c_star=1.0, c=0.5, q=-2.0)
        res = fit_eq1(synth(truth, lo=0.3), q=None)
        assert res.family.q == pytest.approx(-2.0, abs=1e-6)


class TestFitEq2:
    def test_power_difference_recovery(self):
        truth = PowerDiff(c=2.5, alpha=1.0, beta=2.0)
        res = fit_eq2(synth(truth), alpha=1.0, beta=2.0)
        assert isinstance(res.family, PowerDiff)
        assert res.family.c == pytest.approx(2.5, abs=1e-10)
        assert res.residual_norm < 1e-12

    def test_power_log_recovery(self):
        truth = PowerLog(c=-1.25, alpha=2.0)
        res = fit_eq2(synth(truth), alpha=2.0, beta=2.0)
        assert isinstance(res.family, PowerLog)
        assert res.family.c == pytest.approx(-1.25, abs=1e-10)
        assert any("generator-degenerate" in n for n in res.notes)

    def test_vanishing_basis_is_rejected(self):
        s = SampleSet([(1.0, 0.0)])
        with pytest.raises(IllConditionedError):
            fit_eq2(s, alpha=1.0, beta=2.0)


class TestContinuityFilter:
    def test_vanishing_limit_rewrites_to_entropy_form(self):
        res = FitResult(PowerAffine(3.0, -3.0, 2.0), 0.0, True, ())
        out = continuity_filter(res)
        assert out.family == PowerAffine(3.0, -3.0, 2.0)
        assert any("rewritten to entropy normal form" in n for n in out.notes)

    def test_near_vanishing_limit_is_symmetrized(self):
        res = FitResult(PowerAffine(3.0000001, -2.9999999, 2.0), 0.0, True, ())
        out = continuity_filter(res)
        assert out.family.c_star == pytest.approx(3.0, abs=1e-9)
        assert out.family.c == -out.family.c_star  # exactly opposite after the rewrite

    def test_violated_limit_is_flagged_not_rewritten(self):
        res = FitResult(PowerAffine(1.0, 1.0, 2.0), 0.0, True, ())
        out = continuity_filter(res)
        assert out.family == res.family
        assert any(n.startswith("continuity-at-1: violated") and "limit=2.0" in n for n in out.notes)

    def test_log_branch_normalization(self):
        out = continuity_filter(FitResult(XLogX(5.0, 1e-9), 0.0, True, ()))
        assert out.family == XLogX(5.0, 0.0)
        out2 = continuity_filter(FitResult(XLogX(1.0, 0.5), 0.0, True, ()))
        assert out2.family == XLogX(1.0, 0.5)
        assert any("violated" in n and "0.5" in n for n in out2.notes)

    def test_idempotent(self):
        res = FitResult(PowerAffine(1.0, 1.0, 2.0), 0.0, True, ("regular-branch q=2.0",))
        once = continuity_filter(res)
        twice = continuity_filter(once)
        assert once == twice

    def test_eq2_families_pass_through(self):
        res = FitResult(PowerDiff(1.0, 1.0, 2.0), 0.0, True, ())
        assert continuity_filter(res).family == res.family

    def test_samples_trigger_rms_recompute(self):
        truth = PowerAffine(c_star=3.0, c=-3.0, q=2.0)
        s = synth(truth)
        skewed = FitResult(PowerAffine(3.0 + 1e-7, -3.0, 2.0), 123.0, True, ())
        out = continuity_filter(skewed, samples=s)
        assert out.residual_norm < 1e-6  # recomputed against the data, not carried over
