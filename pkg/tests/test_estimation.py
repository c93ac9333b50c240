import math
import random

import pytest

from dualmzi import analytics, estimation
from dualmzi.errors import (
    EstimationDomainError,
    InfiniteSNR,
    SingularFisher,
    ZeroProbabilityPostselection,
)
from dualmzi.estimation import ClickSample


def expected_log_likelihood_curvature(n, p0, h=1e-5):
    """Independent oracle: second central difference, in the estimation
    parameter, of the exact expectation of the log-likelihood under the
    true binomial distribution Bin(n, p0)."""

    def expected_ll(p):
        total = 0.0
        for n_y in range(n + 1):
            w = estimation.likelihood(ClickSample(n, n_y), p0)
            if w > 0.0:
                total += w * estimation.log_likelihood(ClickSample(n, n_y), p)
        return total

    return (expected_ll(p0 + h) - 2 * expected_ll(p0) + expected_ll(p0 - h)) / (h * h)


def golden_section_argmax(f, lo, hi, tol=1e-10):
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    while b - a > tol:
        if f(c) > f(d):
            b = d
        else:
            a = c
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
    return (a + b) / 2


class TestLikelihood:
    def test_single_trial(self):
        assert estimation.likelihood(ClickSample(1, 1), 0.5) == pytest.approx(0.5)

    def test_two_trials(self):
        assert estimation.likelihood(ClickSample(2, 1), 0.5) == pytest.approx(0.5)

    def test_boundary_certain(self):
        assert estimation.likelihood(ClickSample(10, 0), 0.0) == 1.0
        assert estimation.likelihood(ClickSample(10, 10), 1.0) == 1.0
        assert estimation.likelihood(ClickSample(10, 3), 0.0) == 0.0

    def test_large_n_no_overflow(self):
        v = estimation.likelihood(ClickSample(5000, 2500), 0.5)
        assert 0.0 < v < 1.0

    def test_sums_to_one(self):
        for p in (0.1, 0.4, 0.9):
            total = sum(estimation.likelihood(ClickSample(30, k), p) for k in range(31))
            assert total == pytest.approx(1.0, abs=1e-12)


class TestLogLikelihood:
    def test_single_trial(self):
        assert estimation.log_likelihood(ClickSample(1, 1), 0.5) == pytest.approx(
            math.log(0.5)
        )

    def test_exp_consistency(self):
        s = ClickSample(20, 7)
        assert math.exp(estimation.log_likelihood(s, 0.3)) == pytest.approx(
            estimation.likelihood(s, 0.3), rel=1e-12
        )

    def test_maximized_at_ml(self):
        s = ClickSample(10, 5)
        p_hat = golden_section_argmax(
            lambda p: estimation.log_likelihood(s, p), 1e-9, 1 - 1e-9
        )
        assert p_hat == pytest.approx(0.5, abs=1e-8)

    def test_domain_errors(self):
        with pytest.raises(EstimationDomainError):
            estimation.log_likelihood(ClickSample(5, 2), 0.0)
        with pytest.raises(EstimationDomainError):
            estimation.log_likelihood(ClickSample(5, 2), 1.0)


class TestMlEstimate:
    def test_basic(self):
        assert estimation.ml_estimate(ClickSample(100, 50)) == pytest.approx((0.5, 0.0025))

    def test_boundary(self):
        assert estimation.ml_estimate(ClickSample(5, 0)) == (0.0, 0.0)

    def test_near_boundary(self):
        p, var = estimation.ml_estimate(ClickSample(1000, 999))
        assert p == pytest.approx(0.999)
        assert var == pytest.approx(9.99e-7, rel=1e-9)

    def test_argmax_matches_ratio(self):
        rng = random.Random(7)
        for _ in range(20):
            n = rng.randint(5, 200)
            n_y = rng.randint(1, n - 1)  # interior so the argmax is interior
            s = ClickSample(n, n_y)
            p_hat = golden_section_argmax(
                lambda p: estimation.log_likelihood(s, p), 1e-9, 1 - 1e-9
            )
            assert p_hat == pytest.approx(n_y / n, abs=1e-8)


class TestFisher:
    def test_minimum_at_half(self):
        assert estimation.fisher_information(1, 0.5) == pytest.approx(4.0)

    def test_scaling(self):
        assert estimation.fisher_information(100, 0.1) == pytest.approx(100 / 0.09)

    def test_singular_boundary(self):
        with pytest.raises(SingularFisher):
            estimation.fisher_information(1, 0.0)
        with pytest.raises(SingularFisher):
            estimation.fisher_information(1, 1.0)

    def test_matches_expected_curvature(self):
        for n in (10, 50, 200):
            for p in (0.1, 0.3, 0.5, 0.7, 0.9):
                oracle = -expected_log_likelihood_curvature(n, p)
                assert estimation.fisher_information(n, p) == pytest.approx(
                    oracle, rel=1e-4
                )


class TestFisherAtOptimum:
    def test_weak_coupling(self):
        assert estimation.fisher_at_optimum(1, 0.1) == pytest.approx(
            4.0 / math.sin(0.05) ** 2, rel=1e-12
        )

    def test_linear_in_n(self):
        assert estimation.fisher_at_optimum(100, 0.1) == pytest.approx(
            100 * estimation.fisher_at_optimum(1, 0.1)
        )

    def test_maximal_coupling(self):
        assert estimation.fisher_at_optimum(1, math.pi) == pytest.approx(4.0)
        assert estimation.fisher_at_optimum(1, math.pi) == pytest.approx(
            estimation.fisher_information(1, 0.5)
        )

    def test_singular_at_zero(self):
        with pytest.raises(SingularFisher):
            estimation.fisher_at_optimum(1, 0.0)

    def test_consistent_with_conditional_probability(self):
        for chi in (0.05, 0.1, 0.5, 1.0, 2.0):
            tg = chi / 2
            p_y = analytics.conditional_probs_A(math.pi + tg, chi)[1]
            assert estimation.fisher_at_optimum(7, chi) == pytest.approx(
                estimation.fisher_information(7, p_y), rel=1e-9
            )


class TestRunsPerPostselection:
    def test_out_of_phase(self):
        tg = 0.05
        assert estimation.mean_runs_per_postselection(0.1, math.pi + tg) == pytest.approx(
            1.0 / math.sin(0.025) ** 2, rel=1e-12
        )

    def test_maximal_coupling(self):
        tg = math.pi / 2
        assert estimation.mean_runs_per_postselection(math.pi, math.pi + tg) == pytest.approx(2.0)

    def test_bright_port(self):
        assert estimation.mean_runs_per_postselection(0.1, 0.05) == pytest.approx(
            1.000625, abs=1e-4
        )

    def test_dark_port_error(self):
        with pytest.raises(ZeroProbabilityPostselection):
            estimation.mean_runs_per_postselection(0.0, math.pi)

    def test_conservation_of_information(self):
        # Fisher at the optimum over n * R equals 1/cos^2(chi/4).
        for chi in (0.05, 0.1, 0.3):
            tg = chi / 2
            n = 50
            ratio = estimation.fisher_at_optimum(n, chi) / (
                n * estimation.mean_runs_per_postselection(chi, math.pi + tg)
            )
            assert ratio == pytest.approx(1.0 / math.cos(chi / 4) ** 2, rel=1e-12)
        ratio_01 = estimation.fisher_at_optimum(1, 0.1) / estimation.mean_runs_per_postselection(
            0.1, math.pi + 0.05
        )
        assert abs(ratio_01 - 1.0) < 1e-3


class TestFisherFromRate:
    def test_lab_scenario(self):
        rf = estimation.fisher_from_rate(1e11, 36000.0, 0.1)
        n = math.sin(0.025) ** 2 * 3.6e15
        assert rf.n_postselections == pytest.approx(n, rel=1e-12)
        assert rf.exact == pytest.approx(4 * n / math.sin(0.05) ** 2, rel=1e-12)
        assert rf.exact == pytest.approx(3.60225e15, rel=1e-5)
        assert rf.approx == 3.6e15

    def test_approximation_limit(self):
        rf = estimation.fisher_from_rate(1.0, 1.0, 1e-3)
        assert rf.exact / rf.approx == pytest.approx(1.0, abs=1e-6)

    def test_unit_rate(self):
        rf = estimation.fisher_from_rate(1.0, 1.0, 0.1)
        assert rf.exact == pytest.approx(1.0006, abs=1e-4)


class TestCrb:
    def test_lab_value(self):
        assert estimation.crb_phase_uncertainty(3.6e15) == pytest.approx(1.667e-8, rel=1e-3)

    def test_trivial(self):
        assert estimation.crb_phase_uncertainty(4.0) == 0.5

    def test_quarter_chi_form(self):
        crb = estimation.crb_phase_uncertainty(estimation.fisher_at_optimum(1, 0.1))
        assert crb == pytest.approx(0.025, rel=1e-3)
        assert crb == pytest.approx(0.024990, abs=1e-6)

    def test_exact_form_bound(self):
        # exact CRB is sin(chi/4)cos(chi/4)/sqrt(n); chi/4/sqrt(n) holds
        # to relative chi^2/8.
        for chi in (0.05, 0.1, 0.3, 0.5):
            for n in (1, 10, 100):
                crb = estimation.crb_phase_uncertainty(estimation.fisher_at_optimum(n, chi))
                exact = math.sin(chi / 4) * math.cos(chi / 4) / math.sqrt(n)
                assert crb == pytest.approx(exact, rel=1e-12)
                approx = chi / 4 / math.sqrt(n)
                assert abs(crb - approx) / approx <= chi * chi / 8

    def test_rejects_nonpositive(self):
        with pytest.raises(SingularFisher):
            estimation.crb_phase_uncertainty(0.0)


class TestSnr:
    def test_out_of_phase_peak(self):
        tg = 0.05
        assert estimation.snr(1, math.pi + tg, 0.1) == pytest.approx(
            1.0 / math.tan(0.025), rel=1e-9
        )

    def test_flat_at_maximal_coupling(self):
        for vt in (0.0, 1.0, 4.0):
            assert estimation.snr(1, vt, math.pi) == pytest.approx(1.0, abs=1e-12)

    def test_sqrt_n_scaling(self):
        tg = 0.05
        assert estimation.snr(100, math.pi + tg, 0.1) == pytest.approx(
            10.0 / math.tan(0.025), rel=1e-9
        )

    def test_peak_location(self):
        for chi in (0.05, 0.1, 0.5):
            tg = chi / 2
            grid = [2 * math.pi * k / 720 for k in range(721)]
            values = [estimation.snr(1, tg + d, chi) for d in grid]
            best = grid[values.index(max(values))]
            assert best == pytest.approx(math.pi, abs=1e-9)

    def test_infinite_snr_flagged(self):
        # chi -> 0 at detuning pi: P~_Ax -> 0 and the noise vanishes.
        chi = 1e-7
        with pytest.raises(InfiniteSNR):
            estimation.snr(1, math.pi + chi / 2, chi)


class TestSelfInformation:
    def test_certain_event(self):
        assert estimation.self_information(1.0) == 0.0

    def test_one_nat(self):
        assert estimation.self_information(1.0 / math.e) == pytest.approx(1.0)

    def test_rare_postselection(self):
        assert estimation.self_information(math.sin(0.025) ** 2) == pytest.approx(
            7.378, abs=1e-3
        )

    def test_bits_option(self):
        assert estimation.self_information(0.25, bits=True) == pytest.approx(2.0)

    def test_zero_rejected(self):
        with pytest.raises(EstimationDomainError):
            estimation.self_information(0.0)


class TestDisplacement:
    def test_lab_scenario(self):
        assert estimation.displacement_sensitivity(1.667e-8, 1e-6) == pytest.approx(
            2.65e-15, rel=1e-2
        )

    def test_full_fringe(self):
        lam = 1.55e-6
        assert estimation.displacement_sensitivity(2 * math.pi, lam) == pytest.approx(lam)

    def test_zero(self):
        assert estimation.displacement_sensitivity(0.0, 1e-6) == 0.0


class TestReport:
    def test_invariants(self):
        rep = estimation.report_from_sample(ClickSample(400, 100))
        assert rep.p_ml == 0.25
        assert rep.variance == pytest.approx(rep.p_ml * (1 - rep.p_ml) / 400, abs=1e-15)
        assert rep.crb_uncertainty == pytest.approx(1 / math.sqrt(rep.fisher), abs=1e-15)
        assert rep.snr == pytest.approx(100 / math.sqrt(400 * 0.25 * 0.75), rel=1e-12)
