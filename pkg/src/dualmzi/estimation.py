"""Binomial click statistics: likelihood, ML estimation, Fisher
information, conservation-of-information accounting, Cramer-Rao bound
and signal-to-noise ratio.

Every postselection yields a Bernoulli click/no-click in the D_Ay
detector, so n postselections give Bin(n, p) counts with p the
conditional probability P~_Ay. Natural logarithms throughout; binomial
coefficients go through lgamma, never factorials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import analytics
from .errors import (
    EstimationDomainError,
    InfiniteSNR,
    SingularFisher,
    ZeroProbabilityPostselection,
)


@dataclass(frozen=True)
class ClickSample:
    """n postselections, of which n_y clicked in D_Ay."""

    n: int
    n_y: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one postselection")
        if not 0 <= self.n_y <= self.n:
            raise ValueError(f"n_y = {self.n_y} outside [0, {self.n}]")


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _check_prob(p: float):
    if not 0.0 <= p <= 1.0:
        raise EstimationDomainError(f"probability {p!r} outside [0, 1]")


def likelihood(s: ClickSample, p: float) -> float:
    """Binomial pmf C(n, n_y) p^n_y (1-p)^(n-n_y), computed in log space."""
    _check_prob(p)
    # Boundary p: the pmf is 0 or 1 by direct evaluation.
    if p == 0.0:
        return 1.0 if s.n_y == 0 else 0.0
    if p == 1.0:
        return 1.0 if s.n_y == s.n else 0.0
    return math.exp(log_likelihood(s, p))


def log_likelihood(s: ClickSample, p: float) -> float:
    """Log pmf including the log C(n, n_y) constant, so exp() recovers it."""
    _check_prob(p)
    if p == 0.0 and s.n_y > 0:
        raise EstimationDomainError("log(0) with nonzero click count")
    if p == 1.0 and s.n_y < s.n:
        raise EstimationDomainError("log(0) with nonzero no-click count")
    out = _log_binom(s.n, s.n_y)
    if s.n_y > 0:
        out += s.n_y * math.log(p)
    if s.n_y < s.n:
        out += (s.n - s.n_y) * math.log(1.0 - p)
    return out


def ml_estimate(s: ClickSample) -> tuple[float, float]:
    """(p_ml, variance): p_ml = n_y/n and its plug-in variance p(1-p)/n."""
    p = s.n_y / s.n
    return (p, p * (1.0 - p) / s.n)


def fisher_information(n: int, p: float) -> float:
    """Fisher information n / (p (1 - p)) of n Bernoulli trials."""
    if n < 1:
        raise ValueError("need at least one trial")
    _check_prob(p)
    if p == 0.0 or p == 1.0:
        raise SingularFisher(f"Fisher information undefined at p = {p}")
    return n / (p * (1.0 - p))


def fisher_at_optimum(n: int, chi: float) -> float:
    """Fisher information 4 n / sin^2(theta_g) at the out-of-phase setting.

    At vartheta = pi + theta_g the click probability is cos^2(chi/4) and
    p(1-p) = sin^2(chi/4) cos^2(chi/4) = sin^2(theta_g)/4.
    """
    if n < 1:
        raise ValueError("need at least one postselection")
    tg = analytics.geometric_phase(chi)
    s = math.sin(tg)
    if s == 0.0:
        raise SingularFisher("Fisher information diverges at chi = 0")
    return 4.0 * n / (s * s)


def mean_runs_per_postselection(chi: float, vartheta: float) -> float:
    """Mean number of input pairs per successful B_y postselection, 1/P_By."""
    p_by = analytics.standard_probs_B(vartheta, chi).p_y
    if p_by <= 1e-15:
        raise ZeroProbabilityPostselection(f"P_By = {p_by:.3e}")
    return 1.0 / p_by


class RateFisher(NamedTuple):
    """Fisher information from an input photon-pair rate.

    exact: 4 n / sin^2(chi/2) with n = P_By(pi+theta_g) * rate * duration.
    approx: the rate * duration shorthand (16 P_By / chi^2 -> 1 limit).
    """

    exact: float
    approx: float
    n_postselections: float


def fisher_from_rate(rate: float, duration: float, chi: float) -> RateFisher:
    """Fisher information for pairs arriving at ``rate`` over ``duration``.

    Operates at the optimal setting vartheta = pi + theta_g, where the
    postselection probability is sin^2(chi/4).
    """
    if rate <= 0 or duration <= 0:
        raise ValueError("rate and duration must be positive")
    if not 0.0 < chi < math.pi:
        raise ValueError(f"chi = {chi} outside (0, pi)")
    tg = analytics.geometric_phase(chi)
    p_by = analytics.standard_probs_B(math.pi + tg, chi).p_y
    n = p_by * rate * duration
    exact = 4.0 * n / math.sin(tg) ** 2
    return RateFisher(exact=exact, approx=rate * duration, n_postselections=n)


def crb_phase_uncertainty(fisher: float) -> float:
    """Cramer-Rao lower bound 1/sqrt(F) on the phase uncertainty."""
    if fisher <= 0.0:
        raise SingularFisher(f"fisher = {fisher!r} must be positive")
    return 1.0 / math.sqrt(fisher)


def snr(n: int, vartheta: float, chi: float) -> float:
    """Signal-to-noise ratio sqrt(n) sqrt(P~_Ay / P~_Ax) of the D_Ay counts.

    At vartheta = pi + theta_g this is sqrt(n) cot(chi/4). A vanishing
    P~_Ax leaves no noise term and raises InfiniteSNR.
    """
    if n < 1:
        raise ValueError("need at least one postselection")
    p_x, p_y = analytics.conditional_probs_A(vartheta, chi)
    if p_x <= 1e-15:
        raise InfiniteSNR(f"P~_Ax = {p_x:.3e}; noise term vanishes")
    return math.sqrt(n) * math.sqrt(p_y / p_x)


def self_information(p: float, bits: bool = False) -> float:
    """Unexpectedness -log p of an event of probability p (nats by default)."""
    if not 0.0 < p <= 1.0:
        raise EstimationDomainError(f"probability {p!r} outside (0, 1]")
    out = -math.log(p)
    return out / math.log(2.0) if bits else out


def displacement_sensitivity(delta_phase: float, wavelength: float) -> float:
    """Path displacement delta_phase * wavelength / (2 pi) for a phase shifter."""
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    return delta_phase * wavelength / (2.0 * math.pi)


@dataclass(frozen=True)
class EstimationReport:
    """Summary of the estimation chain for one configuration."""

    p_ml: float
    variance: float
    fisher: float
    crb_uncertainty: float
    snr: float


def report_from_sample(s: ClickSample) -> EstimationReport:
    """ML estimate plus Fisher/CRB/SNR, all evaluated at the sample p_ml."""
    p, var = ml_estimate(s)
    fisher = fisher_information(s.n, p)  # raises SingularFisher on boundary
    return EstimationReport(
        p_ml=p,
        variance=var,
        fisher=fisher,
        crb_uncertainty=crb_phase_uncertainty(fisher),
        snr=s.n_y / math.sqrt(s.n * p * (1.0 - p)),
    )
