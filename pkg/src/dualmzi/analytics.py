"""Closed-form results for the coupled dual interferometer.

These are the analytic oracle the state engine and the Monte-Carlo
sampler are checked against: standard (unconditioned) detection
probabilities, postselected conditional probabilities, the inferred
phase at the measuring interferometer, the weak-value comparator, and
the purified entangled output state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import circuit
from .circuit import CircuitParams, JointState
from .errors import DegenerateConditional, WeakValueDivergence

DENOM_TOL = 1e-15
ARCCOS_CLAMP_TOL = 1e-9


def visibility(chi: float) -> float:
    """Fringe visibility cos(chi/2) of the output interference."""
    return math.cos(chi / 2.0)


def geometric_phase(chi: float) -> float:
    """Geometric shift chi/2 of the output interference pattern."""
    return chi / 2.0


def output_coefficients(p: CircuitParams) -> tuple[complex, complex, complex, complex]:
    """Unnormalized output amplitudes (alpha, beta, gamma, delta).

    The circuit output state is (alpha, beta, gamma, delta)/4 over the
    (xx, xy, yx, yy) basis; |alpha|^2 + ... + |delta|^2 = 16.
    """
    ev = cmath.exp(1j * p.vartheta)
    ek = cmath.exp(1j * p.chi)
    evf = cmath.exp(1j * (p.vartheta + p.phi))
    ef = cmath.exp(1j * p.phi)
    alpha = ev - ek + evf - ef
    beta = ev + ek + evf + ef
    gamma = ev - ek - evf + ef
    delta = ev + ek - evf - ef
    return (alpha, beta, gamma, delta)


@dataclass(frozen=True)
class StandardProbs:
    """Unconditioned port probabilities for one interferometer."""

    p_x: float
    p_y: float
    visibility: float
    geometric_phase: float


def standard_probs_B(vartheta: float, chi: float) -> StandardProbs:
    """Detection probabilities at the B ports, all runs counted.

    P_By = [1 + v cos(vartheta - theta_g)] / 2 with v = cos(chi/2),
    theta_g = chi/2; P_Bx is the complement.
    """
    v = visibility(chi)
    tg = geometric_phase(chi)
    c = v * math.cos(vartheta - tg)
    return StandardProbs(p_x=0.5 * (1.0 - c), p_y=0.5 * (1.0 + c), visibility=v, geometric_phase=tg)


def standard_probs_A(phi: float, chi: float) -> StandardProbs:
    """Detection probabilities at the A ports, all runs counted.

    P_Ax = [1 + v cos(phi - theta_g)] / 2; P_Ay is the complement.
    """
    v = visibility(chi)
    tg = geometric_phase(chi)
    c = v * math.cos(phi - tg)
    return StandardProbs(p_x=0.5 * (1.0 + c), p_y=0.5 * (1.0 - c), visibility=v, geometric_phase=tg)


def conditional_probs_A(vartheta: float, chi: float) -> tuple[float, float]:
    """(P~_Ax, P~_Ay): A-port probabilities given a B_y postselection, phi = 0.

    P~_Ay = sin^2(theta_g) / [2 + 2 v cos(vartheta - theta_g)]. The
    denominator is 4 P_By; it vanishes only in the chi -> 0,
    detuning -> pi limit, which raises DegenerateConditional.
    """
    v = visibility(chi)
    tg = geometric_phase(chi)
    denom = 2.0 + 2.0 * v * math.cos(vartheta - tg)
    if denom <= DENOM_TOL:
        raise DegenerateConditional(
            f"conditional denominator {denom:.3e} at vartheta={vartheta}, chi={chi}"
        )
    # cancellation near the dark point at tiny chi can push the ratio a
    # hair past 1; clamp into the probability range
    p_y = min(1.0, math.sin(tg) ** 2 / denom)
    return (1.0 - p_y, p_y)


def inferred_phase(p: CircuitParams) -> float:
    """Phase read off the A detectors per postselection in B's y port.

    arccos(P~_Ax - P~_Ay), with the conditional probabilities taken from
    the state engine at general phi (the published closed form covers
    only phi = 0). The arccos argument is clamped against float noise
    within 1e-9; larger violations indicate a bug and raise.
    """
    cond = circuit.postselect(circuit.evolve(p), "B", "y")
    px, py = cond.probabilities()
    arg = px - py
    if abs(arg) > 1.0 + ARCCOS_CLAMP_TOL:
        raise ValueError(f"arccos argument {arg!r} beyond clamp tolerance")
    return math.acos(max(-1.0, min(1.0, arg)))


def weak_value(vartheta: float) -> complex:
    """Weak value 1/(1 + e^{i vartheta}) of the probe-arm photon number.

    Diverges at vartheta = pi (orthogonal pre/post states); the
    divergence is reported as an error, never as an infinite number.
    """
    denom = 1.0 + cmath.exp(1j * vartheta)
    if abs(denom) <= DENOM_TOL:
        raise WeakValueDivergence(f"|1 + e^(i vartheta)| = {abs(denom):.3e}")
    return 1.0 / denom


def weak_value_complement(vartheta: float) -> complex:
    """Weak value of the reference-arm photon number, 1 - weak_value."""
    return 1.0 - weak_value(vartheta)


def naive_postselection_prob(vartheta: float) -> float:
    """Interaction-free postselection probability (1 + cos vartheta)/2.

    This is the chi = 0 limit of the exact B_y probability; it carries no
    information about the coupling.
    """
    return 0.5 * (1.0 + math.cos(vartheta))


def purified_state(chi: float) -> JointState:
    """Output state at phi = theta_g, vartheta = pi + theta_g.

    -e^{i 3 chi/4} [cos(chi/4)|xx> - i sin(chi/4)|yy>]: a product state
    at chi = 0, maximally entangled at chi = pi. Built with its global
    phase included; comparisons should go through ``circuit.fidelity``.
    """
    g = -cmath.exp(1j * 0.75 * chi)
    amps = (g * math.cos(chi / 4.0), 0j, 0j, g * (-1j) * math.sin(chi / 4.0))
    return JointState(amps=amps, splitters=(2, 2))
