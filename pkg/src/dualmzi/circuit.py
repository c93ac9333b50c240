"""Exact two-photon state evolution through the coupled dual interferometer.

Each interferometer carries a single photon whose path (x or y) is one
qubit. The joint state lives on the ordered basis

    0: |x>_A |x>_B    1: |x>_A |y>_B    2: |y>_A |x>_B    3: |y>_A |y>_B

and evolves through balanced beam splitters, arm phase shifters and the
cross-Kerr coupler acting on the (A in x) AND (B in y) component. All
operations are pure: every function returns a new state.

Sign conventions: the first splitter layer maps |x> -> (|x>-|y>)/sqrt(2),
|y> -> (|x>+|y>)/sqrt(2); the second layer is the Hadamard map. The pair
is the unique consistent choice that makes ``evolve`` reproduce the
closed-form output coefficients exactly (not merely up to per-component
signs), and the Kerr coupler carries e^{+i chi}. Probabilities are
insensitive to both choices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import NormalizationError, StageError, ZeroProbabilityPostselection

SQRT_HALF = math.sqrt(0.5)

NORM_TOL = 1e-9
ZERO_PROB_TOL = 1e-15


class Stage(Enum):
    INITIAL = "initial"
    INTERMEDIATE = "intermediate"
    FINAL = "final"


@dataclass(frozen=True)
class CircuitParams:
    """The three angles (radians) that fully specify one configuration.

    phi: controlled phase on the A reference arm (y).
    vartheta: controlled phase on the B reference arm (x).
    chi: cross-Kerr phase chi = kappa * t.
    """

    phi: float
    vartheta: float
    chi: float

    def __post_init__(self):
        for name in ("phi", "vartheta", "chi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def chi_out_of_range(self) -> bool:
        """True when chi falls outside the usual [0, pi] regime.

        Such values are accepted (all formulas are periodic) but callers
        may want to surface a warning.
        """
        return not (0.0 <= self.chi <= math.pi)


@dataclass(frozen=True)
class JointState:
    """Pure two-qubit state with a record of applied splitter layers.

    ``splitters`` counts beam-splitter layers applied on (A, B); the
    circuit stage is derived from it: (0,0) initial, (2,2) final,
    anything else intermediate.
    """

    amps: tuple[complex, complex, complex, complex]
    splitters: tuple[int, int] = (0, 0)

    @property
    def stage(self) -> Stage:
        if self.splitters == (0, 0):
            return Stage.INITIAL
        if self.splitters == (2, 2):
            return Stage.FINAL
        return Stage.INTERMEDIATE

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self.amps)


@dataclass(frozen=True)
class ConditionalState:
    """A-photon state after projecting B (or vice versa) onto one port."""

    amps: tuple[complex, complex]
    postselection_prob: float
    which: str  # interferometer that was projected, "A" or "B"
    port: str  # "x" or "y"

    def probabilities(self) -> tuple[float, float]:
        return (abs(self.amps[0]) ** 2, abs(self.amps[1]) ** 2)


def _check_normalized(s: JointState):
    n = s.norm_sq()
    if not math.isfinite(n) or abs(n - 1.0) > NORM_TOL:
        raise NormalizationError(f"state norm^2 = {n!r}, expected 1")


def make_input_state() -> JointState:
    """Product state |y>_A |x>_B: one photon entering each interferometer."""
    return JointState(amps=(0j, 0j, 1 + 0j, 0j), splitters=(0, 0))


# Amplitude matrices ((m00, m01), (m10, m11)) for the two splitter layers.
_BS_FIRST = ((SQRT_HALF, SQRT_HALF), (-SQRT_HALF, SQRT_HALF))
_BS_SECOND = ((SQRT_HALF, SQRT_HALF), (SQRT_HALF, -SQRT_HALF))


def _side_index(which: str) -> int:
    if which == "A":
        return 0
    if which == "B":
        return 1
    raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def apply_beam_splitter(s: JointState, which: str) -> JointState:
    """Apply the balanced splitter on one interferometer's qubit factor."""
    _check_normalized(s)
    side = _side_index(which)
    layer = s.splitters[side]
    if layer >= 2:
        raise StageError(f"interferometer {which} already traversed both splitters")
    (m00, m01), (m10, m11) = _BS_FIRST if layer == 0 else _BS_SECOND

    a = s.amps
    if side == 0:  # A qubit: pairs (0,2) and (1,3)
        new = (
            m00 * a[0] + m01 * a[2],
            m00 * a[1] + m01 * a[3],
            m10 * a[0] + m11 * a[2],
            m10 * a[1] + m11 * a[3],
        )
        counts = (layer + 1, s.splitters[1])
    else:  # B qubit: pairs (0,1) and (2,3)
        new = (
            m00 * a[0] + m01 * a[1],
            m10 * a[0] + m11 * a[1],
            m00 * a[2] + m01 * a[3],
            m10 * a[2] + m11 * a[3],
        )
        counts = (s.splitters[0], layer + 1)
    return JointState(amps=new, splitters=counts)


def _require_mid_circuit(s: JointState, op: str):
    if s.splitters != (1, 1):
        raise StageError(
            f"{op} is only valid between the splitter layers "
            f"(splitter counts {s.splitters}, need (1, 1))"
        )


def apply_phase_shift(s: JointState, which: str, arm: str, angle: float) -> JointState:
    """Multiply every component with ``which``'s photon in ``arm`` by e^{i angle}."""
    _require_mid_circuit(s, "phase shift")
    side = _side_index(which)
    if arm not in ("x", "y"):
        raise ValueError(f"arm must be 'x' or 'y', got {arm!r}")
    ph = cmath.exp(1j * angle)
    hit = [(k >> (1 - side)) & 1 == (0 if arm == "x" else 1) for k in range(4)]
    new = tuple(a * ph if h else a for a, h in zip(s.amps, hit))
    return JointState(amps=new, splitters=s.splitters)


def apply_kerr(s: JointState, chi: float) -> JointState:
    """Cross-Kerr coupler: e^{+i chi} on the (A in x, B in y) component."""
    _require_mid_circuit(s, "Kerr coupler")
    a = s.amps
    return JointState(
        amps=(a[0], a[1] * cmath.exp(1j * chi), a[2], a[3]),
        splitters=s.splitters,
    )


def evolve(p: CircuitParams) -> JointState:
    """Run the full circuit for one parameter configuration.

    Input state -> first splitters (A, B) -> phi on A arm y, vartheta on
    B arm x -> Kerr(chi) -> second splitters. The output amplitudes equal
    the closed-form coefficients of ``analytics.output_coefficients``
    divided by 4.
    """
    s = make_input_state()
    s = apply_beam_splitter(s, "A")
    s = apply_beam_splitter(s, "B")
    s = apply_phase_shift(s, "A", "y", p.phi)
    s = apply_phase_shift(s, "B", "x", p.vartheta)
    s = apply_kerr(s, p.chi)
    s = apply_beam_splitter(s, "A")
    s = apply_beam_splitter(s, "B")
    return s


def joint_probabilities(s: JointState) -> tuple[float, float, float, float]:
    """Born-rule probabilities over the 4 joint detector pairs."""
    _check_normalized(s)
    return tuple(abs(a) ** 2 for a in s.amps)


def marginal_probabilities(s: JointState, which: str) -> tuple[float, float]:
    """(P_x, P_y) for one interferometer, tracing out the other."""
    _check_normalized(s)
    if s.stage is not Stage.FINAL:
        raise StageError("marginals are defined at the circuit output")
    p = [abs(a) ** 2 for a in s.amps]
    if which == "A":
        return (p[0] + p[1], p[2] + p[3])
    if which == "B":
        return (p[0] + p[2], p[1] + p[3])
    raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def postselect(s: JointState, which: str, port: str) -> ConditionalState:
    """Project ``which``'s photon onto ``port`` and renormalize the rest.

    Raises ZeroProbabilityPostselection when the port marginal is below
    1e-15 (the degenerate 0/0 case is an error, never a silent
    renormalization of a zero vector).
    """
    if port not in ("x", "y"):
        raise ValueError(f"port must be 'x' or 'y', got {port!r}")
    marg = marginal_probabilities(s, which)
    prob = marg[0 if port == "x" else 1]
    if prob <= ZERO_PROB_TOL:
        raise ZeroProbabilityPostselection(
            f"P_{which}{port} = {prob:.3e} <= {ZERO_PROB_TOL:.0e}"
        )
    a = s.amps
    if which == "B":
        kept = (a[0], a[2]) if port == "x" else (a[1], a[3])
    else:
        kept = (a[0], a[1]) if port == "x" else (a[2], a[3])
    scale = 1.0 / math.sqrt(prob)
    return ConditionalState(
        amps=(kept[0] * scale, kept[1] * scale),
        postselection_prob=prob,
        which=which,
        port=port,
    )


def fidelity(a: JointState, b: JointState) -> float:
    """|<a|b>|: 1 iff equal up to a global phase, 0 iff orthogonal."""
    _check_normalized(a)
    _check_normalized(b)
    ov = sum(x.conjugate() * y for x, y in zip(a.amps, b.amps))
    return abs(ov)


def concurrence(s: JointState) -> float:
    """Two-qubit pure-state concurrence 2|a0*a3 - a1*a2|."""
    _check_normalized(s)
    if s.stage is not Stage.FINAL:
        raise StageError("concurrence is evaluated on the output state")
    a = s.amps
    return 2.0 * abs(a[0] * a[3] - a[1] * a[2])
