"""
Photocurrents, feed-forward and noise-floor bookkeeping.

All variances are relative to the shot-noise limit (SNL): an elementary
detector current reads exactly 1 on vacuum. Detector inefficiency is the
same attenuation channel as propagation loss, applied to the detected modes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gaussian as gs

__all__ = [
    "MeasuredCurrent",
    "NoiseBudget",
    "bell_currents",
    "bell_variances",
    "claire_current",
    "feedforward_combine",
    "noise_budget_from_state",
    "enl_correct",
    "to_db",
    "from_db",
]


def to_db(linear):
    return 10 * np.log10(linear)


def from_db(db):
    return 10 ** (np.asarray(db, dtype=float) / 10)


def _check_eta(eta):
    if not (math.isfinite(eta) and 0 <= eta <= 1):
        raise ValueError(f"detector amplitude efficiency must lie in [0, 1], got {eta}")


@dataclass(frozen=True, eq=False)
class MeasuredCurrent:
    """A photocurrent as a quadrature form on the pre-detection state.

    ``efficiencies`` maps each detected mode to its amplitude efficiency.
    ``form`` is expressed in SNL-normalized constituent currents, so an
    elementary current has ``snl_ref == 1``; a feed-forward combination
    ``i_a + g i_b`` has ``snl_ref == 1 + g**2``.
    """

    state: gs.GaussianState
    form: gs.QuadratureForm
    efficiencies: dict = field(default_factory=dict)
    signal_variance: float = 0.0

    def detected_state(self):
        state = self.state
        for mode, eta in sorted(self.efficiencies.items()):
            state = gs.loss(state, mode, eta)
        return state

    @property
    def snl_ref(self) -> float:
        return self.form.snl_reference

    @property
    def variance_linear(self) -> float:
        return gs.variance_of(self.detected_state(), self.form) + self.signal_variance

    @property
    def variance_db(self) -> float:
        return float(to_db(self.variance_linear))

    def mean(self) -> float:
        return float(self.form.coefficients @ self.detected_state().mean)


@dataclass(frozen=True)
class NoiseBudget:
    """Sum, difference and feed-forward-helped sum variances (SNL = 1)."""

    v_sum: float
    v_diff: float
    v_sum_helped: float
    g_used: float
    enl_db: float | None = None

    @property
    def v_sum_db(self):
        return float(to_db(self.v_sum))

    @property
    def v_diff_db(self):
        return float(to_db(self.v_diff))

    @property
    def v_sum_helped_db(self):
        return float(to_db(self.v_sum_helped))

    def as_dict(self):
        return {
            "v_sum": self.v_sum,
            "v_diff": self.v_diff,
            "v_sum_helped": self.v_sum_helped,
            "g_used": self.g_used,
            "v_sum_db": self.v_sum_db,
            "v_diff_db": self.v_diff_db,
            "v_sum_helped_db": self.v_sum_helped_db,
            "enl_db": self.enl_db,
        }


def bell_currents(state, i, j, eta, v_xs=0.0, v_ys=0.0):
    """Sum and difference currents of Bob's Bell-type detection.

    With the pi/2 relative phase and the 50/50 combination, the sum current
    reads ``(X_i + X_j)/sqrt(2)`` and the difference ``(Y_i - Y_j)/sqrt(2)``
    (bright-beam approximation). Signal variances are added at the detection
    plane as ``v/2``.
    """
    _check_eta(eta)
    n = state.n_modes
    s = 1 / math.sqrt(2)
    plus = gs.QuadratureForm.from_terms(n, {f"X{i}": s, f"X{j}": s})
    minus = gs.QuadratureForm.from_terms(n, {f"Y{i}": s, f"Y{j}": -s})
    eff = {i: eta, j: eta}
    return (MeasuredCurrent(state, plus, eff, 0.5 * v_xs),
            MeasuredCurrent(state, minus, eff, 0.5 * v_ys))


def bell_variances(state, i, j, eta, v_xs=0.0, v_ys=0.0):
    """``(v_sum, v_diff)`` for Bob's detection of modes ``i`` and ``j``."""
    plus, minus = bell_currents(state, i, j, eta, v_xs, v_ys)
    return plus.variance_linear, minus.variance_linear


def claire_current(state, i, eta) -> MeasuredCurrent:
    """Amplitude-quadrature current of mode ``i``."""
    _check_eta(eta)
    form = gs.QuadratureForm.from_terms(state.n_modes, {f"X{i}": 1.0})
    return MeasuredCurrent(state, form, {i: eta})


def feedforward_combine(sum_current, claire, g, xi1, xi2, claire_loss_term="channel"):
    """Bob's helped current ``i_+ + g_elec i_3`` with ``g_elec = g xi2 / xi1``.

    The variance comes from the joint covariance of both currents.
    ``claire_loss_term="squared_xi2"`` swaps the coefficient of Claire's
    propagation-loss vacuum from ``g eta xi2 sqrt(1 - xi2^2) / xi1`` to
    ``g eta xi2^2 sqrt(1 - xi2^2) / xi1``; that variant has no channel
    realization, so its difference is added as a variance offset.
    """
    if not math.isfinite(g):
        raise ValueError(f"gain must be finite, got {g}")
    if g < 0:
        raise ValueError(f"gain must be >= 0, got {g}")
    if claire_loss_term not in ("channel", "squared_xi2"):
        raise ValueError(f"unknown claire_loss_term {claire_loss_term!r}")
    if sum_current.state is not claire.state:
        raise ValueError("currents must refer to the same pre-detection state")
    eff = dict(sum_current.efficiencies)
    for mode, eta in claire.efficiencies.items():
        if mode in eff and eff[mode] != eta:
            raise ValueError(f"mode {mode} detected with two different efficiencies")
        eff[mode] = eta
    g_elec = g * xi2 / xi1
    offset = sum_current.signal_variance + g_elec ** 2 * claire.signal_variance
    if claire_loss_term == "squared_xi2":
        (eta3,) = claire.efficiencies.values()
        xi2_sq = xi2 * xi2
        offset -= (g * eta3 * xi2 / xi1) ** 2 * (1 - xi2_sq) ** 2
    return MeasuredCurrent(sum_current.state, sum_current.form + g_elec * claire.form, eff, offset)


def noise_budget_from_state(state, g, xi1, xi2, eta, bob=(1, 2), claire=3,
                            v_xs=0.0, v_ys=0.0, claire_loss_term="channel") -> NoiseBudget:
    """Run all three detections on ``state`` (the c1, c2, c3 modes after propagation)."""
    plus, minus = bell_currents(state, *bob, eta, v_xs, v_ys)
    helped = feedforward_combine(plus, claire_current(state, claire, eta), g, xi1, xi2, claire_loss_term)
    return NoiseBudget(plus.variance_linear, minus.variance_linear, helped.variance_linear, g)


def enl_correct(measured_linear, enl_linear):
    """Remove an additive electronics-noise floor from an SNL-relative power.

    Both the trace and the SNL reference contain the floor, so the corrected
    level is ``(measured - enl) / (1 - enl)``.
    """
    measured = np.asarray(measured_linear, dtype=float)
    enl = float(enl_linear)
    if not (math.isfinite(enl) and 0 <= enl < 1):
        raise ValueError(f"electronics noise level must lie in [0, 1) of SNL, got {enl}")
    if np.any(~np.isfinite(measured)) or np.any(measured <= enl):
        raise ValueError("measured level must lie above the electronics noise floor")
    out = (measured - enl) / (1 - enl)
    return float(out) if out.ndim == 0 else out
