"""
Closed-form noise variances, feed-forward gain, and dense-coding capacities.

Capacities are in nats. Noise floors used for capacities are signal-free
(``v_xs = v_ys = 0``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .circuit import SetupParams, build_dense_coding_setup, run_circuit
from .detection import NoiseBudget, noise_budget_from_state

__all__ = [
    "ExperimentParams",
    "CapacityPoint",
    "Thresholds",
    "NoRoot",
    "EXPERIMENT",
    "MEASURED_FLOORS",
    "sum_variance",
    "diff_variance",
    "helped_variance_unit_gain",
    "gain_quadratic",
    "variance_vs_gain",
    "optimal_gain",
    "closed_form_variances",
    "circuit_variances",
    "channel_capacities",
    "baseline_capacities",
    "capacity_thresholds",
    "sweep_r",
    "sweep_nbar",
    "SweepRRow",
]

UNIT_GAIN = 1 / math.sqrt(2)


class NoRoot(ValueError):
    """Raised when two capacity curves do not cross inside the search bracket."""


@dataclass(frozen=True)
class ExperimentParams:
    """Every scalar of the model.

    Efficiencies are intensity efficiencies. ``sigma_sq`` is the mean signal
    photon number; the mean photon number per mode is
    ``nbar = sigma_sq + sinh(r)**2``.
    """

    r: float = 0.674
    xi1_sq: float = 0.987
    xi2_sq: float = 0.937
    eta_sq: float = 0.95
    g: float = UNIT_GAIN
    v_xs: float = 0.0
    v_ys: float = 0.0
    sigma_sq: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValueError(f"r must be >= 0, got {self.r}")
        for name in ("xi1_sq", "xi2_sq", "eta_sq"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0 <= v <= 1):
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.xi1_sq == 0:
            raise ValueError("xi1_sq must be > 0 (the feed-forward gain divides by xi1)")
        for name in ("g", "v_xs", "v_ys", "sigma_sq"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.v_xs < 0 or self.v_ys < 0 or self.sigma_sq < 0:
            raise ValueError("signal variances and sigma_sq must be >= 0")

    @property
    def nbar(self) -> float:
        return self.sigma_sq + math.sinh(self.r) ** 2

    def with_nbar(self, nbar: float) -> "ExperimentParams":
        sigma_sq = nbar - math.sinh(self.r) ** 2
        if sigma_sq < 0:
            # tolerate rounding at the lower edge
            if sigma_sq < -1e-12:
                raise ValueError(f"nbar={nbar} is below sinh(r)^2={math.sinh(self.r) ** 2}")
            sigma_sq = 0.0
        return replace(self, sigma_sq=sigma_sq)

    def setup_params(self) -> SetupParams:
        return SetupParams(self.r, self.xi1_sq, self.xi2_sq, self.eta_sq, self.g)


EXPERIMENT = ExperimentParams()

#: Noise floors read off the measured traces; the capacity curves are drawn from these.
MEASURED_FLOORS = NoiseBudget(v_sum=0.76, v_diff=0.48, v_sum_helped=0.47, g_used=UNIT_GAIN)


@dataclass(frozen=True)
class CapacityPoint:
    nbar: float
    c_helped: float
    c_unhelped: float
    c_coherent: float
    c_squeezed: float


class Thresholds(NamedTuple):
    coherent_helped: float
    coherent_unhelped: float
    squeezed_helped: float


def sum_variance(p: ExperimentParams) -> float:
    e2 = math.exp(2 * p.r)
    return 1 + p.eta_sq * p.xi1_sq * (e2 + 8 / e2 - 9) / 12 + 0.5 * p.v_xs


def diff_variance(p: ExperimentParams) -> float:
    return 1 + 3 * p.eta_sq * p.xi1_sq * (math.exp(-2 * p.r) - 1) / 4 + 0.5 * p.v_ys


def helped_variance_unit_gain(p: ExperimentParams) -> float:
    """Helped sum variance for ``g = 1/sqrt(2)``, written out term by term."""
    a, b, e = p.xi1_sq, p.xi2_sq, p.eta_sq
    e2 = math.exp(2 * p.r)
    return (e2 * e * ((b - a) / math.sqrt(a)) ** 2
            + 2 / e2 * e * ((b + 2 * a) / math.sqrt(a)) ** 2
            - 3 * (b * b / a * e - 4 + 3 * e * a + 2 * b * e - 2 * b / a)) / 12 + 0.5 * p.v_xs


def gain_quadratic(p: ExperimentParams, claire_loss_term="channel"):
    """Coefficients ``(a0, a1, a2)`` with ``var(i_+') = a0 + a1 g + a2 g^2``.

    ``a1`` comes from the correlation between Bob's sum current and Claire's
    amplitude current, ``a2`` from Claire's current scaled by ``xi2/xi1``.
    """
    e2 = math.exp(2 * p.r)
    cross = ((2 / 3) / e2 - e2 / 6 - 0.5) / math.sqrt(2)  # cov((X1+X2)/sqrt2, X3), lossless
    claire = 1 / (3 * e2) + e2 / 6 + 0.5  # var(X3), lossless
    a0 = sum_variance(p)
    a1 = 2 * p.eta_sq * p.xi2_sq * cross
    a2 = p.xi2_sq / p.xi1_sq * (1 + p.eta_sq * p.xi2_sq * (claire - 1))
    if claire_loss_term == "squared_xi2":
        a2 -= p.eta_sq * p.xi2_sq * (1 - p.xi2_sq) ** 2 / p.xi1_sq
    elif claire_loss_term != "channel":
        raise ValueError(f"unknown claire_loss_term {claire_loss_term!r}")
    return a0, a1, a2


def variance_vs_gain(p: ExperimentParams, g: float, claire_loss_term="channel") -> float:
    a0, a1, a2 = gain_quadratic(p, claire_loss_term)
    return a0 + a1 * g + a2 * g * g


def optimal_gain(p: ExperimentParams) -> float:
    e2 = math.exp(2 * p.r)
    e4 = e2 * e2
    ex2 = p.eta_sq * p.xi2_sq
    return ((e4 + 3 * e2 - 4) * p.eta_sq * p.xi1_sq
            / (math.sqrt(2) * (e4 * ex2 - 3 * e2 * ex2 + 6 * e2 + 2 * ex2)))


def closed_form_variances(p: ExperimentParams, claire_loss_term="channel") -> NoiseBudget:
    """Sum, difference and helped-sum variances at gain ``p.g``.

    At ``g = 1/sqrt(2)`` the helped variance equals
    :func:`helped_variance_unit_gain`.
    """
    return NoiseBudget(
        sum_variance(p),
        diff_variance(p),
        variance_vs_gain(p, p.g, claire_loss_term),
        p.g,
    )


def circuit_variances(p: ExperimentParams, claire_loss_term="channel") -> NoiseBudget:
    """Same budget computed by running the optical circuit and detectors."""
    pp = p.setup_params()
    state = run_circuit(build_dense_coding_setup(pp, with_detectors=False))
    return noise_budget_from_state(state, p.g, pp.xi1, pp.xi2, pp.eta,
                                   v_xs=p.v_xs, v_ys=p.v_ys, claire_loss_term=claire_loss_term)


def baseline_capacities(nbar):
    """Coherent-state ``ln(1 + n)`` and squeezed-state ``ln(1 + 2n)`` capacities."""
    return np.log1p(nbar), np.log1p(2 * np.asarray(nbar))


def _dense(sigma_sq, v_diff, v_x):
    return 0.5 * (np.log1p(sigma_sq / v_diff) + np.log1p(sigma_sq / v_x))


def _floors(p, floors):
    if floors is None:
        return closed_form_variances(replace(p, v_xs=0.0, v_ys=0.0))
    return floors


def channel_capacities(p: ExperimentParams, floors: NoiseBudget | None = None) -> CapacityPoint:
    """Dense-coding capacities with and without Claire's help at ``p.nbar``.

    ``floors`` overrides the noise variances; by default the closed forms
    are used with the signal variances zeroed.
    """
    f = _floors(p, floors)
    c_coh, c_sq = baseline_capacities(p.nbar)
    return CapacityPoint(
        nbar=p.nbar,
        c_helped=float(_dense(p.sigma_sq, f.v_diff, f.v_sum_helped)),
        c_unhelped=float(_dense(p.sigma_sq, f.v_diff, f.v_sum)),
        c_coherent=float(c_coh),
        c_squeezed=float(c_sq),
    )


def _bisect(f, lo, hi, xtol):
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoRoot(f"no sign change on [{lo}, {hi}]")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0:
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def capacity_thresholds(p: ExperimentParams = EXPERIMENT, floors: NoiseBudget | None = None,
                        upper: float = 1e3, xtol: float = 1e-6) -> Thresholds:
    """Mean photon numbers where dense coding overtakes the single-mode baselines.

    Each crossing is found by bisection on ``(sinh(r)^2, upper]``. Both
    sides vanish when no photons are left for the signal, so that trivial
    zero is stepped over by ``xtol``.
    """
    f = _floors(p, floors)
    lo = math.sinh(p.r) ** 2

    def gap(v_x, baseline):
        return lambda n: _dense(n - lo, f.v_diff, v_x) - baseline(n)

    coh = math.log1p
    sq = lambda n: math.log1p(2 * n)  # noqa: E731
    start = lo + xtol
    return Thresholds(
        _bisect(gap(f.v_sum_helped, coh), start, upper, xtol),
        _bisect(gap(f.v_sum, coh), start, upper, xtol),
        _bisect(gap(f.v_sum_helped, sq), start, upper, xtol),
    )


class SweepRRow(NamedTuple):
    r: float
    v_sum: float
    v_diff: float
    v_sum_helped: float
    v_sum_helped_opt: float
    g_opt: float


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-D sequence")
    if grid.size > 1 and not (np.all(np.diff(grid) > 0) or np.all(np.diff(grid) < 0)):
        raise ValueError("grid must be strictly monotone")
    return grid


def sweep_r(p: ExperimentParams, r_grid) -> list[SweepRRow]:
    """Noise variances versus squeezing, at ``p.g`` and at the optimal gain."""
    rows = []
    for r in _check_grid(r_grid):
        q = replace(p, r=float(r))
        budget = closed_form_variances(q)
        g_opt = optimal_gain(q)
        rows.append(SweepRRow(float(r), budget.v_sum, budget.v_diff, budget.v_sum_helped,
                              variance_vs_gain(q, g_opt), g_opt))
    return rows


def sweep_nbar(p: ExperimentParams, nbar_grid, floors: NoiseBudget | None = None) -> list[CapacityPoint]:
    """Capacities versus mean photon number."""
    return [channel_capacities(p.with_nbar(float(n)), floors) for n in _check_grid(nbar_grid)]
