"""
Gaussian states over N optical modes and the optical elements acting on them.

Conventions
-----------
Quadratures are interleaved, ``(X1, Y1, X2, Y2, ..., XN, YN)``, and normalized
so that the vacuum has unit variance in every quadrature. Mode ids are
1-based everywhere in the public API.

Every operation is a pure function returning a new :class:`GaussianState`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GaussianState",
    "QuadratureForm",
    "omega",
    "vacuum_state",
    "two_mode_squeeze",
    "two_mode_squeeze_matrix",
    "beamsplitter",
    "beamsplitter_matrix",
    "phase_shift",
    "phase_shift_matrix",
    "loss",
    "displace",
    "variance_of",
    "symplectic_eigenvalues",
]


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean vector and covariance matrix of an N-mode Gaussian state.

    Parameters
    ----------
    mean : array_like, shape (2N,)
    cov : array_like, shape (2N, 2N)
        Vacuum-normalized covariance (vacuum = identity).
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = _frozen(self.mean)
        cov = _frozen(self.cov)
        if mean.ndim != 1 or mean.size % 2 or mean.size == 0:
            raise ValueError(f"mean must have even, positive length, got shape {mean.shape}")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"cov shape {cov.shape} does not match mean length {mean.size}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValueError("state contains non-finite entries")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def _check_mode(self, i) -> int:
        if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
            raise TypeError(f"mode id must be an integer, got {i!r}")
        if not 1 <= i <= self.n_modes:
            raise ValueError(f"mode {i} out of range 1..{self.n_modes}")
        return int(i)

    def mode_block(self, i: int) -> np.ndarray:
        """2x2 covariance block of mode ``i``."""
        k = 2 * (self._check_mode(i) - 1)
        return self.cov[k:k + 2, k:k + 2].copy()

    def photon_number(self) -> float:
        """Total mean photon number, (tr V + |mean|^2 - 2N) / 4."""
        return (np.trace(self.cov) + self.mean @ self.mean - 2 * self.n_modes) / 4

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes})"


@dataclass(frozen=True, eq=False)
class QuadratureForm:
    """A real linear combination ``sum_k c_k R_k`` of the quadratures.

    Build one from a dictionary of terms with :meth:`from_terms`::

        QuadratureForm.from_terms(3, {"X1": 1, "X2": 1, "X3": 1})
    """

    coefficients: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coefficients)
        if c.ndim != 1 or c.size % 2 or c.size == 0:
            raise ValueError(f"coefficients must have even, positive length, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_terms(cls, n_modes: int, terms: dict) -> "QuadratureForm":
        c = np.zeros(2 * n_modes)
        for name, value in terms.items():
            quad, mode = name[0].upper(), int(name[1:])
            if quad not in "XY" or not 1 <= mode <= n_modes:
                raise ValueError(f"bad quadrature term {name!r}")
            c[2 * (mode - 1) + (quad == "Y")] += value
        return cls(c)

    @property
    def n_modes(self) -> int:
        return self.coefficients.size // 2

    @property
    def snl_reference(self) -> float:
        """Variance of the form on vacuum, i.e. its squared norm."""
        return float(self.coefficients @ self.coefficients)

    def __add__(self, other):
        return QuadratureForm(self.coefficients + other.coefficients)

    def __mul__(self, alpha):
        return QuadratureForm(alpha * self.coefficients)

    __rmul__ = __mul__

    def __repr__(self):
        return f"QuadratureForm({np.array2string(self.coefficients, precision=4)})"


def omega(n_modes: int) -> np.ndarray:
    """Symplectic form for interleaved ordering, ``block_diag([[0, 1], [-1, 0]] * N)``."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def vacuum_state(n_modes: int) -> GaussianState:
    if isinstance(n_modes, bool) or not isinstance(n_modes, (int, np.integer)) or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    return GaussianState(np.zeros(2 * n_modes), np.eye(2 * n_modes))


def _embed(n_modes, modes, local):
    """Identity on 2N quadratures with ``local`` acting on the listed (1-based) modes."""
    S = np.eye(2 * n_modes)
    idx = [2 * (m - 1) + q for m in modes for q in (0, 1)]
    S[np.ix_(idx, idx)] = local
    return S


def _apply(state, S):
    return GaussianState(S @ state.mean, S @ state.cov @ S.T)


def _check_pair(state, i, j):
    i, j = state._check_mode(i), state._check_mode(j)
    if i == j:
        raise ValueError(f"two-mode element needs distinct modes, got {i} twice")
    return i, j


def two_mode_squeeze_matrix(r: float) -> np.ndarray:
    """Local 4x4 symplectic matrix on (Xi, Yi, Xj, Yj).

    Acting on vacuum it squeezes ``Xi + Xj`` and ``Yi - Yj`` to ``2 exp(-2r)``.
    """
    ch, sh = np.cosh(r), np.sinh(r)
    return np.array([
        [ch, 0, -sh, 0],
        [0, ch, 0, sh],
        [-sh, 0, ch, 0],
        [0, sh, 0, ch],
    ])


def two_mode_squeeze(state: GaussianState, i: int, j: int, r: float) -> GaussianState:
    i, j = _check_pair(state, i, j)
    if not np.isfinite(r) or r < 0:
        raise ValueError(f"squeeze parameter must be finite and >= 0, got {r}")
    return _apply(state, _embed(state.n_modes, (i, j), two_mode_squeeze_matrix(r)))


def beamsplitter_matrix(t: float, rho: float | None = None) -> np.ndarray:
    """Local 4x4 matrix for mode mixing ``[[t, rho], [-rho, t]]``.

    ``rho`` defaults to ``+sqrt(1 - t**2)``. The mixing is real, so X and Y
    transform identically.
    """
    if rho is None:
        rho = np.sqrt(max(0.0, 1.0 - t * t))
    return np.kron(np.array([[t, rho], [-rho, t]]), np.eye(2))


def beamsplitter(state: GaussianState, i: int, j: int, t: float, rho: float | None = None) -> GaussianState:
    """Mix modes ``i`` and ``j``: ``a_i -> t a_i + rho a_j``, ``a_j -> -rho a_i + t a_j``.

    Passing ``rho`` explicitly is allowed as long as ``t**2 + rho**2 == 1``;
    this is how a half-wave plate with ``cos 2 theta < 0`` is represented.
    """
    i, j = _check_pair(state, i, j)
    if not np.isfinite(t) or abs(t) > 1:
        raise ValueError(f"transmission amplitude must lie in [-1, 1], got {t}")
    if rho is not None and abs(t * t + rho * rho - 1) > 1e-12:
        raise ValueError(f"t^2 + rho^2 must equal 1, got {t * t + rho * rho}")
    return _apply(state, _embed(state.n_modes, (i, j), beamsplitter_matrix(t, rho)))


def phase_shift_matrix(phi: float) -> np.ndarray:
    """Rotation with ``X -> cos(phi) X - sin(phi) Y``, ``Y -> sin(phi) X + cos(phi) Y``."""
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def phase_shift(state: GaussianState, i: int, phi: float) -> GaussianState:
    i = state._check_mode(i)
    if not np.isfinite(phi):
        raise ValueError(f"phase must be finite, got {phi}")
    return _apply(state, _embed(state.n_modes, (i,), phase_shift_matrix(phi)))


def loss(state: GaussianState, i: int, xi: float) -> GaussianState:
    """Attenuation channel with amplitude transmissivity ``xi``.

    Intensity efficiency is ``xi**2``. Mode ``i`` is mixed with an implicit
    vacuum: ``X -> xi X + sqrt(1 - xi**2) X_v``.
    """
    i = state._check_mode(i)
    if not np.isfinite(xi) or not 0 <= xi <= 1:
        raise ValueError(f"amplitude transmissivity must lie in [0, 1], got {xi}")
    k = 2 * (i - 1)
    scale = np.ones(2 * state.n_modes)
    scale[k:k + 2] = xi
    cov = state.cov * np.outer(scale, scale)
    cov[k:k + 2, k:k + 2] += (1 - xi * xi) * np.eye(2)
    return GaussianState(scale * state.mean, cov)


def displace(state: GaussianState, i: int, x_s: float, y_s: float) -> GaussianState:
    i = state._check_mode(i)
    if not (np.isfinite(x_s) and np.isfinite(y_s)):
        raise ValueError("displacement must be finite")
    mean = state.mean.copy()
    mean[2 * (i - 1)] += x_s
    mean[2 * (i - 1) + 1] += y_s
    return GaussianState(mean, state.cov)


def variance_of(state: GaussianState, form: QuadratureForm) -> float:
    """Variance ``c^T V c`` of the quadrature combination ``form``."""
    c = form.coefficients
    if c.size != state.mean.size:
        raise ValueError(f"form acts on {form.n_modes} modes, state has {state.n_modes}")
    return float(c @ state.cov @ c)


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix, sorted ascending (length N)."""
    cov = np.asarray(cov, dtype=float)
    n = cov.shape[0] // 2
    ev = np.abs(np.linalg.eigvals(omega(n) @ cov))
    return np.sort(ev)[::2]
