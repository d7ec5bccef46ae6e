"""Time evolution engines.

The full quantum evolution integrates the zero-temperature master equation

    d rho / dt = -i [H, rho] + gamma0 (2 a rho a^dag - a^dag a rho - rho a^dag a),
    H = i (p a^dag - p* a) + G a^dag^2 a^2,

with an adaptive embedded Dormand-Prince 5(4) stepper on the dense truncated
matrix, hermitizing and renormalizing after every accepted step.  Alongside it
live the closed-form maps used as oracles and cheap approximations: the
lossless Kerr phase map, the linear-damping amplitude, the classical amplitude
ODE and the linearized noise-moment ODEs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CutoffExceeded, DriftTooLarge, StepSizeUnderflow
from .fock import (
    DensityMatrix,
    FockCutoff,
    OscillatorParams,
    StateVector,
    annihilation_matrix,
    tail_mass,
)
from .gaussian import linearized_coeffs

# Dormand-Prince 5(4) tableau (first-same-as-last).
_DP_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
# difference between the 5th- and the embedded 4th-order weights
_DP_ERR = (
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing output times, starting at 0."""

    times: np.ndarray

    def __post_init__(self) -> None:
        t = np.array(self.times, dtype=float, copy=True)
        if t.ndim != 1 or t.shape[0] < 1:
            raise ValueError("times must be a 1-d array with at least one entry")
        if t[0] != 0.0:
            raise ValueError(f"times must start at 0, got {t[0]}")
        if t.shape[0] > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly increasing")
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    @classmethod
    def uniform(cls, t_max: float, count: int) -> "TimeGrid":
        if count < 2 or t_max <= 0:
            raise ValueError("need count >= 2 and t_max > 0")
        return cls(np.linspace(0.0, t_max, count))


@dataclass(frozen=True)
class StepDiagnostics:
    """Per-output-time integration diagnostics.

    trace_error : accumulated |trace change| before renormalization over the
                  segment ending at this output time
    tail_mass   : population in the last diagonal entries at this time
    steps       : cumulative accepted steps since t = 0
    """

    trace_error: float
    tail_mass: float
    steps: int


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Density matrices and diagnostics on a time grid."""

    times: TimeGrid
    states: tuple[DensityMatrix, ...]
    diagnostics: tuple[StepDiagnostics, ...]

    def __post_init__(self) -> None:
        n = self.times.times.shape[0]
        if len(self.states) != n or len(self.diagnostics) != n:
            raise ValueError("one state and one diagnostics record per time point")


@dataclass(frozen=True, eq=False)
class SemiclassicalPath:
    """Classical amplitude alpha(t) with optional linearized noise moments."""

    times: TimeGrid
    alpha: np.ndarray
    noise_B: np.ndarray | None
    noise_C: np.ndarray | None

    def __post_init__(self) -> None:
        n = self.times.times.shape[0]
        if self.alpha.shape != (n,):
            raise ValueError("alpha must have one entry per time point")
        if self.noise_B is not None:
            if self.noise_B.shape != (n,) or float(np.min(self.noise_B)) < -1e-12:
                raise ValueError("noise_B must stay >= -1e-12 at all times")


def _adaptive_rk(
    f: Callable[[np.ndarray], np.ndarray],
    y: np.ndarray,
    t0: float,
    t1: float,
    rtol: float,
    atol: float,
    on_accept: Callable[[np.ndarray], np.ndarray] | None = None,
    h_init: float | None = None,
) -> tuple[np.ndarray, int, float]:
    """Integrate dy/dt = f(y) from t0 to t1 with embedded 5(4) step control.

    Returns (y(t1), accepted step count, last step size).  `on_accept`, if
    given, may adjust the state after each accepted step (drift repair).
    """
    span = t1 - t0
    h_min = 1e-14 * max(1.0, abs(t1))
    k = [None] * 7
    k[0] = f(y)
    if h_init is None:
        sc = atol + rtol * np.abs(y)
        d0 = math.sqrt(float(np.mean(np.abs(y / sc) ** 2)))
        d1 = math.sqrt(float(np.mean(np.abs(k[0] / sc) ** 2)))
        if d0 > 1e-300 and d1 > 1e-300:
            h = 0.01 * d0 / d1
        elif d1 <= 1e-300:
            # derivative negligible: start with a coarse step
            h = 0.1 * span
        else:
            # state at (or near) zero but moving: start tiny and let the
            # controller grow the step
            h = 1e-6 * span
    else:
        h = h_init
    h = min(h, span)
    t = t0
    steps = 0
    while t < t1:
        h = min(h, t1 - t)
        if h < h_min:
            raise StepSizeUnderflow(f"step size {h:.3e} underflow at t = {t:.6g}")
        for i in range(1, 7):
            yi = y + h * sum(aij * k[j] for j, aij in enumerate(_DP_A[i]) if aij != 0.0)
            k[i] = f(yi)
        y_new = yi  # stage 7 input is the 5th-order solution
        err_vec = h * sum(ej * k[j] for j, ej in enumerate(_DP_ERR) if ej != 0.0)
        sc = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean(np.abs(err_vec / sc) ** 2)))
        if err <= 1.0:
            t += h
            y = y_new
            k[0] = k[6]  # first-same-as-last
            if on_accept is not None:
                y = on_accept(y)
            steps += 1
            factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            factor = max(0.2, 0.9 * err ** -0.2)
        h *= factor
    return y, steps, h


def liouvillian_generator(
    params: OscillatorParams, dim: int
) -> Callable[[np.ndarray], np.ndarray]:
    """Right-hand side r -> d rho/dt for the master equation at this dimension."""
    cutoff = FockCutoff(dim - 1)
    a = annihilation_matrix(cutoff)
    ad = a.conj().T
    n_diag = np.arange(dim, dtype=float)
    h_mat = 1j * (params.pump * ad - np.conj(params.pump) * a)
    h_mat += np.diag(params.kerr * n_diag * (n_diag - 1.0)).astype(complex)
    loss = params.loss

    def rhs(r: np.ndarray) -> np.ndarray:
        out = -1j * (h_mat @ r - r @ h_mat)
        if loss != 0.0:
            out += loss * (
                2.0 * (a @ r @ ad) - n_diag[:, None] * r - r * n_diag[None, :]
            )
        return out

    return rhs


def liouvillian_apply(rho: DensityMatrix, params: OscillatorParams) -> np.ndarray:
    """d rho/dt for the master equation; Hermitian and traceless to round-off."""
    return liouvillian_generator(params, rho.dim)(np.array(rho.elements))


def evolve(
    rho0: DensityMatrix,
    params: OscillatorParams,
    grid: TimeGrid,
    rtol: float = 1e-8,
    atol: float = 1e-10,
    tail_margin: int = 5,
) -> Trajectory:
    """Master-equation evolution of rho0 recorded at the grid times.

    Every accepted integrator step is hermitized and renormalized; the
    accumulated pre-renormalization trace drift must stay below 1e-8 per unit
    time on each output segment, and the population within `tail_margin`
    entries of the truncation edge must stay below 1e-6 at every output.
    """
    if rtol <= 0 or atol <= 0:
        raise ValueError("rtol and atol must be > 0")
    dim = rho0.dim
    rhs = liouvillian_generator(params, dim)
    margin = min(tail_margin, dim - 1)

    drift_acc = 0.0

    def repair(y: np.ndarray) -> np.ndarray:
        nonlocal drift_acc
        tr = np.trace(y).real
        drift_acc += abs(tr - 1.0)
        return (0.5 / tr) * (y + y.conj().T)

    states = [rho0]
    diags = [StepDiagnostics(0.0, tail_mass(rho0, margin), 0)]
    y = np.array(rho0.elements, dtype=complex)
    total_steps = 0
    h_last: float | None = None
    times = grid.times
    for idx in range(1, times.shape[0]):
        ta, tb = float(times[idx - 1]), float(times[idx])
        drift_acc = 0.0
        y, steps, h_last = _adaptive_rk(
            rhs, y, ta, tb, rtol, atol, on_accept=repair, h_init=h_last
        )
        total_steps += steps
        budget = 1e-8 * max(1.0, tb - ta)
        if drift_acc > budget:
            raise DriftTooLarge(
                f"trace drift {drift_acc:.3e} over [{ta:.6g}, {tb:.6g}] "
                f"exceeds budget {budget:.3e}"
            )
        state = DensityMatrix(y)
        tm = tail_mass(state, margin)
        if tm > 1e-6:
            raise CutoffExceeded(
                f"tail mass {tm:.3e} at t = {tb:.6g} (n_cut = {dim - 1} too small)"
            )
        states.append(state)
        diags.append(StepDiagnostics(drift_acc, tm, total_steps))
    return Trajectory(times=grid, states=tuple(states), diagnostics=tuple(diags))


def kerr_lossless_evolve(psi0: StateVector, kerr: float, t: float) -> StateVector:
    """Pure Kerr evolution: c_k -> c_k exp(-i k(k-1) G t).

    The map is periodic with period T = pi/G: k(k-1) is always even, so at
    t = T every phase is an exact multiple of 2 pi.
    """
    k = np.arange(psi0.dim, dtype=float)
    phases = np.exp(-1j * kerr * t * k * (k - 1.0))
    return StateVector(psi0.amplitudes * phases)


def linear_damping_amplitude(
    alpha0: complex, params: OscillatorParams, t: float
) -> complex:
    """Coherent amplitude under pump and linear loss (valid for kerr = 0).

    alpha(t) = alpha0 e^{-gamma0 t} + (p/gamma0)(1 - e^{-gamma0 t}); the
    gamma0 = 0 limit is alpha0 + p t.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if params.loss == 0.0:
        return complex(alpha0) + params.pump * t
    decay = math.exp(-params.loss * t)
    return complex(alpha0) * decay + (params.pump / params.loss) * (1.0 - decay)


def _classical_rhs(params: OscillatorParams) -> Callable[[np.ndarray], np.ndarray]:
    p, g, g0 = params.pump, params.kerr, params.loss

    def rhs(y: np.ndarray) -> np.ndarray:
        alpha = y[0]
        return np.array([p - 2j * g * abs(alpha) ** 2 * alpha - g0 * alpha])

    return rhs


def classical_path(
    alpha0: complex,
    params: OscillatorParams,
    grid: TimeGrid,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> SemiclassicalPath:
    """Integrate d alpha/dt = p - 2iG|alpha|^2 alpha - gamma0 alpha on the grid."""
    if rtol <= 0:
        raise ValueError("rtol must be > 0")
    rhs = _classical_rhs(params)
    y = np.array([complex(alpha0)])
    alphas = [complex(alpha0)]
    h_last: float | None = None
    times = grid.times
    for idx in range(1, times.shape[0]):
        y, _, h_last = _adaptive_rk(
            rhs, y, float(times[idx - 1]), float(times[idx]), rtol, atol, h_init=h_last
        )
        alphas.append(complex(y[0]))
    return SemiclassicalPath(
        times=grid, alpha=np.array(alphas), noise_B=None, noise_C=None
    )


def linearized_noise_path(
    alpha0: complex,
    B0: float,
    C0: complex,
    params: OscillatorParams,
    grid: TimeGrid,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> SemiclassicalPath:
    """Joint integration of the classical amplitude and linearized noise moments.

    Along alpha(t) the fluctuation operator picks up the effective rates
    gamma = gamma0 + 4iG|alpha|^2 and delta = 2iG alpha^2, and the symmetric
    and anomalous second moments obey

        dB/dt = -(gamma + gamma*) B - (delta* C + delta C*),
        dC/dt = -delta (1 + 2B) - 2 gamma C.
    """
    if B0 < 0:
        raise ValueError("B0 must be >= 0")
    p, g0 = params.pump, params.loss
    g = params.kerr

    def rhs(y: np.ndarray) -> np.ndarray:
        alpha, b, c = y
        coeffs = linearized_coeffs(alpha, params)
        gam, dlt = coeffs.gamma_eff, coeffs.delta_eff
        d_alpha = p - 2j * g * abs(alpha) ** 2 * alpha - g0 * alpha
        d_b = -(gam + np.conj(gam)) * b - (np.conj(dlt) * c + dlt * np.conj(c))
        d_c = -dlt * (1.0 + 2.0 * b) - 2.0 * gam * c
        return np.array([d_alpha, d_b, d_c])

    y = np.array([complex(alpha0), complex(B0), complex(C0)])
    alphas = [complex(alpha0)]
    bs = [float(B0)]
    cs = [complex(C0)]
    h_last: float | None = None
    times = grid.times
    for idx in range(1, times.shape[0]):
        y, _, h_last = _adaptive_rk(
            rhs, y, float(times[idx - 1]), float(times[idx]), rtol, atol, h_init=h_last
        )
        alphas.append(complex(y[0]))
        bs.append(float(y[1].real))
        cs.append(complex(y[2]))
    return SemiclassicalPath(
        times=grid,
        alpha=np.array(alphas),
        noise_B=np.array(bs),
        noise_C=np.array(cs),
    )
