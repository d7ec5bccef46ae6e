"""Semiclassical and linearized-Gaussian analysis.

The classical amplitude obeys d alpha/dt = p - 2iG|alpha|^2 alpha - gamma0
alpha, whose stationary intensity I = |alpha|^2 solves the monotone cubic
(gamma0^2 + 4 G^2 I^2) I = |p|^2.  Fluctuations around a fixed amplitude are
governed by the effective rates gamma = gamma0 + 4iG|alpha|^2 and
delta = 2iG alpha^2; their stationary second moments define a Gaussian state
(alpha, B, C) from which entropy, purity, eigenweights, squeezing and the
Fano factor all follow in closed form through the single parameter
x = sqrt((B + 1/2)^2 - |C|^2) - 1/2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    UnphysicalMoments,
    UnstableLinearization,
    VacuumLimitWarning,
)
from .fock import FockCutoff, OscillatorParams
from .measures import (
    fano,
    linear_entropy_and_purity,
    moments,
    spectral_decomposition,
    squeezing,
    von_neumann_entropy,
)
from .steady import steady_density


@dataclass(frozen=True)
class GaussianState:
    """Gaussian state of the oscillator: mean amplitude plus second moments.

    alpha = <a>, B = <a^dag a> - |alpha|^2 (symmetric noise), and
    C = <a^2> - alpha^2 (anomalous noise).
    """

    alpha: complex
    B: float
    C: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "B", float(self.B))
        object.__setattr__(self, "C", complex(self.C))
        if not (
            math.isfinite(self.B)
            and math.isfinite(abs(self.alpha))
            and math.isfinite(abs(self.C))
        ):
            raise UnphysicalMoments("moments must be finite")
        if self.B < 0.0:
            raise UnphysicalMoments(f"B = {self.B} must be >= 0")
        bound = (self.B + 0.5) ** 2 - abs(self.C) ** 2
        if bound < 0.25 - 1e-12:
            raise UnphysicalMoments(
                f"(B + 1/2)^2 - |C|^2 = {bound:.6g} violates the uncertainty "
                "bound 1/4"
            )


@dataclass(frozen=True)
class LinearizedCoeffs:
    """Effective rates of the fluctuation dynamics around a mean amplitude."""

    gamma_eff: complex
    delta_eff: complex

    @property
    def stable(self) -> bool:
        """True when |gamma| > |delta|, i.e. a stationary noise state exists."""
        return abs(self.gamma_eff) > abs(self.delta_eff)


def classical_steady_amplitude(params: OscillatorParams) -> complex:
    """Stationary solution of d alpha/dt = p - 2iG|alpha|^2 alpha - gamma0 alpha.

    The stationary intensity I = |alpha|^2 is the unique non-negative root of
    the monotone cubic (gamma0^2 + 4 G^2 I^2) I = |p|^2, after which
    alpha = p / (gamma0 + 2iG I).
    """
    p, g, g0 = params.pump, params.kerr, params.loss
    if p == 0:
        return 0.0 + 0.0j
    if g == 0.0 and g0 == 0.0:
        raise UnstableLinearization(
            "no stationary amplitude exists for zero loss and zero kerr "
            "with a nonzero pump"
        )
    target = abs(p) ** 2
    if g == 0.0:
        intensity = target / g0**2
    else:
        # f(I) = 4 G^2 I^3 + gamma0^2 I - |p|^2 is strictly increasing, so
        # bisect a bracket and polish with Newton.
        def f(i: float) -> float:
            return (4.0 * g * g * i * i + g0 * g0) * i - target

        # at I0 = (|p|^2 / 4G^2)^(1/3) the cubic term alone reaches |p|^2, so
        # f(I0) = gamma0^2 I0 >= 0 and I0 brackets the root from above
        hi = max(1.0, (target / (4.0 * g * g)) ** (1.0 / 3.0))
        lo = 0.0
        while f(hi) < 0.0:
            hi *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if f(mid) < 0.0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-14 * hi:
                break
        intensity = 0.5 * (lo + hi)
        for _ in range(4):
            deriv = 12.0 * g * g * intensity * intensity + g0 * g0
            intensity -= f(intensity) / deriv
    return p / (g0 + 2j * g * intensity)


def linearized_coeffs(alpha: complex, params: OscillatorParams) -> LinearizedCoeffs:
    """Effective rates gamma = gamma0 + 4iG|alpha|^2, delta = 2iG alpha^2."""
    gamma = params.loss + 4j * params.kerr * abs(alpha) ** 2
    delta = 2j * params.kerr * alpha * alpha
    return LinearizedCoeffs(gamma_eff=complex(gamma), delta_eff=complex(delta))


def steady_noise_moments(
    coeffs: LinearizedCoeffs, alpha: complex = 0.0 + 0.0j
) -> GaussianState:
    """Stationary noise moments of the linearized fluctuation equations.

    2B = |delta|^2 / (|gamma|^2 - |delta|^2) and
    2C = -delta gamma* / (|gamma|^2 - |delta|^2); requires |gamma| > |delta|.
    """
    gam, dlt = coeffs.gamma_eff, coeffs.delta_eff
    denom = abs(gam) ** 2 - abs(dlt) ** 2
    if denom <= 0.0:
        raise UnstableLinearization(
            f"|gamma| = {abs(gam):.6g} must exceed |delta| = {abs(dlt):.6g} "
            "for a stationary noise state"
        )
    b = 0.5 * abs(dlt) ** 2 / denom
    c = -0.5 * dlt * np.conj(gam) / denom
    return GaussianState(alpha=alpha, B=b, C=complex(c))


def gaussian_squeeze_S(coeffs: LinearizedCoeffs) -> float:
    """Stationary squeezing S = |gamma| / (|gamma| + |delta|).

    Identical to 1 + 2(B - |C|) evaluated at the stationary noise moments.
    """
    gam, dlt = abs(coeffs.gamma_eff), abs(coeffs.delta_eff)
    return gam / (gam + dlt)


def gaussian_x(gs: GaussianState) -> float:
    """Thermal-like parameter x = sqrt((B + 1/2)^2 - |C|^2) - 1/2 (>= 0)."""
    arg = (gs.B + 0.5) ** 2 - abs(gs.C) ** 2
    if arg < 0.25 - 1e-12:
        raise UnphysicalMoments(
            f"(B + 1/2)^2 - |C|^2 = {arg:.6g} below the physical bound 1/4"
        )
    return max(0.0, math.sqrt(max(arg, 0.0)) - 0.5)


def gaussian_weights(x: float, k_max: int) -> np.ndarray:
    """Eigenweights p_k = x^k / (1+x)^(1+k) for k = 0..k_max."""
    if x < 0:
        raise UnphysicalMoments(f"x = {x} must be >= 0")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    ratio = x / (1.0 + x)
    out = np.empty(k_max + 1)
    out[0] = 1.0 / (1.0 + x)
    for k in range(1, k_max + 1):
        out[k] = out[k - 1] * ratio
    return out


def gaussian_entropy_purity(x: float) -> tuple[float, float]:
    """Entropy E = (1+x)ln(1+x) - x ln x and purity P = 1/(1+2x) of the state.

    x = 0 is the removable pure-state limit (E = 0, P = 1).
    """
    if x < -1e-12:
        raise UnphysicalMoments(f"x = {x} must be >= 0")
    if x <= 0.0:
        return 0.0, 1.0
    entropy = (1.0 + x) * math.log1p(x) - x * math.log(x)
    return entropy, 1.0 / (1.0 + 2.0 * x)


def gaussian_S_F(gs: GaussianState) -> tuple[float, float]:
    """Squeezing S = 1 + 2(B - |C|) and Fano factor of the Gaussian state.

    F = 1 + 2B + 2 Re(C alpha*^2) / (|alpha|^2 + B); the vacuum limit
    |alpha|^2 + B -> 0 returns F = 1 with a VacuumLimitWarning.
    """
    s = 1.0 + 2.0 * (gs.B - abs(gs.C))
    denom = abs(gs.alpha) ** 2 + gs.B
    if denom < 1e-12:
        warnings.warn(
            "Fano factor is indeterminate in the vacuum limit; returning 1",
            VacuumLimitWarning,
            stacklevel=2,
        )
        return s, 1.0
    f = 1.0 + 2.0 * gs.B + 2.0 * (gs.C * np.conj(gs.alpha) ** 2).real / denom
    return s, f


@dataclass(frozen=True)
class StrongPumpEstimates:
    """Crude strong-pump limit |gamma| = 2|delta| of the stationary state."""

    squeeze_S: float
    fano_F: float
    x: float
    linear_entropy: float
    entropy: float
    weights: tuple[float, float, float]


def strong_pump_estimates() -> StrongPumpEstimates:
    """Closed-form stationary estimates in the strong-pump limit.

    For |alpha| large the rates satisfy |gamma| = 2|delta|, giving
    S = F = 2/3, x = 1/sqrt(3) - 1/2 and L = 1 - sqrt(3)/2 exactly.
    """
    x = 1.0 / math.sqrt(3.0) - 0.5
    entropy, purity = gaussian_entropy_purity(x)
    w = gaussian_weights(x, 2)
    return StrongPumpEstimates(
        squeeze_S=2.0 / 3.0,
        fano_F=2.0 / 3.0,
        x=x,
        linear_entropy=1.0 - purity,
        entropy=entropy,
        weights=(float(w[0]), float(w[1]), float(w[2])),
    )


@dataclass(frozen=True)
class SteadyComparison:
    """Exact-versus-Gaussian stationary scalars, paired entry by entry."""

    labels: tuple[str, ...]
    exact: tuple[float, ...]
    gaussian: tuple[float, ...]

    @property
    def abs_diff(self) -> tuple[float, ...]:
        return tuple(abs(e - g) for e, g in zip(self.exact, self.gaussian))


def gaussian_vs_exact_report(
    params: OscillatorParams, cutoff: FockCutoff
) -> SteadyComparison:
    """Compare the exact stationary state against its Gaussian approximation.

    Reports (E, L, S, F, <n>, p0..p5) for both; eigenweights are paired by
    descending order.
    """
    rho = steady_density(params, cutoff)
    e_exact = von_neumann_entropy(rho)
    l_exact, _ = linear_entropy_and_purity(rho)
    s_exact = squeezing(rho)
    f_exact = fano(rho)
    n_exact = moments(rho).mean_n
    w_exact = spectral_decomposition(rho).weights

    alpha = classical_steady_amplitude(params)
    coeffs = linearized_coeffs(alpha, params)
    gs = steady_noise_moments(coeffs, alpha=alpha)
    x = gaussian_x(gs)
    e_gauss, purity_gauss = gaussian_entropy_purity(x)
    s_gauss, f_gauss = gaussian_S_F(gs)
    w_gauss = gaussian_weights(x, 5)
    n_gauss = abs(alpha) ** 2 + gs.B

    labels = ("entropy", "linear_entropy", "squeeze_S", "fano_F", "mean_n") + tuple(
        f"p{k}" for k in range(6)
    )
    exact = (e_exact, l_exact, s_exact, f_exact, n_exact) + tuple(
        float(w_exact[k]) if k < w_exact.shape[0] else 0.0 for k in range(6)
    )
    gauss = (e_gauss, 1.0 - purity_gauss, s_gauss, f_gauss, float(n_gauss)) + tuple(
        float(w) for w in w_gauss
    )
    return SteadyComparison(labels=labels, exact=exact, gaussian=gauss)
