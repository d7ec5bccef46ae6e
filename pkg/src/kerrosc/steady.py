"""Exact steady state of the pumped dissipative Kerr oscillator.

The closed-form density matrix

    rho_mn = C (eps*)^m eps^n 0F2(lam*+m, lam+n; |eps|^2)
             / [sqrt(m! n!) Gamma(lam*+m) Gamma(lam+n)]

with eps = -i p / G, lam = -i gamma0 / G and the normalization constant
C = Gamma(lam*) Gamma(lam) / 0F2(lam*, lam; 2|eps|^2), together with the
matching factorial-moment formula.  The required special functions (complex
Gamma, generalized hypergeometric 0F2) are implemented here from scratch.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    CutoffTooSmall,
    DriftTooLarge,
    KerrZero,
    NonconvergenceWithinMaxTerms,
    PoleAtNonpositiveInteger,
)
from .fock import DensityMatrix, FockCutoff, OscillatorParams, _hermitize

# Lanczos approximation, g = 7, 9 coefficients: relative error around 1e-13
# over the right half plane.
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_MAX_TERMS = 100000


def complex_gamma(z: complex) -> complex:
    """Gamma function for complex argument (Lanczos + reflection)."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise PoleAtNonpositiveInteger(f"Gamma pole at z = {z}")
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (cmath.sin(math.pi * z) * complex_gamma(1.0 - z))
    z -= 1.0
    acc = _LANCZOS_P[0]
    for i, p in enumerate(_LANCZOS_P[1:], start=1):
        acc += p / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * acc


def _nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real)


def _hyper_0f2_raw(a: complex, b: complex, z: float) -> tuple[complex, float]:
    """0F2(a, b; z) series value and the max |term| seen (for diagnostics).

    Terms are built from running Pochhammer products (no Gamma ratios) and
    accumulated with compensated (Kahan) summation: for complex parameters
    the terms rotate in phase and can grow large before decaying.
    """
    if _nonpositive_integer(a) or _nonpositive_integer(b):
        raise PoleAtNonpositiveInteger(f"series parameter pole: a={a}, b={b}")
    if z < 0:
        raise ValueError(f"series argument must be >= 0, got {z}")
    total = 1.0 + 0.0j
    comp = 0.0 + 0.0j  # Kahan compensation
    term = 1.0 + 0.0j
    max_term = 1.0
    consecutive_small = 0
    k = 0
    while consecutive_small < 3:
        if k >= _MAX_TERMS:
            raise NonconvergenceWithinMaxTerms(
                f"0F2({a}, {b}; {z}) did not converge within {_MAX_TERMS} terms"
            )
        term = term * z / ((k + 1) * (a + k) * (b + k))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        max_term = max(max_term, abs(term))
        k += 1
        if abs(term) < 1e-16 * abs(total):
            consecutive_small += 1
        else:
            consecutive_small = 0
    return total, max_term


def hyper_0f2(a: complex, b: complex, z: float) -> complex:
    """Generalized hypergeometric 0F2(a, b; z) = sum_k z^k / (k! (a)_k (b)_k)."""
    return _hyper_0f2_raw(complex(a), complex(b), float(z))[0]


def hyper_0f2_diagnostic(a: complex, b: complex, z: float) -> tuple[complex, float]:
    """(value, max|term|/|value|): large ratios flag double-precision strain."""
    value, max_term = _hyper_0f2_raw(complex(a), complex(b), float(z))
    return value, max_term / abs(value)


@dataclass(frozen=True)
class SteadyParams:
    """Reduced parameters of the closed-form steady state.

    epsilon = -i pump / kerr, lam = -i loss / kerr, and the normalization
    constant norm_c = Gamma(lam*) Gamma(lam) / 0F2(lam*, lam; 2|epsilon|^2).
    """

    epsilon: complex
    lam: complex
    norm_c: complex

    @classmethod
    def from_params(cls, params: OscillatorParams) -> "SteadyParams":
        if params.kerr == 0.0:
            raise KerrZero(
                "closed-form steady state needs kerr != 0; for kerr = 0 the "
                "steady state is the coherent state with amplitude pump/loss"
            )
        eps = -1j * params.pump / params.kerr
        lam = -1j * params.loss / params.kerr
        f0 = hyper_0f2(np.conj(lam), lam, 2.0 * abs(eps) ** 2)
        norm_c = complex_gamma(np.conj(lam)) * complex_gamma(lam) / f0
        return cls(epsilon=eps, lam=lam, norm_c=norm_c)


@lru_cache(maxsize=16)
def steady_density(params: OscillatorParams, cutoff: FockCutoff) -> DensityMatrix:
    """Assemble the closed-form steady-state density matrix.

    Elements are built in log space (factorials and Gamma prefactors as
    complex logarithms, exponentiated once) so the assembly stays finite well
    beyond the n ~ 170 factorial overflow.  The result is hermitized and
    renormalized inside a strict drift budget; the pre-renormalization trace
    sitting at 1 is an end-to-end check of the special-function stack and is
    enforced here.
    """
    if params.kerr == 0.0:
        raise KerrZero(
            "closed-form steady state needs kerr != 0; for kerr = 0 the "
            "steady state is the coherent state with amplitude pump/loss"
        )
    dim = cutoff.dim
    if params.pump == 0:
        el = np.zeros((dim, dim), dtype=complex)
        el[0, 0] = 1.0
        return DensityMatrix(el)
    sp = SteadyParams.from_params(params)
    eps, lam = sp.epsilon, sp.lam
    ln_c = cmath.log(sp.norm_c)
    ln_eps = cmath.log(eps)
    z1 = abs(eps) ** 2
    lgam = [math.lgamma(k + 1) for k in range(dim)]
    ln_gamma_col = [cmath.log(complex_gamma(np.conj(lam) + m)) for m in range(dim)]
    ln_gamma_row = [cmath.log(complex_gamma(lam + n)) for n in range(dim)]
    el = np.empty((dim, dim), dtype=complex)
    for n in range(dim):
        for m in range(dim):
            ln_pref = (
                ln_c
                + n * ln_eps
                + m * np.conj(ln_eps)
                - 0.5 * (lgam[n] + lgam[m])
                - ln_gamma_col[m]
                - ln_gamma_row[n]
            )
            el[n, m] = cmath.exp(ln_pref) * hyper_0f2(
                np.conj(lam) + m, lam + n, z1
            )
    trace_dev = abs(complex(np.trace(el)) - 1.0)
    herm_dev = float(np.max(np.abs(el - el.conj().T)))
    if trace_dev > 1e-8 or herm_dev > 1e-8:
        raise DriftTooLarge(
            f"steady assembly drift: |Tr-1| = {trace_dev:.3e}, "
            f"Hermiticity defect = {herm_dev:.3e} (budget 1e-8)"
        )
    el = _hermitize(el)
    diag_tail = float(np.sum(el.diagonal().real[-3:]))
    if diag_tail > 1e-8:
        raise CutoffTooSmall(
            f"steady-state diagonal tail {diag_tail:.3e} at n_cut={cutoff.n_cut}"
        )
    return DensityMatrix(el)


def steady_moment(m: int, n: int, params: OscillatorParams) -> complex:
    """Normally ordered steady-state moment <(a^dag)^m a^n>.

    <(a^dag)^m a^n> = (eps*)^m eps^n
                      * Gamma(lam*) Gamma(lam) / [Gamma(lam*+m) Gamma(lam+n)]
                      * 0F2(lam*+m, lam+n; 2|eps|^2) / 0F2(lam*, lam; 2|eps|^2)
    """
    if params.kerr == 0.0:
        raise KerrZero("moment formula needs kerr != 0")
    if m < 0 or n < 0:
        raise ValueError("moment orders must be >= 0")
    if m == 0 and n == 0:
        return 1.0 + 0.0j
    if params.pump == 0:
        return 0.0 + 0.0j
    sp = SteadyParams.from_params(params)
    eps, lam = sp.epsilon, sp.lam
    z2 = 2.0 * abs(eps) ** 2
    ln_eps = cmath.log(eps)
    ln_pref = (
        cmath.log(sp.norm_c)
        + n * ln_eps
        + m * np.conj(ln_eps)
        - cmath.log(complex_gamma(np.conj(lam) + m))
        - cmath.log(complex_gamma(lam + n))
    )
    return cmath.exp(ln_pref) * hyper_0f2(np.conj(lam) + m, lam + n, z2)
