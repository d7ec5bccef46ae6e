"""s-parametrized quasidistributions on phase-space grids.

W^{(s)}(beta) = (1/pi) Tr[rho T^{(s)}(beta)] is assembled from the
number-basis matrix elements of the operator T^{(s)}; for m >= n

    <n|T^{(s)}(beta)|m> = sqrt(n!/m!) (2/(1-s))^{m-n+1} ((s+1)/(s-1))^n
                          (beta*)^{m-n} e^{-2|beta|^2/(1-s)}
                          L_n^{m-n}(4|beta|^2/(1-s^2)),

with the m < n elements given by Hermitian conjugation and the s = -1
(Husimi) limit by the exact coherent-projector form
e^{-|beta|^2} beta^n (beta*)^m / sqrt(n! m!).  The Laguerre factor is
accumulated pre-multiplied by ((s+1)/(s-1))^n so every intermediate stays
bounded even as s -> -1.  Gaussian states admit the closed form

    W^{(s)} = 1/(pi sqrt(K_s)) exp[(-a|u|^2 + Re(C* u^2))/K_s],
    u = beta - alpha,  a = (1-s)/2 + B,  K_s = a^2 - |C|^2,

valid while K_s > 0; K_1 <= 0 certifies nonclassicality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidOrder, NonpositiveKs, SParamOutOfRange
from .fock import DensityMatrix
from .gaussian import GaussianState

_S_MAX = 1.0 - 1e-9


@dataclass(frozen=True, eq=False)
class QuasiGrid:
    """Real quasidistribution values on a uniform rectangular phase-space grid.

    values[i, j] = W^{(s)}(re_axis[j] + 1i * im_axis[i]).
    """

    s: float
    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        re = _checked_axis("re_axis", self.re_axis)
        im = _checked_axis("im_axis", self.im_axis)
        vals = np.array(self.values, dtype=float, copy=True)
        if vals.shape != (im.shape[0], re.shape[0]):
            raise ValueError(
                f"values shape {vals.shape} does not match "
                f"(len(im_axis), len(re_axis)) = ({im.shape[0]}, {re.shape[0]})"
            )
        if self.s == -1.0 and float(np.min(vals)) < -1e-12:
            raise ValueError(
                f"Husimi values must be nonnegative, found {np.min(vals):.3e}"
            )
        for name, arr in (("re_axis", re), ("im_axis", im), ("values", vals)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "s", float(self.s))


def _checked_axis(name: str, axis: np.ndarray) -> np.ndarray:
    arr = np.array(axis, dtype=float, copy=True)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise ValueError(f"{name} must be 1-d with at least two points")
    steps = np.diff(arr)
    if np.min(steps) <= 0:
        raise ValueError(f"{name} must be strictly increasing")
    if np.max(steps) - np.min(steps) > 1e-9 * np.max(steps):
        raise ValueError(f"{name} must be uniformly spaced")
    return arr


def _check_s(s: float) -> float:
    s = float(s)
    if not (-1.0 <= s <= _S_MAX):
        raise SParamOutOfRange(
            f"s = {s} outside [-1, 1 - 1e-9]; s = 1 is excluded "
            "(no regular function exists there for these states)"
        )
    return s


def associated_laguerre(n: int, k: int, x):
    """Associated Laguerre polynomial L_n^k(x) by upward recurrence in degree.

    Accepts scalar or ndarray x; requires n >= 0 and n + k >= 0.
    """
    if n < 0 or n + k < 0:
        raise InvalidOrder(f"need n >= 0 and n + k >= 0, got n = {n}, k = {k}")
    prev = np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else 1.0
    if n == 0:
        return prev
    cur = 1.0 + k - x
    for i in range(1, n):
        prev, cur = cur, ((2 * i + k + 1 - x) * cur - (i + k) * prev) / (i + 1)
    return cur


def _scaled_laguerre_seq(n_max: int, k: int, c: float, cx):
    """Yield M_n = c^n L_n^k(x) for n = 0..n_max given cx = c*x.

    The recurrence is written entirely in terms of c and cx, which stay
    bounded as s -> -1 where c -> 0 and x -> infinity.
    """
    prev = None
    cur = np.ones_like(cx) if np.ndim(cx) else 1.0
    for i in range(n_max + 1):
        yield cur
        nxt = ((2 * i + k + 1) * c - cx) * cur
        if prev is not None:
            nxt = nxt - c * c * (i + k) * prev
        prev, cur = cur, nxt / (i + 1)


def cg_matrix_element(n: int, m: int, beta: complex, s: float) -> complex:
    """Number-basis matrix element <n|T^{(s)}(beta)|m>."""
    if n < 0 or m < 0:
        raise InvalidOrder(f"need n, m >= 0, got n = {n}, m = {m}")
    s = _check_s(s)
    if m < n:
        return complex(np.conj(cg_matrix_element(m, n, beta, s)))
    beta = complex(beta)
    b2 = abs(beta) ** 2
    k = m - n
    if s == -1.0:
        log_pref = -0.5 * (math.lgamma(n + 1) + math.lgamma(m + 1))
        return math.exp(-b2 + log_pref) * beta**n * np.conj(beta) ** m
    c = (s + 1.0) / (s - 1.0)
    cx = -4.0 * b2 / (1.0 - s) ** 2
    scaled = None
    for scaled in _scaled_laguerre_seq(n, k, c, cx):
        pass
    pref = math.exp(
        0.5 * (math.lgamma(n + 1) - math.lgamma(m + 1))
        - 2.0 * b2 / (1.0 - s)
        + (k + 1) * math.log(2.0 / (1.0 - s))
    )
    return pref * np.conj(beta) ** k * scaled


def quasidistribution(
    rho: DensityMatrix, s: float, re_axis, im_axis
) -> QuasiGrid:
    """Evaluate W^{(s)}(beta) = (1/pi) sum_{mn} rho_mn <n|T^{(s)}|m> on a grid."""
    s = _check_s(s)
    re = _checked_axis("re_axis", np.asarray(re_axis))
    im = _checked_axis("im_axis", np.asarray(im_axis))
    beta = re[None, :] + 1j * im[:, None]
    r = rho.elements
    dim = rho.dim
    if s == -1.0:
        w = _husimi_grid(r, dim, beta)
    else:
        w = _general_grid(r, dim, beta, s)
    scale = float(np.max(np.abs(w.real)))
    residue = float(np.max(np.abs(w.imag)))
    if residue > 1e-10 * max(scale, 1e-300):
        raise ValueError(
            f"imaginary residue {residue:.3e} exceeds 1e-10 of grid max {scale:.3e}"
        )
    vals = w.real / math.pi
    if s == -1.0:
        vals = np.where((vals < 0.0) & (vals > -1e-12), 0.0, vals)
    return QuasiGrid(s=s, re_axis=re, im_axis=im, values=vals)


def _husimi_grid(r: np.ndarray, dim: int, beta: np.ndarray) -> np.ndarray:
    # <beta|rho|beta> with unnormalized coherent vectors v_m = beta^m/sqrt(m!)
    v = np.empty((dim,) + beta.shape, dtype=complex)
    v[0] = 1.0
    for mm in range(1, dim):
        v[mm] = v[mm - 1] * beta / math.sqrt(mm)
    flat = v.reshape(dim, -1)
    quad = np.einsum("ig,ij,jg->g", np.conj(flat), r, flat)
    return (quad * np.exp(-np.abs(beta.ravel()) ** 2)).reshape(beta.shape)


def _general_grid(r: np.ndarray, dim: int, beta: np.ndarray, s: float) -> np.ndarray:
    b2 = np.abs(beta) ** 2
    c = (s + 1.0) / (s - 1.0)
    cx = -4.0 * b2 / (1.0 - s) ** 2
    expfac = np.exp(-2.0 * b2 / (1.0 - s))
    log2f = math.log(2.0 / (1.0 - s))
    lgam = [math.lgamma(i + 1) for i in range(dim)]
    w = np.zeros(beta.shape, dtype=complex)
    conj_beta = np.conj(beta)
    for k in range(dim):
        power = expfac * conj_beta**k if k else expfac
        for n, scaled in enumerate(_scaled_laguerre_seq(dim - 1 - k, k, c, cx)):
            m = n + k
            pref = math.exp(0.5 * (lgam[n] - lgam[m]) + (k + 1) * log2f)
            t_nm = pref * power * scaled
            if k == 0:
                w += r[n, n] * t_nm
            else:
                w += r[m, n] * t_nm + r[n, m] * np.conj(t_nm)
    return w


def gaussian_quasidistribution(
    gs: GaussianState, s: float, re_axis, im_axis
) -> QuasiGrid:
    """Closed-form W^{(s)} of a Gaussian state on a grid.

    Requires K_s = ((1-s)/2 + B)^2 - |C|^2 > 0; a nonpositive K_s (possible
    for s near 1 on squeezed states) signals nonclassicality at this ordering.
    """
    s = float(s)
    if not (-1.0 <= s <= 1.0):
        raise SParamOutOfRange(f"s = {s} outside [-1, 1]")
    re = _checked_axis("re_axis", np.asarray(re_axis))
    im = _checked_axis("im_axis", np.asarray(im_axis))
    a = 0.5 * (1.0 - s) + gs.B
    k_s = a * a - abs(gs.C) ** 2
    if k_s <= 0.0 or a <= 0.0:
        raise NonpositiveKs(
            f"K_s = {k_s:.6g} at s = {s}: no regular Gaussian quasidistribution "
            "exists at this ordering (nonclassical state)"
        )
    u = re[None, :] + 1j * im[:, None] - gs.alpha
    expo = (-a * np.abs(u) ** 2 + (np.conj(gs.C) * u * u).real) / k_s
    vals = np.exp(expo) / (math.pi * math.sqrt(k_s))
    return QuasiGrid(s=s, re_axis=re, im_axis=im, values=vals)
