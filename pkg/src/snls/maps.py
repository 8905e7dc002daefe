"""Discretisation maps for the cubic nonlinearity and the frozen-noise
stochastic term.

map_F is the Fourier-side ground truth (direct sum over resonant mode
quadruples weighted by kernel integrals).  map_F_midpoint_physical is an
equivalent multiplier-operator form of t * map_F for the d=1 symplectic
kernel with p=0, c=1, evaluated with padded transforms; it is what
production stepping uses.  The operator form is derived from the
Fourier-side definition and tested against it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import KernelSpec, ModeQuad, kernel_weight
from .noise import CovarianceOp, NoiseIncrement
from .torus import SpectralField, _embed, _extract, _pad_size


@dataclass(frozen=True)
class ModelParams:
    """Nonlinearity strength lambda, noise strength kappa, Sobolev
    exponent alpha used for residuals and error norms."""

    lam: float
    kappa: float
    alpha: float = 2.0

    def __post_init__(self):
        if not np.isfinite(self.lam) or not np.isfinite(self.kappa):
            raise ValueError("lambda and kappa must be finite")
        if self.alpha <= 1:
            raise ValueError(f"alpha must be > 1, got {self.alpha}")


def map_F(
    params: ModelParams,
    spec: KernelSpec,
    t: float,
    c: float,
    p: int,
    v: SpectralField,
) -> SpectralField:
    """Deterministic resonance map, direct O(K^3) sum over quads."""
    if t <= 0:
        raise ValueError(f"step t must be > 0, got {t}")
    K = v.grid.K
    cf = v.coefficients
    out = np.zeros(2 * K + 1, dtype=np.complex128)
    if params.lam == 0.0:
        return SpectralField(out, v.grid)
    for i1 in range(2 * K + 1):
        k1 = i1 - K
        for i2 in range(2 * K + 1):
            k2 = i2 - K
            for i3 in range(2 * K + 1):
                k3 = i3 - K
                k = -k1 + k2 + k3
                if not -K <= k <= K:
                    continue
                w = kernel_weight(spec, ModeQuad(k, k1, k2, k3), t, c, p)
                out[k + K] += w * np.conj(cf[i1]) * cf[i2] * cf[i3]
    return SpectralField(-1j * params.lam * out, v.grid)


def map_P_frozen(
    params: ModelParams,
    phi: CovarianceOp,
    spec: KernelSpec,
    t: float,
    c: float,
    p: int,
    v: SpectralField,
    X: NoiseIncrement,
) -> SpectralField:
    """Frozen-noise stochastic map: coefficient k is
    -i kappa sum_{k = k1 + k2} v_{k1} Phi_{k2} X_{k2}.

    Only the full-Taylor case p=0 has a frozen form; X is the normalized
    increment over the stage interval.
    """
    if t <= 0:
        raise ValueError(f"step t must be > 0, got {t}")
    if p != 0:
        raise ValueError("the frozen stochastic map is defined for p=0 only")
    K = v.grid.K
    if phi.K != K:
        raise ValueError(f"covariance has K={phi.K}, field has K={K}")
    if len(X.w) != 2 * K + 1:
        raise ValueError("noise increment has wrong number of modes")
    if abs(X.step - c * t) > 1e-9 * t:
        raise ValueError(
            f"noise increment was built for step {X.step}, stage interval is {c * t}"
        )
    full = np.convolve(v.coefficients, phi.phi * X.w)  # index i <-> mode i-2K
    return SpectralField(-1j * params.kappa * full[K : 3 * K + 1], v.grid)


def _padded_physical(coeffs: np.ndarray, K: int, n: int) -> np.ndarray:
    return np.fft.ifft(_embed(coeffs, K, n)) * n


def map_F_midpoint_physical(params: ModelParams, t: float, v: SpectralField) -> SpectralField:
    """t * map_F for the symplectic kernel (d=1, gamma=0, p=0, c=1),
    via multiplier operators and padded transforms.

    Splitting the kernel weight t*[phi1(-2itkk1) + phi1(2itk2k3) - 1]
    per quad and mapping 1/(ik) factors to the inverse derivative gives

      t*F(v) = -i lam [ S_A + S_B - t * C ]

    with C the cubic convolution, S_A the dominant-phase term (plus its
    kk1=0 corrections) and S_B the lower-phase term (plus its k2k3=0
    corrections); all products are formed without intermediate
    truncation on a 4K-padded grid.
    """
    if t <= 0:
        raise ValueError(f"step t must be > 0, got {t}")
    grid = v.grid
    K = grid.K
    if params.lam == 0.0:
        return SpectralField(np.zeros(2 * K + 1, dtype=np.complex128), grid)
    n = _pad_size(K)
    kpad = np.fft.fftfreq(n, d=1.0 / n)  # mode numbers of the padded grid
    e_minus = np.exp(-1j * t * kpad**2)  # e^{it Laplacian}
    e_plus = np.exp(1j * t * kpad**2)
    inv_d = np.zeros(n, dtype=np.complex128)
    nz = kpad != 0
    inv_d[nz] = 1.0 / (1j * kpad[nz])

    cv = _embed(v.coefficients, K, n)  # spectrum on padded grid
    u = np.fft.ifft(cv) * n  # physical samples
    v0 = v.coefficients[K]  # zero mode

    def phys(spec):
        return np.fft.ifft(spec) * n

    def spect(samples):
        return np.fft.fft(samples) / n

    u_sq_spec = spect(u * u)  # (v*v)_m, untruncated
    inv_u = phys(inv_d * cv)  # inverse derivative of v
    einv_u = phys(e_minus * inv_d * cv)  # E(t) d^-1 v

    # S_A, kk1 != 0: (i/2) d^-1 { E(-t)[ conj(E(t)d^-1 v) * E(t)(v^2) ]
    #                             - conj(d^-1 v) * v^2 }
    piece1 = spect(np.conj(einv_u) * phys(e_minus * u_sq_spec))
    piece2 = spect(np.conj(inv_u) * u * u)
    s_a = 0.5j * inv_d * (e_plus * piece1 - piece2)

    # S_A, kk1 = 0: t conj(v0) (v*v)_k for k != 0;
    # at k = 0 the k1 sum runs over all retained modes
    s_a0 = t * np.conj(v0) * u_sq_spec
    ks = np.arange(-K, K + 1)
    s_a0[0] = t * np.sum(np.conj(v.coefficients) * u_sq_spec[ks % n])

    # S_B: convolve conj(v) with G, where
    # G = (i/2)[ E(-t)((E(t)d^-1 v)^2) - (d^-1 v)^2 ]  (k2 k3 != 0 pairs)
    #   + t (2 v0 v - delta_0 v0^2)                    (k2 k3 = 0 pairs)
    g_spec = 0.5j * (e_plus * spect(einv_u * einv_u) - spect(inv_u * inv_u))
    g_spec += t * 2.0 * v0 * cv
    g_spec[0] -= t * v0 * v0
    s_b = spect(np.conj(u) * phys(g_spec))

    # -t * cubic convolution
    cubic = spect(np.conj(u) * u * u)

    total = -1j * params.lam * (s_a + s_a0 + s_b - t * cubic)
    return SpectralField(_extract(total, K), grid)


def orthogonality_defect(u: SpectralField, g: SpectralField) -> float:
    """Re sum_k conj(u_k) g_k; zero for both discretisation maps."""
    if u.grid != g.grid:
        raise ValueError("fields live on different grids")
    return float(np.real(np.vdot(u.coefficients, g.coefficients)))
