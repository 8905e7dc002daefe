"""Fourier representation of fields on the torus [0, 2pi).

Fields are stored as the 2K+1 complex coefficients c_k, k = -K..K, in
ascending-k order.  All inner products and norms use the plain Fourier
convention sum_k |c_k|^2 (the 2*pi factor of the physical integral is
dropped uniformly).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.fft import next_fast_len


@dataclass(frozen=True)
class TorusGrid:
    """Mode cutoff K (modes -K..K) and physical sample count N."""

    K: int
    N: int

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"mode cutoff K must be >= 1, got {self.K}")
        if self.N < 2 * self.K + 2:
            raise ValueError(f"N={self.N} too small for K={self.K}")

    @property
    def n_modes(self) -> int:
        return 2 * self.K + 1

    def modes(self) -> np.ndarray:
        """Mode numbers -K..K in storage order."""
        return np.arange(-self.K, self.K + 1)

    def x(self) -> np.ndarray:
        """Physical sample points x_j = 2 pi j / N."""
        return 2.0 * np.pi * np.arange(self.N) / self.N


def make_grid(K: int) -> TorusGrid:
    """Grid with N >= 3(2K+1)/2 rounded up to a transform-friendly size."""
    if K < 1:
        raise ValueError(f"mode cutoff K must be >= 1, got {K}")
    n_min = max(-(-3 * (2 * K + 1) // 2), 2 * K + 2)
    return TorusGrid(K=K, N=next_fast_len(n_min))


@dataclass
class SpectralField:
    """Complex Fourier coefficients c_k, k = -K..K, on a TorusGrid."""

    coefficients: np.ndarray
    grid: TorusGrid

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128)
        if c.shape != (self.grid.n_modes,):
            raise ValueError(
                f"expected {self.grid.n_modes} coefficients, got shape {c.shape}"
            )
        if not np.all(np.isfinite(c.view(np.float64))):
            raise ValueError("non-finite coefficient")
        self.coefficients = c.copy()

    def copy(self) -> "SpectralField":
        return SpectralField(self.coefficients, self.grid)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.coefficients + other.coefficients, self.grid)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.coefficients - other.coefficients, self.grid)

    def __mul__(self, scalar) -> "SpectralField":
        return SpectralField(self.coefficients * scalar, self.grid)

    __rmul__ = __mul__


def _check_same_grid(a: SpectralField, b: SpectralField) -> None:
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


def zero_field(grid: TorusGrid) -> SpectralField:
    return SpectralField(np.zeros(grid.n_modes, dtype=np.complex128), grid)


def _embed(coeffs: np.ndarray, K: int, n: int) -> np.ndarray:
    """Place modes -K..K into an n-length FFT spectrum (n >= 2K+1)."""
    spec = np.zeros(n, dtype=np.complex128)
    ks = np.arange(-K, K + 1)
    spec[ks % n] = coeffs
    return spec

def _extract(spec: np.ndarray, K: int) -> np.ndarray:
    ks = np.arange(-K, K + 1)
    return spec[ks % len(spec)]


def to_physical(f: SpectralField) -> np.ndarray:
    """Samples u(x_j) = sum_k c_k e^{i k x_j} on the grid's N points."""
    g = f.grid
    return np.fft.ifft(_embed(f.coefficients, g.K, g.N)) * g.N


def from_physical(samples: np.ndarray, grid: TorusGrid) -> SpectralField:
    """Inverse of to_physical for fields band-limited to -K..K."""
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.shape != (grid.N,):
        raise ValueError(f"expected {grid.N} samples, got shape {samples.shape}")
    spec = np.fft.fft(samples) / grid.N
    return SpectralField(_extract(spec, grid.K), grid)


def free_propagator(f: SpectralField, t: float) -> SpectralField:
    """e^{it Laplacian}: multiply coefficient k by e^{-i t k^2}."""
    if not np.isfinite(t):
        raise ValueError(f"propagation time must be finite, got {t}")
    k = f.grid.modes()
    return SpectralField(f.coefficients * np.exp(-1j * t * k.astype(float) ** 2), f.grid)


def derivative(f: SpectralField) -> SpectralField:
    """Spectral d/dx: multiply coefficient k by ik."""
    k = f.grid.modes()
    return SpectralField(f.coefficients * (1j * k), f.grid)


def inverse_derivative(f: SpectralField) -> SpectralField:
    """Antiderivative symbol 1/(ik); the zero mode is set to 0."""
    k = f.grid.modes().astype(float)
    mult = np.zeros_like(f.coefficients)
    nz = k != 0
    mult[nz] = 1.0 / (1j * k[nz])
    return SpectralField(f.coefficients * mult, f.grid)


def _pad_size(K: int) -> int:
    # cubic products reach mode 3K; 4K+1 points keep aliases out of -K..K
    return next_fast_len(4 * K + 1)


def cubic_convolution(f: SpectralField) -> SpectralField:
    """Spectrum of |u|^2 u on the truncated mode set, via padded transforms.

    Output coefficient k is sum over k = -k1+k2+k3 (all indices in -K..K)
    of conj(c)_{k1} c_{k2} c_{k3}.
    """
    K = f.grid.K
    n = _pad_size(K)
    u = np.fft.ifft(_embed(f.coefficients, K, n)) * n
    spec = np.fft.fft(np.conj(u) * u * u) / n
    return SpectralField(_extract(spec, K), f.grid)


def cubic_convolution_direct(f: SpectralField) -> SpectralField:
    """Direct O(K^3) triple sum; the dealiasing ground truth."""
    K = f.grid.K
    c = f.coefficients
    out = np.zeros(2 * K + 1, dtype=np.complex128)
    for i1 in range(2 * K + 1):
        k1 = i1 - K
        for i2 in range(2 * K + 1):
            k2 = i2 - K
            for i3 in range(2 * K + 1):
                k = -k1 + k2 + (i3 - K)
                if -K <= k <= K:
                    out[k + K] += np.conj(c[i1]) * c[i2] * c[i3]
    return SpectralField(out, f.grid)


def write_snapshot(f: SpectralField, path) -> None:
    """Field snapshot file: header `k_min,k_max`, then `k,re,im` per mode."""
    K = f.grid.K
    with open(path, "w") as fh:
        fh.write(f"{-K},{K}\n")
        for k, c in zip(f.grid.modes(), f.coefficients):
            fh.write(f"{k},{c.real:.17g},{c.imag:.17g}\n")


def read_snapshot(path, grid: TorusGrid | None = None) -> SpectralField:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        k_min, k_max = int(header[0]), int(header[1])
        if k_min != -k_max:
            raise ValueError(f"asymmetric mode range {k_min}..{k_max}")
        K = k_max
        if grid is None:
            grid = make_grid(K)
        elif grid.K != K:
            raise ValueError(f"snapshot has K={K}, grid has K={grid.K}")
        coeffs = np.zeros(2 * K + 1, dtype=np.complex128)
        for i, line in enumerate(fh):
            k_s, re_s, im_s = line.strip().split(",")
            k = int(k_s)
            if k != i - K:
                raise ValueError("snapshot modes out of order")
            coeffs[i] = float(re_s) + 1j * float(im_s)
    return SpectralField(coeffs, grid)
