"""Covariance operator, refinable per-mode Wiener paths, and the
Stratonovich integral identities used by the schemes.

Paths are stored as per-mode increments on a dyadic grid and refined by
Brownian-bridge splitting.  Two implementation choices matter:

* All increments are quantized to integer multiples of 2^-40.  Additions
  of such values are exact in double precision at the magnitudes that
  occur here, so coarse increments equal the sum of their refined
  children bit for bit, and the Stratonovich product identities hold to
  rounding on every discrete path.

* The mode-(-k) path is identical to the mode-k path (W_{-k} = W_k).
  Together with Phi_k = Phi_{-k} this makes the complex noise field
  sum_k Phi_k W_k e^{ikx} real-valued, and it is what makes the
  stochastic discretisation map exactly mass-orthogonal pathwise.

Randomness is counter-based (Philox keyed by seed, mode and refinement
level), so refining a path never perturbs previously drawn increments
and paths are reproducible across runs and worker counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# quantization grain for increments; keeps dyadic sums exact in doubles
_GRAIN = 2.0**-40


def _quantize(x: np.ndarray) -> np.ndarray:
    return np.round(x / _GRAIN) * _GRAIN


def _normals(seed: int, mode: int, level: int, n: int) -> np.ndarray:
    """n standard normals from a stream keyed by (seed, mode, level)."""
    key = np.array([np.uint64(seed), np.uint64(((mode + (1 << 20)) << 24) + level)])
    return np.random.Generator(np.random.Philox(key=key)).standard_normal(n)


@dataclass(frozen=True)
class CovarianceOp:
    """Real, even Fourier multipliers Phi_k, k = -K..K in ascending order."""

    phi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        if phi.ndim != 1 or len(phi) % 2 != 1:
            raise ValueError("phi must hold an odd number of modes -K..K")
        if not np.allclose(phi, phi[::-1], rtol=0, atol=0):
            raise ValueError("covariance coefficients must satisfy Phi_k = Phi_{-k}")
        object.__setattr__(self, "phi", phi)

    @property
    def K(self) -> int:
        return (len(self.phi) - 1) // 2


def default_phi(K: int) -> CovarianceOp:
    """Phi_0 = 0, Phi_k = 1/k^2 otherwise."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    k = np.arange(-K, K + 1).astype(float)
    phi = np.where(k == 0, 0.0, 1.0 / np.maximum(k**2, 1.0))
    return CovarianceOp(phi)


@dataclass(frozen=True)
class BrownianPath:
    """Per-mode real Wiener increments on a grid of n_base * 2^level
    cells over [0, horizon].

    increments has shape (2K+1, n_cells); row i holds mode k = i - K.
    Rows for -k and k are identical by construction.  n_base > 1 lets a
    path align with a non-dyadic number of simulation steps while each
    base cell stays dyadically refinable.
    """

    seed: int
    K: int
    level: int
    horizon: float
    increments: np.ndarray
    n_base: int = 1

    @property
    def n_cells(self) -> int:
        return self.n_base * 2**self.level

    @property
    def dt(self) -> float:
        return self.horizon / self.n_cells

    def mode_row(self, k: int) -> np.ndarray:
        if not -self.K <= k <= self.K:
            raise ValueError(f"mode {k} outside -{self.K}..{self.K}")
        return self.increments[k + self.K]

    def values(self, k: int) -> np.ndarray:
        """W_k at the grid points 0, dt, ..., horizon (length n_cells+1)."""
        out = np.zeros(self.n_cells + 1)
        np.cumsum(self.mode_row(k), out=out[1:])
        return out

    def cell_index(self, s: float) -> int:
        """Index of the grid point at time s; s must sit on the grid."""
        j = s / self.dt
        j_round = int(round(j))
        if not 0 <= j_round <= self.n_cells or abs(j - j_round) > 1e-9:
            raise ValueError(f"time {s} is not on the level-{self.level} grid")
        return j_round


def sample_path(seed: int, horizon: float, level: int, K: int, n_base: int = 1) -> BrownianPath:
    """Level-`level` path, deterministic in (seed, horizon, K, n_base)."""
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    if horizon <= 0:
        raise ValueError(f"horizon must be > 0, got {horizon}")
    if n_base < 1:
        raise ValueError(f"n_base must be >= 1, got {n_base}")
    inc = np.empty((2 * K + 1, n_base * 2**level))
    for k in range(0, K + 1):
        row = _quantize(np.sqrt(horizon / n_base) * _normals(seed, k, 0, n_base))
        for lev in range(1, level + 1):
            row = _split(row, seed, k, lev, horizon)
        inc[K + k] = row
        inc[K - k] = row
    return BrownianPath(
        seed=seed, K=K, level=level, horizon=horizon, increments=inc, n_base=n_base
    )


def _split(row: np.ndarray, seed: int, mode: int, level: int, horizon: float) -> np.ndarray:
    """Bridge-split level-(level-1) increments into level-`level` ones."""
    n = len(row)
    # midpoint displacement variance is a quarter of the parent cell length
    xi = _quantize(np.sqrt(horizon / n) / 2.0 * _normals(seed, mode, level, n))
    first = _quantize(row / 2.0) + xi
    out = np.empty(2 * n)
    out[0::2] = first
    out[1::2] = row - first  # exact: both are multiples of the grain
    return out


def refine(path: BrownianPath) -> BrownianPath:
    """Bridge refinement; coarse increments are exact sums of children."""
    inc = np.empty((2 * path.K + 1, 2 * path.n_cells))
    for k in range(0, path.K + 1):
        row = _split(path.increments[path.K + k], path.seed, k, path.level + 1, path.horizon)
        inc[path.K + k] = row
        inc[path.K - k] = row
    return BrownianPath(
        seed=path.seed, K=path.K, level=path.level + 1,
        horizon=path.horizon, increments=inc, n_base=path.n_base,
    )


def coarsen(path: BrownianPath) -> BrownianPath:
    """Pairwise-sum inverse of refine (bit-exact)."""
    if path.level == 0:
        raise ValueError("cannot coarsen a level-0 path")
    inc = path.increments[:, 0::2] + path.increments[:, 1::2]
    return BrownianPath(
        seed=path.seed, K=path.K, level=path.level - 1,
        horizon=path.horizon, increments=inc, n_base=path.n_base,
    )


@dataclass(frozen=True)
class NoiseIncrement:
    """Normalized increments W_{n,k} = (W_k(t1) - W_k(t0)) / sqrt(t1-t0)."""

    w: np.ndarray
    step: float


def increment(path: BrownianPath, t0: float, t1: float) -> NoiseIncrement:
    j0 = path.cell_index(t0)
    j1 = path.cell_index(t1)
    if j1 <= j0:
        raise ValueError(f"need t1 > t0 on the grid, got [{t0}, {t1}]")
    step = (j1 - j0) * path.dt
    w = path.increments[:, j0:j1].sum(axis=1) / np.sqrt(step)
    return NoiseIncrement(w=w, step=step)


def strat_integral(path: BrownianPath, k2: int, k3: int, t: float) -> float:
    """Trapezoidal (Stratonovich) sum int_0^t W_{k2}(s) o dW_{k3}(s)."""
    j = path.cell_index(t)
    w2 = path.values(k2)[: j + 1]
    dw3 = path.mode_row(k3)[:j]
    return float(np.sum(0.5 * (w2[:-1] + w2[1:]) * dw3))


def strat_pair_integrals(path: BrownianPath, k2: int, k3: int, t: float):
    """The pair (int W2 o dW3, int W3 o dW2); their sum telescopes to
    W2(t) W3(t) exactly up to rounding."""
    return (
        strat_integral(path, k2, k3, t),
        strat_integral(path, k3, k2, t),
    )


def symmetrized_midpoint_double(path: BrownianPath, k2: int, k3: int, t: float) -> float:
    """int_0^t (W2(s) - W2(t)/2) o dW3 + int_0^t (W3(s) - W3(t)/2) o dW2.

    Telescopes to zero on every discrete path; this is the cancellation
    that lets the schemes drop the double stochastic integral.
    """
    i23, i32 = strat_pair_integrals(path, k2, k3, t)
    j = path.cell_index(t)
    w2_t = path.values(k2)[j]
    w3_t = path.values(k3)[j]
    return (i23 - 0.5 * w2_t * w3_t) + (i32 - 0.5 * w3_t * w2_t)


def write_manifest(path: BrownianPath, file_path, endpoints: bool = True) -> None:
    """Reproducibility record: `seed,K,level,horizon` plus optional
    per-mode endpoint values."""
    with open(file_path, "w") as fh:
        fh.write(f"{path.seed},{path.K},{path.level},{path.horizon:.17g}\n")
        if endpoints:
            for k in range(-path.K, path.K + 1):
                fh.write(f"{k},{path.values(k)[-1]:.17g}\n")
