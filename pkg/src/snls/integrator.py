"""Stochastic resonance-based Runge-Kutta stepping.

A Tableau holds the stage set, the coefficient matrices for the
deterministic and stochastic maps, the nodes and the kernel spec.  Each
step freezes the noise increment of the interval, solves the coupled
implicit stage system by simultaneous fixed-point iteration and forms
the update through the free propagator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagnostics import sobolev_norm
from .kernels import KernelSpec, default_kernel_spec
from .maps import ModelParams, map_F, map_F_midpoint_physical, map_P_frozen
from .noise import BrownianPath, CovarianceOp, NoiseIncrement, increment
from .torus import SpectralField, free_propagator


@dataclass(frozen=True)
class Tableau:
    """Stage labels alpha=(p,q,r), nodes c_q, coefficient matrices
    a0/a1, output weights b0/b1, and the kernel spec."""

    stages: tuple
    c: tuple
    a0: np.ndarray
    a1: np.ndarray
    b0: np.ndarray
    b1: np.ndarray
    kernel: KernelSpec

    def __post_init__(self):
        n = len(self.stages)
        if n == 0:
            raise ValueError("tableau needs at least one stage")
        for name in ("a0", "a1"):
            m = np.asarray(getattr(self, name), dtype=float)
            if m.shape != (n, n) or not np.all(np.isfinite(m)):
                raise ValueError(f"{name} must be a finite {n}x{n} matrix")
            object.__setattr__(self, name, m)
        for name in ("b0", "b1"):
            b = np.asarray(getattr(self, name), dtype=float)
            if b.shape != (n,) or not np.all(np.isfinite(b)):
                raise ValueError(f"{name} must be a finite length-{n} vector")
            object.__setattr__(self, name, b)
        for p, q, r in self.stages:
            if not 0 <= q < len(self.c):
                raise ValueError(f"stage node index {q} has no node value")
            if p < 0:
                raise ValueError("stage power p must be >= 0")

    @property
    def n_stages(self) -> int:
        return len(self.stages)


@dataclass(frozen=True)
class TableauViolation:
    i: int
    j: int
    alpha: tuple
    alpha_tilde: tuple
    defect: float


def validate_tableau(tab: Tableau, tol: float = 1e-14) -> list[TableauViolation]:
    """Check b_a^(i) b_at^(j) - b_a^(i) a^(j)_{a,at} - b_at^(j) a^(i)_{at,a} = 0
    for all stage pairs and i,j in {0,1}."""
    a = (tab.a0, tab.a1)
    b = (tab.b0, tab.b1)
    violations = []
    n = tab.n_stages
    for i in range(2):
        for j in range(2):
            for s in range(n):
                for st in range(n):
                    defect = b[i][s] * b[j][st] - b[i][s] * a[j][s, st] - b[j][st] * a[i][st, s]
                    if abs(defect) > tol:
                        violations.append(
                            TableauViolation(i, j, tab.stages[s], tab.stages[st], defect)
                        )
    return violations


def midpoint_tableau() -> Tableau:
    """Single stage (0,0,0), b=1, a=1/2, node value 1, symplectic kernel."""
    return Tableau(
        stages=((0, 0, 0),),
        c=(1.0,),
        a0=np.array([[0.5]]),
        a1=np.array([[0.5]]),
        b0=np.array([1.0]),
        b1=np.array([1.0]),
        kernel=default_kernel_spec(1),
    )


def explicit_tableau() -> Tableau:
    """b=1, a=0: violates the coefficient condition; negative control."""
    return Tableau(
        stages=((0, 0, 0),),
        c=(1.0,),
        a0=np.array([[0.0]]),
        a1=np.array([[0.0]]),
        b0=np.array([1.0]),
        b1=np.array([1.0]),
        kernel=default_kernel_spec(1),
    )


TABLEAUX = {"midpoint": midpoint_tableau, "explicit": explicit_tableau}


@dataclass(frozen=True)
class FixedPointConfig:
    tol: float = 1e-12
    max_iter: int = 100
    divergence_factor: float = 10.0

    def __post_init__(self):
        if self.tol <= 0 or self.max_iter < 1 or self.divergence_factor <= 1:
            raise ValueError("invalid fixed-point configuration")


@dataclass
class StepOutcome:
    state: SpectralField
    iterations: int
    residual: float
    converged: bool


class StepRejectedError(RuntimeError):
    """Fixed-point iteration failed; the step bound is violated."""

    def __init__(self, message, residual, iterations, step_index=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
        self.step_index = step_index


def fixed_point_solve(iteration_map, guess, fp: FixedPointConfig, norm):
    """Iterate x <- map(x) until norm(map(x) - x) <= tol.

    Returns (solution, iterations, residual, residual_history).  Aborts
    when the residual grows past divergence_factor times its running
    minimum, or when max_iter is exhausted.
    """
    x = guess
    history = []
    best = np.inf
    for it in range(1, fp.max_iter + 1):
        x_new = iteration_map(x)
        res = norm(x_new, x)
        history.append(res)
        x = x_new
        if res <= fp.tol:
            return x, it, res, history
        best = min(best, res)
        if res > fp.divergence_factor * best:
            raise StepRejectedError(
                f"fixed-point iteration diverging after {it} iterations "
                f"(residual {res:.3e})",
                residual=res,
                iterations=it,
            )
    raise StepRejectedError(
        f"fixed-point iteration did not converge in {fp.max_iter} iterations "
        f"(residual {history[-1]:.3e})",
        residual=history[-1],
        iterations=fp.max_iter,
    )


def _stage_uses_fast_path(tab: Tableau, stage_idx: int) -> bool:
    p, q, _ = tab.stages[stage_idx]
    return (
        tab.kernel.d == 1
        and tab.kernel.gamma == (0.0,)
        and p == 0
        and tab.c[q] == 1.0
    )


def _stage_maps(tab, params, phi, t, X, stages_fields):
    """Evaluate K_alpha and L_alpha for every stage field."""
    Ks, Ls = [], []
    for idx, U in enumerate(stages_fields):
        p, q, _ = tab.stages[idx]
        c = tab.c[q]
        if _stage_uses_fast_path(tab, idx):
            Ks.append(map_F_midpoint_physical(params, t, U) * (1.0 / t))
        else:
            Ks.append(map_F(params, tab.kernel, t, c, p, U))
        Ls.append(map_P_frozen(params, phi, tab.kernel, t, c, p, U, X))
    return Ks, Ls


def step_with_increment(
    u_n: SpectralField,
    tab: Tableau,
    params: ModelParams,
    phi: CovarianceOp,
    X: NoiseIncrement,
    t: float,
    fp: FixedPointConfig,
) -> StepOutcome:
    """One step with a frozen noise increment (deterministic given X)."""
    if t <= 0:
        raise ValueError(f"step t must be > 0, got {t}")
    n = tab.n_stages
    sqrt_t = np.sqrt(t)

    def iteration(stages_fields):
        Ks, Ls = _stage_maps(tab, params, phi, t, X, stages_fields)
        out = []
        for s in range(n):
            U = u_n.copy()
            for st in range(n):
                if tab.a0[s, st] != 0.0:
                    U = U + (t * tab.a0[s, st]) * Ks[st]
                if tab.a1[s, st] != 0.0:
                    U = U + (sqrt_t * tab.a1[s, st]) * Ls[st]
            out.append(U)
        return out

    def norm(new, old):
        return max(sobolev_norm(a - b, params.alpha) for a, b in zip(new, old))

    guess = [u_n.copy() for _ in range(n)]
    stages, iters, residual, _ = fixed_point_solve(iteration, guess, fp, norm)

    Ks, Ls = _stage_maps(tab, params, phi, t, X, stages)
    u = u_n.copy()
    for s in range(n):
        if tab.b0[s] != 0.0:
            u = u + (t * tab.b0[s]) * Ks[s]
        if tab.b1[s] != 0.0:
            u = u + (sqrt_t * tab.b1[s]) * Ls[s]
    return StepOutcome(
        state=free_propagator(u, t),
        iterations=iters,
        residual=residual,
        converged=True,
    )


def step(
    u_n: SpectralField,
    tab: Tableau,
    params: ModelParams,
    phi: CovarianceOp,
    path: BrownianPath,
    t_n: float,
    t: float,
    fp: FixedPointConfig,
) -> StepOutcome:
    """One step of the scheme; the noise increment is drawn from the
    path over [t_n, t_n + t] and frozen for the whole solve."""
    X = increment(path, t_n, t_n + t)
    return step_with_increment(u_n, tab, params, phi, X, t, fp)


def step_bound(C_R: float, C_PhiW: float) -> float:
    """Largest t with C_R t + C_PhiW sqrt(t) < 1 (contraction condition).

    Returns the unique positive root of C_R t + C_PhiW sqrt(t) = 1.
    """
    if C_R <= 0:
        raise ValueError(f"C_R must be > 0, got {C_R}")
    if C_PhiW < 0:
        raise ValueError(f"C_PhiW must be >= 0, got {C_PhiW}")
    # sqrt(t) = 2 / (C_PhiW + sqrt(C_PhiW^2 + 4 C_R)): the rationalized
    # quadratic root, free of cancellation for all positive constants
    root = 2.0 / (C_PhiW + np.sqrt(C_PhiW**2 + 4.0 * C_R))
    return float(root**2)


@dataclass
class RunRecord:
    """Per-step diagnostics of a trajectory, with seed provenance."""

    seed: int
    config_lines: list
    rows: list = field(default_factory=list)
    final_state: SpectralField | None = None

    COLUMNS = ("step", "time", "mass", "energy_h0", "sobolev_alpha",
               "fp_iters", "fp_residual", "rejected")

    def add_row(self, step_idx, time, m, e, s, iters, residual, rejected):
        self.rows.append((step_idx, time, m, e, s, iters, residual, rejected))

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            for line in self.config_lines:
                fh.write(line + "\n")
            fh.write(",".join(self.COLUMNS) + "\n")
            for r in self.rows:
                fh.write(
                    f"{r[0]},{r[1]:.17g},{r[2]:.17g},{r[3]:.17g},{r[4]:.17g},"
                    f"{r[5]},{r[6]:.17g},{r[7]}\n"
                )

    def column(self, name) -> np.ndarray:
        idx = self.COLUMNS.index(name)
        return np.array([r[idx] for r in self.rows])


def simulate(config, u0: SpectralField | None = None) -> RunRecord:
    """Run config.n_steps steps from the configured initial data,
    recording mass, H0, the H^alpha norm and solver diagnostics."""
    from .config import initial_field
    from .diagnostics import energy_h0, mass
    from .noise import default_phi, sample_path

    if u0 is None:
        u0 = initial_field(config.initial_data, config.K, seed=config.seed)
    params = ModelParams(lam=config.lam, kappa=config.kappa, alpha=config.alpha)
    phi = default_phi(config.K)
    tab = TABLEAUX[config.tableau]()
    fp = FixedPointConfig(tol=config.fp_tol, max_iter=config.fp_max_iter)
    record = RunRecord(seed=config.seed, config_lines=config.echo_lines())

    u = u0.copy()
    record.add_row(0, 0.0, mass(u), energy_h0(u, config.lam),
                   sobolev_norm(u, config.alpha), 0, 0.0, 0)
    if config.n_steps == 0:
        record.final_state = u
        return record

    path = sample_path(config.seed, config.n_steps * config.t, 0,
                       config.K, n_base=config.n_steps)
    for n in range(config.n_steps):
        try:
            outcome = step(u, tab, params, phi, path, n * config.t, config.t, fp)
        except StepRejectedError as exc:
            exc.step_index = n
            raise
        u = outcome.state
        record.add_row(n + 1, (n + 1) * config.t, mass(u),
                       energy_h0(u, config.lam),
                       sobolev_norm(u, config.alpha),
                       outcome.iterations, outcome.residual, 0)
    record.final_state = u
    return record
