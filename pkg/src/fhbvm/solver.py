"""FHBVM(k, s) time stepping for multi-order Caputo systems.

Each step expands the vector field of block i in the first s orthonormal
polynomials of its weight; the Fourier coefficients are discretized on the
shared abscissae and solved for by fixed-point, blended (one order), or
simplified-Newton iteration.  The memory term carries the whole history
through the tail kernels J_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gamma, log10

import numpy as np

from . import dense_linalg
from .errors import (
    FhbvmError,
    InvalidParameterError,
    SingularMatrixError,
    StepFailureError,
)
from .mesh import Mesh
from .mop_quadrature import QuadratureSet, build_quadrature
from .ortho_poly import frac_int_basis_many, tail_kernels_many
from .problems import FdeProblem, taylor_term

__all__ = [
    "SolverConfig",
    "StepHistory",
    "StepDiagnostics",
    "Trajectory",
    "memory_term",
    "stage_values",
    "residual",
    "fixed_point_solve",
    "blended_solve",
    "newton_solve",
    "advance",
    "solve",
    "dense_eval",
    "mescd",
]

MODES = ("auto", "fp", "newton", "blended")


@dataclass(frozen=True)
class SolverConfig:
    """Tunables of one solve; the defaults reproduce the method's standard setup."""

    s: int = 22
    tol_abs: float = 1e-15
    tol_rel: float = 1e-14
    max_iter: int = 100
    fp_max: int = 12
    rho11: float | None = None
    mode: str = "auto"

    def __post_init__(self):
        if self.s < 1:
            raise InvalidParameterError("expansion degree count s must be >= 1")
        if self.tol_abs <= 0 or self.tol_rel <= 0:
            raise InvalidParameterError("tolerances must be positive")
        if self.mode not in MODES:
            raise InvalidParameterError(f"mode must be one of {MODES}")


@dataclass(frozen=True)
class StepDiagnostics:
    step: int
    h: float
    kind: str
    iterations: int
    residual_norm: float


class StepHistory:
    """Per-step record: start point, step size, and the nu blocks of Fourier
    coefficients gamma_ij(sigma^mu), each stored as an (s, m_i) array."""

    def __init__(self, alphas, block_sizes, s: int, t0: float = 0.0, capacity: int = 16):
        self.alphas = np.asarray(alphas, dtype=float)
        self.block_sizes = tuple(block_sizes)
        self.s = int(s)
        self.points = [float(t0)]
        self.steps: list[float] = []
        capacity = max(capacity, 1)
        self._gam = [np.empty((capacity, s, mi)) for mi in self.block_sizes]

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    def append(self, h: float, gammas) -> None:
        n = self.n_steps
        if n == self._gam[0].shape[0]:
            for i, arr in enumerate(self._gam):
                grown = np.empty((2 * n, self.s, arr.shape[2]))
                grown[:n] = arr[:n]
                self._gam[i] = grown
        for i, g in enumerate(gammas):
            if not np.all(np.isfinite(g)):
                raise FhbvmError("non-finite Fourier coefficients recorded")
            self._gam[i][n] = g
        self.steps.append(float(h))
        self.points.append(self.points[-1] + float(h))

    def gamma(self, i: int) -> np.ndarray:
        """(n_steps, s, m_i) view of block i's coefficients."""
        return self._gam[i][: self.n_steps]

    def gamma_step(self, mu: int) -> list[np.ndarray]:
        """Coefficient blocks of step mu (1-based)."""
        return [self._gam[i][mu - 1].copy() for i in range(len(self.block_sizes))]


@dataclass
class Trajectory:
    """Mesh-point solution values plus everything dense output needs."""

    mesh: Mesh
    values: np.ndarray  # (n_completed + 1, m), user ordering
    history: StepHistory
    diagnostics: list[StepDiagnostics]
    problem: FdeProblem
    quad: QuadratureSet
    config: SolverConfig
    n_completed: int

    def iteration_totals(self) -> dict[str, int]:
        totals: dict[str, int] = {}
        for d in self.diagnostics:
            totals[d.kind] = totals.get(d.kind, 0) + d.iterations
        return totals


class _MemoryEngine:
    """Evaluates the memory term phi^n at the shared abscissae and c = 1.

    Kernel blocks for uniform step pairs depend only on the integer offset
    n - mu, so they are computed once and reused; graded-prefix contributions
    are re-evaluated each step (their scaled arguments change with n).
    """

    def __init__(self, problem: FdeProblem, quad: QuadratureSet, history: StepHistory,
                 graded_count: int, capacity: int = 16):
        self.problem = problem
        self.quad = quad
        self.history = history
        self.graded = int(graded_count)
        self.cext = np.concatenate([quad.abscissae, [1.0]])
        self._slices = problem.block_slices
        npts = quad.k + 1
        self._jflat = [np.empty((npts, 0)) for _ in range(problem.nu)]
        self._deltas = 0
        self._capacity = max(capacity, 1)

    def _ensure_deltas(self, want: int) -> None:
        if want <= self._deltas:
            return
        s = self.quad.s
        npts = self.cext.size
        if want * s > self._jflat[0].shape[1]:
            cap = max(2 * self._deltas, want, self._capacity)
            for i in range(self.problem.nu):
                grown = np.empty((npts, cap * s))
                grown[:, : self._deltas * s] = self._jflat[i][:, : self._deltas * s]
                self._jflat[i] = grown
        for delta in range(self._deltas + 1, want + 1):
            args = delta + self.cext
            for i in range(self.problem.nu):
                block = tail_kernels_many(self.quad.bases[i], args)
                self._jflat[i][:, (delta - 1) * s : delta * s] = block
        self._deltas = want

    def phi(self, n: int, h_n: float) -> tuple[np.ndarray, np.ndarray]:
        """phi^n at the k node arguments and at c = 1, shapes (k, m) and (m,)."""
        hist = self.history
        if hist.n_steps < n - 1:
            raise InvalidParameterError(f"history holds {hist.n_steps} steps, need {n - 1}")
        t_prev = hist.points[n - 1]
        pts = t_prev + self.cext * h_n
        m = self.problem.m
        out = np.empty((self.cext.size, m))
        for i, sl in enumerate(self._slices):
            out[:, sl] = taylor_term(self.problem, i, pts)
        g = min(self.graded, n - 1)
        if g >= 1:
            t0 = np.asarray(hist.points[:g])
            hs = np.asarray(hist.steps[:g])
            base = (t_prev - t0) / hs
            ratio = h_n / hs
            args = base[:, None] + ratio[:, None] * self.cext[None, :]
            if np.any(args < 1.0 - 1e-12):
                raise FhbvmError("memory-term kernel argument below 1")
            args = np.maximum(args, 1.0)
            for i, sl in enumerate(self._slices):
                kern = tail_kernels_many(self.quad.bases[i], args)  # (g, k+1, s)
                scale = hs ** self.quad.alphas[i]
                out[:, sl] += np.einsum(
                    "g,gxs,gsd->xd", scale, kern, hist.gamma(i)[:g]
                )
        ndelta = n - 1 - g
        if ndelta >= 1:
            self._ensure_deltas(ndelta)
            h = hist.steps[-1] if n - 1 == hist.n_steps else hist.steps[g]
            s = self.quad.s
            for i, sl in enumerate(self._slices):
                recent = hist.gamma(i)[g : n - 1][::-1]  # mu = n-1 down to g+1
                stacked = np.ascontiguousarray(recent).reshape(ndelta * s, -1)
                out[:, sl] += (h ** self.quad.alphas[i]) * (
                    self._jflat[i][:, : ndelta * s] @ stacked
                )
        return out[:-1], out[-1]

    def phi_at(self, n: int, cs: np.ndarray, h_n: float) -> np.ndarray:
        """Generic memory term at arbitrary local abscissae (dense output path)."""
        hist = self.history
        t_prev = hist.points[n - 1]
        cs = np.atleast_1d(np.asarray(cs, dtype=float))
        pts = t_prev + cs * h_n
        out = np.empty((cs.size, self.problem.m))
        for i, sl in enumerate(self._slices):
            out[:, sl] = taylor_term(self.problem, i, pts)
        if n - 1 >= 1:
            t0 = np.asarray(hist.points[: n - 1])
            hs = np.asarray(hist.steps[: n - 1])
            base = (t_prev - t0) / hs
            ratio = h_n / hs
            args = np.maximum(base[:, None] + ratio[:, None] * cs[None, :], 1.0)
            for i, sl in enumerate(self._slices):
                kern = tail_kernels_many(self.quad.bases[i], args)
                scale = hs ** self.quad.alphas[i]
                out[:, sl] += np.einsum(
                    "g,gxs,gsd->xd", scale, kern, hist.gamma(i)[: n - 1]
                )
        return out


def memory_term(problem: FdeProblem, quad: QuadratureSet, history: StepHistory,
                n: int, h_n: float) -> tuple[np.ndarray, np.ndarray]:
    """phi^n at the node arguments c_rho*h_n and at h_n, from a given history."""
    engine = _MemoryEngine(problem, quad, history, graded_count=history.n_steps)
    return engine.phi(n, h_n)


def stage_values(quad: QuadratureSet, problem: FdeProblem, phi_nodes: np.ndarray,
                 h_n: float, gammas) -> np.ndarray:
    """sigma^n at the abscissae: phi plus the local fractional-integral series."""
    out = np.empty_like(phi_nodes)
    for i, sl in enumerate(problem.block_slices):
        h_a = h_n ** quad.alphas[i]
        out[:, sl] = phi_nodes[:, sl] + h_a * (quad.fracint_at_nodes[i] @ gammas[i])
    return out


def _apply_quadrature(quad: QuadratureSet, problem: FdeProblem, t_nodes: np.ndarray,
                      stages: np.ndarray) -> list[np.ndarray]:
    """Discretized Fourier coefficients P_i^T Omega_i f_i at the given stages."""
    f_vals = problem.field_internal_batch(t_nodes, stages)
    if not np.all(np.isfinite(f_vals)):
        bad = int(np.nonzero(~np.all(np.isfinite(f_vals), axis=1))[0][0])
        raise FhbvmError(f"vector field returned a non-finite value at node {bad}")
    return [
        quad.basis_at_nodes[i].T @ (quad.weights[i][:, None] * f_vals[:, sl])
        for i, sl in enumerate(problem.block_slices)
    ]


def residual(quad: QuadratureSet, problem: FdeProblem, t_prev: float, h_n: float,
             phi_nodes: np.ndarray, gammas) -> list[np.ndarray]:
    """G(gamma) = gamma - P^T Omega f(stage values), blockwise."""
    t_nodes = t_prev + quad.abscissae * h_n
    stages = stage_values(quad, problem, phi_nodes, h_n, gammas)
    image = _apply_quadrature(quad, problem, t_nodes, stages)
    return [g - im for g, im in zip(gammas, image)]


def _norm(blocks) -> float:
    return max(float(np.max(np.abs(b))) if b.size else 0.0 for b in blocks)


class _StepContext:
    """Everything the per-step iterations share."""

    def __init__(self, quad, problem, config, t_prev, h_n, phi_nodes):
        self.quad = quad
        self.problem = problem
        self.config = config
        self.t_prev = t_prev
        self.h_n = h_n
        self.phi_nodes = phi_nodes
        self.t_nodes = t_prev + quad.abscissae * h_n
        self.h_alpha = h_n ** np.asarray(quad.alphas)

    def zeros(self) -> list[np.ndarray]:
        return [
            np.zeros((self.quad.s, mi)) for mi in self.problem.block_sizes
        ]

    def picard(self, gammas) -> list[np.ndarray]:
        stages = stage_values(self.quad, self.problem, self.phi_nodes, self.h_n, gammas)
        return _apply_quadrature(self.quad, self.problem, self.t_nodes, stages)

    def tolerance(self, gammas) -> float:
        return self.config.tol_abs + self.config.tol_rel * _norm(gammas)


def fixed_point_solve(ctx: _StepContext, itmax: int):
    """Direct iteration gamma <- P^T Omega f(stages(gamma)) from gamma = 0.

    Returns (gammas, iterations, residual_norm, converged); divergence is a
    signal, flagged when the increment fails to decrease three times in a row.
    """
    gammas = ctx.zeros()
    prev_inc = np.inf
    nondecreasing = 0
    for it in range(1, itmax + 1):
        new = ctx.picard(gammas)
        inc = _norm([a - b for a, b in zip(new, gammas)])
        gammas = new
        if not np.isfinite(inc):
            return gammas, it, inc, False
        if inc <= ctx.tolerance(gammas):
            return gammas, it, inc, True
        if inc >= prev_inc:
            nondecreasing += 1
            if nondecreasing >= 3:
                return gammas, it, inc, False
        else:
            nondecreasing = 0
        prev_inc = inc
    return gammas, itmax, prev_inc, False


class _NewtonAcceptance:
    """Stopping policy shared by the Newton-type iterations.

    Primary rule: increment norm below tol_abs + tol_rel*|gamma|.  Transients
    of the non-normal iteration can keep the increment floor slightly above
    that, so once the increments stagnate while the best iterate passes the
    residual certificate (margin 10), a few more iterates are collected and
    averaged to damp the rounding noise before the step is accepted.
    """

    _WINDOW = 8
    _AVERAGE = 16

    CONTINUE, CONVERGED, STALLED = 0, 1, 2

    def __init__(self, ctx: _StepContext):
        self.ctx = ctx
        self.best_resid = np.inf
        self.best = None
        self.deltas: list[float] = []
        self._acc = None
        self._acc_count = 0

    def observe(self, gammas, resid_norm: float) -> None:
        if resid_norm < self.best_resid:
            self.best_resid = resid_norm
            self.best = [g.copy() for g in gammas]
        if self._acc is not None:
            for a, g in zip(self._acc, gammas):
                a += g
            self._acc_count += 1

    def certificate(self) -> bool:
        return self.best is not None and self.best_resid <= 10.0 * self.ctx.tolerance(
            self.best
        )

    def averaged(self):
        if self._acc is None or self._acc_count == 0:
            return self.best
        return [a / self._acc_count for a in self._acc]

    def classify(self, gammas, delta_norm: float) -> int:
        self.deltas.append(delta_norm)
        if delta_norm <= self.ctx.tolerance(gammas):
            return self.CONVERGED
        if self._acc is not None:
            return self.STALLED if self._acc_count >= self._AVERAGE else self.CONTINUE
        w = self._WINDOW
        stalled = len(self.deltas) > w + 3 and delta_norm >= 0.5 * self.deltas[-w - 1]
        if stalled and self.certificate():
            self._acc = [np.zeros_like(g) for g in gammas]
        return self.CONTINUE


def blended_solve(ctx: _StepContext, jac: np.ndarray, rho11: float,
                  x11_factors: dense_linalg.LuFactors):
    """Newton-type iteration for one fractional order; only the m x m matrix
    I - rho11 h^alpha f'(phi^n(0)) is factored."""
    m = ctx.problem.m
    h_a = float(ctx.h_alpha[0])
    theta = dense_linalg.lu_factor(np.eye(m) - rho11 * h_a * jac)
    gam = ctx.zeros()[0]
    stop = _NewtonAcceptance(ctx)
    for it in range(1, ctx.config.max_iter + 1):
        g_val = gam - ctx.picard([gam])[0]
        resid_norm = float(np.max(np.abs(g_val)))
        stop.observe([gam], resid_norm)
        eta = -g_val
        eta_hat = rho11 * dense_linalg.lu_solve(x11_factors, eta)
        inner = eta_hat + dense_linalg.lu_solve(theta, (eta - eta_hat).T).T
        delta = dense_linalg.lu_solve(theta, inner.T).T
        gam = gam + delta
        verdict = stop.classify([gam], _norm([delta]))
        if verdict == stop.CONVERGED:
            return [gam], it, resid_norm, True
        if verdict == stop.STALLED:
            picked, resid = _pick_stalled(ctx, stop)
            return picked, it + 1, resid, True
    if stop.certificate():
        return stop.best, ctx.config.max_iter, stop.best_resid, True
    return [gam], ctx.config.max_iter, stop.best_resid, False


def _pick_stalled(ctx: _StepContext, stop: _NewtonAcceptance):
    """Prefer the noise-averaged stalled iterate unless the best one beats it."""
    candidate = stop.averaged()
    g_blocks = residual(ctx.quad, ctx.problem, ctx.t_prev, ctx.h_n, ctx.phi_nodes,
                        candidate)
    cand_resid = _norm(g_blocks)
    if cand_resid <= stop.best_resid:
        return candidate, cand_resid
    return stop.best, stop.best_resid


def newton_solve(ctx: _StepContext, jac: np.ndarray):
    """Simplified Newton iteration: the sm x sm matrix
    I - [h^alpha_j X_ij (x) f_ij] is factored once per step."""
    quad, problem = ctx.quad, ctx.problem
    s, nu = quad.s, quad.nu
    slices = problem.block_slices
    sizes = problem.block_sizes
    offsets = np.concatenate(([0], np.cumsum([s * mi for mi in sizes])))
    dim = int(offsets[-1])
    mat = np.eye(dim)
    for i in range(nu):
        ri = slice(int(offsets[i]), int(offsets[i + 1]))
        for j in range(nu):
            cj = slice(int(offsets[j]), int(offsets[j + 1]))
            f_ij = jac[slices[i], slices[j]]
            mat[ri, cj] -= ctx.h_alpha[j] * np.kron(quad.x_blocks[i, j], f_ij)
    factors = dense_linalg.lu_factor(mat)
    gammas = ctx.zeros()
    stop = _NewtonAcceptance(ctx)
    for it in range(1, ctx.config.max_iter + 1):
        g_blocks = [g - p for g, p in zip(gammas, ctx.picard(gammas))]
        resid_norm = _norm(g_blocks)
        stop.observe(gammas, resid_norm)
        rhs = -np.concatenate([g.ravel() for g in g_blocks])
        delta = dense_linalg.lu_solve(factors, rhs)
        parts = []
        for i, mi in enumerate(sizes):
            seg = delta[int(offsets[i]) : int(offsets[i + 1])].reshape(s, mi)
            parts.append(seg)
            gammas[i] = gammas[i] + seg
        verdict = stop.classify(gammas, _norm(parts))
        if verdict == stop.CONVERGED:
            return gammas, it, resid_norm, True
        if verdict == stop.STALLED:
            picked, resid = _pick_stalled(ctx, stop)
            return picked, it + 1, resid, True
    if stop.certificate():
        return stop.best, ctx.config.max_iter, stop.best_resid, True
    return gammas, ctx.config.max_iter, stop.best_resid, False


def advance(problem: FdeProblem, quad: QuadratureSet, mesh: Mesh,
            config: SolverConfig | None = None) -> Trajectory:
    """March the discrete problem across the mesh and return the trajectory."""
    config = config or SolverConfig()
    if tuple(np.asarray(problem.alphas)) != tuple(quad.alphas):
        raise InvalidParameterError("quadrature orders do not match the problem")
    if config.mode == "blended" and problem.nu != 1:
        raise InvalidParameterError("blended iteration applies to nu = 1 only")
    if config.s != quad.s:
        raise InvalidParameterError("config.s does not match the quadrature")
    m = problem.m
    n_steps = mesh.N
    history = StepHistory(problem.alphas, problem.block_sizes, quad.s,
                          t0=0.0, capacity=n_steps)
    graded_count = mesh.mu if mesh.mu < mesh.N else mesh.N
    if mesh.mu == 1 and mesh.rho_mesh == 1:
        graded_count = 0
    engine = _MemoryEngine(problem, quad, history, graded_count, capacity=n_steps)
    values = np.empty((n_steps + 1, m))
    y_prev = problem.taylor_data[0].copy()
    values[0] = problem.to_user(y_prev)
    diagnostics: list[StepDiagnostics] = []
    inv_gamma1 = 1.0 / np.array([gamma(a + 1.0) for a in quad.alphas])
    fp_enabled = config.mode in ("auto", "fp")

    def partial() -> Trajectory:
        done = history.n_steps
        return Trajectory(mesh=mesh, values=values[: done + 1].copy(), history=history,
                          diagnostics=diagnostics, problem=problem, quad=quad,
                          config=config, n_completed=done)

    for n in range(1, n_steps + 1):
        h_n = mesh.steps[n - 1]
        t_prev = mesh.points[n - 1]
        phi_nodes, phi_end = engine.phi(n, h_n)
        ctx = _StepContext(quad, problem, config, t_prev, h_n, phi_nodes)
        gammas = None
        if fp_enabled:
            itmax = config.max_iter if config.mode == "fp" else config.fp_max
            fp_gam, its, res, ok = fixed_point_solve(ctx, itmax)
            diagnostics.append(StepDiagnostics(n, h_n, "fixed-point", its, res))
            if ok:
                gammas = fp_gam
            elif config.mode == "fp":
                raise StepFailureError(
                    f"fixed-point iteration diverged at step {n}", n, partial()
                )
            else:
                fp_enabled = False
        if gammas is None:
            try:
                jac = problem.jacobian_internal(t_prev, y_prev)
            except Exception as exc:
                raise StepFailureError(
                    f"Jacobian evaluation failed at step {n}: {exc}", n, partial()
                ) from exc
            use_blended = config.mode == "blended" or (
                config.mode == "auto" and problem.nu == 1
            )
            try:
                if use_blended:
                    rho11 = config.rho11 if config.rho11 is not None else quad.rho11
                    x11_fac = _x11_factors(engine)
                    gammas, its, res, ok = blended_solve(ctx, jac, rho11, x11_fac)
                    kind = "blended"
                else:
                    gammas, its, res, ok = newton_solve(ctx, jac)
                    kind = "newton"
            except SingularMatrixError as exc:
                raise StepFailureError(
                    f"singular iteration matrix at step {n} (try refining the mesh)",
                    n, partial(),
                ) from exc
            diagnostics.append(StepDiagnostics(n, h_n, kind, its, res))
            if not ok:
                raise StepFailureError(
                    f"{kind} iteration did not converge within "
                    f"{config.max_iter} iterations at step {n}", n, partial()
                )
        y = phi_end.copy()
        for i, sl in enumerate(problem.block_slices):
            y[sl] += ctx.h_alpha[i] * gammas[i][0] * inv_gamma1[i]
        history.append(h_n, gammas)
        values[n] = problem.to_user(y)
        y_prev = y
    return Trajectory(mesh=mesh, values=values, history=history,
                      diagnostics=diagnostics, problem=problem, quad=quad,
                      config=config, n_completed=n_steps)


def _x11_factors(engine: _MemoryEngine) -> dense_linalg.LuFactors:
    if not hasattr(engine, "_x11_cache"):
        engine._x11_cache = dense_linalg.lu_factor(engine.quad.x_blocks[0, 0])
    return engine._x11_cache


@lru_cache(maxsize=32)
def _cached_quadrature(alphas: tuple, s: int) -> QuadratureSet:
    return build_quadrature(alphas, s)


def solve(problem: FdeProblem, mesh: Mesh, config: SolverConfig | None = None) -> Trajectory:
    """Build (or reuse) the quadrature for the problem's orders and advance."""
    config = config or SolverConfig()
    quad = _cached_quadrature(tuple(float(a) for a in problem.alphas), config.s)
    return advance(problem, quad, mesh, config)


def dense_eval(traj: Trajectory, t: float) -> np.ndarray:
    """The piecewise approximation sigma(t) anywhere inside the computed range."""
    points = traj.history.points
    t = float(t)
    if t < 0.0 or t > points[-1] + 1e-12 * max(points[-1], 1.0):
        raise InvalidParameterError(f"dense evaluation at t={t} outside [0, {points[-1]}]")
    if t <= 0.0:
        return traj.values[0].copy()
    n = int(np.searchsorted(np.asarray(points), t, side="left"))
    n = min(max(n, 1), traj.n_completed)
    h_n = traj.history.steps[n - 1]
    c = min(max((t - points[n - 1]) / h_n, 0.0), 1.0)
    engine = _MemoryEngine(traj.problem, traj.quad, traj.history,
                           graded_count=traj.history.n_steps)
    phi_c = engine.phi_at(n, np.array([c]), h_n)[0]
    y = phi_c.copy()
    for i, sl in enumerate(traj.problem.block_slices):
        ip = frac_int_basis_many(traj.quad.bases[i], np.array([c]))[0]
        h_a = h_n ** traj.quad.alphas[i]
        y[sl] += h_a * (ip @ traj.history.gamma(i)[n - 1])
    return traj.problem.to_user(y)


def mescd(computed: np.ndarray, reference: np.ndarray) -> float:
    """Mixed-error significant computed digits:
    max(0, -log10 max_n ||(ref - comp) ./ (1 + |ref|)||_inf), 16 at zero error."""
    computed = np.asarray(computed, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if computed.shape != reference.shape:
        raise InvalidParameterError("shape mismatch between computed and reference")
    err = np.max(np.abs(reference - computed) / (1.0 + np.abs(reference)))
    if err == 0.0:
        return 16.0
    return max(0.0, -log10(err))
