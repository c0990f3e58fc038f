"""Orthonormal Jacobi bases on [0, 1] for the weights w_a(c) = a*(1-c)^(a-1),
their Gauss rules, fractional integrals, and history kernels.

The weight w_a is normalized to unit mass, so the degree-0 orthonormal
polynomial is the constant 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, gamma

import numpy as np

from . import dense_linalg
from .errors import InvalidParameterError

__all__ = [
    "RIGHT_SINGULAR",
    "LEFT_SINGULAR",
    "SMOOTH",
    "JacobiBasis",
    "GaussRule",
    "make_basis",
    "eval_basis",
    "eval_basis_many",
    "gauss_rule",
    "frac_int_basis",
    "frac_int_basis_many",
    "tail_kernels",
    "tail_kernels_many",
]

RIGHT_SINGULAR = "right-singular"  # a*(1-c)^(a-1), unit mass
LEFT_SINGULAR = "left-singular"    # c^(a-1), mass 1/a
SMOOTH = "smooth"                  # 1, unit mass

_PANEL_NODES = 24   # Gauss-Legendre nodes per graded panel (1 < x < 2)
_SMOOTH_NODES = 30  # Gauss-Legendre nodes for the far regime (x >= 2)


def monic_recurrence(alpha: float, n: int, weight_kind: str = RIGHT_SINGULAR):
    """Monic three-term recurrence coefficients A[0..n-1], B[0..n-1] on [0, 1].

    B[0] carries the total mass of the weight.  Closed shifted-Jacobi forms
    are used instead of moment recursions, which would be unstable.
    """
    if alpha <= 0:
        raise InvalidParameterError(f"weight exponent must be positive, got {alpha}")
    if n < 1:
        raise InvalidParameterError("at least one recurrence coefficient is required")
    A = np.empty(n)
    B = np.empty(n)
    if weight_kind == RIGHT_SINGULAR:
        a, b = alpha - 1.0, 0.0
        B[0] = 1.0
    elif weight_kind == LEFT_SINGULAR:
        a, b = 0.0, alpha - 1.0
        B[0] = 1.0 / alpha
    elif weight_kind == SMOOTH:
        a, b = 0.0, 0.0
        B[0] = 1.0
    else:
        raise InvalidParameterError(f"unknown weight kind {weight_kind!r}")
    apb = a + b
    A[0] = (1.0 + (b - a) / (apb + 2.0)) / 2.0
    for k in range(1, n):
        den = (2 * k + apb) * (2 * k + apb + 2.0)
        A[k] = (1.0 + (b * b - a * a) / den) / 2.0
        B[k] = (k * (k + a) * (k + b) * (k + apb)) / (
            (2 * k + apb) ** 2 * ((2 * k + apb) ** 2 - 1.0)
        )
    return A, B


@dataclass(frozen=True)
class GaussRule:
    """Nodes and weights of a Gauss rule on (0, 1) for one of the three weights."""

    nodes: np.ndarray
    weights: np.ndarray
    weight_kind: str

    @property
    def n(self) -> int:
        return self.nodes.size


def gauss_rule(alpha: float, n: int, weight_kind: str = RIGHT_SINGULAR) -> GaussRule:
    """n-node Gauss rule on [0, 1], exact to degree 2n-1 for the given weight."""
    if n < 1:
        raise InvalidParameterError("a Gauss rule needs at least one node")
    A, B = monic_recurrence(alpha, n, weight_kind)
    nodes, first = dense_linalg.symtri_eigen(A, np.sqrt(B[1:]))
    weights = B[0] * first**2
    if np.any(nodes <= 0.0) or np.any(nodes >= 1.0) or np.any(np.diff(nodes) <= 0.0):
        raise InvalidParameterError("Gauss nodes left (0, 1) or lost ordering")
    return GaussRule(nodes=nodes, weights=weights, weight_kind=weight_kind)


@dataclass(frozen=True)
class JacobiBasis:
    """Orthonormal family P_0..P_{s_max-1} for w_alpha, plus kernel tables.

    diag/offdiag hold the orthonormal three-term recurrence
    P_{j+1} = ((c - diag[j]) P_j - offdiag[j] P_{j-1}) / offdiag[j+1],
    norms[j] is the monic norm ||pi_j||.
    """

    alpha: float
    s_max: int
    diag: np.ndarray
    offdiag: np.ndarray
    norms: np.ndarray
    frac_rule: GaussRule
    smooth_nodes: np.ndarray
    smooth_weights: np.ndarray
    smooth_table: np.ndarray
    panel_nodes: np.ndarray
    panel_weights: np.ndarray

    def endpoint_frac_int(self) -> np.ndarray:
        """I^alpha P_j at c = 1: the vector (1/Gamma(alpha+1), 0, ..., 0)."""
        out = np.zeros(self.s_max)
        out[0] = 1.0 / gamma(self.alpha + 1.0)
        return out


def make_basis(alpha: float, s_max: int) -> JacobiBasis:
    """Build the orthonormal basis of w_alpha(c) = alpha*(1-c)^(alpha-1) on [0, 1]."""
    if alpha <= 0:
        raise InvalidParameterError(f"weight exponent must be positive, got {alpha}")
    if s_max < 1:
        raise InvalidParameterError("an empty basis was requested")
    A, B = monic_recurrence(alpha, s_max, RIGHT_SINGULAR)
    offdiag = np.sqrt(B)
    offdiag[0] = 0.0
    norms = np.sqrt(np.cumprod(B))
    frac = gauss_rule(alpha, max(1, ceil(s_max / 2)), RIGHT_SINGULAR)
    smooth = gauss_rule(1.0, _SMOOTH_NODES, SMOOTH)
    panel = gauss_rule(1.0, _PANEL_NODES, SMOOTH)
    basis = JacobiBasis(
        alpha=float(alpha),
        s_max=int(s_max),
        diag=A,
        offdiag=offdiag,
        norms=norms,
        frac_rule=frac,
        smooth_nodes=smooth.nodes,
        smooth_weights=smooth.weights,
        smooth_table=np.empty(0),
        panel_nodes=panel.nodes,
        panel_weights=panel.weights,
    )
    object.__setattr__(basis, "smooth_table", eval_basis_many(basis, smooth.nodes))
    return basis


def eval_basis_many(basis: JacobiBasis, pts: np.ndarray) -> np.ndarray:
    """Table P_j(pts[i]) of shape (len(pts), s_max) via the three-term recurrence.

    Evaluation outside [0, 1] is permitted; the recurrence is used unclamped.
    """
    pts = np.asarray(pts, dtype=float)
    if not np.all(np.isfinite(pts)):
        raise InvalidParameterError("basis evaluation at a non-finite point")
    flat = pts.ravel()
    s = basis.s_max
    out = np.empty((flat.size, s))
    out[:, 0] = 1.0
    if s > 1:
        out[:, 1] = (flat - basis.diag[0]) / basis.offdiag[1]
    for j in range(1, s - 1):
        out[:, j + 1] = (
            (flat - basis.diag[j]) * out[:, j] - basis.offdiag[j] * out[:, j - 1]
        ) / basis.offdiag[j + 1]
    return out.reshape(*pts.shape, s)


def eval_basis(basis: JacobiBasis, c: float) -> np.ndarray:
    """Values P_0(c)..P_{s_max-1}(c)."""
    return eval_basis_many(basis, np.array([c]))[0]


def frac_int_basis_many(basis: JacobiBasis, cs: np.ndarray) -> np.ndarray:
    """Fractional integrals I^alpha P_j(c) for c in [0, 1], shape (len(cs), s_max).

    Exact to round-off: the substitution tau = c*u turns each integral into
    the weight integral of a degree-(s_max-1) polynomial, handled by the
    ceil(s_max/2)-node rule stored on the basis.
    """
    cs = np.asarray(cs, dtype=float)
    flat = cs.ravel()
    if np.any(flat < -1e-12) or np.any(flat > 1.0 + 1e-12):
        raise InvalidParameterError("fractional integral argument outside [0, 1]")
    flat = np.clip(flat, 0.0, 1.0)
    u, w = basis.frac_rule.nodes, basis.frac_rule.weights
    table = eval_basis_many(basis, flat[:, None] * u[None, :])
    out = np.einsum("n,bns->bs", w, table)
    out *= (flat ** basis.alpha / gamma(basis.alpha + 1.0))[:, None]
    return out.reshape(*cs.shape, basis.s_max)


def frac_int_basis(basis: JacobiBasis, c: float) -> np.ndarray:
    """Vector I^alpha P_j(c), j = 0..s_max-1."""
    return frac_int_basis_many(basis, np.array([c]))[0]


def tail_kernels_many(basis: JacobiBasis, xs: np.ndarray) -> np.ndarray:
    """History kernels J_j(x) = Gamma(alpha)^-1 * int_0^1 (x-t)^(alpha-1) P_j(t) dt
    for scaled times x >= 1, shape (len(xs), s_max).

    Three regimes: x == 1 uses the closed endpoint values; 1 < x < 2 integrates
    in sigma = x - t over panels doubling away from the near-singularity at
    sigma = x - 1, so the basis is only ever evaluated inside [0, 1]; x >= 2
    applies the 30-node smooth rule directly (singularity at distance >= 1).
    """
    xs = np.asarray(xs, dtype=float)
    flat = xs.ravel()
    if np.any(flat < 1.0 - 1e-12) or not np.all(np.isfinite(flat)):
        raise InvalidParameterError("history kernel argument below 1")
    flat = np.maximum(flat, 1.0)
    out = np.empty((flat.size, basis.s_max))
    at_one = flat == 1.0
    near = (~at_one) & (flat < 2.0)
    far = flat >= 2.0
    if np.any(at_one):
        out[at_one] = basis.endpoint_frac_int()
    if np.any(near):
        out[near] = _tail_graded(basis, flat[near])
    if np.any(far):
        out[far] = _tail_smooth(basis, flat[far])
    return out.reshape(*xs.shape, basis.s_max)


def tail_kernels(basis: JacobiBasis, x: float) -> np.ndarray:
    """Vector J_j(x), j = 0..s_max-1, for a single scaled time x >= 1."""
    return tail_kernels_many(basis, np.array([x]))[0]


def _tail_smooth(basis: JacobiBasis, xs: np.ndarray) -> np.ndarray:
    kern = (xs[:, None] - basis.smooth_nodes[None, :]) ** (basis.alpha - 1.0)
    return (kern * basis.smooth_weights[None, :]) @ basis.smooth_table / gamma(basis.alpha)


def _tail_graded(basis: JacobiBasis, xs: np.ndarray) -> np.ndarray:
    u = basis.panel_nodes
    w = basis.panel_weights
    out = np.zeros((xs.size, basis.s_max))
    lo = xs - 1.0
    active = np.arange(xs.size)
    while active.size:
        x_a = xs[active]
        lo_a = lo[active]
        hi_a = np.minimum(2.0 * lo_a, x_a)
        length = hi_a - lo_a
        sig = lo_a[:, None] + length[:, None] * u[None, :]
        table = eval_basis_many(basis, x_a[:, None] - sig)
        wk = (length[:, None] * w[None, :]) * sig ** (basis.alpha - 1.0)
        out[active] += np.einsum("bn,bns->bs", wk, table)
        lo[active] = hi_a
        active = active[hi_a < x_a]
    return out / gamma(basis.alpha)
