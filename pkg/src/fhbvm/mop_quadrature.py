"""Simultaneous quadratures at Jacobi-Pineiro abscissae.

One set of k nodes carries, for every weight w_i(c) = alpha_i*(1-c)^(alpha_i-1),
an interpolatory rule exact on polynomials of degree k+q-1 >= 2s-1.  The nodes
are the zeros of a multiple orthogonal polynomial, obtained as eigenvalues of
the banded lower-Hessenberg matrix of its vector recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, gamma

import mpmath as mp
import numpy as np

from . import dense_linalg, ortho_poly
from .errors import (
    AbscissaeFailureError,
    BalancingFailureError,
    ConstructionFailureError,
    InvalidParameterError,
)

__all__ = [
    "MopRecurrence",
    "QuadratureSet",
    "select_qk",
    "phi_nodes",
    "mop_recurrence",
    "build_hessenberg",
    "balance",
    "build_quadrature",
]


def select_qk(nu: int, s: int) -> tuple[int, int]:
    """Orthogonality depth q = ceil(2s/(nu+1)) and node count k = nu*q.

    Guarantees quadrature order k + q - 1 >= 2s - 1 for all nu weights.
    """
    if nu < 1 or s < 1:
        raise InvalidParameterError("nu and s must be positive")
    q = ceil(2 * s / (nu + 1))
    return q, nu * q


def phi_nodes(nu: int, s: int) -> int:
    """Inner-product Gauss node count covering integrands of degree (nu+1)q - 2.

    The construction itself uses phi_nodes + 1 nodes so that the final
    degree-(k+q-1) pairing is also integrated exactly.
    """
    q, _ = select_qk(nu, s)
    return ceil((nu + 1) / 2 * q - 0.5)


@dataclass(frozen=True)
class MopRecurrence:
    """Banded recurrence pi_j = c*pi_{j-1} - sum a_ji pi_{i-1} for the family
    simultaneously orthogonal to depth q against each weight."""

    alphas: tuple[float, ...]
    q: int
    k: int
    coeffs: np.ndarray  # (k, nu+1); coeffs[j-1, d] = a_{j, j-d}, zero-padded
    phi_count: int
    _mp_coeffs: list = field(repr=False, compare=False, default=None)

    @property
    def nu(self) -> int:
        return len(self.alphas)

    def coefficient(self, j: int, i: int) -> float:
        """a_ji for 1 <= max(1, j-nu) <= i <= j <= k."""
        if not (1 <= j <= self.k and max(1, j - self.nu) <= i <= j):
            raise IndexError(f"coefficient a_{j},{i} outside the band")
        return float(self.coeffs[j - 1, j - i])


def _mp_gauss_rule(alpha: float, n: int):
    """phi+1 node right-singular Gauss rule at working mpmath precision.

    Float64 Golub-Welsch nodes are polished by Newton iteration on the monic
    recurrence; weights come from the Christoffel function.
    """
    seed = ortho_poly.gauss_rule(alpha, n, ortho_poly.RIGHT_SINGULAR)
    alpha_mp = mp.mpf(alpha)
    a = alpha_mp - 1
    A = [1 / (alpha_mp + 1)]
    B = [mp.mpf(1)]
    for k in range(1, n):
        den = (2 * k + a) * (2 * k + a + 2)
        A.append((1 - (a * a) / den) / 2)
        B.append((mp.mpf(k) ** 2 * (k + a) ** 2) / ((2 * k + a) ** 2 * ((2 * k + a) ** 2 - 1)))

    def monic_and_deriv(x):
        vals = [mp.mpf(1), x - A[0]]
        ders = [mp.mpf(0), mp.mpf(1)]
        for k in range(1, n):
            vals.append((x - A[k]) * vals[k] - B[k] * vals[k - 1])
            ders.append(vals[k] + (x - A[k]) * ders[k] - B[k] * ders[k - 1])
        return vals, ders

    nodes = []
    for x0 in seed.nodes:
        x = mp.mpf(float(x0))
        for _ in range(4):
            vals, ders = monic_and_deriv(x)
            x -= vals[n] / ders[n]
        nodes.append(x)
    weights = []
    for x in nodes:
        vals, _ = monic_and_deriv(x)
        total = mp.mpf(0)
        nrm2 = mp.mpf(1)
        for j in range(n):
            total += vals[j] ** 2 / nrm2
            if j + 1 < n:
                nrm2 *= B[j + 1]
        weights.append(1 / total)
    return nodes, weights


def mop_recurrence(alphas, s: int) -> MopRecurrence:
    """Construct the banded recurrence coefficients a_ji.

    For j = r*nu + mu, orthogonality is imposed against pi_floor((i-1)/nu) in
    the inner product of weight xi(i) = ((i-1) mod nu) + 1, in the constructive
    order i = max(1, j-nu)..j; pi values at all per-weight Gauss nodes are
    maintained incrementally through the recurrence itself.

    The sweep runs at extended precision: in float64 the incrementally held pi
    values lose orthogonality near j ~ 18 and the band degenerates.
    """
    alphas = tuple(float(a) for a in np.atleast_1d(np.asarray(alphas, dtype=float)))
    if any(a <= 0 for a in alphas):
        raise InvalidParameterError("all weight exponents must be positive")
    nu = len(alphas)
    q, k = select_qk(nu, s)
    phi = phi_nodes(nu, s)
    nq = phi + 1
    with mp.workdps(max(40, 20 + k)):
        rules = [_mp_gauss_rule(a, nq) for a in alphas]
        pivals = [[[mp.mpf(1)] * nq] for _ in range(nu)]  # per weight: rows pi_j at nodes
        coeffs_mp = [[mp.mpf(0)] * (k + 1) for _ in range(k + 1)]
        for j in range(1, k + 1):
            z = [
                [rules[w][0][p] * pivals[w][j - 1][p] for p in range(nq)]
                for w in range(nu)
            ]
            for i in range(max(1, j - nu), j + 1):
                xi = (i - 1) % nu
                ell = (i - 1) // nu
                nodes_w, wts_w = rules[xi]
                pi_prev = pivals[xi][i - 1]
                pi_ell = pivals[xi][ell]
                num = mp.fsum(wts_w[p] * z[xi][p] * pi_ell[p] for p in range(nq))
                den = mp.fsum(wts_w[p] * pi_prev[p] * pi_ell[p] for p in range(nq))
                if den == 0:
                    raise ConstructionFailureError(
                        f"zero denominator for a_{j},{i}: degenerate weight system",
                        j=j,
                        i=i,
                    )
                a_ji = num / den
                coeffs_mp[j][i] = a_ji
                for w in range(nu):
                    zw = z[w]
                    pw = pivals[w][i - 1]
                    for p in range(nq):
                        zw[p] -= a_ji * pw[p]
            for w in range(nu):
                pivals[w].append(z[w])
        band = np.zeros((k, nu + 1))
        for j in range(1, k + 1):
            for i in range(max(1, j - nu), j + 1):
                band[j - 1, j - i] = float(coeffs_mp[j][i])
    return MopRecurrence(
        alphas=alphas, q=q, k=k, coeffs=band, phi_count=phi, _mp_coeffs=coeffs_mp
    )


def build_hessenberg(rec: MopRecurrence) -> np.ndarray:
    """Lower-Hessenberg companion matrix of the vector recurrence.

    Unit superdiagonal, coefficient band of width nu below the diagonal;
    its eigenvalues are the zeros of pi_k.
    """
    k, nu = rec.k, rec.nu
    h = np.zeros((k, k))
    for j in range(1, k + 1):
        for i in range(max(1, j - nu), j + 1):
            h[j - 1, i - 1] = rec.coeffs[j - 1, j - i]
        if j < k:
            h[j - 1, j] = 1.0
    return h


def balance(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal similarity D H D^-1 that symmetrizes the tridiagonal part.

    Requires positive subdiagonal-superdiagonal products; eigenvalues are
    preserved and the off-tridiagonal band shrinks, improving conditioning.
    """
    h = np.asarray(h, dtype=float)
    k = h.shape[0]
    d = np.ones(k)
    for j in range(k - 1):
        prod = h[j + 1, j] * h[j, j + 1]
        if prod <= 0.0:
            raise BalancingFailureError(
                f"nonpositive sub*super product {prod:.3e} at position {j}"
            )
        d[j + 1] = d[j] * np.sqrt(h[j, j + 1] / h[j + 1, j])
    balanced = (d[:, None] * h) / d[None, :]
    return d, balanced


def _polish_abscissae(rec: MopRecurrence, nodes: np.ndarray) -> np.ndarray:
    """Newton-polish eigenvalue estimates on pi_k at extended precision."""
    if rec._mp_coeffs is None:
        return nodes
    k, nu = rec.k, rec.nu
    coeffs = rec._mp_coeffs
    with mp.workdps(max(40, 20 + k)):

        def pik_and_deriv(x):
            vals = [mp.mpf(1)]
            ders = [mp.mpf(0)]
            for j in range(1, k + 1):
                v = x * vals[j - 1]
                dv = vals[j - 1] + x * ders[j - 1]
                for i in range(max(1, j - nu), j + 1):
                    v -= coeffs[j][i] * vals[i - 1]
                    dv -= coeffs[j][i] * ders[i - 1]
                vals.append(v)
                ders.append(dv)
            return vals[k], ders[k]

        out = np.empty_like(nodes)
        for idx, x0 in enumerate(nodes):
            x = mp.mpf(float(x0))
            for _ in range(3):
                v, dv = pik_and_deriv(x)
                if dv == 0:
                    break
                x -= v / dv
            out[idx] = float(x)
    return out


@dataclass(frozen=True)
class QuadratureSet:
    """Shared abscissae with per-weight interpolatory weights and the node
    tables the time stepper consumes."""

    alphas: tuple[float, ...]
    s: int
    q: int
    k: int
    abscissae: np.ndarray          # (k,), increasing, inside (0, 1)
    weights: np.ndarray            # (nu, k); rows may contain negative entries
    bases: tuple                   # per-order JacobiBasis
    basis_at_nodes: tuple          # per-order (k, s) tables P_j(c_rho)
    fracint_at_nodes: tuple        # per-order (k, s) tables I^alpha P_j(c_rho)
    x_blocks: np.ndarray           # (nu, nu, s, s), X_ij = P_i^T diag(b_i) IP_j
    endpoint_fracint: np.ndarray   # (nu, s), rows delta_j0 / Gamma(alpha_i + 1)
    rho11: float | None            # blended-iteration parameter (nu == 1 only)
    balanced: bool
    min_weight: float

    @property
    def nu(self) -> int:
        return len(self.alphas)


def build_quadrature(alphas, s: int) -> QuadratureSet:
    """Abscissae, weights, and solver tables for the given weight exponents."""
    rec = mop_recurrence(alphas, s)
    h = build_hessenberg(rec)
    balanced = True
    try:
        _, hb = balance(h)
    except BalancingFailureError:
        hb = h
        balanced = False
    nodes = dense_linalg.hessenberg_eigenvalues(hb)
    nodes = _polish_abscissae(rec, nodes)
    nodes = np.sort(nodes)
    if np.any(nodes < -1e-12) or np.any(nodes > 1.0 + 1e-12):
        raise AbscissaeFailureError(
            f"abscissa outside [0, 1]: range ({nodes.min()}, {nodes.max()})"
        )
    if np.any(np.diff(nodes) <= 1e-14):
        raise AbscissaeFailureError("coincident abscissae")

    k, nu = rec.k, rec.nu
    lam = np.empty(k)
    for r in range(k):
        lam[r] = 1.0 / np.prod(nodes[r] - np.delete(nodes, r))
    lam /= np.max(np.abs(lam))
    weights = np.empty((nu, k))
    n_lag = ceil(k / 2)
    for i, a in enumerate(rec.alphas):
        rule = ortho_poly.gauss_rule(a, n_lag, ortho_poly.RIGHT_SINGULAR)
        ratio = lam[None, :] / (rule.nodes[:, None] - nodes[None, :])
        lagrange = ratio / ratio.sum(axis=1, keepdims=True)
        weights[i] = rule.weights @ lagrange

    bases = tuple(ortho_poly.make_basis(a, s) for a in rec.alphas)
    basis_at_nodes = tuple(ortho_poly.eval_basis_many(b, nodes) for b in bases)
    fracint_at_nodes = tuple(ortho_poly.frac_int_basis_many(b, nodes) for b in bases)
    x_blocks = np.empty((nu, nu, s, s))
    for i in range(nu):
        weighted = basis_at_nodes[i] * weights[i][:, None]  # (k, s)
        for j in range(nu):
            x_blocks[i, j] = weighted.T @ fracint_at_nodes[j]
    endpoint = np.stack([b.endpoint_frac_int() for b in bases])
    rho11 = None
    if nu == 1:
        rho11 = float(np.min(np.abs(dense_linalg.eigvals(x_blocks[0, 0]))))
    return QuadratureSet(
        alphas=rec.alphas,
        s=int(s),
        q=rec.q,
        k=k,
        abscissae=nodes,
        weights=weights,
        bases=bases,
        basis_at_nodes=basis_at_nodes,
        fracint_at_nodes=fracint_at_nodes,
        x_blocks=x_blocks,
        endpoint_fracint=endpoint,
        rho11=rho11,
        balanced=balanced,
        min_weight=float(weights.min()),
    )
