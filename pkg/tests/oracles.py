"""Independent brute-force oracles used to pin expected values.

Everything here deliberately avoids the code paths under test: quadratures
are adaptive (scipy.integrate.quad / mpmath.quad), orthonormal bases come
from Gram-Schmidt on exact moments, eigenvalues from Sturm bisection or
determinant sign changes.
"""

from __future__ import annotations

from math import gamma

import mpmath as mp
import numpy as np
from scipy.integrate import quad


def weight_moment(alpha: float, d: int) -> float:
    """int_0^1 alpha*(1-c)^(alpha-1) c^d dc = Gamma(d+1)Gamma(alpha+1)/Gamma(d+1+alpha)."""
    return gamma(d + 1.0) * gamma(alpha + 1.0) / gamma(d + 1.0 + alpha)


def gram_schmidt_basis(alpha: float, s_max: int, pts, dps: int = 80) -> np.ndarray:
    """Orthonormal polynomials of w_alpha via Gram-Schmidt on exact moments.

    Works in the monomial basis with mpmath moments, so it shares nothing
    with the recurrence implementation.  Returns a (len(pts), s_max) table.
    """
    with mp.workdps(dps):
        mom = [mp.gamma(d + 1) * mp.gamma(alpha + 1) / mp.gamma(d + 1 + alpha)
               for d in range(2 * s_max + 1)]
        # coefficient rows of the orthonormal polynomials
        coeffs: list[list] = []
        for j in range(s_max):
            row = [mp.mpf(0)] * (j + 1)
            row[j] = mp.mpf(1)  # start from c^j
            for prev in coeffs:
                proj = mp.fsum(
                    prev[a] * mom[a + j] for a in range(len(prev))
                )
                for a in range(len(prev)):
                    row[a] -= proj * prev[a]
            nrm2 = mp.fsum(
                row[a] * row[b] * mom[a + b]
                for a in range(j + 1)
                for b in range(j + 1)
            )
            nrm = mp.sqrt(nrm2)
            coeffs.append([c / nrm for c in row])
        out = np.empty((len(pts), s_max))
        for r, p in enumerate(pts):
            pm = mp.mpf(float(p))
            powers = [mp.mpf(1)]
            for _ in range(s_max):
                powers.append(powers[-1] * pm)
            for j in range(s_max):
                out[r, j] = float(
                    mp.fsum(coeffs[j][a] * powers[a] for a in range(j + 1))
                )
    return out


def tail_kernel_quad(basis_eval, alpha: float, j: int, x: float) -> float:
    """Adaptive-quadrature J_j(x) graded toward tau = 1 where the kernel is steep."""
    f = lambda tau: (x - tau) ** (alpha - 1.0) * basis_eval(tau)[j]
    pieces = sorted({0.0, max(0.0, 1.0 - 8.0 * (x - 1.0)), 1.0})
    total = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        if b <= a:
            continue
        val, _ = quad(f, a, b, epsabs=1e-15, epsrel=1e-13, limit=400)
        total += val
    return total / gamma(alpha)


def frac_int_quad(basis_eval, alpha: float, j: int, c: float) -> float:
    """Adaptive-quadrature I^alpha P_j(c)."""
    if c == 0.0:
        return 0.0
    f = lambda tau: (c - tau) ** (alpha - 1.0) * basis_eval(tau)[j]
    val, _ = quad(f, 0.0, c, epsabs=1e-15, epsrel=1e-13, limit=400,
                  points=[c * (1 - 1e-8)])
    return val / gamma(alpha)


def caputo_p3_residual(alpha: float, beta: float, t: float, dps: int = 40) -> float:
    """|Caputo_alpha s(., alpha, beta)(t) - g(t, alpha, beta)| by mpmath quadrature."""
    with mp.workdps(dps):
        a = mp.mpf(alpha)
        b = mp.mpf(beta)
        tt = mp.mpf(t)

        def sprime(x):
            return (
                -4 * x * (1 - x**2)
                + 4 * a * x ** (a - 1)
                + 2 * (a + b) * x ** (a + b - 1)
                - 3 * (mp.mpf("0.2") + a + b) * x ** (a + b - mp.mpf("0.8"))
            )

        integrand = lambda x: (tt - x) ** (-a) * sprime(x)
        val = mp.quad(integrand, [0, tt / 2, tt]) / mp.gamma(1 - a)
        g = (
            24 * tt ** (4 - a) / mp.gamma(5 - a)
            - 4 * tt ** (2 - a) / mp.gamma(3 - a)
            - 3 * tt ** (mp.mpf("0.2") + b) * mp.gamma(mp.mpf("1.2") + a + b)
            / mp.gamma(mp.mpf("1.2") + b)
            + 2 * tt**b * mp.gamma(1 + a + b) / mp.gamma(1 + b)
            + 4 * mp.gamma(1 + a)
        )
        return float(abs(val - g))


def memory_term_quad(problem, quad_set, history, n: int, c: float, h_n: float) -> np.ndarray:
    """Riemann-Liouville integration of the stored piecewise expansion.

    phi_i^n(c h_n) = T_i(t_{n-1} + c h_n)
      + sum_mu h_mu^alpha_i / Gamma(alpha_i) *
        int_0^1 (X_mu - tau)^(alpha_i - 1) sum_j P_j^i(tau) gamma_ij^mu dtau.
    """
    from fhbvm.ortho_poly import eval_basis
    from fhbvm.problems import taylor_term

    t_prev = history.points[n - 1]
    out = np.empty(problem.m)
    for i, sl in enumerate(problem.block_slices):
        alpha = float(quad_set.alphas[i])
        basis = quad_set.bases[i]
        acc = taylor_term(problem, i, t_prev + c * h_n)
        for mu in range(1, n):
            h_mu = history.steps[mu - 1]
            x_arg = (t_prev + c * h_n - history.points[mu - 1]) / h_mu
            gam = history.gamma(i)[mu - 1]  # (s, m_i)

            def component(d):
                f = lambda tau: (x_arg - tau) ** (alpha - 1.0) * float(
                    eval_basis(basis, tau) @ gam[:, d]
                )
                pieces = sorted({0.0, max(0.0, 1.0 - 8.0 * max(x_arg - 1.0, 1e-3)), 1.0})
                total = 0.0
                for a_, b_ in zip(pieces[:-1], pieces[1:]):
                    if b_ > a_:
                        val, _ = quad(f, a_, b_, epsabs=1e-14, epsrel=1e-12, limit=400)
                        total += val
                return total

            acc = acc + (h_mu**alpha / gamma(alpha)) * np.array(
                [component(d) for d in range(gam.shape[1])]
            )
        out[sl] = acc
    return out


def sturm_eigenvalues(diag: np.ndarray, offdiag: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """Symmetric tridiagonal eigenvalues by Sturm-sequence bisection."""
    diag = np.asarray(diag, float)
    off2 = np.asarray(offdiag, float) ** 2
    n = diag.size

    def count_below(x: float) -> int:
        cnt = 0
        d = diag[0] - x
        if d < 0:
            cnt += 1
        for i in range(1, n):
            denom = d if d != 0 else 1e-300
            d = diag[i] - x - off2[i - 1] / denom
            if d < 0:
                cnt += 1
        return cnt

    radius = np.max(np.abs(diag)) + 2 * np.max(np.sqrt(off2), initial=0.0) + 1.0
    out = np.empty(n)
    for k in range(n):
        lo, hi = -radius, radius
        while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
            mid = 0.5 * (lo + hi)
            if count_below(mid) >= k + 1:
                hi = mid
            else:
                lo = mid
        out[k] = 0.5 * (lo + hi)
    return out


def det_sign(a: np.ndarray) -> float:
    """Sign of det(a) by plain Gaussian elimination with partial pivoting."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    sign = 1.0
    for col in range(n):
        p = col + int(np.argmax(np.abs(a[col:, col])))
        if a[p, col] == 0.0:
            return 0.0
        if p != col:
            a[[col, p]] = a[[p, col]]
            sign = -sign
        if a[col, col] < 0:
            sign = -sign
        for row in range(col + 1, n):
            a[row, col:] -= (a[row, col] / a[col, col]) * a[col, col:]
    return sign


def det_bisection_eigenvalues(h: np.ndarray, brackets: np.ndarray, tol: float = 1e-11) -> np.ndarray:
    """Real eigenvalues of h located by bisection on sign changes of det(h - x I).

    brackets must be a grid with exactly one eigenvalue between consecutive
    sign changes (e.g. midpoints around approximate eigenvalues).
    """
    n = h.shape[0]
    eye = np.eye(n)
    signs = [det_sign(h - x * eye) for x in brackets]
    roots = []
    for i in range(len(brackets) - 1):
        if signs[i] == 0.0:
            roots.append(brackets[i])
            continue
        if signs[i] * signs[i + 1] < 0:
            lo, hi = brackets[i], brackets[i + 1]
            slo = signs[i]
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                smid = det_sign(h - mid * eye)
                if smid == 0.0:
                    lo = hi = mid
                elif smid == slo:
                    lo = mid
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
    return np.array(roots)
