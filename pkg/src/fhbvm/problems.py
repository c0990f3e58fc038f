"""Multi-order Caputo initial-value problems and the built-in test registry.

A problem groups equations sharing the same fractional order into blocks;
all orders must live in a common interval (ell-1, ell).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, gamma
from typing import Callable

import numpy as np

from .errors import InvalidParameterError, UnsupportedProblemError

__all__ = [
    "FdeProblem",
    "make_problem",
    "taylor_term",
    "registry",
    "exact_p3",
    "PROBLEM_NAMES",
]

_FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)


@dataclass(frozen=True)
class FdeProblem:
    """System y_i^(alpha_i) = f_i(t, y) with Taylor data at t = 0.

    alphas/block_sizes/taylor_data are stored in the grouped (internal)
    ordering; perm maps internal positions to the user's equation indices.
    field and jacobian are user-space callables and must be reentrant.
    """

    alphas: np.ndarray            # (nu,) distinct orders, one per block
    block_sizes: tuple[int, ...]
    ell: int
    taylor_data: np.ndarray       # (ell, m), internal ordering
    T: float
    field: Callable
    jacobian: Callable | None = None
    perm: np.ndarray | None = None
    vectorized: bool = False
    name: str = ""
    exact: Callable | None = None             # t array -> (len(t), m), user order
    reference_endpoint: np.ndarray | None = None

    @property
    def nu(self) -> int:
        return len(self.block_sizes)

    @property
    def m(self) -> int:
        return int(sum(self.block_sizes))

    @property
    def block_slices(self) -> tuple[slice, ...]:
        offsets = np.concatenate(([0], np.cumsum(self.block_sizes)))
        return tuple(slice(int(offsets[i]), int(offsets[i + 1])) for i in range(self.nu))

    @property
    def _identity_perm(self) -> bool:
        return self.perm is None or bool(np.all(self.perm == np.arange(self.m)))

    def to_user(self, y_int: np.ndarray) -> np.ndarray:
        if self._identity_perm:
            return y_int
        out = np.empty_like(y_int)
        out[..., self.perm] = y_int
        return out

    def to_internal(self, y_user: np.ndarray) -> np.ndarray:
        if self._identity_perm:
            return y_user
        return y_user[..., self.perm]

    def field_internal(self, t, y_int: np.ndarray) -> np.ndarray:
        f = self.field(t, self.to_user(y_int))
        return self.to_internal(np.asarray(f, dtype=float))

    def field_internal_batch(self, ts: np.ndarray, ys_int: np.ndarray) -> np.ndarray:
        """Vector field at several (t, y) pairs; rows of ys_int are states."""
        if self.vectorized:
            return self.to_internal(np.asarray(self.field(ts, self.to_user(ys_int)), float))
        out = np.empty_like(ys_int)
        for row in range(ys_int.shape[0]):
            out[row] = self.field_internal(ts[row], ys_int[row])
        return out

    def jacobian_internal(self, t, y_int: np.ndarray) -> np.ndarray:
        if self.jacobian is not None:
            jac = np.asarray(self.jacobian(t, self.to_user(y_int)), dtype=float)
        else:
            jac = _fd_jacobian(self.field, t, self.to_user(y_int))
        if self._identity_perm:
            return jac
        return jac[np.ix_(self.perm, self.perm)]


def _fd_jacobian(field: Callable, t, y: np.ndarray) -> np.ndarray:
    """Central finite differences with per-component step (1+|y_j|)*eps^(1/3)."""
    m = y.size
    jac = np.empty((m, m))
    for j in range(m):
        step = (1.0 + abs(y[j])) * _FD_STEP
        yp = y.copy()
        ym = y.copy()
        yp[j] += step
        ym[j] -= step
        jac[:, j] = (np.asarray(field(t, yp), float) - np.asarray(field(t, ym), float)) / (
            2.0 * step
        )
    return jac


def make_problem(
    orders,
    field: Callable,
    T: float,
    y0,
    jacobian: Callable | None = None,
    vectorized: bool = False,
    name: str = "",
    exact: Callable | None = None,
    reference_endpoint=None,
) -> FdeProblem:
    """Normalize a per-equation description into a block-grouped problem.

    Equations with equal orders are merged into one block (nu minimal) and
    grouped by first appearance; the permutation is recorded so inputs and
    outputs keep the caller's ordering.
    """
    orders = np.asarray(orders, dtype=float).ravel()
    m = orders.size
    if m == 0:
        raise InvalidParameterError("empty problem")
    if T <= 0:
        raise InvalidParameterError("final time must be positive")
    ells = np.array([ceil(a) for a in orders])
    if np.any(orders <= 0) or np.any(orders == ells):
        raise InvalidParameterError("orders must be positive non-integers")
    if np.any(ells != ells[0]):
        raise UnsupportedProblemError(
            "all orders must share the same ceil(alpha); mixed intervals are unsupported"
        )
    ell = int(ells[0])
    distinct: list[float] = []
    groups: dict[float, list[int]] = {}
    for idx, a in enumerate(orders):
        if a not in groups:
            distinct.append(float(a))
            groups[float(a)] = []
        groups[float(a)].append(idx)
    perm = np.array([idx for a in distinct for idx in groups[a]], dtype=int)
    block_sizes = tuple(len(groups[a]) for a in distinct)

    y0 = np.asarray(y0, dtype=float)
    if y0.ndim == 1:
        y0 = y0[None, :]
    if y0.shape != (ell, m):
        raise InvalidParameterError(
            f"initial data must have shape ({ell}, {m}), got {y0.shape}"
        )
    taylor_internal = y0[:, perm]

    f0 = np.asarray(field(0.0, y0[0]), dtype=float)
    if f0.shape != (m,) or not np.all(np.isfinite(f0)):
        raise InvalidParameterError("vector field is not finite on the initial data")

    return FdeProblem(
        alphas=np.array(distinct),
        block_sizes=block_sizes,
        ell=ell,
        taylor_data=taylor_internal,
        T=float(T),
        field=field,
        jacobian=jacobian,
        perm=perm,
        vectorized=vectorized,
        name=name,
        exact=exact,
        reference_endpoint=None
        if reference_endpoint is None
        else np.asarray(reference_endpoint, dtype=float),
    )


def taylor_term(problem: FdeProblem, i: int, t) -> np.ndarray:
    """Taylor prefix sum_{iota < ell} y_{i0}^iota t^iota / iota! of block i.

    Scalar t gives shape (m_i,);  an array t gives shape t.shape + (m_i,).
    """
    sl = problem.block_slices[i]
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape + (sl.stop - sl.start,))
    fact = 1.0
    for iota in range(problem.ell):
        if iota > 0:
            fact *= iota
        out += (t[..., None] ** iota) * problem.taylor_data[iota, sl] / fact
    return out


def exact_p3(t, alpha: float, beta: float):
    """Manufactured solution value s(t, alpha, beta) and forcing g(t, alpha, beta)
    of the multi-order test problem p3."""
    t = np.asarray(t, dtype=float)
    s = (1.0 - t**2) ** 2 + 4.0 * t**alpha + (2.0 - 3.0 * t**0.2) * t ** (alpha + beta)
    g = (
        24.0 * t ** (4.0 - alpha) / gamma(5.0 - alpha)
        - 4.0 * t ** (2.0 - alpha) / gamma(3.0 - alpha)
        - 3.0 * t ** (0.2 + beta) * gamma(1.2 + alpha + beta) / gamma(1.2 + beta)
        + 2.0 * t**beta * gamma(1.0 + alpha + beta) / gamma(1.0 + beta)
        + 4.0 * gamma(1.0 + alpha)
    )
    return s, g


def _p1() -> FdeProblem:
    a = np.array([[-92.0, -87.0], [-58.0, -63.0]]) / 5.0
    forcing = np.array([67.0, 83.0]) / 10.0

    def field(t, y):
        return y @ a.T - forcing

    def jac(t, y):
        return a

    return make_problem(
        [0.5, 0.5], field, T=100.0, y0=[5.0, 10.0], jacobian=jac,
        vectorized=True, name="p1",
    )


def _p2() -> FdeProblem:
    a = (
        np.array(
            [
                [41, 41, -38, 40, -2],
                [-79, 81, 2, 0, -2],
                [20, -60, 20, -20, -8],
                [-22, 58, -24, 20, -4],
                [1, 1, -2, -4, -2],
            ],
            dtype=float,
        )
        / 8.0
    )

    def field(t, y):
        return y @ a.T

    def jac(t, y):
        return a

    return make_problem(
        [0.5] * 5, field, T=20.0, y0=[1.0, 2.0, 3.0, 4.0, 5.0], jacobian=jac,
        vectorized=True, name="p2",
    )


def _p3() -> FdeProblem:
    a1, a2, beta = 0.2, 0.4, 0.1

    def field(t, y):
        y = np.asarray(y, dtype=float)
        s1, g1 = exact_p3(t, a1, beta)
        s2, g2 = exact_p3(t, a2, beta)
        f1 = s2**2 - y[..., 1] ** 2 + g1
        f2 = -(s1**2) + y[..., 0] ** 2 + g2
        return np.stack([f1, f2], axis=-1)

    def jac(t, y):
        return np.array([[0.0, -2.0 * y[1]], [2.0 * y[0], 0.0]])

    def exact(t):
        t = np.asarray(t, dtype=float)
        return np.stack([exact_p3(t, a1, beta)[0], exact_p3(t, a2, beta)[0]], axis=-1)

    return make_problem(
        [a1, a2], field, T=2.0, y0=[1.0, 1.0], jacobian=jac,
        vectorized=True, name="p3", exact=exact,
    )


def _brusselator(alpha1: float, alpha2: float, name: str, reference=None) -> FdeProblem:
    A, B = 1.0, 3.0

    def field(t, y):
        y = np.asarray(y, dtype=float)
        y1, y2 = y[..., 0], y[..., 1]
        return np.stack(
            [A - (B + 1.0) * y1 + y1**2 * y2, B * y1 - y1**2 * y2], axis=-1
        )

    def jac(t, y):
        y1, y2 = y
        return np.array(
            [[-(B + 1.0) + 2.0 * y1 * y2, y1**2], [B - 2.0 * y1 * y2, -(y1**2)]]
        )

    return make_problem(
        [alpha1, alpha2], field, T=100.0, y0=[1.2, 2.8], jacobian=jac,
        vectorized=True, name=name, reference_endpoint=reference,
    )


def _p6() -> FdeProblem:
    r1, r2, r3 = 5.0, 1.0, 0.1
    a11, a12, a13 = 0.01, 1.0, 35.0
    a21, a22, a23 = 1.0, 0.2, 1.0
    a31, a32, a33 = 0.1, 1.0, 0.3
    beta = 0.01

    def field(t, y):
        y = np.asarray(y, dtype=float)
        y1, y2, y3 = y[..., 0], y[..., 1], y[..., 2]
        sat = 1.0 + beta * y2
        return np.stack(
            [
                r1 * y1 - a11 * y1**2 - a12 * y1 * y2 - a13 * y1 * y3,
                a21 * y1 * y2 - a22 * y2**2 - a23 * y2 * y3 / sat - r2 * y2,
                a31 * y1 * y3 + a32 * y2 * y3 / sat - a33 * y3**2 - r3 * y3,
            ],
            axis=-1,
        )

    def jac(t, y):
        y1, y2, y3 = y
        sat = 1.0 + beta * y2
        return np.array(
            [
                [r1 - 2 * a11 * y1 - a12 * y2 - a13 * y3, -a12 * y1, -a13 * y1],
                [a21 * y2, a21 * y1 - 2 * a22 * y2 - a23 * y3 / sat**2 - r2, -a23 * y2 / sat],
                [a31 * y3, a32 * y3 / sat**2, a31 * y1 + a32 * y2 / sat - 2 * a33 * y3 - r3],
            ]
        )

    return make_problem(
        [0.99, 0.8, 0.8], field, T=500.0, y0=[0.7, 0.2, 0.1], jacobian=jac,
        vectorized=True, name="p6",
    )


_P4_REFERENCE = np.array([1.706502172199, 1.940414058005])

_REGISTRY: dict[str, Callable[[], FdeProblem]] = {
    "p1": _p1,
    "p2": _p2,
    "p3": _p3,
    "p4": lambda: _brusselator(0.8, 0.7, "p4", reference=_P4_REFERENCE),
    "p5a": lambda: _brusselator(0.7, 0.7, "p5a"),
    "p5b": lambda: _brusselator(0.7, 0.7 + 1e-4, "p5b"),
    "p6": _p6,
}

PROBLEM_NAMES = tuple(sorted(_REGISTRY))


def registry(name: str) -> FdeProblem:
    """Built-in test problems: p1, p2, p3, p4, p5a, p5b, p6."""
    try:
        factory = _REGISTRY[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown problem {name!r}; available: {', '.join(PROBLEM_NAMES)}"
        ) from None
    return factory()
