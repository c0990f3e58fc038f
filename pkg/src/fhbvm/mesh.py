"""Graded, uniform, and mixed step sequences on [0, T].

The mixed mesh spends mu geometrically growing steps on [0, rho*h] and
uniform steps of size h = T/M, M = N - mu + rho, on the rest.  mu = rho = 1
gives the uniform mesh; mu = N gives the pure graded mesh.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

__all__ = ["Mesh", "build_mesh"]


@dataclass(frozen=True)
class Mesh:
    """Step sequence t_0 = 0 < t_1 < ... < t_N = T."""

    T: float
    N: int
    mu: int
    rho_mesh: int
    r: float
    h_uniform: float
    points: np.ndarray  # (N+1,)
    steps: np.ndarray   # (N,)


def build_mesh(T: float, N: int, mu: int = 1, rho_mesh: int = 1) -> Mesh:
    """Build the mixed mesh for the given total step count N.

    The grading ratio is r = max(2, rho)/(max(2, rho) - 1) and the first step
    h_1 = rho*h*(r-1)/(r^mu - 1); the final point is snapped to T exactly.
    """
    if T <= 0:
        raise InvalidParameterError(f"final time must be positive, got {T}")
    if N < 1 or mu < 1 or mu > N or rho_mesh < 1:
        raise InvalidParameterError(
            f"mesh parameters out of range: N={N}, mu={mu}, rho={rho_mesh}"
        )
    big = float(max(2, rho_mesh))
    r = big / (big - 1.0)
    M = N - mu + rho_mesh
    h = T / M
    # r^mu - 1 in log space to detect grading underflow before it overflows
    log_rmu = mu * np.log(r)
    if log_rmu > 700.0:
        h1 = 0.0
    else:
        h1 = rho_mesh * h * (r - 1.0) / (np.expm1(log_rmu))
    if h1 < 1e-300:
        raise InvalidParameterError(
            f"graded first step underflows: mu={mu}, rho={rho_mesh}"
        )
    steps = np.empty(N)
    steps[:mu] = h1 * r ** np.arange(mu)
    steps[mu:] = h
    points = np.concatenate(([0.0], np.cumsum(steps)))
    points[N] = T
    steps[N - 1] = T - points[N - 1]
    return Mesh(
        T=float(T),
        N=int(N),
        mu=int(mu),
        rho_mesh=int(rho_mesh),
        r=r,
        h_uniform=h,
        points=points,
        steps=steps,
    )
