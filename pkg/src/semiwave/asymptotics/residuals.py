"""Residuals of the determining equations for the phase fields.

A WkbFields object is a valid input to the sech-envelope construction
exactly when three residuals vanish on the working domain:

* the complex eikonal residual, a single Hamilton-Jacobi equation for
  S + i sigma with the complex square of the momentum covector;
* the pair of transport residuals fixing the corrections S1 and sigma1;
* the envelope first integral, which the sech profile solves identically.

All three are evaluated pointwise on a grid so tests can assert decay or
detect corrupted field data.
"""

from __future__ import annotations

import numpy as np

from semiwave.core import Grid, PhysParams, PotentialSpec, eval_potential
from semiwave.asymptotics.fields import WkbFields, _sech


def _dot(a, b):
    return sum(ai * bi for ai, bi in zip(a, b))


def hj_residual(w: WkbFields, grid: Grid, t: float, pot: PotentialSpec,
                params: PhysParams) -> np.ndarray:
    """Complex eikonal residual

        (S + i sigma)_t + V + (1/2m) sum_j (d_j S + i d_j sigma - A_j)^2

    sampled on the grid.  The square is the complex square, not a squared
    modulus; its imaginary part couples the two real phases.
    """
    xs = grid.mesh()
    V, A = eval_potential(pot, grid, t)
    dS = w.grad_S(xs, t)
    dsig = w.grad_sigma(xs, t)
    kin = sum((dS[j] + 1j * dsig[j] - A[j]) ** 2 for j in range(grid.dim))
    return (w.dt_S(xs, t) + 1j * w.dt_sigma(xs, t)) + V \
        + kin / (2.0 * params.mass)


def transport_residuals(w: WkbFields, grid: Grid, t: float, pot: PotentialSpec,
                        params: PhysParams) -> tuple[np.ndarray, np.ndarray]:
    """Left-hand sides of the two real transport equations for S1, sigma1.

    The first reads

        S1_t + (1/m) <dS - A, dS1> - (1/m) <dsigma, dsigma1>
             + (1/2m) lap sigma + (1/2m) <dsigma, d log g>

    and the second

        sigma1_t + (1/m) <dS - A, dsigma1> + (1/m) <dsigma, dS1>
             - (1/2) [ (lap S - div A)/m + (g_t + (1/m) <dS - A, dg>)/g ]

    with g = (dsigma)^2.  Both vanish identically on the shipped families.
    """
    xs = grid.mesh()
    m = params.mass
    _, A = eval_potential(pot, grid, t)
    divA = pot.vector.divergence(xs, t)

    dS = w.grad_S(xs, t)
    dsig = w.grad_sigma(xs, t)
    dS1 = w.grad_S1(xs, t)
    dsig1 = w.grad_sigma1(xs, t)
    flow = tuple(dS[j] - A[j] for j in range(grid.dim))

    g = w.grad_sigma_sq(xs, t)
    if np.any(g <= 0):
        raise ValueError("degenerate envelope: (grad sigma)^2 must stay positive")
    dg = w.grad_of_grad_sigma_sq(xs, t)

    eq_a = w.dt_S1(xs, t) + _dot(flow, dS1) / m - _dot(dsig, dsig1) / m \
        + w.lap_sigma(xs, t) / (2.0 * m) + _dot(dsig, dg) / (2.0 * m * g)

    eq_b = w.dt_sigma1(xs, t) + _dot(flow, dsig1) / m + _dot(dsig, dS1) / m \
        - 0.5 * ((w.lap_S(xs, t) - divA) / m
                 + (w.dt_grad_sigma_sq(xs, t) + _dot(flow, dg) / m) / g)

    return eq_a, eq_b


def first_integral_residual(w: WkbFields, grid: Grid, t: float,
                            params: PhysParams,
                            rho_factor: float = 1.0) -> np.ndarray:
    """Residual of the envelope first integral

        |d rho / d theta| - sqrt(2 m r / g) * sqrt(b^2 - rho^2) * rho

    with b^2 = g/(2 m kappa^2).  The derivative is taken analytically from
    the sech profile; the absolute value selects the branch valid on both
    flanks of the peak.  rho_factor scales the profile to exercise the
    corruption detector: factors below one give a nonzero residual, factors
    above one push rho past the bound b and raise.
    """
    if not params.r > 0:
        raise ValueError("first integral needs focusing nonlinearity r > 0")
    xs = grid.mesh()
    m = params.mass
    g = w.grad_sigma_sq(xs, t)
    if np.any(g <= 0):
        raise ValueError("degenerate envelope: (grad sigma)^2 must stay positive")
    b = np.sqrt(g / (2.0 * m * params.r))
    theta = w.theta(xs, t, params.hbar)
    sech = _sech(theta)
    rho = rho_factor * b * sech
    if np.any(np.abs(rho) > b):
        raise ValueError(
            "profile exceeds the envelope bound; fields are inconsistent"
        )
    drho_dtheta = -rho_factor * b * sech * np.tanh(theta)
    return np.abs(drho_dtheta) \
        - np.sqrt(2.0 * m * params.r / g) * np.sqrt(b * b - rho * rho) * rho
