"""Classical centroid dynamics.

A concentrated wave packet's centre moves along the characteristics of the
classical Hamiltonian H = (p - A(x,t))^2 / (2m) + V(x,t).  The
self-attraction strength never enters these equations, which is why the
functions below take the mass alone and not the full parameter bundle:
there is no way to pass the nonlinearity in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from semiwave.core import PotentialSpec


@dataclass(frozen=True)
class PhasePoint:
    """Point (x, p) of phase space at a time t; 1d or 2d."""

    x: tuple[float, ...]
    p: tuple[float, ...]
    t: float = 0.0

    def __post_init__(self):
        if len(self.x) != len(self.p):
            raise ValueError("position and momentum must have equal dimension")
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))

    @property
    def dim(self) -> int:
        return len(self.x)


@dataclass
class Trajectory:
    """Uniform-step solution of the characteristic system."""

    points: list[PhasePoint]
    dt: float

    def __post_init__(self):
        ts = self.times()
        if np.any(np.diff(ts) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    def times(self) -> np.ndarray:
        return np.array([pt.t for pt in self.points])

    def positions(self) -> np.ndarray:
        return np.array([pt.x for pt in self.points])

    def momenta(self) -> np.ndarray:
        return np.array([pt.p for pt in self.points])


def _as_arrays(point: PhasePoint):
    xs = tuple(np.asarray([v], dtype=float) for v in point.x)
    return xs


def classical_hamiltonian(point: PhasePoint, pot: PotentialSpec, mass: float) -> float:
    """H(x, p, t) = (p - A)^2/(2m) + V."""
    xs = _as_arrays(point)
    v = float(np.asarray(pot.scalar.value(xs, point.t)).ravel()[0])
    a = [float(np.asarray(c).ravel()[0]) for c in pot.vector.value(xs, point.t)]
    kin = sum((pj - aj) ** 2 for pj, aj in zip(point.p, a)) / (2.0 * mass)
    return kin + v


def hamilton_rhs(point: PhasePoint, pot: PotentialSpec, mass: float):
    """Right-hand side (dx/dt, dp/dt) of the characteristic system.

    dx_i/dt = (p_i - A_i)/m
    dp_i/dt = -dV/dx_i + sum_j (dA_j/dx_i) (p_j - A_j)/m
    """
    xs = _as_arrays(point)
    t = point.t
    a = [float(np.asarray(c).ravel()[0]) for c in pot.vector.value(xs, t)]
    gradv = [float(np.asarray(c).ravel()[0]) for c in pot.scalar.gradient(xs, t)]
    jac = pot.vector.jacobian(xs, t)
    vel = tuple((pj - aj) / mass for pj, aj in zip(point.p, a))
    dp = []
    for i in range(point.dim):
        force = -gradv[i]
        for j in range(point.dim):
            force += float(np.asarray(jac[i][j]).ravel()[0]) * (point.p[j] - a[j]) / mass
        dp.append(force)
    return vel, tuple(dp)


def _rk4_step(point: PhasePoint, dt: float, pot: PotentialSpec, mass: float) -> PhasePoint:
    x0 = np.array(point.x)
    p0 = np.array(point.p)
    t0 = point.t

    def rhs(x, p, t):
        vel, dp = hamilton_rhs(PhasePoint(tuple(x), tuple(p), t), pot, mass)
        return np.array(vel), np.array(dp)

    k1x, k1p = rhs(x0, p0, t0)
    k2x, k2p = rhs(x0 + 0.5 * dt * k1x, p0 + 0.5 * dt * k1p, t0 + 0.5 * dt)
    k3x, k3p = rhs(x0 + 0.5 * dt * k2x, p0 + 0.5 * dt * k2p, t0 + 0.5 * dt)
    k4x, k4p = rhs(x0 + dt * k3x, p0 + dt * k3p, t0 + dt)
    x1 = x0 + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
    p1 = p0 + dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
    return PhasePoint(tuple(x1), tuple(p1), t0 + dt)


def integrate_bicharacteristic(
    z0: PhasePoint, t1: float, dt: float, pot: PotentialSpec, mass: float
) -> Trajectory:
    """Integrate the characteristic system from z0.t to (approximately) t1
    with the classical fourth-order Runge-Kutta scheme at a fixed step.

    The number of steps is round((t1 - z0.t)/dt), so the final time lands
    within one step of t1 and the step stays exactly uniform.
    """
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    span = t1 - z0.t
    if span < 0:
        raise ValueError("t1 must not precede the initial time")
    nsteps = int(round(span / dt))
    pts = [z0]
    cur = z0
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(nsteps):
            cur = _rk4_step(cur, dt, pot, mass)
            if not all(np.isfinite(cur.x)) or not all(np.isfinite(cur.p)):
                raise RuntimeError(f"trajectory blew up at step {step + 1}")
            pts.append(cur)
    return Trajectory(points=pts, dt=dt)
