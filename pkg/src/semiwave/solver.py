"""Split-step spectral propagator and the full-equation residual.

The propagator integrates

    i hbar psi_t = (1/2m) (-i hbar grad - A)^2 psi + V psi - 2 r |psi|^2 psi

on a periodic grid with Strang splitting: a half step of the local
(potential plus nonlinear) phase, a full kinetic step in Fourier space,
and a second local half step with the modulus refreshed.  Every factor is
a pure phase, so each step preserves the norm to rounding.

The residual evaluator applies the full operator to a sampled field with
the time derivative supplied either analytically or as a three-snapshot
central difference.  It serves as the independent check that asymptotic
constructions satisfy the equation to the advertised order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    ComplexField,
    Grid,
    PhysParams,
    PotentialSpec,
    TIME_ATOL,
    UniformVector,
    ZeroVector,
    norm_squared,
)

# fraction of a radian the advisory guard allows the fastest kinetic phase
# to turn per step before warning
_PHASE_GUARD = 0.1


@dataclass(frozen=True)
class SolverConfig:
    """Run settings for the propagator.

    dt is the step, t_end the final time (a shortened last step lands on
    it exactly), snapshot_every the snapshot stride in steps.
    """

    dt: float
    t_end: float
    snapshot_every: int = 1
    params: PhysParams = None
    pot: PotentialSpec = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end}")
        if int(self.snapshot_every) != self.snapshot_every or self.snapshot_every < 1:
            raise ValueError(
                f"snapshot_every must be a positive integer, got {self.snapshot_every}"
            )
        if self.params is None:
            raise ValueError("SolverConfig needs params")
        if self.pot is None:
            object.__setattr__(self, "pot", PotentialSpec())

    def advisory_dt_limit(self, grid: Grid) -> float:
        """Step below which the fastest kinetic phase turns less than
        _PHASE_GUARD radians per step.  Exceeding it is legal (the factors
        stay unitary) but accuracy rests on the smoothness of the state,
        so evolve() warns."""
        kmax = max(np.pi / h for h in grid.spacing)
        return _PHASE_GUARD * self.params.mass / (self.params.hbar * kmax * kmax)


@dataclass
class EvolutionRecord:
    """Snapshots plus norm bookkeeping from one run."""

    snapshots: list[ComplexField]
    norms: list[float]
    mass_drift: float

    @property
    def times(self) -> list[float]:
        return [s.time for s in self.snapshots]

    @property
    def final(self) -> ComplexField:
        return self.snapshots[-1]


def _uniform_components(pot: PotentialSpec, grid: Grid, t: float) -> tuple[float, ...]:
    """Spatially constant vector-potential components at time t.

    Anything that varies across the grid is rejected: the kinetic factor
    diagonalises in Fourier space only for uniform A.
    """
    vec = pot.vector
    if isinstance(vec, ZeroVector):
        return (0.0,) * grid.dim
    if isinstance(vec, UniformVector):
        comps = vec.components(t)
        if len(comps) != grid.dim:
            raise ValueError("vector potential dimension mismatch")
        return comps
    sampled = vec.value(grid.mesh(), t)
    out = []
    for comp in sampled:
        arr = np.asarray(comp, dtype=float)
        lo, hi = float(np.min(arr)), float(np.max(arr))
        if hi - lo > 1e-12 * (1.0 + max(abs(lo), abs(hi))):
            raise ValueError(
                "propagation supports only spatially uniform vector "
                "potentials; supply A as a function of time alone"
            )
        out.append(0.5 * (lo + hi))
    return tuple(out)


def _kinetic_phase(grid: Grid, a: tuple[float, ...], dt: float, params: PhysParams) -> np.ndarray:
    """Phase angle dt * sum_j (hbar k_j - A_j)^2 / (2 m hbar), fft layout."""
    hbar, m = params.hbar, params.mass
    total = 0.0
    for ax, k in enumerate(grid.wavenumbers()):
        shape = [1] * grid.dim
        shape[ax] = len(k)
        total = total + (hbar * k.reshape(shape) - a[ax]) ** 2
    return dt * total / (2.0 * m * hbar)


def _local_phase(values: np.ndarray, grid: Grid, t: float, dt_half: float,
                 config: SolverConfig) -> np.ndarray:
    """Phase angle of one local half step, potential sampled at time t."""
    v = np.asarray(config.pot.scalar.value(grid.mesh(), t), dtype=float)
    dens = np.abs(values) ** 2
    return dt_half * (v - 2.0 * config.params.r * dens) / config.params.hbar


def _step_values(vals: np.ndarray, grid: Grid, t: float, dt: float,
                 config: SolverConfig) -> np.ndarray:
    """One Strang step on raw samples, from t to t + dt."""
    vals = vals * np.exp(-1j * _local_phase(vals, grid, t + 0.25 * dt, 0.5 * dt, config))

    a = _uniform_components(config.pot, grid, t + 0.5 * dt)
    phase_k = _kinetic_phase(grid, a, dt, config.params)
    vals = np.fft.ifftn(np.exp(-1j * phase_k) * np.fft.fftn(vals))

    return vals * np.exp(-1j * _local_phase(vals, grid, t + 0.75 * dt, 0.5 * dt, config))


def split_step(psi: ComplexField, dt: float, config: SolverConfig,
               t: float | None = None) -> ComplexField:
    """One Strang step from t to t + dt.

    The local factor is applied for dt/2 with V sampled at the midpoint of
    each half interval; the kinetic factor acts for the full dt with A
    sampled at t + dt/2.
    """
    if t is None:
        t = psi.time
    vals = _step_values(np.asarray(psi.values, dtype=np.complex128), psi.grid, t, dt, config)
    return ComplexField(psi.grid, vals, time=t + dt, hbar=config.params.hbar)


def evolve(psi0: ComplexField, config: SolverConfig) -> EvolutionRecord:
    """Propagate psi0 to t_end, recording snapshots and norms.

    Snapshots are taken at the start, every snapshot_every steps, and at
    the final time.  A non-finite amplitude aborts with the step index.
    """
    grid = psi0.grid
    limit = config.advisory_dt_limit(grid)
    if config.dt > limit:
        warnings.warn(
            f"dt={config.dt:g} exceeds the advisory kinetic-phase guard "
            f"{limit:g}; results remain unitary but accuracy rests on the "
            "smoothness of the state",
            stacklevel=2,
        )

    hbar = config.params.hbar
    t0 = psi0.time
    vals = np.array(psi0.values, dtype=np.complex128)

    snapshots = [ComplexField(grid, vals, time=t0, hbar=hbar)]
    norms = [norm_squared(snapshots[0])]
    n0 = norms[0]
    drift = 0.0

    remaining = config.t_end - t0
    n_full = int(np.floor(remaining / config.dt + 1e-12))
    tail = remaining - n_full * config.dt
    if tail < 1e-12 * config.dt:
        tail = 0.0
    n_steps = n_full + (1 if tail > 0.0 else 0)

    t = t0
    for step in range(1, n_steps + 1):
        h = config.dt if step <= n_full else tail
        vals = _step_values(vals, grid, t, h, config)
        t = t0 + (step * config.dt if step <= n_full else remaining)
        if not np.all(np.isfinite(vals)):
            raise FloatingPointError(
                f"non-finite amplitude at step {step} (t={t:.6g}); aborting"
            )
        state = ComplexField(grid, vals, time=t, hbar=hbar)
        nrm = norm_squared(state)
        drift = max(drift, abs(nrm - n0) / n0)
        if (step % config.snapshot_every == 0) or step == n_steps:
            snapshots.append(state)
            norms.append(nrm)

    return EvolutionRecord(snapshots=snapshots, norms=norms, mass_drift=drift)


# ---------------------------------------------------------------------------
# residual of the full equation


def _kinetic_apply(values: np.ndarray, grid: Grid, pot: PotentialSpec,
                   t: float, params: PhysParams) -> np.ndarray:
    """(-i hbar grad - A)^2 applied spectrally, one axis pass at a time.

    Two passes keep the operator exact for spatially varying A as well,
    which the residual evaluator supports even though propagation does not.
    """
    hbar = params.hbar
    xs = grid.mesh()
    a = tuple(np.asarray(c, dtype=float) for c in pot.vector.value(xs, t))
    out = np.zeros_like(values)
    for ax, k in enumerate(grid.wavenumbers()):
        shape = [1] * grid.dim
        shape[ax] = len(k)
        ik = 1j * k.reshape(shape)
        chi = -1j * hbar * np.fft.ifft(ik * np.fft.fft(values, axis=ax), axis=ax) \
            - a[ax] * values
        out = out + (-1j) * hbar * np.fft.ifft(ik * np.fft.fft(chi, axis=ax), axis=ax) \
            - a[ax] * chi
    return out


def _resolve_series(psi_series) -> tuple[ComplexField, np.ndarray]:
    """Accept (psi, dpsi_dt) or (previous, current, next) and return the
    current field with its time-derivative samples."""
    fields = tuple(psi_series)
    if len(fields) == 2:
        psi, dpsi = fields
        if psi.grid != dpsi.grid:
            raise ValueError("field and its time derivative live on different grids")
        if abs(psi.time - dpsi.time) > TIME_ATOL * (1.0 + abs(psi.time)):
            raise ValueError("field and its time derivative are taken at different times")
        return psi, np.asarray(dpsi.values, dtype=np.complex128)
    if len(fields) == 3:
        prev, mid, nxt = fields
        if not (prev.grid == mid.grid == nxt.grid):
            raise ValueError("stencil fields live on different grids")
        dt_lo = mid.time - prev.time
        dt_hi = nxt.time - mid.time
        if dt_lo <= 0 or dt_hi <= 0:
            raise ValueError("stencil times must be strictly increasing")
        if abs(dt_hi - dt_lo) > TIME_ATOL * (1.0 + abs(dt_lo)):
            raise ValueError(
                f"stencil times are not equally spaced: {dt_lo} vs {dt_hi}"
            )
        deriv = (nxt.values - prev.values) / (dt_lo + dt_hi)
        return mid, deriv
    raise ValueError(
        "psi_series must be (field, time derivative) or three consecutive fields"
    )


def apply_nlse_operator(psi_series, pot: PotentialSpec, params: PhysParams) -> ComplexField:
    """Residual of the full equation,

        -i hbar psi_t + (1/2m)(-i hbar grad - A)^2 psi + V psi - 2r|psi|^2 psi,

    at the time of the supplied field.  psi_series is either the pair
    (field, analytic time derivative) or three equally spaced snapshots
    for a central difference.
    """
    psi, dpsi = _resolve_series(psi_series)
    grid, t = psi.grid, psi.time
    vals = psi.values
    v = np.asarray(pot.scalar.value(grid.mesh(), t), dtype=float)
    res = (
        -1j * params.hbar * dpsi
        + _kinetic_apply(vals, grid, pot, t, params) / (2.0 * params.mass)
        + v * vals
        - 2.0 * params.r * np.abs(vals) ** 2 * vals
    )
    return ComplexField(grid, res, time=t, hbar=params.hbar)


def relative_residual(residual: ComplexField, psi: ComplexField) -> float:
    """L2 norm of the residual divided by the L2 norm of the field."""
    return float(np.sqrt(norm_squared(residual) / norm_squared(psi)))
