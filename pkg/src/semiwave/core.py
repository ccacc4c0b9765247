"""Grids, fields, physical parameters and basic spectral operations.

Everything downstream works on periodic uniform grids in one or two
dimensions.  Quadrature is the plain Riemann sum times the cell volume,
which is spectrally accurate for smooth periodic integrands, and all
derivatives are taken in Fourier space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

TIME_ATOL = 1e-9


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid.

    The coordinate of index j along an axis is lo + j*spacing; the right
    endpoint hi is excluded (it is identified with lo by periodicity).
    """

    dim: int
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    n: tuple[int, ...]

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"grid dim must be 1 or 2, got {self.dim}")
        for name, tup in (("lo", self.lo), ("hi", self.hi), ("n", self.n)):
            if len(tup) != self.dim:
                raise ValueError(f"grid {name} must have length dim={self.dim}")
        for a, b in zip(self.lo, self.hi):
            if not b > a:
                raise ValueError(f"grid needs hi > lo, got [{a}, {b})")
        for m in self.n:
            if m < 16 or not _is_power_of_two(m):
                raise ValueError(f"grid size must be a power of two >= 16, got {m}")

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple((b - a) / m for a, b, m in zip(self.lo, self.hi, self.n))

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.lo, self.hi))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.n

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axes(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays, one per axis (right endpoint excluded)."""
        return tuple(
            a + h * np.arange(m)
            for a, h, m in zip(self.lo, self.spacing, self.n)
        )

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Full coordinate mesh (ij indexing); a 1-tuple in one dimension."""
        if self.dim == 1:
            return (self.axes()[0],)
        return tuple(np.meshgrid(*self.axes(), indexing="ij"))

    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        """Angular wavenumbers 2*pi*fftfreq per axis, fft ordering."""
        return tuple(
            2.0 * np.pi * np.fft.fftfreq(m, d=h)
            for m, h in zip(self.n, self.spacing)
        )


def make_uniform_grid(dim: int, lo, hi, n) -> Grid:
    """Build a Grid, broadcasting scalar lo/hi/n over the axes."""
    def tup(v, cast):
        if np.isscalar(v):
            return (cast(v),) * dim
        return tuple(cast(x) for x in v)
    return Grid(dim=dim, lo=tup(lo, float), hi=tup(hi, float), n=tup(n, int))


def make_axis_offset_grid(dim: int, half_width: float, n) -> Grid:
    """Grid for radially symmetric fields: shifted half a cell so that no
    sample point lands on the coordinate origin, while reflection about
    the origin still maps the sample set onto itself."""
    g0 = make_uniform_grid(dim, -half_width, half_width, n)
    h = g0.spacing
    return Grid(
        dim=dim,
        lo=tuple(-half_width + hj / 2 for hj in h),
        hi=tuple(half_width + hj / 2 for hj in h),
        n=g0.n,
    )


@dataclass(frozen=True)
class PhysParams:
    """Physical constants of one run.

    hbar is the small (semiclassical) parameter, mass the particle mass and
    r the self-attraction coefficient.  When the construction parameter
    kappa is supplied, r is tied to it by r = kappa**2 exactly; families
    that build envelopes require r > 0.
    """

    hbar: float
    mass: float
    r: float = 0.0
    kappa: float | None = None

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.kappa is not None:
            if self.r != self.kappa * self.kappa:
                raise ValueError(
                    "inconsistent parameters: r must equal kappa**2 "
                    f"(r={self.r}, kappa**2={self.kappa * self.kappa})"
                )
            if not self.r > 0:
                raise ValueError("kappa must be nonzero")

    @classmethod
    def from_kappa(cls, hbar: float, mass: float, kappa: float) -> "PhysParams":
        return cls(hbar=hbar, mass=mass, r=kappa * kappa, kappa=kappa)

    def with_hbar(self, hbar: float) -> "PhysParams":
        return PhysParams(hbar=hbar, mass=self.mass, r=self.r, kappa=self.kappa)

    def with_r(self, r: float) -> "PhysParams":
        """Same constants with the nonlinearity coefficient replaced (the
        kappa tie is dropped unless it still holds)."""
        kappa = self.kappa if (self.kappa is not None and r == self.kappa**2) else None
        return PhysParams(hbar=self.hbar, mass=self.mass, r=r, kappa=kappa)


@dataclass
class ComplexField:
    """Complex scalar field sampled on a grid at one instant."""

    grid: Grid
    values: np.ndarray
    time: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != self.grid.shape:
            raise ValueError(
                f"field shape {vals.shape} does not match grid shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(vals.view(np.float64))):
            raise ValueError("field values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def with_values(self, values: np.ndarray, time: float | None = None) -> "ComplexField":
        return ComplexField(
            grid=self.grid,
            values=values,
            time=self.time if time is None else time,
            hbar=self.hbar,
        )

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def _check_compatible(a: ComplexField, b: ComplexField) -> None:
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")
    if abs(a.time - b.time) > TIME_ATOL * (1.0 + abs(a.time)):
        raise ValueError(f"fields taken at different times: {a.time} vs {b.time}")


def inner_product(a: ComplexField, b: ComplexField) -> complex:
    """L2 inner product <a|b> = sum conj(a)*b * cell_volume (conjugate-linear
    in the first argument)."""
    _check_compatible(a, b)
    return complex(np.sum(np.conj(a.values) * b.values) * a.grid.cell_volume)


def norm_squared(psi: ComplexField) -> float:
    """Squared L2 norm; refuses an identically zero field."""
    val = float(np.real(inner_product(psi, psi)))
    if val == 0.0:
        raise ValueError("field is identically zero; not a usable state")
    return val


def apply_momentum(psi: ComplexField, axis: int = 0) -> ComplexField:
    """Apply the momentum operator -i*hbar*d/dx_axis in Fourier space."""
    if not 0 <= axis < psi.grid.dim:
        raise ValueError(f"axis {axis} out of range for dim {psi.grid.dim}")
    k = psi.grid.wavenumbers()[axis]
    shape = [1] * psi.grid.dim
    shape[axis] = len(k)
    mult = psi.hbar * k.reshape(shape)
    out = np.fft.ifft(mult * np.fft.fft(psi.values, axis=axis), axis=axis)
    return psi.with_values(out)


def spectral_derivative(values: np.ndarray, grid: Grid, axis: int = 0, order: int = 1) -> np.ndarray:
    """d^order/dx_axis^order of a periodic sample array, via FFT."""
    k = grid.wavenumbers()[axis]
    shape = [1] * grid.dim
    shape[axis] = len(k)
    mult = (1j * k.reshape(shape)) ** order
    return np.fft.ifft(mult * np.fft.fft(values, axis=axis), axis=axis)


# ---------------------------------------------------------------------------
# Potential specifications
#
# The scalar part V(x, t) and the vector part A(x, t) of the external field
# are given as small spec objects.  Built-in forms carry analytic gradients;
# the expression forms fall back on central differences.

_FD_STEP = 1e-6


def _central_diff(f: Callable, x: Sequence[np.ndarray], t: float, axis: int) -> np.ndarray:
    xs = [np.asarray(c, dtype=float) for c in x]
    h = _FD_STEP * (1.0 + np.abs(xs[axis]))
    xp = list(xs)
    xm = list(xs)
    xp[axis] = xs[axis] + h
    xm[axis] = xs[axis] - h
    return (f(tuple(xp), t) - f(tuple(xm), t)) / (2.0 * h)


class ScalarPotential:
    """Base scalar potential; subclasses provide value() and gradient()."""

    def value(self, xs: tuple[np.ndarray, ...], t: float) -> np.ndarray:
        raise NotImplementedError

    def gradient(self, xs: tuple[np.ndarray, ...], t: float) -> tuple[np.ndarray, ...]:
        return tuple(_central_diff(self.value, xs, t, ax) for ax in range(len(xs)))


@dataclass
class ZeroScalar(ScalarPotential):
    def value(self, xs, t):
        return np.zeros(np.broadcast(*xs).shape) if len(xs) > 1 else np.zeros_like(xs[0], dtype=float)

    def gradient(self, xs, t):
        return tuple(np.zeros_like(np.asarray(c, dtype=float)) for c in xs)


@dataclass
class HarmonicScalar(ScalarPotential):
    """V = (m/2) * sum_j omega_j^2 (x_j - c_j)^2.

    The mass enters the conventional normalisation, so the spec carries it.
    """

    omega: tuple[float, ...]
    center: tuple[float, ...]
    mass: float = 1.0

    def __post_init__(self):
        self.omega = tuple(float(w) for w in np.atleast_1d(self.omega))
        self.center = tuple(float(c) for c in np.atleast_1d(self.center))
        if len(self.omega) != len(self.center):
            raise ValueError("omega and center must have equal length")

    def value(self, xs, t):
        out = 0.0
        for x, w, c in zip(xs, self.omega, self.center):
            out = out + 0.5 * self.mass * w * w * (np.asarray(x, dtype=float) - c) ** 2
        return out

    def gradient(self, xs, t):
        return tuple(
            self.mass * w * w * (np.asarray(x, dtype=float) - c)
            for x, w, c in zip(xs, self.omega, self.center)
        )


@dataclass
class SeparatedScalar(ScalarPotential):
    """V = v0(t) + v1(x) for one-dimensional separated families.

    v1_prime is optional; when absent the gradient falls back on central
    differences of v1.
    """

    v0: Callable[[float], float] | None = None
    v1: Callable[[np.ndarray], np.ndarray] | None = None
    v1_prime: Callable[[np.ndarray], np.ndarray] | None = None

    def value(self, xs, t):
        x = np.asarray(xs[0], dtype=float)
        out = np.zeros_like(x)
        if self.v0 is not None:
            out = out + float(self.v0(t))
        if self.v1 is not None:
            out = out + self.v1(x)
        return out

    def gradient(self, xs, t):
        x = np.asarray(xs[0], dtype=float)
        if self.v1 is None:
            return (np.zeros_like(x),)
        if self.v1_prime is not None:
            return (np.asarray(self.v1_prime(x), dtype=float),)
        h = _FD_STEP * (1.0 + np.abs(x))
        return ((np.asarray(self.v1(x + h)) - np.asarray(self.v1(x - h))) / (2.0 * h),)


@dataclass
class ExpressionScalar(ScalarPotential):
    """Arbitrary closed-form V(xs, t) given as a callable; gradient by
    central differences unless an analytic one is supplied."""

    fn: Callable
    grad: Callable | None = None

    def value(self, xs, t):
        return np.asarray(self.fn(xs, t), dtype=float)

    def gradient(self, xs, t):
        if self.grad is not None:
            return tuple(np.asarray(g, dtype=float) for g in self.grad(xs, t))
        return super().gradient(xs, t)


@dataclass
class TabulatedScalar(ScalarPotential):
    """V sampled on the run grid at a list of times; linear interpolation
    in t, errors outside the tabulated range.  No gradients: use one of
    the closed-form specs when derivatives are required."""

    times: np.ndarray
    samples: np.ndarray  # shape (nt, *grid.shape)
    grid: Grid | None = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.samples = np.asarray(self.samples, dtype=float)
        if self.times.ndim != 1 or len(self.times) != self.samples.shape[0]:
            raise ValueError("tabulated potential needs one sample block per time")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("tabulated times must be strictly increasing")

    def value(self, xs, t):
        ts = self.times
        if t < ts[0] - TIME_ATOL or t > ts[-1] + TIME_ATOL:
            raise ValueError(
                f"time {t} outside tabulated range [{ts[0]}, {ts[-1]}]"
            )
        t = min(max(t, ts[0]), ts[-1])
        j = int(np.searchsorted(ts, t, side="right") - 1)
        j = min(j, len(ts) - 2)
        w = (t - ts[j]) / (ts[j + 1] - ts[j])
        return (1.0 - w) * self.samples[j] + w * self.samples[j + 1]

    def gradient(self, xs, t):
        raise ValueError(
            "tabulated potentials carry no gradient; use a closed-form spec "
            "for trajectory work"
        )


class VectorPotential:
    """Base vector potential A(x, t)."""

    def value(self, xs: tuple[np.ndarray, ...], t: float) -> tuple[np.ndarray, ...]:
        raise NotImplementedError

    def divergence(self, xs, t) -> np.ndarray:
        comps = self.value(xs, t)
        out = np.zeros_like(np.asarray(comps[0], dtype=float))
        for ax in range(len(xs)):
            out = out + _central_diff(lambda q, s, ax=ax: self.value(q, s)[ax], xs, t, ax)
        return out

    def jacobian(self, xs, t) -> list[list[np.ndarray]]:
        """J[i][j] = dA_j/dx_i."""
        d = len(xs)
        return [
            [_central_diff(lambda q, s, j=j: self.value(q, s)[j], xs, t, i) for j in range(d)]
            for i in range(d)
        ]


@dataclass
class ZeroVector(VectorPotential):
    def value(self, xs, t):
        return tuple(np.zeros_like(np.asarray(c, dtype=float)) for c in xs)

    def divergence(self, xs, t):
        return np.zeros_like(np.asarray(xs[0], dtype=float))

    def jacobian(self, xs, t):
        d = len(xs)
        z = np.zeros_like(np.asarray(xs[0], dtype=float))
        return [[z.copy() for _ in range(d)] for _ in range(d)]


@dataclass
class UniformVector(VectorPotential):
    """Spatially uniform A(t); the only vector form the propagator accepts."""

    a_of_t: Callable[[float], Sequence[float]]

    def components(self, t: float) -> tuple[float, ...]:
        return tuple(float(c) for c in np.atleast_1d(self.a_of_t(t)))

    def value(self, xs, t):
        comps = self.components(t)
        if len(comps) != len(xs):
            raise ValueError("vector potential dimension mismatch")
        return tuple(np.full_like(np.asarray(c, dtype=float), a) for c, a in zip(xs, comps))

    def divergence(self, xs, t):
        return np.zeros_like(np.asarray(xs[0], dtype=float))

    def jacobian(self, xs, t):
        d = len(xs)
        z = np.zeros_like(np.asarray(xs[0], dtype=float))
        return [[z.copy() for _ in range(d)] for _ in range(d)]


@dataclass
class ExpressionVector(VectorPotential):
    fn: Callable  # fn(xs, t) -> tuple of component arrays

    def value(self, xs, t):
        comps = self.fn(xs, t)
        return tuple(np.broadcast_to(np.asarray(c, dtype=float), np.asarray(xs[0]).shape).copy()
                     for c in comps)


@dataclass
class PotentialSpec:
    """Bundle of the scalar and vector external fields."""

    scalar: ScalarPotential = field(default_factory=ZeroScalar)
    vector: VectorPotential = field(default_factory=ZeroVector)


def free_potential() -> PotentialSpec:
    return PotentialSpec(ZeroScalar(), ZeroVector())


def eval_potential(spec: PotentialSpec, grid: Grid, t: float):
    """Sample V and A on the grid at time t.

    Returns (V, (A_1, ..., A_dim)) as plain arrays of the grid shape.
    """
    xs = grid.mesh()
    v = np.broadcast_to(np.asarray(spec.scalar.value(xs, t), dtype=float), grid.shape).copy()
    a = tuple(
        np.broadcast_to(np.asarray(c, dtype=float), grid.shape).copy()
        for c in spec.vector.value(xs, t)
    )
    return v, a
