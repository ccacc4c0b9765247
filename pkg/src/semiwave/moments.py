"""Expectation values, centered Weyl moments and concentration diagnostics.

Position moments are quadratures of the density; momentum moments apply
-i hbar d/dx spectrally, which is exact for band-limited samples.  The one
place operator ordering matters at second order is the mixed position and
momentum moment, taken as the symmetrized average.  Concentration in the
small parameter is probed two ways: the decay slope of the width across an
hbar sweep, and the mass fraction inside a shrinking ball around the
centroid.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .classical import PhasePoint
from .core import ComplexField, apply_momentum, inner_product, norm_squared

_IMAG_WARN = 1e-8


@dataclass(frozen=True)
class MomentRecord:
    """Means and second centered moments of one field.

    delta2 is the symmetric 2dim x 2dim matrix over the phase-space index
    order (x_1..x_dim, p_1..p_dim); its off-diagonal position-momentum
    entries are symmetrized products.
    """

    t: float
    hbar: float
    mean_x: tuple[float, ...]
    mean_p: tuple[float, ...]
    delta2: np.ndarray

    def __post_init__(self):
        d2 = np.asarray(self.delta2, dtype=float)
        dim = len(self.mean_x)
        if d2.shape != (2 * dim, 2 * dim):
            raise ValueError("delta2 must be a 2dim x 2dim matrix")
        for j in range(dim):
            if d2[j, j] < 0 or d2[dim + j, dim + j] < 0:
                raise ValueError("variances must be nonnegative")

    def var_x(self, axis: int = 0) -> float:
        return float(self.delta2[axis, axis])

    def var_p(self, axis: int = 0) -> float:
        dim = len(self.mean_x)
        return float(self.delta2[dim + axis, dim + axis])

    def cov_xp(self, axis: int = 0) -> float:
        dim = len(self.mean_x)
        return float(self.delta2[axis, dim + axis])

    def flat(self) -> dict[str, float]:
        """Row form for CSV emission."""
        dim = len(self.mean_x)
        row: dict[str, float] = {"t": self.t, "hbar": self.hbar}
        for j in range(dim):
            row[f"x{j}"] = self.mean_x[j]
        for j in range(dim):
            row[f"p{j}"] = self.mean_p[j]
        for j in range(dim):
            row[f"var_x{j}"] = self.var_x(j)
        for j in range(dim):
            row[f"var_p{j}"] = self.var_p(j)
        for j in range(dim):
            row[f"cov_xp{j}"] = self.cov_xp(j)
        return row


@dataclass(frozen=True)
class ScalingReport:
    """Least-squares power-law fit value = C * hbar^slope in log-log form."""

    hbars: tuple[float, ...]
    values: tuple[float, ...]
    slope: float
    intercept: float

    def __post_init__(self):
        hb = np.asarray(self.hbars, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if len(hb) != len(vals):
            raise ValueError("hbars and values must have equal length")
        if np.any(hb <= 0) or np.any(vals <= 0):
            raise ValueError("slope fitting needs positive hbars and values")
        if np.any(np.diff(hb) >= 0):
            raise ValueError("hbars must be strictly decreasing")


def fit_scaling(hbars, values) -> ScalingReport:
    """Fit log(value) against log(hbar); at least two distinct points."""
    hb = tuple(float(h) for h in hbars)
    vals = tuple(float(v) for v in values)
    if len(hb) < 2:
        raise ValueError("slope fitting needs at least two points")
    if any(h <= 0 for h in hb) or any(v <= 0 for v in vals):
        raise ValueError("slope fitting needs positive hbars and values")
    if any(b >= a for a, b in zip(hb, hb[1:])):
        raise ValueError("hbars must be strictly decreasing")
    slope, intercept = np.polyfit(np.log(hb), np.log(vals), 1)
    return ScalingReport(hbars=hb, values=vals, slope=float(slope),
                         intercept=float(intercept))


def mean_position(psi: ComplexField) -> np.ndarray:
    """Density-weighted mean of each coordinate."""
    dens = psi.density()
    total = np.sum(dens)
    if total == 0.0:
        raise ValueError("field is identically zero; not a usable state")
    xs = psi.grid.mesh()
    return np.array([float(np.sum(x * dens) / total) for x in xs])


def mean_momentum(psi: ComplexField) -> np.ndarray:
    """Real part of <psi| -i hbar d/dx_j |psi> / ||psi||^2 per axis.

    A sizable imaginary part means the state is not resolved by the grid;
    it is reported as a warning, not an error, so sweeps can proceed.
    """
    nsq = norm_squared(psi)
    out = []
    for ax in range(psi.grid.dim):
        val = inner_product(psi, apply_momentum(psi, ax)) / nsq
        if abs(val.imag) > _IMAG_WARN * max(1.0, abs(val.real)):
            warnings.warn(
                f"momentum mean has imaginary part {val.imag:.3e} on axis "
                f"{ax}; the state is not grid-resolved",
                stacklevel=2,
            )
        out.append(val.real)
    return np.array(out)


def _center_point(psi: ComplexField, z: PhasePoint | None) -> PhasePoint:
    if z is not None:
        if z.dim != psi.grid.dim:
            raise ValueError("phase-space point dimension does not match the field")
        return z
    return PhasePoint(
        x=tuple(mean_position(psi)), p=tuple(mean_momentum(psi)), t=psi.time
    )


def _shifted_momentum(psi: ComplexField, axis: int, p0: float) -> ComplexField:
    shifted = apply_momentum(psi, axis)
    return psi.with_values(shifted.values - p0 * psi.values)


def centered_moment(psi: ComplexField, alpha, beta, z: PhasePoint | None = None) -> float:
    """Centered moment of multi-order alpha in momentum, beta in position.

    Orders up to |alpha| + |beta| = 2 are supported; the mixed second
    moment is the symmetrized operator product, everything else is a plain
    power.  Centering defaults to the field's own means.
    """
    alpha = tuple(int(a) for a in np.atleast_1d(alpha))
    beta = tuple(int(b) for b in np.atleast_1d(beta))
    dim = psi.grid.dim
    if len(alpha) != dim or len(beta) != dim:
        raise ValueError(f"multi-indices must have length dim={dim}")
    if any(a < 0 for a in alpha) or any(b < 0 for b in beta):
        raise ValueError("multi-index entries must be nonnegative")
    na, nb = sum(alpha), sum(beta)
    if na + nb > 2:
        raise ValueError(
            f"moments of order {na + nb} are not supported (maximum 2)"
        )
    zc = _center_point(psi, z)
    nsq = norm_squared(psi)

    if na == 0 and nb == 0:
        return 1.0

    if na == 0:
        dens = psi.density()
        xs = psi.grid.mesh()
        weight = np.ones_like(dens)
        for ax, b in enumerate(beta):
            if b:
                weight = weight * (xs[ax] - zc.x[ax]) ** b
        return float(np.sum(weight * dens) * psi.grid.cell_volume / nsq)

    if nb == 0:
        first = next(ax for ax, a in enumerate(alpha) if a > 0)
        if na == 1:
            val = inner_product(psi, _shifted_momentum(psi, first, zc.p[first]))
        else:
            # split the two applications across the inner product; the
            # factors are Hermitian and commute, so this is exact
            left = _shifted_momentum(psi, first, zc.p[first])
            remaining = list(alpha)
            remaining[first] -= 1
            second = next(ax for ax, a in enumerate(remaining) if a > 0)
            val = inner_product(left, _shifted_momentum(psi, second, zc.p[second]))
        return float(val.real) / nsq

    # mixed second order: one momentum axis, one position axis
    ax_p = next(ax for ax, a in enumerate(alpha) if a > 0)
    ax_x = next(ax for ax, b in enumerate(beta) if b > 0)
    xs = psi.grid.mesh()
    xfield = psi.with_values((xs[ax_x] - zc.x[ax_x]) * psi.values)
    pfield = _shifted_momentum(psi, ax_p, zc.p[ax_p])
    return float(inner_product(xfield, pfield).real) / nsq


def compute_moment_record(psi: ComplexField, z: PhasePoint | None = None) -> MomentRecord:
    """Means and the full second-moment matrix, centered on z or on the
    field's own means.  The per-axis uncertainty product is checked
    against the hbar/2 bound as a quadrature sanity gate."""
    zc = _center_point(psi, z)
    dim = psi.grid.dim
    d2 = np.zeros((2 * dim, 2 * dim))

    def unit(ax):
        e = [0] * dim
        e[ax] = 1
        return tuple(e)

    zero = (0,) * dim
    for i in range(dim):
        for j in range(i, dim):
            beta = list(zero)
            beta[i] += 1
            beta[j] += 1
            d2[i, j] = d2[j, i] = centered_moment(psi, zero, tuple(beta), zc)
            alpha = list(zero)
            alpha[i] += 1
            alpha[j] += 1
            d2[dim + i, dim + j] = d2[dim + j, dim + i] = centered_moment(
                psi, tuple(alpha), zero, zc
            )
    for i in range(dim):
        for j in range(dim):
            val = centered_moment(psi, unit(i), unit(j), zc)
            d2[dim + i, j] = d2[j, dim + i] = val

    hbar = psi.hbar
    for ax in range(dim):
        prod = d2[ax, ax] * d2[dim + ax, dim + ax]
        if prod < (0.5 * hbar) ** 2 - 1e-8:
            raise ValueError(
                f"uncertainty product {prod:.3e} on axis {ax} violates the "
                f"(hbar/2)^2 bound; the moment quadrature is unreliable"
            )
    return MomentRecord(t=psi.time, hbar=hbar, mean_x=zc.x, mean_p=zc.p, delta2=d2)


def mass_within_radius(psi: ComplexField, radius: float, center=None) -> float:
    """Fraction of the squared norm inside the Euclidean ball of the given
    radius around center (default: the density centroid)."""
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if center is None:
        center = mean_position(psi)
    center = np.atleast_1d(np.asarray(center, dtype=float))
    if len(center) != psi.grid.dim:
        raise ValueError("center dimension does not match the field")
    xs = psi.grid.mesh()
    dist_sq = sum((x - c) ** 2 for x, c in zip(xs, center))
    dens = psi.density()
    inside = float(np.sum(np.where(dist_sq <= radius * radius, dens, 0.0)))
    return inside / float(np.sum(dens))


def _width_observable(psi: ComplexField, z: PhasePoint | None, observable: str) -> float:
    zc = _center_point(psi, z)
    dim = psi.grid.dim
    zero = (0,) * dim
    total = 0.0
    for ax in range(dim):
        idx = [0] * dim
        idx[ax] = 2
        if observable == "position":
            total += centered_moment(psi, zero, tuple(idx), zc)
        else:
            total += centered_moment(psi, tuple(idx), zero, zc)
    return float(np.sqrt(total))


def concentration_scaling(fields, z: PhasePoint | None = None,
                          observable: str = "position") -> ScalingReport:
    """Width-versus-hbar slope across a sweep of fields.

    The width is the root of the summed per-axis variance, centered on z
    when given (the classical orbit point) or on each field's own means.
    observable selects the position or the momentum width.
    """
    if observable not in ("position", "momentum"):
        raise ValueError(f"unknown observable {observable!r}")
    fields = list(fields)
    if len(fields) < 3:
        raise ValueError("concentration fits need at least three hbar values")
    hbars = [f.hbar for f in fields]
    widths = [_width_observable(f, z, observable) for f in fields]
    if any(w <= 0 for w in widths):
        raise ValueError("degenerate width in the sweep; cannot fit a slope")
    return fit_scaling(hbars, widths)
