"""Named reproduction scenarios and their report rows.

Each scenario is a pure function from a validated configuration to a
ScenarioResult: a list of metric rows plus plot tables and optional field
snapshots.  Writing files is emit()'s job, so identical configurations
give identical results objects and, through emit, identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..asymptotics import (
    Class1Params,
    Class2Params,
    CorrectionParams,
    CylindricalParams,
    SolitonParams,
    assemble_leading_term,
    corrected_term_with_dt,
    cylindrical_fields,
    first_integral_residual,
    hj_residual,
    leading_term_time_derivative,
    one_soliton,
    psi_via_representation,
    separated_class1,
    separated_class2,
    soliton_correction_fields,
    transport_residuals,
)
from ..classical import PhasePoint, integrate_bicharacteristic
from ..core import (
    ComplexField,
    PotentialSpec,
    SeparatedScalar,
    free_potential,
    make_axis_offset_grid,
    make_uniform_grid,
    norm_squared,
)
from ..moments import concentration_scaling, fit_scaling, mass_within_radius, \
    mean_momentum, mean_position, centered_moment
from ..solver import SolverConfig, apply_nlse_operator, evolve, relative_residual, \
    split_step
from .config import (
    ExperimentConfig,
    build_grid,
    build_params,
    build_potential,
    hbar_sweep,
    named_profile,
    validate_config,
)


@dataclass(frozen=True)
class ReportRow:
    """One metric of one scenario case; tolerance None marks a value that
    is reported without a pass threshold."""

    scenario: str
    case: str
    metric: str
    value: float
    tolerance: float | None
    passed: bool


@dataclass
class ScenarioResult:
    scenario: str
    rows: list[ReportRow] = field(default_factory=list)
    plotdata: dict[str, tuple[list[str], list[tuple]]] = field(default_factory=dict)
    snapshots: list[ComplexField] = field(default_factory=list)

    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def row(self, metric: str) -> ReportRow:
        for r in self.rows:
            if r.metric == metric:
                return r
        raise KeyError(f"no row with metric {metric!r}")


def _below(scenario, case, metric, value, tol) -> ReportRow:
    return ReportRow(scenario, case, metric, float(value), float(tol),
                     bool(value < tol))


def _at_least(scenario, case, metric, value, bound) -> ReportRow:
    return ReportRow(scenario, case, metric, float(value), float(bound),
                     bool(value >= bound))


def _report(scenario, case, metric, value) -> ReportRow:
    return ReportRow(scenario, case, metric, float(value), None, True)


def _peak_position(fld: ComplexField) -> float:
    """Sub-cell peak location of |psi|^2 by parabolic refinement."""
    dens = fld.density()
    j = int(np.argmax(dens))
    n = len(dens)
    jm, jp = (j - 1) % n, (j + 1) % n
    h = fld.grid.spacing[0]
    denom = dens[jm] - 2.0 * dens[j] + dens[jp]
    shift = 0.0 if denom == 0.0 else 0.5 * h * (dens[jm] - dens[jp]) / denom
    return float(fld.grid.axes()[0][j] + shift)


def _l2_relative(a: ComplexField, b: ComplexField) -> float:
    diff = a.with_values(a.values - b.values)
    return float(np.sqrt(norm_squared(diff) / norm_squared(b)))


# ---------------------------------------------------------------------------
# soliton-propagation


def _soliton_params(sub: dict) -> SolitonParams:
    return SolitonParams(
        xi=float(sub["xi"]),
        eta=float(sub["eta"]),
        x0=float(sub.get("x0", 0.0)),
        phi0=float(sub.get("phi0", 0.0)),
    )


def run_soliton_propagation(cfg: ExperimentConfig) -> ScenarioResult:
    """Propagate the closed-form solitary wave and compare against itself:
    terminal error, mass drift, fitted peak velocity, one-step norm
    preservation, and a dt-halving order check."""
    scen = cfg.scenario
    params = build_params(cfg)
    grid = build_grid(cfg)
    pot = build_potential(cfg, params.mass)
    sp = _soliton_params(cfg.family["soliton"])
    sol = cfg.solver
    config = SolverConfig(dt=float(sol["dt"]), t_end=float(sol["t_end"]),
                          snapshot_every=int(sol.get("snapshot_every", 1)),
                          params=params, pot=pot)

    psi0 = one_soliton(sp, grid, 0.0, params)
    rec = evolve(psi0, config)
    exact = one_soliton(sp, grid, config.t_end, params)

    result = ScenarioResult(scenario=scen, snapshots=rec.snapshots)
    result.rows.append(_below(scen, "propagation", "l2_error",
                              _l2_relative(rec.final, exact), 1e-4))
    result.rows.append(_below(scen, "propagation", "mass_drift",
                              rec.mass_drift, 1e-10))

    times = np.array(rec.times)
    peaks = np.array([_peak_position(s) for s in rec.snapshots])
    velocity = float(np.polyfit(times, peaks, 1)[0])
    target = 2.0 * sp.xi / params.mass
    result.rows.append(_report(scen, "propagation", "peak_velocity", velocity))
    result.rows.append(_below(scen, "propagation", "peak_velocity_error",
                              abs(velocity - target), 1e-3))

    stepped = split_step(psi0, config.dt, config)
    drift = abs(norm_squared(stepped) - norm_squared(psi0)) / norm_squared(psi0)
    result.rows.append(_below(scen, "propagation", "step_norm_drift", drift, 1e-12))

    conv_t = float(cfg.convergence.get("t_end", 1.0))

    def terminal(dt):
        c = SolverConfig(dt=dt, t_end=conv_t, snapshot_every=10 ** 9,
                         params=params, pot=pot)
        return evolve(psi0, c).final.values

    ref = terminal(config.dt / 8.0)
    e_coarse = float(np.max(np.abs(terminal(config.dt) - ref)))
    e_fine = float(np.max(np.abs(terminal(config.dt / 2.0) - ref)))
    ratio = e_coarse / e_fine
    result.rows.append(_report(scen, "convergence", "convergence_ratio", ratio))
    result.rows.append(_below(scen, "convergence", "convergence_ratio_deviation",
                              abs(ratio - 4.0), 0.8))

    x = grid.axes()[0]
    dens = rec.final.density()
    result.plotdata["density"] = (
        ["x", "density"], [(float(a), float(b)) for a, b in zip(x, dens)]
    )
    return result


# ---------------------------------------------------------------------------
# ehrenfest


def run_ehrenfest(cfg: ExperimentConfig) -> ScenarioResult:
    """Track the packet centroid against the classical orbit for each
    requested self-attraction strength; the initial profile is built once
    with the base parameters and held fixed."""
    scen = cfg.scenario
    params = build_params(cfg)
    grid = build_grid(cfg)
    pot = build_potential(cfg, params.mass)
    sp = _soliton_params(cfg.family["soliton"])
    sol = cfg.solver
    dt = float(sol["dt"])
    t_end = float(sol["t_end"])
    r_values = [float(v) for v in cfg.params.get("r_values", [params.r])]

    psi0 = one_soliton(sp, grid, 0.0, params)
    z0 = PhasePoint(x=(sp.x0,), p=(2.0 * sp.xi,), t=0.0)
    traj = integrate_bicharacteristic(z0, t_end + dt, dt, pot, params.mass)
    ct = traj.times()
    cx = traj.positions()[:, 0]
    cp = traj.momenta()[:, 0]

    result = ScenarioResult(scenario=scen)
    for idx, r in enumerate(r_values):
        run_params = params.with_r(r)
        config = SolverConfig(dt=dt, t_end=t_end,
                              snapshot_every=int(sol.get("snapshot_every", 1)),
                              params=run_params, pot=pot)
        rec = evolve(psi0, config)
        ts = np.array(rec.times)
        xs = np.array([mean_position(s)[0] for s in rec.snapshots])
        ps = np.array([mean_momentum(s)[0] for s in rec.snapshots])
        ref_x = np.interp(ts, ct, cx)
        ref_p = np.interp(ts, ct, cp)
        case = f"r={r:g}"
        result.rows.append(_below(scen, case, f"x_deviation[{case}]",
                                  np.max(np.abs(xs - ref_x)), 5e-3))
        result.rows.append(_below(scen, case, f"p_deviation[{case}]",
                                  np.max(np.abs(ps - ref_p)), 5e-3))
        if idx == 0:
            result.plotdata["centroid"] = (
                ["t", "mean_x", "mean_p", "classical_x", "classical_p"],
                [tuple(map(float, tup)) for tup in zip(ts, xs, ps, ref_x, ref_p)],
            )
            result.snapshots = rec.snapshots
    return result


# ---------------------------------------------------------------------------
# residual-scaling


def _scaling_family(cfg: ExperimentConfig, params):
    """Fields plus matching potential for the residual sweep."""
    fam_type = cfg.family.get("type", "class1")
    if fam_type == "soliton":
        sp = _soliton_params(cfg.family["soliton"])
        return soliton_correction_fields(sp, params), free_potential()
    sub = cfg.family["class1"]
    v1, v1p = named_profile(sub.get("v1"))
    p1 = Class1Params(c1=float(sub["c1"]), c2=float(sub.get("c2", 0.0)),
                      c3=float(sub.get("c3", 0.0)), c4=float(sub.get("c4", 0.0)),
                      v1=v1, v1_prime=v1p)
    domain = tuple(float(v) for v in sub["domain"])
    w = separated_class1(p1, domain, params,
                         sigma_zero=sub.get("sigma_zero"))
    pot = PotentialSpec(scalar=SeparatedScalar(v1=v1, v1_prime=v1p)) \
        if v1 is not None else free_potential()
    return w, pot


def run_residual_scaling(cfg: ExperimentConfig) -> ScenarioResult:
    """Relative residual of the leading and the corrected field across the
    hbar sweep, with fitted log-log slopes."""
    scen = cfg.scenario
    grid = build_grid(cfg)
    hbars = hbar_sweep(cfg)
    base = build_params(cfg, hbar=hbars[0])
    w, pot = _scaling_family(cfg, base)
    t_eval = float(cfg.family.get("eval_time", 0.0))
    c1 = float(cfg.family.get("correction_c1", 0.0))
    cp = CorrectionParams(C1=c1)

    lead, corr = [], []
    for hb in hbars:
        pp = base.with_hbar(hb)
        psi = assemble_leading_term(w, grid, t_eval, pp)
        dpsi = leading_term_time_derivative(w, grid, t_eval, pp)
        lead.append(relative_residual(
            apply_nlse_operator((psi, dpsi), pot, pp), psi))
        cpsi, cdpsi = corrected_term_with_dt(w, cp, grid, t_eval, pot, pp)
        corr.append(relative_residual(
            apply_nlse_operator((cpsi, cdpsi), pot, pp), cpsi))

    fit_lead = fit_scaling(hbars, lead)
    fit_corr = fit_scaling(hbars, corr)
    result = ScenarioResult(scenario=scen)
    result.rows.append(_at_least(scen, "leading", "leading_slope",
                                 fit_lead.slope, 0.9))
    result.rows.append(_at_least(scen, "corrected", "corrected_slope",
                                 fit_corr.slope, 1.8))
    for name, fit, vals in (("scaling", fit_lead, lead),
                            ("scaling_corrected", fit_corr, corr)):
        fitted = [float(np.exp(fit.intercept + fit.slope * np.log(h))) for h in hbars]
        result.plotdata[name] = (
            ["hbar", "residual", "fitted"],
            list(zip(map(float, hbars), map(float, vals), fitted)),
        )
    return result


# ---------------------------------------------------------------------------
# concentration


def run_concentration(cfg: ExperimentConfig) -> ScenarioResult:
    """Width decay across the sweep, the variance oracle at hbar = 1, and
    the mass fraction in the shrinking ball."""
    scen = cfg.scenario
    grid = build_grid(cfg)
    hbars = hbar_sweep(cfg)
    base = build_params(cfg, hbar=hbars[0])
    sp = _soliton_params(cfg.family["soliton"])
    t_eval = float(cfg.family.get("eval_time", 0.0))

    fields = [one_soliton(sp, grid, t_eval, base.with_hbar(h)) for h in hbars]
    pos = concentration_scaling(fields)
    mom = concentration_scaling(fields, observable="momentum")

    result = ScenarioResult(scenario=scen)
    result.rows.append(ReportRow(scen, "position", "position_width_slope",
                                 float(pos.slope), 0.02,
                                 bool(abs(pos.slope - 1.0) <= 0.02)))
    result.rows.append(_report(scen, "momentum", "momentum_width_slope",
                               mom.slope))

    unit = one_soliton(sp, grid, t_eval, base.with_hbar(1.0))
    var = centered_moment(unit, (0,), (2,))
    oracle = (np.pi ** 2 / 12.0) * (1.0 / (2.0 * sp.eta)) ** 2
    result.rows.append(_below(scen, "variance", "var_x_deviation",
                              abs(var - oracle), 1e-6))

    smallest = fields[-1]
    frac = mass_within_radius(smallest, np.sqrt(hbars[-1]))
    result.rows.append(_at_least(scen, "mass", "mass_within_sqrt_hbar",
                                 frac, 0.99))

    widths = [float(v) for v in pos.values]
    fitted = [float(np.exp(pos.intercept + pos.slope * np.log(h))) for h in hbars]
    result.plotdata["scaling"] = (
        ["hbar", "width", "fitted"],
        list(zip(map(float, hbars), widths, fitted)),
    )
    return result


# ---------------------------------------------------------------------------
# identity-suite


def _grid_1d_from(sub: dict, default_lo: float, default_hi: float):
    g = sub["grid"]
    lo = float(g.get("lo", default_lo))
    hi = float(g.get("hi", default_hi))
    return make_uniform_grid(1, lo, hi, int(g["n"]))


def _identity_families(cfg: ExperimentConfig, params):
    """(name, fields, grid, potential) for all four shipped families."""
    fam = cfg.family
    out = []

    sp = _soliton_params(fam["soliton"])
    sgrid = _grid_1d_from(fam["soliton"], -20.0, 20.0)
    out.append(("soliton", soliton_correction_fields(sp, params), sgrid,
                free_potential()))

    for name, builder, par_cls in (("class1", separated_class1, Class1Params),
                                   ("class2", separated_class2, Class2Params)):
        sub = fam[name]
        v1, v1p = named_profile(sub.get("v1"))
        kwargs = {"c1": float(sub["c1"]), "v1": v1, "v1_prime": v1p}
        for key in ("c2", "c3", "c4"):
            if key in sub:
                kwargs[key] = float(sub[key])
        if par_cls is Class2Params:
            for key in ("a1", "a2", "a3", "a4"):
                if key in sub:
                    kwargs[key] = float(sub[key])
        domain = tuple(float(v) for v in sub["domain"])
        w = builder(par_cls(**kwargs), domain, params)
        grid = _grid_1d_from(sub, domain[0], domain[1])
        pot = PotentialSpec(scalar=SeparatedScalar(v1=v1, v1_prime=v1p)) \
            if v1 is not None else free_potential()
        out.append((name, w, grid, pot))

    sub = fam["cylindrical"]
    cp = CylindricalParams(
        c1=float(sub["c1"]), b1=float(sub.get("b1", 0.0)),
        a1=float(sub.get("a1", 0.0)), a2=float(sub.get("a2", 0.0)),
        a3=float(sub.get("a3", 0.0)), c2=float(sub.get("c2", 0.0)),
        c3=float(sub.get("c3", 0.0)),
    )
    g = sub["grid"]
    cgrid = make_axis_offset_grid(2, float(g["half_width"]), int(g["n"]))
    out.append(("cylindrical", cylindrical_fields(cp, params), cgrid,
                free_potential()))
    return out


def _reduced_transport(w, xs, t, params):
    """The one-dimensional reduced transport pair, written directly in
    terms of x-derivatives, for comparison with the general form."""
    m = params.mass
    S_x = w.grad_S(xs, t)[0]
    S_xx = w.lap_S(xs, t)
    sig_x = w.grad_sigma(xs, t)[0]
    sig_xx = w.lap_sigma(xs, t)
    sig_xt = w.dt_grad_sigma_sq(xs, t) / (2.0 * sig_x)
    S1_x = w.grad_S1(xs, t)[0]
    sig1_x = w.grad_sigma1(xs, t)[0]
    red_a = w.dt_S1(xs, t) + S_x * S1_x / m - sig_x * sig1_x / m \
        + 1.5 * sig_xx / m
    red_b = w.dt_sigma1(xs, t) + S_x * sig1_x / m + sig_x * S1_x / m \
        - 0.5 * (S_xx / m + 2.0 * sig_xt / sig_x
                 + 2.0 * S_x * sig_xx / (m * sig_x))
    return red_a, red_b


def run_identity_suite(cfg: ExperimentConfig) -> ScenarioResult:
    """Pointwise identities: both assembly routes agree, the general
    transport pair matches its 1D reduction, the envelope first integral
    vanishes, and the eikonal residual is at rounding level."""
    scen = cfg.scenario
    params = build_params(cfg)
    t_eval = float(cfg.family.get("eval_time", 0.25))
    families = _identity_families(cfg, params)

    repr_max = 0.0
    reduction_max = 0.0
    integral_max = 0.0
    hj_vals = {}
    for name, w, grid, pot in families:
        a = assemble_leading_term(w, grid, t_eval, params)
        b = psi_via_representation(w, grid, t_eval, params)
        repr_max = max(repr_max, float(np.max(np.abs(a.values - b.values))))
        integral_max = max(integral_max, float(np.max(np.abs(
            first_integral_residual(w, grid, t_eval, params)))))
        hj_vals[name] = float(np.max(np.abs(
            hj_residual(w, grid, t_eval, pot, params))))
        if grid.dim == 1:
            eq_a, eq_b = transport_residuals(w, grid, t_eval, pot, params)
            red_a, red_b = _reduced_transport(w, grid.mesh(), t_eval, params)
            reduction_max = max(
                reduction_max,
                float(np.max(np.abs(eq_a - red_a))),
                float(np.max(np.abs(eq_b - red_b))),
            )

    result = ScenarioResult(scenario=scen)
    result.rows.append(_below(scen, "assembly", "representation_identity_max",
                              repr_max, 1e-12))
    result.rows.append(_below(scen, "transport", "transport_reduction_max",
                              reduction_max, 1e-10))
    result.rows.append(_below(scen, "envelope", "first_integral_max",
                              integral_max, 1e-10))
    result.rows.append(_below(scen, "eikonal", "hj_soliton_max",
                              hj_vals["soliton"], 1e-12))
    result.rows.append(_below(scen, "eikonal", "hj_class1_max",
                              hj_vals["class1"], 1e-8))
    result.rows.append(_report(scen, "eikonal", "hj_class2_max",
                               hj_vals["class2"]))
    result.rows.append(_report(scen, "eikonal", "hj_cylindrical_max",
                               hj_vals["cylindrical"]))
    return result


# ---------------------------------------------------------------------------
# cylindrical-check


def run_cylindrical_check(cfg: ExperimentConfig) -> ScenarioResult:
    """Residual decay of the radial special solution across the sweep and
    exact reflection symmetry of its modulus on the offset grid."""
    scen = cfg.scenario
    grid = build_grid(cfg)
    hbars = hbar_sweep(cfg)
    base = build_params(cfg, hbar=hbars[0])
    sub = cfg.family["cylindrical"]
    cpar = CylindricalParams(
        c1=float(sub["c1"]), b1=float(sub.get("b1", 0.0)),
        a1=float(sub.get("a1", 0.0)), a2=float(sub.get("a2", 0.0)),
        a3=float(sub.get("a3", 0.0)), c2=float(sub.get("c2", 0.0)),
        c3=float(sub.get("c3", 0.0)),
    )
    t_eval = float(cfg.family.get("eval_time", 0.0))
    pot = build_potential(cfg, base.mass)

    residuals = []
    sym_max = 0.0
    for hb in hbars:
        pp = base.with_hbar(hb)
        w = cylindrical_fields(cpar, pp)
        psi = assemble_leading_term(w, grid, t_eval, pp)
        dpsi = leading_term_time_derivative(w, grid, t_eval, pp)
        residuals.append(relative_residual(
            apply_nlse_operator((psi, dpsi), pot, pp), psi))
        mod = np.abs(psi.values)
        sym_max = max(
            sym_max,
            float(np.max(np.abs(mod - mod[::-1, :]))),
            float(np.max(np.abs(mod - mod[:, ::-1]))),
            float(np.max(np.abs(mod - mod.T))),
        )

    monotone = all(a > b for a, b in zip(residuals, residuals[1:]))
    fit = fit_scaling(hbars, residuals)
    result = ScenarioResult(scenario=scen)
    result.rows.append(ReportRow(scen, "residual", "residual_monotone",
                                 1.0 if monotone else 0.0, None, monotone))
    result.rows.append(_report(scen, "residual", "residual_slope", fit.slope))
    result.rows.append(_below(scen, "symmetry", "radial_symmetry_max",
                              sym_max, 1e-14))
    fitted = [float(np.exp(fit.intercept + fit.slope * np.log(h))) for h in hbars]
    result.plotdata["scaling"] = (
        ["hbar", "residual", "fitted"],
        list(zip(map(float, hbars), map(float, residuals), fitted)),
    )
    return result


# ---------------------------------------------------------------------------
# registry


SCENARIOS = {
    "soliton-propagation": (
        run_soliton_propagation,
        "closed-form solitary wave through the propagator: terminal error, "
        "mass drift, peak velocity, dt-halving order",
    ),
    "ehrenfest": (
        run_ehrenfest,
        "packet centroid versus the classical orbit for several "
        "self-attraction strengths",
    ),
    "residual-scaling": (
        run_residual_scaling,
        "equation residual of the leading and corrected fields across an "
        "hbar sweep with fitted slopes",
    ),
    "concentration": (
        run_concentration,
        "width decay, variance oracle, and mass-in-ball concentration of "
        "the solitary family",
    ),
    "identity-suite": (
        run_identity_suite,
        "pointwise identities: assembly routes, transport reduction, first "
        "integral, eikonal residual",
    ),
    "cylindrical-check": (
        run_cylindrical_check,
        "radial special solution: residual decay in hbar and reflection "
        "symmetry of the modulus",
    ),
}


def run_scenario(cfg: ExperimentConfig) -> ScenarioResult:
    """Validate, then dispatch to the scenario named by the configuration."""
    validate_config(cfg)
    fn, _ = SCENARIOS[cfg.scenario]
    return fn(cfg)
