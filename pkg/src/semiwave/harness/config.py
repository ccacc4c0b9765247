"""Experiment configuration: loading, schema validation, overrides.

A configuration is one YAML document with nested blocks; every scenario
reads the same top-level shape and validates the subset it needs.  All
potential and family functions are named closed forms with numeric
parameters, so a config file can never inject code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from ..core import (
    Grid,
    HarmonicScalar,
    PhysParams,
    PotentialSpec,
    ScalarPotential,
    SeparatedScalar,
    UniformVector,
    VectorPotential,
    ZeroScalar,
    ZeroVector,
    make_axis_offset_grid,
    make_uniform_grid,
)

SCENARIO_NAMES = (
    "soliton-propagation",
    "ehrenfest",
    "residual-scaling",
    "concentration",
    "identity-suite",
    "cylindrical-check",
)

_SWEEP_SCENARIOS = ("residual-scaling", "concentration", "cylindrical-check")


class ConfigError(ValueError):
    """Schema violation; carries one message per offending field path."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass
class ExperimentConfig:
    """Parsed configuration blocks of one scenario run."""

    scenario: str
    grid: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    potential: dict = field(default_factory=dict)
    family: dict = field(default_factory=dict)
    solver: dict = field(default_factory=dict)
    convergence: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError(["<root>: config must be a mapping"])
        known = {f for f in cls.__dataclass_fields__}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError([f"{k}: unknown top-level block" for k in unknown])
        if "scenario" not in raw:
            raise ConfigError(["scenario: required"])
        kwargs = {}
        for name in known:
            if name == "scenario":
                kwargs[name] = str(raw[name])
                continue
            val = raw.get(name, {})
            if val is None:
                val = {}
            if not isinstance(val, dict):
                raise ConfigError([f"{name}: must be a mapping"])
            kwargs[name] = val
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        text = Path(path).read_text()
        return cls.from_dict(yaml.safe_load(text))

    def apply_override(self, dotted: str) -> None:
        """Apply one 'a.b.c=value' override; the value is parsed as YAML."""
        if "=" not in dotted:
            raise ConfigError([f"{dotted}: override must look like path=value"])
        path, _, raw_val = dotted.partition("=")
        keys = [k for k in path.strip().split(".") if k]
        if not keys:
            raise ConfigError([f"{dotted}: empty override path"])
        value = yaml.safe_load(raw_val)
        if keys == ["scenario"]:
            self.scenario = str(value)
            return
        if keys[0] not in self.__dataclass_fields__ or keys[0] == "scenario":
            raise ConfigError([f"{keys[0]}: unknown top-level block"])
        node = getattr(self, keys[0])
        for k in keys[1:-1]:
            node = node.setdefault(k, {})
            if not isinstance(node, dict):
                raise ConfigError([f"{path}: {k} is not a mapping"])
        node[keys[-1]] = value


def default_config_path(scenario: str) -> Path:
    """Path of the packaged acceptance-grade config for a scenario."""
    if scenario not in SCENARIO_NAMES:
        raise ConfigError([f"scenario: unknown scenario {scenario!r}"])
    name = scenario.replace("-", "_") + ".yaml"
    return Path(resources.files("semiwave.harness").joinpath("configs", name))


# ---------------------------------------------------------------------------
# validation


def _check_number(problems, block, path, key, *, positive=False, required=True):
    if key not in block:
        if required:
            problems.append(f"{path}.{key}: required")
        return None
    val = block[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        problems.append(f"{path}.{key}: must be a number")
        return None
    if positive and not val > 0:
        problems.append(f"{path}.{key}: must be positive")
        return None
    return float(val)


def _check_hbar(problems, params, scenario):
    hbar = params.get("hbar")
    if hbar is None:
        problems.append("params.hbar: required")
        return
    sweep = scenario in _SWEEP_SCENARIOS
    if isinstance(hbar, (int, float)) and not isinstance(hbar, bool):
        if sweep:
            problems.append(
                "params.hbar: this scenario sweeps hbar and needs a list"
            )
        elif not hbar > 0:
            problems.append("params.hbar: must be positive")
        return
    if isinstance(hbar, list):
        if not sweep:
            problems.append("params.hbar: this scenario needs a single value")
            return
        if len(hbar) < 3:
            problems.append("params.hbar: sweep needs at least 3 values")
            return
        vals = []
        for item in hbar:
            if isinstance(item, bool) or not isinstance(item, (int, float)) or item <= 0:
                problems.append("params.hbar: sweep entries must be positive numbers")
                return
            vals.append(float(item))
        if any(b >= a for a, b in zip(vals, vals[1:])):
            problems.append("params.hbar: sweep must be strictly decreasing")
        return
    problems.append("params.hbar: must be a number or a list")


def _check_r(problems, params):
    has_r = "r" in params
    has_kappa = "kappa" in params
    if not has_r and not has_kappa:
        problems.append("params.r: required (or params.kappa)")
        return
    if has_r:
        val = params["r"]
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            problems.append("params.r: must be a number")
    if has_kappa:
        val = params["kappa"]
        if isinstance(val, bool) or not isinstance(val, (int, float)) or val == 0:
            problems.append("params.kappa: must be a nonzero number")
    if has_r and has_kappa and isinstance(params.get("r"), (int, float)) \
            and isinstance(params.get("kappa"), (int, float)):
        if float(params["r"]) != float(params["kappa"]) ** 2:
            problems.append("params.r: inconsistent with params.kappa (r must equal kappa**2)")


def _check_grid_n(problems, block, path):
    n = block.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 16 \
            or n & (n - 1) != 0:
        problems.append(f"{path}.n: must be a power-of-two integer >= 16")


def _check_grid_1d(problems, grid):
    _check_number(problems, grid, "grid", "lo")
    _check_number(problems, grid, "grid", "hi")
    _check_grid_n(problems, grid, "grid")
    lo, hi = grid.get("lo"), grid.get("hi")
    if isinstance(lo, (int, float)) and isinstance(hi, (int, float)) and not hi > lo:
        problems.append("grid.hi: must exceed grid.lo")


def _check_grid_2d(problems, grid):
    _check_number(problems, grid, "grid", "half_width", positive=True)
    _check_grid_n(problems, grid, "grid")


def _check_scalar_potential(problems, spec, path):
    form = spec.get("form")
    if form is None:
        problems.append(f"{path}.form: required")
        return
    if form == "zero":
        return
    if form == "harmonic":
        _check_number(problems, spec, path, "omega", positive=True)
        _check_number(problems, spec, path, "center", required=False)
        return
    if form == "quadratic":
        _check_number(problems, spec, path, "coefficient")
        return
    problems.append(f"{path}.form: unknown form {form!r}")


def _check_vector_potential(problems, spec, path):
    form = spec.get("form", "zero")
    if form == "zero":
        return
    if form == "uniform":
        comps = spec.get("components")
        if not isinstance(comps, list) or not comps or not all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in comps
        ):
            problems.append(f"{path}.components: must be a list of numbers")
        return
    problems.append(f"{path}.form: unknown form {form!r}")


def _check_solver(problems, solver):
    _check_number(problems, solver, "solver", "dt", positive=True)
    _check_number(problems, solver, "solver", "t_end", positive=True)
    se = solver.get("snapshot_every", 1)
    if not isinstance(se, int) or isinstance(se, bool) or se < 1:
        problems.append("solver.snapshot_every: must be a positive integer")


def _check_soliton(problems, family, *, require_x0=False):
    sub = family.get("soliton")
    if not isinstance(sub, dict):
        problems.append("family.soliton: required block")
        return
    _check_number(problems, sub, "family.soliton", "eta", positive=True)
    _check_number(problems, sub, "family.soliton", "xi")
    if require_x0:
        _check_number(problems, sub, "family.soliton", "x0")
    else:
        _check_number(problems, sub, "family.soliton", "x0", required=False)
    _check_number(problems, sub, "family.soliton", "phi0", required=False)


def _check_named_profile(problems, sub, path):
    prof = sub.get("v1")
    if prof is None:
        return
    if not isinstance(prof, dict):
        problems.append(f"{path}.v1: must be a mapping")
        return
    form = prof.get("form")
    if form == "zero":
        return
    if form == "quadratic":
        _check_number(problems, prof, f"{path}.v1", "coefficient")
        return
    problems.append(f"{path}.v1.form: unknown form {form!r}")


def _check_domain(problems, sub, path):
    dom = sub.get("domain")
    if (not isinstance(dom, list) or len(dom) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in dom)
            or not dom[1] > dom[0]):
        problems.append(f"{path}.domain: must be [lo, hi] with hi > lo")


def _check_class1(problems, family):
    sub = family.get("class1")
    if not isinstance(sub, dict):
        problems.append("family.class1: required block")
        return
    _check_number(problems, sub, "family.class1", "c1")
    for key in ("c2", "c3", "c4"):
        _check_number(problems, sub, "family.class1", key, required=False)
    _check_named_profile(problems, sub, "family.class1")
    _check_domain(problems, sub, "family.class1")


def _check_class2(problems, family):
    sub = family.get("class2")
    if not isinstance(sub, dict):
        problems.append("family.class2: required block")
        return
    c1 = _check_number(problems, sub, "family.class2", "c1")
    if c1 == 0.0:
        problems.append("family.class2.c1: must be nonzero")
    for key in ("c2", "c3", "c4", "a1", "a2", "a3", "a4"):
        _check_number(problems, sub, "family.class2", key, required=False)
    _check_named_profile(problems, sub, "family.class2")
    _check_domain(problems, sub, "family.class2")


def _check_cylindrical(problems, family):
    sub = family.get("cylindrical")
    if not isinstance(sub, dict):
        problems.append("family.cylindrical: required block")
        return
    c1 = _check_number(problems, sub, "family.cylindrical", "c1")
    if c1 == 0.0:
        problems.append("family.cylindrical.c1: must be nonzero")
    for key in ("b1", "a1", "a2", "a3", "c2", "c3"):
        _check_number(problems, sub, "family.cylindrical", key, required=False)


def validate_config(cfg: ExperimentConfig) -> None:
    """Raise ConfigError listing every schema violation by field path."""
    problems: list[str] = []
    if cfg.scenario not in SCENARIO_NAMES:
        raise ConfigError(
            [f"scenario: unknown scenario {cfg.scenario!r} "
             f"(choose from {', '.join(SCENARIO_NAMES)})"]
        )

    _check_hbar(problems, cfg.params, cfg.scenario)
    _check_number(problems, cfg.params, "params", "mass", positive=True)
    _check_r(problems, cfg.params)

    scen = cfg.scenario
    if scen == "soliton-propagation":
        _check_grid_1d(problems, cfg.grid)
        _check_soliton(problems, cfg.family, require_x0=True)
        _check_solver(problems, cfg.solver)
        if cfg.convergence:
            _check_number(problems, cfg.convergence, "convergence", "t_end",
                          positive=True, required=False)
    elif scen == "ehrenfest":
        _check_grid_1d(problems, cfg.grid)
        _check_soliton(problems, cfg.family, require_x0=True)
        _check_solver(problems, cfg.solver)
        scalar = cfg.potential.get("scalar", {})
        _check_scalar_potential(problems, scalar, "potential.scalar")
        if scalar.get("form") == "zero":
            problems.append("potential.scalar.form: ehrenfest needs a confining potential")
        rvals = cfg.params.get("r_values")
        if rvals is not None:
            if not isinstance(rvals, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in rvals
            ):
                problems.append("params.r_values: must be a list of numbers")
    elif scen == "residual-scaling":
        _check_grid_1d(problems, cfg.grid)
        fam_type = cfg.family.get("type")
        if fam_type not in ("class1", "soliton"):
            problems.append("family.type: must be class1 or soliton for residual-scaling")
        elif fam_type == "class1":
            _check_class1(problems, cfg.family)
        else:
            _check_soliton(problems, cfg.family)
    elif scen == "concentration":
        _check_grid_1d(problems, cfg.grid)
        _check_soliton(problems, cfg.family)
    elif scen == "identity-suite":
        _check_soliton(problems, cfg.family)
        _check_class1(problems, cfg.family)
        _check_class2(problems, cfg.family)
        _check_cylindrical(problems, cfg.family)
        for name in ("class1", "class2"):
            sub = cfg.family.get(name)
            if isinstance(sub, dict):
                grid_block = sub.get("grid")
                if not isinstance(grid_block, dict):
                    problems.append(f"family.{name}.grid: required block")
                else:
                    _check_grid_n(problems, grid_block, f"family.{name}.grid")
        sol = cfg.family.get("soliton")
        if isinstance(sol, dict) and not isinstance(sol.get("grid"), dict):
            problems.append("family.soliton.grid: required block")
        cyl = cfg.family.get("cylindrical")
        if isinstance(cyl, dict):
            grid_block = cyl.get("grid")
            if not isinstance(grid_block, dict):
                problems.append("family.cylindrical.grid: required block")
            else:
                _check_number(problems, grid_block, "family.cylindrical.grid",
                              "half_width", positive=True)
    elif scen == "cylindrical-check":
        _check_grid_2d(problems, cfg.grid)
        _check_cylindrical(problems, cfg.family)

    vec = cfg.potential.get("vector")
    if isinstance(vec, dict):
        _check_vector_potential(problems, vec, "potential.vector")

    if problems:
        raise ConfigError(problems)


# ---------------------------------------------------------------------------
# builders


def build_params(cfg: ExperimentConfig, hbar: float | None = None) -> PhysParams:
    """PhysParams from the params block; hbar overrides the block value
    (used when iterating a sweep)."""
    params = cfg.params
    if hbar is None:
        hbar = float(params["hbar"])
    mass = float(params["mass"])
    if "kappa" in params:
        return PhysParams.from_kappa(hbar=hbar, mass=mass, kappa=float(params["kappa"]))
    return PhysParams(hbar=hbar, mass=mass, r=float(params.get("r", 0.0)))


def hbar_sweep(cfg: ExperimentConfig) -> list[float]:
    hbar = cfg.params["hbar"]
    if isinstance(hbar, list):
        return [float(h) for h in hbar]
    return [float(hbar)]


def build_grid(cfg: ExperimentConfig) -> Grid:
    g = cfg.grid
    if "half_width" in g:
        return make_axis_offset_grid(2, float(g["half_width"]), int(g["n"]))
    return make_uniform_grid(1, float(g["lo"]), float(g["hi"]), int(g["n"]))


def build_scalar_potential(spec: dict, mass: float) -> ScalarPotential:
    form = spec.get("form", "zero")
    if form == "zero":
        return ZeroScalar()
    if form == "harmonic":
        return HarmonicScalar(omega=(float(spec["omega"]),),
                              center=(float(spec.get("center", 0.0)),),
                              mass=mass)
    if form == "quadratic":
        c = float(spec["coefficient"])
        return SeparatedScalar(v1=lambda x: c * x * x,
                               v1_prime=lambda x: 2.0 * c * x)
    raise ConfigError([f"potential.scalar.form: unknown form {form!r}"])


def build_vector_potential(spec: dict) -> VectorPotential:
    form = spec.get("form", "zero")
    if form == "zero":
        return ZeroVector()
    if form == "uniform":
        comps = tuple(float(c) for c in spec["components"])
        return UniformVector(a_of_t=lambda t: comps)
    raise ConfigError([f"potential.vector.form: unknown form {form!r}"])


def build_potential(cfg: ExperimentConfig, mass: float) -> PotentialSpec:
    scalar = build_scalar_potential(cfg.potential.get("scalar", {}), mass)
    vector = build_vector_potential(cfg.potential.get("vector", {}))
    return PotentialSpec(scalar=scalar, vector=vector)


def named_profile(spec: dict | None):
    """(v1, v1_prime) callables of a named 1D profile block, or (None, None)."""
    if not spec or spec.get("form") == "zero":
        return None, None
    form = spec.get("form")
    if form == "quadratic":
        c = float(spec["coefficient"])
        return (lambda x: c * np.asarray(x) ** 2), (lambda x: 2.0 * c * np.asarray(x))
    raise ConfigError([f"v1.form: unknown form {form!r}"])
