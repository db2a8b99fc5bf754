"""Experiment presets: model setup, schemes and per-model diagnostics.

Each preset wires a model operator, its discrete equilibrium, the initial
datum and a diagnostics row builder into a RunSetup the CLI driver executes.
Discrete equilibria are mass-matched to the initial datum (the conservative
schemes preserve the initial discrete mass exactly, so an equilibrium with a
different quadrature mass could never be reached to machine precision).
"""

from dataclasses import dataclass, field
from typing import Callable, Optional
import numpy as np

from . import advection, boltzmann, fokker_planck as fp, porous_medium as pme
from . import shallow_water as swe
from .core import (EquilibriumProfile, SemiDiscreteOperator, TimeStepper,
                   residual_equilibrium_operator)
from .diagnostics import (DiagnosticsRecord, lp_errors, relative_entropy_boltzmann,
                          relative_entropy_fp, relative_entropy_pme,
                          total_variation)
from .limiter import LimiterConfig
from .mesh import Field, make_grid_1d, make_grid_2d, project_function

PRESETS = {
    "fp": {"two_gaussians": ("su", "sc", "reu", "rec", "cc")},
    "pme": {"gaussian_ring": ("su", "reu")},
    "boltzmann": {"bkw": ("fs", "refs")},
    "swe": {"lake": ("lf", "relf", "fl-relf"),
            "transcritical": ("lf", "relf", "fl-relf")},
    "advect": {"equilibrium": ("limited", "tvd2"), "tvd-sweep": ("limited",)},
}


@dataclass
class RunSetup:
    grid: object
    u0: Field
    operator: Optional[SemiDiscreteOperator]
    stepper: TimeStepper
    t_end: float
    sample_every: float
    diag: Callable
    dt_fn: Optional[Callable] = None
    components: int = 1
    stepper_fn: Optional[Callable] = None   # fully-discrete schemes (advect)
    info: dict = field(default_factory=dict)


def mass_matched(field_eq, target_mass, volume):
    current = np.sum(field_eq.data) * volume
    return field_eq.with_data(field_eq.data * (target_mass / current))


def _wrap_re(op, u_eq):
    return residual_equilibrium_operator(op, EquilibriumProfile.compute(op, u_eq))


def build_fp(config):
    n = config.n_cells or 100
    grid = make_grid_1d(n, -5.0, 5.0)
    params = fp.FPParams(0.0, 1.0, grid)
    u0 = project_function(grid, lambda x: np.exp(-5 * (x + 2.5) ** 2)
                          + np.exp(-5 * (x - 2.5) ** 2))
    rho0 = np.sum(u0.data) * grid.dx
    M = mass_matched(fp.maxwellian(params, rho0), rho0, grid.dx)
    base = {"su": fp.fp_upwind, "sc": fp.fp_central, "cc": fp.fp_chang_cooper,
            "reu": fp.fp_upwind, "rec": fp.fp_central}
    if config.scheme not in base:
        raise ValueError(f"unknown fp scheme {config.scheme!r}")
    op = base[config.scheme](params)
    if config.scheme in ("reu", "rec"):
        op = _wrap_re(op, M)
    dt = 1.5e-4 if config.dt in (None, "auto") else config.dt

    def diag(t, u):
        l1, linf = lp_errors(u.data, M.data, grid)
        m = np.sum(u.data) * grid.dx
        mom = np.sum(u.data * grid.centers) * grid.dx
        en = np.sum(u.data * grid.centers ** 2) * grid.dx
        return DiagnosticsRecord(
            t=t, entropy=relative_entropy_fp(u.data, M.data, grid),
            l1_error=l1, linf_error=linf, tv=total_variation(u.data),
            mass=m, momentum=mom, energy=en)

    return RunSetup(grid, u0, op, TimeStepper("forward_euler", dt),
                    t_end=8.0 if config.t_end is None else config.t_end,
                    sample_every=config.sample_every or 0.1, diag=diag,
                    info={"equilibrium": M})


def build_pme(config):
    n = config.n_cells or 64
    grid = make_grid_2d(n, n, -10.0, 10.0, -10.0, 10.0)
    params = pme.PMEParams(5.0, grid)
    u0 = project_function(grid,
                          lambda X, Y: (X ** 2 + Y ** 2)
                          * np.exp(-(X ** 2 + Y ** 2) / 2))
    mass0 = np.sum(u0.data) * grid.cell_volume
    prof = pme.barenblatt(params, mass0)
    op = pme.pme_upwind(params)
    if config.scheme == "reu":
        op = _wrap_re(op, prof.field)
    elif config.scheme != "su":
        raise ValueError(f"unknown pme scheme {config.scheme!r}")
    dt_fn = None
    if config.dt in (None, "auto"):
        dt, dt_fn = 1.0, lambda u: pme.pme_stable_dt(params, u)
    else:
        dt = config.dt

    def diag(t, u):
        l1, linf = lp_errors(u.data, prof.field.data, grid)
        return DiagnosticsRecord(
            t=t, entropy=relative_entropy_pme(u.data, prof.field.data, grid,
                                              params.m),
            l1_error=l1, linf_error=linf,
            mass=np.sum(u.data) * grid.cell_volume)

    return RunSetup(grid, u0, op, TimeStepper("forward_euler", dt),
                    t_end=20.0 if config.t_end is None else config.t_end,
                    sample_every=config.sample_every or 0.5, diag=diag,
                    dt_fn=dt_fn, info={"equilibrium": prof.field})


def build_boltzmann(config):
    n = config.n_cells or 32
    cfg = boltzmann.make_spectral_config(n)
    grid = cfg.grid
    u0 = boltzmann.bkw_field(grid, 0.0)
    mass0 = np.sum(u0.data) * grid.cell_volume
    M = mass_matched(boltzmann.maxwellian_2d(grid), mass0, grid.cell_volume)
    if config.scheme == "fs":
        op = boltzmann.collision_operator(cfg)
    elif config.scheme == "refs":
        op = boltzmann.re_collision(cfg, M)
    else:
        raise ValueError(f"unknown boltzmann scheme {config.scheme!r}")
    dt = 0.01 if config.dt in (None, "auto") else config.dt

    def diag(t, u):
        H, neg = relative_entropy_boltzmann(u.data, M.data, grid)
        l1, linf = lp_errors(u.data, boltzmann.bkw_field(grid, t).data, grid)
        m = np.sum(u.data) * grid.cell_volume
        X, Y = grid.meshgrid()
        en = np.sum(u.data * (X ** 2 + Y ** 2)) * grid.cell_volume
        return DiagnosticsRecord(t=t, entropy=H, l1_error=l1, linf_error=linf,
                                 mass=m, energy=en, neg_cells=neg)

    return RunSetup(grid, u0, op, TimeStepper("forward_euler", dt),
                    t_end=10.0 if config.t_end is None else config.t_end,
                    sample_every=config.sample_every or 0.5, diag=diag,
                    info={"equilibrium": M, "spectral": cfg})


def build_swe(config):
    n = config.n_cells or 200
    g_const = config.g or 9.81
    if config.test == "lake":
        grid = make_grid_1d(n, 0.0, 1.0)
        topo = project_function(grid, swe.lake_bump)
        params = swe.SWEParams(g_const, grid, topo, swe.FarFieldLevel(1.0))
        eq = swe.lake_at_rest_equilibrium(params)
        x = grid.centers
        d0 = np.zeros((n, 2))
        d0[:, 0] = (1.0 + np.where((x > 0.1) & (x < 0.2), 0.1, 0.0)
                    - topo.data)
        t_end_default = 1.0
    else:  # transcritical: classical LF coefficient dx/dt = 10
        grid = make_grid_1d(n, 0.0, 25.0)
        topo = project_function(grid, swe.goutal_maurel_bump)
        params = swe.SWEParams(g_const, grid, topo,
                               swe.InflowOutflow(0.18, 0.33), viscosity=10.0)
        eq = swe.transcritical_equilibrium(params, 0.18, 0.33)
        d0 = np.zeros((n, 2))
        d0[:, 0] = 0.33 - topo.data
        t_end_default = 500.0
    u0 = Field(grid, d0, components=2)
    alpha = config.alpha or 2.0
    if config.scheme == "lf":
        op = swe.lf2_operator(params)
    elif config.scheme == "relf":
        op = swe.relf_operator(params, eq)
    elif config.scheme == "fl-relf":
        op = swe.fl_relf_operator(params, eq, alpha=alpha)
    else:
        raise ValueError(f"unknown swe scheme {config.scheme!r}")
    # paper convention dx/dt = 10, additionally capped by CFL 0.9
    if config.dt in (None, "auto"):
        a0 = np.max(np.abs(u0.data[:, 1] / u0.data[:, 0])
                    + np.sqrt(g_const * u0.data[:, 0]))
        a0 = max(a0, np.max(np.abs(eq.data[:, 1] / eq.data[:, 0])
                            + np.sqrt(g_const * eq.data[:, 0])))
        dt = min(grid.dx / 10.0, 0.9 * grid.dx / a0)
    else:
        dt = config.dt

    def diag(t, u):
        l1, linf = lp_errors(u.data[:, 0], eq.data[:, 0], grid)
        return DiagnosticsRecord(t=t, l1_error=l1, linf_error=linf,
                                 tv=total_variation(u.data[:, 0]),
                                 mass=np.sum(u.data[:, 0]) * grid.dx,
                                 momentum=np.sum(u.data[:, 1]) * grid.dx,
                                 froude_max=swe.froude_max(u, g_const))

    return RunSetup(grid, u0, op, TimeStepper("ssp_rk2", dt),
                    t_end=t_end_default if config.t_end is None else config.t_end,
                    sample_every=config.sample_every or
                    (0.05 if config.test == "lake" else 10.0),
                    diag=diag, components=2,
                    info={"equilibrium": eq, "params": params})


def build_advect(config):
    n = config.n_cells or 100
    grid = make_grid_1d(n, 0.0, 5.0)
    params = advection.AdvectionParams(1.0, grid, 1.0)
    u_eq = advection.advection_equilibrium(params)
    cfl = 0.4
    dt = cfl * grid.dx / params.a if config.dt in (None, "auto") else config.dt
    lim = LimiterConfig(alpha=config.alpha or 2.0)
    u0 = u_eq.copy()

    def diag(t, u):
        l1, linf = lp_errors(u.data, u_eq.data, grid)
        return DiagnosticsRecord(t=t, l1_error=l1, linf_error=linf,
                                 tv=total_variation(u.data),
                                 mass=np.sum(u.data) * grid.dx)

    if config.scheme == "limited":
        def step(u, t):
            return u.with_data(advection.equilibrium_limited_step(
                u.data, u_eq.data, params, dt, lim))

        return RunSetup(grid, u0, None, TimeStepper("forward_euler", dt),
                        t_end=5.0 if config.t_end is None else config.t_end,
                        sample_every=config.sample_every or 0.25, diag=diag,
                        stepper_fn=step, info={"equilibrium": u_eq,
                                               "params": params})
    if config.scheme == "tvd2":
        op = advection.advection_tvd2_operator(params)
        return RunSetup(grid, u0, op, TimeStepper("forward_euler", dt),
                        t_end=5.0 if config.t_end is None else config.t_end,
                        sample_every=config.sample_every or 0.25, diag=diag,
                        info={"equilibrium": u_eq, "params": params})
    raise ValueError(f"unknown advect scheme {config.scheme!r}")


BUILDERS = {"fp": build_fp, "pme": build_pme, "boltzmann": build_boltzmann,
            "swe": build_swe, "advect": build_advect}


def build_run(config):
    if config.model not in BUILDERS:
        raise ValueError(f"unknown model {config.model!r}")
    if config.test not in PRESETS[config.model]:
        raise ValueError(f"unknown test {config.test!r} for model "
                         f"{config.model!r}")
    return BUILDERS[config.model](config)
