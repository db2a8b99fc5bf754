"""Residual equilibrium wrappers and explicit time integration.

The central construction: given any semi-discrete right-hand side G_h and a
discrete steady state u_eq, the corrected operator

    G_h(u) - G_h(u_eq)

has u_eq as an exact fixed point (identical-value subtraction), while keeping
the formal order of G_h. A time-dependent variant subtracts the residual of a
reference trajectory instead, so the trajectory itself is propagated up to
time-integration error only.
"""

from dataclasses import dataclass
from typing import Callable, Optional
import numpy as np

from .mesh import Field

__all__ = [
    "SemiDiscreteOperator",
    "EquilibriumProfile",
    "ReferenceTrajectory",
    "TimeStepper",
    "BlowUpError",
    "residual_equilibrium_operator",
    "time_dependent_residual_operator",
    "advance",
    "run_simulation",
    "SimulationResult",
]

STEPPER_KINDS = ("forward_euler", "ssp_rk2", "ssp_rk3")


class BlowUpError(RuntimeError):
    """Non-finite values appeared during time integration."""

    def __init__(self, t, detail=""):
        super().__init__(f"blow-up detected at t={t:.6g} {detail}".rstrip())
        self.t = t


@dataclass(frozen=True)
class SemiDiscreteOperator:
    """An evaluable right-hand side u -> G_h(u) with scheme metadata.

    fn has signature fn(u: Field, t: float) -> Field; autonomous operators
    ignore t.
    """

    name: str
    order: int
    is_linear: bool
    fn: Callable[[Field, float], Field]

    def __call__(self, u, t=0.0):
        out = self.fn(u, t)
        if not out.same_layout(u):
            raise ValueError(f"operator {self.name} changed field layout")
        return out


@dataclass(frozen=True)
class EquilibriumProfile:
    """A discrete steady state together with its precomputed residual."""

    u_eq: Field
    residual: Field

    @classmethod
    def compute(cls, op, u_eq):
        return cls(u_eq=u_eq, residual=op(u_eq, 0.0))


@dataclass(frozen=True)
class ReferenceTrajectory:
    """A discrete reference solution t -> u_s(t) and its exact d/dt."""

    u_s: Callable[[float], Field]
    du_s_dt: Callable[[float], Field]


@dataclass(frozen=True)
class TimeStepper:
    kind: str
    dt: float

    def __post_init__(self):
        if self.kind not in STEPPER_KINDS:
            raise ValueError(f"unknown stepper kind {self.kind!r}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")


def residual_equilibrium_operator(op, eq):
    """Wrap op so that eq.u_eq becomes an exact fixed point.

    Returns the operator u -> op(u) - op(u_eq), same order and linearity flag.
    """
    if not eq.u_eq.same_layout(eq.residual):
        raise ValueError("equilibrium profile has inconsistent layout")
    r = eq.residual

    def fn(u, t):
        if not u.same_layout(eq.u_eq):
            raise ValueError("field layout does not match equilibrium profile")
        return op(u, t) - r

    return SemiDiscreteOperator(name=f"re[{op.name}]", order=op.order,
                                is_linear=op.is_linear, fn=fn)


def time_dependent_residual_operator(op, traj):
    """Subtract the residual of a reference trajectory at each stage time.

    The wrapped operator is u, t -> op(u, t) - [op(u_s(t), t) - u_s'(t)], so
    evaluating at u = u_s(t) returns exactly u_s'(t).
    """

    def fn(u, t):
        u_ref = traj.u_s(t)
        return op(u, t) - op(u_ref, t) + traj.du_s_dt(t)

    return SemiDiscreteOperator(name=f"re_t[{op.name}]", order=op.order,
                                is_linear=op.is_linear, fn=fn)


def _check_stage(u, t):
    if not np.all(np.isfinite(u.data)):
        raise BlowUpError(t)
    return u


def advance(stepper, op, u, t, dt=None):
    """One explicit step of size dt (defaults to stepper.dt) from time t."""
    h = stepper.dt if dt is None else dt
    if stepper.kind == "forward_euler":
        return _check_stage(u.axpy(h, op(u, t)), t + h)
    if stepper.kind == "ssp_rk2":
        u1 = _check_stage(u.axpy(h, op(u, t)), t + h)
        return _check_stage(0.5 * u + 0.5 * u1.axpy(h, op(u1, t + h)), t + h)
    # ssp_rk3 (Shu-Osher convex combination of Euler stages)
    u1 = _check_stage(u.axpy(h, op(u, t)), t + h)
    u2 = _check_stage(0.75 * u + 0.25 * u1.axpy(h, op(u1, t + h)), t + 0.5 * h)
    return _check_stage(u * (1.0 / 3.0) +
                        (2.0 / 3.0) * u2.axpy(h, op(u2, t + 0.5 * h)), t + h)


@dataclass
class SimulationResult:
    u: Field
    t: float
    n_steps: int
    samples: list


def run_simulation(op, u0, stepper, t_end, sample_every=None, hook=None,
                   dt_fn: Optional[Callable] = None):
    """Advance u0 to t_end, truncating the final step to land on t_end.

    hook(t, u) is invoked at t=0, whenever a multiple of sample_every is
    reached (at the first step ending on or past it), and at t_end; non-None
    return values are collected into the result's samples list. dt_fn(u), if
    given, supplies an adaptive step size each step (capped by stepper.dt).
    """
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    u, t, n = u0, 0.0, 0
    samples = []

    def fire(t, u):
        if hook is not None:
            rec = hook(t, u)
            if rec is not None:
                samples.append(rec)

    fire(0.0, u)
    if t_end == 0:
        return SimulationResult(u, 0.0, 0, samples)
    next_sample = sample_every if sample_every else np.inf
    eps = 1e-12 * max(1.0, t_end)
    while t < t_end - eps:
        h = stepper.dt if dt_fn is None else min(stepper.dt, dt_fn(u))
        h = min(h, t_end - t)
        u = advance(stepper, op, u, t, dt=h)
        t += h
        n += 1
        if t >= t_end - eps:
            t = t_end
        if t >= next_sample - eps:
            fire(t, u)
            while next_sample <= t + eps:
                next_sample += sample_every
        elif t == t_end:
            fire(t, u)
    return SimulationResult(u, t, n, samples)
