"""1D shallow water equations with topography.

Scheme: flux-limited local Lax-Friedrichs (Rusanov low-order flux plus a
Van-Leer-limited anti-diffusive correction toward the centered flux,
componentwise), centered topography source -g h dB/dx, two ghost cells per
side. On top of it sit the equilibrium-corrected variants: the global
flux-and-source subtraction (RELF) and the per-cell flux-limited blend
(FL-RELF) driven by the equilibrium indicator.

Equilibria: the lake at rest (h = 1 - B, hv = 0) and the transcritical flow
with shock, built from criticality at the bump crest, Bernoulli branches and
the Rankine-Hugoniot jump condition.
"""

from dataclasses import dataclass
from typing import Callable, Optional
import numpy as np
from scipy.optimize import brentq

from .core import SemiDiscreteOperator
from .limiter import LimiterConfig, phi as eq_phi
from .mesh import Field, Grid1D

__all__ = [
    "ReflectiveWalls",
    "Transmissive",
    "FarFieldLevel",
    "InflowOutflow",
    "SWEParams",
    "swe_flux",
    "van_leer",
    "lake_bump",
    "goutal_maurel_bump",
    "lf2_operator",
    "lake_at_rest_equilibrium",
    "TranscriticalProfile",
    "transcritical_profile",
    "transcritical_equilibrium",
    "relf_operator",
    "fl_relf_operator",
    "froude_max",
]


# ---------------------------------------------------------------------------
# parameters and boundary types

@dataclass(frozen=True)
class ReflectiveWalls:
    pass


@dataclass(frozen=True)
class Transmissive:
    """Non-reflecting open boundaries (constant extrapolation both sides)."""


@dataclass(frozen=True)
class FarFieldLevel:
    """Open subcritical boundaries onto a lake at rest at the given level.

    Characteristic ghosts: the outgoing Riemann invariant v +- 2 sqrt(g h) is
    extrapolated from the interior, the incoming one is set from the far
    state (h = level, v = 0). Outgoing waves radiate away while the
    free-surface level stays anchored; a plain zero-gradient boundary leaves
    an arbitrary shifted-level steady state behind, and pinning h alone
    reflects the waves.
    """

    level: float = 1.0


@dataclass(frozen=True)
class InflowOutflow:
    q_in: float
    h_out: float


@dataclass(frozen=True)
class SWEParams:
    """Problem data plus the numerical-flux dissipation choice.

    viscosity None selects the local Rusanov speed max(|v| + sqrt(gh)) of
    the two interface sides; a number selects the classical Lax-Friedrichs
    constant coefficient (the run convention dx/dt = 10 makes that 10).
    """

    g: float
    grid: Grid1D
    topography: Field
    boundary: object = ReflectiveWalls()
    viscosity: Optional[float] = None

    def __post_init__(self):
        if not self.g > 0:
            raise ValueError("gravity must be positive")
        if not np.all(np.isfinite(self.topography.data)):
            raise ValueError("topography must be finite")
        if self.viscosity is not None and not self.viscosity > 0:
            raise ValueError("viscosity must be positive")


def lake_bump(x):
    """Cosine bump 0.25 (cos(pi (x - 0.5)/0.1) + 1) on |x - 0.5| < 0.1."""
    x = np.asarray(x, dtype=float)
    b = 0.25 * (np.cos(np.pi * (x - 0.5) / 0.1) + 1.0)
    return np.where(np.abs(x - 0.5) < 0.1, b, 0.0)


def goutal_maurel_bump(x):
    """Parabolic bump 0.2 - 0.05 (x - 10)^2 on |x - 10| < 2."""
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x - 10.0) < 2.0, 0.2 - 0.05 * (x - 10.0) ** 2, 0.0)


def swe_flux(state_cell, g):
    """Physical flux (hv, hv^2/h + g h^2/2) of one cell state (h, hv)."""
    h, hv = float(state_cell[0]), float(state_cell[1])
    if h <= 0.0:
        raise ValueError("dry state: h <= 0")
    return np.array([hv, hv * hv / h + 0.5 * g * h * h])


def van_leer(theta):
    """Van Leer limiter (theta + |theta|) / (1 + |theta|)."""
    theta = np.asarray(theta, dtype=float)
    out = (theta + np.abs(theta)) / (1.0 + np.abs(theta))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# flux kernel

def _farfield_ghost(g, w_cell, level, side):
    """Characteristic subcritical ghost against a lake at rest at `level`."""
    h, hv = w_cell
    v = hv / h
    c_far = np.sqrt(g * level)
    if side == "left":
        # incoming invariant v + 2c from the far state, outgoing v - 2c
        r_in = 2.0 * c_far
        r_out = v - 2.0 * np.sqrt(g * h)
    else:
        r_in = -2.0 * c_far
        r_out = v + 2.0 * np.sqrt(g * h)
        r_in, r_out = r_out, r_in      # keep (plus, minus) ordering below
    v_g = 0.5 * (r_in + r_out)
    c_g = 0.25 * (r_in - r_out)
    h_g = c_g * c_g / g
    return (h_g, h_g * v_g)


def _extend(params, w):
    """State (n, 2) -> (n+4, 2) with two ghost cells per side."""
    n = w.shape[0]
    ext = np.empty((n + 4, 2))
    ext[2:-2] = w
    bc = params.boundary
    if isinstance(bc, ReflectiveWalls):
        ext[1] = w[0] * np.array([1.0, -1.0])
        ext[0] = w[1] * np.array([1.0, -1.0])
        ext[-2] = w[-1] * np.array([1.0, -1.0])
        ext[-1] = w[-2] * np.array([1.0, -1.0])
    elif isinstance(bc, Transmissive):
        ext[0] = ext[1] = w[0]
        ext[-1] = ext[-2] = w[-1]
    elif isinstance(bc, FarFieldLevel):
        ext[0] = ext[1] = _farfield_ghost(params.g, w[0], bc.level, "left")
        ext[-1] = ext[-2] = _farfield_ghost(params.g, w[-1], bc.level, "right")
    elif isinstance(bc, InflowOutflow):
        ext[0] = ext[1] = (w[0, 0], bc.q_in)      # fix hv, extrapolate h
        ext[-1] = ext[-2] = (bc.h_out, w[-1, 1])  # fix h, extrapolate hv
    else:
        raise TypeError(f"unknown boundary type {type(bc).__name__}")
    return ext


def _extend_topography(params):
    B = params.topography.data
    if isinstance(params.boundary, ReflectiveWalls):
        return np.concatenate(([B[1], B[0]], B, [B[-1], B[-2]]))
    return np.concatenate(([B[0], B[0]], B, [B[-1], B[-1]]))


def _interface_fluxes(params, ext):
    """Rusanov fluxes on Van-Leer-reconstructed states, shape (n+1, 2).

    Second-order via MUSCL: per-component limited slopes s_i =
    psi(theta) (u_{i+1} - u_i) with theta the backward/forward jump ratio,
    interface states u_i + s_i/2 and u_{i+1} - s_{i+1}/2, then the local
    Lax-Friedrichs flux with the larger |v| + sqrt(gh) of the two sides.
    """
    g = params.g
    if np.any(ext[:, 0] <= 0.0):
        raise ValueError("dry state: h <= 0")
    d = np.diff(ext, axis=0)            # d[k] = ext[k+1] - ext[k]
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = np.where(d[1:] != 0.0, d[:-1] / d[1:], 0.0)
    slope = van_leer(theta) * d[1:]     # limited slope of ext cells 1..n+2
    wL = ext[1:-2] + 0.5 * slope[:-1]   # left state at each interface
    wR = ext[2:-1] - 0.5 * slope[1:]    # right state
    hL, hvL = wL[:, 0], wL[:, 1]
    hR, hvR = wR[:, 0], wR[:, 1]
    if np.any(hL <= 0.0) or np.any(hR <= 0.0):
        raise ValueError("dry state: reconstructed h <= 0")
    vL, vR = hvL / hL, hvR / hR
    if params.viscosity is None:
        a = np.maximum(np.abs(vL) + np.sqrt(g * hL),
                       np.abs(vR) + np.sqrt(g * hR))[:, None]
    else:
        a = params.viscosity
    FL = np.stack([hvL, hvL * vL + 0.5 * g * hL * hL], axis=1)
    FR = np.stack([hvR, hvR * vR + 0.5 * g * hR * hR], axis=1)
    return 0.5 * (FL + FR) - 0.5 * a * (wR - wL)


def _source(params, ext, B_ext):
    """Centered topography source (0, -g h dB/dx), shape (n, 2)."""
    h = ext[2:-2, 0]
    dB = (B_ext[3:-1] - B_ext[1:-3]) / (2.0 * params.grid.dx)
    out = np.zeros((h.size, 2))
    out[:, 1] = -params.g * h * dB
    return out


def _eq_flux_source(params, eq_state):
    ext = _extend(params, eq_state.data)
    B_ext = _extend_topography(params)
    return _interface_fluxes(params, ext), _source(params, ext, B_ext)


def lf2_operator(params):
    """Second-order flux-limited local Lax-Friedrichs with topography source."""
    B_ext = _extend_topography(params)
    dx = params.grid.dx

    def fn(u, t):
        ext = _extend(params, u.data)
        F = _interface_fluxes(params, ext)
        R = _source(params, ext, B_ext)
        return u.with_data(-(F[1:] - F[:-1]) / dx + R)

    return SemiDiscreteOperator("lf2", 2, False, fn)


def relf_operator(params, eq_state):
    """Flux-and-source subtraction about eq_state (exact fixed point there)."""
    B_ext = _extend_topography(params)
    dx = params.grid.dx
    F_eq, R_eq = _eq_flux_source(params, eq_state)

    def fn(u, t):
        ext = _extend(params, u.data)
        F = _interface_fluxes(params, ext) - F_eq
        R = _source(params, ext, B_ext) - R_eq
        return u.with_data(-(F[1:] - F[:-1]) / dx + R)

    return SemiDiscreteOperator("relf", 2, False, fn)


def _indicator_cells(dF_num, dF_eq, F, F_eq, config):
    """Vectorized per-cell equilibrium indicator on flux differences.

    Same three-branch rule as limiter.indicator_system: plain ratio when the
    equilibrium difference is significant (exactly 1 at equilibrium), 1 when
    both differences are negligible, a large ratio otherwise.
    """
    num = np.sum(np.abs(dF_num), axis=1)
    den = np.sum(np.abs(dF_eq), axis=1)
    istf = np.abs(F) + np.abs(F_eq)
    stencil = np.sum(istf, axis=1)
    scale = 1.0 + np.maximum(stencil[:-1], stencil[1:])
    tol = config.epsilon * scale
    safe_den = np.where(den > tol, den, 1.0)
    return np.where(den > tol, num / safe_den,
                    np.where(num <= tol, 1.0, num / tol))


def fl_relf_operator(params, eq_state, alpha=2.0, epsilon=1e-14,
                     phi_override: Optional[Callable] = None):
    """Per-cell flux-limited blend between lf2 and relf.

    Cell i uses fluxes F_um - phi_i F_eq at both its interfaces and source
    R_i - phi_i R_eq_i, with phi_i from the equilibrium indicator on the cell
    flux differences. phi_override(r_array) replaces the limiter (used by the
    bit-for-bit consistency checks).
    """
    config = LimiterConfig(alpha=alpha, epsilon=epsilon)
    B_ext = _extend_topography(params)
    dx = params.grid.dx
    F_eq, R_eq = _eq_flux_source(params, eq_state)
    dF_eq = F_eq[1:] - F_eq[:-1]

    def fn(u, t):
        ext = _extend(params, u.data)
        F = _interface_fluxes(params, ext)
        R = _source(params, ext, B_ext)
        r = _indicator_cells(F[1:] - F[:-1], dF_eq, F, F_eq, config)
        ph = (eq_phi(r, config) if phi_override is None
              else phi_override(r))[:, None]
        corr_right = F[1:] - ph * F_eq[1:]
        corr_left = F[:-1] - ph * F_eq[:-1]
        corr_source = R - ph * R_eq
        return u.with_data(-(corr_right - corr_left) / dx + corr_source)

    return SemiDiscreteOperator("fl_relf", 2, False, fn)


# ---------------------------------------------------------------------------
# equilibria

def lake_at_rest_equilibrium(params):
    """Flat free surface: h = 1 - B, hv = 0."""
    B = params.topography.data
    if np.any(B >= 1.0):
        raise ValueError("topography reaches the free surface")
    data = np.zeros((params.grid.n_cells, 2))
    data[:, 0] = 1.0 - B
    return Field(params.grid, data, components=2)


def _bernoulli_depth(q, g, E, B, branch):
    """Depth solving q^2/(2h^2) + g (h + B) = E on the requested branch.

    branch: 'sub' (h > h_c) or 'super' (h < h_c), h_c the critical depth.
    Returns h_c when E sits on the criticality boundary to roundoff.
    """
    h_c = (q * q / g) ** (1.0 / 3.0)
    E_min = q * q / (2.0 * h_c * h_c) + g * (h_c + B)
    gap = E - E_min
    if gap < -1e-11 * max(1.0, abs(E)):
        raise ValueError(f"no depth on branch {branch!r}: energy below "
                         f"criticality by {-gap:.3e}")
    if gap <= 0.0:
        return h_c

    def f(h):
        return q * q / (2.0 * h * h) + g * (h + B) - E

    if branch == "sub":
        hi = (E - g * B) / g + h_c
        return brentq(f, h_c, hi, xtol=1e-15, rtol=8.9e-16)
    if branch == "super":
        lo = 1e-14 * h_c
        return brentq(f, lo, h_c, xtol=1e-15, rtol=8.9e-16)
    raise ValueError(f"unknown branch {branch!r}")


@dataclass(frozen=True)
class TranscriticalProfile:
    """Piecewise-smooth steady transcritical state with a stationary shock."""

    q: float
    h_out: float
    g: float
    h_crit: float
    E_up: float
    E_down: float
    x_crest: float
    x_shock: float
    topo_fn: Callable

    def h_upstream(self, x):
        """Depth on the branch through the crest (sub- then supercritical)."""
        branch = "sub" if x < self.x_crest else "super"
        return _bernoulli_depth(self.q, self.g, self.E_up,
                                float(self.topo_fn(x)), branch)

    def h_downstream(self, x):
        """Subcritical depth on the outflow branch."""
        return _bernoulli_depth(self.q, self.g, self.E_down,
                                float(self.topo_fn(x)), "sub")

    def rankine_hugoniot_defect(self, x):
        """q^2 (1/h- - 1/h+) + g/2 (h-^2 - h+^2) across the shock at x."""
        hm = self.h_upstream(x)
        hp = self.h_downstream(x)
        return (self.q ** 2 * (1.0 / hm - 1.0 / hp)
                + 0.5 * self.g * (hm * hm - hp * hp))

    def depth(self, x):
        if x < self.x_shock:
            return self.h_upstream(x)
        return self.h_downstream(x)


def transcritical_profile(params, q, h_out, topo_fn=goutal_maurel_bump,
                          x_crest=10.0):
    """Locate the stationary shock and assemble the steady branches.

    The flow is critical at the bump crest, which fixes the upstream
    Bernoulli constant; the outflow depth fixes the downstream one; the shock
    position is the root of the Rankine-Hugoniot defect in the bump's lee.
    """
    g = params.g
    h_c = (q * q / g) ** (1.0 / 3.0)
    if not q > 0:
        raise ValueError("q must be positive")
    if not h_out > h_c:
        raise ValueError("outflow depth must be subcritical (h_out > h_c)")
    B_crest = float(topo_fn(x_crest))
    E_up = q * q / (2.0 * h_c * h_c) + g * (h_c + B_crest)
    E_down = q * q / (2.0 * h_out * h_out) + g * h_out
    prof = TranscriticalProfile(q, h_out, g, h_c, E_up, E_down, x_crest,
                                x_shock=np.nan, topo_fn=topo_fn)
    # downstream branch exists only where its energy clears criticality
    B_ok = (E_down - q * q / (2.0 * h_c * h_c) - g * h_c) / g
    xs = np.linspace(x_crest, params.grid.x_max, 4001)[1:]
    xs = xs[np.asarray(topo_fn(xs)) < B_ok - 1e-12]
    if xs.size < 2:
        raise ValueError("no admissible shock position in the bump's lee")
    vals = np.array([prof.rankine_hugoniot_defect(x) for x in xs])
    sign_change = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
    if sign_change.size == 0:
        raise ValueError("no admissible shock position in the bump's lee")
    k = sign_change[0]
    x_shock = brentq(prof.rankine_hugoniot_defect, xs[k], xs[k + 1],
                     xtol=1e-13, rtol=8.9e-16)
    return TranscriticalProfile(q, h_out, g, h_c, E_up, E_down, x_crest,
                                x_shock, topo_fn)


def transcritical_equilibrium(params, q, h_out, topo_fn=goutal_maurel_bump,
                              x_crest=10.0):
    """Steady transcritical state sampled at the cell centers."""
    prof = transcritical_profile(params, q, h_out, topo_fn, x_crest)
    data = np.empty((params.grid.n_cells, 2))
    data[:, 0] = [prof.depth(x) for x in params.grid.centers]
    data[:, 1] = q
    return Field(params.grid, data, components=2)


def froude_max(state, g):
    """max |v| / sqrt(g h) over the cells."""
    h, hv = state.data[:, 0], state.data[:, 1]
    return float(np.max(np.abs(hv / h) / np.sqrt(g * h)))
