"""Entropy functionals, error norms, total variation and rate fitting.

Entropy magnitudes are reported (|.|), since the sign conventions of the
various relative entropies conflict with their decay-toward-zero usage.
"""

from dataclasses import dataclass
from typing import Optional
import numpy as np

__all__ = [
    "DiagnosticsRecord",
    "relative_entropy_fp",
    "relative_entropy_pme",
    "relative_entropy_boltzmann",
    "lp_errors",
    "total_variation",
    "fit_exponential_rate",
]


@dataclass
class DiagnosticsRecord:
    """One time sample of the standard run diagnostics (CSV row)."""

    t: float
    entropy: Optional[float] = None
    l1_error: Optional[float] = None
    linf_error: Optional[float] = None
    tv: Optional[float] = None
    mass: Optional[float] = None
    momentum: Optional[float] = None
    energy: Optional[float] = None
    neg_cells: Optional[int] = None
    froude_max: Optional[float] = None


def relative_entropy_fp(u, u_eq, grid):
    """|integral of u log(u/u_eq)| by midpoint quadrature.

    0 log 0 = 0; negative-u cells contribute through |u|.
    """
    ud = np.abs(np.asarray(u, dtype=float).ravel())
    ed = np.asarray(u_eq, dtype=float).ravel()
    pos = ud > 0.0
    if np.any(ed[pos] <= 0.0):
        raise ValueError("u_eq must be positive wherever u is nonzero")
    s = np.sum(ud[pos] * np.log(ud[pos] / ed[pos]))
    return abs(s * grid.cell_volume)


def relative_entropy_pme(u, u_eq, grid, m):
    """|integral of (u - u_eq) + 2/(m-1) (u^m - u_eq^m)|, midpoint rule."""
    if not m > 1:
        raise ValueError("m must exceed 1")
    ud = np.asarray(u, dtype=float).ravel()
    ed = np.asarray(u_eq, dtype=float).ravel()
    um = np.maximum(ud, 0.0) ** m
    em = np.maximum(ed, 0.0) ** m
    s = np.sum((ud - ed) + (2.0 / (m - 1.0)) * (um - em))
    return abs(s * grid.cell_volume)


def relative_entropy_boltzmann(f, M, grid):
    """(|integral over f>0 of f log(f/M)|, count of negative cells).

    Negative-f cells (spectral truncation artifacts) are excluded from the
    quadrature and counted instead.
    """
    fd = np.asarray(f, dtype=float).ravel()
    Md = np.asarray(M, dtype=float).ravel()
    if np.any(Md <= 0.0):
        raise ValueError("reference Maxwellian must be positive")
    neg = int(np.sum(fd < 0.0))
    pos = fd > 0.0
    s = np.sum(fd[pos] * np.log(fd[pos] / Md[pos]))
    return abs(s * grid.cell_volume), neg


def lp_errors(u, u_ref, grid):
    """(L1, Linf) distance: volume-weighted absolute sum and max."""
    d = np.abs(np.asarray(u, dtype=float) - np.asarray(u_ref, dtype=float))
    return float(np.sum(d) * grid.cell_volume), float(np.max(d))


def total_variation(u):
    """TV(u) = sum_i |u_{i+1} - u_i| for a 1D scalar array."""
    ud = np.asarray(u, dtype=float).ravel()
    return float(np.sum(np.abs(np.diff(ud))))


def fit_exponential_rate(series, window):
    """Positive decay rate lambda from a least-squares fit of log(value) vs t.

    series: iterable of (t, value); window: (t_lo, t_hi) inclusive. Requires
    at least 3 samples with positive values inside the window.
    """
    t_lo, t_hi = window
    pts = [(t, v) for t, v in series if t_lo <= t <= t_hi]
    if len(pts) < 3:
        raise ValueError("need at least 3 samples in the fit window")
    t = np.array([p[0] for p in pts])
    v = np.array([p[1] for p in pts])
    if np.any(v <= 0.0):
        raise ValueError("values must be positive inside the fit window")
    slope = np.polyfit(t, np.log(v), 1)[0]
    return -float(slope)
