"""Equilibrium flux limiter and equilibrium indicator.

The limiter phi(r) blends interface fluxes between the standard scheme
(phi ~ 0, far from equilibrium) and the equilibrium-corrected scheme
(phi ~ 1, near equilibrium). It satisfies the TVD-compatible bound
0 <= phi(r) <= min(1, r) for r > 0.
"""

from dataclasses import dataclass
import numpy as np

__all__ = ["LimiterConfig", "phi", "indicator_scalar", "indicator_system"]


@dataclass(frozen=True)
class LimiterConfig:
    alpha: float = 2.0
    epsilon: float = 1e-14

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError("alpha must exceed 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")


def phi(r, config=LimiterConfig()):
    """phi(r) = r^alpha on 0 < r <= 1, r^-alpha on r > 1, 0 on r <= 0.

    Accepts scalars or arrays.
    """
    r = np.asarray(r, dtype=float)
    a = config.alpha
    with np.errstate(invalid="ignore"):
        out = np.where(r <= 0.0, 0.0,
                       np.where(r <= 1.0, np.maximum(r, 0.0) ** a,
                                np.maximum(r, 1.0) ** (-a)))
    return float(out) if out.ndim == 0 else out


def indicator_scalar(dU_num, dU_eq, config=LimiterConfig(), scale=1.0):
    """Equilibrium indicator r = dU_num / dU_eq with degenerate-case rules.

    Both differences negligible (vs epsilon*scale): the cell sits on the
    discrete equilibrium, r = 1 and the full correction applies. Only the
    equilibrium difference negligible: return a large positive ratio so
    phi(r) ~ 0.
    """
    tol = config.epsilon * scale
    if abs(dU_eq) > tol:
        return dU_num / dU_eq
    if abs(dU_num) <= tol:
        return 1.0
    return abs(dU_num) / tol


def indicator_system(dF_num, dF_eq, config=LimiterConfig(), scale=1.0):
    """Vector extension: r = |dF_num|_1 / |dF_eq|_1, same degenerate rules.

    The plain ratio (no regularized denominator) makes r exactly 1 when the
    two flux differences are bitwise equal, which is what exact
    well-balancing of the flux-limited scheme requires.
    """
    tol = config.epsilon * scale
    num = float(np.sum(np.abs(dF_num)))
    den = float(np.sum(np.abs(dF_eq)))
    if den > tol:
        return num / den
    if num <= tol:
        return 1.0
    return num / tol
