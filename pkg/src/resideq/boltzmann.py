"""2D homogeneous Boltzmann collision operator for Maxwell molecules.

Fourier-Galerkin spectral evaluation on the velocity box [-L, L]^2: the
distribution is expanded in N x N Fourier modes, the collision integral is
truncated to relative velocities |g| <= 2R with the usual no-aliasing support
radius R = 2L/(3 + sqrt(2)), and the bilinear mode sum uses precomputed
kernel weights. Both angular integrals (collision direction and the angle of
the relative velocity) are discretized with the same M midpoint points on the
half circle, which keeps the gain/loss kernels exactly symmetric and makes
the zero mode of the output vanish to roundoff (discrete mass conservation).
The radial integral has a closed form.

The collision kernel carries the constant 1/(2 pi) (unit angular average),
the normalization under which the Bobylev-Krook-Wu solution relaxes with
S(t) = 1 - exp(-t/8)/2.
"""

from dataclasses import dataclass, field
import numpy as np

from .core import EquilibriumProfile, SemiDiscreteOperator, \
    residual_equilibrium_operator
from .mesh import Field, Grid2D, make_grid_2d

__all__ = [
    "SpectralConfig",
    "make_spectral_config",
    "maxwellian_2d",
    "bkw_field",
    "bkw_time_derivative",
    "gain_kernel_table",
    "build_kernel_modes",
    "collision_spectral",
    "collision_direct_sum",
    "collision_operator",
    "re_collision",
]

KERNEL_CONSTANT = 1.0 / (2.0 * np.pi)


@dataclass(frozen=True)
class SpectralConfig:
    n_modes: int
    half_width: float
    m_angles: int
    grid: Grid2D
    support_radius: float
    kernel: np.ndarray = field(repr=False)        # beta(l, m), (N^2, N^2)
    valid_pairs: np.ndarray = field(repr=False)   # flat indices into (N^2)^2
    pair_targets: np.ndarray = field(repr=False)  # flat k index per valid pair
    phase: np.ndarray = field(repr=False)         # half-cell shift, (N, N)


def maxwellian_2d(grid, rho=1.0, T=1.0):
    """Isotropic Gaussian rho/(2 pi T) exp(-|v|^2 / 2T) at cell centers."""
    X, Y = grid.meshgrid()
    return Field(grid, rho / (2.0 * np.pi * T)
                 * np.exp(-(X ** 2 + Y ** 2) / (2.0 * T)))


def _bkw_s(t):
    return 1.0 - np.exp(-t / 8.0) / 2.0


def bkw_field(grid, t):
    """Bobylev-Krook-Wu exact solution at time t on the velocity grid."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    S = _bkw_s(t)
    X, Y = grid.meshgrid()
    v2 = X ** 2 + Y ** 2
    gauss = np.exp(-v2 / (2.0 * S)) / (2.0 * np.pi * S * S)
    return Field(grid, gauss * (2.0 * S - 1.0 + (1.0 - S) / (2.0 * S) * v2))


def bkw_time_derivative(grid, t):
    """Exact d/dt of the BKW solution (chain rule through S(t))."""
    S = _bkw_s(t)
    dS = np.exp(-t / 8.0) / 16.0
    X, Y = grid.meshgrid()
    v2 = X ** 2 + Y ** 2
    gauss = np.exp(-v2 / (2.0 * S)) / (2.0 * np.pi * S * S)
    poly = 2.0 * S - 1.0 + (1.0 - S) / (2.0 * S) * v2
    dgauss = gauss * (-2.0 / S + v2 / (2.0 * S * S))
    dpoly = 2.0 - v2 / (2.0 * S * S)
    return Field(grid, dS * (dgauss * poly + gauss * dpoly))


def _radial_integral(c, X):
    """integral_0^X rho cos(c rho) d rho, even in c, series near c = 0."""
    cX = c * X
    small = np.abs(cX) < 1e-6
    c_safe = np.where(small, 1.0, c)
    val = (np.cos(cX) - 1.0 + cX * np.sin(cX)) / (c_safe * c_safe)
    return np.where(small, 0.5 * X * X - c * c * X ** 4 / 8.0, val)


def _mode_vectors(n):
    k = np.arange(n) - n // 2
    KX, KY = np.meshgrid(k, k, indexing="ij")
    return np.stack([KX.ravel(), KY.ravel()], axis=1)  # (n^2, 2)


def gain_kernel_table(n_modes, half_width, m_angles):
    """Gain table G(l, m): the double angular quadrature of
    exp(i pi/(2L) [ (l+m).g + |g| (l-m).w ]) over the direction of g and the
    scattering direction w (M midpoint points on the half circle each, even
    part doubled), times the closed-form radial integral over |g| <= 2R.

    Symmetric under pair exchange (l, m) -> (m, l); the loss kernel is its
    diagonal G(m, m).
    """
    N, L, M = n_modes, half_width, m_angles
    R = 2.0 * L / (3.0 + np.sqrt(2.0))
    X = 2.0 * R
    K = _mode_vectors(N)
    scale = np.pi / (2.0 * L)
    psi = (np.arange(M) + 0.5) * np.pi / M
    omega = np.stack([np.cos(psi), np.sin(psi)], axis=1)  # (M, 2)
    S = scale * (K[:, None, :] + K[None, :, :])           # (N^2, N^2, 2)
    D = scale * (K[:, None, :] - K[None, :, :])
    acc = np.zeros((N * N, N * N))
    for jp in range(M):
        A = S @ omega[jp]
        for j in range(M):
            B = D @ omega[j]
            acc += 0.5 * (_radial_integral(np.abs(A + B), X)
                          + _radial_integral(np.abs(A - B), X))
    return KERNEL_CONSTANT * (2.0 * np.pi / M) ** 2 * acc


def build_kernel_modes(n_modes, half_width, m_angles):
    """Kernel table beta(l, m) = gain(l, m) - gain(m, m), shape (N^2, N^2)."""
    gain = gain_kernel_table(n_modes, half_width, m_angles)
    return gain - np.diag(gain)[None, :]


def make_spectral_config(n_modes, half_width=8.0, m_angles=8):
    """Assemble grid, kernel table and pair bookkeeping for the mode sum."""
    if n_modes % 2 or n_modes <= 0:
        raise ValueError("n_modes must be even and positive")
    N, L = n_modes, float(half_width)
    grid = make_grid_2d(N, N, -L, L, -L, L)
    kernel = build_kernel_modes(N, L, m_angles)
    K = _mode_vectors(N)
    ksum = K[:, None, :] + K[None, :, :]
    inside = np.all((ksum >= -N // 2) & (ksum <= N // 2 - 1), axis=2)
    kflat = (ksum[:, :, 0] + N // 2) * N + (ksum[:, :, 1] + N // 2)
    valid = np.flatnonzero(inside.ravel())
    targets = kflat.ravel()[valid].astype(np.int64)
    k1 = np.arange(N) - N // 2
    p = np.exp(1j * np.pi * k1 * (1.0 - 1.0 / N))
    phase = np.outer(p, p)
    return SpectralConfig(N, L, m_angles, grid,
                         2.0 * L / (3.0 + np.sqrt(2.0)), kernel, valid,
                         targets, phase)


def _to_modes(config, values):
    N = config.n_modes
    return np.fft.fftshift(np.fft.fft2(values)) * config.phase / (N * N)


def _from_modes(config, modes):
    N = config.n_modes
    return np.real(np.fft.ifft2(np.fft.ifftshift(modes * np.conj(config.phase)))
                   * (N * N))


def collision_spectral(config, f):
    """Q(f, f) by the truncated Fourier mode sum with the kernel table.

    The data layout is (ny, nx) = (iy, ix); mode arrays here are indexed
    (kx, ky), so the transform output is transposed in and out.
    """
    N = config.n_modes
    fh = _to_modes(config, f.data).T.ravel()
    W = np.outer(fh, fh) * config.kernel
    w = W.ravel()[config.valid_pairs]
    Qre = np.bincount(config.pair_targets, weights=w.real, minlength=N * N)
    Qim = np.bincount(config.pair_targets, weights=w.imag, minlength=N * N)
    Qh = (Qre + 1j * Qim).reshape(N, N).T
    return f.with_data(_from_modes(config, Qh))


def collision_direct_sum(config, f):
    """Independent O(N^4) reference evaluation of the same mode sum.

    Explicit loops over mode pairs with direct bound checks; shares only the
    kernel table with the production path.
    """
    N = config.n_modes
    half = N // 2
    fh = _to_modes(config, f.data).T
    kernel = config.kernel.reshape(N, N, N, N)
    Qh = np.zeros((N, N), dtype=complex)
    for i1 in range(N):
        for i2 in range(N):
            for j1 in range(N):
                for j2 in range(N):
                    k1 = (i1 - half) + (j1 - half)
                    k2 = (i2 - half) + (j2 - half)
                    if -half <= k1 <= half - 1 and -half <= k2 <= half - 1:
                        Qh[k1 + half, k2 + half] += (fh[i1, i2] * fh[j1, j2]
                                                     * kernel[i1, i2, j1, j2])
    return f.with_data(_from_modes(config, Qh.T))


def collision_operator(config):
    """Collision right-hand side as a semi-discrete operator."""

    def fn(u, t):
        return collision_spectral(config, u)

    return SemiDiscreteOperator("boltzmann_spectral", config.n_modes, False,
                                fn)


def re_collision(config, f_eq):
    """Residual-equilibrium wrapper of the spectral collision operator."""
    op = collision_operator(config)
    return residual_equilibrium_operator(op, EquilibriumProfile.compute(op,
                                                                        f_eq))
