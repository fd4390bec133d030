"""Wigner-state constructors: Gaussian packets, superpositions, equilibria.

A WignerState stores either a full 2x2 matrix field (complex, shape
(n_x, n_y, n_px, n_py, 2, 2)) or a scalar field (real, shape
(n_x, n_y, n_px, n_py)).  A scalar state represents the half-trace density of
a sigma_0-proportional matrix state; scalar observables of f and of
F = f*sigma_0 then agree without factor juggling.

Momentum arguments are stored p/hbar numbers (nm^-1), consistent with the
grid module; all closed forms below are written so the explicit hbar factors
cancel in those units except for the overall (hbar*pi)^-2 normalization.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .constants import KB
from .grid import PhaseSpaceGrid
from .hamiltonian import HamiltonianSymbol
from .pauli import DEGENERACY_EPS, reconstruct


@dataclass
class WignerState:
    """Phase-space state: values on the 4D grid plus a time stamp (fs)."""

    grid: PhaseSpaceGrid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        shape = self.grid.shape
        if self.values.shape == shape:
            if np.iscomplexobj(self.values):
                raise ValueError("scalar states store real values")
        elif self.values.shape == shape + (2, 2):
            if not np.iscomplexobj(self.values):
                self.values = self.values.astype(np.complex128)
        else:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {shape}")

    @property
    def is_scalar(self) -> bool:
        return self.values.ndim == 4

    def copy(self) -> "WignerState":
        return WignerState(self.grid, self.values.copy(), self.time)

    def mass(self) -> float:
        """Full phase-space integral: Tr F for matrix states, f for scalar."""
        w = self.grid.cell_volume
        if self.is_scalar:
            return float(np.sum(self.values)) * w
        return float(np.sum(self.values[..., 0, 0] + self.values[..., 1, 1]).real) * w

    def hermiticity_residue(self) -> float:
        """max-norm deviation from F = F^dagger (realness for scalar states)."""
        if self.is_scalar:
            return 0.0
        diff = self.values - np.conj(np.swapaxes(self.values, -1, -2))
        return float(np.max(np.abs(diff)))

    def check_finite(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise FloatingPointError("state contains non-finite values")


def _check_spin_weight(spin: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    spin = np.asarray(spin, dtype=complex)
    if spin.shape != (2, 2):
        raise ValueError("spin weight must be a 2x2 matrix")
    if np.max(np.abs(spin - spin.conj().T)) > tol:
        raise ValueError("spin weight must be Hermitian")
    if np.min(np.linalg.eigvalsh(spin)) < -tol:
        raise ValueError("spin weight must be positive semi-definite")
    return spin


def _warn_if_truncated(state: WignerState, expected: float,
                       what: str, tol: float = 1e-6) -> None:
    if expected == 0.0:
        return
    lost = abs(state.mass() - expected) / abs(expected)
    if lost >= tol:
        warnings.warn(f"{what}: {lost:.2e} of the mass falls outside the box",
                      stacklevel=3)


def gaussian(grid: PhaseSpaceGrid, center, mean_p, widths,
             spin=None, time: float = 0.0) -> WignerState:
    """Minimum-uncertainty packet.

    W(x, p) = (hbar pi)^-2 exp(-2(x-xb)^2/Dx^2 - 2(y-yb)^2/Dy^2
                               - Dx^2 (p_x-pb_x)^2 / 2 hbar^2 - ...),
    the Wigner transform of a Gaussian wave packet; its trace integral is the
    trace of the spin weight.  spin=None returns the scalar field W itself.
    """
    xb, yb = center
    kxb, kyb = mean_p
    dx_w, dy_w = widths
    if dx_w <= 0 or dy_w <= 0:
        raise ValueError("packet widths must be positive")
    hb = grid.hbar
    x, y = grid.position_mesh()
    kx, ky = grid.momentum_mesh()
    wx = np.exp(-2.0 * (x - xb) ** 2 / dx_w**2 - 2.0 * (y - yb) ** 2 / dy_w**2)
    wk = np.exp(-0.5 * dx_w**2 * (kx - kxb) ** 2
                - 0.5 * dy_w**2 * (ky - kyb) ** 2)
    w = wx[:, :, None, None] * wk[None, None, :, :] / (hb * np.pi) ** 2
    if spin is None:
        state = WignerState(grid, w, time)
        _warn_if_truncated(state, 1.0, "gaussian packet")
        return state
    spin = _check_spin_weight(spin)
    state = WignerState(grid, w[..., None, None] * spin, time)
    _warn_if_truncated(state, float(np.trace(spin).real), "gaussian packet")
    return state


def _cross_wigner(grid: PhaseSpaceGrid, c1, c2, width: float) -> np.ndarray:
    """Wigner transform of the pair (G_{x1,p1}, G_{x2,p2}), complex field.

    Per-axis closed form with common width; the phase is
    exp(i [x.(k1-k2) + (k - (k1+k2)/2).(x2-x1)]) in stored momentum units.
    """
    x1, k1 = np.asarray(c1[0], float), np.asarray(c1[1], float)
    x2, k2 = np.asarray(c2[0], float), np.asarray(c2[1], float)
    hb = grid.hbar
    x, y = grid.position_mesh()
    kx, ky = grid.momentum_mesh()
    xm = 0.5 * (x1 + x2)
    km = 0.5 * (k1 + k2)
    envelope_x = np.exp(-2.0 * ((x - xm[0]) ** 2 + (y - xm[1]) ** 2) / width**2)
    envelope_k = np.exp(-0.5 * width**2 * ((kx - km[0]) ** 2 + (ky - km[1]) ** 2))
    phase_x = np.exp(1j * (x * (k1[0] - k2[0]) + y * (k1[1] - k2[1])))
    phase_k = np.exp(1j * ((kx - km[0]) * (x2[0] - x1[0])
                           + (ky - km[1]) * (x2[1] - x1[1])))
    return ((envelope_x * phase_x)[:, :, None, None]
            * (envelope_k * phase_k)[None, None, :, :] / (hb * np.pi) ** 2)


def gaussian_pair(grid: PhaseSpaceGrid, c1, c2, width: float,
                  alpha: complex = 1.0, beta: complex = 1.0,
                  time: float = 0.0) -> WignerState:
    """Coherent superposition alpha G_1 + beta G_2 as a scalar Wigner field.

    c1 = ((x1, y1), (kx1, ky1)) and likewise c2.  The result is
    |alpha|^2 W_11 + |beta|^2 W_22 + 2 Re(alpha conj(beta) W_12), whose
    position marginal is |psi(x)|^2 >= 0 while the field itself oscillates.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    w11 = _cross_wigner(grid, c1, c1, width).real
    w22 = _cross_wigner(grid, c2, c2, width).real
    w12 = _cross_wigner(grid, c1, c2, width)
    values = (abs(alpha) ** 2 * w11 + abs(beta) ** 2 * w22
              + 2.0 * np.real(alpha * np.conj(beta) * w12))
    return WignerState(grid, values, time)


def gaussian_band(grid: PhaseSpaceGrid, center, mean_p, widths_x, widths_p,
                  projector: np.ndarray, time: float = 0.0) -> WignerState:
    """Band-localized blob with independent position and momentum widths.

    F = (hbar pi)^-2 exp(-(x-xb)^2/Dx^2 - (y-yb)^2/Dy^2
                         - (k_x-kb_x)^2/Dk_x^2 - (k_y-kb_y)^2/Dk_y^2) * Pi(p),
    where Pi is a projector field over the momentum grid, shape
    (n_px, n_py, 2, 2).  Momentum widths are in stored p/hbar units.
    """
    xb, yb = center
    kxb, kyb = mean_p
    dx_w, dy_w = widths_x
    dkx_w, dky_w = widths_p
    if min(dx_w, dy_w, dkx_w, dky_w) <= 0:
        raise ValueError("packet widths must be positive")
    proj = np.asarray(projector, dtype=complex)
    if proj.shape != (grid.spec.n_px, grid.spec.n_py, 2, 2):
        raise ValueError("projector must be a field over the momentum grid")
    x, y = grid.position_mesh()
    kx, ky = grid.momentum_mesh()
    wx = np.exp(-((x - xb) / dx_w) ** 2 - ((y - yb) / dy_w) ** 2)
    wk = np.exp(-((kx - kxb) / dkx_w) ** 2 - ((ky - kyb) / dky_w) ** 2)
    w = wx[:, :, None, None] * wk[None, None, :, :] / (grid.hbar * np.pi) ** 2
    return WignerState(grid, w[..., None, None] * proj[None, None], time)


def shifted(state: WignerState, x_shift=(0.0, 0.0), p_shift=(0.0, 0.0),
            tol: float = 1e-9) -> WignerState:
    """Translate by grid-aligned amounts with periodic wrap.

    Non-aligned shifts are rejected rather than silently interpolated.
    """
    g = state.grid
    steps = (g.dx, g.dy, g.dpx, g.dpy)
    amounts = (x_shift[0], x_shift[1], p_shift[0], p_shift[1])
    rolls = []
    for amount, step in zip(amounts, steps):
        r = amount / step
        if abs(r - round(r)) > tol * max(1.0, abs(r)):
            raise ValueError(f"shift {amount} is not a multiple of step {step}")
        rolls.append(round(r))
    values = np.roll(state.values, rolls, axis=(0, 1, 2, 3))
    return WignerState(g, values, state.time)


@dataclass(frozen=True)
class EquilibriumSpec:
    """Statistics plus (possibly position-dependent) temperature and mu.

    statistics in {"MB", "FD", "BE"}; temperature in K (scalar or (n_x, n_y)
    field), mu in eV (likewise).  Fixed at scenario start; no moment matching.
    """

    statistics: str
    temperature: float | np.ndarray
    mu: float | np.ndarray = 0.0

    def __post_init__(self) -> None:
        if self.statistics not in ("MB", "FD", "BE"):
            raise ValueError("statistics must be one of MB, FD, BE")
        if np.any(np.asarray(self.temperature) <= 0):
            raise ValueError("temperature must be positive")


def occupation(spec: EquilibriumSpec, lam: np.ndarray,
               mu: np.ndarray, kt: np.ndarray) -> np.ndarray:
    z = (lam - mu) / kt
    if spec.statistics == "MB":
        return np.exp(-z)
    if spec.statistics == "FD":
        return expit(-z)
    # BE with the standard sign; diverges as z -> 0+
    if np.any(z <= 0):
        idx = np.unravel_index(int(np.argmin(z)), np.shape(z))
        raise ValueError(
            f"Bose-Einstein occupation diverges: lambda - mu = "
            f"{float(np.min(z) * np.broadcast_to(kt, np.shape(z))[idx]):.3e} eV "
            f"at grid node {idx}")
    return 1.0 / np.expm1(z)


def equilibrium(grid: PhaseSpaceGrid, hamiltonian: HamiltonianSymbol,
                spec: EquilibriumSpec, time: float = 0.0) -> WignerState:
    """Local equilibrium F_eq = Pi+ f(lam+) + Pi- f(lam-) of the total symbol.

    The eigen-decomposition uses Lambda(p) + U(x) pointwise on the 4D grid, so
    a potential shifts the local band energies entering the occupations.
    """
    lam, u = hamiltonian.lam, hamiltonian.u
    c0 = u.c0[:, :, None, None] + lam.c0[None, None, :, :]
    c = u.c[:, :, None, None, :] + lam.c[None, None, :, :, :]
    norm = np.sqrt(np.sum(c * c, axis=-1))
    degenerate = norm < DEGENERACY_EPS * np.maximum(1.0, np.abs(c0))
    chat = np.where(degenerate[..., None], 0.0,
                    c / np.where(degenerate, 1.0, norm)[..., None])
    gap = np.where(degenerate, 0.0, norm)
    kt = KB * np.asarray(spec.temperature, dtype=float)
    mu = np.asarray(spec.mu, dtype=float)
    if kt.ndim == 2:
        kt = kt[:, :, None, None]
    if mu.ndim == 2:
        mu = mu[:, :, None, None]
    f_plus = occupation(spec, c0 + gap, mu, kt)
    f_minus = occupation(spec, c0 - gap, mu, kt)
    # F_eq = (f+ + f-)/2 sigma_0 + (f+ - f-)/2 chat.sigma; at degenerate nodes
    # chat = 0 so F_eq reduces to f(c0) sigma_0.
    values = reconstruct(0.5 * (f_plus + f_minus),
                         0.5 * (f_plus - f_minus)[..., None] * chat)
    return WignerState(grid, values, time)


def thermal_trapped(grid: PhaseSpaceGrid, m: float, temperature: float,
                    center, sigma: float, time: float = 0.0) -> WignerState:
    """Thermalized scalar distribution localized inside a Gaussian trap.

    f ~ exp(-p^2/(2 m k_B T) - |r - r0|^2 / sigma^2), normalized to unit mass
    on the grid.  Used as the classical tweezer initial condition.
    """
    if m <= 0 or temperature <= 0 or sigma <= 0:
        raise ValueError("m, temperature and sigma must be positive")
    kt = KB * temperature
    hb = grid.hbar
    x, y = grid.position_mesh()
    kx, ky = grid.momentum_mesh()
    fx = np.exp(-((x - center[0]) ** 2 + (y - center[1]) ** 2) / sigma**2)
    fk = np.exp(-(hb**2) * (kx**2 + ky**2) / (2.0 * m * kt))
    values = fx[:, :, None, None] * fk[None, None, :, :]
    values /= np.sum(values) * grid.cell_volume
    return WignerState(grid, values, time)
