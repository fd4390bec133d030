"""First-order-in-hbar propagators and the classical scalar Liouville mode.

The semiclassical substeps keep the spectral layout of the full propagator
but replace the shifted symbol samples with gradient data at the grid nodes:

    field:     phase exp(-i eta . grad_x u0 dt), sandwich C+-(u; x, eta)
    streaming: phase exp(-i mu . grad_p lambda0 dt), sandwich C+-(lambda; p, mu)

with C+- = cos(dt |w+-|) I -+ i sin(dt |w+-|) (w+- . sigma)/|w+-| and
w+- = u/hbar +- (eta/2) grad_x u (momentum version with lambda and mu).  The
conjugate axes act purely as differentiation variables here, so the grid
consistency ratios are irrelevant to these steps.

In classical scalar mode both substeps are exact characteristics shifts and
compose into a Liouville solver; positivity is preserved up to spectral
ringing of the band-limited representation.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .grid import PhaseSpaceGrid
from .hamiltonian import PauliSymbol
from .pauli import unitary_of
from .propagator import (SplitKernel, StepContext, _apply_kernel, _fix_nyquist,
                         apply_inflow, relax_step)
from .states import WignerState

logger = logging.getLogger("wigner4d")

COMMUTATOR_WARN_LEVEL = 1e-2


@dataclass
class SemiclassicalContext(StepContext):
    """StepContext plus the expansion mode flag."""

    mode: str = "first_order_hbar"

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.mode not in ("first_order_hbar", "classical_scalar"):
            raise ValueError("mode must be first_order_hbar or classical_scalar")
        if self.mode == "classical_scalar":
            if not (self.hamiltonian.lam.is_scalar and self.hamiltonian.u.is_scalar):
                raise ValueError("classical_scalar mode requires scalar symbols")

    def sc_field_kernel(self, dt: float, t: float | None = None) -> SplitKernel:
        if self.hamiltonian.time_dependent:
            u = self.hamiltonian.u_at(self.t if t is None else t)
            return _sc_kernel(u, self.grid, dt, trailing_shifts=True)
        key = ("scU", dt)
        if key not in self._kernels:
            self._kernels[key] = _sc_kernel(self.hamiltonian.u, self.grid, dt,
                                            trailing_shifts=True)
        return self._kernels[key]

    def sc_streaming_kernel(self, dt: float) -> SplitKernel:
        key = ("scS", dt)
        if key not in self._kernels:
            self._kernels[key] = _sc_kernel(self.hamiltonian.lam, self.grid, dt,
                                            trailing_shifts=False)
        return self._kernels[key]


def symbol_gradients(sym: PauliSymbol, grid: PhaseSpaceGrid,
                     position: bool) -> tuple:
    """((dc0/dq1, dc/dq1), (dc0/dq2, dc/dq2)) on the symbol's own grid.

    Analytic when the symbol carries a grad_fn, spectral otherwise.  Numeric
    axis units (per nm for position symbols, per nm^-1 for momentum symbols).
    """
    n1, n2 = sym.c0.shape
    shape = (n1, n2)
    if sym.grad_fn is not None:
        if position:
            q1, q2 = grid.position_mesh()
        else:
            q1, q2 = grid.momentum_mesh()
        d1, d2 = sym.grad_fn(q1, q2)
        expand = lambda comp: np.broadcast_to(np.asarray(comp, float), shape)
        return ((expand(d1[0]), np.stack([expand(c) for c in d1[1:]], axis=-1)),
                (expand(d2[0]), np.stack([expand(c) for c in d2[1:]], axis=-1)))
    d1, d2 = sym.steps
    w1 = 2.0 * np.pi * np.fft.fftfreq(n1, d=d1)
    w2 = 2.0 * np.pi * np.fft.fftfreq(n2, d=d2)

    def diff(table, freq, axis):
        spec = np.fft.fft(table, axis=axis)
        shape_f = [1, 1]
        shape_f[axis] = -1
        return np.fft.ifft(1j * freq.reshape(shape_f) * spec, axis=axis).real

    g1 = (diff(sym.c0, w1, 0),
          np.stack([diff(sym.c[..., k], w1, 0) for k in range(3)], axis=-1))
    g2 = (diff(sym.c0, w2, 1),
          np.stack([diff(sym.c[..., k], w2, 1) for k in range(3)], axis=-1))
    return g1, g2


def _sc_kernel(sym: PauliSymbol, grid: PhaseSpaceGrid, dt: float,
               trailing_shifts: bool) -> SplitKernel:
    """First-order kernel from node values and gradients of the symbol."""
    hb = grid.hbar
    if trailing_shifts:
        # field: conjugate axes are (stored) hbar*eta, gradients per nm
        e1 = np.fft.ifftshift(grid.eta_x)
        e2 = np.fft.ifftshift(grid.eta_y)
        conj1 = e1[None, None, :, None] / hb     # physical eta
        conj2 = e2[None, None, None, :] / hb
        expand = lambda a: a[:, :, None, None]
    else:
        e1 = np.fft.ifftshift(grid.mu_x)
        e2 = np.fft.ifftshift(grid.mu_y)
        conj1 = e1[:, None, None, None]
        conj2 = e2[None, :, None, None]
        expand = lambda a: a[None, None, :, :]
    (g1c0, g1c), (g2c0, g2c) = symbol_gradients(sym, grid,
                                                position=trailing_shifts)
    # grad_p = (1/hbar) d/dk for momentum symbols; position gradients are
    # already physical.
    scale = 1.0 if trailing_shifts else 1.0 / hb
    slope0 = conj1 * expand(scale * g1c0) + conj2 * expand(scale * g2c0)
    phase = None if not np.any(slope0) else np.exp(-1j * dt * slope0)
    if sym.is_scalar and not np.any(g1c) and not np.any(g2c):
        _fix_nyquist(phase, None, None, slope0.shape, trailing_shifts)
        return SplitKernel(phase, None, None, trailing_shifts)
    base = np.broadcast_to(expand(sym.c), slope0.shape + (3,))
    slope = (conj1[..., None] * expand(scale * g1c)
             + conj2[..., None] * expand(scale * g2c))
    w_plus = np.ascontiguousarray(base / hb + 0.5 * slope)
    w_minus = np.ascontiguousarray(base / hb - 0.5 * slope)
    _fix_nyquist(phase, w_plus, w_minus, slope0.shape, trailing_shifts)
    left = unitary_of(0.0, w_plus, dt, -1)
    right = unitary_of(0.0, w_minus, dt, +1)
    return SplitKernel(phase, left, right, trailing_shifts)


def sc_field_step(state: WignerState, ctx: SemiclassicalContext,
                  dt: float | None = None, t: float | None = None) -> WignerState:
    """First-order field substep (exact for potentials up to quadratic)."""
    dt = ctx.dt if dt is None else dt
    kern = ctx.sc_field_kernel(dt, t)
    return WignerState(state.grid, _apply_kernel(state.values, kern), state.time)


def sc_streaming_step(state: WignerState, ctx: SemiclassicalContext,
                      dt: float | None = None) -> WignerState:
    """First-order streaming substep (exact for bands up to quadratic)."""
    dt = ctx.dt if dt is None else dt
    kern = ctx.sc_streaming_kernel(dt)
    return WignerState(state.grid, _apply_kernel(state.values, kern), state.time)


def interband_coherence(state: WignerState, ctx: StepContext) -> float:
    """Relative commutator norm ||[Lambda+U, F]|| / ||F||.

    The strict hbar -> 0 limit is well posed only when this vanishes; the
    scenario runner logs it in first-order mode and warns above 1e-2.
    """
    if state.is_scalar:
        return 0.0
    lam, u = ctx.hamiltonian.lam, ctx.hamiltonian.u
    c = (u.c[:, :, None, None, :] + lam.c[None, None, :, :, :])
    from .pauli import decompose
    _, f_c = decompose(state.values)
    cross = np.cross(c, f_c.real)
    # [c.sigma, f.sigma] = 2i (c x f).sigma and |v.sigma|_F^2 = 2|v|^2
    num = 2.0 * np.sqrt(2.0 * np.sum(cross**2))
    den = np.sqrt(np.sum(np.abs(state.values) ** 2))
    return float(num / den) if den > 0 else 0.0


def sc_strang_step(state: WignerState, ctx: SemiclassicalContext,
                   warn_coherence: bool = False) -> WignerState:
    """Strang composition of the first-order substeps."""
    dt = ctx.dt
    t_mid = state.time + 0.5 * dt
    out = sc_streaming_step(state, ctx, 0.5 * dt)
    out = sc_field_step(out, ctx, dt, t=t_mid)
    out = sc_streaming_step(out, ctx, 0.5 * dt)
    if ctx.relaxation is not None:
        out = relax_step(out, ctx.relaxation.f_eq, ctx.relaxation.tau, dt)
    if ctx.boundary is not None:
        out = apply_inflow(out, ctx)
    out.time = state.time + dt
    ctx.t = out.time
    if warn_coherence and ctx.mode == "first_order_hbar":
        level = interband_coherence(out, ctx)
        logger.info("interband coherence %.3e at t=%.3f fs", level, out.time)
        if level > COMMUTATOR_WARN_LEVEL:
            warnings.warn(f"initial data leaves the commutator kernel: "
                          f"relative [H, F] norm {level:.2e}", stacklevel=2)
    return out


def liouville_step(state: WignerState, ctx: SemiclassicalContext) -> WignerState:
    """Classical Liouville step: exact x-shift and p-kick, Strang-composed.

    Requires classical_scalar mode (scalar symbols and a scalar state); the
    substeps are spectrally exact characteristic translations, so mass is
    conserved to roundoff and the only discretization artifact is spectral
    ringing for marginally resolved data.
    """
    if ctx.mode != "classical_scalar":
        raise ValueError("liouville_step requires classical_scalar mode")
    if not state.is_scalar:
        raise ValueError("liouville_step acts on scalar states")
    return sc_strang_step(state, ctx)
