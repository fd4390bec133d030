"""Spectral splitting engine: field step, streaming step, Strang composition.

Discrete operators.  Writing Fhat for the transform of F over the momentum
axes with kernel exp(+i p.eta) (position axes with exp(-i x.mu) for the
streaming step), one split substep is

    Fhat <- exp(-i dt/hbar [s0(q+) - s0(q-)]) . exp(-i dt/hbar s(q+).sigma)
            Fhat  exp(+i dt/hbar s(q-).sigma),

where s = u sampled at q+- = x +- eta/2 for the field step and s = lambda at
p +- mu/2 for the streaming step (eta here stores hbar*eta, so the shifts are
plain lengths; momentum shifts are in stored p/hbar units).  The transform
pair is realized as fft(K . ifft(F)) over the momentum axes and
ifft(K . fft(F)) over the position axes, with the conjugate variable in
fftfreq order; this fixes the sign conventions so that a linear potential
kicks momenta by -grad(u0) dt and a parabolic band streams positions by
+grad_p(lambda0) dt.

Each step returns the Hermitian part of the raw spectral map.  For Hermitian
input this equals the Nyquist-symmetrized discrete operator: all paired
+-eta modes already map Hermitian to Hermitian exactly, and the unpaired
Nyquist row is replaced by its sign-averaged (Hermitian) version.  The dense
quadrature oracles below apply the same definition, so both paths implement
one and the same discrete operator without sharing the FFT or the closed-form
Pauli exponential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._fft import fftn, ifftn
from .grid import PhaseSpaceGrid
from .hamiltonian import HamiltonianSymbol, PauliSymbol, sample_shifted
from .pauli import unitary_of
from .states import WignerState

P_AXES = (2, 3)
X_AXES = (0, 1)


def _mat2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched 2x2 matrix product via explicit components (faster than matmul
    for millions of tiny matrices)."""
    out = np.empty(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
    out[..., 0, 0] = a[..., 0, 0] * b[..., 0, 0] + a[..., 0, 1] * b[..., 1, 0]
    out[..., 0, 1] = a[..., 0, 0] * b[..., 0, 1] + a[..., 0, 1] * b[..., 1, 1]
    out[..., 1, 0] = a[..., 1, 0] * b[..., 0, 0] + a[..., 1, 1] * b[..., 1, 0]
    out[..., 1, 1] = a[..., 1, 0] * b[..., 0, 1] + a[..., 1, 1] * b[..., 1, 1]
    return out


def hermitize(values: np.ndarray) -> np.ndarray:
    """Hermitian part per node (real part for scalar fields)."""
    if values.ndim == 4:
        return values.real
    return 0.5 * (values + np.conj(np.swapaxes(values, -1, -2)))


@dataclass
class SplitKernel:
    """Precomputed multipliers of one split substep in conjugate space."""

    phase: np.ndarray | None      # scalar exponential, or None if u0 = const
    left: np.ndarray | None       # (..., 2, 2) or None if the symbol is scalar
    right: np.ndarray | None
    trailing_shifts: bool         # True: field layout; False: streaming

    @property
    def is_identity(self) -> bool:
        return self.phase is None and self.left is None


def _reflect(arr: np.ndarray, axis: int) -> np.ndarray:
    """Index reversal j -> (-j) mod N along a conjugate (fftfreq-order) axis."""
    return np.roll(np.flip(arr, axis=axis), 1, axis=axis)


def _fix_nyquist(phase: np.ndarray | None, cp: np.ndarray | None,
                 cm: np.ndarray | None, shape4: tuple,
                 trailing_shifts: bool, tol: float = 1e-11) -> None:
    """Disable the kernel at Nyquist modes that cannot pair Hermitianly.

    The map eta -> -eta pairs every conjugate mode with a grid partner except
    along the eta = -pi/dp rows of an even grid, where the partner of
    (k1, nyq) is (-k1, nyq): reflected within the hyperplane, not off it.
    A kernel row that satisfies the reflection identity there (exact
    integer-cell translation phases, momentum-independent spin precession)
    is kept verbatim; nodes that violate it get the identity action (unit
    phase, zero generator), i.e. the unpairable top mode is dropped from the
    generator.  This is dealiasing of the single unmatched row: it preserves
    Hermiticity, the Frobenius norm, and every symmetry of the resolved
    dynamics (in particular the parity of even potentials), at a consistency
    cost of the same O(F_hat(eta_nyq)) order as any other convention.
    """
    a1, a2 = P_AXES if trailing_shifts else X_AXES
    for ax, other in ((a1, a2), (a2, a1)):
        sl: list = [slice(None)] * 4
        sl[ax] = shape4[ax] // 2
        sl = tuple(sl)
        other_in_slice = other - 1 if other > ax else other
        if phase is not None:
            view = phase[sl]
            pair = np.conj(_reflect(view, other_in_slice))
            bad = np.abs(view - pair) > tol
            phase[sl] = np.where(bad, 1.0 + 0.0j, view)
        if cp is not None:
            mism = np.max(np.abs(cp[sl] - _reflect(cm[sl], other_in_slice)),
                          axis=-1)
            bad = (mism > tol)[..., None]
            cp[sl] = np.where(bad, 0.0, cp[sl])
            cm[sl] = np.where(bad, 0.0, cm[sl])


def build_kernel(sym: PauliSymbol, s1: np.ndarray, s2: np.ndarray,
                 dt: float, hbar: float, trailing_shifts: bool,
                 wrap: bool = False) -> SplitKernel:
    """Sample the symbol at q +- s and exponentiate."""
    c0p, cp = sample_shifted(sym, s1, s2, +1, trailing_shifts, wrap)
    c0m, cm = sample_shifted(sym, s1, s2, -1, trailing_shifts, wrap)
    diff = c0p - c0m
    phase = None if not np.any(diff) else np.exp(-1j * (dt / hbar) * diff)
    _fix_nyquist(phase, cp, cm, c0p.shape, trailing_shifts)
    left = right = None
    if cp is not None:
        left = unitary_of(0.0, cp, dt / hbar, -1)
        right = unitary_of(0.0, cm, dt / hbar, +1)
    return SplitKernel(phase, left, right, trailing_shifts)


def _apply_kernel(values: np.ndarray, kern: SplitKernel) -> np.ndarray:
    axes = P_AXES if kern.trailing_shifts else X_AXES
    fwd, inv = (ifftn, fftn) if kern.trailing_shifts else (fftn, ifftn)
    g = fwd(values, axes)
    if values.ndim == 4:
        if kern.left is not None:
            raise ValueError("scalar state propagated under a spin symbol; "
                             "use a matrix state")
        if kern.phase is not None:
            g *= kern.phase
    else:
        if kern.phase is not None:
            g *= kern.phase[..., None, None]
        if kern.left is not None:
            g = _mat2(kern.left, _mat2(g, kern.right))
    return hermitize(inv(g, axes))


@dataclass
class Relaxation:
    """BGK relaxation data: rate field tau (fs, inf allowed) and target."""

    tau: float | np.ndarray
    f_eq: WignerState

    def __post_init__(self) -> None:
        if np.any(np.asarray(self.tau) <= 0):
            raise ValueError("tau must be positive (np.inf disables relaxation)")


@dataclass
class InflowBoundary:
    """Ideal-contact strip: inflow nodes pinned to f_in, outflow absorbed.

    The spectral transforms are periodic, so outgoing flux must be absorbed in
    the strip to keep it from re-entering; a raised-cosine ramp over
    buffer_width cells damps the deviation from f_in.
    """

    f_in: WignerState | float = 0.0
    buffer_width: int = 8

    def __post_init__(self) -> None:
        if self.buffer_width < 1:
            raise ValueError("buffer_width must be >= 1")


@dataclass
class StepContext:
    """Everything one Strang step needs, plus kernel/boundary caches."""

    grid: PhaseSpaceGrid
    hamiltonian: HamiltonianSymbol
    dt: float
    relaxation: Relaxation | None = None
    boundary: InflowBoundary | None = None
    t: float = 0.0
    ordering: str = "SUS"
    periodic_sampling: bool = False
    _kernels: dict = field(default_factory=dict, repr=False)
    _inflow_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.ordering not in ("SUS", "USU"):
            raise ValueError("ordering must be 'SUS' or 'USU'")

    def field_kernel(self, dt: float, t: float | None = None) -> SplitKernel:
        g = self.grid
        s1 = 0.5 * np.fft.ifftshift(g.eta_x)
        s2 = 0.5 * np.fft.ifftshift(g.eta_y)
        if self.hamiltonian.time_dependent:
            u = self.hamiltonian.u_at(self.t if t is None else t)
            return build_kernel(u, s1, s2, dt, g.hbar, trailing_shifts=True,
                                wrap=self.periodic_sampling)
        key = ("U", dt)
        if key not in self._kernels:
            self._kernels[key] = build_kernel(self.hamiltonian.u, s1, s2, dt,
                                              g.hbar, trailing_shifts=True,
                                              wrap=self.periodic_sampling)
        return self._kernels[key]

    def streaming_kernel(self, dt: float) -> SplitKernel:
        key = ("S", dt)
        if key not in self._kernels:
            g = self.grid
            s1 = 0.5 * np.fft.ifftshift(g.mu_x)
            s2 = 0.5 * np.fft.ifftshift(g.mu_y)
            self._kernels[key] = build_kernel(self.hamiltonian.lam, s1, s2, dt,
                                              g.hbar, trailing_shifts=False,
                                              wrap=self.periodic_sampling)
        return self._kernels[key]


def field_step(state: WignerState, ctx: StepContext, dt: float | None = None,
               t: float | None = None) -> WignerState:
    """Propagate under U(x) alone for dt (defaults to ctx.dt)."""
    dt = ctx.dt if dt is None else dt
    kern = ctx.field_kernel(dt, t)
    return WignerState(state.grid, _apply_kernel(state.values, kern), state.time)


def streaming_step(state: WignerState, ctx: StepContext,
                   dt: float | None = None) -> WignerState:
    """Propagate under Lambda(p) alone for dt (defaults to ctx.dt)."""
    dt = ctx.dt if dt is None else dt
    kern = ctx.streaming_kernel(dt)
    return WignerState(state.grid, _apply_kernel(state.values, kern), state.time)


def relax_step(state: WignerState, f_eq: WignerState,
               tau: float | np.ndarray, dt: float) -> WignerState:
    """Exact integration of the BGK term: F <- F_eq + (F - F_eq) e^(-dt/tau)."""
    decay = np.exp(-dt / np.asarray(tau, dtype=float))
    if np.all(decay == 1.0):   # tau = inf disables relaxation exactly
        return WignerState(state.grid, state.values.copy(), state.time)
    if decay.ndim and not state.is_scalar:
        decay = decay[..., None, None]
    values = f_eq.values + (state.values - f_eq.values) * decay
    return WignerState(state.grid, values, state.time)


def strang_step(state: WignerState, ctx: StepContext) -> WignerState:
    """One full step S(dt/2) U(dt) S(dt/2), then relaxation and boundaries.

    Time-dependent potentials are sampled at the substep midpoint, keeping
    second-order accuracy.  The adjoint ordering U-S-U is available through
    ctx.ordering for splitting-error studies.
    """
    dt = ctx.dt
    t_mid = state.time + 0.5 * dt
    if ctx.ordering == "SUS":
        out = streaming_step(state, ctx, 0.5 * dt)
        out = field_step(out, ctx, dt, t=t_mid)
        out = streaming_step(out, ctx, 0.5 * dt)
    else:
        out = field_step(state, ctx, 0.5 * dt, t=t_mid)
        out = streaming_step(out, ctx, dt)
        out = field_step(out, ctx, 0.5 * dt, t=t_mid)
    if ctx.relaxation is not None:
        out = relax_step(out, ctx.relaxation.f_eq, ctx.relaxation.tau, dt)
    if ctx.boundary is not None:
        out = apply_inflow(out, ctx)
    out.time = state.time + dt
    ctx.t = out.time
    return out


def run_steps(state: WignerState, ctx: StepContext, n: int,
              callback: Callable[[int, WignerState], None] | None = None
              ) -> WignerState:
    for i in range(n):
        state = strang_step(state, ctx)
        if callback is not None:
            callback(i + 1, state)
    return state


def group_velocity(ctx: StepContext) -> tuple[np.ndarray, np.ndarray]:
    """grad_p lambda0 on the momentum grid (nm/fs), cached on the context.

    Analytic when the symbol carries gradients, spectral otherwise.
    """
    cache = ctx._inflow_cache
    if "v" in cache:
        return cache["v"]
    lam = ctx.hamiltonian.lam
    g = ctx.grid
    if lam.grad_fn is not None:
        kx, ky = g.momentum_mesh()
        d1, d2 = lam.grad_fn(kx, ky)
        shape = (g.spec.n_px, g.spec.n_py)
        vx = np.broadcast_to(np.asarray(d1[0], float) / g.hbar, shape)
        vy = np.broadcast_to(np.asarray(d2[0], float) / g.hbar, shape)
    else:
        mu1 = 2.0 * np.pi * np.fft.fftfreq(g.spec.n_px, d=g.dpx)
        mu2 = 2.0 * np.pi * np.fft.fftfreq(g.spec.n_py, d=g.dpy)
        spec = np.fft.fft2(lam.c0)
        vx = np.fft.ifft2(1j * mu1[:, None] * spec).real / g.hbar
        vy = np.fft.ifft2(1j * mu2[None, :] * spec).real / g.hbar
    cache["v"] = (vx, vy)
    return cache["v"]


def _taper(width: int) -> np.ndarray:
    i = np.arange(width)
    return 0.5 * (1.0 - np.cos(np.pi * (i + 0.5) / width))


def apply_inflow(state: WignerState, ctx: StepContext) -> WignerState:
    """Enforce the ideal-contact condition on non-periodic boundary strips.

    In each strip, nodes whose group velocity grad_p lambda0 points into the
    domain are overwritten with f_in; the remaining (outflow) nodes relax
    toward f_in under a raised-cosine absorber so the periodic transform
    cannot re-inject outgoing flux.
    """
    bc = ctx.boundary
    if bc is None:
        return state
    spec = state.grid.spec
    sides = []
    if not spec.periodic_x:
        sides += [("x", 0), ("x", 1)]
    if not spec.periodic_y:
        sides += [("y", 0), ("y", 1)]
    if not sides:
        return state
    vx, vy = group_velocity(ctx)
    w = bc.buffer_width
    ramp = _taper(w)
    f_in = bc.f_in.values if isinstance(bc.f_in, WignerState) else bc.f_in
    values = state.values.copy()
    matrix = not state.is_scalar
    for axis_name, side in sides:
        v = vx if axis_name == "x" else vy
        inward = v > 0 if side == 0 else v < 0
        axis = 0 if axis_name == "x" else 1
        n = values.shape[axis]
        for j in range(w):
            idx = j if side == 0 else n - 1 - j
            sl = [slice(None)] * values.ndim
            sl[axis] = idx
            sl = tuple(sl)
            chunk = values[sl]
            fin = f_in[sl] if isinstance(f_in, np.ndarray) else f_in
            mask = inward[..., None, None] if matrix else inward
            damped = fin + ramp[j] * (chunk - fin)
            values[sl] = np.where(mask, fin, damped)
    return WignerState(state.grid, values, state.time)


# ---------------------------------------------------------------------------
# Dense quadrature oracles (no FFT, no closed-form Pauli exponential)
# ---------------------------------------------------------------------------

ORACLE_MAX_NODES = 16**4


def _expm_eigh(c: np.ndarray, angle: float, sign: int) -> np.ndarray:
    """exp(sign*i*angle*(c.sigma)) through a batched eigendecomposition."""
    from .pauli import reconstruct
    h = reconstruct(np.zeros(c.shape[:-1]), c)
    w, v = np.linalg.eigh(h)
    phases = np.exp(sign * 1j * angle * w)
    return np.einsum("...ij,...j,...kj->...ik", v, phases, np.conj(v))


def _dense_kernel(sym: PauliSymbol, s1: np.ndarray, s2: np.ndarray, dt: float,
                  hbar: float, trailing_shifts: bool):
    c0p, cp = sample_shifted(sym, s1, s2, +1, trailing_shifts)
    c0m, cm = sample_shifted(sym, s1, s2, -1, trailing_shifts)
    phase = np.exp(-1j * (dt / hbar) * (c0p - c0m))
    _fix_nyquist(phase, cp, cm, c0p.shape, trailing_shifts)
    if cp is None:
        return phase, None, None
    return (phase, _expm_eigh(cp, dt / hbar, -1), _expm_eigh(cm, dt / hbar, +1))


def _check_oracle_size(grid: PhaseSpaceGrid) -> None:
    if int(np.prod(grid.shape)) > ORACLE_MAX_NODES:
        raise ValueError(f"oracle limited to {ORACLE_MAX_NODES} nodes; "
                         f"grid has {int(np.prod(grid.shape))}")


def moyal_field_oracle(state: WignerState, u_sym: PauliSymbol, dt: float,
                       grid: PhaseSpaceGrid) -> WignerState:
    """Field substep by explicit dense summation over eta and p' nodes."""
    _check_oracle_size(grid)
    s1 = 0.5 * np.fft.ifftshift(grid.eta_x)
    s2 = 0.5 * np.fft.ifftshift(grid.eta_y)
    phase, left, right = _dense_kernel(u_sym, s1, s2, dt, grid.hbar,
                                       trailing_shifts=True)
    w1 = np.exp(1j * np.outer(grid.px, 2.0 * s1))   # (n_px, n_eta_x)
    w2 = np.exp(1j * np.outer(grid.py, 2.0 * s2))
    f = state.values
    matrix = not state.is_scalar
    sub = "xyjl...,ja,lb->xyab..." if matrix else "xyjl,ja,lb->xyab"
    g = np.einsum(sub, f, w1, w2)
    if matrix:
        g *= phase[..., None, None]
        if left is not None:
            g = _mat2(left, _mat2(g, right))
    else:
        if left is not None:
            raise ValueError("scalar state under a spin symbol")
        g = g * phase
    inv = "xyab...,ja,lb->xyjl..." if matrix else "xyab,ja,lb->xyjl"
    out = np.einsum(inv, g, np.conj(w1), np.conj(w2)) / (w1.shape[1] * w2.shape[1])
    return WignerState(grid, hermitize(out), state.time)


def moyal_stream_oracle(state: WignerState, lam_sym: PauliSymbol, dt: float,
                        grid: PhaseSpaceGrid) -> WignerState:
    """Streaming substep by explicit dense summation over mu and x' nodes."""
    _check_oracle_size(grid)
    s1 = 0.5 * np.fft.ifftshift(grid.mu_x)
    s2 = 0.5 * np.fft.ifftshift(grid.mu_y)
    phase, left, right = _dense_kernel(lam_sym, s1, s2, dt, grid.hbar,
                                       trailing_shifts=False)
    w1 = np.exp(-1j * np.outer(grid.x, 2.0 * s1))   # (n_x, n_mu_x)
    w2 = np.exp(-1j * np.outer(grid.y, 2.0 * s2))
    f = state.values
    matrix = not state.is_scalar
    sub = "jlxy...,ja,lb->abxy..." if matrix else "jlxy,ja,lb->abxy"
    g = np.einsum(sub, f, w1, w2)
    if matrix:
        g *= phase[..., None, None]
        if left is not None:
            g = _mat2(left, _mat2(g, right))
    else:
        if left is not None:
            raise ValueError("scalar state under a spin symbol")
        g = g * phase
    inv = "abxy...,ja,lb->jlxy..." if matrix else "abxy,ja,lb->jlxy"
    out = np.einsum(inv, g, np.conj(w1), np.conj(w2)) / (w1.shape[1] * w2.shape[1])
    return WignerState(grid, hermitize(out), state.time)


def l2_norm(state: WignerState) -> float:
    return float(math.sqrt(np.sum(np.abs(state.values) ** 2)))
