"""Separable Hamiltonian symbols H = Lambda(p) + U(x) in Pauli components.

Each half lives on a 2D grid (momentum grid for Lambda, position grid for U)
as a real coefficient field (c0, c).  Builders for the builtin models attach
closed forms so the propagator can sample the symbol at the shifted arguments
q +- eta/2 exactly and without periodic wrap; tabulated symbols fall back to
integer-shift reads on grid-consistent meshes and to trigonometric
interpolation otherwise.

Momentum arguments are the stored p/hbar numbers (nm^-1); energies are eV.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import PhaseSpaceGrid

# fn(q1, q2) -> (c0, cx, cy, cz); every component broadcastable against q1*q2
ComponentFn = Callable[[np.ndarray, np.ndarray], tuple]
# grad_fn(q1, q2) -> (d(c0,c)/dq1 4-tuple, d(c0,c)/dq2 4-tuple), per axis unit
GradFn = Callable[[np.ndarray, np.ndarray], tuple]


@dataclass(frozen=True)
class PauliSymbol:
    """Real Pauli-coefficient field of a Hermitian 2x2 symbol on a 2D grid."""

    c0: np.ndarray
    c: np.ndarray
    steps: tuple[float, float]
    origins: tuple[float, float] = (0.0, 0.0)
    fn: ComponentFn | None = None
    grad_fn: GradFn | None = None

    def __post_init__(self) -> None:
        if self.c.shape != self.c0.shape + (3,):
            raise ValueError(
                f"coefficient shapes disagree: c0 {self.c0.shape}, c {self.c.shape}")
        if np.iscomplexobj(self.c0) or np.iscomplexobj(self.c):
            raise ValueError("Hermitian symbols need real Pauli coefficients")
        if not (np.all(np.isfinite(self.c0)) and np.all(np.isfinite(self.c))):
            raise ValueError("symbol coefficients must be finite")

    @property
    def is_scalar(self) -> bool:
        return not np.any(self.c)

    def matrices(self) -> np.ndarray:
        """Dense (n1, n2, 2, 2) matrix field."""
        from .pauli import reconstruct
        return reconstruct(self.c0, self.c)


def tabulate(fn: ComponentFn, q1: np.ndarray, q2: np.ndarray,
             steps: tuple[float, float],
             grad_fn: GradFn | None = None) -> PauliSymbol:
    """Evaluate a closed-form symbol on its grid, keeping the closed form."""
    shape = (q1.size, q2.size)
    comps = fn(q1[:, None], q2[None, :])
    arrs = [np.ascontiguousarray(
        np.broadcast_to(np.asarray(comp, dtype=float), shape)) for comp in comps]
    return PauliSymbol(c0=arrs[0], c=np.stack(arrs[1:], axis=-1), steps=steps,
                       origins=(float(q1[0]), float(q2[0])), fn=fn,
                       grad_fn=grad_fn)


def sample_shifted(sym: PauliSymbol, s1: np.ndarray, s2: np.ndarray,
                   sign: int, trailing_shifts: bool,
                   wrap: bool = False) -> tuple[np.ndarray, np.ndarray | None]:
    """Sample (c0, c) at (q1 + sign*s1, q2 + sign*s2) on the 4D kernel lattice.

    With trailing_shifts the output axes are (q1, q2, s1, s2) (field kernel);
    otherwise (s1, s2, q1, q2) (streaming kernel).  The vector part is None
    when the symbol is scalar.

    wrap folds the sample coordinates periodically into the symbol's own box.
    Unwrapped closed-form sampling is the accuracy default for open systems;
    wrapped sampling makes the split step an exact conjugation of the folded
    lattice density matrix on grid-consistent ([N] integer) meshes, which
    preserves pure-state marginal positivity exactly.
    """
    n1, n2 = sym.c0.shape
    if trailing_shifts:
        shape = (n1, n2, s1.size, s2.size)
        b1 = lambda q: q[:, None, None, None]
        b2 = lambda q: q[None, :, None, None]
        w1 = lambda s: s[None, None, :, None]
        w2 = lambda s: s[None, None, None, :]
    else:
        shape = (s1.size, s2.size, n1, n2)
        b1 = lambda q: q[None, None, :, None]
        b2 = lambda q: q[None, None, None, :]
        w1 = lambda s: s[:, None, None, None]
        w2 = lambda s: s[None, :, None, None]

    d1, d2 = sym.steps

    if sym.fn is not None:
        q1 = sym.origins[0] + d1 * np.arange(n1)
        q2 = sym.origins[1] + d2 * np.arange(n2)
        a1 = b1(q1) + sign * w1(s1)
        a2 = b2(q2) + sign * w2(s2)
        if wrap:
            p1, p2 = n1 * d1, n2 * d2
            a1 = (a1 - sym.origins[0]) % p1 + sym.origins[0]
            a2 = (a2 - sym.origins[1]) % p2 + sym.origins[1]
        comps = sym.fn(a1, a2)
        c0 = np.ascontiguousarray(
            np.broadcast_to(np.asarray(comps[0], dtype=float), shape))
        if sym.is_scalar:
            return c0, None
        c = np.stack([np.broadcast_to(np.asarray(comp, dtype=float), shape)
                      for comp in comps[1:]], axis=-1)
        return c0, np.ascontiguousarray(c)

    r1 = sign * s1 / d1
    r2 = sign * s2 / d2
    if _all_near_integer(r1) and _all_near_integer(r2):
        # Grid-consistent shifts: periodic reads of the tabulated field.
        i1 = (np.arange(n1)[:, None] + np.rint(r1).astype(int)[None, :]) % n1
        i2 = (np.arange(n2)[:, None] + np.rint(r2).astype(int)[None, :]) % n2
        if trailing_shifts:
            idx = (i1[:, None, :, None], i2[None, :, None, :])
        else:
            idx = (i1.T[:, None, :, None], i2.T[None, :, None, :])
        return sym.c0[idx], (None if sym.is_scalar else sym.c[idx])

    # Trigonometric interpolation of the (periodic) table.
    mu1 = 2.0 * np.pi * np.fft.fftfreq(n1, d=d1)
    mu2 = 2.0 * np.pi * np.fft.fftfreq(n2, d=d2)
    ph1 = np.exp(1j * np.outer(mu1, sign * s1))   # (n1, m1)
    ph2 = np.exp(1j * np.outer(mu2, sign * s2))   # (n2, m2)

    def interp(table: np.ndarray) -> np.ndarray:
        spec = np.fft.fft2(table)
        shifted = (spec[:, :, None, None]
                   * ph1[:, None, :, None] * ph2[None, :, None, :])
        out = np.fft.ifft2(shifted, axes=(0, 1)).real
        if not trailing_shifts:
            out = np.ascontiguousarray(np.moveaxis(out, (0, 1), (2, 3)))
        return out

    c0 = interp(sym.c0)
    c = None if sym.is_scalar else np.stack(
        [interp(sym.c[..., k]) for k in range(3)], axis=-1)
    return c0, c


def _all_near_integer(r: np.ndarray, tol: float = 1e-9) -> bool:
    return bool(np.all(np.abs(r - np.rint(r)) <= tol * np.maximum(1.0, np.abs(r))))


@dataclass(frozen=True)
class HamiltonianSymbol:
    """H = Lambda(p) + U(x) with optional re-evaluation of U at a given time."""

    lam: PauliSymbol
    u: PauliSymbol
    u_of_t: Callable[[float], PauliSymbol] | None = None

    def u_at(self, t: float) -> PauliSymbol:
        return self.u if self.u_of_t is None else self.u_of_t(t)

    @property
    def time_dependent(self) -> bool:
        return self.u_of_t is not None


def momentum_symbol(grid: PhaseSpaceGrid, fn: ComponentFn,
                    grad_fn: GradFn | None = None) -> PauliSymbol:
    return tabulate(fn, grid.px, grid.py, (grid.dpx, grid.dpy), grad_fn)


def position_symbol(grid: PhaseSpaceGrid, u0=None, u=None,
                    u0_grad: Callable | None = None) -> PauliSymbol:
    """Build the position half from a scalar potential and/or a vector part.

    u0 may be None (zero), a scalar, a (n_x, n_y) array, or a callable
    u0(x, y) -> eV.  u may be None or a constant 3-vector (eV); a constant
    vector part covers uniform spin couplings while staying exactly sampleable.
    u0_grad, if given, is u0_grad(x, y) -> (du0/dx, du0/dy).
    """
    uvec = np.zeros(3) if u is None else np.asarray(u, dtype=float)
    if uvec.shape != (3,):
        raise ValueError("u must be a constant 3-vector")
    if u0 is None:
        u0 = 0.0
    if callable(u0):
        fn0, ux, uy, uz = u0, uvec[0], uvec[1], uvec[2]
        fn = lambda x, y: (fn0(x, y), ux, uy, uz)
        g = None
        if u0_grad is not None:
            g0 = u0_grad

            def g(x, y):
                gx, gy = g0(x, y)
                return ((gx, 0.0, 0.0, 0.0), (gy, 0.0, 0.0, 0.0))
        return tabulate(fn, grid.x, grid.y, (grid.dx, grid.dy), g)
    if np.ndim(u0) == 0:
        val, ux, uy, uz = float(u0), uvec[0], uvec[1], uvec[2]
        fn = lambda x, y: (val, ux, uy, uz)
        g = lambda x, y: ((0.0, 0.0, 0.0, 0.0), (0.0, 0.0, 0.0, 0.0))
        return tabulate(fn, grid.x, grid.y, (grid.dx, grid.dy), g)
    shape = (grid.spec.n_x, grid.spec.n_y)
    arr = np.ascontiguousarray(np.broadcast_to(np.asarray(u0, dtype=float), shape))
    c = np.ascontiguousarray(np.broadcast_to(uvec, shape + (3,)))
    return PauliSymbol(c0=arr, c=c, steps=(grid.dx, grid.dy),
                       origins=(float(grid.x[0]), float(grid.y[0])))


def build_graphene(grid: PhaseSpaceGrid, v_f: float, gap: float = 0.0,
                   u0=None, u0_grad=None) -> HamiltonianSymbol:
    """Dirac-cone model: lambda = (v_F p_x, v_F p_y, gap/2), lambda_0 = 0.

    v_f in nm/fs, gap in eV.  The gap sits on the diagonal as +-gap/2 (energy
    units), outside the v_F prefactor.
    """
    if v_f <= 0:
        raise ValueError("v_f must be positive")
    if gap < 0:
        raise ValueError("gap must be non-negative")
    hb = grid.hbar

    def lam(kx, ky):
        return (0.0, v_f * hb * kx, v_f * hb * ky, 0.5 * gap)

    def lam_grad(kx, ky):
        return ((0.0, v_f * hb, 0.0, 0.0), (0.0, 0.0, v_f * hb, 0.0))

    return HamiltonianSymbol(lam=momentum_symbol(grid, lam, lam_grad),
                             u=position_symbol(grid, u0, u0_grad=u0_grad))


def build_kp(grid: PhaseSpaceGrid, k_vec, m: float,
             u0=None, u0_grad=None) -> HamiltonianSymbol:
    """Two-band k.p model: lambda_0 = p^2/2m, lambda = (k . p, 0, 0).

    k_vec in nm/fs, m in eV fs^2/nm^2.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    k_vec = np.asarray(k_vec, dtype=float)
    if k_vec.shape != (2,):
        raise ValueError("k_vec must be a 2-vector")
    hb = grid.hbar

    def lam(kx, ky):
        return (hb * hb * (kx * kx + ky * ky) / (2.0 * m),
                hb * (k_vec[0] * kx + k_vec[1] * ky), 0.0, 0.0)

    def lam_grad(kx, ky):
        return ((hb * hb * kx / m, hb * k_vec[0], 0.0, 0.0),
                (hb * hb * ky / m, hb * k_vec[1], 0.0, 0.0))

    return HamiltonianSymbol(lam=momentum_symbol(grid, lam, lam_grad),
                             u=position_symbol(grid, u0, u0_grad=u0_grad))


def build_rashba(grid: PhaseSpaceGrid, k_so, b_field, m: float,
                 u0=None, u0_grad=None) -> HamiltonianSymbol:
    """Spin-orbit model: lambda_0 = p^2/2m, lambda = p ^ K - B.

    K (nm/fs) and B (eV) are constant 3-vectors; p is promoted to
    (p_x, p_y, 0).  A uniform B lives in the momentum half so the field step
    stays scalar and band projections see the full spin symbol.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    k_so = np.asarray(k_so, dtype=float)
    b_field = np.asarray(b_field, dtype=float)
    if k_so.shape != (3,) or b_field.shape != (3,):
        raise ValueError("k_so and b_field must be 3-vectors")
    hb = grid.hbar

    def lam(kx, ky):
        px, py = hb * kx, hb * ky
        return ((px * px + py * py) / (2.0 * m),
                py * k_so[2] - b_field[0],
                -px * k_so[2] - b_field[1],
                px * k_so[1] - py * k_so[0] - b_field[2])

    def lam_grad(kx, ky):
        return ((hb * hb * kx / m, 0.0, -hb * k_so[2], hb * k_so[1]),
                (hb * hb * ky / m, hb * k_so[2], 0.0, -hb * k_so[0]))

    return HamiltonianSymbol(lam=momentum_symbol(grid, lam, lam_grad),
                             u=position_symbol(grid, u0, u0_grad=u0_grad))


def build_bdg(grid: PhaseSpaceGrid, m: float, mu: float, delta: float,
              u0=None, u0_grad=None) -> HamiltonianSymbol:
    """Bogoliubov-de Gennes quasiparticle model.

    lambda = (-2 Delta p_y, -2 Delta p_x, p^2/2m - mu), lambda_0 = 0: the
    Pauli decomposition of the chiral matrix with off-diagonals
    -2 Delta (p_y -+ i p_x).  Eigenvalues are
    +-sqrt((p^2/2m - mu)^2 + 4 Delta^2 p^2).  Delta in nm/fs, mu in eV.
    """
    if m <= 0:
        raise ValueError("m must be positive")
    if delta < 0:
        raise ValueError("delta must be non-negative")
    hb = grid.hbar

    def lam(kx, ky):
        px, py = hb * kx, hb * ky
        return (0.0, -2.0 * delta * py, -2.0 * delta * px,
                (px * px + py * py) / (2.0 * m) - mu)

    def lam_grad(kx, ky):
        return ((0.0, 0.0, -2.0 * delta * hb, hb * hb * kx / m),
                (0.0, -2.0 * delta * hb, 0.0, hb * hb * ky / m))

    return HamiltonianSymbol(lam=momentum_symbol(grid, lam, lam_grad),
                             u=position_symbol(grid, u0, u0_grad=u0_grad))


def build_tabulated(grid: PhaseSpaceGrid,
                    lam_c0: np.ndarray, lam_c: np.ndarray,
                    u_c0: np.ndarray, u_c: np.ndarray) -> HamiltonianSymbol:
    """Store user-supplied coefficient tables verbatim."""
    p_shape = (grid.spec.n_px, grid.spec.n_py)
    x_shape = (grid.spec.n_x, grid.spec.n_y)
    lam_c0 = np.asarray(lam_c0, dtype=float)
    lam_c = np.asarray(lam_c, dtype=float)
    u_c0 = np.asarray(u_c0, dtype=float)
    u_c = np.asarray(u_c, dtype=float)
    if lam_c0.shape != p_shape or lam_c.shape != p_shape + (3,):
        raise ValueError(f"momentum tables must have shapes {p_shape} and "
                         f"{p_shape + (3,)}")
    if u_c0.shape != x_shape or u_c.shape != x_shape + (3,):
        raise ValueError(f"position tables must have shapes {x_shape} and "
                         f"{x_shape + (3,)}")
    return HamiltonianSymbol(
        lam=PauliSymbol(lam_c0, lam_c, (grid.dpx, grid.dpy),
                        origins=(float(grid.px[0]), float(grid.py[0]))),
        u=PauliSymbol(u_c0, u_c, (grid.dx, grid.dy),
                      origins=(float(grid.x[0]), float(grid.y[0]))),
    )


def free_hamiltonian(grid: PhaseSpaceGrid, m: float,
                     u0=None, u0_grad=None) -> HamiltonianSymbol:
    """Scalar parabolic band p^2/2m plus an optional scalar potential."""
    if m <= 0:
        raise ValueError("m must be positive")
    hb = grid.hbar

    def lam(kx, ky):
        return (hb * hb * (kx * kx + ky * ky) / (2.0 * m), 0.0, 0.0, 0.0)

    def lam_grad(kx, ky):
        return ((hb * hb * kx / m, 0.0, 0.0, 0.0),
                (hb * hb * ky / m, 0.0, 0.0, 0.0))

    return HamiltonianSymbol(lam=momentum_symbol(grid, lam, lam_grad),
                             u=position_symbol(grid, u0, u0_grad=u0_grad))
