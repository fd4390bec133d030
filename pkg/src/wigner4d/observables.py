"""Diagnostics: densities, marginals, band data, polarization, topology.

All quadratures are rectangle-rule in the periodic convention of the grid,
with the physical momentum measure dp = hbar dk included via the grid cell
volume.  Everything is read-only over the state.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .grid import PhaseSpaceGrid
from .hamiltonian import HamiltonianSymbol, PauliSymbol
from .pauli import DEGENERACY_EPS, decompose
from .states import WignerState

IMAG_RESIDUE_TOL = 1e-9


@dataclass
class ObservableSeries:
    """Named scalar traces sampled on a strictly increasing time axis."""

    names: list[str]
    times: list[float] = field(default_factory=list)
    values: list[list[float]] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def append(self, t: float, row) -> None:
        row = list(map(float, row))
        if len(row) != len(self.names):
            raise ValueError(f"expected {len(self.names)} values, got {len(row)}")
        if self.times and t <= self.times[-1]:
            raise ValueError("times must be strictly increasing")
        self.times.append(float(t))
        self.values.append(row)

    def column(self, name: str) -> np.ndarray:
        return np.asarray([row[self.names.index(name)] for row in self.values])


def _momentum_weight(grid: PhaseSpaceGrid) -> float:
    return (grid.hbar * grid.dpx) * (grid.hbar * grid.dpy)


def _position_weight(grid: PhaseSpaceGrid) -> float:
    return grid.dx * grid.dy


def _half_trace(values: np.ndarray) -> np.ndarray:
    if values.ndim == 4:
        return values
    return 0.5 * (values[..., 0, 0] + values[..., 1, 1])


def _checked_real(arr: np.ndarray, tol: float, what: str) -> np.ndarray:
    if np.iscomplexobj(arr):
        resid = float(np.max(np.abs(arr.imag))) if arr.size else 0.0
        scale = float(np.max(np.abs(arr))) if arr.size else 1.0
        if resid > tol * max(1.0, scale):
            raise FloatingPointError(f"{what}: imaginary residue {resid:.3e}")
        return arr.real
    return arr


def density(state: WignerState, trace_half: bool = True) -> np.ndarray:
    """Particle density n(x, y): (half-)trace of F integrated over momentum.

    trace_half follows the paper's n = Tr/2 convention; scalar states are
    half-trace densities already, so the flag only rescales matrix states.
    """
    tr = _half_trace(state.values)
    if not trace_half and not state.is_scalar:
        tr = 2.0 * tr
    out = np.sum(tr, axis=(2, 3)) * _momentum_weight(state.grid)
    return _checked_real(out, IMAG_RESIDUE_TOL * 0.1, "density")


def momentum_distribution(state: WignerState, trace_half: bool = True) -> np.ndarray:
    """Momentum-space density: the position-integrated mirror of density."""
    tr = _half_trace(state.values)
    if not trace_half and not state.is_scalar:
        tr = 2.0 * tr
    out = np.sum(tr, axis=(0, 1)) * _position_weight(state.grid)
    return _checked_real(out, IMAG_RESIDUE_TOL * 0.1, "momentum_distribution")


def _projector_components(hamiltonian: HamiltonianSymbol,
                          grid: PhaseSpaceGrid) -> tuple[np.ndarray, np.ndarray]:
    """chat field of the total symbol on the 4D grid (zero when degenerate).

    A scalar potential drops out of the eigenvectors, so for scalar U this is
    the band texture of Lambda(p) alone (uniform along x).
    """
    lam, u = hamiltonian.lam, hamiltonian.u
    if u.is_scalar:
        c = lam.c[None, None, :, :, :]
        c0 = lam.c0[None, None, :, :]
    else:
        c = u.c[:, :, None, None, :] + lam.c[None, None, :, :, :]
        c0 = u.c0[:, :, None, None] + lam.c0[None, None, :, :]
    norm = np.sqrt(np.sum(c * c, axis=-1))
    degenerate = norm < DEGENERACY_EPS * np.maximum(1.0, np.abs(c0))
    chat = np.where(degenerate[..., None], 0.0,
                    c / np.where(degenerate, 1.0, norm)[..., None])
    return chat, degenerate


def band_project(state: WignerState,
                 hamiltonian: HamiltonianSymbol) -> tuple[np.ndarray, np.ndarray]:
    """Band-resolved scalar fields f+- = tr(Pi+- F) over the 4D grid.

    With f = (f0, fvec) the Pauli data of F, f+- = f0 +- chat . fvec.  For a
    scalar state F = f sigma_0 both bands see the same field.
    """
    if state.is_scalar:
        f = np.asarray(state.values)
        return f.copy(), f.copy()
    f0, fvec = decompose(state.values)
    f0 = _checked_real(f0, IMAG_RESIDUE_TOL, "band_project")
    fvec = _checked_real(fvec, IMAG_RESIDUE_TOL, "band_project")
    chat, _ = _projector_components(hamiltonian, state.grid)
    spin = np.sum(chat * fvec, axis=-1)
    return f0 + spin, f0 - spin


def band_population(state: WignerState, hamiltonian: HamiltonianSymbol,
                    band: str = "upper") -> float:
    """4D integral of one band projection; a unit Pi+ packet gives 1.

    (The paper's printed n+ carries an extra 1/2; the unhalved convention is
    used so that populations sum to the full trace mass.)
    """
    f_plus, f_minus = band_project(state, hamiltonian)
    f = f_plus if band == "upper" else f_minus
    return float(np.sum(f)) * state.grid.cell_volume


def spin_polarization(state: WignerState, axis: int) -> float:
    """S_i = integral of Tr(sigma_i F) over the whole phase space."""
    if state.is_scalar:
        return 0.0
    _, fvec = decompose(state.values)
    comp = _checked_real(fvec[..., axis], IMAG_RESIDUE_TOL, "spin_polarization")
    return float(np.sum(2.0 * comp)) * state.grid.cell_volume


def mean_values(state: WignerState) -> dict:
    """Mass-normalized first moments <x>, <y>, <p_x>, <p_y> (p in hbar/nm)."""
    g = state.grid
    tr = _checked_real(_half_trace(state.values), IMAG_RESIDUE_TOL, "mean_values")
    total = float(np.sum(tr))
    if total == 0.0:
        raise ZeroDivisionError("state has vanishing total mass")
    return {
        "x": float(np.sum(tr.sum(axis=(1, 2, 3)) * g.x)) / total,
        "y": float(np.sum(tr.sum(axis=(0, 2, 3)) * g.y)) / total,
        "px": float(np.sum(tr.sum(axis=(0, 1, 3)) * g.px)) / total,
        "py": float(np.sum(tr.sum(axis=(0, 1, 2)) * g.py)) / total,
    }


def trap_fidelity(state: WignerState, center, radius: float) -> float:
    """Mass fraction within |r - center| <= radius (in [0, 1])."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    g = state.grid
    tr = _checked_real(_half_trace(state.values), IMAG_RESIDUE_TOL,
                       "trap_fidelity")
    x, y = g.position_mesh()
    inside = ((x - center[0]) ** 2 + (y - center[1]) ** 2) <= radius**2
    total = float(np.sum(tr))
    if total == 0.0:
        raise ZeroDivisionError("state has vanishing total mass")
    kept = float(np.sum(tr.sum(axis=(2, 3)) * inside))
    return kept / total


# ---------------------------------------------------------------------------
# Topological charge (lattice solid-angle construction)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TopologicalCharge:
    """Box plaquette sum, the boundary-to-pole closure, and their total."""

    total: float
    box_sum: float
    tail: float


def _solid_angles(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Signed solid angle of unit-vector triangles (Berg-Luscher form)."""
    triple = np.einsum("...i,...i->...", a, np.cross(b, c))
    denom = (1.0 + np.einsum("...i,...i->...", a, b)
             + np.einsum("...i,...i->...", b, c)
             + np.einsum("...i,...i->...", c, a))
    return 2.0 * np.arctan2(triple, denom)


def bloch_texture(lam: PauliSymbol, band: str = "upper") -> np.ndarray:
    """Unit Bloch field +-lambda/|lambda| on the momentum grid."""
    norm = np.sqrt(np.sum(lam.c**2, axis=-1))
    if np.any(norm < DEGENERACY_EPS):
        bad = np.argwhere(norm < DEGENERACY_EPS)
        raise ValueError(f"Bloch texture undefined: |lambda| ~ 0 at momentum "
                         f"nodes {bad[:4].tolist()}")
    sign = 1.0 if band == "upper" else -1.0
    return sign * lam.c / norm[..., None]


def _plaquette_sum(n: np.ndarray) -> float:
    a = n[:-1, :-1]
    b = n[1:, :-1]
    c = n[1:, 1:]
    d = n[:-1, 1:]
    return float(np.sum(_solid_angles(a, b, c)) + np.sum(_solid_angles(a, c, d)))


def _boundary_loop(n: np.ndarray) -> np.ndarray:
    top = n[0, :-1]
    right = n[:-1, -1]
    bottom = n[-1, ::-1][:-1]
    left = n[::-1, 0][:-1]
    return np.concatenate([top, right, bottom, left], axis=0)


def topological_charge(hamiltonian: HamiltonianSymbol, band: str = "upper",
                       close_at_infinity: bool | None = None) -> TopologicalCharge:
    """Degree of the momentum-space Bloch map, one plaquette at a time.

    The box contribution sums signed spherical-triangle areas over grid
    plaquettes; the truncation tail closes the boundary loop onto the
    asymptotic pole of the texture (the p^2 part of lambda_z dominating at
    infinity).  When lambda_z is bounded the texture has no single limit and
    the closure is skipped unless requested; the box sum then approaches a
    half-integer for a single Dirac valley.  Orientation is fixed so the
    chiral-superconductor upper band carries +1.
    """
    lam = hamiltonian.lam
    n = bloch_texture(lam, band)
    box = _plaquette_sum(n)
    tail = 0.0
    if close_at_infinity is None:
        close_at_infinity = _has_dominant_z(lam)
    if close_at_infinity:
        pole_sign = 1.0 if band == "upper" else -1.0
        pole = np.array([0.0, 0.0, pole_sign * np.sign(_z_curvature(lam))])
        loop = _boundary_loop(n)
        nxt = np.roll(loop, -1, axis=0)
        tail = float(np.sum(_solid_angles(
            loop, nxt, np.broadcast_to(pole, loop.shape))))
    return TopologicalCharge(total=(box + tail) / (4.0 * np.pi),
                             box_sum=box / (4.0 * np.pi),
                             tail=tail / (4.0 * np.pi))


def _z_curvature(lam: PauliSymbol) -> float:
    """Sign proxy of the large-p limit of lambda_z (corner minus center)."""
    cz = lam.c[..., 2]
    n1, n2 = cz.shape
    return float(cz[0, 0] - cz[n1 // 2, n2 // 2])


def _has_dominant_z(lam: PauliSymbol) -> bool:
    cz = np.abs(lam.c[..., 2])
    cxy = np.sqrt(lam.c[..., 0] ** 2 + lam.c[..., 1] ** 2)
    edge = np.concatenate([cz[0], cz[-1], cz[:, 0], cz[:, -1]])
    edge_xy = np.concatenate([cxy[0], cxy[-1], cxy[:, 0], cxy[:, -1]])
    return bool(np.median(edge) > 2.0 * np.median(edge_xy))


def write_series(series: ObservableSeries, path) -> None:
    """CSV dump: header t_fs,<names...>, full float64 round-trip precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_fs"] + list(series.names))
        for t, row in zip(series.times, series.values):
            writer.writerow([f"{v:.17g}" for v in [t] + row])


def read_series(path) -> ObservableSeries:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[0] != "t_fs":
            raise ValueError(f"{path}: not an observable series (header {header})")
        series = ObservableSeries(names=header[1:])
        for row in reader:
            series.append(float(row[0]), [float(v) for v in row[1:]])
    return series
