"""4D phase-space grid and its Fourier-conjugate axes.

Unit conventions used throughout the package:

* positions in nm, times in fs, energies in eV;
* momentum axes store p/hbar in nm^-1 (the "hbar nm^-1" numbers quoted by
  scenario tables); the physical momentum is hbar times the stored value;
* the eta axes (conjugate to momentum) store hbar*eta, in nm, so that the
  kernel sample points x +- eta/2 are plain lengths and the Fourier relation
  d_eta * P = 2*pi holds for the stored numbers;
* the mu axes (conjugate to position) are in nm^-1.

With these conventions the grid-consistency ratios are
N_eta = d_eta / (2 dx) and N_mu = d_mu / (2 dp), identical to the hbar-exact
expressions because the hbar factors are folded into the stored axes.

All axes follow the periodic convention dx = L/N (no closed endpoint), so the
DFT period is exact; conjugate axes are symmetric about zero and span
[-pi/dp, pi/dp - d_eta] and [-pi/dx, pi/dx - d_mu].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FRENSLEY_BAND = (0.25, 4.0)


@dataclass(frozen=True)
class GridSpec:
    """User-facing description of the 4D phase-space box."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    px_min: float
    px_max: float
    py_min: float
    py_max: float
    n_x: int
    n_y: int
    n_px: int
    n_py: int
    hbar: float
    periodic_x: bool = True
    periodic_y: bool = True

    def validate(self) -> None:
        extents = {
            "x": self.x_max - self.x_min,
            "y": self.y_max - self.y_min,
            "px": self.px_max - self.px_min,
            "py": self.py_max - self.py_min,
        }
        for name, ext in extents.items():
            if not ext > 0:
                raise ValueError(f"{name} extent must be positive, got {ext}")
        for name, n in (("n_x", self.n_x), ("n_y", self.n_y),
                        ("n_px", self.n_px), ("n_py", self.n_py)):
            if n < 4:
                raise ValueError(f"{name} must be >= 4, got {n}")
            if n % 2:
                raise ValueError(f"{name} must be even for the symmetric "
                                 f"conjugate axes, got {n}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")


def _uniform_axis(lo: float, hi: float, n: int) -> tuple[np.ndarray, float]:
    step = (hi - lo) / n
    return lo + step * np.arange(n), step


def _conjugate_axis(extent: float, n: int) -> tuple[np.ndarray, float]:
    step = 2.0 * np.pi / extent
    return step * (np.arange(n) - n // 2), step


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Built axes of the discretized phase space (immutable)."""

    spec: GridSpec
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    px: np.ndarray = field(repr=False)
    py: np.ndarray = field(repr=False)
    eta_x: np.ndarray = field(repr=False)
    eta_y: np.ndarray = field(repr=False)
    mu_x: np.ndarray = field(repr=False)
    mu_y: np.ndarray = field(repr=False)
    dx: float
    dy: float
    dpx: float
    dpy: float
    d_eta_x: float
    d_eta_y: float
    d_mu_x: float
    d_mu_y: float

    @property
    def hbar(self) -> float:
        return self.spec.hbar

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (self.spec.n_x, self.spec.n_y, self.spec.n_px, self.spec.n_py)

    @property
    def cell_volume(self) -> float:
        """Phase-space cell dx dy dp_x dp_y with the physical momentum
        measure dp = hbar * dk folded in (eV^2 fs^2)."""
        return self.dx * self.dy * (self.hbar * self.dpx) * (self.hbar * self.dpy)

    @property
    def n_eta_x(self) -> float:
        return self.d_eta_x / (2.0 * self.dx)

    @property
    def n_eta_y(self) -> float:
        return self.d_eta_y / (2.0 * self.dy)

    @property
    def n_mu_x(self) -> float:
        return self.d_mu_x / (2.0 * self.dpx)

    @property
    def n_mu_y(self) -> float:
        return self.d_mu_y / (2.0 * self.dpy)

    def position_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(x, y) broadcastable over the leading two grid axes."""
        return self.x[:, None], self.y[None, :]

    def momentum_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(px, py) broadcastable over the trailing two grid axes."""
        return self.px[:, None], self.py[None, :]


def build_grid(spec: GridSpec) -> PhaseSpaceGrid:
    """Build all direct and conjugate axes for a validated spec."""
    spec.validate()
    x, dx = _uniform_axis(spec.x_min, spec.x_max, spec.n_x)
    y, dy = _uniform_axis(spec.y_min, spec.y_max, spec.n_y)
    px, dpx = _uniform_axis(spec.px_min, spec.px_max, spec.n_px)
    py, dpy = _uniform_axis(spec.py_min, spec.py_max, spec.n_py)
    # eta stores hbar*eta; its extent-relation partner is the momentum range
    # expressed in physical units, hence the stored step is 2*pi / (p-range).
    eta_x, d_eta_x = _conjugate_axis(spec.px_max - spec.px_min, spec.n_px)
    eta_y, d_eta_y = _conjugate_axis(spec.py_max - spec.py_min, spec.n_py)
    mu_x, d_mu_x = _conjugate_axis(spec.x_max - spec.x_min, spec.n_x)
    mu_y, d_mu_y = _conjugate_axis(spec.y_max - spec.y_min, spec.n_y)
    for arr in (x, y, px, py, eta_x, eta_y, mu_x, mu_y):
        arr.setflags(write=False)
    return PhaseSpaceGrid(
        spec=spec, x=x, y=y, px=px, py=py,
        eta_x=eta_x, eta_y=eta_y, mu_x=mu_x, mu_y=mu_y,
        dx=dx, dy=dy, dpx=dpx, dpy=dpy,
        d_eta_x=d_eta_x, d_eta_y=d_eta_y, d_mu_x=d_mu_x, d_mu_y=d_mu_y,
    )


@dataclass(frozen=True)
class FrensleyReport:
    """Grid-consistency ratios tying direct and conjugate discretizations."""

    n_eta_x: float
    n_eta_y: float
    n_mu_x: float
    n_mu_y: float
    warn: bool

    @property
    def ratios(self) -> tuple[float, float, float, float]:
        return (self.n_eta_x, self.n_eta_y, self.n_mu_x, self.n_mu_y)


def frensley_report(grid: PhaseSpaceGrid) -> FrensleyReport:
    """Compute the [N_eta], [N_mu] ratios; warn when any leaves [1/4, 4].

    Unity ratios mean the shifted symbol samples x +- eta/2 (and p +- mu/2)
    land exactly on grid nodes; far-from-unity ratios degrade the accuracy of
    the full quantum kernels (the semiclassical kernels are unaffected).
    """
    ratios = (grid.n_eta_x, grid.n_eta_y, grid.n_mu_x, grid.n_mu_y)
    lo, hi = FRENSLEY_BAND
    warn = any(not (lo <= r <= hi) for r in ratios)
    return FrensleyReport(*ratios, warn=warn)
