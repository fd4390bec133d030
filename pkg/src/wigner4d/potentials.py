"""Closed-form scalar potential catalog used by the scenario configs.

Every kind provides u0(x, y) in eV (broadcasting over nm coordinate arrays)
and, when smooth, its gradient; time-dependent kinds re-evaluate per step.
Closed forms matter here: the quantum field step samples the potential at
x +- eta/2, which generally falls off-grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Fn = Callable[[np.ndarray, np.ndarray], np.ndarray]
GradFn = Callable[[np.ndarray, np.ndarray], tuple]


def _smooth_box(t: np.ndarray, lo: float, hi: float, width: float) -> np.ndarray:
    """Indicator of [lo, hi], logistic-smoothed over width (hard if width=0)."""
    if width <= 0:
        return ((t >= lo) & (t <= hi)).astype(float)
    from scipy.special import expit
    return expit((t - lo) / width) * expit((hi - t) / width)


def _heaviside(t: np.ndarray, width: float) -> np.ndarray:
    if width <= 0:
        return (t >= 0).astype(float)
    from scipy.special import expit
    return expit(t / width)


@dataclass(frozen=True)
class Potential:
    """Named closed-form potential; `at(t)` yields (value_fn, grad_fn|None)."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown potential kind '{self.kind}'; "
                             f"valid: {sorted(_KINDS)}")
        _KINDS[self.kind].validate(self.params)

    @property
    def time_dependent(self) -> bool:
        return _KINDS[self.kind].time_dependent

    def at(self, t: float = 0.0) -> tuple[Fn, GradFn | None]:
        return _KINDS[self.kind].make(self.params, t)

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.params}

    @classmethod
    def from_dict(cls, d: dict) -> "Potential":
        d = dict(d)
        kind = d.pop("kind", None)
        if kind is None:
            raise ValueError("potential requires a 'kind' field")
        return cls(kind, d)


@dataclass(frozen=True)
class _Kind:
    required: tuple
    make_fns: Callable
    time_dependent: bool = False
    optional: tuple = ()

    def validate(self, params: dict) -> None:
        missing = [k for k in self.required if k not in params]
        if missing:
            raise ValueError(f"potential missing parameters: {missing}")
        unknown = [k for k in params if k not in self.required + self.optional]
        if unknown:
            raise ValueError(f"potential has unknown parameters: {unknown}")

    def make(self, params: dict, t: float):
        return self.make_fns(params, t)


def _make_none(p, t):
    return None, None


def _make_constant(p, t):
    v = float(p["v"])
    return (lambda x, y: v + 0.0 * x * y,
            lambda x, y: (0.0 * x * y, 0.0 * x * y))


def _make_linear(p, t):
    ax, ay, b = float(p["ax"]), float(p["ay"]), float(p.get("b", 0.0))
    return (lambda x, y: ax * x + ay * y + b,
            lambda x, y: (ax + 0.0 * x * y, ay + 0.0 * x * y))


def _make_harmonic(p, t):
    v, cx, cy = float(p["v"]), float(p.get("cx", 0.0)), float(p.get("cy", 0.0))
    return (lambda x, y: v * ((x - cx) ** 2 + (y - cy) ** 2),
            lambda x, y: (2.0 * v * (x - cx) + 0.0 * y,
                          2.0 * v * (y - cy) + 0.0 * x))


def _make_gaussian(p, t):
    u0, sig = float(p["u0"]), float(p["sigma"])
    cx, cy = float(p.get("cx", 0.0)), float(p.get("cy", 0.0))

    def val(x, y):
        return u0 * np.exp(-((x - cx) ** 2 + (y - cy) ** 2) / sig**2)

    def grad(x, y):
        common = val(x, y) * (-2.0 / sig**2)
        return common * (x - cx), common * (y - cy)

    return val, grad


def _make_gaussian_x(p, t):
    u0, lam = float(p["u0"]), float(p["lam"])

    def val(x, y):
        return -u0 * np.exp(-x**2 / (2.0 * lam**2)) + 0.0 * y

    def grad(x, y):
        return val(x, y) * (-x / lam**2), 0.0 * x * y

    return val, grad


def _make_smooth_step_x(p, t):
    v, x0, sig = float(p["v"]), float(p["x0"]), float(p["sigma"])

    def val(x, y):
        left = x < x0
        return np.where(left, v, v * np.exp(-((x - x0) / sig) ** 2)) + 0.0 * y

    def grad(x, y):
        gx = np.where(x < x0, 0.0,
                      v * np.exp(-((x - x0) / sig) ** 2)
                      * (-2.0 * (x - x0) / sig**2))
        return gx + 0.0 * y, 0.0 * x * y

    return val, grad


def _make_double_slit(p, t):
    height = float(p["height"])
    y0 = float(p.get("wall_y0", 0.0))
    wt = float(p["wall_thickness"])
    w_slit = float(p["slit_width"])
    w_sep = float(p["slit_sep"])
    focus_v = float(p.get("focus_v", 0.0))
    smooth = float(p.get("edge_smoothing", 0.0))

    def val(x, y):
        in_wall = _smooth_box(y, y0, y0 + wt, smooth)
        ax = np.abs(x)
        in_slit = _smooth_box(ax, 0.5 * w_sep, 0.5 * w_sep + w_slit, smooth)
        barrier = height * in_wall * (1.0 - in_slit)
        focus = focus_v * x**2 * _heaviside(y - y0, smooth)
        return barrier + focus

    return val, None


def _make_tweezer_orbit(p, t):
    u0, sig = float(p["u0"]), float(p["sigma"])
    radius, omega = float(p["radius"]), float(p["omega"])
    angle = min(omega * t, 0.5 * np.pi)   # hold at the quarter-circle end
    cx = radius * np.cos(angle)
    cy = radius * np.sin(angle)
    return _make_gaussian({"u0": u0, "sigma": sig, "cx": cx, "cy": cy}, t)


def _make_sum(p, t):
    parts = [Potential.from_dict(d).at(t) for d in p["terms"]]
    fns = [f for f, _ in parts if f is not None]
    grads = [g for f, g in parts if f is not None]

    def val(x, y):
        return sum(f(x, y) for f in fns)

    if any(g is None for g in grads):
        return val, None

    def grad(x, y):
        gs = [g(x, y) for g in grads]
        return sum(g[0] for g in gs), sum(g[1] for g in gs)

    return val, grad


_KINDS = {
    "none": _Kind((), _make_none),
    "constant": _Kind(("v",), _make_constant),
    "linear": _Kind(("ax", "ay"), _make_linear, optional=("b",)),
    "harmonic": _Kind(("v",), _make_harmonic, optional=("cx", "cy")),
    "gaussian": _Kind(("u0", "sigma"), _make_gaussian, optional=("cx", "cy")),
    "gaussian_x": _Kind(("u0", "lam"), _make_gaussian_x),
    "smooth_step_x": _Kind(("v", "x0", "sigma"), _make_smooth_step_x),
    "double_slit": _Kind(("height", "wall_thickness", "slit_width", "slit_sep"),
                         _make_double_slit,
                         optional=("wall_y0", "focus_v", "edge_smoothing")),
    "tweezer_orbit": _Kind(("u0", "sigma", "radius", "omega"),
                           _make_tweezer_orbit, time_dependent=True),
    "sum": _Kind(("terms",), _make_sum),
}
