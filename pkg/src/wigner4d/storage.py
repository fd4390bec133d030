"""WGN4 binary snapshots of phase-space fields.

Layout (little-endian):

    magic      4 bytes  b"WGN4"
    version    u32      currently 1
    dims       4 x u32  (n_x, n_y, n_px, n_py)
    axes       8 x f64  (x_min, dx, y_min, dy, px_min, dpx, py_min, dpy)
    hbar       f64
    time       f64      fs
    kind       u32      payload kind (see PAYLOAD_KINDS)
    length     u64      payload bytes = prod(dims) * kind size
    payload    raw C-order array data

Payload kinds: 0 = matrix22_c64 (2x2 complex128 per node), 1 = scalar_f64,
2 = matrix22_c32, 3 = scalar_f32.  The single-precision kinds exist for
memory-constrained runs and round-trip bit-exactly like the others.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import GridSpec, PhaseSpaceGrid, build_grid
from .states import WignerState

MAGIC = b"WGN4"
VERSION = 1
# magic, version, 4 dims, 8 axis doubles + hbar + time, kind, payload length
_HEADER = struct.Struct("<4sI4I10dIQ")

PAYLOAD_KINDS = {
    0: ("matrix22_c64", np.complex128, (2, 2)),
    1: ("scalar_f64", np.float64, ()),
    2: ("matrix22_c32", np.complex64, (2, 2)),
    3: ("scalar_f32", np.float32, ()),
}
_KIND_BY_NAME = {name: kind for kind, (name, _, _) in PAYLOAD_KINDS.items()}


class SnapshotError(ValueError):
    pass


class MagicMismatch(SnapshotError):
    pass


class VersionUnsupported(SnapshotError):
    pass


class Truncated(SnapshotError):
    pass


@dataclass(frozen=True)
class SnapshotHeader:
    dims: tuple[int, int, int, int]
    axes: tuple[float, ...]
    hbar: float
    time: float
    kind: int
    length: int


def _header_bytes(state: WignerState, kind: int, length: int) -> bytes:
    g = state.grid
    return _HEADER.pack(
        MAGIC, VERSION, *g.shape,
        g.x[0], g.dx, g.y[0], g.dy, g.px[0], g.dpx, g.py[0], g.dpy,
        g.hbar, state.time, kind, length,
    )


def write_snapshot(state: WignerState, path, single_precision: bool = False) -> None:
    """Serialize a state; the file appears atomically via a .partial rename."""
    if state.is_scalar:
        kind = _KIND_BY_NAME["scalar_f32" if single_precision else "scalar_f64"]
    else:
        kind = _KIND_BY_NAME["matrix22_c32" if single_precision else "matrix22_c64"]
    g = state.grid
    axes = (g.x[0], g.dx, g.y[0], g.dy, g.px[0], g.dpx, g.py[0], g.dpy)
    _write_payload(path, state.values, kind, g.shape, axes, g.hbar, state.time)


def write_field(values: np.ndarray, path, axes: tuple, hbar: float,
                time: float, single_precision: bool = False) -> None:
    """Serialize a derived 4D field (axes may be collapsed to length 1).

    axes = (x0, dx, y0, dy, px0, dpx, py0, dpy) of the surviving axes;
    collapsed axes carry (0, 0).
    """
    if values.ndim != 4:
        raise SnapshotError("field payloads must be 4D (collapse, don't drop)")
    kind = _KIND_BY_NAME["scalar_f32" if single_precision else "scalar_f64"]
    _write_payload(path, values, kind, values.shape, axes, hbar, time)


def _write_payload(path, values, kind, dims, axes, hbar, time) -> None:
    dtype = PAYLOAD_KINDS[kind][1]
    payload = np.ascontiguousarray(values, dtype=dtype)
    path = Path(path)
    tmp = path.with_name(path.name + ".partial")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, *dims, *axes, hbar, time, kind,
                              payload.nbytes))
        fh.write(payload.tobytes())
    tmp.replace(path)


def read_header(path) -> SnapshotHeader:
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
    if len(raw) < _HEADER.size:
        raise Truncated(f"{path}: header truncated ({len(raw)} of "
                        f"{_HEADER.size} bytes)")
    fields = _HEADER.unpack(raw)
    if fields[0] != MAGIC:
        raise MagicMismatch(f"{path}: bad magic {fields[0]!r}")
    if fields[1] != VERSION:
        raise VersionUnsupported(f"{path}: version {fields[1]} unsupported")
    dims = fields[2:6]
    axes = fields[6:14]
    hbar, time, kind, length = fields[14:18]
    if kind not in PAYLOAD_KINDS:
        raise SnapshotError(f"{path}: unknown payload kind {kind}")
    name, dtype, extra = PAYLOAD_KINDS[kind]
    expect = (int(np.prod(dims)) * int(np.prod(extra, dtype=int))
              * np.dtype(dtype).itemsize)
    if length != expect:
        raise SnapshotError(f"{path}: payload length {length} != expected {expect}")
    return SnapshotHeader(tuple(dims), tuple(axes), hbar, time, kind, length)


def _grid_from_header(h: SnapshotHeader) -> PhaseSpaceGrid:
    (x0, dx, y0, dy, px0, dpx, py0, dpy) = h.axes
    n_x, n_y, n_px, n_py = h.dims
    spec = GridSpec(
        x_min=x0, x_max=x0 + dx * n_x, y_min=y0, y_max=y0 + dy * n_y,
        px_min=px0, px_max=px0 + dpx * n_px,
        py_min=py0, py_max=py0 + dpy * n_py,
        n_x=n_x, n_y=n_y, n_px=n_px, n_py=n_py, hbar=h.hbar,
    )
    return build_grid(spec)


def read_payload(path) -> tuple[SnapshotHeader, np.ndarray]:
    """Header plus the raw (upcast) 4D payload, for states and fields alike."""
    header = read_header(path)
    name, dtype, extra = PAYLOAD_KINDS[header.kind]
    with open(path, "rb") as fh:
        fh.seek(_HEADER.size)
        raw = fh.read(header.length)
    if len(raw) != header.length:
        raise Truncated(f"{path}: payload truncated ({len(raw)} of "
                        f"{header.length} bytes)")
    values = np.frombuffer(raw, dtype=dtype).reshape(header.dims + extra).copy()
    if dtype == np.complex64:
        values = values.astype(np.complex128)
    elif dtype == np.float32:
        values = values.astype(np.float64)
    return header, values


def read_snapshot(path) -> WignerState:
    header, values = read_payload(path)
    return WignerState(_grid_from_header(header), values, header.time)
