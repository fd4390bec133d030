"""2x2 Pauli algebra: decomposition, closed-form exponentials, spectral data.

Every function broadcasts over arbitrary leading axes, so a "matrix" argument
of shape (..., 2, 2) or a coefficient field of shape (..., 3) may be a single
matrix or a whole phase-space field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

DEGENERACY_EPS = 1e-12


def decompose(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pauli coefficients (c0, c) of m, with c_i = Tr(sigma_i m)/2.

    Returns complex coefficients in general; they are real exactly when m is
    Hermitian.  Shapes: m (..., 2, 2) -> c0 (...), c (..., 3).
    """
    m = np.asarray(m)
    c0 = 0.5 * (m[..., 0, 0] + m[..., 1, 1])
    cx = 0.5 * (m[..., 0, 1] + m[..., 1, 0])
    cy = 0.5j * (m[..., 0, 1] - m[..., 1, 0])
    cz = 0.5 * (m[..., 0, 0] - m[..., 1, 1])
    return c0, np.stack([cx, cy, cz], axis=-1)


def reconstruct(c0: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Inverse of :func:`decompose`: c0*sigma_0 + c . sigma as (..., 2, 2)."""
    c0 = np.asarray(c0)
    c = np.asarray(c)
    out = np.empty(np.broadcast_shapes(c0.shape, c.shape[:-1]) + (2, 2),
                   dtype=np.result_type(c0, c, np.complex128))
    out[..., 0, 0] = c0 + c[..., 2]
    out[..., 1, 1] = c0 - c[..., 2]
    out[..., 0, 1] = c[..., 0] - 1j * c[..., 1]
    out[..., 1, 0] = c[..., 0] + 1j * c[..., 1]
    return out


def unitary_of(c0: np.ndarray, c: np.ndarray, theta: float,
               sign: int) -> np.ndarray:
    """exp(sign * i * theta * (c0 sigma_0 + c . sigma)) in closed form.

    The |c| -> 0 limit is removable (sin(theta|c|)/|c| -> theta) and handled
    exactly through np.sinc.  sign must be +1 or -1.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    c0 = np.asarray(c0, dtype=float)
    c = np.asarray(c, dtype=float)
    norm = np.sqrt(np.sum(c * c, axis=-1))
    # sin(theta*n)/n with the n=0 limit theta, via sinc(x)=sin(pi x)/(pi x)
    slinc = np.asarray(theta * np.sinc(theta * norm / np.pi))
    phase = np.asarray(np.exp(sign * 1j * theta * c0))
    out = reconstruct(np.cos(theta * norm), sign * 1j * slinc[..., None] * c)
    return phase[..., None, None] * out


@dataclass(frozen=True)
class SpectralPair:
    """Eigenvalues and spectral projectors of c0*sigma_0 + c . sigma.

    lam_plus/lam_minus have the field's leading shape; proj_plus/proj_minus are
    (..., 2, 2).  degenerate marks nodes where |c| fell below the threshold and
    the equal-weight convention proj = sigma_0/2 was applied.
    """

    lam_plus: np.ndarray
    lam_minus: np.ndarray
    proj_plus: np.ndarray
    proj_minus: np.ndarray
    degenerate: np.ndarray


def spectral(c0: np.ndarray, c: np.ndarray,
             eps: float = DEGENERACY_EPS) -> SpectralPair:
    """Closed-form eigenvalues c0 +- |c| and projectors (sigma_0 +- chat.sigma)/2.

    The chat = c/|c| form avoids the (|c| +- c_z) denominators of the textbook
    matrix, which are singular when c is (anti)aligned with z.  Nodes with
    |c| < eps*max(1, |c0|) are treated as degenerate: both projectors become
    sigma_0/2 and both eigenvalues c0.
    """
    c0 = np.asarray(c0, dtype=float)
    c = np.asarray(c, dtype=float)
    norm = np.sqrt(np.sum(c * c, axis=-1))
    threshold = eps * np.maximum(1.0, np.abs(c0))
    degenerate = norm < threshold
    safe = np.where(degenerate, 1.0, norm)
    chat = np.where(degenerate[..., None], 0.0, c / safe[..., None])
    lam_gap = np.where(degenerate, 0.0, norm)
    half = np.full(np.broadcast_shapes(c0.shape, c.shape[:-1]), 0.5)
    return SpectralPair(
        lam_plus=c0 + lam_gap,
        lam_minus=c0 - lam_gap,
        proj_plus=reconstruct(half, 0.5 * chat),
        proj_minus=reconstruct(half, -0.5 * chat),
        degenerate=degenerate,
    )


def bloch_vector(psi: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Bloch image (2 Re(conj(psi1) psi2), 2 Im(conj(psi1) psi2), |psi1|^2-|psi2|^2).

    psi has shape (..., 2) and must be normalized per node (checked to tol).
    """
    psi = np.asarray(psi, dtype=complex)
    norm2 = np.sum(np.abs(psi) ** 2, axis=-1)
    if not np.allclose(norm2, 1.0, atol=tol, rtol=0.0):
        raise ValueError("spinor is not normalized")
    cross = np.conj(psi[..., 0]) * psi[..., 1]
    return np.stack([
        2.0 * cross.real,
        2.0 * cross.imag,
        np.abs(psi[..., 0]) ** 2 - np.abs(psi[..., 1]) ** 2,
    ], axis=-1)
