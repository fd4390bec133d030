from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wigner4d.pauli import (SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z, bloch_vector,
                            decompose, reconstruct, spectral, unitary_of)

vec3 = st.tuples(*[st.floats(-5, 5, allow_nan=False) for _ in range(3)])


def taylor_expm(m: np.ndarray, terms: int = 30) -> np.ndarray:
    out = np.eye(2, dtype=complex)
    acc = np.eye(2, dtype=complex)
    for n in range(1, terms):
        acc = acc @ m / n
        out = out + acc
    return out


def test_decompose_identity_and_sigma_z():
    c0, c = decompose(SIGMA_0)
    assert c0 == pytest.approx(1.0)
    assert np.allclose(c, 0.0)
    c0, c = decompose(SIGMA_Z)
    assert c0 == pytest.approx(0.0)
    assert np.allclose(c, [0.0, 0.0, 1.0])


def test_decompose_roundtrip_random_hermitian(rng):
    raw = rng.standard_normal((5, 2, 2)) + 1j * rng.standard_normal((5, 2, 2))
    herm = 0.5 * (raw + np.conj(np.swapaxes(raw, -1, -2)))
    c0, c = decompose(herm)
    assert np.max(np.abs(c0.imag)) < 1e-14
    assert np.max(np.abs(c.imag)) < 1e-14
    assert np.allclose(reconstruct(c0, c), herm, atol=1e-14)


def test_unitary_identity_and_quarter_rotation():
    assert np.allclose(unitary_of(0.0, np.zeros(3), 0.7, +1), SIGMA_0)
    # theta*g = pi/2 about z: exp(i pi/2 sigma_z) = diag(i, -i) = i sigma_z
    g = 0.8
    out = unitary_of(0.0, np.array([0.0, 0.0, g]), np.pi / (2 * g), +1)
    assert np.allclose(out, 1j * SIGMA_Z, atol=1e-14)


def test_unitary_matches_taylor_oracle(rng):
    for _ in range(20):
        c0 = rng.standard_normal()
        c = rng.standard_normal(3)
        theta = rng.uniform(0.05, 2.0)
        for sign in (+1, -1):
            ours = unitary_of(c0, c, theta, sign)
            oracle = taylor_expm(sign * 1j * theta * reconstruct(c0, c))
            assert np.max(np.abs(ours - oracle)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(c=vec3, c0=st.floats(-3, 3), theta=st.floats(0.01, 1.5))
def test_unitary_group_properties(c, c0, theta):
    c = np.asarray(c)
    plus = unitary_of(c0, c, theta, +1)
    minus = unitary_of(c0, c, theta, -1)
    assert np.max(np.abs(plus @ minus - SIGMA_0)) < 1e-12
    half = unitary_of(c0, c, theta / 2, +1)
    assert np.max(np.abs(half @ half - plus)) < 1e-12


def test_spectral_aligned_cases():
    pair = spectral(0.0, np.array([0.0, 0.0, 1.0]))
    assert pair.lam_plus == pytest.approx(1.0)
    assert pair.lam_minus == pytest.approx(-1.0)
    assert np.allclose(pair.proj_plus, [[1, 0], [0, 0]], atol=1e-15)
    pair_x = spectral(0.0, np.array([1.0, 0.0, 0.0]))
    assert np.allclose(pair_x.proj_plus, 0.5 * np.array([[1, 1], [1, 1]]),
                       atol=1e-15)
    assert np.allclose(pair_x.proj_minus, 0.5 * np.array([[1, -1], [-1, 1]]),
                       atol=1e-15)


def test_spectral_against_eigh_oracle(rng):
    c0 = rng.standard_normal(50)
    c = rng.standard_normal((50, 3))
    pair = spectral(c0, c)
    h = reconstruct(c0, c)
    for proj, lam in ((pair.proj_plus, pair.lam_plus),
                      (pair.proj_minus, pair.lam_minus)):
        resid = h @ proj - lam[..., None, None] * proj
        assert np.max(np.abs(resid)) < 1e-12
    # eigenvalues against the dense solver
    w = np.linalg.eigvalsh(h)
    assert np.max(np.abs(np.sort(np.stack([pair.lam_minus, pair.lam_plus], -1))
                         - w)) < 1e-12


def test_spectral_projector_algebra(rng):
    c0 = rng.standard_normal(40)
    c = rng.standard_normal((40, 3))
    pair = spectral(c0, c)
    eye = np.broadcast_to(SIGMA_0, pair.proj_plus.shape)
    assert np.max(np.abs(pair.proj_plus + pair.proj_minus - eye)) < 1e-12
    for proj in (pair.proj_plus, pair.proj_minus):
        assert np.max(np.abs(proj @ proj - proj)) < 1e-12
        tr = proj[..., 0, 0] + proj[..., 1, 1]
        assert np.max(np.abs(tr - 1.0)) < 1e-12
    assert np.max(np.abs(pair.proj_plus @ pair.proj_minus)) < 1e-12


def test_spectral_degenerate_convention():
    pair = spectral(2.0, np.zeros(3))
    assert pair.degenerate
    assert np.allclose(pair.proj_plus, 0.5 * SIGMA_0)
    assert pair.lam_plus == pytest.approx(2.0)
    assert pair.lam_minus == pytest.approx(2.0)


def test_bloch_vector_axes():
    assert np.allclose(bloch_vector([1.0, 0.0]), [0, 0, 1])
    s = 1 / np.sqrt(2)
    assert np.allclose(bloch_vector([s, s]), [1, 0, 0], atol=1e-15)
    assert np.allclose(bloch_vector([s, 1j * s]), [0, 1, 0], atol=1e-15)


def test_bloch_vector_rejects_unnormalized():
    with pytest.raises(ValueError):
        bloch_vector([1.0, 1.0])


def test_bloch_antipodal_eigenvectors(rng):
    # eigenvectors of any traceless spin symbol map to opposite Bloch points
    c = rng.standard_normal(3)
    h = reconstruct(0.0, c)
    _, vecs = np.linalg.eigh(h)
    lo, hi = vecs[:, 0], vecs[:, 1]
    assert np.allclose(bloch_vector(hi), -bloch_vector(lo), atol=1e-12)
    assert abs(np.linalg.norm(bloch_vector(hi)) - 1.0) < 1e-12
