from __future__ import annotations

import numpy as np
import pytest

from wigner4d import (ELECTRON_MASS, GridSpec, HBAR, build_bdg, build_graphene,
                      build_kp, build_rashba, build_tabulated, build_grid,
                      decompose, reconstruct, spectral)
from wigner4d.hamiltonian import sample_shifted


@pytest.fixture
def grid():
    return build_grid(GridSpec(-5.0, 5.0, -5.0, 5.0, -1.5, 1.5, -1.5, 1.5,
                               8, 8, 12, 12, hbar=HBAR))


def eig_at(h, j, l):
    pair = spectral(h.lam.c0[j, l], h.lam.c[j, l])
    return pair.lam_minus, pair.lam_plus


def nearest_index(axis, value):
    return int(np.argmin(np.abs(axis - value)))


def test_graphene_dirac_point_and_dispersion(grid):
    h = build_graphene(grid, v_f=1.0, gap=0.0)
    j = nearest_index(grid.px, 0.0)
    l = nearest_index(grid.py, 0.0)
    assert grid.px[j] == pytest.approx(0.0, abs=1e-12)
    lo, hi = eig_at(h, j, l)
    assert lo == pytest.approx(0.0, abs=1e-12)
    assert hi == pytest.approx(0.0, abs=1e-12)
    # |p| = 1 hbar/nm: lambda = +-v_F hbar
    j1 = nearest_index(grid.px, 1.0)
    lo, hi = eig_at(h, j1, l)
    assert hi == pytest.approx(1.0 * HBAR * abs(grid.px[j1]), rel=1e-12)


def test_graphene_gap_splits_dirac_point(grid):
    h = build_graphene(grid, v_f=1.0, gap=0.01)
    j = nearest_index(grid.px, 0.0)
    l = nearest_index(grid.py, 0.0)
    lo, hi = eig_at(h, j, l)
    assert hi == pytest.approx(0.005, rel=1e-12)
    assert lo == pytest.approx(-0.005, rel=1e-12)


def test_kp_dispersion(grid):
    m = 0.5 * ELECTRON_MASS
    kvec = np.array([0.3, -0.1])
    h = build_kp(grid, kvec, m)
    kx, ky = grid.momentum_mesh()
    lam0 = HBAR**2 * (kx**2 + ky**2) / (2 * m)
    off = HBAR * (kvec[0] * kx + kvec[1] * ky)
    pair = spectral(h.lam.c0, h.lam.c)
    assert np.max(np.abs(pair.lam_plus - (lam0 + np.abs(off)))) < 1e-12
    # p perpendicular to k: eigenvalues collapse to the parabola
    perp = np.abs(off) < 1e-12
    assert np.any(perp)
    assert np.max(np.abs((pair.lam_plus - pair.lam_minus)[perp])) < 1e-10


def test_rashba_components_and_zero_momentum_splitting(grid):
    k_so = np.array([0.0, 0.0, 0.7])
    b = np.array([0.0, 2e-4, 0.0])
    m = 0.015 * ELECTRON_MASS
    h = build_rashba(grid, k_so, b, m)
    kx, ky = grid.momentum_mesh()
    # p ^ K for K = K_z zhat: (p_y K_z, -p_x K_z, 0)
    assert np.allclose(h.lam.c[..., 0], HBAR * ky * k_so[2] - b[0], atol=1e-14)
    assert np.allclose(h.lam.c[..., 1], -HBAR * kx * k_so[2] - b[1], atol=1e-14)
    j = nearest_index(grid.px, 0.0)
    l = nearest_index(grid.py, 0.0)
    lo, hi = eig_at(h, j, l)
    assert hi - lo == pytest.approx(2 * np.linalg.norm(b), rel=1e-12)


def test_bdg_matches_paper_matrix_and_quasiparticle_energy(grid):
    m = 0.1 * ELECTRON_MASS
    mu = 1e-3
    delta = np.sqrt(mu / m)
    h = build_bdg(grid, m, mu, delta)
    kx, ky = grid.momentum_mesh()
    px, py = HBAR * kx, HBAR * ky
    # decompose(Lambda_BdG) round-trip: rebuild the chiral matrix
    mat = reconstruct(h.lam.c0, h.lam.c)
    assert np.allclose(mat[..., 0, 0], px**2 / (2 * m) + py**2 / (2 * m) - mu,
                       atol=1e-14)
    assert np.allclose(mat[..., 0, 1], -2 * delta * (py - 1j * px), atol=1e-14)
    assert np.allclose(mat[..., 1, 0], -2 * delta * (py + 1j * px), atol=1e-14)
    pair = spectral(h.lam.c0, h.lam.c)
    p2 = px**2 + py**2
    energy = np.sqrt((p2 / (2 * m) - mu) ** 2 + 4 * delta**2 * p2)
    assert np.max(np.abs(pair.lam_plus - energy)) < 1e-12
    # p = 0: +-mu; gap closes at p^2 = 2 m mu when delta = 0
    j = nearest_index(grid.px, 0.0)
    assert pair.lam_plus[j, j] == pytest.approx(mu, rel=1e-12)
    h0 = build_bdg(grid, m, mu, 0.0)
    k_fermi = np.sqrt(2 * m * mu) / HBAR
    comps = h0.lam.fn(np.asarray(k_fermi), np.asarray(0.0))
    ring = spectral(np.asarray(comps[0], float),
                    np.stack([np.asarray(c, float) for c in comps[1:]], -1))
    assert abs(ring.lam_plus) < 1e-15  # gap closes on the Fermi ring


def test_builders_produce_real_fields(grid):
    hs = [build_graphene(grid, 1.0, 0.01),
          build_kp(grid, [0.2, 0.1], ELECTRON_MASS),
          build_rashba(grid, [0, 0, 0.5], [0, 1e-4, 0], ELECTRON_MASS),
          build_bdg(grid, 0.1 * ELECTRON_MASS, 1e-3, 0.04)]
    for h in hs:
        assert not np.iscomplexobj(h.lam.c0)
        assert not np.iscomplexobj(h.lam.c)
        assert not np.iscomplexobj(h.u.c0)


def test_tabulated_diagonal_pair_and_roundtrip(grid, rng):
    n_x, n_y = grid.spec.n_x, grid.spec.n_y
    n_px, n_py = grid.spec.n_px, grid.spec.n_py
    u1 = rng.standard_normal((n_x, n_y))
    u2 = rng.standard_normal((n_x, n_y))
    u_c0 = 0.5 * (u1 + u2)
    u_c = np.zeros((n_x, n_y, 3))
    u_c[..., 2] = 0.5 * (u1 - u2)
    h = build_tabulated(grid, np.zeros((n_px, n_py)),
                        np.zeros((n_px, n_py, 3)), u_c0, u_c)
    mats = h.u.matrices()
    assert np.allclose(mats[..., 0, 0].real, u1, atol=1e-14)
    assert np.allclose(mats[..., 1, 1].real, u2, atol=1e-14)
    assert np.max(np.abs(mats[..., 0, 1])) == 0.0
    c0_back, c_back = decompose(mats)
    assert np.allclose(c0_back.real, u_c0, atol=1e-14)
    assert np.allclose(c_back.real, u_c, atol=1e-14)


def test_tabulated_shape_mismatch(grid):
    with pytest.raises(ValueError):
        build_tabulated(grid, np.zeros((3, 3)), np.zeros((3, 3, 3)),
                        np.zeros((8, 8)), np.zeros((8, 8, 3)))


def test_eigenvalue_consistency_random_points(grid, rng):
    m = 0.2 * ELECTRON_MASS
    h = build_rashba(grid, [0.1, -0.2, 0.5], [1e-4, 0, -2e-4], m)
    idx = rng.integers(0, grid.spec.n_px, size=(100, 2))
    kx = grid.px[idx[:, 0]]
    ky = grid.py[idx[:, 1]]
    px, py = HBAR * kx, HBAR * ky
    k_so = np.array([0.1, -0.2, 0.5])
    b = np.array([1e-4, 0, -2e-4])
    pvec = np.stack([px, py, np.zeros_like(px)], axis=-1)
    lam_vec = np.cross(pvec, k_so) - b
    analytic = (px**2 + py**2) / (2 * m) + np.linalg.norm(lam_vec, axis=-1)
    pair = spectral(h.lam.c0[idx[:, 0], idx[:, 1]],
                    h.lam.c[idx[:, 0], idx[:, 1]])
    assert np.max(np.abs(pair.lam_plus - analytic)) < 1e-12


def test_sample_shifted_closed_form_vs_roll(grid):
    # a grid-periodic potential sampled at integer-cell shifts: the closed
    # form and the periodic table read must agree on an integer-ratio lattice
    length = grid.spec.x_max - grid.spec.x_min

    def u0(x, y):
        return np.cos(2 * np.pi * x / length) + 0.0 * y

    from wigner4d.hamiltonian import position_symbol
    sym_fn = position_symbol(grid, u0)
    sym_tab = position_symbol(grid, sym_fn.c0.copy())
    shifts = grid.dx * np.arange(-2, 2)
    c_fn, _ = sample_shifted(sym_fn, shifts, np.zeros(1), +1, True)
    c_tab, _ = sample_shifted(sym_tab, shifts, np.zeros(1), +1, True)
    assert np.max(np.abs(c_fn - c_tab)) < 1e-12


def test_sample_shifted_trig_interp_matches_closed_form(grid):
    length = grid.spec.x_max - grid.spec.x_min

    def u0(x, y):
        return np.sin(2 * np.pi * x / length) * np.cos(2 * np.pi * y / length)

    from wigner4d.hamiltonian import position_symbol
    sym_fn = position_symbol(grid, u0)
    sym_tab = position_symbol(grid, sym_fn.c0.copy())
    shifts = np.array([0.37 * grid.dx, -1.24 * grid.dx])
    c_fn, _ = sample_shifted(sym_fn, shifts, shifts, +1, True)
    c_tab, _ = sample_shifted(sym_tab, shifts, shifts, +1, True)
    assert np.max(np.abs(c_fn - c_tab)) < 1e-10


def test_sample_shifted_wrap_folds_into_box(grid):
    from wigner4d.hamiltonian import position_symbol, sample_shifted

    sym = position_symbol(grid, lambda x, y: x + 0.0 * y)
    length = grid.spec.x_max - grid.spec.x_min
    shifts = np.array([0.0, length / 2.0])
    plain, _ = sample_shifted(sym, shifts, np.zeros(1), +1, True)
    wrapped, _ = sample_shifted(sym, shifts, np.zeros(1), +1, True, wrap=True)
    # unshifted column identical; half-box shift folds back into the box
    assert np.array_equal(plain[:, :, 0, 0], wrapped[:, :, 0, 0])
    assert plain[:, :, 1, 0].max() > grid.spec.x_max
    assert wrapped[:, :, 1, 0].max() < grid.spec.x_max
    inside = (wrapped >= grid.spec.x_min) & (wrapped < grid.spec.x_max)
    assert np.all(inside)
