"""Bipartite decomposition via singular values."""

import numpy as np
import pytest

from schmidtkit import (
    Bipartition,
    basis_state,
    bell,
    flatten,
    ghz,
    haar_random_state,
    reconstruct,
    schmidt_decompose_bipartite,
    schmidt_number,
    spectra,
    w_state,
)

RT2 = 1.0 / np.sqrt(2.0)
CUT12 = Bipartition((1,), (2,))


def test_bell_coefficients():
    d = schmidt_decompose_bipartite(bell(), CUT12)
    assert np.allclose(d.coefficients, [RT2, RT2])
    assert d.rank == 2


def test_product_state_rank_one():
    s = basis_state((3, 4), (2, 1))
    d = schmidt_decompose_bipartite(s, Bipartition((1,), (2,)))
    assert d.rank == 1
    assert d.coefficients[0] == pytest.approx(1.0)
    assert np.allclose(d.decomposition.vectors[0][0], [0, 0, 1])
    assert np.allclose(d.decomposition.vectors[1][0], [0, 1, 0, 0])


def test_w_across_first_cut():
    d = schmidt_decompose_bipartite(w_state(), Bipartition((1,), (2, 3)))
    assert np.allclose(np.sort(d.coefficients ** 2)[::-1], [2 / 3, 1 / 3])


def test_reconstruction_matches_flattening():
    for seed in range(5):
        s = haar_random_state((3, 2, 2), seed=seed)
        cut = Bipartition((1, 3), (2,))
        d = schmidt_decompose_bipartite(s, cut)
        m = flatten(s, cut)
        rebuilt = sum(
            c * np.outer(u, v)
            for c, u, v in zip(d.coefficients,
                               d.decomposition.vectors[0],
                               d.decomposition.vectors[1]))
        assert np.max(np.abs(rebuilt - m)) < 1e-12


def test_grouped_dims_and_reconstruct():
    s = haar_random_state((2, 3, 2), seed=3)
    cut = Bipartition((2,), (1, 3))
    d = schmidt_decompose_bipartite(s, cut)
    assert d.decomposition.dims == (3, 4)
    grouped = reconstruct(d.decomposition)
    assert np.max(np.abs(grouped.amplitudes - flatten(s, cut).reshape(-1))) < 1e-12


def test_phase_convention_deterministic():
    s = haar_random_state((4, 4), seed=11)
    a = schmidt_decompose_bipartite(s, CUT12)
    b = schmidt_decompose_bipartite(s, CUT12)
    for fa, fb in zip(a.decomposition.vectors, b.decomposition.vectors):
        assert np.array_equal(fa, fb)
    # first nonzero component of each left vector is real positive
    for vec in a.decomposition.vectors[0]:
        lead = vec[np.flatnonzero(np.abs(vec) > 1e-12)[0]]
        assert abs(lead.imag) < 1e-12 and lead.real > 0


def test_schmidt_number_equals_matrix_rank():
    for seed in range(8):
        s = haar_random_state((3, 5), seed=seed)
        k = schmidt_number(s, CUT12)
        oracle = np.linalg.matrix_rank(flatten(s, CUT12), tol=1e-9)
        assert k == oracle == 3


def test_schmidt_number_of_sparse_states():
    assert schmidt_number(bell(), CUT12) == 2
    assert schmidt_number(basis_state((2, 2), (0, 0)), CUT12) == 1
    assert schmidt_number(ghz(4), Bipartition((1, 2), (3, 4))) == 2


def test_spectra_match_squared_coefficients():
    for seed in range(5):
        s = haar_random_state((2, 3, 4), seed=seed)
        cut = Bipartition((1, 2), (3,))
        d = schmidt_decompose_bipartite(s, cut)
        vals = spectra(s, (1, 2))
        k = d.rank
        assert np.allclose(vals[:k], d.coefficients ** 2, atol=1e-9)
        assert np.all(vals[k:] < 1e-9)


def test_spectra_descending_and_clipped():
    vals = spectra(ghz(3), (2,))
    assert np.allclose(vals, [0.5, 0.5])
    assert np.all(np.diff(vals) <= 0)
    assert np.all(vals >= 0)
