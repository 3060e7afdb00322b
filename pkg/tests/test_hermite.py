"""Tests for the velocity basis: quadrature, orderings, evaluation."""

import math

import numpy as np
import pytest

from hypobgk import (
    BasisSpec,
    basis_change_matrix,
    eval_basis,
    gauss_hermite,
    lex_index,
    multi_index,
    recurrence_coeffs,
)
from hypobgk.hermite import MIN_CERTIFICATE_SIZE, SQRT2PI, hermite_phi


def test_quadrature_normalization_and_symmetry():
    for n in (1, 5, 32, 64, 160):
        x, w = gauss_hermite(n)
        assert len(x) == len(w) == n
        # far-tail weights underflow to 0.0 for large rules; the bulk
        # must stay strictly positive
        assert np.all(w >= 0)
        if n <= 48:
            assert np.all(w > 0)
        assert abs(w.sum() - SQRT2PI) < 1e-12 * SQRT2PI
        # nodes come sorted and symmetric about the origin
        assert np.all(np.diff(x) > 0)
        worst = max(abs(x[i] + x[n - 1 - i]) for i in range(n))
        assert worst < 1e-13


def test_single_node_rule():
    x, w = gauss_hermite(1)
    assert abs(x[0]) < 1e-15
    assert abs(w[0] - SQRT2PI) < 1e-13


def test_orthonormality_under_quadrature():
    # 64 nodes integrate products up to degree 127 exactly, enough for
    # every pair with m, n <= 20
    x, w = gauss_hermite(64)
    phi = hermite_phi(20, x)
    G = np.array(
        [[np.sum(w * phi[m] * phi[n]) for n in range(21)] for m in range(21)]
    ) / SQRT2PI
    assert np.abs(G - np.eye(21)).max() < 1e-10


def test_recurrence_coeffs():
    assert recurrence_coeffs(0) == (1.0, 0.0)
    up, down = recurrence_coeffs(5)
    assert up == math.sqrt(6.0)
    assert down == math.sqrt(5.0)
    with pytest.raises(ValueError):
        recurrence_coeffs(-1)


def test_recurrence_matches_evaluations():
    rng = np.random.default_rng(42)
    v = rng.uniform(-3.0, 3.0, size=12)
    phi = hermite_phi(7, v)
    for m in range(1, 6):
        up, down = recurrence_coeffs(m)
        resid = v * phi[m] - up * phi[m + 1] - down * phi[m - 1]
        assert np.abs(resid).max() < 1e-12


def test_flat_index_roundtrip():
    for d in (1, 2, 3):
        for i in range(400):
            m = multi_index(i, d)
            assert len(m) == d
            assert lex_index(m, d) == i
    # degrees are nondecreasing along the flat order
    for d in (2, 3):
        degs = [sum(multi_index(i, d)) for i in range(200)]
        assert all(b >= a for a, b in zip(degs, degs[1:]))


def test_flat_index_validation():
    with pytest.raises(ValueError):
        lex_index((1, -1))
    with pytest.raises(ValueError):
        lex_index((1, 2), d=3)
    with pytest.raises(ValueError):
        lex_index((1, 2, 3, 4))
    with pytest.raises(ValueError):
        multi_index(-1, 2)


def test_eval_basis_low_orders():
    rng = np.random.default_rng(0)
    v = rng.uniform(-2.5, 2.5, size=9)
    g0 = np.exp(-0.5 * v * v) / SQRT2PI
    assert np.abs(eval_basis(0, v) - g0).max() < 1e-14
    assert np.abs(eval_basis(1, v) - v * g0).max() < 1e-13
    assert np.abs(eval_basis(2, v) - (v * v - 1.0) / math.sqrt(2.0) * g0).max() < 1e-13
    # unweighted variant strips the Gaussian factor
    assert np.abs(eval_basis(2, v, weighted=False) - (v * v - 1.0) / math.sqrt(2.0)).max() < 1e-12


def test_eval_basis_tensor_product():
    rng = np.random.default_rng(1)
    pts = rng.uniform(-2.0, 2.0, size=(7, 2))
    got = eval_basis((1, 2), pts)
    want = eval_basis(1, pts[:, 0]) * eval_basis(2, pts[:, 1]) * SQRT2PI ** 0  # d=1 factors
    # product of two weighted 1D factors carries the full 2D Gaussian
    want = eval_basis(1, pts[:, 0]) * eval_basis(2, pts[:, 1])
    assert np.abs(got - want).max() < 1e-13


def test_energy_variant_recombines_degree_two():
    # the energy variant mixes only the diagonal degree-2 functions;
    # every other function agrees with the tensor variant
    rng = np.random.default_rng(2)
    pts = rng.uniform(-2.0, 2.0, size=(8, 2))
    for m in ((0, 0), (1, 0), (0, 1), (1, 1), (2, 1)):
        a = eval_basis(m, pts, variant="energy")
        b = eval_basis(m, pts, variant="tensor")
        assert np.abs(a - b).max() < 1e-13
    S = basis_change_matrix(2, MIN_CERTIFICATE_SIZE[2])
    i20, i02 = lex_index((2, 0)), lex_index((0, 2))
    mixed = eval_basis((2, 0), pts, variant="energy")
    manual = S[i20, i20] * eval_basis((2, 0), pts) + S[i20, i02] * eval_basis((0, 2), pts)
    assert np.abs(mixed - manual).max() < 1e-13


@pytest.mark.parametrize("d,n", [(2, 66), (3, 120)])
def test_basis_change_matrix_involution(d, n):
    S = basis_change_matrix(d, n)
    eye = np.eye(n)
    assert np.abs(S - S.T).max() == 0.0
    assert np.abs(S @ S - eye).max() < 1e-14
    # rows outside the diagonal degree-2 block are untouched
    block = {lex_index(tuple(2 if j == a else 0 for j in range(d))) for a in range(d)}
    for i in range(n):
        if i not in block:
            assert np.abs(S[i] - eye[i]).max() == 0.0


def test_basis_spec():
    spec = BasisSpec(2, "energy", 11)
    idx = spec.indices()
    assert len(idx) == 11
    assert idx[0] == (0, 0)
    with pytest.raises(ValueError):
        BasisSpec(2, "fourier", 10)
    with pytest.raises(ValueError):
        BasisSpec(3, "tensor", 0)
    # the two variants coincide in one dimension, so both names are legal
    assert BasisSpec(1, "energy", 5).indices() == BasisSpec(1, "tensor", 5).indices()


def test_min_certificate_sizes():
    assert MIN_CERTIFICATE_SIZE == {1: 5, 2: 11, 3: 21}
