"""Tests for the dense eigensolver wrapper and spectral-gap reports."""

import math

import numpy as np
import pytest

from hypobgk import (
    EigenvalueFailure,
    certify,
    complex_eigenvalues,
    convergence_study,
    spectral_gap,
)

TWO_PI = 2.0 * math.pi


def test_reduces_to_hermitian_solver():
    rng = np.random.default_rng(5)
    for _ in range(10):
        n = int(rng.integers(3, 40))
        A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        M = (A + A.conj().T) / 2
        vals, vecs = complex_eigenvalues(M)
        assert np.abs(vals.imag).max() < 1e-10
        assert np.abs(np.sort(vals.real) - np.linalg.eigvalsh(M)).max() < 1e-10
        # returned vectors are unit eigenvectors
        j = int(rng.integers(0, n))
        v = vecs[:, j]
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12
        assert np.linalg.norm(M @ v - vals[j] * v) < 1e-8 * np.linalg.norm(M, 2)


def test_eigensolver_guards():
    with pytest.raises(EigenvalueFailure):
        complex_eigenvalues(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        complex_eigenvalues(np.ones((2, 3)))
    with pytest.raises(ValueError):
        complex_eigenvalues(np.eye(2001))
    z = np.zeros((4, 4))
    vals, _ = complex_eigenvalues(z)
    assert np.abs(vals).max() == 0.0


def test_gap_report_1d():
    rep = spectral_gap(1, TWO_PI, [1, 2, 3, 4, 5], 150)
    assert rep.argmin_kappa == 1.0
    assert 0.55 < rep.gap < 0.57
    rows = rep.rows()
    assert len(rows) == 5
    assert all(n == 150 for _, n, _ in rows)
    gaps = [g for _, _, g in rows]
    assert min(gaps) == rep.gap
    assert all(g > -1e-9 for g in gaps)


def test_homogeneous_mode_rate_is_analytic():
    rep = spectral_gap(1, TWO_PI, [0], 40)
    assert rep.gap == 1.0


def test_gap_input_validation():
    with pytest.raises(ValueError):
        spectral_gap(1, TWO_PI, [], 40)
    with pytest.raises(ValueError):
        spectral_gap(1, TWO_PI, [-1.0], 40)


@pytest.mark.parametrize(
    "d,L,N",
    [
        (1, math.pi, 150),
        (1, TWO_PI, 150),
        (1, 4.0 * math.pi, 150),
        (2, TWO_PI, 44),
        (3, TWO_PI, 84),
    ],
)
def test_certified_rate_below_numerical_gap(d, L, N):
    cert = certify(d, L, n_verify=0)
    rep = spectral_gap(d, L, [1, 2, 3], N)
    assert cert.mu < rep.gap


def test_convergence_study_flags_non_monotone_profiles():
    up = convergence_study(1, TWO_PI, 1.0, [25, 50])
    assert up.nondecreasing
    assert [n for n, _ in up.rows()] == [25, 50]
    over = convergence_study(1, TWO_PI, 1.0, [25, 50, 100])
    assert not over.nondecreasing
    gaps = [g for _, g in over.rows()]
    # the truncated gap overshoots at N = 50 and comes back down
    assert gaps[1] > gaps[2]
