"""Tests for the closed-form decay certificates and their minor chains."""

import math

import numpy as np
import pytest

from hypobgk import (
    DecayCertificate,
    alpha3_1d,
    assemble_D_block,
    certify,
    minors_1d,
    minors_2d,
    minors_3d,
    mu_limits_1d,
    mu_value,
    rational_monotone_check,
)
from hypobgk.certificate import (
    AMGM,
    THETA,
    _thresholds_2d,
    _thresholds_3d,
    alpha_plus_2d,
    alpha_plus_3d,
)

TWO_PI = 2.0 * math.pi
MINORS = {1: minors_1d, 2: minors_2d, 3: minors_3d}
ALPHA_PLUS = {1: lambda l: alpha3_1d(TWO_PI / l), 2: alpha_plus_2d, 3: alpha_plus_3d}


def _brute_minors(d, kappa, alpha, ell, convention):
    D = assemble_D_block(d, kappa, alpha, ell)
    n = D.shape[0]
    out = []
    for j in range(1, n + 1):
        sub = D[n - j:, n - j:] if convention == "trailing" else D[:j, :j]
        out.append(float(np.linalg.det(sub).real))
    return out


def test_minor_table_1d_hand_values():
    t = minors_1d(1.0, 0.1)
    assert t.convention == "trailing"
    want = (2.0, 2.8, 0.332, 0.0664, 0.01328)
    assert np.abs(np.array(t.values) - want).max() < 1e-14


def test_minor_tables_shape():
    t2 = minors_2d(1.3, 0.1, 0.8)
    t3 = minors_3d(1.3, 0.1, 0.8)
    assert t2.convention == t3.convention == "leading"
    assert len(t2.values) == 11 and len(t3.values) == 21
    assert {"p6", "p7", "p8", "p9", "p11"} == set(t2.p_values)
    assert {"p6", "p8", "p10", "p11", "p12", "p14", "p16", "p21"} == set(t3.p_values)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_minors_match_assembled_determinants(d):
    rng = np.random.default_rng(100 + d)
    for _ in range(8):
        ell = float(rng.uniform(0.2, 5.0))
        kappa = float(rng.uniform(1.0, 10.0))
        alpha = float(rng.uniform(0.02, 0.98)) * ALPHA_PLUS[d](ell)
        table = MINORS[d](kappa, alpha, ell)
        brute = _brute_minors(d, kappa, alpha, ell, table.convention)
        for got, ref in zip(table.values, brute):
            scale = max(abs(got), abs(ref), 1e-30)
            assert abs(got - ref) / scale < 1e-9


@pytest.mark.parametrize("d,trace", [(2, 14.0), (3, 32.0)])
def test_trace_identities(d, trace):
    rng = np.random.default_rng(20 + d)
    for _ in range(5):
        ell = float(rng.uniform(0.2, 5.0))
        kappa = float(rng.uniform(1.0, 10.0))
        alpha = float(rng.uniform(0.02, 0.9)) * ALPHA_PLUS[d](ell)
        D = assemble_D_block(d, kappa, alpha, ell)
        assert abs(np.trace(D).real - trace) < 1e-12
        assert abs(np.trace(D).imag) < 1e-12


def test_trace_identity_1d():
    # the 1D identity concerns the lower-right 3x3 block; the full
    # trace is 4 independently of the coupling
    rng = np.random.default_rng(21)
    for _ in range(5):
        ell = float(rng.uniform(0.2, 5.0))
        kappa = float(rng.uniform(1.0, 10.0))
        alpha = float(rng.uniform(0.02, 0.9)) * alpha3_1d(TWO_PI / ell)
        D = assemble_D_block(1, kappa, alpha, ell)
        assert abs(np.trace(D[2:, 2:]).real - 4.0 * (1.0 - ell * alpha)) < 1e-12
        assert abs(np.trace(D).real - 4.0) < 1e-12


def test_admissibility_threshold_1d_closed_form():
    want = (9.0 - math.sqrt(17.0)) / 24.0
    assert abs(alpha3_1d(TWO_PI) - want) < 1e-15


def test_admissibility_thresholds_multi_d():
    assert abs(alpha_plus_2d(1.0) - 0.21023801412882542) < 1e-12
    assert abs(alpha_plus_3d(1.0) - 0.21428787448140457) < 1e-12
    # the admissible amplitude is the smallest of all factor thresholds
    t2 = _thresholds_2d(1.0)
    assert abs(min(t2.values()) - alpha_plus_2d(1.0)) < 1e-14
    t3 = _thresholds_3d(1.0)
    assert abs(min(t3.values()) - alpha_plus_3d(1.0)) < 1e-14
    # a couple of individual thresholds, frozen
    assert abs(t3["p6"] - 0.8) < 1e-14
    assert abs(t3["p21"] - 0.214287874481405) < 1e-12
    assert abs(t2["p11"] - alpha_plus_2d(1.0)) < 1e-14


@pytest.mark.parametrize("d", [1, 2, 3])
def test_minors_positive_inside_admissible_range(d):
    a_plus = ALPHA_PLUS[d](1.0)
    for frac in (0.1, 0.5, 0.9, 0.99):
        for kappa in (1.0, 2.0, 3.5):
            t = MINORS[d](kappa, frac * a_plus, 1.0)
            assert min(t.values) > 0
    # just beyond the threshold the chain loses positivity at kappa = 1
    t = MINORS[d](1.0, 1.02 * a_plus, 1.0)
    assert min(t.values) <= 0


def test_certificate_1d_values():
    cert = certify(1, TWO_PI, n_verify=5)
    assert abs(cert.mu - 0.04181235634839236) < 1e-12
    assert abs(cert.alpha_star - 0.09179394798877326) < 1e-9
    assert abs(cert.alpha_plus - (9.0 - math.sqrt(17.0)) / 24.0) < 1e-15
    assert cert.valid and cert.failed_kappa is None
    assert len(cert.verification) == 5
    assert min(v[1] for v in cert.verification) > -1e-9


def test_certificate_norm_equivalence_constants():
    for d in (1, 2, 3):
        cert = certify(d, TWO_PI, n_verify=0)
        theta = THETA[d]
        assert abs(cert.c_d - 1.0 / (1.0 + theta * cert.alpha_star)) < 1e-14
        assert abs(cert.C_d - 1.0 / (1.0 - theta * cert.alpha_star)) < 1e-14
        assert abs(cert.lam - 2.0 * min(1.0, cert.mu)) < 1e-15
        assert 0 < cert.alpha_star < cert.alpha_plus


def test_certificate_constants():
    assert THETA[1] == math.sqrt(3.0 + math.sqrt(6.0))
    assert THETA[2] == math.sqrt(6.0)
    assert THETA[3] == 2.0
    assert AMGM[2] == (10.0 / 14.0) ** 10
    assert AMGM[3] == (20.0 / 32.0) ** 20


def test_mu_value_consistency():
    for d in (1, 2, 3):
        cert = certify(d, TWO_PI, n_verify=0)
        assert abs(mu_value(d, cert.alpha_star) - cert.mu) < 1e-15
    # evaluating away from the maximizer gives a smaller rate
    cert = certify(2, TWO_PI, n_verify=0)
    assert mu_value(2, 0.5 * cert.alpha_star) < cert.mu


def test_certificate_alpha_override():
    cert = certify(1, TWO_PI, n_verify=0, alpha=0.05)
    assert cert.alpha_star == 0.05
    assert abs(cert.mu - mu_value(1, 0.05)) < 1e-15
    with pytest.raises(ValueError):
        certify(1, TWO_PI, alpha=0.5)
    with pytest.raises(ValueError):
        certify(1, TWO_PI, alpha=0.0)


def test_certificate_argument_validation():
    with pytest.raises(ValueError):
        certify(4)
    with pytest.raises(ValueError):
        certify(1, L=-1.0)


def test_optimal_rate_decreases_with_torus_length():
    mus = [certify(1, L, n_verify=0).mu for L in (1.0, 2.0, 4.0, TWO_PI, 10.0, 20.0)]
    assert all(b < a for a, b in zip(mus, mus[1:]))


def test_small_torus_limits():
    out = mu_limits_1d()
    r13 = math.sqrt(13.0)
    assert abs(out["mu_limit"] - 3.0 * (4.0 - r13) * (3.0 - r13) ** 2 / (1.0 - r13) ** 2) < 1e-15
    assert abs(out["mu_limit"] - 0.06391670948406959) < 1e-15
    assert abs(out["alpha_over_L_limit"] - (4.0 - r13) / (6.0 * math.pi)) < 1e-15
    assert abs(out["mu_at_L_small"] - out["mu_limit"]) < 1e-4
    assert abs(out["alpha_over_L_at_L_small"] - out["alpha_over_L_limit"]) < 1e-4


def test_rational_monotone_check():
    # constant coefficients: p1 >= 0 and p0 + 2 p1 <= 0 on the range
    assert rational_monotone_check([-5.0], [1.0], [0.0], 0.3)
    assert not rational_monotone_check([1.0], [-3.0], [0.0], 0.3)
    # the 1D third minor in mode form: p0 = -6 alpha^2, p1 = 0
    assert rational_monotone_check([0.0, 0.0, -6.0], [0.0], [0.0], 0.25)
    with pytest.raises(ValueError):
        rational_monotone_check([1.0], [1.0], [0.0], 0.0)


def test_minor_input_validation():
    with pytest.raises(ValueError):
        minors_1d(0.5, 0.1)
    with pytest.raises(ValueError):
        minors_2d(1.0, -0.1)
    with pytest.raises(ValueError):
        minors_3d(1.0, 0.1, 0.0)


def test_json_payload_shape():
    cert = certify(1, TWO_PI, n_verify=2)
    payload = cert.to_json_dict()
    assert set(payload) == {
        "d", "L", "alpha_plus", "alpha_star", "mu", "lambda",
        "c_d", "C_d", "valid", "failed_kappa", "verified",
    }
    assert payload["lambda"] == cert.lam
    assert len(payload["verified"]) == 2
    assert set(payload["verified"][0]) == {"kappa", "min_eig"}
    assert isinstance(cert, DecayCertificate)
