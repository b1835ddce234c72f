"""Tests for closed-form costs and their certificates."""

import math

import numpy as np
import pytest

from nscost.analytic import (
    certificate,
    closed_form_cost,
    depolarizing_erasure_coincidence,
)
from nscost.programs import verify_certificate, zero_error_cost
from nscost.qmat import make_channel


def family_channel(family, param, d=2):
    if family == "amplitude_damping":
        return make_channel(family, r=param)
    if family == "dephasing":
        return make_channel(family, p=param)
    return make_channel(family, d=d, p=param)


# ---------------------------------------------------------------------------
# Closed-form values


def test_reference_points():
    assert abs(closed_form_cost("dephasing", 0.0).value_bits - 1.0) <= 1e-12
    assert closed_form_cost("amplitude_damping", 1.0).value_bits == 0.0
    erased = closed_form_cost("erasure", 0.5, 2)
    assert abs(erased.value_bits - 0.5 * math.log2(2.5)) <= 1e-12
    assert abs(erased.value_bits - 0.6610) <= 5e-5


def test_constant_channel_endpoints_are_exactly_zero():
    assert closed_form_cost("depolarizing", 1.0, 3).value_bits == 0.0
    assert closed_form_cost("erasure", 1.0, 2).value_bits == 0.0
    assert closed_form_cost("amplitude_damping", 1.0).value_bits == 0.0


def test_values_nonnegative_on_grid():
    for family in ("depolarizing", "amplitude_damping", "dephasing", "erasure"):
        for param in np.linspace(0.0, 1.0, 11):
            assert closed_form_cost(family, float(param)).value_bits >= 0.0


def test_noise_monotonicity():
    grid = np.linspace(0.0, 1.0, 11)
    for family in ("depolarizing", "amplitude_damping", "erasure"):
        vals = [closed_form_cost(family, float(p)).value_bits for p in grid]
        for a, b in zip(vals, vals[1:]):
            assert a >= b - 1e-12, family


def test_dephasing_symmetric_with_central_minimum():
    for p in (0.1, 0.25, 0.4):
        lo = closed_form_cost("dephasing", p).value_bits
        hi = closed_form_cost("dephasing", 1.0 - p).value_bits
        assert abs(lo - hi) <= 1e-12
    assert closed_form_cost("dephasing", 0.5).value_bits == 0.5


def test_argument_validation():
    with pytest.raises(ValueError):
        closed_form_cost("bit_flip", 0.1)
    with pytest.raises(ValueError):
        closed_form_cost("amplitude_damping", 0.1, d=3)
    with pytest.raises(ValueError):
        closed_form_cost("dephasing", 0.1, d=4)
    with pytest.raises(ValueError):
        closed_form_cost("depolarizing", 1.7)
    with pytest.raises(ValueError):
        closed_form_cost("depolarizing", 0.3, d=1)


# ---------------------------------------------------------------------------
# Agreement with the SDP


def test_closed_forms_match_sdp_on_grid():
    grid = np.linspace(0.0, 1.0, 11)
    for family in ("depolarizing", "amplitude_damping", "dephasing", "erasure"):
        for param in grid:
            expected = closed_form_cost(family, float(param)).value_bits
            solved = zero_error_cost(family_channel(family, float(param)))
            assert abs(solved.half_log_trv - expected) <= 1e-6, (family, param)


def test_sdp_handles_the_dephasing_kink():
    for p in (0.499, 0.5, 0.501):
        expected = closed_form_cost("dephasing", p).value_bits
        solved = zero_error_cost(make_channel("dephasing", p=p))
        assert abs(solved.half_log_trv - expected) <= 1e-6, p
    near = closed_form_cost("dephasing", 0.499).value_bits
    far = closed_form_cost("dephasing", 0.501).value_bits
    assert abs(near - far) <= 1e-12


# ---------------------------------------------------------------------------
# Certificates


def test_certificates_confirm_on_grid():
    grid = np.linspace(0.0, 1.0, 11)
    for family in ("depolarizing", "amplitude_damping", "dephasing", "erasure"):
        for param in grid:
            pair = certificate(family, float(param))
            check = verify_certificate(family_channel(family, float(param)), pair)
            assert check.status == "optimal_confirmed", (family, param, check)
            assert check.gap <= 1e-9


def test_certificates_with_qutrit_dimension():
    for family in ("depolarizing", "erasure"):
        pair = certificate(family, 0.37, d=3)
        check = verify_certificate(family_channel(family, 0.37, d=3), pair)
        assert check.status == "optimal_confirmed"


def test_depolarizing_certificate_objective():
    pair = certificate("depolarizing", 0.3, 2)
    assert abs(float(np.trace(pair.primal_v).real) - 3.1) <= 1e-12


def test_certificate_traces_match_closed_forms():
    for family, param in (
        ("amplitude_damping", 0.5),
        ("erasure", 0.5),
        ("dephasing", 0.25),
    ):
        pair = certificate(family, param)
        tr_v = float(np.trace(pair.primal_v).real)
        expected = 2.0 ** (2 * closed_form_cost(family, param).value_bits)
        assert abs(tr_v - expected) <= 1e-12, family
    assert abs(float(np.trace(certificate("amplitude_damping", 0.5).primal_v).real)
               - 2.9142) <= 5e-5


# ---------------------------------------------------------------------------
# Coincidence of depolarizing and erasure


def test_coincidence_everywhere():
    for p in (0.0, 0.37, 1.0):
        for d in (2, 3):
            assert depolarizing_erasure_coincidence(p, d)
