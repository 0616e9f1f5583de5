import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from resetwalk.errors import InfiniteMoment, MissingLaplace, NegativeRate, PoleEvaluation, ZeroMotionWarning
from resetwalk.model import (
    CustomJumps,
    ExponentialJumps,
    ModelParams,
    exponential_params,
    jump_laplace,
    jump_moment,
    params_from_mapping,
    read_config,
    validate,
)

rates = st.floats(min_value=0.01, max_value=50.0, allow_nan=False)


def test_drifted_benchmark_set_is_valid():
    p = exponential_params(2.0, 1.0, 2.0, 1.0)
    assert p.total_rate == 3.0
    assert p.is_exponential()


def test_zero_motion_warns_but_passes():
    with pytest.warns(ZeroMotionWarning):
        exponential_params(0.0, 0.0, 1.0, 1.0)


@pytest.mark.parametrize("field,value", [
    ("gamma_drift", -1.0),
    ("lambda_jump", -0.5),
    ("lambda_reset", -2.0),
    ("x0", -0.1),
])
def test_negative_rates_rejected(field, value):
    kwargs = dict(gamma_drift=2.0, lambda_jump=1.0, lambda_reset=2.0, jump_gamma=1.0)
    if field == "x0":
        kwargs["x0"] = value
    else:
        kwargs[field] = value
    with pytest.raises(NegativeRate):
        exponential_params(**kwargs)


def test_exponential_laplace_values():
    assert jump_laplace(ExponentialJumps(1.0), 0.0) == 1.0
    assert jump_laplace(ExponentialJumps(1.0), 1.0) == 0.5
    assert jump_laplace(ExponentialJumps(2.0), 2.0) == 0.5


def test_laplace_pole_guard():
    with pytest.raises(PoleEvaluation):
        jump_laplace(ExponentialJumps(1.0), -1.0)
    with pytest.raises(PoleEvaluation):
        jump_laplace(ExponentialJumps(1.0), complex(-1.5, 2.0))


def test_exponential_moments():
    assert jump_moment(ExponentialJumps(1.0), 1) == 1.0
    assert jump_moment(ExponentialJumps(2.0), 2) == 0.5
    assert jump_moment(ExponentialJumps(1.0), 2) == 2.0


def test_custom_law_requires_laplace_for_transforms():
    law = CustomJumps(pdf=lambda u: math.exp(-u))
    with pytest.raises(MissingLaplace):
        jump_laplace(law, 1.0)
    with pytest.raises(InfiniteMoment):
        jump_moment(law, 2)


@given(g=rates, w=st.floats(min_value=0.0, max_value=100.0))
@settings(max_examples=200, deadline=None)
def test_exponential_laplace_matches_quadrature_everywhere(g, w):
    # normalization at w=0 comes free: h~(0) = 1; integrate on the combined scale
    want = quad(lambda u: g * math.exp(-g * u) * math.exp(-w * u), 0, 40.0 / (g + w),
                epsabs=1e-12, limit=200)[0]
    assert jump_laplace(ExponentialJumps(g), w) == pytest.approx(want, abs=1e-9)


@given(g=rates)
@settings(max_examples=100, deadline=None)
def test_laplace_slope_at_zero_is_minus_mean(g):
    law = ExponentialJumps(g)
    h = 1e-6 * g
    slope = (jump_laplace(law, h) - jump_laplace(law, 0.0)) / h
    assert -slope == pytest.approx(jump_moment(law, 1), rel=3e-6)


@given(g=rates, w1=rates, w2=rates)
@settings(max_examples=100, deadline=None)
def test_laplace_monotone_decreasing_on_real_axis(g, w1, w2):
    law = ExponentialJumps(g)
    lo, hi = sorted((w1, w2))
    assert jump_laplace(law, lo) >= jump_laplace(law, hi)


def test_custom_law_laplace_normalization_by_quadrature():
    # half-Gaussian jumps; supplied transform checked against its own pdf
    s = 0.7
    from scipy.special import erfc

    law = CustomJumps(
        pdf=lambda u: math.sqrt(2.0 / math.pi) / s * math.exp(-u * u / (2 * s * s)),
        laplace=lambda w: float(np.exp(s * s * w * w / 2.0) * erfc(s * w / math.sqrt(2.0))),
        mean=s * math.sqrt(2.0 / math.pi),
        second_moment=s * s,
    )
    mass = quad(law.pdf, 0, 12 * s, epsabs=1e-12)[0]
    assert mass == pytest.approx(1.0, abs=1e-10)
    want = quad(lambda u: law.pdf(u) * math.exp(-0.9 * u), 0, 12 * s, epsabs=1e-12)[0]
    assert jump_laplace(law, 0.9) == pytest.approx(want, abs=1e-9)


def test_config_roundtrip(tmp_path):
    cfg = tmp_path / "params.cfg"
    cfg.write_text(
        "# benchmark set\n"
        "gamma_drift = 2\n"
        "lambda_jump=1\n"
        "lambda_reset = 2.0  # resets\n"
        "jump_gamma=1\n"
        "x0 = 0\n"
    )
    p = params_from_mapping(read_config(cfg))
    assert (p.gamma_drift, p.lambda_jump, p.lambda_reset) == (2.0, 1.0, 2.0)
    assert p.jump_law.rate == 1.0


def test_config_unknown_key_rejected():
    with pytest.raises(KeyError):
        params_from_mapping({"typo_key": 1.0})


def test_validate_rejects_bad_sign():
    p = ModelParams(1.0, 1.0, 1.0, ExponentialJumps(1.0), observable_sign=2)
    with pytest.raises(NegativeRate):
        validate(p)
