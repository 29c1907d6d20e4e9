import math

import numpy as np
import pytest

from rigidsim import (
    HysteresisSignum,
    QuantizerSpec,
    ValidationError,
    quantization_error_bound,
    quantize,
    staircase_integral,
)
from rigidsim.quantizers import make_evaluator
from helpers import ALL_KINDS_SPECS, midpoint_quadrature


def test_uniform_sym_examples():
    q = QuantizerSpec("uniform-sym", 0.5)
    assert quantize(q, 0.25) == 0.0  # half-point rounds down
    assert quantize(q, 0.6) == 0.5
    assert quantize(q, 0.0) == 0.0


def test_uniform_sym_tie_rule_exact():
    # half-points map to the lattice point below, so the map is not odd there
    for gain in (0.5, 0.25, 0.8):
        q = QuantizerSpec("uniform-sym", gain)
        assert quantize(q, gain / 2.0) == 0.0
        assert quantize(q, -gain / 2.0) == -gain
    # an interior half-point on an exactly representable lattice
    assert quantize(QuantizerSpec("uniform-sym", 0.5), 0.75) == 0.5


def test_logarithmic_examples():
    q = QuantizerSpec("logarithmic", 0.5)
    assert quantize(q, 1.0) == 1.0
    assert quantize(q, math.exp(0.2)) == 1.0
    assert quantize(q, 0.0) == 0.0


def test_signum_examples():
    q = QuantizerSpec("signum")
    assert quantize(q, -3.2) == -1.0
    assert quantize(q, 0.0) == 0.0
    assert quantize(q, 7.0) == 1.0


def test_uniform_asym_examples():
    q = QuantizerSpec("uniform-asym", 0.5)
    assert quantize(q, -0.1) == -0.5
    assert quantize(q, 0.5) == 0.5
    assert quantize(q, 2.0) == 2.0


def test_uniform_bound_property():
    rng = np.random.default_rng(7)
    x = rng.uniform(-20.0, 20.0, size=10_000)
    for gain in (0.5, 0.3, 1.7):
        q = QuantizerSpec("uniform-sym", gain)
        assert np.all(np.abs(quantize(q, x) - x) <= gain / 2.0)


def test_logarithmic_properties():
    rng = np.random.default_rng(8)
    x = rng.uniform(-20.0, 20.0, size=10_000)
    q = QuantizerSpec("logarithmic", 0.5)
    qx = quantize(q, x)
    assert np.all(qx * x >= 0.0)
    assert np.all((qx * x > 0.0) | (x == 0.0))
    assert np.all(np.abs(qx - x) <= q.log_gain * np.abs(x) + 1e-15)
    # odd map
    assert np.array_equal(quantize(q, -x), -qx)
    assert q.log_gain == pytest.approx(math.exp(0.25) - 1.0)
    assert q.log_gain > 0.0


def test_uniform_asym_bracketing_property():
    rng = np.random.default_rng(9)
    x = rng.uniform(-20.0, 20.0, size=10_000)
    q = QuantizerSpec("uniform-asym", 0.5)
    qx = quantize(q, x)
    assert np.all(qx <= x)
    assert np.all(x < qx + q.gain)


def test_signum_is_three_level():
    rng = np.random.default_rng(10)
    x = rng.uniform(-5.0, 5.0, size=5_000)
    q = QuantizerSpec("signum")
    qx = quantize(q, x)
    assert set(np.unique(qx)) <= {-1.0, 0.0, 1.0}
    assert np.all(qx * x == np.abs(x))


@pytest.mark.parametrize("kind", ["uniform-sym", "uniform-asym", "signum"])
def test_idempotent_on_own_image(kind):
    rng = np.random.default_rng(11)
    x = rng.uniform(-10.0, 10.0, size=2_000)
    q = QuantizerSpec(kind, 0.5)
    qx = quantize(q, x)
    assert np.array_equal(quantize(q, qx), qx)


@pytest.mark.parametrize("kind", ["uniform-sym", "uniform-asym", "signum"])
def test_monotone_non_decreasing(kind):
    rng = np.random.default_rng(12)
    x = np.sort(rng.uniform(-10.0, 10.0, size=5_000))
    q = QuantizerSpec(kind, 0.5)
    assert np.all(np.diff(quantize(q, x)) >= 0.0)


def test_error_bound_values():
    assert quantization_error_bound(QuantizerSpec("uniform-sym", 0.5), 3.7) == 0.25
    log_bound = quantization_error_bound(QuantizerSpec("logarithmic", 0.5), 2.0)
    assert log_bound == pytest.approx((math.exp(0.25) - 1.0) * 2.0)
    assert log_bound == pytest.approx(0.5681, abs=1e-4)
    assert quantization_error_bound(QuantizerSpec("uniform-asym", 0.5), -1.2) == 0.5
    assert quantization_error_bound(QuantizerSpec("signum"), -3.0) == 4.0


def test_error_bound_is_respected():
    rng = np.random.default_rng(13)
    x = rng.uniform(-15.0, 15.0, size=5_000)
    for spec in ALL_KINDS_SPECS:
        err = np.abs(quantize(spec, x) - x)
        assert np.all(err <= quantization_error_bound(spec, x) + 1e-15), spec.kind


def test_hysteresis_holds_inside_band():
    spec = QuantizerSpec("signum", hysteresis=0.1)
    evaluator = HysteresisSignum(spec, size=1)
    seq = [0.5, 0.05, -0.05, -0.2, 0.0, 0.09, 0.2]
    expected = [1.0, 1.0, 1.0, -1.0, -1.0, -1.0, 1.0]
    for x, want in zip(seq, expected):
        assert evaluator(np.array([x]))[0] == want


def test_hysteresis_memoryless_view():
    # a single quantize() call behaves like a fresh evaluator: nothing held
    spec = QuantizerSpec("signum", hysteresis=0.1)
    assert quantize(spec, 0.05) == 0.0
    assert quantize(spec, 0.5) == 1.0
    assert quantize(spec, -0.1) == -1.0


def test_make_evaluator_dispatch():
    stateless = make_evaluator(QuantizerSpec("signum"), size=3)
    assert np.array_equal(stateless(np.array([1.0, -2.0, 0.0])), [1.0, -1.0, 0.0])
    stateful = make_evaluator(QuantizerSpec("signum", hysteresis=0.1), size=3)
    assert isinstance(stateful, HysteresisSignum)


@pytest.mark.parametrize(
    "kind,gain,hysteresis",
    [
        ("uniform-sym", 0.0, 0.0),
        ("logarithmic", -1.0, 0.0),
        ("uniform-asym", 0.0, 0.0),
        ("nearest", 0.5, 0.0),  # unknown kind
        ("uniform-sym", 0.5, 0.1),  # hysteresis on a non-signum kind
        ("signum", 0.5, -0.2),
    ],
)
def test_spec_validation(kind, gain, hysteresis):
    with pytest.raises(ValidationError):
        QuantizerSpec(kind, gain=gain, hysteresis=hysteresis)


def test_staircase_integral_hand_values():
    usym = QuantizerSpec("uniform-sym", 0.5)
    assert staircase_integral(usym, 0.25) == 0.0
    # 0*0.25 + 0.5*0.5 + 1.0*0.25
    assert staircase_integral(usym, 1.0) == pytest.approx(0.5, abs=1e-15)
    assert staircase_integral(QuantizerSpec("signum"), -2.0) == 2.0
    # asym, negative side: integrand is -g on (-g, 0)
    assert staircase_integral(QuantizerSpec("uniform-asym", 0.5), -0.1) == pytest.approx(0.05)


def test_staircase_integral_matches_quadrature():
    rng = np.random.default_rng(14)
    xs = rng.uniform(-3.0, 3.0, size=60)
    for spec in ALL_KINDS_SPECS:
        for x in xs:
            closed = float(staircase_integral(spec, x))
            quad = midpoint_quadrature(spec, float(x), subintervals=4_000)
            assert closed == pytest.approx(quad, abs=1e-8), (spec.kind, x)


def test_staircase_integral_nonnegative_and_zero_at_zero():
    rng = np.random.default_rng(15)
    xs = rng.uniform(-10.0, 10.0, size=500)
    for spec in ALL_KINDS_SPECS:
        assert staircase_integral(spec, 0.0) == 0.0
        assert np.all(staircase_integral(spec, xs) >= 0.0)
