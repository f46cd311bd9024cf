import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cate.calibration import (
    calibrated_softmax,
    expected_calibration_error,
    fit_temperature,
    fit_temperature_on_logits,
    mean_nll,
)
from cate.errors import (
    EmptyInputError,
    EmptyValidationError,
    NonPositiveTemperatureError,
)
from cate.rnn import softmax
from cate.trees import NUM_LABELS


def random_logits(rng, n):
    return rng.normal(size=(n, NUM_LABELS)) * 3.0


class TestCalibratedSoftmax:
    def test_t1_equals_standard(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            logits = rng.normal(size=NUM_LABELS) * 4
            assert np.allclose(calibrated_softmax(logits, 1.0),
                               softmax(logits), atol=1e-12)

    def test_large_t_uniform_limit(self):
        rng = np.random.default_rng(1)
        logits = rng.normal(size=NUM_LABELS) * 4
        probs = calibrated_softmax(logits, 1e6)
        assert np.all(np.abs(probs - 1.0 / NUM_LABELS) < 1e-5)

    def test_scaling_identity(self):
        logits = np.zeros(NUM_LABELS)
        logits[0] = 2.0
        halved = np.zeros(NUM_LABELS)
        halved[0] = 1.0
        assert np.allclose(calibrated_softmax(logits, 2.0),
                           softmax(halved), atol=1e-12)

    def test_nonpositive_temperature(self):
        with pytest.raises(NonPositiveTemperatureError):
            calibrated_softmax(np.zeros(NUM_LABELS), 0.0)
        with pytest.raises(NonPositiveTemperatureError):
            calibrated_softmax(np.zeros(NUM_LABELS), -1.0)

    @given(st.integers(0, 10_000), st.sampled_from([0.1, 0.5, 1.0, 2.0, 10.0]))
    @settings(max_examples=60, deadline=None)
    def test_sums_to_one_and_preserves_argmax(self, seed, T):
        logits = np.random.default_rng(seed).normal(size=NUM_LABELS) * 5
        probs = calibrated_softmax(logits, T)
        assert abs(probs.sum() - 1.0) < 1e-9
        assert np.argmax(probs) == np.argmax(logits)

    def test_max_prob_decreases_with_t(self):
        logits = np.random.default_rng(3).normal(size=NUM_LABELS) * 5
        maxima = [calibrated_softmax(logits, T).max()
                  for T in (0.5, 1.0, 2.0, 4.0, 8.0)]
        assert all(b <= a + 1e-12 for a, b in zip(maxima, maxima[1:]))

    def test_literal_form_not_normalized(self):
        logits = np.random.default_rng(4).normal(size=NUM_LABELS) * 5
        literal = calibrated_softmax(logits, 2.0,
                                     literal_denominator_only=True)
        assert abs(literal.sum() - 1.0) > 1e-6  # documents the discrepancy


def make_calibrated_sample(rng, n, scale=1.0):
    """Logits that are exact log class-conditionals at T=scale."""
    logits = np.empty((n, NUM_LABELS))
    labels = np.empty(n, dtype=np.int64)
    for i in range(n):
        p = rng.dirichlet(np.ones(NUM_LABELS))
        logits[i] = np.log(p) * scale
        labels[i] = rng.choice(NUM_LABELS, p=p)
    return logits, labels


class TestFitTemperature:
    def test_recovers_t1_on_calibrated_logits(self):
        rng = np.random.default_rng(0)
        logits, labels = make_calibrated_sample(rng, 4000)
        cal = fit_temperature_on_logits(logits, labels)
        assert abs(cal.T - 1.0) < 0.05

    def test_recovers_t5_on_overconfident_logits(self):
        rng = np.random.default_rng(1)
        logits, labels = make_calibrated_sample(rng, 4000, scale=5.0)
        cal = fit_temperature_on_logits(logits, labels)
        assert abs(cal.T - 5.0) < 0.2

    def test_never_worse_than_t1(self):
        rng = np.random.default_rng(2)
        for seed in range(5):
            logits = random_logits(np.random.default_rng(seed), 50)
            labels = rng.integers(0, NUM_LABELS, size=50)
            cal = fit_temperature_on_logits(logits, labels)
            assert cal.nll_after <= cal.nll_before + 1e-12
            assert cal.nll_after == pytest.approx(
                mean_nll(logits, labels, cal.T), abs=1e-12)

    def test_fit_on_model(self, tiny_model, tiny_corpus):
        validation = tiny_corpus.split("validation")
        cal = fit_temperature(tiny_model, validation)
        assert cal.T > 0
        assert cal.fitted_on == sum(
            sum(1 for _ in t.internal_nodes()) for t in validation)
        assert cal.nll_after <= cal.nll_before + 1e-12

    def test_empty_validation(self, tiny_model):
        with pytest.raises(EmptyValidationError):
            fit_temperature(tiny_model, [])


class TestECE:
    def one_hot(self, idx, conf):
        probs = np.full(NUM_LABELS, (1 - conf) / (NUM_LABELS - 1))
        probs[idx] = conf
        return probs

    def test_confident_and_correct(self):
        items = [(self.one_hot(3, 1.0), 3)] * 10
        assert expected_calibration_error(items, bins=10) == 0.0

    def test_confident_and_wrong(self):
        items = [(self.one_hot(3, 1.0), 4)] * 10
        assert expected_calibration_error(items, bins=10) == 1.0

    def test_single_item_hand_computed(self):
        items = [(self.one_hot(0, 0.8), 0)]
        assert expected_calibration_error(items, bins=10) == \
               pytest.approx(0.2)

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            expected_calibration_error([], bins=10)
