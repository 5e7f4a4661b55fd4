import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.distance import jensenshannon
from scipy.stats import energy_distance as scipy_energy
from scipy.stats import wasserstein_distance as scipy_wasserstein

from mirrorc.metrics import (
    Distribution,
    DistributionError,
    energy_distance,
    js_distance,
    kl_divergence,
    raw_energy,
    raw_wasserstein,
    wasserstein_distance,
)

D = Distribution.from_mapping


def random_distribution(rng: np.random.Generator, n: int, sparse: bool = False) -> Distribution:
    w = rng.random(2**n)
    if sparse:
        w[rng.random(2**n) < 0.5] = 0
        if not w.any():
            w[0] = 1
    return Distribution(n, w / w.sum())


class TestDistribution:
    def test_from_counts(self):
        d = Distribution.from_counts({"01": 3, "10": 1})
        assert d.probs.tolist() == [0, 0.75, 0.25, 0]
        assert d.to_dict() == {"01": 0.75, "10": 0.25}

    def test_rejects_unnormalized(self):
        with pytest.raises(DistributionError):
            Distribution(1, np.array([0.5, 0.6]))

    def test_rejects_mixed_lengths(self):
        with pytest.raises(DistributionError):
            D({"0": 0.5, "01": 0.5})

    def test_explicit_width(self):
        with pytest.raises(DistributionError):
            D({"0": 1.0}, n=2)


class TestWasserstein:
    def test_equal(self):
        assert wasserstein_distance(D({"0": 0.3, "1": 0.7}), D({"0": 0.3, "1": 0.7})) == 0

    def test_extreme_point_masses(self):
        a, b = D({"00": 1.0}), D({"11": 1.0})
        assert raw_wasserstein(a, b) == pytest.approx(3.0)
        assert wasserstein_distance(a, b) == pytest.approx(1.0)

    def test_half_shift(self):
        a, b = D({"0": 0.5, "1": 0.5}), D({"0": 1.0})
        assert raw_wasserstein(a, b) == pytest.approx(0.5)
        assert wasserstein_distance(a, b) == pytest.approx(0.5)

    def test_q0_is_most_significant(self):
        # "10" is integer 2, "01" is integer 1
        assert raw_wasserstein(D({"00": 1.0}), D({"10": 1.0})) == pytest.approx(2.0)

    @pytest.mark.parametrize("seed", range(10))
    def test_scipy_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        a, b = random_distribution(rng, n, True), random_distribution(rng, n)
        support = np.arange(2**n)
        expected = scipy_wasserstein(support, support, a.probs, b.probs)
        assert raw_wasserstein(a, b) == pytest.approx(expected, abs=1e-12)


class TestEnergy:
    def test_equal(self):
        u = D({k: 0.25 for k in ("00", "01", "10", "11")})
        assert energy_distance(u, u) == 0

    def test_point_masses(self):
        a, b = D({"0": 1.0}), D({"1": 1.0})
        assert raw_energy(a, b) == pytest.approx(math.sqrt(2))
        assert energy_distance(a, b) == pytest.approx(math.sqrt(2))

    def test_definition_by_expectations(self):
        rng = np.random.default_rng(0)
        a, b = random_distribution(rng, 3), random_distribution(rng, 3)
        x = np.arange(8)
        dist = np.abs(x[:, None] - x[None, :])
        value = 2 * a.probs @ dist @ b.probs - a.probs @ dist @ a.probs - b.probs @ dist @ b.probs
        assert raw_energy(a, b) == pytest.approx(math.sqrt(value), abs=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_scipy_oracle(self, seed):
        rng = np.random.default_rng(100 + seed)
        n = int(rng.integers(1, 5))
        a, b = random_distribution(rng, n, True), random_distribution(rng, n)
        support = np.arange(2**n)
        expected = scipy_energy(support, support, a.probs, b.probs)
        assert raw_energy(a, b) == pytest.approx(expected, abs=1e-12)


class TestKL:
    def test_equal(self):
        p = D({"0": 0.2, "1": 0.8})
        assert kl_divergence(p, p, shots=1024) == pytest.approx(0.0, abs=1e-15)

    def test_frozen_smoothed_value(self):
        value = kl_divergence(D({"0": 1.0}), D({"0": 0.5, "1": 0.5}), shots=1024)
        assert value == pytest.approx(0.6889396922038356, rel=1e-12)

    def test_asymmetric(self):
        p, q = D({"0": 0.9, "1": 0.1}), D({"0": 0.5, "1": 0.5})
        assert kl_divergence(p, q, 1024) != pytest.approx(kl_divergence(q, p, 1024))

    def test_unsmoothed_infinite(self):
        assert kl_divergence(D({"0": 0.5, "1": 0.5}), D({"0": 1.0})) == math.inf

    def test_smoothing_keeps_finite(self):
        assert math.isfinite(kl_divergence(D({"0": 0.5, "1": 0.5}), D({"0": 1.0}), shots=10))

    def test_natural_log(self):
        p, q = D({"0": 0.5, "1": 0.5}), D({"0": 0.25, "1": 0.75})
        expected = 0.5 * math.log(2) + 0.5 * math.log(0.5 / 0.75)
        assert kl_divergence(p, q) == pytest.approx(expected)

    def test_bad_shots(self):
        with pytest.raises(DistributionError):
            kl_divergence(D({"0": 1.0}), D({"0": 1.0}), shots=0)


class TestJS:
    def test_equal(self):
        p = D({"0": 0.2, "1": 0.8})
        assert js_distance(p, p) == 0

    def test_disjoint(self):
        assert js_distance(D({"00": 1.0}), D({"11": 1.0})) == pytest.approx(1.0)

    @pytest.mark.parametrize("seed", range(10))
    def test_scipy_oracle(self, seed):
        rng = np.random.default_rng(200 + seed)
        n = int(rng.integers(1, 5))
        a, b = random_distribution(rng, n, True), random_distribution(rng, n, True)
        assert js_distance(a, b) == pytest.approx(jensenshannon(a.probs, b.probs, base=2), abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            a, b = random_distribution(rng, 3, True), random_distribution(rng, 3)
            assert abs(js_distance(a, b) - js_distance(b, a)) <= 1e-12


@pytest.mark.parametrize(
    "fn", [wasserstein_distance, energy_distance, js_distance, raw_wasserstein, raw_energy, kl_divergence]
)
def test_support_mismatch(fn):
    with pytest.raises(DistributionError, match="support"):
        fn(D({"0": 1.0}), D({"00": 1.0}))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_normalized_ranges(n, seed):
    rng = np.random.default_rng(seed)
    a, b = random_distribution(rng, n, True), random_distribution(rng, n, True)
    assert 0 <= wasserstein_distance(a, b) <= 1 + 1e-12
    assert 0 <= js_distance(a, b) <= 1
    assert energy_distance(a, b) >= 0
    assert kl_divergence(a, b, shots=100) >= 0
