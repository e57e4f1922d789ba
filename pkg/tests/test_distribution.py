import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decaysched import (
    ProbabilityVector,
    SuccessCountPmf,
    as_probability_vector,
    expected_successes,
    prob_all_success,
    success_count_pmf,
)

probability_lists = st.lists(
    st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=1, max_size=12
)


def enumerated_pmf(probs):
    """Independent oracle: sum P(outcome) over all 2^n success/failure patterns."""
    n = len(probs)
    mass = np.zeros(n + 1)
    for bits in itertools.product((0, 1), repeat=n):
        weight = 1.0
        for bit, p in zip(bits, probs):
            weight *= p if bit else (1.0 - p)
        mass[sum(bits)] += weight
    return mass


class TestProbabilityVector:
    def test_basic_accessors(self):
        pv = ProbabilityVector(np.array([0.2, 0.5, 1.0]))
        assert pv.n == 3
        assert len(pv) == 3
        assert pv[1] == 0.5
        assert list(pv) == [0.2, 0.5, 1.0]

    def test_array_is_copied_and_frozen(self):
        source = np.array([0.2, 0.5])
        pv = ProbabilityVector(source)
        source[0] = 0.9
        assert pv[0] == 0.2
        with pytest.raises(ValueError):
            pv.probs[0] = 0.9

    def test_equality(self):
        assert ProbabilityVector(np.array([0.2])) == ProbabilityVector(np.array([0.2]))
        assert ProbabilityVector(np.array([0.2])) != ProbabilityVector(np.array([0.3]))
        assert ProbabilityVector(np.array([0.2])) != [0.2]

    def test_rejects_out_of_range_with_position(self):
        with pytest.raises(ValueError, match=r"probs\[1\] = 1.5 is outside \[0, 1\]"):
            ProbabilityVector(np.array([0.5, 1.5]))
        with pytest.raises(ValueError, match=r"probs\[0\] = -0.1"):
            ProbabilityVector(np.array([-0.1]))

    def test_rejects_empty_and_multidimensional(self):
        with pytest.raises(ValueError, match="at least one entry"):
            ProbabilityVector(np.array([]))
        with pytest.raises(ValueError, match="one-dimensional"):
            ProbabilityVector(np.zeros((2, 2)))

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            ProbabilityVector(np.array([np.nan]))

    def test_coercion_passthrough(self):
        pv = ProbabilityVector(np.array([0.5]))
        assert as_probability_vector(pv) is pv
        assert as_probability_vector([0.5]) == pv


class TestSuccessCountPmf:
    def test_accessors(self):
        pmf = SuccessCountPmf(np.array([0.25, 0.5, 0.25]))
        assert pmf.n == 2
        assert len(pmf) == 3
        assert pmf[2] == 0.25
        assert pmf.mean() == 1.0

    def test_rejects_negative_mass(self):
        with pytest.raises(ValueError, match=r"mass\[1\] = -0.5"):
            SuccessCountPmf(np.array([0.75, -0.5, 0.75]))

    def test_rejects_bad_total(self):
        with pytest.raises(ValueError, match="sums to"):
            SuccessCountPmf(np.array([0.5, 0.6]))

    def test_rejects_scalar_and_short(self):
        with pytest.raises(ValueError):
            SuccessCountPmf(np.array([1.0]))

    def test_equality(self):
        a = SuccessCountPmf(np.array([0.5, 0.5]))
        assert a == SuccessCountPmf(np.array([0.5, 0.5]))
        assert a != SuccessCountPmf(np.array([0.25, 0.75]))


class TestSuccessCountPmfValues:
    def test_single_trial(self):
        pmf = success_count_pmf([0.3])
        assert pmf.mass.tolist() == [0.7, 0.3]

    def test_two_fair_trials(self):
        assert success_count_pmf([0.5, 0.5]).mass.tolist() == [0.25, 0.5, 0.25]

    def test_certain_trials(self):
        pmf = success_count_pmf([1.0, 1.0, 1.0])
        assert pmf.mass.tolist() == [0.0, 0.0, 0.0, 1.0]

    def test_impossible_trials(self):
        pmf = success_count_pmf([0.0, 0.0])
        assert pmf.mass.tolist() == [1.0, 0.0, 0.0]

    def test_matches_enumeration_small_cases(self):
        rng = np.random.default_rng(12345)
        for _ in range(30):
            n = int(rng.integers(1, 9))
            probs = rng.uniform(0.0, 1.0, size=n)
            got = success_count_pmf(probs).mass
            want = enumerated_pmf(probs)
            np.testing.assert_allclose(got, want, rtol=0.0, atol=1e-12)

    def test_decayed_example_vector(self):
        # at-processing-time values (0.8, 0.8, 0.5, 0.4): all four succeed
        # with probability 0.128 and 2.5 succeed on average
        p1 = [0.8, 0.8, 0.5, 0.4]
        assert abs(prob_all_success(p1) - 0.128) < 1e-12
        assert abs(expected_successes(p1) - 2.5) < 1e-12
        pmf = success_count_pmf(p1)
        assert abs(pmf[4] - 0.128) < 1e-12
        assert abs(pmf.mean() - 2.5) < 1e-12


class TestDistributionProperties:
    @given(probability_lists)
    def test_pmf_is_normalized_and_nonnegative(self, probs):
        pmf = success_count_pmf(probs)
        assert pmf.mass.size == len(probs) + 1
        assert (pmf.mass >= 0.0).all()
        assert abs(float(pmf.mass.sum()) - 1.0) <= 1e-12

    @given(probability_lists)
    def test_mean_equals_sum_of_probabilities(self, probs):
        pmf = success_count_pmf(probs)
        assert abs(pmf.mean() - expected_successes(probs)) <= 1e-9

    @given(probability_lists)
    def test_top_entry_equals_product(self, probs):
        pmf = success_count_pmf(probs)
        assert abs(pmf[pmf.n] - prob_all_success(probs)) <= 1e-12

    @given(probability_lists)
    def test_bottom_entry_equals_product_of_failures(self, probs):
        pmf = success_count_pmf(probs)
        want = float(np.prod(1.0 - np.asarray(probs)))
        assert abs(pmf[0] - want) <= 1e-12

    @settings(max_examples=50)
    @given(st.data())
    def test_distribution_is_order_invariant(self, data):
        probs = data.draw(probability_lists)
        perm = data.draw(st.permutations(range(len(probs))))
        shuffled = [probs[i] for i in perm]
        np.testing.assert_allclose(
            success_count_pmf(probs).mass,
            success_count_pmf(shuffled).mass,
            rtol=0.0,
            atol=1e-12,
        )
        assert expected_successes(probs) == pytest.approx(expected_successes(shuffled), abs=1e-12)
        assert prob_all_success(probs) == pytest.approx(prob_all_success(shuffled), abs=1e-12)
