import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import optimize, stats

from cheart.metrics.distributions import kl_divergence_hist, paired_t_test, wasserstein_1d

finite_floats = st.floats(-100.0, 100.0, allow_nan=False)
sample_lists = st.lists(finite_floats, min_size=1, max_size=30)


def lp_transport_w1(p, q):
    """Optimal-transport LP between two empirical distributions (uniform weights)."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    n, m = len(p), len(q)
    cost = np.abs(p[:, None] - q[None, :]).ravel()
    # row marginals then column marginals
    a_eq = np.zeros((n + m, n * m))
    for i in range(n):
        a_eq[i, i * m : (i + 1) * m] = 1.0
    for j in range(m):
        a_eq[n + j, j::m] = 1.0
    b_eq = np.concatenate([np.full(n, 1.0 / n), np.full(m, 1.0 / m)])
    res = optimize.linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    assert res.success
    return res.fun


class TestKL:
    def test_same_samples_zero(self):
        x = np.array([0.5, 1.0, 2.0, 3.5])
        assert kl_divergence_hist(x, x) == pytest.approx(0.0, abs=1e-12)

    def test_asymmetric(self):
        rng = np.random.default_rng(0)
        p = rng.normal(0.0, 1.0, 2000)
        q = rng.normal(2.0, 0.5, 2000)
        assert kl_divergence_hist(p, q) != pytest.approx(kl_divergence_hist(q, p), abs=1e-6)

    def test_gaussian_closed_form(self):
        # KL(N(0,1) || N(1,1)) = 0.5
        rng = np.random.default_rng(42)
        p = rng.normal(0.0, 1.0, 200_000)
        q = rng.normal(1.0, 1.0, 200_000)
        assert kl_divergence_hist(p, q) == pytest.approx(0.5, abs=0.1)

    def test_degenerate_identical_constants(self):
        assert kl_divergence_hist([3.0, 3.0], [3.0]) == pytest.approx(0.0, abs=1e-6)

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            kl_divergence_hist([], [1.0])

    @given(p=sample_lists, q=sample_lists)
    def test_nonnegative(self, p, q):
        assert kl_divergence_hist(p, q) >= -1e-12


class TestWasserstein:
    def test_identical_zero(self):
        x = [1.0, 5.0, 2.0]
        assert wasserstein_1d(x, x) == 0.0

    def test_constant_shift(self):
        rng = np.random.default_rng(1)
        p = rng.uniform(0, 10, 100)
        assert wasserstein_1d(p, p + 3.25) == pytest.approx(3.25, abs=1e-9)

    def test_lp_transport_oracle_unequal_sizes(self):
        p = [0.0, 1.0, 4.0, 4.5, 9.0]
        q = [0.5, 2.0, 7.0]
        assert wasserstein_1d(p, q) == pytest.approx(lp_transport_w1(p, q), abs=1e-9)

    def test_lp_transport_oracle_random(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            p = rng.uniform(-5, 5, rng.integers(2, 8))
            q = rng.uniform(-5, 5, rng.integers(2, 8))
            assert wasserstein_1d(p, q) == pytest.approx(lp_transport_w1(p, q), abs=1e-9)

    @given(a=sample_lists, b=sample_lists, c=sample_lists)
    def test_triangle_inequality(self, a, b, c):
        ab = wasserstein_1d(a, b)
        bc = wasserstein_1d(b, c)
        ac = wasserstein_1d(a, c)
        assert ac <= ab + bc + 1e-9


class TestPairedT:
    def test_hand_example(self):
        # differences [1, 1, 1, -1]: mean 0.5, sd 1, t = 0.5/(1/2) = 1
        a = np.array([1.0, 1.0, 1.0, -1.0])
        b = np.zeros(4)
        t, p = paired_t_test(a, b)
        assert t == pytest.approx(1.0)
        assert p == pytest.approx(2.0 * stats.t.sf(1.0, df=3))

    def test_swap_negates_t_preserves_p(self):
        rng = np.random.default_rng(3)
        a = rng.normal(0, 1, 20)
        b = rng.normal(0.3, 1, 20)
        t_ab, p_ab = paired_t_test(a, b)
        t_ba, p_ba = paired_t_test(b, a)
        assert t_ab == pytest.approx(-t_ba)
        assert p_ab == pytest.approx(p_ba)

    def test_equal_samples_zero_variance(self):
        a = np.array([2.0, 2.0, 5.0])
        assert paired_t_test(a, a) == (0.0, 1.0)

    def test_constant_nonzero_difference(self):
        a = np.array([1.0, 2.0, 3.0])
        t, p = paired_t_test(a + 0.5, a)
        assert t == math.inf and p == 0.0
        t, p = paired_t_test(a - 0.5, a)
        assert t == -math.inf and p == 0.0

    def test_length_mismatch_raises(self):
        with pytest.raises(ValueError):
            paired_t_test([1.0, 2.0], [1.0])

    def test_single_pair_raises(self):
        with pytest.raises(ValueError):
            paired_t_test([1.0], [2.0])

    def test_matches_library_on_generic_data(self):
        rng = np.random.default_rng(11)
        a = rng.normal(0, 1, 15)
        b = rng.normal(0.4, 1.2, 15)
        t, p = paired_t_test(a, b)
        ref = stats.ttest_rel(a, b)
        assert t == pytest.approx(ref.statistic)
        assert p == pytest.approx(ref.pvalue)
