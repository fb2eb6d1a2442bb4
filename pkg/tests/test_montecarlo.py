"""Seeded Monte Carlo estimation: determinism and convergence."""

import math

import numpy as np
import pytest

from minmaxcorr import (
    Bernoulli,
    Binomial,
    FiniteDiscrete,
    Geometric,
    MCConfig,
    Poisson,
    mc_maxcorr,
    mc_replicates,
    r_bernoulli,
    r_geometric,
    sample_minima,
    validate_scheme,
)

S321 = validate_scheme(3, 2, 1)


class TestConfig:
    def test_minimum_sample_size(self):
        with pytest.raises(ValueError):
            MCConfig(n_samples=999, seed=1)

    def test_replicates_positive(self):
        with pytest.raises(ValueError):
            MCConfig(n_samples=1000, seed=1, replicates=0)


class TestSampleMinima:
    def test_same_seed_identical_tables(self):
        cfg = MCConfig(n_samples=10_000, seed=123)
        marginals = [Geometric(0.5)] * 3
        a = sample_minima(marginals, S321, cfg)
        b = sample_minima(marginals, S321, cfg)
        assert a.support_u == b.support_u
        assert np.array_equal(a.probs, b.probs)

    def test_different_replicates_differ(self):
        cfg = MCConfig(n_samples=10_000, seed=123)
        marginals = [Geometric(0.5)] * 3
        a = sample_minima(marginals, S321, cfg, replicate=0)
        b = sample_minima(marginals, S321, cfg, replicate=1)
        assert not np.array_equal(a.probs, b.probs)

    def test_diagonal_for_single_variable(self):
        cfg = MCConfig(n_samples=20_000, seed=5)
        j = sample_minima([Poisson(1.0)], validate_scheme(1, 1, 0), cfg)
        off = j.probs - np.diag(np.diag(j.probs))
        assert np.abs(off).max() == 0.0

    def test_bernoulli_table_concentration(self):
        cfg = MCConfig(n_samples=200_000, seed=7)
        emp = sample_minima([Bernoulli(0.5)] * 3, S321, cfg)
        exact = np.array([[0.625, 0.125], [0.125, 0.125]])
        tv = 0.5 * np.abs(emp.probs - exact).sum()
        assert tv <= 0.005  # well inside a 3-sigma budget at n=2e5

    def test_geometric_support_starts_at_one(self):
        cfg = MCConfig(n_samples=5_000, seed=2)
        j = sample_minima([Geometric(0.9)] * 3, S321, cfg)
        assert min(j.support_u) >= 1 and min(j.support_v) >= 1

    def test_all_families_sample(self):
        cfg = MCConfig(n_samples=2_000, seed=3)
        fd = FiniteDiscrete(((0, 0.5), (4, 0.5)))
        marginals = [Bernoulli(0.5), Binomial(4, 0.3), fd]
        j = sample_minima(marginals, S321, cfg)
        assert j.total_mass == pytest.approx(1.0, abs=1e-15)


class TestMcMaxcorr:
    def test_bernoulli_target(self):
        cfg = MCConfig(n_samples=100_000, seed=11, replicates=4)
        res = mc_maxcorr([Bernoulli(0.5)] * 3, S321, cfg)
        assert res.method == "monte_carlo"
        assert res.value == pytest.approx(1 / 3, abs=0.02)
        assert res.error_budget > 0.0

    def test_deterministic(self):
        cfg = MCConfig(n_samples=10_000, seed=77, replicates=3)
        marginals = [Geometric(0.5)] * 3
        a = mc_maxcorr(marginals, S321, cfg)
        b = mc_maxcorr(marginals, S321, cfg)
        assert a == b

    def test_replicate_order_independent_values(self):
        cfg1 = MCConfig(n_samples=10_000, seed=9, replicates=2)
        cfg3 = MCConfig(n_samples=10_000, seed=9, replicates=3)
        first_two = [v for _, v in mc_replicates([Bernoulli(0.5)] * 3,
                                                 S321, cfg1)]
        first_three = [v for _, v in mc_replicates([Bernoulli(0.5)] * 3,
                                                   S321, cfg3)]
        assert first_three[:2] == first_two

    def test_error_shrinks_with_sample_size(self):
        target = r_geometric([0.5] * 3, S321).value
        errors = []
        for n in (10_000, 100_000, 1_000_000):
            cfg = MCConfig(n_samples=n, seed=13, replicates=2)
            res = mc_maxcorr([Geometric(0.5)] * 3, S321, cfg)
            # slack of 3 standard errors on top of the point estimate
            errors.append(abs(res.value - target) - 3 * res.error_budget)
        assert errors[-1] <= errors[0] + 0.01
        assert abs(mc_maxcorr([Geometric(0.5)] * 3, S321,
                              MCConfig(1_000_000, 13, 2)).value - target) \
            <= 0.02
