"""Domain types: scheme validation and survival functions."""

import math

import pytest
from hypothesis import given, strategies as st

from minmaxcorr import (
    Bernoulli,
    Binomial,
    FiniteDiscrete,
    Geometric,
    ParamOutOfRange,
    Poisson,
    SchemeInvalid,
    survival,
    validate_scheme,
)


class TestValidateScheme:
    def test_paper_example(self):
        s = validate_scheme(3, 2, 1)
        assert (s.overlap, s.block1, s.block2) == (1, 2, 2)

    def test_smallest_legal(self):
        s = validate_scheme(1, 1, 0)
        assert (s.overlap, s.block1, s.block2) == (1, 1, 1)

    @pytest.mark.parametrize("n,m,ell", [(3, 1, 2), (2, 3, 0), (3, 2, -1),
                                         (0, 0, 0), (3, 0, 0)])
    def test_invalid(self, n, m, ell):
        with pytest.raises(SchemeInvalid):
            validate_scheme(n, m, ell)

    def test_exhaustive_up_to_8(self):
        # the validator accepts exactly the triples satisfying the chain
        for n in range(-1, 9):
            for m in range(-1, 9):
                for ell in range(-2, 9):
                    legal = 1 <= ell + 1 <= m <= n
                    if legal:
                        validate_scheme(n, m, ell)
                    else:
                        with pytest.raises(SchemeInvalid):
                            validate_scheme(n, m, ell)

    def test_non_integer_rejected(self):
        with pytest.raises(SchemeInvalid):
            validate_scheme(3.0, 2, 1)


class TestSurvival:
    def test_geometric(self):
        assert survival(Geometric(0.5), 2) == pytest.approx(0.25, abs=1e-15)
        assert survival(Geometric(0.5), 0) == 1.0
        assert survival(Geometric(0.5), -3) == 1.0

    def test_bernoulli(self):
        b = Bernoulli(0.7)
        assert survival(b, -1) == 1.0
        assert survival(b, 0) == 0.7
        assert survival(b, 1) == 0.0

    def test_binomial(self):
        # P(X > 0) = 1 - (1-p)^d by direct expansion
        assert survival(Binomial(2, 0.5), 0) == pytest.approx(0.75, abs=1e-15)
        assert survival(Binomial(2, 0.5), 1) == pytest.approx(0.25, abs=1e-15)
        assert survival(Binomial(2, 0.5), 2) == 0.0

    def test_poisson_matches_direct_sum(self):
        lam = 1.7
        x = Poisson(lam)
        for t in range(0, 12):
            direct = 1.0 - math.fsum(
                math.exp(-lam) * lam**k / math.factorial(k)
                for k in range(t + 1)
            )
            assert x.survival(t) == pytest.approx(direct, abs=1e-13)

    def test_finite_discrete_tail(self):
        fd = FiniteDiscrete(((1, 0.2), (3, 0.5), (7, 0.3)))
        assert survival(fd, 0) == 1.0
        assert survival(fd, 1) == pytest.approx(0.8, abs=1e-15)
        assert survival(fd, 3) == pytest.approx(0.3, abs=1e-15)
        assert survival(fd, 7) == 0.0


@st.composite
def marginal_specs(draw):
    kind = draw(st.sampled_from(["bernoulli", "geometric", "binomial",
                                 "poisson", "finite"]))
    p = draw(st.floats(min_value=0.01, max_value=0.99))
    if kind == "bernoulli":
        return Bernoulli(p)
    if kind == "geometric":
        return Geometric(p)
    if kind == "binomial":
        return Binomial(draw(st.integers(min_value=1, max_value=20)), p)
    if kind == "poisson":
        return Poisson(draw(st.floats(min_value=0.05, max_value=8.0)))
    n_atoms = draw(st.integers(min_value=2, max_value=5))
    weights = draw(st.lists(st.floats(min_value=0.1, max_value=1.0),
                            min_size=n_atoms, max_size=n_atoms))
    total = math.fsum(weights)
    values = draw(st.lists(st.integers(min_value=-5, max_value=20),
                           min_size=n_atoms, max_size=n_atoms, unique=True))
    return FiniteDiscrete(tuple(zip(values, [w / total for w in weights])))


@given(marginal_specs())
def test_survival_is_a_valid_tail_function(spec):
    prev = 1.0
    for t in range(-2, 120):
        s = spec.survival(t)
        assert 0.0 <= s <= 1.0
        assert s <= prev + 1e-15
        prev = s
    assert spec.survival(10**6) <= 1e-12


class TestParameterValidation:
    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.1, float("nan")])
    def test_unit_interval_endpoints_rejected(self, p):
        for cls in (Bernoulli, Geometric):
            with pytest.raises(ParamOutOfRange):
                cls(p)
        with pytest.raises(ParamOutOfRange):
            Binomial(3, p)

    def test_bad_rates_and_counts(self):
        with pytest.raises(ParamOutOfRange):
            Poisson(0.0)
        with pytest.raises(ParamOutOfRange):
            Poisson(-1.0)
        with pytest.raises(ParamOutOfRange):
            Binomial(0, 0.5)

    def test_finite_discrete_canonicalization(self):
        fd = FiniteDiscrete(((3, 0.25), (1, 0.5), (3, 0.25), (9, 0.0)))
        assert fd.atoms == ((1, 0.5), (3, 0.5))

    def test_finite_discrete_degenerate_rejected(self):
        with pytest.raises(ParamOutOfRange):
            FiniteDiscrete(((1, 1.0),))
        with pytest.raises(ParamOutOfRange):
            FiniteDiscrete(((1, 1.0), (2, 0.0)))
        with pytest.raises(ParamOutOfRange):
            FiniteDiscrete(((1, 0.6), (2, 0.6)))
