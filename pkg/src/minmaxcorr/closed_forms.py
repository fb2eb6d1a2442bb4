"""Closed-form maximal correlations of overlapping minima.

For a scheme (n, m, ell) with blocks {1..m} and {ell+1..n}, the coefficient
R(min block 1, min block 2) has an exact expression for i.i.d. continuous
marginals and for Bernoulli, geometric, binomial and Poisson marginals.
This module evaluates all of them, together with the helper quantities the
derivations use: the i.i.d. Bernoulli curve R_{m,ell}(p), the binomial
hazard p(k), the monotonicity helper f(x) = x / (1 - p^x), the universal
upper bound (m-ell)/sqrt(m(n-ell)), the Marshall-Olkin value, and the 2x2
determinant formula.

Numerical notes:
- Products over blocks are accumulated in log space and exponentiated once,
  so long blocks do not underflow.
- Quantities of the form 1 - p^k are computed as -expm1(k * log(p)), which
  keeps full precision as p -> 1 where the limit checks probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import (
    Binomial,
    DegenerateMargin,
    MaxCorrResult,
    OverlapScheme,
    ParamOutOfRange,
    SchemeMismatch,
    _check_open_unit,
)

__all__ = [
    "TwoByTwoJoint",
    "r_continuous",
    "upper_bound",
    "r_bernoulli",
    "r_ml",
    "r_geometric",
    "r_binomial",
    "r_poisson",
    "r_marshall_olkin",
    "r_two_by_two",
    "binomial_hazard",
    "f_helper",
]


def _one_minus_pow(log_p: float, k: float) -> float:
    """1 - exp(k * log_p), accurate when the result is tiny."""
    return -math.expm1(k * log_p)


def r_continuous(scheme: OverlapScheme) -> MaxCorrResult:
    """Coefficient for i.i.d. continuous marginals: (m-ell)/sqrt(m(n-ell))."""
    return MaxCorrResult(upper_bound(scheme), "closed_form", 0.0)


def upper_bound(scheme: OverlapScheme) -> float:
    """Universal bound (m-ell)/sqrt(m(n-ell)), attained in the continuous case."""
    return scheme.overlap / math.sqrt(scheme.block1 * scheme.block2)


def _check_probs(ps: Sequence[float], scheme: OverlapScheme) -> None:
    if len(ps) != scheme.n:
        raise SchemeMismatch(
            f"expected {scheme.n} parameters for scheme n={scheme.n}, got {len(ps)}"
        )
    for i, p in enumerate(ps):
        _check_open_unit(p, name=f"p[{i}]")


def r_bernoulli(ps: Sequence[float], scheme: OverlapScheme) -> MaxCorrResult:
    """Coefficient for independent Bernoulli(p_i) marginals.

    Exact formula in terms of the block success products
    A = prod_{1..m} p_i and B = prod_{ell+1..n} p_i:

        R = (prod_{1..n} p_i - A * B) / sqrt(A (1-A) B (1-B))
    """
    _check_probs(ps, scheme)
    logs = [math.log(p) for p in ps]
    la = math.fsum(logs[: scheme.m])            # log prod over block 1
    lb = math.fsum(logs[scheme.ell:])           # log prod over block 2
    l_overlap = math.fsum(logs[scheme.ell: scheme.m])
    lf = la + lb - l_overlap                    # log prod over all of 1..n
    # numerator = e^lf * (1 - e^{l_overlap}); denominator in log/expm1 form
    num = math.exp(lf) * _one_minus_pow(l_overlap, 1.0)
    den = math.sqrt(
        math.exp(la) * _one_minus_pow(la, 1.0)
        * math.exp(lb) * _one_minus_pow(lb, 1.0)
    )
    return MaxCorrResult(num / den, "closed_form", 0.0)


def _r_ml_from_log(lp: float, scheme: OverlapScheme) -> float:
    """R_{m,ell} evaluated from log(p), keeping precision for p near 1."""
    if not (math.isfinite(lp) and lp < 0.0):
        raise ParamOutOfRange(f"log(p) must be finite and negative, got {lp!r}")
    a = 0.5 * (scheme.n + scheme.ell - scheme.m)
    b = scheme.overlap
    c = scheme.block2
    num = math.exp(a * lp) * _one_minus_pow(lp, b)
    den = math.sqrt(_one_minus_pow(lp, scheme.m) * _one_minus_pow(lp, c))
    return num / den


def r_ml(p: float, scheme: OverlapScheme) -> float:
    """The i.i.d. Bernoulli curve R_{m,ell}(p) for p in (0, 1).

    Evaluated in the algebraically equivalent, cancellation-free form

        R_{m,ell}(p) = p^a (1 - p^b) / sqrt((1 - p^m)(1 - p^c)),

    with a = (n + ell - m)/2, b = m - ell, c = n - ell.  The endpoints are
    rejected; the limits are 0 at 0+ (for partial overlap) and
    upper_bound(scheme) at 1-.
    """
    _check_open_unit(p)
    return _r_ml_from_log(math.log(p), scheme)


def r_geometric(ps: Sequence[float], scheme: OverlapScheme) -> MaxCorrResult:
    """Coefficient for independent Geometric(p_i) marginals (support {1,2,...}).

    Equals the Bernoulli coefficient evaluated at the failure probabilities
    1 - p_i.
    """
    _check_probs(ps, scheme)
    return r_bernoulli([1.0 - p for p in ps], scheme)


def r_binomial(d: int, p: float, scheme: OverlapScheme) -> MaxCorrResult:
    """Coefficient for i.i.d. Binomial(d, p) marginals: R_{m,ell}(1-(1-p)^d)."""
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ParamOutOfRange(f"d must be a positive integer, got {d!r}")
    _check_open_unit(p)
    # log(1 - (1-p)^d), without rounding the probability through 1
    lq = math.log1p(-math.exp(d * math.log1p(-p)))
    return MaxCorrResult(_r_ml_from_log(lq, scheme), "closed_form", 0.0)


def r_poisson(lam: float, scheme: OverlapScheme) -> MaxCorrResult:
    """Coefficient for i.i.d. Poisson(lam) marginals: R_{m,ell}(1-e^{-lam})."""
    if not (isinstance(lam, (int, float)) and math.isfinite(lam) and lam > 0):
        raise ParamOutOfRange(f"lambda must be positive, got {lam!r}")
    lq = math.log1p(-math.exp(-lam))  # log(1 - e^{-lam})
    return MaxCorrResult(_r_ml_from_log(lq, scheme), "closed_form", 0.0)


def r_marshall_olkin(l1: float, l2: float, l3: float) -> float:
    """Coefficient of (min(X1,X2), min(X2,X3)) for independent exponentials.

    Rates l1, l2, l3; the value is l2 / sqrt((l1+l2)(l2+l3)).
    """
    for name, v in (("l1", l1), ("l2", l2), ("l3", l3)):
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise ParamOutOfRange(f"rate {name} must be positive, got {v!r}")
    return l2 / math.sqrt((l1 + l2) * (l2 + l3))


@dataclass(frozen=True)
class TwoByTwoJoint:
    """Joint law of a pair of binary variables, cells (a,c),(a,d),(b,c),(b,d)."""

    p_ac: float
    p_ad: float
    p_bc: float
    p_bd: float

    def __post_init__(self) -> None:
        cells = (self.p_ac, self.p_ad, self.p_bc, self.p_bd)
        for q in cells:
            if not (isinstance(q, (int, float)) and math.isfinite(q) and q >= 0):
                raise ParamOutOfRange(f"cell probability must be >= 0, got {q!r}")
        if abs(math.fsum(cells) - 1.0) > 1e-12:
            raise ParamOutOfRange(f"cells sum to {math.fsum(cells)}, not 1")
        if min(self.p_a, self.p_b, self.p_c, self.p_d) <= 0.0:
            raise DegenerateMargin("2x2 joint has a zero-mass margin")

    @property
    def p_a(self) -> float:
        return self.p_ac + self.p_ad

    @property
    def p_b(self) -> float:
        return self.p_bc + self.p_bd

    @property
    def p_c(self) -> float:
        return self.p_ac + self.p_bc

    @property
    def p_d(self) -> float:
        return self.p_ad + self.p_bd


def r_two_by_two(j: TwoByTwoJoint) -> float:
    """Maximal correlation of a 2x2 joint: |det| / sqrt(p_a p_b p_c p_d)."""
    det = j.p_ac * j.p_bd - j.p_ad * j.p_bc
    return abs(det) / math.sqrt(j.p_a * j.p_b * j.p_c * j.p_d)


def binomial_hazard(d: int, p: float, k: int) -> float:
    """Conditional probability P(X >= k | X >= k-1) for X ~ Binomial(d, p).

    Non-increasing in k, with p(1) = 1 - (1-p)^d; returns 0 for k > d,
    where P(X >= k) vanishes.
    """
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ParamOutOfRange(f"k must be a positive integer, got {k!r}")
    x = Binomial(d, p)  # validates d, p
    if k > d:
        return 0.0
    if k == 1:
        return -math.expm1(d * math.log1p(-p))
    return x.survival(k - 1) / x.survival(k - 2)


def f_helper(x: float, p: float) -> float:
    """The monotonicity helper f(x) = x / (1 - p^x), increasing on x > 0."""
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x > 0):
        raise ParamOutOfRange(f"x must be positive, got {x!r}")
    _check_open_unit(p)
    return x / _one_minus_pow(math.log(p), x)
