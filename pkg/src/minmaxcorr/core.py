"""Domain types shared by the whole package.

Conventions that everything downstream relies on:

- An overlap scheme ``(n, m, ell)`` describes two blocks of independent
  variables, ``{1..m}`` and ``{ell+1..n}``, sharing the indices
  ``{ell+1..m}``.  The chain ``1 <= ell+1 <= m <= n`` must hold, so the
  overlap always has size at least 1.
- Geometric marginals have support ``{1, 2, ...}`` (index of the first
  success).  Libraries disagree on this convention; here it is fixed once
  and used everywhere, including sampling and joint construction.
- Probability parameters must lie strictly inside ``(0, 1)``: a degenerate
  variable has no well-defined maximal correlation, so 0 and 1 are rejected
  rather than handled as limits.

All types are immutable after construction and all operations are pure, so
everything here is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.special import betainc, gammainc


# ---------------------------------------------------------------------------
# Exceptions
# ---------------------------------------------------------------------------

class MinMaxCorrError(Exception):
    """Base class for all semantic errors raised by this package."""


class SchemeInvalid(MinMaxCorrError):
    """The triple (n, m, ell) violates 1 <= ell+1 <= m <= n."""


class ParamOutOfRange(MinMaxCorrError):
    """A distribution parameter lies outside its open domain."""


class SchemeMismatch(MinMaxCorrError):
    """The number of marginals disagrees with the scheme's n."""


class DegenerateMargin(MinMaxCorrError):
    """A joint table has a margin with fewer than two positive-mass atoms."""


class TruncationFailure(MinMaxCorrError):
    """No admissible truncation point below the hard support cap."""


class SizeCap(MinMaxCorrError):
    """A constructed table would exceed the allowed number of entries."""


class NoConvergence(MinMaxCorrError):
    """Iterative solver exhausted its iteration budget.

    Carries the last iterate so callers can inspect how far it got.
    """

    def __init__(self, message: str, last_value: float, residual: float):
        super().__init__(message)
        self.last_value = last_value
        self.residual = residual


# ---------------------------------------------------------------------------
# Overlap scheme
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OverlapScheme:
    """Index triple (n, m, ell) for the blocks {1..m} and {ell+1..n}."""

    n: int
    m: int
    ell: int

    def __post_init__(self) -> None:
        for name in ("n", "m", "ell"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise SchemeInvalid(f"{name} must be an integer, got {v!r}")
        if not (1 <= self.ell + 1 <= self.m <= self.n):
            raise SchemeInvalid(
                f"scheme ({self.n}, {self.m}, {self.ell}) violates "
                f"1 <= ell+1 <= m <= n"
            )

    @property
    def overlap(self) -> int:
        """Number of shared indices, m - ell >= 1."""
        return self.m - self.ell

    @property
    def block1(self) -> int:
        """Size of the first block {1..m}."""
        return self.m

    @property
    def block2(self) -> int:
        """Size of the second block {ell+1..n}."""
        return self.n - self.ell


def validate_scheme(n: int, m: int, ell: int) -> OverlapScheme:
    """Validate raw integers into an OverlapScheme or raise SchemeInvalid."""
    return OverlapScheme(n, m, ell)


# ---------------------------------------------------------------------------
# Marginal specifications
# ---------------------------------------------------------------------------

def _check_open_unit(p: float, name: str = "p") -> None:
    if not (isinstance(p, (int, float)) and math.isfinite(p) and 0.0 < p < 1.0):
        raise ParamOutOfRange(f"{name} must lie strictly in (0, 1), got {p!r}")


class MarginalSpec:
    """Base class for integer-supported marginal laws.

    Subclasses provide exact survival functions P(X > t) and describe their
    support so that joint construction can pick truncation points.
    """

    def survival(self, t: int) -> float:
        """Return P(X > t)."""
        raise NotImplementedError

    @property
    def support_min(self) -> int:
        raise NotImplementedError

    @property
    def support_max(self) -> int | None:
        """Largest support point, or None for an infinite support."""
        raise NotImplementedError


@dataclass(frozen=True)
class Bernoulli(MarginalSpec):
    """Bernoulli(p) on {0, 1} with P(X=1) = p."""

    p: float

    def __post_init__(self) -> None:
        _check_open_unit(self.p)

    def survival(self, t: int) -> float:
        if t < 0:
            return 1.0
        if t == 0:
            return self.p
        return 0.0

    @property
    def support_min(self) -> int:
        return 0

    @property
    def support_max(self) -> int | None:
        return 1


@dataclass(frozen=True)
class Geometric(MarginalSpec):
    """Geometric(p) on {1, 2, ...}: number of trials until the first success."""

    p: float

    def __post_init__(self) -> None:
        _check_open_unit(self.p)

    def survival(self, t: int) -> float:
        # P(X > t) = (1-p)^t for t >= 0; the support starts at 1.
        if t < 1:
            return 1.0
        return math.exp(t * math.log1p(-self.p))

    @property
    def support_min(self) -> int:
        return 1

    @property
    def support_max(self) -> int | None:
        return None


@dataclass(frozen=True)
class Binomial(MarginalSpec):
    """Binomial(d, p) on {0, ..., d}."""

    d: int
    p: float

    def __post_init__(self) -> None:
        if not isinstance(self.d, int) or isinstance(self.d, bool) or self.d < 1:
            raise ParamOutOfRange(f"d must be a positive integer, got {self.d!r}")
        _check_open_unit(self.p)

    def survival(self, t: int) -> float:
        if t < 0:
            return 1.0
        if t >= self.d:
            return 0.0
        # P(X >= t+1) via the regularized incomplete beta function.
        return float(betainc(t + 1, self.d - t, self.p))

    @property
    def support_min(self) -> int:
        return 0

    @property
    def support_max(self) -> int | None:
        return self.d


@dataclass(frozen=True)
class Poisson(MarginalSpec):
    """Poisson(lam) on {0, 1, ...}."""

    lam: float

    def __post_init__(self) -> None:
        if not (isinstance(self.lam, (int, float)) and math.isfinite(self.lam)
                and self.lam > 0):
            raise ParamOutOfRange(f"lambda must be positive, got {self.lam!r}")

    def survival(self, t: int) -> float:
        if t < 0:
            return 1.0
        # P(X >= t+1) via the regularized lower incomplete gamma function.
        return float(gammainc(t + 1, self.lam))

    @property
    def support_min(self) -> int:
        return 0

    @property
    def support_max(self) -> int | None:
        return None


@dataclass(frozen=True)
class FiniteDiscrete(MarginalSpec):
    """Finitely supported law given by (value, probability) atoms.

    Atoms are canonicalized at construction: duplicates merged, zero-mass
    atoms pruned, values sorted.
    """

    atoms: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        merged: dict[int, float] = {}
        for v, q in self.atoms:
            if not isinstance(v, int) or isinstance(v, bool):
                raise ParamOutOfRange(f"atom values must be integers, got {v!r}")
            if not (isinstance(q, (int, float)) and math.isfinite(q) and q >= 0):
                raise ParamOutOfRange(f"atom probability must be >= 0, got {q!r}")
            merged[v] = merged.get(v, 0.0) + float(q)
        total = math.fsum(merged.values())
        if abs(total - 1.0) > 1e-12:
            raise ParamOutOfRange(f"atom probabilities sum to {total}, not 1")
        canonical = tuple(sorted((v, q) for v, q in merged.items() if q > 0.0))
        if len(canonical) < 2:
            raise ParamOutOfRange("need at least 2 atoms of positive mass")
        object.__setattr__(self, "atoms", canonical)

    def survival(self, t: int) -> float:
        return math.fsum(q for v, q in self.atoms if v > t)

    @property
    def support_min(self) -> int:
        return self.atoms[0][0]

    @property
    def support_max(self) -> int | None:
        return self.atoms[-1][0]


def survival(spec: MarginalSpec, t: int) -> float:
    """P(X > t) for X distributed according to spec."""
    return spec.survival(t)


# ---------------------------------------------------------------------------
# Result record
# ---------------------------------------------------------------------------

_METHODS = frozenset({"closed_form", "svd_oracle", "ace_oracle", "monte_carlo"})


@dataclass(frozen=True)
class MaxCorrResult:
    """A computed maximal correlation with its method tag and error budget.

    error_budget is the truncated tail mass, iteration residual, or
    statistical standard error, depending on the method; 0 for exact
    closed forms.
    """

    value: float
    method: str
    error_budget: float = field(default=0.0)

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not (-1e-12 <= self.value <= 1.0 + 1e-12):
            raise ValueError(f"value {self.value} outside [0, 1]")
        if self.error_budget < 0:
            raise ValueError("error_budget must be nonnegative")
        object.__setattr__(self, "value", min(max(self.value, 0.0), 1.0))
