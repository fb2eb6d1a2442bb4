"""Exact finite joint PMFs of (U, V) = (min of block 1, min of block 2).

For independent integer-supported marginals X_1..X_n and a scheme
(n, m, ell), the bivariate survival factorizes as

    H(u, v) = P(U > u, V > v)
            = prod_{i <= ell} S_i(u)
              * prod_{ell < i <= m} S_i(max(u, v))
              * prod_{m < i <= n} S_i(v),

and second-order differencing of H recovers the joint PMF exactly.
Infinite supports are truncated at a point K chosen from the block
survival products so that the discarded mass is below the requested
tail budget; the discarded mass is recorded on the table.

Supports are stored dense over the truncated range: tables at this scale
are small, and dense storage keeps the differencing trivial.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import (
    MarginalSpec,
    OverlapScheme,
    SchemeMismatch,
    SizeCap,
    TruncationFailure,
)

_HARD_CAP = 10**7
_PRODUCT_CAP = 10**8
# differencing of near-equal survivals leaves harmless negative dust
_NEG_DUST = 1e-9


@dataclass(frozen=True)
class JointPMF:
    """Finite bivariate probability table with recorded truncated tail mass."""

    support_u: tuple[int, ...]
    support_v: tuple[int, ...]
    probs: np.ndarray
    truncated_mass: float = 0.0

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (len(self.support_u), len(self.support_v)):
            raise ValueError("probs shape does not match supports")
        if probs.min(initial=0.0) < -_NEG_DUST:
            raise ValueError(f"negative probability {probs.min()} in table")
        probs = np.clip(probs, 0.0, None)
        # prune zero-mass rows/columns so margins are strictly positive
        keep_u = probs.sum(axis=1) > 0.0
        keep_v = probs.sum(axis=0) > 0.0
        probs = probs[np.ix_(keep_u, keep_v)]
        object.__setattr__(
            self, "support_u", tuple(np.asarray(self.support_u)[keep_u].tolist())
        )
        object.__setattr__(
            self, "support_v", tuple(np.asarray(self.support_v)[keep_v].tolist())
        )
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        total = probs.sum() + self.truncated_mass
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"table mass + truncated mass = {total}, not 1")

    @property
    def marginal_u(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    @property
    def marginal_v(self) -> np.ndarray:
        return self.probs.sum(axis=0)

    @property
    def total_mass(self) -> float:
        return float(self.probs.sum())

    def transpose(self) -> "JointPMF":
        return JointPMF(self.support_v, self.support_u,
                        self.probs.T.copy(), self.truncated_mass)

    def to_json(self) -> dict:
        """JSON-serializable form: {support_u, support_v, probs, truncated_mass}."""
        return {
            "support_u": list(self.support_u),
            "support_v": list(self.support_v),
            "probs": self.probs.tolist(),
            "truncated_mass": self.truncated_mass,
        }

    def to_csv(self) -> str:
        """CSV layout: header row = v-support, first column = u-support."""
        buf = io.StringIO()
        buf.write("u\\v," + ",".join(str(v) for v in self.support_v) + "\n")
        for u, row in zip(self.support_u, self.probs):
            buf.write(str(u) + "," + ",".join(repr(float(x)) for x in row) + "\n")
        return buf.getvalue()

    @staticmethod
    def from_json(obj: Mapping) -> "JointPMF":
        return JointPMF(
            tuple(obj["support_u"]),
            tuple(obj["support_v"]),
            np.asarray(obj["probs"], dtype=float),
            float(obj.get("truncated_mass", 0.0)),
        )


def _block_survival(marginals: Sequence[MarginalSpec], t: int) -> float:
    out = 1.0
    for spec in marginals:
        out *= spec.survival(t)
    return out


def _pick_truncation(marginals: Sequence[MarginalSpec],
                     scheme: OverlapScheme, tail_eps: float) -> int:
    """Smallest K with P(U > K) + P(V > K) <= tail_eps, or the finite support max."""
    maxima = [spec.support_max for spec in marginals]
    if all(mx is not None for mx in maxima):
        return max(mx for mx in maxima if mx is not None)
    block1 = marginals[: scheme.m]
    block2 = marginals[scheme.ell:]

    def tail(k: int) -> float:
        return _block_survival(block1, k) + _block_survival(block2, k)

    lo = min(spec.support_min for spec in marginals)
    hi = max(lo + 1, 1)
    while tail(hi) > tail_eps:
        hi *= 2
        if hi > _HARD_CAP:
            raise TruncationFailure(
                f"truncation point exceeds hard cap {_HARD_CAP}"
            )
    # binary search for the smallest admissible K
    low = lo
    while low < hi:
        mid = (low + hi) // 2
        if tail(mid) <= tail_eps:
            hi = mid
        else:
            low = mid + 1
    return hi


def min_joint(marginals: Sequence[MarginalSpec], scheme: OverlapScheme,
              tail_eps: float = 1e-12) -> JointPMF:
    """Exact joint PMF of (min over block 1, min over block 2).

    tail_eps bounds the probability mass discarded when infinite supports
    are cut; finite supports are never truncated and yield truncated_mass 0.
    """
    if len(marginals) != scheme.n:
        raise SchemeMismatch(
            f"expected {scheme.n} marginals, got {len(marginals)}"
        )
    if not (0.0 < tail_eps <= 1e-3):
        raise ValueError(f"tail_eps must lie in (0, 1e-3], got {tail_eps}")

    lo = min(spec.support_min for spec in marginals)
    K = _pick_truncation(marginals, scheme, tail_eps)

    # survival values on the grid t = lo-1 .. K for each marginal
    tvals = np.arange(lo - 1, K + 1)
    surv = np.array([[spec.survival(int(t)) for t in tvals]
                     for spec in marginals])
    pre = surv[: scheme.ell].prod(axis=0) if scheme.ell > 0 \
        else np.ones(len(tvals))
    mid = surv[scheme.ell: scheme.m].prod(axis=0)
    suf = surv[scheme.m:].prod(axis=0) if scheme.m < scheme.n \
        else np.ones(len(tvals))

    idx = np.arange(len(tvals))
    max_idx = np.maximum.outer(idx, idx)
    H = pre[:, None] * suf[None, :] * mid[max_idx]
    P = H[:-1, :-1] - H[1:, :-1] - H[:-1, 1:] + H[1:, 1:]
    P = np.clip(P, 0.0, None)

    support = tuple(range(lo, K + 1))
    truncated = max(0.0, 1.0 - float(P.sum()))
    return JointPMF(support, support, P, truncated)


def coarsen(joint: JointPMF,
            u_map: Callable[[int], int] | Mapping[int, int],
            v_map: Callable[[int], int] | Mapping[int, int]) -> JointPMF:
    """Pushforward of the joint under pointwise maps of each coordinate.

    Mass is aggregated per image pair; total mass is preserved exactly.
    """
    fu = u_map.__getitem__ if isinstance(u_map, Mapping) else u_map
    fv = v_map.__getitem__ if isinstance(v_map, Mapping) else v_map
    img_u = sorted({fu(u) for u in joint.support_u})
    img_v = sorted({fv(v) for v in joint.support_v})
    iu = {x: i for i, x in enumerate(img_u)}
    iv = {x: i for i, x in enumerate(img_v)}
    rows = np.array([iu[fu(u)] for u in joint.support_u])
    cols = np.array([iv[fv(v)] for v in joint.support_v])
    out = np.zeros((len(img_u), len(img_v)))
    np.add.at(out, (rows[:, None], cols[None, :]), joint.probs)
    return JointPMF(tuple(img_u), tuple(img_v), out, joint.truncated_mass)


def product_joint(a: JointPMF, b: JointPMF) -> JointPMF:
    """Joint of ((U_a, U_b), (V_a, V_b)) under independence.

    The paired supports are relabeled to consecutive integers (row-major
    over (index in a, index in b)); maximal correlation is invariant under
    relabeling, so nothing downstream depends on the original pair values.
    """
    n_entries = a.probs.size * b.probs.size
    if n_entries > _PRODUCT_CAP:
        raise SizeCap(f"product table would have {n_entries} entries")
    probs = np.kron(a.probs, b.probs)
    trunc = 1.0 - (1.0 - a.truncated_mass) * (1.0 - b.truncated_mass)
    return JointPMF(tuple(range(probs.shape[0])),
                    tuple(range(probs.shape[1])), probs, max(trunc, 0.0))


def joint_to_json_str(joint: JointPMF) -> str:
    return json.dumps(joint.to_json())
