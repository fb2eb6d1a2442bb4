"""Ground-truth maximal correlation of finite joint tables.

Two independent numerical routes:

- svd_maxcorr: the spectral characterization.  With Q[u,v] =
  P[u,v] / sqrt(p_u p_v), the pair (sqrt(p_u), sqrt(p_v)) is always a
  singular pair of Q with singular value exactly 1 (the constant
  functions), and the maximal correlation is the next singular value.
  The known top pair is deflated before the decomposition so the second
  value cannot be misidentified when the spectral gap is tiny.

- ace_maxcorr: alternating conditional expectations, a power iteration on
  the conditional-expectation operator with centered, variance-normalized
  score functions.  Deterministically seeded for reproducibility.

Both accept subnormalized tables (truncated tail mass recorded on the
JointPMF); the table's own marginals are used throughout, so the constant
eigenpair property holds exactly regardless of truncation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import DegenerateMargin, MaxCorrResult, NoConvergence
from .joint_builder import JointPMF, coarsen, product_joint


@dataclass(frozen=True)
class SpectralReport:
    """Spectral decomposition summary for one joint table.

    left_fn / right_fn are the optimal score functions, as value -> score
    maps on the two supports (unit variance, zero mean under the margins).
    """

    value: float
    top_singular: float
    gap: float
    left_fn: dict[int, float]
    right_fn: dict[int, float]

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "top_singular": self.top_singular,
            "gap": self.gap,
            "left_fn": {str(k): v for k, v in self.left_fn.items()},
            "right_fn": {str(k): v for k, v in self.right_fn.items()},
        }


def _margins(joint: JointPMF) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    P = joint.probs
    pu = joint.marginal_u
    pv = joint.marginal_v
    if len(pu) < 2 or len(pv) < 2:
        raise DegenerateMargin(
            f"margins have {len(pu)} x {len(pv)} positive-mass atoms; need >= 2"
        )
    return P, pu, pv


def svd_maxcorr(joint: JointPMF) -> SpectralReport:
    """Maximal correlation as the second singular value of the normalized table."""
    P, pu, pv = _margins(joint)
    su, sv = np.sqrt(pu), np.sqrt(pv)
    Q = P / np.outer(su, sv)
    top = float(np.linalg.svd(Q, compute_uv=False)[0])
    # deflate the known top pair (sqrt(pu), sqrt(pv)) / total mass
    total = float(P.sum())
    Q1 = Q - np.outer(su, sv) / total
    U, s, Vt = np.linalg.svd(Q1)
    value = float(min(max(s[0], 0.0), 1.0))
    left = U[:, 0] / su
    right = Vt[0, :] / sv
    # fix an overall sign so reports are reproducible
    if left[np.argmax(np.abs(left))] < 0:
        left, right = -left, -right
    return SpectralReport(
        value=value,
        top_singular=top,
        gap=max(top - value, 0.0),
        left_fn={u: float(x) for u, x in zip(joint.support_u, left)},
        right_fn={v: float(x) for v, x in zip(joint.support_v, right)},
    )


def _center_normalize(f: np.ndarray, w: np.ndarray) -> tuple[np.ndarray, float]:
    f = f - float(np.dot(w, f))
    norm = math.sqrt(float(np.dot(w, f * f)))
    if norm > 0:
        f = f / norm
    return f, norm


def _seed(size: int, quantile: float) -> np.ndarray:
    cut = max(1, int(size * quantile))
    f = np.zeros(size)
    f[-cut:] = 1.0
    return f


def ace_maxcorr(joint: JointPMF, tol: float = 1e-12,
                max_iter: int = 10**5) -> MaxCorrResult:
    """Maximal correlation by alternating conditional expectations.

    Starts from the indicator of the upper half of the U-support; if that
    seed is orthogonal to the leading non-constant direction (the iteration
    stalls at zero), restarts once from the top quartile.
    """
    if tol <= 0 or max_iter < 1:
        raise ValueError("tol must be positive and max_iter >= 1")
    P, pu, pv = _margins(joint)
    total = float(P.sum())
    for attempt, q in enumerate((0.5, 0.25)):
        phi, _ = _center_normalize(_seed(len(pu), q), pu / total)
        r_prev = 0.0
        delta = math.inf
        stalled = False
        for _ in range(max_iter):
            psi = (P.T @ phi) / pv
            psi, norm_v = _center_normalize(psi, pv / total)
            if norm_v == 0.0:
                stalled = True
                break
            phi_new = (P @ psi) / pu
            phi, norm_u = _center_normalize(phi_new, pu / total)
            if norm_u == 0.0:
                stalled = True
                break
            r = float(phi @ (P @ psi)) / total
            delta = abs(r - r_prev)
            r_prev = r
            if delta <= tol:
                return MaxCorrResult(min(max(r, 0.0), 1.0), "ace_oracle", delta)
        if stalled and attempt == 0:
            continue
        if stalled:
            # both seeds annihilated: the table is rank one, correlation 0
            return MaxCorrResult(0.0, "ace_oracle", 0.0)
        raise NoConvergence(
            f"ACE did not converge within {max_iter} iterations",
            last_value=r_prev, residual=delta,
        )
    raise AssertionError("unreachable")


def csaki_fischer_check(joints: Sequence[JointPMF]) -> tuple[float, float]:
    """(value of the product joint, max of the individual values).

    The two sides agree for independent tuples; callers assert the identity
    at their tolerance.
    """
    if not (2 <= len(joints) <= 4):
        raise ValueError(f"need 2..4 joints, got {len(joints)}")
    prod = joints[0]
    for j in joints[1:]:
        prod = product_joint(prod, j)
    lhs = svd_maxcorr(prod).value
    rhs = max(svd_maxcorr(j).value for j in joints)
    return lhs, rhs


def data_processing_check(
    joint: JointPMF,
    u_map: Callable[[int], int] | Mapping[int, int],
    v_map: Callable[[int], int] | Mapping[int, int],
) -> tuple[float, float]:
    """(value after coarsening, value of the original joint).

    Deterministic transformations cannot increase maximal correlation, so
    coarse <= fine up to numerical tolerance.
    """
    fine = svd_maxcorr(joint).value
    coarse = svd_maxcorr(coarsen(joint, u_map, v_map)).value
    return coarse, fine


def report_to_json_str(report: SpectralReport) -> str:
    return json.dumps(report.to_json())
