"""Empirical ROC curves and the two routes to AUC.

``roc_curve`` integrates the empirical power curve; ``auc_mann_whitney``
counts concordant cross-pairs through rank sums. Ties between classes get
half weight in both, so the two agree exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np


class Label(str, enum.Enum):
    CLASS0 = "CLASS0"  # signal absent
    CLASS1 = "CLASS1"  # signal present


@dataclass(frozen=True)
class EmpiricalSample:
    values: np.ndarray
    label: Label = Label.CLASS0

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float).ravel()
        if vals.size == 0:
            raise ValueError(f"{self.label.value} sample is empty")
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"{self.label.value} sample contains non-finite values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, values: Iterable[float], label: Label | str = Label.CLASS0) -> "EmpiricalSample":
        return cls(np.asarray(list(values), dtype=float), Label(label))

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class RocCurve:
    alpha: np.ndarray
    power: np.ndarray
    auc_trapezoid: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.alpha.tolist(), self.power.tolist()))

    def to_dict(self) -> dict:
        return {"points": [list(p) for p in self.points], "auc_trapezoid": self.auc_trapezoid}

    @classmethod
    def from_dict(cls, data: dict) -> "RocCurve":
        pts = np.asarray(data["points"], dtype=float).reshape(-1, 2)
        return cls(pts[:, 0], pts[:, 1], float(data["auc_trapezoid"]))


def _as_values(s) -> np.ndarray:
    return s.values if isinstance(s, EmpiricalSample) else np.asarray(s, dtype=float)


def threshold_of_alpha(s0: EmpiricalSample, alpha: float) -> float:
    """``sup{x : 1 - F0(x) >= alpha}`` under the empirical CDF of ``s0``.

    The empirical upper tail ``#{v > x}/n`` is a right-continuous step, so the
    set is an open half-line ending at the ``ceil(alpha * n)``-th largest value.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    vals = np.sort(_as_values(s0))
    n = vals.size
    k = math.ceil(alpha * n - 1e-12 * n)
    k = min(max(k, 1), n)
    return float(vals[n - k])


def _count_grid(v0: np.ndarray, v1: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative counts of each class at or above every distinct threshold, high to low."""
    pooled = np.concatenate([v0, v1])
    cuts, inverse = np.unique(pooled, return_inverse=True)
    n0 = v0.size
    c0 = np.bincount(inverse[:n0], minlength=cuts.size)[::-1]
    c1 = np.bincount(inverse[n0:], minlength=cuts.size)[::-1]
    fp = np.concatenate([[0], np.cumsum(c0)])
    tp = np.concatenate([[0], np.cumsum(c1)])
    return fp, tp


def roc_curve(s0: EmpiricalSample, s1: EmpiricalSample) -> RocCurve:
    """Empirical ROC: (false-positive rate, power) of the rule "reject when X >= c".

    One point per distinct pooled value plus the origin. Within a tied
    threshold the curve is bridged by a straight segment.
    """
    v0, v1 = _as_values(s0), _as_values(s1)
    fp, tp = _count_grid(v0, v1)
    n0, n1 = v0.size, v1.size
    # twice the trapezoid area in integer pair counts
    twice_area = int(np.sum(np.diff(fp) * (tp[1:] + tp[:-1])))
    return RocCurve(fp / n0, tp / n1, twice_area / (2 * n0 * n1))


def auc_power_integral(s0: EmpiricalSample, s1: EmpiricalSample) -> float:
    """Average power over alpha uniform on (0, 1) with the sup-threshold rule.

    Integrates ``1 - F1(x(alpha))`` exactly: on each alpha-cell of width 1/n0 the
    threshold is constant. Counts strict exceedances only, so cross-class ties
    contribute nothing.
    """
    v0 = np.sort(_as_values(s0))
    v1 = np.sort(_as_values(s1))
    n0, n1 = v0.size, v1.size
    above = n1 - np.searchsorted(v1, v0, side="right")
    return float(np.sum(above)) / (n0 * n1)


def midranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks with tied values sharing their average rank."""
    order = np.argsort(x, kind="mergesort")
    sorted_x = x[order]
    starts = np.flatnonzero(np.r_[True, sorted_x[1:] != sorted_x[:-1]])
    ends = np.r_[starts[1:], x.size]
    avg = 0.5 * (starts + ends + 1)  # mean of ranks starts+1 .. ends
    ranks = np.empty(x.size)
    ranks[order] = np.repeat(avg, ends - starts)
    return ranks


def auc_mann_whitney(s0: EmpiricalSample, s1: EmpiricalSample) -> float:
    """``P(X0 < X1) + P(X0 = X1)/2`` over all cross-pairs, via rank sums."""
    v0, v1 = _as_values(s0), _as_values(s1)
    n0, n1 = v0.size, v1.size
    ranks = midranks(np.concatenate([v0, v1]))
    # 2 * rank sum is an integer; keep the statistic exact until the final divide
    twice_r1 = int(round(2.0 * float(np.sum(ranks[n0:]))))
    twice_u = twice_r1 - n1 * (n1 + 1)
    return twice_u / (2 * n0 * n1)
