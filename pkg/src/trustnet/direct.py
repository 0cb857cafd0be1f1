"""Direct trust: time-discounted average of a trustor's own ratings.

Ratings on the requested category are preferred; when none exist the value
falls back to the mean of the per-category averages over the other
categories the pair interacted on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import AgentId, Interaction, TaskCategory


class DirectTrustSource(enum.Enum):
    SAME_CATEGORY = "same_category"
    CROSS_CATEGORY = "cross_category"
    NONE = "none"


@dataclass(frozen=True)
class DirectTrustResult:
    """Outcome of a direct-trust query.

    ``n_same`` counts the pair's interactions on the requested category
    before the evaluation time; ``n_other`` counts those on every other
    category.  ``value`` is None exactly when both counts are zero.
    """

    value: Optional[float]
    source: DirectTrustSource
    n_same: int
    n_other: int


def decay_weight(time: float, eval_time: float, decay_rate: float) -> float:
    """Discount factor exp(-decay_rate * (eval_time - time)).

    Equals 1 at zero elapsed time or zero rate; the caller is responsible
    for filtering out interactions at or after ``eval_time``.
    """
    return math.exp(-decay_rate * (eval_time - time))


def _weighted_mean(pairs: list[tuple[float, float]], eval_time: float, decay_rate: float) -> float:
    weights = [decay_weight(t, eval_time, decay_rate) for _, t in pairs]
    num = sum(r * w for (r, _), w in zip(pairs, weights))
    return num / sum(weights)


def direct_trust(
    log: Sequence[Interaction],
    trustor: AgentId,
    trustee: AgentId,
    category: TaskCategory,
    eval_time: float,
    decay_rate: float,
) -> DirectTrustResult:
    """Direct trust of ``trustor`` in ``trustee`` for ``category``.

    Same-category ratings before ``eval_time`` are combined by a
    discount-weighted mean.  With none available, each other category's
    ratings are averaged the same way and the per-category values are then
    averaged unweighted (a category counts once regardless of volume).
    """
    same: list[tuple[float, float]] = []
    others: dict[TaskCategory, list[tuple[float, float]]] = {}
    for r in log:
        if r.trustor != trustor or r.trustee != trustee or r.time >= eval_time:
            continue
        if r.category == category:
            same.append((r.rating, r.time))
        else:
            others.setdefault(r.category, []).append((r.rating, r.time))

    n_other = sum(len(v) for v in others.values())
    if same:
        value = _weighted_mean(same, eval_time, decay_rate)
        return DirectTrustResult(value, DirectTrustSource.SAME_CATEGORY, len(same), n_other)
    if others:
        per_cat = [
            _weighted_mean(others[cat], eval_time, decay_rate) for cat in sorted(others)
        ]
        value = sum(per_cat) / len(per_cat)
        return DirectTrustResult(value, DirectTrustSource.CROSS_CATEGORY, 0, n_other)
    return DirectTrustResult(None, DirectTrustSource.NONE, 0, 0)
