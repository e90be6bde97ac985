"""Weighted multi-criteria scoring of decision sequences.

Criteria are min-max normalized so that 1 is always best: yield is a benefit
criterion, step count and duration are costs. When every sequence shares the
same value for a criterion the normalized value is 0.5 for all of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyInputListError, InvalidWeightsError
from .routetree import DecisionSequence

_WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class CriteriaWeights:
    w_steps: float
    w_duration: float
    w_yield: float

    def __post_init__(self) -> None:
        for name in ("w_steps", "w_duration", "w_yield"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidWeightsError(f"{name}={value} outside [0, 1]")
        total = self.w_steps + self.w_duration + self.w_yield
        if abs(total - 1.0) > _WEIGHT_SUM_TOL:
            raise InvalidWeightsError(f"weights must sum to 1, got {total}")


@dataclass(frozen=True)
class RankEntry:
    leaf_id: str
    steps: int
    total_yield: float
    total_duration: float
    norm_steps: float
    norm_yield: float
    norm_duration: float
    weighted_score: float
    rank: int


def _normalize(values: list[float], benefit: bool) -> list[float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        return [0.5] * len(values)
    span = hi - lo
    if benefit:
        return [(v - lo) / span for v in values]
    return [(hi - v) / span for v in values]


def normalize_criteria(
    sequences: Sequence[DecisionSequence],
) -> list[tuple[float, float, float]]:
    """Per-sequence (steps, yield, duration) normalized to [0, 1], 1 = best."""
    if not sequences:
        raise EmptyInputListError("no decision sequences to normalize")
    norm_steps = _normalize([float(s.steps) for s in sequences], benefit=False)
    norm_yield = _normalize([float(s.total_yield) for s in sequences], benefit=True)
    norm_duration = _normalize(
        [float(s.total_duration) for s in sequences], benefit=False
    )
    return list(zip(norm_steps, norm_yield, norm_duration))


def score(
    sequences: Sequence[DecisionSequence], weights: CriteriaWeights
) -> list[RankEntry]:
    """Rank sequences by weighted normalized score, best first.

    Ties break toward higher total yield, then fewer steps, then leaf id.
    """
    normalized = normalize_criteria(sequences)
    scored = []
    for seq, (n_steps, n_yield, n_duration) in zip(sequences, normalized):
        weighted = (
            weights.w_steps * n_steps
            + weights.w_yield * n_yield
            + weights.w_duration * n_duration
        )
        scored.append((seq, n_steps, n_yield, n_duration, weighted))
    scored.sort(
        key=lambda item: (-item[4], -item[0].total_yield, item[0].steps, item[0].leaf_id)
    )
    entries = []
    for position, (seq, n_steps, n_yield, n_duration, weighted) in enumerate(scored, 1):
        entries.append(
            RankEntry(
                leaf_id=seq.leaf_id,
                steps=seq.steps,
                total_yield=float(seq.total_yield),
                total_duration=float(seq.total_duration),
                norm_steps=n_steps,
                norm_yield=n_yield,
                norm_duration=n_duration,
                weighted_score=weighted,
                rank=position,
            )
        )
    return entries
