"""Generalized binomial distribution for independent, non-identical Bernoulli trials.

The number of successes ``Y`` among ``n`` independent trials with success
probabilities ``(p_1, ..., p_n)`` has pmf given by the coefficients of the
polynomial ``prod_i (1 - p_i + p_i z)``.  All quantities here are exact at
double precision for the small ``n`` this package targets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

__all__ = [
    "ProbabilityVector",
    "SuccessCountPmf",
    "as_probability_vector",
    "success_count_pmf",
    "expected_successes",
    "prob_all_success",
]

# headroom for algebraic identities (sums/products reordered) at n <= 20
PMF_SUM_TOL = 1e-12


def _unit_interval_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must contain at least one entry")
    inside = (arr >= 0.0) & (arr <= 1.0)
    if not inside.all():
        i = int(np.argmin(inside))
        raise ValueError(f"{name}[{i}] = {arr[i]} is outside [0, 1]")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    """Ordered per-item success probabilities, each in [0, 1], length >= 1.

    The underlying array is copied on construction and frozen, so instances
    are immutable and safe to share across threads.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", _unit_interval_array(self.probs, "probs"))

    @property
    def n(self) -> int:
        return self.probs.size

    def __len__(self) -> int:
        return self.probs.size

    def __iter__(self) -> Iterator[float]:
        return iter(self.probs)

    def __getitem__(self, i: int) -> float:
        return float(self.probs[i])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProbabilityVector):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __repr__(self) -> str:
        return f"ProbabilityVector({self.probs.tolist()!r})"


def as_probability_vector(values) -> ProbabilityVector:
    """Coerce an array-like of probabilities into a validated ProbabilityVector."""
    if isinstance(values, ProbabilityVector):
        return values
    return ProbabilityVector(values)


@dataclass(frozen=True, eq=False)
class SuccessCountPmf:
    """Distribution of the total success count: ``mass[k] = P(Y = k)``."""

    mass: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.mass, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("mass must be a one-dimensional array of length n + 1 >= 2")
        if (arr < 0.0).any():
            i = int(np.argmax(arr < 0.0))
            raise ValueError(f"mass[{i}] = {arr[i]} is negative")
        total = float(arr.sum())
        if abs(total - 1.0) > PMF_SUM_TOL:
            raise ValueError(f"mass sums to {total}, expected 1 within {PMF_SUM_TOL}")
        arr.flags.writeable = False
        object.__setattr__(self, "mass", arr)

    @property
    def n(self) -> int:
        """Number of trials the pmf describes."""
        return self.mass.size - 1

    def mean(self) -> float:
        """Expected success count, ``sum_k k * mass[k]``."""
        return float(np.arange(self.mass.size) @ self.mass)

    def __len__(self) -> int:
        return self.mass.size

    def __getitem__(self, k: int) -> float:
        return float(self.mass[k])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuccessCountPmf):
            return NotImplemented
        return np.array_equal(self.mass, other.mass)


def success_count_pmf(pv) -> SuccessCountPmf:
    """Exact pmf of the number of successes, by iterative polynomial convolution.

    Expands ``prod_i (1 - p_i + p_i z)`` one factor at a time; the coefficient
    of ``z^k`` is ``P(Y = k)``.  O(n^2), deterministic.

    >>> success_count_pmf([0.5, 0.5]).mass.tolist()
    [0.25, 0.5, 0.25]
    """
    pv = as_probability_vector(pv)
    mass = np.ones(1)
    for p in pv.probs:
        mass = np.convolve(mass, np.array([1.0 - p, p]))
    return SuccessCountPmf(mass)


def expected_successes(pv) -> float:
    """Expected number of successes: ``sum_i p_i`` (order-invariant)."""
    pv = as_probability_vector(pv)
    return float(np.sum(pv.probs))


def prob_all_success(pv) -> float:
    """Probability that every trial succeeds: ``prod_i p_i`` (order-invariant)."""
    pv = as_probability_vector(pv)
    return float(np.prod(pv.probs))
