"""Segmentation of a series into maximal up/down/constant runs.

A run is a maximal block of consecutive first differences sharing a sign.
Its duration is the number of steps it spans, so the durations of all
runs partition the ``len(series) - 1`` differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidInputError


@dataclass(frozen=True)
class TrendDurations:
    up: np.ndarray
    down: np.ndarray
    constant: np.ndarray

    @property
    def n_steps(self):
        return int(self.up.sum() + self.down.sum() + self.constant.sum())


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Probability mass over positive integer durations.

    ``n_samples`` is the number of observations the masses were estimated
    from; it is ``None`` for analytic (exact) distributions and is required
    for pseudo-count smoothing.
    """

    support: np.ndarray
    mass: np.ndarray
    n_samples: int | None = None

    def __post_init__(self):
        support = np.asarray(self.support, dtype=np.int64)
        mass = np.asarray(self.mass, dtype=np.float64)
        if support.ndim != 1 or support.shape != mass.shape or support.size == 0:
            raise InvalidInputError("support and mass must be non-empty 1-d arrays of equal length")
        if np.any(np.diff(support) <= 0):
            raise InvalidInputError("support must be sorted without duplicates")
        if np.any(support < 1):
            raise InvalidInputError("durations must be positive integers")
        if np.any(mass <= 0) or abs(mass.sum() - 1.0) > 1e-12:
            raise InvalidInputError("masses must be strictly positive and sum to 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", mass)

    @property
    def counts(self):
        if self.n_samples is None:
            return None
        return self.mass * self.n_samples

    def pmf(self, n):
        """Mass at duration ``n`` (0 off the support)."""
        i = np.searchsorted(self.support, n)
        if i < self.support.size and self.support[i] == n:
            return float(self.mass[i])
        return 0.0

    @classmethod
    def from_pmf(cls, pmf, support=None):
        """Build an exact distribution from masses, renormalizing and dropping zeros."""
        pmf = np.asarray(pmf, dtype=float)
        if support is None:
            support = np.arange(1, pmf.size + 1)
        support = np.asarray(support)
        keep = pmf > 0
        mass = pmf[keep] / pmf[keep].sum()
        mass = mass / mass.sum()
        return cls(support[keep], mass)


def sign_runs(series):
    """Return ``(signs, lengths)`` of the maximal runs of ``sign(diff(series))``."""
    x = np.asarray(series, dtype=float)
    if x.ndim != 1:
        raise InvalidInputError("series must be 1-d")
    if x.size < 2:
        raise InvalidInputError("need at least 2 points to form a trend")
    s = np.sign(np.diff(x)).astype(np.int8)
    starts = np.flatnonzero(np.r_[True, s[1:] != s[:-1]])
    lengths = np.diff(np.r_[starts, s.size])
    return s[starts], lengths


def extract_trend_durations(series) -> TrendDurations:
    signs, lengths = sign_runs(series)
    return TrendDurations(
        up=lengths[signs > 0],
        down=lengths[signs < 0],
        constant=lengths[signs == 0],
    )


def empirical_distribution(durations) -> EmpiricalDistribution:
    d = np.asarray(durations, dtype=np.int64)
    if d.size == 0:
        raise InsufficientDataError("no durations to estimate a distribution from")
    if np.any(d < 1):
        raise InvalidInputError("durations must be positive")
    support, counts = np.unique(d, return_counts=True)
    return EmpiricalDistribution(support, counts / d.size, int(d.size))


def geometric_trend_pmf(p, kmax=200):
    """Exact uptrend law of the biased walk, ``P(n) = p**(n-1) * (1-p)`` for n >= 1.

    Truncated at ``kmax`` and renormalized. Counted in steps, this is the
    walk's ``p**n (1-p)`` law over n >= 0 shifted by one, which leaves
    every divergence between two such laws unchanged.
    """
    n = np.arange(1, kmax + 1)
    return EmpiricalDistribution.from_pmf(p ** (n - 1) * (1 - p), n)
