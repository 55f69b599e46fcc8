"""KL divergence between duration distributions and the trend irreversibility index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceUndefinedError, InsufficientDataError, InvalidInputError
from .trends import EmpiricalDistribution, empirical_distribution, extract_trend_durations

DEFAULT_SMOOTHING = 0.5


@dataclass(frozen=True)
class IrreversibilityResult:
    i_t: float
    n_up: int
    n_down: int
    smoothed: bool


def _aligned_masses(p, q, smoothing):
    support = np.union1d(p.support, q.support)

    def expand(d):
        out = np.zeros(support.size)
        out[np.searchsorted(support, d.support)] = d.mass
        return out

    pm, qm = expand(p), expand(q)
    if smoothing == 0:
        return pm, qm
    if p.n_samples is None or q.n_samples is None:
        raise InvalidInputError("smoothing needs distributions estimated from counts")
    pc = pm * p.n_samples + smoothing
    qc = qm * q.n_samples + smoothing
    return pc / pc.sum(), qc / qc.sum()


def kl_divergence(p: EmpiricalDistribution, q: EmpiricalDistribution, smoothing: float = 0.0) -> float:
    """Kullback-Leibler divergence ``D(p || q)`` in nats.

    With ``smoothing > 0`` a pseudo-count is added to both count vectors on
    the union of supports before renormalizing, which keeps the result
    finite when ``p`` sees durations ``q`` never does.
    """
    if smoothing < 0:
        raise InvalidInputError("smoothing must be non-negative")
    pm, qm = _aligned_masses(p, q, smoothing)
    live = pm > 0
    if np.any(qm[live] == 0):
        raise DivergenceUndefinedError("p has mass where q has none; use smoothing > 0")
    d = float(np.sum(pm[live] * np.log(pm[live] / qm[live])))
    # Rounding can leave a tiny negative for identical inputs.
    return max(d, 0.0)


def trend_irreversibility(series, smoothing: float = DEFAULT_SMOOTHING) -> IrreversibilityResult:
    """Trend irreversibility index: ``D(P_up || P_down)`` of a series' run durations."""
    durations = extract_trend_durations(series)
    if durations.up.size == 0 or durations.down.size == 0:
        raise InsufficientDataError(
            f"need both up and down trends (got {durations.up.size} up, {durations.down.size} down)"
        )
    p_up = empirical_distribution(durations.up)
    p_down = empirical_distribution(durations.down)
    return IrreversibilityResult(
        kl_divergence(p_up, p_down, smoothing),
        int(durations.up.size),
        int(durations.down.size),
        smoothing > 0,
    )


def _check_p(p):
    if not 0 < p < 1:
        raise InvalidInputError(f"step probability must lie in (0, 1), got {p}")


def rw_entropy_production(p: float) -> float:
    """Entropy production rate ``(2p-1) ln(p/(1-p))`` of the biased walk on Z."""
    _check_p(p)
    return (2 * p - 1) * np.log(p / (1 - p))


def rw_kl_up_down(p: float) -> float:
    """Closed-form ``D(P_up || P_down)`` for the walk stepping right with probability ``p``."""
    _check_p(p)
    return (2 * p - 1) / (1 - p) * np.log(p / (1 - p))


def rw_kl_down_up(p: float) -> float:
    _check_p(p)
    return (1 - 2 * p) / p * np.log((1 - p) / p)
