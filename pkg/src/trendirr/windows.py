"""Sliding-window evolution of the irreversibility and inefficiency indices."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .divergence import DEFAULT_SMOOTHING
from .efficiency import DEFAULT_BLOCK_LENGTH
from .errors import InsufficientDataError, InvalidInputError, UndefinedCorrelationError
from .series import LogReturnSeries
from .surrogate import significance_test

WINDOW_MINUTES = 91 * 24 * 60
STEP_MINUTES = 10 * 24 * 60


@dataclass(frozen=True)
class WindowConfig:
    window_minutes: int = WINDOW_MINUTES
    step_minutes: int = STEP_MINUTES
    alpha: float = 0.05
    n_surrogates: int = 100
    l: int = DEFAULT_BLOCK_LENGTH
    smoothing: float = DEFAULT_SMOOTHING
    seed: int = 0

    def __post_init__(self):
        if self.window_minutes <= 0 or self.step_minutes <= 0 or self.n_surrogates <= 0 or self.l <= 0:
            raise InvalidInputError("window, step, surrogate count and block length must be positive")
        if self.step_minutes > self.window_minutes:
            raise InvalidInputError("step_minutes must not exceed window_minutes")
        if not 0 < self.alpha < 1:
            raise InvalidInputError("alpha must lie in (0, 1)")
        if self.smoothing < 0:
            raise InvalidInputError("smoothing must be non-negative")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class WindowResult:
    window_index: int
    window_start: int
    i_t: float
    i_t_threshold: float
    i_star: float
    i_star_threshold: float

    @property
    def i_t_significant(self):
        return bool(self.i_t > self.i_t_threshold)

    @property
    def i_star_significant(self):
        return bool(self.i_star > self.i_star_threshold)


def window_seed(seed, index):
    """Seed for window ``index``; depends only on ``(seed, index)``."""
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1)[0])


def window_offsets(n, window, step):
    if n < window:
        raise InsufficientDataError(f"series of {n} returns is shorter than one window of {window}")
    return range(0, n - window + 1, step)


def _analyze_window(values, index, start, cfg):
    seed = window_seed(cfg.seed, index)
    common = dict(n_surrogates=cfg.n_surrogates, alpha=cfg.alpha, seed=seed, smoothing=cfg.smoothing, l=cfg.l)
    try:
        trend = significance_test(values, "trend_irreversibility", **common)
        i_t, i_t_thr = trend.observed, trend.threshold_95
    except InsufficientDataError:
        # Index undefined on this window (e.g. no downtrends at all).
        i_t = i_t_thr = math.nan
    ineff = significance_test(values, "inefficiency", **common)
    return WindowResult(index, start, i_t, i_t_thr, ineff.observed, ineff.threshold_95)


def _analyze_packed(args):
    return _analyze_window(*args)


def run_windows(returns, cfg: WindowConfig = WindowConfig(), workers=1):
    """Evaluate both indices and their surrogate thresholds on every full window.

    Windows start at offsets ``0, step, 2*step, ...``; a trailing partial
    window is dropped. Output is identical for any ``workers``.
    """
    if not isinstance(returns, LogReturnSeries):
        returns = LogReturnSeries(np.asarray(returns, dtype=float))
    values = returns.values
    offsets = window_offsets(values.size, cfg.window_minutes, cfg.step_minutes)
    jobs = [
        (values[o : o + cfg.window_minutes], i, returns.timestamp_at(o), cfg)
        for i, o in enumerate(offsets)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_analyze_packed, jobs))
    return [_analyze_window(*job) for job in jobs]


def pearson_correlation(a, b) -> float:
    """Sample Pearson correlation coefficient."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidInputError("inputs must be 1-d sequences of equal length")
    if a.size < 2:
        raise InsufficientDataError("need at least 2 points for a correlation")
    da = a - a.mean()
    db = b - b.mean()
    sa = math.sqrt(float(da @ da))
    sb = math.sqrt(float(db @ db))
    if sa == 0 or sb == 0:
        raise UndefinedCorrelationError("correlation undefined for a constant sequence")
    r = float(da @ db) / (sa * sb)
    return max(-1.0, min(1.0, r))
