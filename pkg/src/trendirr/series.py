"""Core series containers, log returns and sign binarization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

MINUTE = 60


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PriceSeries:
    """Strictly time-ordered positive prices on integer epoch-second stamps."""

    timestamps: np.ndarray
    prices: np.ndarray
    symbol: str | None = None
    period_seconds: int = MINUTE

    def __post_init__(self):
        ts = _frozen(self.timestamps, np.int64)
        px = _frozen(self.prices, np.float64)
        if ts.ndim != 1 or px.ndim != 1 or ts.size != px.size:
            raise InvalidInputError("timestamps and prices must be 1-d and of equal length")
        if ts.size > 1 and np.any(np.diff(ts) <= 0):
            raise InvalidInputError("timestamps must be strictly increasing")
        if np.any(~np.isfinite(px)) or np.any(px <= 0):
            raise InvalidInputError("prices must be finite and strictly positive")
        if self.period_seconds <= 0:
            raise InvalidInputError("period_seconds must be positive")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "prices", px)

    def __len__(self):
        return self.prices.size


@dataclass(frozen=True)
class LogReturnSeries:
    values: np.ndarray
    start_timestamp: int = 0
    period_seconds: int = MINUTE
    imputed_mask: np.ndarray | None = field(default=None)

    def __post_init__(self):
        v = _frozen(self.values, np.float64)
        if v.ndim != 1:
            raise InvalidInputError("values must be 1-d")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("log returns must be finite")
        mask = np.zeros(v.size, bool) if self.imputed_mask is None else self.imputed_mask
        mask = _frozen(mask, bool)
        if mask.shape != v.shape:
            raise InvalidInputError("imputed_mask must match values in length")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "imputed_mask", mask)
        object.__setattr__(self, "start_timestamp", int(self.start_timestamp))

    def __len__(self):
        return self.values.size

    def timestamp_at(self, i):
        return self.start_timestamp + i * self.period_seconds

    def slice(self, start, stop):
        return LogReturnSeries(
            self.values[start:stop],
            self.timestamp_at(start),
            self.period_seconds,
            self.imputed_mask[start:stop],
        )


@dataclass(frozen=True)
class BinarySeries:
    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits)
        if b.ndim != 1:
            raise InvalidInputError("bits must be 1-d")
        if b.size and not np.all((b == 0) | (b == 1)):
            raise InvalidInputError("bits must be 0 or 1")
        object.__setattr__(self, "bits", _frozen(b, np.uint8))

    def __len__(self):
        return self.bits.size


def log_returns(p: PriceSeries) -> LogReturnSeries:
    """Natural-log returns ``ln(P[i+1] / P[i])`` of a price series."""
    if len(p) < 2:
        raise InvalidInputError("need at least 2 prices to form a log return")
    values = np.diff(np.log(p.prices))
    return LogReturnSeries(values, int(p.timestamps[1]), p.period_seconds)


def binarize(r) -> BinarySeries:
    """Map each return to 1 if strictly positive, else 0 (zero maps to 0).

    Accepts a :class:`LogReturnSeries` or any 1-d array of reals.
    """
    values = r.values if isinstance(r, LogReturnSeries) else np.asarray(r, dtype=float)
    if values.size == 0:
        raise InvalidInputError("cannot binarize an empty series")
    return BinarySeries((values > 0).astype(np.uint8))
