"""Minute OHLCV CSV ingestion, gap detection and return imputation.

Exchange exports (CryptoDataDownload style) look like::

    https://www.CryptoDataDownload.com
    unix,date,symbol,open,high,low,close,Volume BTC,Volume USD
    1646092800,2022-03-01 00:00:00,BTC/USD,43178.98,43227.37,43151.89,43189.28,2.3,99362.1

Rows usually arrive newest first. Missing minutes are absent rows.
"""

from __future__ import annotations

import csv
import itertools
import logging
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import IngestError, InsufficientDataError
from .series import MINUTE, LogReturnSeries

log = logging.getLogger(__name__)

FIELDS = ("unix_time", "date", "symbol", "open", "high", "low", "close", "volume_crypto", "volume_quote")
_ALIASES = {
    "unix_time": ("unix", "unix_time", "unix timestamp", "timestamp", "time"),
    "date": ("date", "datetime"),
    "symbol": ("symbol", "pair"),
    "open": ("open",),
    "high": ("high",),
    "low": ("low",),
    "close": ("close",),
}
# Epoch values above this are in milliseconds (year 5138 in seconds).
_MS_CUTOFF = 100_000_000_000
MAX_MALFORMED_FRACTION = 0.5


@dataclass(frozen=True)
class OhlcvRecord:
    unix_time: int
    date: str
    symbol: str
    open: float
    high: float
    low: float
    close: float
    volume_crypto: float = 0.0
    volume_quote: float = 0.0

    def __post_init__(self):
        if min(self.open, self.high, self.low, self.close) <= 0:
            raise ValueError("prices must be positive")
        if self.low > self.high:
            raise ValueError("low exceeds high")
        if self.volume_crypto < 0 or self.volume_quote < 0:
            raise ValueError("volumes must be non-negative")


@dataclass
class ParseResult:
    records: list
    duplicates: int = 0
    row_errors: list = field(default_factory=list)
    source: str | None = None

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]


@dataclass(frozen=True)
class IngestReport:
    rows_read: int
    gaps_found: int
    imputed_fraction: float
    period: tuple
    duplicates: int = 0
    malformed_rows: int = 0
    source: str | None = None

    def to_dict(self):
        d = asdict(self)
        d["period"] = list(self.period)
        return d


def _column_map(header):
    """Map field name -> column index from a header row, with positional fallback."""
    names = [h.strip().lower() for h in header]
    mapping = {}
    for key, aliases in _ALIASES.items():
        for i, name in enumerate(names):
            if name in aliases:
                mapping[key] = i
                break
    volumes = [i for i, name in enumerate(names) if name.startswith("volume")]
    if len(volumes) >= 1:
        mapping["volume_crypto"] = volumes[0]
    if len(volumes) >= 2:
        mapping["volume_quote"] = volumes[1]
    for pos, key in enumerate(FIELDS):
        if key not in mapping and pos < len(names) and pos not in mapping.values():
            mapping[key] = pos
    return mapping


def _parse_row(row, cols):
    def get(key, default=None):
        i = cols.get(key)
        if i is None or i >= len(row) or row[i].strip() == "":
            if default is None:
                raise ValueError(f"missing {key}")
            return default
        return row[i].strip()

    t = float(get("unix_time"))
    if t != int(t):
        raise ValueError("non-integer unix time")
    t = int(t)
    if t > _MS_CUTOFF:
        t //= 1000
    return OhlcvRecord(
        unix_time=t,
        date=get("date", ""),
        symbol=get("symbol", ""),
        open=float(get("open")),
        high=float(get("high")),
        low=float(get("low")),
        close=float(get("close")),
        volume_crypto=float(get("volume_crypto", "0")),
        volume_quote=float(get("volume_quote", "0")),
    )


def parse_csv(source) -> ParseResult:
    """Parse an OHLCV CSV from a path or text stream.

    Records come back sorted by time with duplicate timestamps collapsed to
    the first occurrence in the file. Malformed rows are collected as
    ``(line_number, message)`` and skipped; if more than half the data rows
    are malformed the whole file is rejected.
    """
    if isinstance(source, (str, os.PathLike)):
        name = os.fspath(source)
        try:
            fh = open(source, newline="", encoding="utf-8-sig")
        except OSError as exc:
            raise IngestError(f"cannot read {name}: {exc.strerror or exc}", path=name) from exc
        with fh:
            return _parse_stream(fh, name)
    return _parse_stream(source, getattr(source, "name", None))


def _parse_stream(fh, name):
    head = [line for _, line in zip(range(2), fh)]
    first = 0
    # Skip a banner line (e.g. a URL) whose comma count doesn't match the header's.
    if len(head) == 2 and head[0].count(",") != head[1].count(","):
        first = 1
    reader = csv.reader(itertools.chain(head[first:], fh))
    try:
        header = next(reader)
    except StopIteration:
        return ParseResult([], source=name)
    cols = _column_map(header)

    by_time = {}
    duplicates = 0
    errors = []
    n_rows = 0
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        n_rows += 1
        line_no = first + reader.line_num
        try:
            rec = _parse_row(row, cols)
        except ValueError as exc:
            errors.append((line_no, str(exc)))
            continue
        if rec.unix_time in by_time:
            duplicates += 1
            continue
        by_time[rec.unix_time] = rec

    if n_rows and len(errors) / n_rows > MAX_MALFORMED_FRACTION:
        raise IngestError(
            f"{len(errors)} of {n_rows} rows malformed in {name or 'input'}",
            path=name,
            row_errors=errors,
        )
    for line_no, msg in errors[:20]:
        log.warning("skipping line %d: %s", line_no, msg)
    records = [by_time[t] for t in sorted(by_time)]
    return ParseResult(records, duplicates, errors, name)


def merge_parsed(results):
    """Combine parses of several files (e.g. yearly exports) of one instrument.

    On overlapping timestamps the record from the earlier argument wins.
    """
    by_time = {}
    duplicates = 0
    errors = []
    for res in results:
        duplicates += res.duplicates
        errors.extend(res.row_errors)
        for rec in res.records:
            if rec.unix_time in by_time:
                duplicates += 1
            else:
                by_time[rec.unix_time] = rec
    sources = [r.source for r in results if r.source]
    return ParseResult([by_time[t] for t in sorted(by_time)], duplicates, errors, ";".join(sources) or None)


def build_log_returns_with_imputation(records, seed=0, period_seconds=MINUTE, price="open"):
    """Open-price log returns on a regular minute grid, with gaps imputed.

    Each gap of ``k`` periods between consecutive records gets ``k - 1``
    imputed returns drawn from ``Normal(m, s)``, followed by the observed
    return across the gap. ``m`` and ``s`` are the mean and sample standard
    deviation of all observed returns in the file.

    Returns
    -------
    (LogReturnSeries, IngestReport)
    """
    if isinstance(records, ParseResult):
        parsed = records
    else:
        parsed = ParseResult(list(records))
    recs = parsed.records
    if len(recs) < 2:
        raise InsufficientDataError("need at least 2 records to form a log return")

    ts = np.array([r.unix_time for r in recs], dtype=np.int64)
    px = np.array([getattr(r, price) for r in recs], dtype=float)
    if np.any(np.diff(ts) <= 0):
        # Unsorted input from a caller: sort, keeping the first of any duplicate.
        ts, first = np.unique(ts, return_index=True)
        px = px[first]
    dt = np.diff(ts)
    if np.any(dt % period_seconds):
        bad = int(np.flatnonzero(dt % period_seconds)[0])
        raise IngestError(
            f"timestamp {int(ts[bad + 1])} is off the {period_seconds}s grid",
            path=parsed.source,
        )
    steps = dt // period_seconds
    observed = np.diff(np.log(px))

    total = int(steps.sum())
    values = np.empty(total)
    mask = np.zeros(total, dtype=bool)
    # Observed return i lands on the grid slot of the record that closes it.
    slots = np.cumsum(steps) - 1
    values[slots] = observed
    mask[:] = True
    mask[slots] = False
    gaps = int(total - observed.size)
    if gaps:
        m = float(observed.mean())
        s = float(observed.std(ddof=1)) if observed.size > 1 else 0.0
        rng = np.random.default_rng(seed)
        values[mask] = rng.normal(m, s, gaps) if s > 0 else m

    report = IngestReport(
        rows_read=len(recs),
        gaps_found=gaps,
        imputed_fraction=gaps / (len(recs) + gaps),
        period=(int(ts[0]), int(ts[-1])),
        duplicates=parsed.duplicates,
        malformed_rows=len(parsed.row_errors),
        source=parsed.source,
    )
    series = LogReturnSeries(values, int(ts[0]) + period_seconds, period_seconds, mask)
    return series, report
