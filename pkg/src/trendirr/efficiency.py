"""Block-entropy inefficiency index over sign-binarized returns.

``I = ln 2 + H(L) - H(L+1)`` compares the entropy of (L+1)-blocks with
what it would be if the next sign were a fair coin independent of the
previous L. It is 0 for an unpredictable sign process and reaches ln 2
when the next sign is fully determined by the past L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidInputError
from .series import BinarySeries

LN2 = float(np.log(2.0))
DEFAULT_BLOCK_LENGTH = 2


@dataclass(frozen=True)
class BlockEntropyTable:
    block_length: int
    counts: dict
    total: int

    def entropy(self):
        return _entropy_from_counts(np.fromiter(self.counts.values(), dtype=float), self.total)


@dataclass(frozen=True)
class InefficiencyResult:
    i_star: float
    l: int
    n_blocks: int


def _bits(bits):
    b = bits.bits if isinstance(bits, BinarySeries) else BinarySeries(bits).bits
    return b.astype(np.int64)


def _block_codes(b, l):
    if l < 1:
        raise InvalidInputError("block length must be a positive integer")
    if l > 62:
        raise InvalidInputError("block length above 62 is not supported")
    if b.size < l:
        raise InsufficientDataError(f"series of length {b.size} is shorter than block length {l}")
    n = b.size - l + 1
    codes = np.zeros(n, dtype=np.int64)
    for j in range(l):
        codes = (codes << 1) | b[j : j + n]
    return codes


def _pattern_counts(codes, l):
    if l <= 20:
        c = np.bincount(codes, minlength=1 << l)
        return c[c > 0]
    return np.unique(codes, return_counts=True)[1]


def block_table(bits, l: int) -> BlockEntropyTable:
    """Overlapping (stride 1) counts of every length-``l`` bit pattern."""
    codes = _block_codes(_bits(bits), l)
    keys, counts = np.unique(codes, return_counts=True)
    table = {format(int(k), f"0{l}b"): int(c) for k, c in zip(keys, counts)}
    return BlockEntropyTable(l, table, int(codes.size))


def block_entropy(bits, l: int) -> float:
    """Plug-in Shannon entropy (nats) of overlapping length-``l`` blocks."""
    codes = _block_codes(_bits(bits), l)
    return _entropy_from_counts(_pattern_counts(codes, l), codes.size)


def _entropy_from_counts(counts, total):
    # Sorted so the value depends only on the multiset of counts; relabeling
    # patterns (e.g. flipping every bit) then gives a bit-identical entropy.
    p = np.sort(counts) / total
    return float(-np.sum(p * np.log(p)))


def inefficiency_index(bits, l: int = DEFAULT_BLOCK_LENGTH) -> InefficiencyResult:
    b = _bits(bits)
    if b.size < l + 1:
        raise InsufficientDataError(f"need at least {l + 1} bits for block length {l}")
    # L-blocks are taken from bits[:-1] so each has a successor; their counts
    # are then the exact marginal of the (L+1)-block counts and 0 <= I <= ln 2.
    h_l = block_entropy(b[:-1], l)
    h_next = block_entropy(b, l + 1)
    return InefficiencyResult(LN2 + (h_l - h_next), l, int(b.size - l))
