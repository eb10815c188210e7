"""Gray-code enumeration of canonical sign vectors and their sums.

A canonical sign vector has ``eps[0] = +1``; there are ``2**(n-1)`` of them.
The free indices ``1..n-1`` are split into a *high* part walked one flip at a
time (running sum updated in O(n)) and a *low* block whose ``2**L`` partial
sums are tabulated once in Gray order and added to every high state.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

BLOCK_BITS = 13


def gray(i: int) -> int:
    return i ^ (i >> 1)


@lru_cache(maxsize=32)
def gray_sign_matrix(m: int) -> np.ndarray:
    """``(2**m, m)`` array of +/-1 rows in Gray order; bit b set means minus at column b."""
    codes = np.arange(2**m, dtype=np.int64)
    codes ^= codes >> 1
    bits = (codes[:, None] >> np.arange(m)) & 1
    out = (1 - 2 * bits).astype(np.int8)
    out.setflags(write=False)
    return out


class SignBlocks:
    """Iterate over all canonical sign sums of ``rows`` block by block.

    Each item is ``(high_signs, base)``: the signs for indices
    ``1..h`` and the partial sum ``rows[0] + sum(high_signs * rows[1:h+1])``.
    The full sums for the block are ``base + self.low_sums``.
    """

    def __init__(self, rows: np.ndarray, block_bits: int = BLOCK_BITS):
        rows = np.asarray(rows, dtype=float)
        self.rows = rows
        self.n = n = rows.shape[0]
        free = n - 1
        self.low_bits = min(free, block_bits)
        self.high_bits = free - self.low_bits
        self.low_signs = gray_sign_matrix(self.low_bits)
        low_rows = rows[1 + self.high_bits:]
        self.low_sums = self.low_signs.astype(float) @ low_rows if self.low_bits else np.zeros((1, rows.shape[1]))
        if not self.low_bits:
            self.low_signs = np.zeros((1, 0), dtype=np.int8)

    def __len__(self):
        return 2**self.high_bits

    def __iter__(self):
        h = self.high_bits
        signs = np.ones(h, dtype=np.int8)
        base = self.rows[0] + self.rows[1:1 + h].sum(axis=0)
        yield signs.copy(), base.copy()
        prev = 0
        for i in range(1, 2**h):
            code = gray(i)
            b = (code ^ prev).bit_length() - 1
            prev = code
            # flipping index 1+b moves the sum by -2 * old_sign * row
            base -= 2.0 * signs[b] * self.rows[1 + b]
            signs[b] = -signs[b]
            yield signs.copy(), base.copy()

    def full_signs(self, high_signs: np.ndarray, low_index: int) -> np.ndarray:
        return np.concatenate(([1], high_signs, self.low_signs[low_index])).astype(np.int8)


def sign_bits(eps) -> tuple[int, ...]:
    """Lexicographic key of a sign vector: ``+`` sorts before ``-``."""
    return tuple(int(e < 0) for e in eps)
