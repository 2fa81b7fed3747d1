"""Seeded random streams with exact rational decisions.

A draw compares a uniform variable U, revealed 64 bits at a time, with
rational thresholds.  Most draws are settled by the first word against
double-precision copies of the thresholds.  When the word lands within
``EPS`` of a threshold the exact thresholds are fetched and further bits
are revealed until the dyadic interval holding U sits strictly inside one
outcome.  The result is exactly the categorical law of the rationals.
"""
from __future__ import annotations

import random
from bisect import bisect_right
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = ["ExactRng", "CumTable", "derive_seed", "EPS"]

EPS = 1e-9
_TWO64 = float(2 ** 64)


def derive_seed(seed: int, *path: int) -> int:
    """Independent 256-bit seed for worker/sample ``path`` under ``seed``."""
    ss = np.random.SeedSequence(int(seed) & (2 ** 64 - 1), spawn_key=tuple(int(p) for p in path))
    words = ss.generate_state(4, dtype=np.uint64)
    out = 0
    for w in words:
        out = (out << 64) | int(w)
    return out


class CumTable:
    """Cumulative thresholds c_1 < ... < c_{K-1} of a K-outcome law.

    ``approx`` holds floats within EPS/10 of the exact values; ``exact`` is a
    zero-argument callable returning the Fractions, evaluated on demand.
    """

    __slots__ = ("approx", "_exact_fn", "_exact")

    def __init__(self, approx: Sequence[float], exact: Callable[[], Sequence[Fraction]]):
        self.approx = list(approx)
        self._exact_fn = exact
        self._exact = None

    @classmethod
    def from_probs(cls, probs: Sequence[Fraction]) -> "CumTable":
        cum = []
        acc = Fraction(0)
        for p in probs[:-1]:
            acc += p
            cum.append(acc)
        return cls([float(c) for c in cum], lambda: cum)

    @property
    def exact(self) -> list:
        if self._exact is None:
            self._exact = list(self._exact_fn())
        return self._exact


class ExactRng:
    """Deterministic stream: identical seed gives identical draws everywhere.

    The word source is Python's Mersenne Twister seeded with a 256-bit
    value derived from (seed, path) through numpy's SeedSequence.
    """

    def __init__(self, seed: int = 0, *path: int):
        self.seed = int(seed)
        self.path = tuple(path)
        self._r = random.Random(derive_seed(seed, *path))
        self.exact_fallbacks = 0

    def spawn(self, *path: int) -> "ExactRng":
        return ExactRng(self.seed, *(self.path + tuple(path)))

    def word(self) -> int:
        return self._r.getrandbits(64)

    def randrange(self, n: int) -> int:
        """Exactly uniform integer in [0, n)."""
        return self._r.randrange(n)

    def random_float(self) -> float:
        return self._r.random()

    def bernoulli(self, p: Fraction) -> bool:
        """True with probability exactly p."""
        p = Fraction(p)
        num, den = p.numerator, p.denominator
        w = self.word()
        bits = 64
        while True:
            # U in [w/2^bits, (w+1)/2^bits)
            lo = w * den
            scaled = num << bits
            if (w + 1) * den <= scaled:
                return True
            if lo >= scaled:
                return False
            w = (w << 64) | self.word()
            bits += 64

    def choose(self, table: CumTable) -> int:
        """Index i with c_i <= U < c_{i+1} (c_0 = 0, c_K = 1)."""
        w = self.word()
        x = w / _TWO64
        approx = table.approx
        i = bisect_right(approx, x)
        if (i == 0 or x - approx[i - 1] > EPS) and (i == len(approx) or approx[i] - x > EPS):
            return i
        return self._refine(w, table.exact)

    def choose_probs(self, probs: Sequence[Fraction]) -> int:
        return self.choose(CumTable.from_probs(list(probs)))

    def _refine(self, w: int, cum: Sequence[Fraction]) -> int:
        self.exact_fallbacks += 1
        bits = 64
        while True:
            lo = Fraction(w, 1 << bits)
            hi = Fraction(w + 1, 1 << bits)
            i = bisect_right(cum, lo)
            if i == len(cum) or hi <= cum[i]:
                return i
            w = (w << 64) | self.word()
            bits += 64

    def uniform_below(self, p_approx: float, p_exact: Callable[[], Fraction]) -> bool:
        """U < p with p known approximately (error < EPS/10) and exactly on demand."""
        w = self.word()
        x = w / _TWO64
        if abs(x - p_approx) > EPS:
            return x < p_approx
        self.exact_fallbacks += 1
        p = Fraction(p_exact())
        bits = 64
        while True:
            if (w + 1) * p.denominator <= p.numerator << bits:
                return True
            if w * p.denominator >= p.numerator << bits:
                return False
            w = (w << 64) | self.word()
            bits += 64
