"""Deterministic 64-bit word streams keyed by (master seed, stream index)."""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_FRACTION_SCALE = 2.0**-53


class RandomSource:
    """A Philox stream identified by ``(seed, index, *path)``.

    Identical keys give identical word sequences. Distinct keys are spawned through
    ``SeedSequence.spawn_key`` and treated as independent. ``child(i)`` derives the
    per-walk sub-stream used inside one replicate.
    """

    def __init__(self, seed: int, index: int = 0, path: tuple[int, ...] = ()):
        self.seed = int(seed) & _MASK64
        self.index = int(index) & _MASK64
        self.path = tuple(int(p) for p in path)
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.index, *self.path))
        self._bit_generator = np.random.Philox(sequence)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, index={self.index}, path={self.path})"

    def child(self, i: int) -> "RandomSource":
        return RandomSource(self.seed, self.index, (*self.path, i))

    def words(self, count: int) -> np.ndarray:
        """The next ``count`` raw uint64 words of the stream."""
        if count <= 0:
            return np.empty(0, dtype=np.uint64)
        return np.asarray(self._bit_generator.random_raw(count), dtype=np.uint64)

    def word(self) -> int:
        return int(self.words(1)[0])

    @staticmethod
    def fractions(words: np.ndarray) -> np.ndarray:
        """Uniform [0, 1) values from the top 53 bits of each word."""
        return (np.asarray(words, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * _FRACTION_SCALE

    @staticmethod
    def hold_bits(words: np.ndarray) -> np.ndarray:
        """Bit 0 of each word; 1 means the lazy walk holds."""
        return (np.asarray(words, dtype=np.uint64) & np.uint64(1)).astype(bool)

    def uniform_indices(self, count: int, size: int) -> np.ndarray:
        """``count`` indices in [0, size), one word each, without rejection."""
        frac = self.fractions(self.words(count))
        return np.minimum((frac * size).astype(np.int64), size - 1)
