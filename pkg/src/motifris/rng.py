"""Deterministic random-stream plumbing built on numpy's SeedSequence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by (master_seed, stream_index).

    Distinct (master_seed, stream_index) pairs yield statistically
    independent generators; equal pairs reproduce identical sequences.
    ``child`` extends the index path, so sub-streams for parallel or
    per-phase work can be derived without any coordination.
    """

    master_seed: int
    stream_index: tuple[int, ...] = ()

    def __post_init__(self):
        if isinstance(self.stream_index, int):
            object.__setattr__(self, "stream_index", (self.stream_index,))
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")

    def child(self, *indices: int) -> "RngStream":
        return RngStream(self.master_seed, self.stream_index + tuple(indices))

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=self.stream_index)
        return np.random.default_rng(seq)

    def kernel_seed(self) -> int:
        """31-bit seed for jitted kernels that reseed their own RNG state."""
        return int(self.generator().integers(0, 2**31 - 1))
