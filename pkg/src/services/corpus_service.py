"""
Corpus Service for invol
Seeded random tame automorphisms with their ground-truth factorizations
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from algebra.endo import Endo, is_jacobian_unit, render_endo
from algebra.poly import Poly
from algebra.tame import Affine, Elementary, Factorization, Triangular
from utils.config import CorpusConfig
from utils.errors import InternalInvariantError
from utils.logger import LoggerMixin, log_performance

# Each corpus entry owns a disjoint block of the Philox counter space
STREAM_STRIDE = 2 ** 192
_U64 = 2 ** 64


class DeterministicRng:
    """Integers from a Philox4x64-10 stream, drawn by rejection sampling on raw words"""

    def __init__(self, seed: int, stream: int = 0):
        self.seed = seed
        self.stream = stream
        self._bit_generator = np.random.Philox(key=seed, counter=stream * STREAM_STRIDE)

    def next_u64(self) -> int:
        return int(self._bit_generator.random_raw())

    def randint(self, low: int, high: int) -> int:
        """Uniform integer in [low, high]"""
        if high < low:
            raise ValueError(f"empty range [{low}, {high}]")
        span = high - low + 1
        limit = (_U64 // span) * span
        while True:
            raw = self.next_u64()
            if raw < limit:
                return low + raw % span

    def nonzero(self, height: int) -> int:
        while True:
            value = self.randint(-height, height)
            if value:
                return value

    def poly(self, degree: int, height: int) -> Poly:
        """Dense random polynomial of total degree <= degree"""
        return Poly.from_terms({
            (i, d - i): self.randint(-height, height)
            for d in range(degree + 1) for i in range(d + 1)
        })


CorpusParams = CorpusConfig


@dataclass(frozen=True)
class CorpusEntry:
    index: int
    endo: Endo
    ground_truth: Factorization
    # (seed, stream) reproduces the entry on its own
    seed_path: Tuple[int, int]


class CorpusService(LoggerMixin):
    """Service generating reproducible tame corpora"""

    def __init__(self, params: CorpusParams):
        self.params = params

    def random_affine(self, rng: DeterministicRng) -> Affine:
        h = self.params.coeff_height
        while True:
            m = [rng.randint(-h, h) for _ in range(4)]
            if m[0] * m[3] - m[1] * m[2] != 0:
                return Affine(*m, rng.randint(-h, h), rng.randint(-h, h))

    def random_triangular(self, rng: DeterministicRng) -> Triangular:
        h = self.params.coeff_height
        degree = rng.randint(min(2, self.params.max_tri_degree), self.params.max_tri_degree)
        p = [rng.randint(-h, h) for _ in range(degree)] + [rng.nonzero(h)]
        return Triangular(a=rng.nonzero(h), c=rng.nonzero(h), d=rng.randint(-h, h), p=tuple(p))

    def random_factors(self, rng: DeterministicRng) -> List[Elementary]:
        if self.params.max_factors == 0:
            return []
        count = rng.randint(1, self.params.max_factors)
        return [self.random_affine(rng) if rng.randint(0, 1) == 0 else self.random_triangular(rng)
                for _ in range(count)]

    def entry(self, index: int) -> CorpusEntry:
        rng = DeterministicRng(self.params.seed, index)
        factors = tuple(self.random_factors(rng)) or (Affine.identity(),)
        ground_truth = Factorization(factors)
        endo = ground_truth.to_endo()
        if not is_jacobian_unit(endo):
            raise InternalInvariantError("corpus entry without a unit Jacobian", endo=render_endo(endo))
        return CorpusEntry(index=index, endo=endo, ground_truth=ground_truth, seed_path=(self.params.seed, index))

    def random_tame(self, count: Optional[int] = None) -> List[CorpusEntry]:
        count = self.params.count if count is None else count
        with log_performance("random_tame", logger_name=__name__, count=count, seed=self.params.seed):
            entries = [self.entry(i) for i in range(count)]
        self.logger.info("Corpus generated", count=len(entries), seed=self.params.seed)
        return entries


def random_tame(params: CorpusParams) -> List[CorpusEntry]:
    return CorpusService(params).random_tame()
