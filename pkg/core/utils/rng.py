import math
import numpy as np

BUFFER_SIZE = 4096


class RandomStream:
    """Seeded, splittable random source.

    Every stream is a PCG64 generator keyed by ``(seed, spawn_key)``. ``split(i)``
    appends ``i`` to the spawn key, so sibling streams are independent and a
    given path of splits always replays the same draws. Scalar draws come out of
    a presampled buffer; a stream must not be shared between threads.
    """

    def __init__(self, seed, spawn_key=()):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.spawn_key = tuple(int(k) for k in spawn_key)
        seq = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        self.generator = np.random.Generator(np.random.PCG64(seq))
        self._buffer = None
        self._pos = BUFFER_SIZE

    def split(self, index):
        return RandomStream(self.seed, self.spawn_key + (int(index),))

    def uniform(self):
        if self._pos >= BUFFER_SIZE:
            self._buffer = self.generator.random(BUFFER_SIZE).tolist()
            self._pos = 0
        u = self._buffer[self._pos]
        self._pos += 1
        return u

    def uniforms(self, size):
        return self.generator.random(size)

    def skip(self, n):
        """Move the generator ``n`` uniform draws ahead without producing them."""
        if n > 0:
            self.generator.bit_generator.advance(n)

    def bernoulli(self, p):
        return self.uniform() < p

    def geometric(self, p):
        """Failures before the first success, P(X=k) = (1-p)^k p."""
        if p >= 1.0:
            return 0
        # 1 - u lies in (0, 1], so the log is finite
        return int(math.floor(math.log1p(-self.uniform()) / math.log1p(-p)))

    def integers(self, low, high=None):
        return int(self.generator.integers(low, high))

    def permutation(self, n):
        return self.generator.permutation(n)

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, spawn_key={self.spawn_key})"
