"""Single-pass per-feature statistics backing the adaptive selection weights.

Keeps count, mean, sum of squared deviations (Welford's recurrence), and the
observed min/max, which is enough to produce the min-max-rescaled sample
variance without retaining raw values: min-max normalization is affine, so
the rescaled variance equals raw-variance / range**2 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass
class FeatureStats:
    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    min: float = math.inf
    max: float = -math.inf

    def observe(self, value: float) -> None:
        """Fold one observed value into the running statistics."""
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"observed value must be finite, got {value}")
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)
        if value < self.min:
            self.min = value
        if value > self.max:
            self.max = value

    def variance(self) -> float | None:
        """Sample variance (n-1 denominator); None while count < 2."""
        if self.count < 2:
            return None
        return self.m2 / (self.count - 1)

    def rescaled_variance(self) -> float | None:
        """Sample variance of the values after min-max rescaling to [0, 1].

        Returns None while fewer than two values have been seen and 0.0 when
        all values are identical (zero range).
        """
        if self.count < 2:
            return None
        spread = self.max - self.min
        if spread == 0.0:
            return 0.0
        # divide twice: spread * spread could underflow for denormal spreads
        return self.m2 / (self.count - 1) / spread / spread
