"""Open state intervals with a distinguished base point."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OutOfDomain

INF = math.inf


@dataclass(frozen=True)
class Interval:
    """Open interval (a, b) with base point e, a < e < b.

    Endpoints may be infinite.  All scale functions constructed on the
    interval vanish at e.
    """

    a: float
    b: float
    e: float = 0.0

    def __post_init__(self):
        if math.isnan(self.a) or math.isnan(self.b) or math.isnan(self.e):
            raise ValueError("interval endpoints must not be NaN")
        if not self.a < self.e < self.b:
            raise ValueError(f"need a < e < b, got ({self.a}, {self.b}) with e={self.e}")

    def contains(self, x: float) -> bool:
        return self.a < x < self.b

    def require(self, x: float) -> float:
        if not self.contains(x):
            raise OutOfDomain(f"x={x} outside ({self.a}, {self.b})")
        return x

    def clip_window(self, radius: float) -> tuple[float, float]:
        """Finite working window: endpoints clipped to +-radius when infinite.

        Finite endpoints are padded inward by a relative hair so grid nodes
        stay strictly inside the open interval.
        """
        lo = -radius if math.isinf(self.a) else self.a + self._pad()
        hi = radius if math.isinf(self.b) else self.b - self._pad()
        if not lo < hi:
            raise ValueError("window collapsed; radius too small for the interval")
        return lo, hi

    def _pad(self) -> float:
        width = self.b - self.a
        if math.isinf(width):
            return 0.0
        return width * 1e-9

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.a) and math.isfinite(self.b)


REAL_LINE = Interval(-INF, INF, 0.0)
