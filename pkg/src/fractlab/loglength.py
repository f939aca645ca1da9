"""Log-domain lengths.

Every length in this package is a nonnegative real stored as its natural
logarithm, with ``-inf`` as the exact-zero sentinel.  Rule-generated gap
sequences decay like ``2**(-k**3)``, far below the smallest positive double,
so plain floats are unusable for gap magnitudes; ordering, products, powers
and stable sums all happen in log space instead.

Accuracy contract: ``LogLength.sum`` over n terms is computed by a single
max-normalised ``math.fsum`` reduction whose algorithmic relative error is
at most ``n * 2**-50`` (in practice a few ulp).  Storing the result as a
64-bit log adds one quantisation of ``ulp(|log|)`` on top, which dominates
for logs of magnitude above ~2**35; tolerances downstream account for both.
The reduction is a pure function of the input multiset, so repeated
evaluation is bit-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

LOG_ZERO = float("-inf")
LN2 = math.log(2.0)


@dataclass(frozen=True, slots=True)
class LogLength:
    """A value in [0, inf) stored as its natural log (-inf encodes 0)."""

    log: float

    def __post_init__(self) -> None:
        if math.isnan(self.log):
            raise ValueError("LogLength log value is NaN")
        if self.log == math.inf:
            raise ValueError("LogLength cannot be infinite")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LogLength":
        return cls(LOG_ZERO)

    @classmethod
    def one(cls) -> "LogLength":
        return cls(0.0)

    @classmethod
    def from_value(cls, x: float) -> "LogLength":
        if x < 0:
            raise ValueError(f"length must be nonnegative, got {x}")
        if x == 0:
            return cls(LOG_ZERO)
        return cls(math.log(x))

    @classmethod
    def from_log2(cls, log2_value: float) -> "LogLength":
        return cls(log2_value * LN2)

    # -- accessors ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.log == LOG_ZERO

    @property
    def log2(self) -> float:
        return self.log / LN2

    def value(self) -> float:
        """Decimal value; underflows to 0.0 below roughly 2**-1074."""
        return math.exp(self.log)

    # -- ordering (same order as the represented lengths) -------------------

    def __lt__(self, other: "LogLength") -> bool:
        return self.log < other.log

    def __le__(self, other: "LogLength") -> bool:
        return self.log <= other.log

    def __gt__(self, other: "LogLength") -> bool:
        return self.log > other.log

    def __ge__(self, other: "LogLength") -> bool:
        return self.log >= other.log

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "LogLength") -> "LogLength":
        a, b = self.log, other.log
        if b == LOG_ZERO:
            return self
        if a == LOG_ZERO:
            return other
        if a < b:
            a, b = b, a
        return LogLength(a + math.log1p(math.exp(b - a)))

    def __sub__(self, other: "LogLength") -> "LogLength":
        a, b = self.log, other.log
        if b == LOG_ZERO:
            return self
        if b > a:
            raise ValueError("LogLength subtraction would be negative")
        d = b - a
        if d == 0.0 or math.exp(d) == 1.0:
            return LogLength(LOG_ZERO)
        if d > -LN2:
            return LogLength(a + math.log(-math.expm1(d)))
        return LogLength(a + math.log1p(-math.exp(d)))

    def __mul__(self, other: "LogLength") -> "LogLength":
        if self.is_zero or other.is_zero:
            return LogLength(LOG_ZERO)
        return LogLength(self.log + other.log)

    def __truediv__(self, other: "LogLength") -> "LogLength":
        if other.is_zero:
            raise ZeroDivisionError("division by zero LogLength")
        if self.is_zero:
            return self
        return LogLength(self.log - other.log)

    def __pow__(self, p: float) -> "LogLength":
        if self.is_zero:
            if p <= 0:
                raise ValueError("0**p undefined for p <= 0")
            return self
        return LogLength(self.log * p)

    def times(self, count: int) -> "LogLength":
        """count * length for an integer count >= 0."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        if count == 0 or self.is_zero:
            return LogLength(LOG_ZERO)
        return LogLength(self.log + math.log(count))

    def ratio(self, other: "LogLength") -> float:
        """self / other as a plain float (may overflow for huge ratios)."""
        if other.is_zero:
            raise ZeroDivisionError("ratio against zero LogLength")
        if self.is_zero:
            return 0.0
        return math.exp(self.log - other.log)

    @classmethod
    def sum(cls, items: Iterable["LogLength"]) -> "LogLength":
        """Stable log-of-sum reduction, order independent."""
        logs = [x.log for x in items if x.log != LOG_ZERO]
        if not logs:
            return cls(LOG_ZERO)
        m = max(logs)
        total = math.fsum(math.exp(v - m) for v in logs)
        return cls(m + math.log(total))

    def __repr__(self) -> str:
        if self.is_zero:
            return "LogLength(0)"
        return f"LogLength(log2={self.log2:.6g})"


ZERO = LogLength.zero()
ONE = LogLength.one()


def close_rel(a: LogLength, b: LogLength, rel: float) -> bool:
    """|a - b| <= rel * max(a, b), evaluated safely in log space."""
    if a.is_zero and b.is_zero:
        return True
    if a.is_zero or b.is_zero:
        return False
    # |log a - log b| <= rel implies relative closeness to first order;
    # guard the comparison for rel near the ulp scale.
    return abs(a.log - b.log) <= rel + 4e-16 * max(abs(a.log), abs(b.log))
