"""Nonnegative extended-range reals stored as natural logarithms.

Physical times in the heavy-tail experiments (ballpark exp(1e4) and far
beyond) overflow any float, so every physical time or partial sum lives in
log scale.  Zero is a first-class sentinel (log value -inf), never an
underflowed small number: the random walk starts at S0 = 0 and that zero
must survive arithmetic exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

_NEG_INF = float("-inf")

# Threshold above which exp(log_value) is no longer a finite double and
# reports must fall back to the "log:" token form.
_PLAIN_TOKEN_BOUND = 700.0


def log_add(a: float, b: float) -> float:
    """log(e^a + e^b), stable, exact when either operand is -inf."""
    if a == _NEG_INF:
        return b
    if b == _NEG_INF:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def log_sub(a: float, b: float) -> float:
    """log(e^a - e^b) for a >= b; returns -inf when a == b."""
    if b == _NEG_INF:
        return a
    if a < b:
        raise ValueError(f"log_sub requires a >= b, got a={a!r} < b={b!r}")
    if a == b:
        return _NEG_INF
    d = b - a
    # expm1 keeps precision when b is close to a; log1p(-(...)) when far.
    return a + math.log1p(-math.exp(d))


@dataclass(frozen=True)
class LogNum:
    """A nonnegative real represented by its natural log (-inf means 0)."""

    log_value: float

    def __post_init__(self) -> None:
        if math.isnan(self.log_value):
            raise ValueError("LogNum log_value may not be NaN")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "LogNum":
        return LogNum(_NEG_INF)

    @staticmethod
    def from_value(v: Union[int, float]) -> "LogNum":
        if v < 0:
            raise ValueError(f"LogNum represents nonnegative values, got {v!r}")
        if v == 0:
            return LogNum(_NEG_INF)
        return LogNum(math.log(v))

    @staticmethod
    def from_log(log_value: float) -> "LogNum":
        return LogNum(log_value)

    # -- views ---------------------------------------------------------

    @property
    def value(self) -> float:
        """The represented value as a plain float (inf if out of range)."""
        if self.log_value == _NEG_INF:
            return 0.0
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return math.inf

    def is_zero(self) -> bool:
        return self.log_value == _NEG_INF

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "LogNum") -> "LogNum":
        return LogNum(log_add(self.log_value, other.log_value))

    def __sub__(self, other: "LogNum") -> "LogNum":
        """Difference of represented values; requires self >= other."""
        if self.log_value < other.log_value:
            raise ValueError(
                "LogNum subtraction requires minuend >= subtrahend "
                f"(log values {self.log_value!r} < {other.log_value!r})"
            )
        return LogNum(log_sub(self.log_value, other.log_value))

    # -- ordering (total, consistent with represented values) ----------

    def __lt__(self, other: "LogNum") -> bool:
        return self.log_value < other.log_value

    def __le__(self, other: "LogNum") -> bool:
        return self.log_value <= other.log_value

    def __gt__(self, other: "LogNum") -> bool:
        return self.log_value > other.log_value

    def __ge__(self, other: "LogNum") -> bool:
        return self.log_value >= other.log_value

    # -- serialization --------------------------------------------------

    def to_token(self) -> str:
        """Report form: plain decimal when exp() is safely in range,
        otherwise the log value prefixed with "log:"."""
        if self.is_zero():
            return "0"
        if abs(self.log_value) <= _PLAIN_TOKEN_BOUND:
            return repr(self.value)
        return f"log:{self.log_value!r}"

    @staticmethod
    def from_token(token: str) -> "LogNum":
        if token.startswith("log:"):
            return LogNum(float(token[4:]))
        return LogNum.from_value(float(token))

    def __repr__(self) -> str:
        return f"LogNum({self.to_token()})"


def compare(a: LogNum, b: LogNum) -> int:
    """-1, 0 or 1 according to the order of the represented values."""
    if a.log_value < b.log_value:
        return -1
    if a.log_value > b.log_value:
        return 1
    return 0
