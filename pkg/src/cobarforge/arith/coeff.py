"""Integers modulo a power of two that remember their precision."""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["TruncatedCoeff", "invert_unit", "PrecisionError", "ModeError"]


class PrecisionError(ValueError):
    """Raised when a computation needs more 2-adic precision than available."""


class ModeError(TypeError):
    """Raised when F2 values and Z/2^N values are combined."""


@dataclass(frozen=True)
class TruncatedCoeff:
    value: int
    precision: int

    def __post_init__(self) -> None:
        if self.precision < 1:
            raise PrecisionError("precision must be positive")
        object.__setattr__(self, "value", self.value % (1 << self.precision))

    @property
    def modulus(self) -> int:
        return 1 << self.precision

    def _align(self, other: "TruncatedCoeff | int") -> tuple[int, int, int]:
        if isinstance(other, TruncatedCoeff):
            n = min(self.precision, other.precision)
            return self.value, other.value, n
        return self.value, int(other), self.precision

    def __add__(self, other):
        a, b, n = self._align(other)
        return TruncatedCoeff(a + b, n)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, n = self._align(other)
        return TruncatedCoeff(a - b, n)

    def __rsub__(self, other):
        a, b, n = self._align(other)
        return TruncatedCoeff(b - a, n)

    def __mul__(self, other):
        a, b, n = self._align(other)
        return TruncatedCoeff(a * b, n)

    __rmul__ = __mul__

    def __neg__(self):
        return TruncatedCoeff(-self.value, self.precision)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedCoeff):
            n = min(self.precision, other.precision)
            return (self.value - other.value) % (1 << n) == 0
        if isinstance(other, int):
            return (self.value - other) % self.modulus == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.precision))

    def truncate(self, n: int) -> "TruncatedCoeff":
        if n > self.precision:
            raise PrecisionError(f"cannot raise precision {self.precision} to {n}")
        return TruncatedCoeff(self.value, n)

    def valuation(self) -> int:
        """2-adic valuation, capped at the precision."""
        if self.value == 0:
            return self.precision
        return (self.value & -self.value).bit_length() - 1


def invert_unit(u: TruncatedCoeff) -> TruncatedCoeff:
    """Inverse of an odd residue."""
    if u.value % 2 == 0:
        raise ValueError(f"{u.value} is not a unit mod 2^{u.precision}")
    return TruncatedCoeff(pow(u.value, -1, u.modulus), u.precision)
