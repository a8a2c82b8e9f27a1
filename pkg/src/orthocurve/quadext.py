"""Exact arithmetic in the quadratic field Q(√5)."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import sqrt
from typing import Union

Number = Union[int, Fraction, "QuadExt"]

_SQRT5 = sqrt(5.0)


@total_ordering
class QuadExt:
    """``a + b·√5`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0) -> None:
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _coerce(x: Number) -> QuadExt:
        if isinstance(x, QuadExt):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadExt(x)
        return NotImplemented  # type: ignore[return-value]

    def __repr__(self) -> str:
        return f"QuadExt({self.a}, {self.b})"

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}√5"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}√5"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        if isinstance(other, QuadExt):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.a) if not self.b else hash((self.a, self.b))

    def __add__(self, other: Number) -> QuadExt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> QuadExt:
        return QuadExt(-self.a, -self.b)

    def __sub__(self, other: Number) -> QuadExt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: Number) -> QuadExt:
        return -self + other

    def __mul__(self, other: Number) -> QuadExt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conjugate(self) -> QuadExt:
        return QuadExt(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - 5 * self.b * self.b

    def __truediv__(self, other: Number) -> QuadExt:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        nrm = o.norm()
        if not nrm:
            raise ZeroDivisionError("division by zero in Q(√5)")
        num = self * o.conjugate()
        return QuadExt(num.a / nrm, num.b / nrm)

    def __rtruediv__(self, other: Number) -> QuadExt:
        return self._coerce(other) / self

    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a² with 5b²
        d = a * a - 5 * b * b
        return sa if d > 0 else sb

    def __lt__(self, other: Number) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() < 0

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * _SQRT5


PHI = QuadExt(Fraction(1, 2), Fraction(1, 2))
"""The golden ratio (1 + √5)/2."""
