"""Extended-real values: finite reals plus +infinity, with 0*inf = 0.

The divergence formulas accumulate terms of the form ``weight * value`` where
``value`` may be +infinity but the weight may vanish; the product convention
0*inf = 0 makes those terms drop out instead of poisoning the sum.  Negative
infinity is rejected outright: none of the implemented quantities produce it,
and admitting it would require sign conventions nothing here exercises.
"""

from __future__ import annotations

import math


class ExtendedRealError(ValueError):
    """Raised for values outside the supported [finite reals] + {+inf} set."""


class ExtendedReal:
    """A finite real number or +infinity.

    Arithmetic follows the accumulation rules used by the divergence sums:
    ``x + inf = inf`` and ``0 * inf = 0``.  A product of a strictly negative
    finite number with +inf would be -inf and raises instead.
    """

    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, ExtendedReal):
            value = value.value
        value = float(value)
        if math.isnan(value):
            raise ExtendedRealError("NaN is not an extended real value")
        if value == -math.inf:
            raise ExtendedRealError("-inf is outside the supported range")
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, val):
        raise AttributeError("ExtendedReal is immutable")

    @property
    def is_inf(self) -> bool:
        return self.value == math.inf

    @property
    def is_finite(self) -> bool:
        return not self.is_inf

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return "inf" if self.is_inf else repr(self.value)

    def __eq__(self, other):
        try:
            other = ExtendedReal(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        return self.value < ExtendedReal(other).value

    def __le__(self, other):
        return self.value <= ExtendedReal(other).value

    def __gt__(self, other):
        return self.value > ExtendedReal(other).value

    def __ge__(self, other):
        return self.value >= ExtendedReal(other).value

    def __add__(self, other):
        other = ExtendedReal(other)
        if self.is_inf or other.is_inf:
            return INF
        return ExtendedReal(self.value + other.value)

    __radd__ = __add__

    def __mul__(self, other):
        other = ExtendedReal(other)
        if self.is_inf or other.is_inf:
            finite = other if self.is_inf else self
            if finite.value == 0.0:
                return ExtendedReal(0.0)
            if finite.value < 0.0:
                raise ExtendedRealError(
                    "negative * inf would be -inf, which is unsupported"
                )
            return INF
        return ExtendedReal(self.value * other.value)

    __rmul__ = __mul__


INF = ExtendedReal(math.inf)


def as_extended(value) -> ExtendedReal:
    """Coerce a float or ExtendedReal to ExtendedReal."""
    return value if isinstance(value, ExtendedReal) else ExtendedReal(value)


def fmt_extended(value, decimals: int = 12) -> str:
    """Render an extended real for reports: the literal ``inf`` or a decimal."""
    x = as_extended(value)
    if x.is_inf:
        return "inf"
    s = f"{x.value:.{decimals}f}"
    if float(s) == 0.0:
        s = f"{0.0:.{decimals}f}"
    return s
