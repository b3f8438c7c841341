"""Exact angle values.

Whether ``2*pi/theta`` is rational is a yes/no question that floating
point cannot answer, so angles may be carried in exact form: a rational
multiple of pi, an explicitly irrational multiple of pi, or a rational
number of radians.  Everything else in the library works on plain floats.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import AngleOutOfRange, FormatError, InexactAngle

_PI_RATIONAL = "pi-rational"
_PI_IRRATIONAL = "pi-irrational"
_RADIANS = "radians"


@dataclass(frozen=True)
class ExactAngle:
    """An angle whose arithmetic nature is known exactly.

    ``kind`` is one of ``pi-rational`` (value = coefficient * pi with a
    Fraction coefficient), ``pi-irrational`` (a multiple of pi marked as
    irrational, float payload), or ``radians`` (a Fraction of radians).
    """

    kind: str
    coefficient: Fraction | None = None
    payload: float = 0.0

    @staticmethod
    def rational_pi(numerator, denominator=1) -> "ExactAngle":
        coef = Fraction(numerator, denominator)
        if coef <= 0:
            raise AngleOutOfRange("angle must be positive")
        return ExactAngle(_PI_RATIONAL, coef)

    @staticmethod
    def irrational_pi(multiple: float) -> "ExactAngle":
        """A multiple of pi declared (by the caller) to be irrational."""
        if multiple <= 0:
            raise AngleOutOfRange("angle must be positive")
        return ExactAngle(_PI_IRRATIONAL, None, float(multiple))

    @staticmethod
    def radians(value) -> "ExactAngle":
        coef = Fraction(value)
        if coef <= 0:
            raise AngleOutOfRange("angle must be positive")
        return ExactAngle(_RADIANS, coef)

    @property
    def value(self) -> float:
        if self.kind == _PI_RATIONAL:
            return math.pi * self.coefficient.numerator / self.coefficient.denominator
        if self.kind == _PI_IRRATIONAL:
            return math.pi * self.payload
        return self.coefficient.numerator / self.coefficient.denominator

    def two_pi_ratio_is_rational(self) -> bool:
        """Whether 2*pi divided by this angle is a rational number."""
        if self.kind == _PI_RATIONAL:
            return True
        # 2*pi / (c*pi) with c irrational, and 2*pi / q with q rational,
        # are both irrational.
        return False

    def multiple_below(self, bound_over_pi: Fraction, m: int) -> bool:
        """Exact test of ``m * angle < bound_over_pi * pi`` (m > 0)."""
        if self.kind == _PI_RATIONAL:
            return m * self.coefficient < bound_over_pi
        if self.kind == _PI_IRRATIONAL:
            return m * self.payload < float(bound_over_pi)
        lhs = m * self.coefficient  # radians, compare against pi multiple
        return float(lhs) < math.pi * float(bound_over_pi)


_ANGLE_RE = re.compile(
    r"""^\s*
        (?:(?P<num>\d+)\s*/\s*(?P<den>\d+)\s*)?   # optional p/q prefix
        (?P<pi>pi|π)
        (?:\s*/\s*(?P<div>\d+))?                  # optional /q suffix
        \s*$""",
    re.VERBOSE,
)


def parse_angle(text: str):
    """Parse a CLI angle argument.

    Accepts ``<float>`` (plain radians, inexact), and the exact forms
    ``pi``, ``p/qpi``, ``pi/q``, ``ppi`` (e.g. ``2pi``), returning either
    a float or an :class:`ExactAngle`.
    """
    text = text.strip()
    m = _ANGLE_RE.match(text)
    if m:
        num = int(m.group("num")) if m.group("num") else 1
        den = int(m.group("den")) if m.group("den") else 1
        if m.group("div"):
            den *= int(m.group("div"))
        return ExactAngle.rational_pi(num, den)
    m2 = re.match(r"^\s*(\d+)\s*(?:pi|π)\s*$", text)
    if m2:
        return ExactAngle.rational_pi(int(m2.group(1)), 1)
    try:
        return float(text)
    except ValueError:
        raise FormatError(f"cannot parse angle {text!r}") from None


def angle_value(angle) -> float:
    """Float value of an angle given as float or ExactAngle."""
    if isinstance(angle, ExactAngle):
        return angle.value
    return float(angle)


def require_exact(angle) -> ExactAngle:
    if isinstance(angle, ExactAngle):
        return angle
    raise InexactAngle(
        "this operation needs an exact angle (rational multiple of pi); "
        "got a plain float whose rationality is undecidable"
    )
