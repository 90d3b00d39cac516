"""Smooth branches through the origin as truncated graphs with exact coefficients.

A branch is stored as ``y = a1 x + a2 x^2 + ... + ad x^d`` (``Y_OF_X``) or,
when its tangent is the y-axis, as ``x = b2 y^2 + ... + bd y^d`` (``X_OF_Y``).
Coefficients are :class:`fractions.Fraction`, never floats: contact orders
jump under arbitrarily small perturbations, so rounding is not an option.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InputError

Rational = Fraction

_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a reduced fraction.

    Decimal and exponent notation are refused on purpose.
    """
    if not isinstance(text, str):
        raise InputError(f"coefficient must be given as a string, got {type(text).__name__}")
    match = _RATIONAL_RE.fullmatch(text)
    if match is None:
        raise InputError(f"malformed rational {text!r}: expected an integer or 'p/q'")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise InputError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def _as_fraction(value: Union[str, int, Fraction]) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
        raise InputError(f"inexact coefficient {value!r}; use an int, Fraction or 'p/q' string")
    return Fraction(value)


class Orientation(enum.Enum):
    Y_OF_X = "y_of_x"
    X_OF_Y = "x_of_y"


class _Marker(enum.Enum):
    UNSEPARATED = "unseparated"

    def __repr__(self) -> str:
        return "UNSEPARATED"


UNSEPARATED = _Marker.UNSEPARATED
ContactOrder = Union[int, _Marker]


@dataclass(frozen=True)
class Branch:
    orientation: Orientation
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise InputError("a branch needs at least one coefficient")
        if self.orientation is Orientation.X_OF_Y and self.coeffs[0] != 0:
            raise InputError("x_of_y branches must have a vertical tangent; normalize first")

    @property
    def truncation_degree(self) -> int:
        return len(self.coeffs)

    def __str__(self) -> str:
        lhs, var = ("y", "x") if self.orientation is Orientation.Y_OF_X else ("x", "y")
        terms = [f"{c}*{var}^{i}" for i, c in enumerate(self.coeffs, start=1) if c]
        return f"{lhs} = {' + '.join(terms) or '0'} + O({var}^{self.truncation_degree + 1})"


def _mul_trunc(a: Sequence[Fraction], b: Sequence[Fraction], d: int) -> list[Fraction]:
    # a[i] is the coefficient of t^(i+1); product truncated at degree d
    out = [Fraction(0)] * d
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            deg = i + j + 2
            if deg > d:
                break
            out[deg - 1] += ai * bj
    return out


def compose(f: Sequence[Fraction], g: Sequence[Fraction], d: int) -> list[Fraction]:
    """Coefficients of ``f(g(t))`` up to degree ``d`` (both series without constant term)."""
    result = [Fraction(0)] * d
    power = list(g[:d]) + [Fraction(0)] * (d - len(g[:d]))
    for k, fk in enumerate(f[:d], start=1):
        if k > 1:
            power = _mul_trunc(power, g, d)
        if fk:
            for i in range(d):
                result[i] += fk * power[i]
    return result


def invert_series(coeffs: Sequence[Union[str, int, Fraction]], d: int | None = None) -> list[Fraction]:
    """Compositional inverse of ``f(t) = c1 t + c2 t^2 + ...`` truncated at degree ``d``.

    Coefficients past the end of ``coeffs`` are taken as zero.  The result
    ``g`` satisfies ``f(g(t)) = t + O(t^(d+1))``.
    """
    f = [_as_fraction(c) for c in coeffs]
    if d is None:
        d = len(f)
    if d < 1:
        raise InputError("truncation degree must be positive")
    if not f or f[0] == 0:
        raise InputError("series has no linear term; it is not invertible")
    g = [Fraction(0)] * d
    g[0] = 1 / f[0]
    for k in range(2, d + 1):
        # with g[k-1] still 0, the t^k coefficient of f(g) is what c1*g_k must cancel
        residue = compose(f, g[:k], k)[k - 1]
        g[k - 1] = -residue / f[0]
    return g


def normalize_branch(orientation: Union[Orientation, str], coeffs: Iterable[Union[str, int, Fraction]]) -> Branch:
    """Build a :class:`Branch`, turning x-graphs with a non-vertical tangent into y-graphs."""
    if isinstance(orientation, str):
        try:
            orientation = Orientation(orientation)
        except ValueError:
            raise InputError(f"unknown branch form {orientation!r}; expected 'y_of_x' or 'x_of_y'") from None
    values = tuple(_as_fraction(c) for c in coeffs)
    if not values:
        raise InputError("a branch needs at least one coefficient")
    if orientation is Orientation.X_OF_Y and values[0] != 0:
        return Branch(Orientation.Y_OF_X, tuple(invert_series(values, len(values))))
    return Branch(orientation, values)


def contact_order(b1: Branch, b2: Branch) -> ContactOrder:
    """Intersection multiplicity of two smooth branches.

    Equals the number of infinitely near points the two branches share.
    """
    if b1.orientation is not b2.orientation:
        return 1
    for degree, (c1, c2) in enumerate(zip(b1.coeffs, b2.coeffs), start=1):
        if c1 != c2:
            return degree
    return UNSEPARATED
