"""Exact-or-float scalars shared across the package.

Analytic constructions (sphere spectra, window endpoints, indicial roots of
rational data) are kept as ``fractions.Fraction`` so that breakpoints and
window endpoints compare exactly.  Values read from files as decimals or
produced by quadrature are floats, and any comparison involving a float uses
an absolute tolerance of ``DEFAULT_TOL``.
"""

from __future__ import annotations

import math
from fractions import Fraction

Scalar = int | Fraction | float

# absolute tolerance for comparisons touching floats
DEFAULT_TOL = 1e-9


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def exactify(value: Scalar) -> Scalar:
    """Normalize exact inputs to Fraction; keep floats as float."""
    if is_exact(value):
        return Fraction(value)
    return float(value)


def parse_scalar(text: str) -> Scalar:
    """Parse an integer, decimal, or ``p/q`` rational literal.

    Integers and ``p/q`` literals stay exact; decimals become floats.
    """
    token = text.strip()
    if not token:
        raise ValueError("empty numeric literal")
    if "/" in token:
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {token!r}") from exc
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError as exc:
        raise ValueError(f"bad numeric literal {token!r}") from exc


def exact_sqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rnum, rden = math.isqrt(num), math.isqrt(den)
    if rnum * rnum == num and rden * rden == den:
        return Fraction(rnum, rden)
    return None


def sqrt_scalar(value: Scalar) -> Scalar:
    """Square root that stays exact when the radicand is a rational square."""
    if is_exact(value):
        root = exact_sqrt(Fraction(value))
        if root is not None:
            return root
    return math.sqrt(value)


def scalars_close(x: Scalar, y: Scalar, tol: float = DEFAULT_TOL) -> bool:
    """Equality: exact when both sides are exact, |x-y| <= tol otherwise."""
    if is_exact(x) and is_exact(y):
        return x == y
    return abs(float(x) - float(y)) <= tol


def fmt(value: Scalar) -> str:
    """Render rationals as ``p/q`` (bare integers without the ``/q``)."""
    if is_exact(value):
        frac = Fraction(value)
        if frac.denominator == 1:
            return str(frac.numerator)
        return f"{frac.numerator}/{frac.denominator}"
    return repr(float(value))
