"""JSON encodings for exact scalars: rationals as "p/q", Q(i) values as [re, im]."""

from __future__ import annotations

from fractions import Fraction

from .exactmath import GaussianRational, as_rational, parse_rational


def rat_str(x) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def scalar_to_json(x):
    if isinstance(x, GaussianRational):
        if x.is_real:
            return rat_str(x.re)
        return [rat_str(x.re), rat_str(x.im)]
    return rat_str(x)


def scalar_from_json(obj):
    if isinstance(obj, (list, tuple)):
        re, im = (parse_rational(str(v)) for v in obj)
        return GaussianRational(re, im) if im else re
    if isinstance(obj, int):
        return Fraction(obj)
    return parse_rational(str(obj))
