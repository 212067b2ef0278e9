"""Exact distance arithmetic: nonnegative rationals plus an absorbing infinity.

No floats anywhere; metric data is Fraction-valued with INF as the single
infinite value.
"""

from __future__ import annotations

from fractions import Fraction


class _Infinity:
    """The infinite distance. Absorbing for +, maximal for the order."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __hash__(self):
        return hash("<INF>")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinity)

    def __gt__(self, other):
        return not isinstance(other, _Infinity)

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    def __radd__(self, other):
        return self


INF = _Infinity()

# A distance is a Fraction or INF.
Dist = object


def is_dist(v) -> bool:
    return v is INF or (isinstance(v, Fraction) and v >= 0)


def d_add(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


def d_le(a, b) -> bool:
    if b is INF:
        return True
    if a is INF:
        return False
    return a <= b


def d_min(vals):
    best = INF
    for v in vals:
        if d_le(v, best) and v != best:
            best = v
        elif best is INF and v is INF:
            best = INF
    return best


def d_max(vals):
    best = Fraction(0)
    for v in vals:
        if v is INF:
            return INF
        if v > best:
            best = v
    return best


def parse_dist(text: str):
    """Parse 'inf', an integer, or 'p/q' into a distance value."""
    text = text.strip()
    if text == "inf":
        return INF
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad distance literal {text!r}") from exc


def show_dist(v) -> str:
    if v is INF:
        return "inf"
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"
