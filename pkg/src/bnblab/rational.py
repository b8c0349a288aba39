"""Exact rational arithmetic shared by every module.

gmpy2.mpq is used when available (roughly an order of magnitude faster than
the stdlib Fraction); fractions.Fraction is a drop-in fallback.  All model
data, simplex pivoting and score arithmetic go through this layer so that
value comparisons are exact and repeated runs are bit-identical.
"""

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Q

#: Sentinel for "no upper bound" / infinite score components.  Never mixed
#: into rational arithmetic; code that may meet it must branch explicitly.
INF = float("inf")


def rat(value):
    """Coerce ``value`` (int, 'p/q' string, or rational) to an exact rational.

    Floats are rejected: every non-integer quantity in this package is drawn
    on an explicit rational grid, so a float reaching this point is a bug.
    """
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; use a p/q string")
    return Q(value)


def rat_str(value) -> str:
    """Canonical text form: 'p/q' for non-integers, plain digits otherwise."""
    if value == INF:
        return "inf"
    return str(value)


def parse_rat(text: str):
    """Parse the canonical text form produced by :func:`rat_str`."""
    text = text.strip()
    if text == "inf":
        return INF
    try:
        if "/" in text:
            num, den = text.split("/")
            return Q(int(num), int(den))
        return Q(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def is_integral(value) -> bool:
    """True when the rational has denominator 1."""
    return value.denominator == 1
