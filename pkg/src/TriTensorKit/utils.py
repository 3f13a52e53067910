"""Module containing small helper utility functions for parsing and formatting command-line and JSON input."""

import re
from typing import Optional

SCALAR_EXPR = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")
"""Regular expression matching an exact scalar written as `"num"` or `"num/den"`."""

FIELD_EXPR = re.compile(r"^\s*(?:(Q|QQ)|(?:Fp|GF|F)\s*:?\s*\(?(\d+)\)?)\s*$", re.IGNORECASE)
"""Regular expression matching a field tag, i.e. `"Q"` or `"Fp:<p>"`."""

POINT_EXPR = re.compile(r"\(([^()]*)\)")
"""Regular expression matching a single projective point `(a:b:c)` inside a point list."""

CLASS_EXPR = re.compile(r"^\s*([+-]?\d+)\s*[:;]\s*([+-]?\d+(?:\s*,\s*[+-]?\d+)*)\s*$")
"""Regular expression matching a divisor class string `"n:a1,a2,a3,a4,a5,a6"`."""


def parse_scalar(text: str) -> tuple[int, int]:
    """Parse a scalar string into a numerator and a (positive, nonzero) denominator.

    Accepted forms are integers such as `"-3"` and fractions such as `"7/12"`.

    The fraction is not reduced here, that is left to the field the value is converted into.
    """
    match = SCALAR_EXPR.match(str(text))
    if match is None:
        raise ValueError(f"Not an exact scalar: {text!r}, expected 'num' or 'num/den'")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ValueError(f"Zero denominator in scalar {text!r}")
    return numerator, denominator


def parse_field_tag(text: str) -> Optional[int]:
    """Parse a field tag, returning `None` for the rationals or the modulus `p` of a prime field.

    Primality is not checked here, see `TriTensorKit.exact.FieldTag`.
    """
    match = FIELD_EXPR.match(str(text))
    if match is None:
        raise ValueError(f"Unknown field tag {text!r}, expected 'Q' or 'Fp:<p>'")
    if match.group(1):
        return None
    return int(match.group(2))


def parse_points(text: str) -> list[tuple[str, ...]]:
    """Extract projective points from a list like `"(1:0:0),(0:1:0),(1:2:3)"`.

    Coordinates may be separated by either `:` or `,` within a point, and are returned as scalar strings.
    """
    points = []
    for body in POINT_EXPR.findall(text):
        coords = tuple(c.strip() for c in re.split(r"[:,]", body))
        if len(coords) < 2 or any(not c for c in coords):
            raise ValueError(f"Malformed point '({body})'")
        points.append(coords)
    leftover = POINT_EXPR.sub("", text).replace(",", "").strip()
    if leftover or not points:
        raise ValueError(f"Malformed point list {text!r}, expected e.g. '(1:0:0),(0:1:0)'")
    return points


def parse_divisor_class(text: str) -> tuple[int, tuple[int, ...]]:
    """Parse a divisor class string `"n:a1,...,a6"` into `(n, (a1, ..., a6))`."""
    match = CLASS_EXPR.match(text)
    if match is None:
        raise ValueError(f"Malformed class {text!r}, expected 'n:a1,a2,a3,a4,a5,a6'")
    coefficients = tuple(int(a) for a in match.group(2).split(","))
    if len(coefficients) != 6:
        raise ValueError(f"A class needs six exceptional coefficients, got {len(coefficients)}")
    return int(match.group(1)), coefficients


def parse_int_list(text: str) -> tuple[int, ...]:
    """Parse a comma separated list of integers, e.g. a leg order `"2,0,1"`."""
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as err:
        raise ValueError(f"Expected a comma separated list of integers, got {text!r}") from err


def parse_range(text: str) -> range:
    """Parse an inclusive integer range `"a:b"` into `range(a, b + 1)`."""
    try:
        low, high = (int(t) for t in text.split(":"))
    except ValueError as err:
        raise ValueError(f"Expected a range 'low:high', got {text!r}") from err
    if high < low:
        raise ValueError(f"Empty range {text!r}")
    return range(low, high + 1)


def parse_name_list(text: Optional[str]) -> frozenset[str]:
    """Parse a comma separated list of names (e.g. checks to skip), ignoring blanks."""
    if not text:
        return frozenset()
    return frozenset(t.strip() for t in text.split(",") if t.strip())


def format_point(coords: tuple[str, ...]) -> str:
    """Format coordinates as a projective point `(a:b:c)`."""
    return "(" + ":".join(coords) + ")"
