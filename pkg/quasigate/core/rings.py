"""
Exact coefficient rings.

A Ring is a capability record passed explicitly to every formal sum. Three
instantiations are provided: arbitrary precision integers, rationals, and
integers modulo n. No floating point is used anywhere.
"""
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from .errors import InputError


@dataclass(frozen=True)
class Ring:
    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any] = field(repr=False)
    neg: Callable[[Any], Any] = field(repr=False)
    mul: Callable[[Any, Any], Any] = field(repr=False)
    from_int: Callable[[int], Any] = field(repr=False)
    parse: Callable[[str], Any] = field(repr=False)
    half: Optional[Callable[[Any], Any]] = field(default=None, repr=False)

    @property
    def has_half(self) -> bool:
        """True when 1/2 lies in the ring."""
        return self.half is not None

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def coerce(self, value):
        """Bring an int (or an element of this ring) into canonical form."""
        if isinstance(value, int) and not isinstance(value, bool):
            return self.from_int(value)
        return value

    def format(self, a) -> str:
        return str(a)

    def __str__(self):
        return self.name


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise InputError(f"not an integer scalar: {text!r}") from exc


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational scalar: {text!r}") from exc


INTEGERS = Ring(
    name="Z",
    zero=0,
    one=1,
    add=operator.add,
    neg=operator.neg,
    mul=operator.mul,
    from_int=int,
    parse=_parse_int,
)

RATIONALS = Ring(
    name="Q",
    zero=Fraction(0),
    one=Fraction(1),
    add=operator.add,
    neg=operator.neg,
    mul=operator.mul,
    from_int=Fraction,
    parse=_parse_fraction,
    half=lambda a: a / 2,
)


def modular(n: int) -> Ring:
    """Z/n with canonical representatives 0..n-1; has 1/2 iff n is odd."""
    if n < 2:
        raise InputError(f"modulus must be at least 2, got {n}")

    def parse(text: str) -> int:
        return _parse_int(text) % n

    half = None
    if n % 2 == 1:
        inverse_two = pow(2, -1, n)
        half = lambda a: (a * inverse_two) % n  # noqa: E731

    return Ring(
        name=f"Zn:{n}",
        zero=0,
        one=1 % n,
        add=lambda a, b: (a + b) % n,
        neg=lambda a: (-a) % n,
        mul=lambda a, b: (a * b) % n,
        from_int=lambda k: k % n,
        parse=parse,
        half=half,
    )


def parse_ring(text: str) -> Ring:
    """Accepts "Z", "Q", "Zn:<n>" or "Z/<n>"."""
    name = (text or "Z").strip()
    if name == "Z":
        return INTEGERS
    if name == "Q":
        return RATIONALS
    for prefix in ("Zn:", "Z/"):
        if name.startswith(prefix):
            return modular(_parse_int(name[len(prefix):]))
    raise InputError(f"unknown ring {text!r}; expected Z, Q or Zn:<n>")
