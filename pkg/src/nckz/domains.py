"""Coefficient domains.

Two concrete domains are provided: exact rationals (fractions.Fraction) and
complex doubles.  Rational equality is exact; complex equality is absolute
tolerance based (default 1e-12, overridable per call).  Arithmetic on stored
coefficients uses the native Python operators; the domain object supplies
coercion, zero-tests, equality, inversion and JSON encoding.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError

__all__ = ["CoeffDomain", "RationalDomain", "ComplexDomain", "RATIONAL", "COMPLEX"]


class CoeffDomain:
    name: str = "abstract"
    zero = 0
    one = 1

    def coerce(self, x):
        raise NotImplementedError

    def is_zero(self, c) -> bool:
        return c == self.zero

    def eq(self, a, b, tol: float | None = None) -> bool:
        raise NotImplementedError

    def invert(self, c):
        if self.is_zero(c):
            raise DomainError("division by zero in coefficient domain")
        return self.one / c

    def coeff_to_json(self, c):
        raise NotImplementedError

    def coeff_from_json(self, obj):
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<domain {self.name}>"


class RationalDomain(CoeffDomain):
    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise DomainError(f"cannot coerce {x!r} into the rational domain")

    def eq(self, a, b, tol: float | None = None) -> bool:
        return a == b

    def coeff_to_json(self, c) -> str:
        return f"{c.numerator}/{c.denominator}"

    def coeff_from_json(self, obj) -> Fraction:
        if not isinstance(obj, str):
            raise DomainError(f"rational coefficient must be a 'p/q' string, got {obj!r}")
        return Fraction(obj)


class ComplexDomain(CoeffDomain):
    name = "complex"
    zero = complex(0)
    one = complex(1)

    def __init__(self, tol: float = 1e-12):
        self.tol = tol

    def coerce(self, x) -> complex:
        if isinstance(x, (complex, float, int, Fraction)):
            return complex(x)
        raise DomainError(f"cannot coerce {x!r} into the complex domain")

    def is_zero(self, c) -> bool:
        return c == 0

    def eq(self, a, b, tol: float | None = None) -> bool:
        return abs(a - b) <= (self.tol if tol is None else tol)

    def coeff_to_json(self, c) -> list[float]:
        return [c.real, c.imag]

    def coeff_from_json(self, obj) -> complex:
        if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
            raise DomainError(f"complex coefficient must be [re, im], got {obj!r}")
        return complex(obj[0], obj[1])


RATIONAL = RationalDomain()
COMPLEX = ComplexDomain()


def domain_by_name(name: str) -> CoeffDomain:
    if name == "rational":
        return RATIONAL
    if name == "complex":
        return COMPLEX
    raise DomainError(f"unknown coefficient domain {name!r}")
