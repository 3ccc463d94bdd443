"""
Exact arithmetic substrate.

BigRational is fractions.Fraction. SqrtRational is a signed square root of a
non-negative rational, the value domain of every 3-jm symbol. QuadraticSum is a
finite sum c_1*sqrt(d_1) + c_2*sqrt(d_2) + ... with rational c_i and distinct
square-free d_i, closed under addition and multiplication.
"""
import logging
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

import mpmath
from sympy.ntheory import factorint

from shell_averages.shared.errors import (
    ConsistencyError, DivisionByZeroError, NotRationalError
)

logger = logging.getLogger(__name__)

BigRational = Fraction
RationalLike = Union[int, Fraction]

_RATIONAL_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "−": operator.sub,
    "*": operator.mul,
    "×": operator.mul,
    "/": operator.truediv,
    "÷": operator.truediv,
}

# Precision ladder for deciding the sign of an irrational sum
_SIGN_START_DPS = 30
_SIGN_MAX_DPS = 3840


def _sign(value) -> int:
    return (value > 0) - (value < 0)


def rational_arith(a: RationalLike, b: RationalLike, op: str) -> Fraction:
    """Apply one of + - * / to two rationals, reporting division by zero."""
    try:
        func = _RATIONAL_OPS[op]
    except KeyError:
        raise ValueError(f"Unknown operator: {op!r}") from None
    a, b = Fraction(a), Fraction(b)
    if func is operator.truediv and b == 0:
        raise DivisionByZeroError(f"Cannot divide {a} by zero")
    return func(a, b)


@lru_cache(maxsize=8192)
def square_free_split(n: int) -> tuple[int, int]:
    """Split a positive integer as outer**2 * core with core square-free."""
    if n <= 0:
        raise ValueError(f"Expected a positive integer, got {n}")
    outer, core = 1, 1
    for prime, power in factorint(n).items():
        outer *= prime ** (power // 2)
        if power % 2:
            core *= prime
    return outer, core


def _mp_fraction(value: Fraction):
    return mpmath.mpf(value.numerator) / value.denominator


@dataclass(frozen=True)
class SqrtRational:
    """Exact value sign * sqrt(radicand)."""
    sign: int
    radicand: Fraction

    def __post_init__(self):
        radicand = Fraction(self.radicand)
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if radicand < 0:
            raise ValueError(f"radicand must be non-negative, got {radicand}")
        if (self.sign == 0) != (radicand == 0):
            raise ValueError("sign is 0 exactly when the radicand is 0")
        object.__setattr__(self, "radicand", radicand)

    @classmethod
    def zero(cls) -> "SqrtRational":
        return cls(0, Fraction(0))

    @classmethod
    def from_rational(cls, value: RationalLike) -> "SqrtRational":
        value = Fraction(value)
        return cls(_sign(value), value * value)

    def __mul__(self, other):
        if isinstance(other, SqrtRational):
            return SqrtRational(self.sign * other.sign, self.radicand * other.radicand)
        if isinstance(other, (int, Fraction)):
            return self * SqrtRational.from_rational(other)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self) -> "SqrtRational":
        return SqrtRational(-self.sign, self.radicand)

    def __bool__(self) -> bool:
        return self.sign != 0

    def __float__(self) -> float:
        return self.sign * math.sqrt(self.radicand)

    def square(self) -> Fraction:
        return self.radicand

    def inverse(self) -> "SqrtRational":
        if self.sign == 0:
            raise DivisionByZeroError("Cannot invert a zero square root")
        return SqrtRational(self.sign, 1 / self.radicand)

    def is_rational(self) -> bool:
        num, den = self.radicand.numerator, self.radicand.denominator
        return math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise NotRationalError(f"{self} is irrational")
        root = Fraction(math.isqrt(self.radicand.numerator),
                        math.isqrt(self.radicand.denominator))
        return self.sign * root

    def to_quadratic(self) -> "QuadraticSum":
        return QuadraticSum.from_sqrt(self)

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.to_fraction())
        prefix = "-" if self.sign < 0 else ""
        return f"{prefix}sqrt({self.radicand})"


def sqrt_mul(a: SqrtRational, b: SqrtRational) -> SqrtRational:
    return a * b


class QuadraticSum:
    """
    Exact sum of rational multiples of square roots of square-free integers.

    Instances are immutable and hashable. A QuadraticSum whose only radicand is
    1 behaves as (and compares equal to) the corresponding Fraction.
    """
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, RationalLike] | None = None):
        collected: dict[int, Fraction] = {}
        for radicand, coefficient in (terms or {}).items():
            outer, core = square_free_split(int(radicand))
            collected[core] = collected.get(core, Fraction(0)) + Fraction(coefficient) * outer
        self._terms = tuple(sorted((d, c) for d, c in collected.items() if c != 0))

    @classmethod
    def _from_square_free(cls, terms: dict[int, Fraction]) -> "QuadraticSum":
        obj = cls.__new__(cls)
        obj._terms = tuple(sorted((d, c) for d, c in terms.items() if c != 0))
        return obj

    @classmethod
    def zero(cls) -> "QuadraticSum":
        return cls._from_square_free({})

    @classmethod
    def from_rational(cls, value: RationalLike) -> "QuadraticSum":
        return cls._from_square_free({1: Fraction(value)})

    @classmethod
    def from_sqrt(cls, value: SqrtRational) -> "QuadraticSum":
        if value.sign == 0:
            return cls.zero()
        # sqrt(p/q) = sqrt(p*q) / q
        p, q = value.radicand.numerator, value.radicand.denominator
        outer, core = square_free_split(p * q)
        return cls._from_square_free({core: value.sign * Fraction(outer, q)})

    @classmethod
    def coerce(cls, value) -> "QuadraticSum":
        if isinstance(value, QuadraticSum):
            return value
        if isinstance(value, SqrtRational):
            return cls.from_sqrt(value)
        if isinstance(value, (int, Fraction)):
            return cls.from_rational(value)
        raise TypeError(f"Cannot convert {type(value).__name__} to QuadraticSum")

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    # --- arithmetic -------------------------------------------------------

    def __add__(self, other):
        try:
            other = QuadraticSum.coerce(other)
        except TypeError:
            return NotImplemented
        merged = dict(self._terms)
        for d, c in other._terms:
            merged[d] = merged.get(d, Fraction(0)) + c
        return QuadraticSum._from_square_free(merged)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticSum":
        return QuadraticSum._from_square_free({d: -c for d, c in self._terms})

    def __sub__(self, other):
        try:
            other = QuadraticSum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            factor = Fraction(other)
            return QuadraticSum._from_square_free({d: c * factor for d, c in self._terms})
        try:
            other = QuadraticSum.coerce(other)
        except TypeError:
            return NotImplemented
        product: dict[int, Fraction] = {}
        for d1, c1 in self._terms:
            for d2, c2 in other._terms:
                # d1, d2 square-free: d1*d2 = g**2 * (d1/g)*(d2/g)
                g = math.gcd(d1, d2)
                core = (d1 // g) * (d2 // g)
                product[core] = product.get(core, Fraction(0)) + c1 * c2 * g
        return QuadraticSum._from_square_free(product)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if other == 0:
            raise DivisionByZeroError(f"Cannot divide {self} by zero")
        return self * (1 / Fraction(other))

    # --- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        try:
            other = QuadraticSum.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.to_fraction())
        return hash(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][0] == 1)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise NotRationalError(f"{self} is not rational")
        return self._terms[0][1] if self._terms else Fraction(0)

    def sign(self) -> int:
        """Exact sign. Irrational sums are never zero, so raising precision terminates."""
        if self.is_rational():
            return _sign(self.to_fraction())
        dps = _SIGN_START_DPS
        while dps <= _SIGN_MAX_DPS:
            with mpmath.workdps(dps):
                value = self._mp_value()
                magnitude = sum(abs(_mp_fraction(c)) * mpmath.sqrt(d) for d, c in self._terms)
                if abs(value) > magnitude * mpmath.mpf(10) ** (5 - dps):
                    return 1 if value > 0 else -1
            logger.debug(f"Sign of {self} undecided at {dps} digits")
            dps *= 2
        raise ConsistencyError(f"Could not decide the sign of {self}")

    def _mp_value(self):
        return mpmath.fsum(_mp_fraction(c) * mpmath.sqrt(d) for d, c in self._terms)

    def __float__(self) -> float:
        return float(self._mp_value())

    def to_decimal(self, digits: int = 15) -> str:
        with mpmath.workdps(digits + 10):
            return mpmath.nstr(self._mp_value(), digits)

    # --- display ----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for index, (d, c) in enumerate(self._terms):
            magnitude = abs(c)
            if d == 1:
                body = str(magnitude)
            elif magnitude == 1:
                body = f"sqrt({d})"
            else:
                body = f"{magnitude}*sqrt({d})"
            if index == 0:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"QuadraticSum({str(self)!r})"


def quad_sum_accumulate(acc: QuadraticSum, term: SqrtRational, weight: RationalLike) -> QuadraticSum:
    """Return acc + weight * term, with term's radical split into rational * sqrt(square-free)."""
    return acc + QuadraticSum.from_sqrt(term) * Fraction(weight)


def parse_rational(text: str) -> Fraction:
    """Parse '3', '-2/5' or '0.25' into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Invalid rational value: {text!r}") from e
