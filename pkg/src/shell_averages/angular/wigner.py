"""
Exact Wigner 3-jm and Clebsch-Gordan coefficients.

Values are computed with the Racah single-sum formula over exact factorials
and returned as SqrtRational. Phases follow Condon-Shortley throughout. The
module also provides the symmetrized/antisymmetrized sum rules for two equal
orbital momenta and the Gaunt c^k coefficients used by the Slater-Condon
oracle.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate
from operator import mul
from typing import Union

from shell_averages.shared.config import FACTORIAL_CAP
from shell_averages.shared.errors import CapacityError, InvalidQuantumNumberError
from shell_averages.shared.numerics import QuadraticSum, SqrtRational

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class HalfInt:
    """An integer or half-integer, stored doubled."""
    twice_value: int

    @classmethod
    def of(cls, value: Union["HalfInt", int, Fraction, str]) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise InvalidQuantumNumberError(f"Expected an integer or half-integer, got {value!r}")
        doubled = 2 * Fraction(value)
        if doubled.denominator != 1:
            raise InvalidQuantumNumberError(f"{value} is not an integer or half-integer")
        return cls(int(doubled))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __str__(self) -> str:
        return str(self.value)


AngularValue = Union[HalfInt, int, Fraction, str]


class Parity(Enum):
    """Exchange parity of a two-particle state: even couples to L = 0(2)(2l), odd to L = 1(2)(2l-1)."""
    EVEN = 1
    ODD = -1

    @classmethod
    def parse(cls, text: str) -> "Parity":
        key = text.strip().lower()
        if key in ("even", "+", "+1", "1"):
            return cls.EVEN
        if key in ("odd", "-", "-1"):
            return cls.ODD
        raise InvalidQuantumNumberError(f"Unknown parity: {text!r}")

    @property
    def sign(self) -> int:
        return self.value

    def total_momenta(self, ell: int) -> range:
        """The L values of the (anti)symmetrized part of (l) x (l)."""
        start = 0 if self is Parity.EVEN else 1
        return range(start, 2 * ell + 1, 2)


# --- factorials -------------------------------------------------------------

def _build_factorials(cap: int) -> list[int]:
    return list(accumulate(range(1, cap + 1), mul, initial=1))


_factorials = _build_factorials(FACTORIAL_CAP)


def set_factorial_cap(cap: int) -> None:
    """Rebuild the factorial table. Cached 3-jm values stay valid (they are cap-independent)."""
    global _factorials
    if cap < 1:
        raise CapacityError(f"Factorial cap must be positive, got {cap}")
    _factorials = _build_factorials(cap)
    logger.debug(f"Factorial table rebuilt up to {cap}!")


def _factorial(n: int) -> int:
    table = _factorials
    if n >= len(table):
        raise CapacityError(
            f"{n}! exceeds the factorial cap {len(table) - 1}; raise it with set_factorial_cap()"
        )
    return table[n]


# --- 3-jm and Clebsch-Gordan ------------------------------------------------

def _check_pair(tj: int, tm: int) -> None:
    if tj < 0:
        raise InvalidQuantumNumberError(f"j = {Fraction(tj, 2)} is negative")
    if (tj - tm) % 2:
        raise InvalidQuantumNumberError(
            f"j - m is not integral for j = {Fraction(tj, 2)}, m = {Fraction(tm, 2)}"
        )


@lru_cache(maxsize=None)
def _three_j_twice(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> SqrtRational:
    zero = SqrtRational.zero()
    if tm1 + tm2 + tm3 != 0:
        return zero
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm3) > tj3:
        return zero
    if tj3 < abs(tj1 - tj2) or tj3 > tj1 + tj2 or (tj1 + tj2 + tj3) % 2:
        return zero

    a = (tj1 + tj2 - tj3) // 2
    b = (tj1 - tj2 + tj3) // 2
    c = (-tj1 + tj2 + tj3) // 2
    triangle = Fraction(_factorial(a) * _factorial(b) * _factorial(c),
                        _factorial((tj1 + tj2 + tj3) // 2 + 1))
    projections = 1
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        projections *= _factorial((tj + tm) // 2) * _factorial((tj - tm) // 2)

    shift1 = (tj3 - tj2 + tm1) // 2
    shift2 = (tj3 - tj1 - tm2) // 2
    j1_minus_m1 = (tj1 - tm1) // 2
    j2_plus_m2 = (tj2 + tm2) // 2
    total = Fraction(0)
    for t in range(max(0, -shift1, -shift2), min(a, j1_minus_m1, j2_plus_m2) + 1):
        denominator = (_factorial(t) * _factorial(shift1 + t) * _factorial(shift2 + t)
                       * _factorial(a - t) * _factorial(j1_minus_m1 - t) * _factorial(j2_plus_m2 - t))
        total += Fraction(-1 if t % 2 else 1, denominator)
    if total == 0:
        return zero

    phase = -1 if ((tj1 - tj2 - tm3) // 2) % 2 else 1
    sign = phase if total > 0 else -phase
    return SqrtRational(sign, triangle * projections * total * total)


def three_j(j1: AngularValue, j2: AngularValue, j3: AngularValue,
            m1: AngularValue, m2: AngularValue, m3: AngularValue) -> SqrtRational:
    """
    Wigner 3-jm symbol (j1 j2 j3; m1 m2 m3).

    Returns zero when the triangle condition fails, when m1 + m2 + m3 != 0 or
    when some |m_i| > j_i. Raises InvalidQuantumNumberError when j_i - m_i is
    not integral.
    """
    twice = [HalfInt.of(x).twice_value for x in (j1, j2, j3, m1, m2, m3)]
    for tj, tm in zip(twice[:3], twice[3:]):
        _check_pair(tj, tm)
    return _three_j_twice(*twice)


def clebsch_gordan(j1: AngularValue, m1: AngularValue, j2: AngularValue,
                   m2: AngularValue, j: AngularValue, m: AngularValue) -> SqrtRational:
    """(j1 j2 m1 m2 | j m) = (-1)^(j1-j2+m) sqrt(2j+1) (j1 j2 j; m1 m2 -m)."""
    tj1, tm1, tj2, tm2, tj, tm = (HalfInt.of(x).twice_value for x in (j1, m1, j2, m2, j, m))
    for pair in ((tj1, tm1), (tj2, tm2), (tj, tm)):
        _check_pair(*pair)
    if tm != tm1 + tm2 or (tj1 + tj2 + tj) % 2:
        return SqrtRational.zero()
    symbol = _three_j_twice(tj1, tj2, tj, tm1, tm2, -tm)
    if not symbol:
        return symbol
    phase = -1 if ((tj1 - tj2 + tm) // 2) % 2 else 1
    return SqrtRational(phase, Fraction(tj + 1)) * symbol


# --- sum rules --------------------------------------------------------------

def _check_orbital(ell: int, *projections: int) -> None:
    if not isinstance(ell, int) or ell < 0:
        raise InvalidQuantumNumberError(f"Orbital momentum must be a non-negative integer, got {ell!r}")
    for m in projections:
        if not isinstance(m, int) or abs(m) > ell:
            raise InvalidQuantumNumberError(f"Projection {m!r} is not an integer in [-{ell}, {ell}]")


def sum_rule_lhs(ell: int, parity: Parity, m: int, mp: int, mu: int, mup: int) -> Fraction:
    """
    Sum over L in the parity class and over M of
    (2L+1) (L l l; -M m m') (L l l; -M mu mu').

    Only M = m + m' survives the projection selection rule. The sum is always
    rational; NotRationalError signals a broken invariant.
    """
    _check_orbital(ell, m, mp, mu, mup)
    if m + mp != mu + mup:
        return Fraction(0)
    big_m = m + mp
    acc = QuadraticSum.zero()
    for big_l in parity.total_momenta(ell):
        left = three_j(big_l, ell, ell, -big_m, m, mp)
        right = three_j(big_l, ell, ell, -big_m, mu, mup)
        acc += QuadraticSum.from_sqrt(left * right) * (2 * big_l + 1)
    return acc.to_fraction()


def sum_rule_rhs(parity: Parity, m: int, mp: int, mu: int, mup: int) -> Fraction:
    direct = int(m == mu and mp == mup)
    swapped = int(mp == mu and m == mup)
    return Fraction(direct + parity.sign * swapped, 2)


def sum_rule_clebsch_gordan(ell: int, parity: Parity, m: int, mp: int, mu: int, mup: int) -> Fraction:
    """Sum over L in the parity class and M of (l l mu mu' | L M)(l l m m' | L M)."""
    _check_orbital(ell, m, mp, mu, mup)
    acc = QuadraticSum.zero()
    for big_l in parity.total_momenta(ell):
        for big_m in range(-big_l, big_l + 1):
            product = clebsch_gordan(ell, mu, ell, mup, big_l, big_m) * clebsch_gordan(ell, m, ell, mp, big_l, big_m)
            acc += QuadraticSum.from_sqrt(product)
    return acc.to_fraction()


# --- Gaunt coefficients -----------------------------------------------------

@lru_cache(maxsize=None)
def gaunt_ck(ell1: int, m1: int, ell2: int, m2: int, k: int) -> SqrtRational:
    """
    c^k(l1 m1, l2 m2) = (-1)^m1 sqrt((2l1+1)(2l2+1)) (l1 k l2; 0 0 0) (l1 k l2; -m1 m1-m2 m2).
    """
    _check_orbital(ell1, m1)
    _check_orbital(ell2, m2)
    if not isinstance(k, int) or k < 0:
        raise InvalidQuantumNumberError(f"Multipole rank must be a non-negative integer, got {k!r}")
    reduced = three_j(ell1, k, ell2, 0, 0, 0)
    if not reduced:
        return reduced
    projected = three_j(ell1, k, ell2, -m1, m1 - m2, m2)
    phase = -1 if m1 % 2 else 1
    norm = SqrtRational(phase, Fraction((2 * ell1 + 1) * (2 * ell2 + 1)))
    return norm * reduced * projected
