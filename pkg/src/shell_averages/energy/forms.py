"""
Exact linear energy forms.

An EnergyForm is a linear combination of the parameters of one basis: the
E^lambda (angular-overlap) parameters or the Slater F^(k) parameters of a
shell pair. Coefficients are QuadraticSum values; zero coefficients are never
stored, so equality is structural.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from shell_averages.shared.config import LAMBDA_NAMES
from shell_averages.shared.errors import BasisMismatchError, InvalidQuantumNumberError
from shell_averages.shared.numerics import QuadraticSum, SqrtRational

E_BASIS = "E"
F_BASIS = "F"


@dataclass(frozen=True)
class Basis:
    """Parameter basis of a shell pair: kind 'E' (lambda labels) or 'F' (k labels)."""
    kind: str
    ell: int
    ell_prime: int | None = None

    def __post_init__(self):
        if self.kind not in (E_BASIS, F_BASIS):
            raise ValueError(f"Unknown basis kind: {self.kind!r}")
        if self.ell_prime is None:
            object.__setattr__(self, "ell_prime", self.ell)
        for value in (self.ell, self.ell_prime):
            if not isinstance(value, int) or value < 0:
                raise InvalidQuantumNumberError(f"Orbital momentum must be a non-negative integer, got {value!r}")

    @classmethod
    def aom(cls, ell: int, ell_prime: int | None = None) -> "Basis":
        return cls(E_BASIS, ell, ell_prime)

    @classmethod
    def slater(cls, ell: int, ell_prime: int | None = None) -> "Basis":
        return cls(F_BASIS, ell, ell_prime)

    def with_kind(self, kind: str) -> "Basis":
        return Basis(kind, self.ell, self.ell_prime)

    def labels(self) -> tuple[int, ...]:
        if self.kind == E_BASIS:
            return tuple(range(min(self.ell, self.ell_prime) + 1))
        return tuple(range(abs(self.ell - self.ell_prime), self.ell + self.ell_prime + 1, 2))

    def key(self, label: int) -> str:
        """JSON key of a parameter: 'sigma', 'pi', ... or 'F0', 'F2', ..."""
        if self.kind == F_BASIS:
            return f"F{label}"
        return LAMBDA_NAMES[label] if label < len(LAMBDA_NAMES) else f"lambda{label}"

    def symbol(self, label: int) -> str:
        if self.kind == F_BASIS:
            return f"F^{label}"
        return f"E^{self.key(label)}"

    def parse_key(self, key: str) -> int:
        """Inverse of key()/symbol(); bare integers are accepted as labels."""
        text = key.strip()
        for label in self.labels():
            if text in (self.key(label), self.symbol(label), str(label)):
                return label
        raise InvalidQuantumNumberError(f"{key!r} is not a parameter of {self}")

    def __str__(self) -> str:
        if self.ell == self.ell_prime:
            return f"{self.kind}(l={self.ell})"
        return f"{self.kind}(l={self.ell}, l'={self.ell_prime})"


Scalar = int | Fraction | QuadraticSum | SqrtRational


class EnergyForm:
    """Immutable linear form sum_label c_label * P_label over one Basis."""
    __slots__ = ("basis", "_coefficients")

    def __init__(self, basis: Basis, coefficients: Mapping[int, Scalar] | None = None):
        allowed = set(basis.labels())
        collected = {}
        for label, value in (coefficients or {}).items():
            if label not in allowed:
                raise InvalidQuantumNumberError(f"Label {label!r} is not a parameter of {basis}")
            value = QuadraticSum.coerce(value)
            if value:
                collected[label] = value
        self.basis = basis
        self._coefficients = tuple(sorted(collected.items()))

    @classmethod
    def zero(cls, basis: Basis) -> "EnergyForm":
        return cls(basis)

    @classmethod
    def parameter(cls, basis: Basis, label: int) -> "EnergyForm":
        return cls(basis, {label: 1})

    @property
    def coefficients(self) -> dict[int, QuadraticSum]:
        return dict(self._coefficients)

    def coefficient(self, label: int) -> QuadraticSum:
        if label not in self.basis.labels():
            raise InvalidQuantumNumberError(f"Label {label!r} is not a parameter of {self.basis}")
        return self.coefficients.get(label, QuadraticSum.zero())

    def _check_basis(self, other: "EnergyForm") -> None:
        if self.basis != other.basis:
            raise BasisMismatchError(f"Cannot combine forms over {self.basis} and {other.basis}")

    def __add__(self, other):
        if not isinstance(other, EnergyForm):
            return NotImplemented
        self._check_basis(other)
        merged = self.coefficients
        for label, value in other._coefficients:
            merged[label] = merged.get(label, QuadraticSum.zero()) + value
        return EnergyForm(self.basis, merged)

    def __neg__(self) -> "EnergyForm":
        return EnergyForm(self.basis, {label: -value for label, value in self._coefficients})

    def __sub__(self, other):
        if not isinstance(other, EnergyForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, factor):
        if not isinstance(factor, (int, Fraction, QuadraticSum, SqrtRational)):
            return NotImplemented
        return EnergyForm(self.basis, {label: value * factor for label, value in self._coefficients})

    __rmul__ = __mul__

    def __truediv__(self, divisor):
        if not isinstance(divisor, (int, Fraction)):
            return NotImplemented
        return EnergyForm(self.basis, {label: value / divisor for label, value in self._coefficients})

    def __eq__(self, other) -> bool:
        if not isinstance(other, EnergyForm):
            return NotImplemented
        return self.basis == other.basis and self._coefficients == other._coefficients

    def __hash__(self) -> int:
        return hash((self.basis, self._coefficients))

    def __bool__(self) -> bool:
        return bool(self._coefficients)

    def is_zero(self) -> bool:
        return not self._coefficients

    def is_rational(self) -> bool:
        return all(value.is_rational() for _, value in self._coefficients)

    def evaluate(self, values: Mapping[int, Scalar]) -> QuadraticSum:
        """Substitute parameter values; every label carried by the form must be given."""
        total = QuadraticSum.zero()
        for label, coefficient in self._coefficients:
            if label not in values:
                raise InvalidQuantumNumberError(f"No value given for {self.basis.symbol(label)}")
            total += coefficient * QuadraticSum.coerce(values[label])
        return total

    def to_json(self) -> dict:
        return {
            "basis": self.basis.kind,
            "ell": self.basis.ell,
            "coeffs": {self.basis.key(label): str(value) for label, value in self._coefficients},
        }

    def __str__(self) -> str:
        if not self._coefficients:
            return "0"
        parts = []
        for index, (label, value) in enumerate(self._coefficients):
            symbol = self.basis.symbol(label)
            negative = value.is_rational() and value.to_fraction() < 0
            magnitude = -value if negative else value
            if magnitude == 1:
                body = symbol
            elif magnitude.is_rational():
                body = f"{magnitude} {symbol}"
            else:
                body = f"({magnitude}) {symbol}"
            if index == 0:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f" - {body}" if negative else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"EnergyForm({self.basis}, {str(self)!r})"


def sum_forms(forms: Iterable[EnergyForm], basis: Basis) -> EnergyForm:
    """Add forms over one basis by merging coefficient maps once."""
    merged: dict[int, QuadraticSum] = {}
    for form in forms:
        if form.basis != basis:
            raise BasisMismatchError(f"Cannot add a form over {form.basis} to a sum over {basis}")
        for label, value in form.coefficients.items():
            merged[label] = merged.get(label, QuadraticSum.zero()) + value
    return EnergyForm(basis, merged)
