"""
Passage between the Slater F^(k)(l, l') parameters and the E^lambda(l, l')
parameters, and the S / D combinations of an equivalent-electron shell.

F -> E:
    E^lambda = (-1)^lambda sqrt((2l+1)(2l'+1)) sum_k (l k l'; 0 0 0)(l k l'; -lambda 0 lambda) F^k

E -> F (lambda summed over -min(l,l')..min(l,l') with E^-lambda = E^lambda):
    F^k = (2k+1) / sqrt((2l+1)(2l'+1)) (l k l'; 0 0 0)^-1 sum_lambda (-1)^lambda (l k l'; -lambda 0 lambda) E^|lambda|

The sqrt((2l+1)(2l'+1)) normalisation of the reverse formula reduces to
(2k+1)/(2l+1) for l = l' and makes the two maps mutually inverse for l != l'.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from shell_averages.angular.wigner import three_j
from shell_averages.energy.forms import E_BASIS, F_BASIS, Basis, EnergyForm, Scalar, sum_forms
from shell_averages.shared.errors import InvalidQuantumNumberError
from shell_averages.shared.numerics import QuadraticSum, SqrtRational, parse_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShellPair:
    ell: int
    ell_prime: int

    def __post_init__(self):
        for value in (self.ell, self.ell_prime):
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise InvalidQuantumNumberError(f"Orbital momentum must be a non-negative integer, got {value!r}")

    @classmethod
    def equivalent(cls, ell: int) -> "ShellPair":
        return cls(ell, ell)

    @property
    def allowed_k(self) -> tuple[int, ...]:
        return Basis.slater(self.ell, self.ell_prime).labels()

    @property
    def allowed_lambda(self) -> tuple[int, ...]:
        return Basis.aom(self.ell, self.ell_prime).labels()

    def basis(self, kind: str) -> Basis:
        return Basis(kind, self.ell, self.ell_prime)

    def is_equivalent(self) -> bool:
        return self.ell == self.ell_prime


def _normalise_values(pair: ShellPair, kind: str, values: Mapping[int, Scalar]) -> dict[int, QuadraticSum]:
    basis = pair.basis(kind)
    expected = set(basis.labels())
    if set(values) != expected:
        missing = sorted(expected - set(values))
        extra = sorted(set(values) - expected)
        raise InvalidQuantumNumberError(
            f"{basis} parameters must be exactly {sorted(expected)} (missing {missing}, unexpected {extra})"
        )
    return {label: QuadraticSum.coerce(values[label]) for label in sorted(values)}


class _Params:
    """Shared behaviour of the two parameter sets."""
    kind: str
    shell_pair: ShellPair
    values: dict[int, QuadraticSum]

    @property
    def basis(self) -> Basis:
        return self.shell_pair.basis(self.kind)

    def __getitem__(self, label: int) -> QuadraticSum:
        return self.values[label]

    def to_json(self) -> dict:
        basis = self.basis
        return {
            "ell": self.shell_pair.ell,
            "ell_prime": self.shell_pair.ell_prime,
            "basis": self.kind,
            "values": {basis.key(label): str(value) for label, value in self.values.items()},
        }


@dataclass(frozen=True, eq=True)
class SlaterParams(_Params):
    shell_pair: ShellPair
    values: dict[int, QuadraticSum] = field(hash=False)
    kind = F_BASIS

    def __post_init__(self):
        object.__setattr__(self, "values", _normalise_values(self.shell_pair, F_BASIS, self.values))


@dataclass(frozen=True, eq=True)
class AomParams(_Params):
    shell_pair: ShellPair
    values: dict[int, QuadraticSum] = field(hash=False)
    kind = E_BASIS

    def __post_init__(self):
        object.__setattr__(self, "values", _normalise_values(self.shell_pair, E_BASIS, self.values))

    @property
    def sigma(self) -> QuadraticSum:
        return self.values[0]


def params_from_json(data: dict) -> SlaterParams | AomParams:
    """Read the {"ell", "ell_prime", "basis", "values"} parameter schema."""
    try:
        ell = int(data["ell"])
        pair = ShellPair(ell, int(data.get("ell_prime", ell)))
        kind = data["basis"]
        raw = data["values"]
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidQuantumNumberError(f"Malformed parameter record: {e}") from e
    if kind not in (E_BASIS, F_BASIS):
        raise InvalidQuantumNumberError(f"Unknown basis {kind!r}")
    basis = pair.basis(kind)
    try:
        values = {basis.parse_key(key): QuadraticSum.from_rational(parse_rational(str(text)))
                  for key, text in raw.items()}
    except ValueError as e:
        raise InvalidQuantumNumberError(f"Malformed parameter value: {e}") from e
    cls = SlaterParams if kind == F_BASIS else AomParams
    return cls(pair, values)


# --- coefficient images -----------------------------------------------------

@lru_cache(maxsize=None)
def _f_to_e_images(ell: int, ell_prime: int) -> dict[int, EnergyForm]:
    """E^lambda as forms over the F basis."""
    pair = ShellPair(ell, ell_prime)
    f_basis = pair.basis(F_BASIS)
    norm = SqrtRational(1, Fraction((2 * ell + 1) * (2 * ell_prime + 1)))
    images = {}
    for lam in pair.allowed_lambda:
        phase = -1 if lam % 2 else 1
        coefficients = {}
        for k in pair.allowed_k:
            product = norm * three_j(ell, k, ell_prime, 0, 0, 0) * three_j(ell, k, ell_prime, -lam, 0, lam)
            coefficients[k] = QuadraticSum.from_sqrt(product) * phase
        images[lam] = EnergyForm(f_basis, coefficients)
    logger.debug(f"F -> E images built for l={ell}, l'={ell_prime}")
    return images


@lru_cache(maxsize=None)
def _e_to_f_images(ell: int, ell_prime: int) -> dict[int, EnergyForm]:
    """F^k as forms over the E basis, folding -lambda onto |lambda|."""
    pair = ShellPair(ell, ell_prime)
    e_basis = pair.basis(E_BASIS)
    span = min(ell, ell_prime)
    images = {}
    for k in pair.allowed_k:
        prefactor = (SqrtRational(1, Fraction((2 * k + 1) ** 2, (2 * ell + 1) * (2 * ell_prime + 1)))
                     * three_j(ell, k, ell_prime, 0, 0, 0).inverse())
        coefficients: dict[int, QuadraticSum] = {}
        for lam in range(-span, span + 1):
            phase = -1 if lam % 2 else 1
            term = QuadraticSum.from_sqrt(prefactor * three_j(ell, k, ell_prime, -lam, 0, lam)) * phase
            coefficients[abs(lam)] = coefficients.get(abs(lam), QuadraticSum.zero()) + term
        images[k] = EnergyForm(e_basis, coefficients)
    logger.debug(f"E -> F images built for l={ell}, l'={ell_prime}")
    return images


def f_to_e_images(pair: ShellPair) -> dict[int, EnergyForm]:
    return dict(_f_to_e_images(pair.ell, pair.ell_prime))


def e_to_f_images(pair: ShellPair) -> dict[int, EnergyForm]:
    return dict(_e_to_f_images(pair.ell, pair.ell_prime))


# --- transforms -------------------------------------------------------------

def f_to_e(p: SlaterParams) -> AomParams:
    images = _f_to_e_images(p.shell_pair.ell, p.shell_pair.ell_prime)
    return AomParams(p.shell_pair, {lam: form.evaluate(p.values) for lam, form in images.items()})


def e_to_f_component(p: AomParams, k: int) -> QuadraticSum:
    """A single F^k; k outside the allowed set is an error."""
    images = _e_to_f_images(p.shell_pair.ell, p.shell_pair.ell_prime)
    if k not in images:
        raise InvalidQuantumNumberError(
            f"k = {k} is not allowed for l={p.shell_pair.ell}, l'={p.shell_pair.ell_prime}; "
            f"allowed: {list(images)}"
        )
    return images[k].evaluate(p.values)


def e_to_f(p: AomParams) -> SlaterParams:
    return SlaterParams(p.shell_pair, {k: e_to_f_component(p, k) for k in p.shell_pair.allowed_k})


def convert_form(form: EnergyForm, kind: str) -> EnergyForm:
    """Rewrite a linear form over the other basis of the same shell pair."""
    if form.basis.kind == kind:
        return form
    if kind not in (E_BASIS, F_BASIS):
        raise ValueError(f"Unknown basis kind: {kind!r}")
    target = form.basis.with_kind(kind)
    if form.basis.kind == E_BASIS:
        images = _f_to_e_images(form.basis.ell, form.basis.ell_prime)
    else:
        images = _e_to_f_images(form.basis.ell, form.basis.ell_prime)
    return sum_forms((images[label] * value for label, value in form.coefficients.items()), target)


def s_and_d(p: AomParams) -> tuple[QuadraticSum, QuadraticSum]:
    """S = mean of E^lambda over lambda >= 1; D = (E^sigma - S) / (l + 1)."""
    ell = p.shell_pair.ell
    if not p.shell_pair.is_equivalent():
        raise InvalidQuantumNumberError("S and D are defined for equivalent electrons only (l = l')")
    if ell == 0:
        raise InvalidQuantumNumberError("S and D need at least one lambda >= 1 (l >= 1)")
    s_value = sum((p.values[lam] for lam in range(1, ell + 1)), QuadraticSum.zero()) / ell
    d_value = (p.sigma - s_value) / (ell + 1)
    return s_value, d_value


def uniform_aom(pair: ShellPair, value: Scalar) -> AomParams:
    return AomParams(pair, {lam: value for lam in pair.allowed_lambda})
