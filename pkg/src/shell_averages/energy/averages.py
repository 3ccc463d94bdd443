"""
Closed-form energy averages of nl^N in the E^lambda parametrization, and the
exact two-electron term energies they are built from.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from shell_averages.angular.wigner import Parity, sum_rule_lhs, three_j
from shell_averages.counting.core import h_count, spin_excess, spin_excess_mean_closed
from shell_averages.counting.generating import ShellConfig
from shell_averages.energy.forms import Basis, EnergyForm, Scalar, sum_forms
from shell_averages.energy.parametrization import AomParams, s_and_d
from shell_averages.shared.errors import ConsistencyError, InvalidQuantumNumberError
from shell_averages.shared.numerics import QuadraticSum

logger = logging.getLogger(__name__)

L_LETTERS = "SPDFGHIKLMNOQRTUV"


@dataclass(frozen=True, order=True)
class TermLabel:
    """A 2S+1 L term, with S stored doubled."""
    twice_s: int
    big_l: int

    def __post_init__(self):
        if self.twice_s < 0 or self.big_l < 0:
            raise InvalidQuantumNumberError(f"Invalid term: 2S = {self.twice_s}, L = {self.big_l}")

    @classmethod
    def parse(cls, text: str) -> "TermLabel":
        """Read '3P', '1D', ... (multiplicity followed by an L letter)."""
        text = text.strip().upper()
        if len(text) < 2 or not text[:-1].isdigit() or text[-1] not in L_LETTERS:
            raise InvalidQuantumNumberError(f"Cannot read term symbol {text!r}")
        return cls(int(text[:-1]) - 1, L_LETTERS.index(text[-1]))

    @property
    def multiplicity(self) -> int:
        return self.twice_s + 1

    @property
    def spin(self) -> Fraction:
        return Fraction(self.twice_s, 2)

    @property
    def degeneracy(self) -> int:
        return (self.twice_s + 1) * (2 * self.big_l + 1)

    def __str__(self) -> str:
        letter = L_LETTERS[self.big_l] if self.big_l < len(L_LETTERS) else f"[L={self.big_l}]"
        return f"{self.multiplicity}{letter}"


@dataclass(frozen=True)
class SDForm:
    """s_coefficient * S + d_coefficient * D for a shell of orbital momentum ell >= 1."""
    ell: int
    s_coefficient: Fraction
    d_coefficient: Fraction

    def to_e_form(self) -> EnergyForm:
        basis = Basis.aom(self.ell)
        sigma = self.d_coefficient / (self.ell + 1)
        per_lambda = (self.s_coefficient - sigma) / self.ell
        coefficients = {0: sigma}
        coefficients.update({lam: per_lambda for lam in range(1, self.ell + 1)})
        return EnergyForm(basis, coefficients)

    def evaluate(self, p: AomParams) -> QuadraticSum:
        s_value, d_value = s_and_d(p)
        return s_value * self.s_coefficient + d_value * self.d_coefficient

    def to_json(self) -> dict:
        return {"S": str(self.s_coefficient), "D": str(self.d_coefficient)}

    def __str__(self) -> str:
        return f"{self.s_coefficient} S + {self.d_coefficient} D"


def _pairs(n: int) -> Fraction:
    return Fraction(n * (n - 1), 2)


def average_energy(ell: int, n: int) -> EnergyForm:
    """
    Average interaction energy over all C(4l+2, N) states:
    N(N-1)/2 / (4l+1) * (E^sigma + 4 sum_{lambda>=1} E^lambda).

    For l = 0 this is N(N-1)/2 E^sigma.
    """
    ShellConfig(ell, n)
    share = _pairs(n) / (4 * ell + 1)
    coefficients = {0: share}
    coefficients.update({lam: 4 * share for lam in range(1, ell + 1)})
    return EnergyForm(Basis.aom(ell), coefficients)


def _require_open_shell(ell: int) -> None:
    if ell < 1:
        raise InvalidQuantumNumberError("S and D need l >= 1")


def average_energy_sd(ell: int, n: int) -> SDForm:
    """The configuration average as N(N-1)/2 S + (l+1)/(4l+1) N(N-1)/2 D."""
    ShellConfig(ell, n)
    _require_open_shell(ell)
    return SDForm(ell, _pairs(n), spin_excess_mean_closed(ell, n))


def _check_spin(ell: int, n: int, twice_s: int) -> None:
    if h_count(ell, n, twice_s) == 0:
        raise InvalidQuantumNumberError(
            f"No states with S = {Fraction(twice_s, 2)} in l={ell}, N={n}"
        )


def spin_average_sd(ell: int, n: int, twice_s: int) -> SDForm:
    ShellConfig(ell, n)
    _require_open_shell(ell)
    _check_spin(ell, n, twice_s)
    return SDForm(ell, _pairs(n), spin_excess(n, twice_s))


def spin_average(ell: int, n: int, twice_s: int) -> EnergyForm:
    """
    Average energy of the states of total spin S:
    N(N-1)/2 S + (1/2)[N/2 (N/2 + 1) - S(S+1)] D, expanded over E^lambda.
    """
    ShellConfig(ell, n)
    if ell == 0:
        _check_spin(ell, n, twice_s)
        return EnergyForm(Basis.aom(0), {0: _pairs(n)})
    return spin_average_sd(ell, n, twice_s).to_e_form()


# --- two electrons ----------------------------------------------------------

def _check_two_electron_term(ell: int, term: TermLabel) -> None:
    _require_open_shell(ell)
    if term.twice_s not in (0, 2):
        raise InvalidQuantumNumberError(f"{term}: two electrons have S = 0 or 1")
    if term.big_l > 2 * ell:
        raise InvalidQuantumNumberError(f"{term}: L exceeds 2l = {2 * ell}")
    # Pauli: singlets take even L, triplets odd L
    if (term.big_l % 2 == 0) != (term.twice_s == 0):
        raise InvalidQuantumNumberError(f"{term} is forbidden for two equivalent l={ell} electrons")


def term_energy_two_electrons(ell: int, term: TermLabel) -> EnergyForm:
    """(2l+1) sum_lambda (l l L; 0 lambda -lambda)^2 E^|lambda|."""
    _check_two_electron_term(ell, term)
    coefficients: dict[int, Fraction] = {}
    for lam in range(-ell, ell + 1):
        weight = three_j(ell, ell, term.big_l, 0, lam, -lam).square()
        coefficients[abs(lam)] = coefficients.get(abs(lam), Fraction(0)) + (2 * ell + 1) * weight
    return EnergyForm(Basis.aom(ell), coefficients)


def two_electron_terms(ell: int) -> list[TermLabel]:
    _require_open_shell(ell)
    return [TermLabel(0 if big_l % 2 == 0 else 2, big_l) for big_l in range(2 * ell + 1)]


def two_electron_term_table(ell: int) -> list[tuple[TermLabel, EnergyForm]]:
    return [(term, term_energy_two_electrons(ell, term)) for term in two_electron_terms(ell)]


def _parity_of_spin(twice_s: int) -> Parity:
    if twice_s == 0:
        return Parity.EVEN
    if twice_s == 2:
        return Parity.ODD
    raise InvalidQuantumNumberError(f"Two electrons have S = 0 or 1, got S = {Fraction(twice_s, 2)}")


def _weighted_term_average(ell: int, twice_s: int) -> EnergyForm:
    momenta = _parity_of_spin(twice_s).total_momenta(ell)
    weighted = sum_forms(
        ((2 * big_l + 1) * term_energy_two_electrons(ell, TermLabel(twice_s, big_l)) for big_l in momenta),
        Basis.aom(ell),
    )
    return weighted / sum(2 * big_l + 1 for big_l in momenta)


def _sum_rule_average(ell: int, twice_s: int) -> EnergyForm:
    """Collapse the L sum with the (anti)symmetrized sum rule at (m, m', mu, mu') = (0, lambda, 0, lambda)."""
    parity = _parity_of_spin(twice_s)
    momenta = parity.total_momenta(ell)
    coefficients: dict[int, Fraction] = {}
    for lam in range(-ell, ell + 1):
        inner = sum_rule_lhs(ell, parity, 0, lam, 0, lam)
        coefficients[abs(lam)] = coefficients.get(abs(lam), Fraction(0)) + (2 * ell + 1) * inner
    return EnergyForm(Basis.aom(ell), coefficients) / sum(2 * big_l + 1 for big_l in momenta)


def _closed_two_electron_average(ell: int, twice_s: int) -> EnergyForm:
    if _parity_of_spin(twice_s) is Parity.EVEN:
        return EnergyForm(Basis.aom(ell), {lam: Fraction(1, ell + 1) for lam in range(ell + 1)})
    return EnergyForm(Basis.aom(ell), {lam: Fraction(1, ell) for lam in range(1, ell + 1)})


def spin_average_two_electrons(ell: int, twice_s: int) -> EnergyForm:
    """
    (2L+1)-weighted mean of the two-electron term energies of one spin.

    The weighted mean, its sum-rule reduction and the closed form
    (E^sigma + sum E^lambda)/(l+1) for singlets, sum E^lambda / l for triplets
    must agree exactly; ConsistencyError otherwise.
    """
    _require_open_shell(ell)
    closed = _closed_two_electron_average(ell, twice_s)
    for route, form in (("term average", _weighted_term_average(ell, twice_s)),
                        ("sum rule", _sum_rule_average(ell, twice_s))):
        if form != closed:
            raise ConsistencyError(f"l={ell}, S={Fraction(twice_s, 2)}: {route} gives {form}, closed form {closed}")
    return closed


def satisfies_strong_hund(p: AomParams) -> bool:
    """True when D > 0, i.e. the spin-resolved average decreases as S grows."""
    _, d_value = s_and_d(p)
    return d_value.sign() > 0


def evaluate_uniform(form: EnergyForm, value: Scalar) -> QuadraticSum:
    """Value of a form with every parameter set to the same number."""
    return form.evaluate({label: value for label in form.basis.labels()})
