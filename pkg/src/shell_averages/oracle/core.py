"""
Brute-force reference values from explicit determinants.

Sector traces sum the diagonal Coulomb elements over every determinant of one
M_S. Because the interaction is spin-free, each level of spin S contributes
once to every sector with |M_S| <= S, so trace(M_S = S) - trace(M_S = S + 1)
is the summed energy of the spin-S states.
"""
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

from shell_averages.counting.core import h_count
from shell_averages.counting.generating import ShellConfig
from shell_averages.energy.forms import E_BASIS, F_BASIS, Basis, EnergyForm, Scalar, sum_forms
from shell_averages.energy.parametrization import ShellPair, convert_form, e_to_f, uniform_aom
from shell_averages.oracle.determinants import Determinant, enumerate_determinants
from shell_averages.oracle.slater_condon import coulomb_element, pair_energy
from shell_averages.shared.config import MATRIX_DIMENSION_CAP
from shell_averages.shared.errors import CapacityError, InvalidQuantumNumberError
from shell_averages.shared.numerics import QuadraticSum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SectorTrace:
    ell: int
    n: int
    twice_ms: int
    trace: EnergyForm
    determinants: int


def _in_basis(form: EnergyForm, kind: str) -> EnergyForm:
    return convert_form(form, kind)


@lru_cache(maxsize=None)
def _sector_trace_f(ell: int, n: int, twice_ms: int) -> tuple[EnergyForm, int]:
    pairs: Counter = Counter()
    determinants = enumerate_determinants(ell, n, twice_ms)
    for determinant in determinants:
        pairs.update(combinations(determinant.indices, 2))
    trace = sum_forms((pair_energy(ell, i, j) * count for (i, j), count in pairs.items()), Basis.slater(ell))
    logger.debug(f"Sector l={ell} N={n} 2M_S={twice_ms}: {len(determinants)} determinants")
    return trace, len(determinants)


def sector_trace(ell: int, n: int, twice_ms: int, basis: str = E_BASIS) -> SectorTrace:
    """Sum of the diagonal Coulomb elements over all determinants with the given M_S."""
    ShellConfig(ell, n)
    if (n - twice_ms) % 2:
        raise InvalidQuantumNumberError(f"N/2 - M_S is not integral for N = {n}, 2M_S = {twice_ms}")
    trace, count = _sector_trace_f(ell, n, twice_ms)
    return SectorTrace(ell, n, twice_ms, _in_basis(trace, basis), count)


def spin_resolved_average_oracle(ell: int, n: int, twice_s: int, basis: str = E_BASIS) -> EnergyForm:
    """[trace(M_S = S) - trace(M_S = S + 1)] / H_l(N, S)."""
    states = h_count(ell, n, twice_s)
    if states == 0:
        raise InvalidQuantumNumberError(f"No states with S = {Fraction(twice_s, 2)} in l={ell}, N={n}")
    upper, _ = _sector_trace_f(ell, n, twice_s)
    lower, _ = _sector_trace_f(ell, n, twice_s + 2)
    return _in_basis((upper - lower) / states, basis)


def configuration_average_oracle(ell: int, n: int, basis: str = E_BASIS) -> EnergyForm:
    """Sum of all sector traces over C(4l+2, N)."""
    shell = ShellConfig(ell, n)
    reach = min(n, shell.capacity - n)
    traces = (_sector_trace_f(ell, n, twice_ms)[0] for twice_ms in range(-reach, reach + 1, 2))
    return _in_basis(sum_forms(traces, Basis.slater(ell)) / comb(shell.capacity, n), basis)


@dataclass
class DeterminantMatrix:
    """Coulomb matrix over the determinants of l^N; only non-zero elements are stored."""
    ell: int
    n: int
    basis: Basis
    determinants: list[Determinant]
    elements: dict[tuple[int, int], EnergyForm] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.determinants)

    def element(self, row: int, col: int) -> EnergyForm:
        return self.elements.get((row, col), EnergyForm.zero(self.basis))

    def evaluate(self, values: dict[int, Scalar]) -> dict[tuple[int, int], QuadraticSum]:
        evaluated = {position: form.evaluate(values) for position, form in self.elements.items()}
        return {position: value for position, value in evaluated.items() if value}

    def is_scalar(self, values: dict[int, Scalar], diagonal: Scalar | None = None) -> bool:
        """True when the evaluated matrix is a multiple of the identity (diagonal times it, if given)."""
        evaluated = self.evaluate(values)
        if any(row != col for row, col in evaluated):
            return False
        entries = {evaluated.get((i, i), QuadraticSum.zero()) for i in range(self.dimension)}
        if diagonal is not None:
            entries.add(QuadraticSum.coerce(diagonal))
        return len(entries) <= 1

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "n": self.n,
            "basis": self.basis.kind,
            "dimension": self.dimension,
            "determinants": [str(d) for d in self.determinants],
            "elements": [
                {"row": row, "col": col, "coeffs": form.to_json()["coeffs"]}
                for (row, col), form in sorted(self.elements.items())
            ],
        }

    def csv_rows(self) -> list[list[str]]:
        rows = [["row", "col", "parameter", "coefficient"]]
        for (row, col), form in sorted(self.elements.items()):
            for label, value in form.coefficients.items():
                rows.append([str(row), str(col), self.basis.key(label), str(value)])
        return rows


def determinant_matrix(ell: int, n: int, basis: str = F_BASIS, cap: int = MATRIX_DIMENSION_CAP) -> DeterminantMatrix:
    shell = ShellConfig(ell, n)
    dimension = comb(shell.capacity, n)
    if dimension > cap:
        raise CapacityError(f"l={ell}, N={n} has {dimension} determinants, above the cap {cap}")
    determinants = enumerate_determinants(ell, n)
    blocks: dict[tuple[int, int], list[int]] = defaultdict(list)
    for position, determinant in enumerate(determinants):
        blocks[determinant.twice_ms, determinant.ml].append(position)

    elements = {}
    for members in blocks.values():
        for x, row in enumerate(members):
            for col in members[x:]:
                d1, d2 = determinants[row], determinants[col]
                if (d1.mask ^ d2.mask).bit_count() > 4:
                    continue
                form = coulomb_element(ell, d1, d2)
                if form:
                    form = _in_basis(form, basis)
                    elements[row, col] = form
                    elements[col, row] = form
    logger.info(f"Built the {dimension}x{dimension} matrix of l={ell}, N={n}: {len(elements)} non-zero elements")
    return DeterminantMatrix(ell, n, Basis(basis, ell), determinants, elements)


def degeneracy_check(ell: int, n: int, c: Scalar, cap: int = MATRIX_DIMENSION_CAP) -> bool:
    """
    With every E^lambda equal to c (F^0 = c, F^k>0 = 0) the matrix must be
    N(N-1)/2 c times the identity.
    """
    matrix = determinant_matrix(ell, n, F_BASIS, cap)
    slater = e_to_f(uniform_aom(ShellPair.equivalent(ell), c))
    expected = QuadraticSum.coerce(c) * Fraction(n * (n - 1), 2)
    return matrix.is_scalar(slater.values, expected)
