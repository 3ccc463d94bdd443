from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from conftest import e_form, f_form
from shell_averages.counting.core import allowed_spins
from shell_averages.energy.averages import (
    TermLabel, average_energy, spin_average, term_energy_two_electrons, two_electron_terms
)
from shell_averages.energy.forms import E_BASIS, F_BASIS, EnergyForm
from shell_averages.energy.parametrization import convert_form
from shell_averages.oracle.core import (
    configuration_average_oracle, degeneracy_check, determinant_matrix, sector_trace,
    spin_resolved_average_oracle
)
from shell_averages.oracle.determinants import Determinant, SpinOrbital, enumerate_determinants
from shell_averages.oracle.slater_condon import coulomb_element, pair_energy
from shell_averages.shared.errors import BasisMismatchError, CapacityError, InvalidQuantumNumberError


def closed_orbital_pair(ell: int) -> Determinant:
    return Determinant.from_orbitals(ell, [SpinOrbital(-1, 0), SpinOrbital(1, 0)])


# unrelated F^k so no two terms collide
SLATER_VALUES = {0: Fraction(1), 2: Fraction(7, 10), 4: Fraction(3, 20), 6: Fraction(1, 50)}


def dense_spectrum(ell: int, n: int) -> tuple[np.ndarray, dict[int, Fraction]]:
    matrix = determinant_matrix(ell, n)
    values = {label: SLATER_VALUES[label] for label in matrix.basis.labels()}
    dense = np.zeros((matrix.dimension, matrix.dimension))
    for (row, col), value in matrix.evaluate(values).items():
        dense[row, col] = float(value)
    return np.linalg.eigvalsh(dense), values


def term_spectrum(terms: list[tuple[TermLabel, EnergyForm]], values: dict[int, Fraction]) -> np.ndarray:
    levels = []
    for term, form in terms:
        levels += [float(form.evaluate(values))] * term.degeneracy
    return np.sort(levels)


class TestDeterminants:
    def test_counts(self):
        assert len(enumerate_determinants(1, 2)) == 15
        assert len(enumerate_determinants(1, 2, twice_ms=2)) == 3
        assert len(enumerate_determinants(2, 3)) == 120

    def test_order_is_lexicographic(self):
        determinants = enumerate_determinants(1, 3)
        assert [d.indices for d in determinants] == sorted(d.indices for d in determinants)

    def test_spin_orbital_indexing(self):
        assert SpinOrbital.from_index(1, 4) == SpinOrbital(1, 0)
        assert SpinOrbital.from_index(1, 0) == SpinOrbital(-1, -1)
        for index in range(6):
            assert SpinOrbital.from_index(1, index).index(1) == index
        with pytest.raises(InvalidQuantumNumberError):
            SpinOrbital.from_index(1, 6)

    def test_quantum_numbers(self):
        pair = closed_orbital_pair(1)
        assert str(pair) == "|0- 0+|"
        assert (pair.n_electrons, pair.twice_ms, pair.ml) == (2, 0, 0)

    def test_double_occupation(self):
        with pytest.raises(InvalidQuantumNumberError):
            Determinant.from_orbitals(1, [SpinOrbital(1, 0), SpinOrbital(1, 0)])


class TestSlaterCondon:
    def test_closed_orbital_pair(self):
        pair = closed_orbital_pair(1)
        assert coulomb_element(1, pair, pair) == f_form(1, F0=1, F2="4/25")

    def test_triplet_pair_energy(self):
        # spin-up m = 1 and m = 0
        assert pair_energy(1, 5, 4) == f_form(1, F0=1, F2="-1/5")
        assert pair_energy(1, 5, 3) == f_form(1, F0=1, F2="-1/5")

    def test_hermitian(self):
        determinants = enumerate_determinants(1, 2)
        for d1, d2 in combinations(determinants, 2):
            assert coulomb_element(1, d1, d2) == coulomb_element(1, d2, d1)

    def test_different_projections_vanish(self):
        d1 = Determinant.from_orbitals(1, [SpinOrbital(1, 1), SpinOrbital(1, 0)])
        d2 = Determinant.from_orbitals(1, [SpinOrbital(1, 1), SpinOrbital(-1, 0)])
        assert coulomb_element(1, d1, d2).is_zero()

    def test_three_orbital_difference_vanishes(self):
        d1 = Determinant.from_orbitals(2, [SpinOrbital(1, 2), SpinOrbital(1, -2), SpinOrbital(-1, 0)])
        d2 = Determinant.from_orbitals(2, [SpinOrbital(1, 1), SpinOrbital(-1, -1), SpinOrbital(1, 0)])
        assert (d1.twice_ms, d1.ml) == (d2.twice_ms, d2.ml)
        assert (d1.mask ^ d2.mask).bit_count() == 6
        assert coulomb_element(2, d1, d2).is_zero()
        assert coulomb_element(2, d2, d1).is_zero()

    def test_mismatched_shells(self):
        with pytest.raises(BasisMismatchError):
            coulomb_element(2, closed_orbital_pair(1), closed_orbital_pair(1))
        with pytest.raises(BasisMismatchError):
            coulomb_element(1, closed_orbital_pair(1), Determinant.from_orbitals(1, [SpinOrbital(1, 0)]))


class TestSectorTraces:
    def test_aligned_p_squared(self):
        trace = sector_trace(1, 2, 2, basis=F_BASIS)
        assert trace.determinants == 3
        assert trace.trace == f_form(1, F0=3, F2="-3/5")
        assert sector_trace(1, 2, 2).trace == e_form(1, pi=3)

    def test_basis_independence(self):
        for ell in range(3):
            for n in range(4 * ell + 3):
                reach = min(n, 4 * ell + 2 - n)
                for twice_ms in range(-reach, reach + 1, 2):
                    in_f = sector_trace(ell, n, twice_ms, basis=F_BASIS).trace
                    assert convert_form(in_f, E_BASIS) == sector_trace(ell, n, twice_ms).trace

    def test_projection_parity(self):
        with pytest.raises(InvalidQuantumNumberError):
            sector_trace(1, 2, 1)


class TestOracleAverages:
    @pytest.mark.parametrize("ell", range(3))
    def test_spin_averages_match_closed_form(self, ell):
        for n in range(4 * ell + 3):
            for twice_s in allowed_spins(ell, n):
                assert spin_resolved_average_oracle(ell, n, twice_s) == spin_average(ell, n, twice_s)

    @pytest.mark.slow
    def test_f_shell_spin_averages(self):
        for n in range(15):
            for twice_s in allowed_spins(3, n):
                assert spin_resolved_average_oracle(3, n, twice_s) == spin_average(3, n, twice_s)

    def test_half_filled_d_shell(self):
        assert spin_resolved_average_oracle(2, 5, 5) == e_form(2, pi=5, delta=5)

    def test_g_shell_spot_checks(self):
        for n in (2, 3):
            for twice_s in allowed_spins(4, n):
                assert spin_resolved_average_oracle(4, n, twice_s) == spin_average(4, n, twice_s)

    @pytest.mark.parametrize("ell", range(3))
    def test_configuration_average(self, ell):
        for n in range(4 * ell + 3):
            assert configuration_average_oracle(ell, n) == average_energy(ell, n)

    def test_empty_spin_sector(self):
        with pytest.raises(InvalidQuantumNumberError):
            spin_resolved_average_oracle(1, 4, 4)


class TestDeterminantMatrix:
    def test_p_squared(self):
        matrix = determinant_matrix(1, 2)
        assert matrix.dimension == 15
        assert all(matrix.element(col, row) == form for (row, col), form in matrix.elements.items())
        position = matrix.determinants.index(closed_orbital_pair(1))
        assert matrix.element(position, position) == f_form(1, F0=1, F2="4/25")

    @pytest.mark.parametrize("ell", [1, 2, 3])
    def test_two_electron_eigenvalues_are_term_energies(self, ell):
        eigenvalues, values = dense_spectrum(ell, 2)
        terms = [(term, convert_form(term_energy_two_electrons(ell, term), F_BASIS))
                 for term in two_electron_terms(ell)]
        np.testing.assert_allclose(eigenvalues, term_spectrum(terms, values), atol=1e-10)

    def test_p_cubed_eigenvalues_are_term_energies(self):
        eigenvalues, values = dense_spectrum(1, 3)
        terms = [
            (TermLabel.parse("4S"), f_form(1, F0=3, F2="-3/5")),
            (TermLabel.parse("2D"), f_form(1, F0=3, F2="-6/25")),
            (TermLabel.parse("2P"), f_form(1, F0=3)),
        ]
        np.testing.assert_allclose(eigenvalues, term_spectrum(terms, values), atol=1e-10)

    def test_trace_matches_sector_traces(self):
        matrix = determinant_matrix(1, 3, basis=E_BASIS)
        diagonal = [matrix.element(i, i) for i in range(matrix.dimension)]
        total = diagonal[0]
        for form in diagonal[1:]:
            total = total + form
        assert total / matrix.dimension == average_energy(1, 3)

    @pytest.mark.parametrize("ell, n", [(1, 2), (1, 3), (2, 2), (2, 3)])
    def test_uniform_parameters_are_degenerate(self, ell, n):
        assert degeneracy_check(ell, n, Fraction(3, 2))

    def test_split_parameters_are_not_scalar(self):
        matrix = determinant_matrix(1, 2, basis=E_BASIS)
        assert not matrix.is_scalar({0: 1, 1: Fraction(1, 2)})
        assert matrix.is_scalar({0: 1, 1: 1}, diagonal=1)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            determinant_matrix(1, 3, cap=10)

    def test_serialization(self):
        matrix = determinant_matrix(1, 2)
        record = matrix.to_json()
        assert record["dimension"] == 15
        assert record["determinants"][0] == "|-1- 0-|"
        assert len(record["elements"]) == len(matrix.elements)
        rows = matrix.csv_rows()
        assert rows[0] == ["row", "col", "parameter", "coefficient"]
        assert all(row[2] in ("F0", "F2") for row in rows[1:])
