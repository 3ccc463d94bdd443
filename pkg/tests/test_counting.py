from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shell_averages.counting.core import (
    allowed_spins, g_alternative, g_closed, h_count, mean_s_squared_census, mean_s_squared_closed,
    spin_excess, spin_excess_mean, spin_excess_mean_closed, total_states
)
from shell_averages.counting.generating import ShellConfig, expand_generating, g_factored
from shell_averages.shared.errors import CapacityError, InvalidQuantumNumberError
from shell_averages.shared.report import load_reference_values


def shell_states(max_ell):
    """(ell, N, 2M_S) for every valid projection of every shell up to max_ell."""
    for ell in range(max_ell + 1):
        capacity = 4 * ell + 2
        for n in range(capacity + 1):
            reach = min(n, capacity - n)
            for twice_ms in range(-reach, reach + 1, 2):
                yield ell, n, twice_ms


@pytest.fixture(scope="module")
def nf6():
    return load_reference_values()["nf6"]


class TestReferenceShell:
    def test_projection_counts(self, nf6):
        for twice_ms, count in nf6["g_by_twice_ms"].items():
            assert g_closed(3, 6, int(twice_ms)) == count
            assert g_closed(3, 6, -int(twice_ms)) == count

    def test_spin_counts(self, nf6):
        for twice_s, count in nf6["h_by_twice_s"].items():
            assert h_count(3, 6, int(twice_s)) == count

    def test_totals(self, nf6):
        assert total_states(3, 6) == nf6["total_states"]
        assert mean_s_squared_closed(3, 6) == Fraction(nf6["mean_s_squared"])
        assert mean_s_squared_census(3, 6) == Fraction(nf6["mean_s_squared"])

    def test_generating_table(self, nf6):
        table = expand_generating(3)
        assert table.g_counts(6) == {
            sign * int(tms): count
            for tms, count in nf6["g_by_twice_ms"].items() for sign in (1, -1)
        }
        assert table.h_counts(6) == {int(ts): count for ts, count in nf6["h_by_twice_s"].items()}
        assert table.total(6) == nf6["total_states"]


class TestCountRoutes:
    def test_p_squared(self):
        assert g_closed(1, 2, 0) == 9
        assert g_closed(1, 2, 2) == 3
        assert h_count(1, 2, 0) == 6
        assert h_count(1, 2, 2) == 3

    def test_three_routes_agree(self):
        for ell, n, twice_ms in shell_states(4):
            closed = g_closed(ell, n, twice_ms)
            assert g_alternative(ell, n, twice_ms) == closed
            assert expand_generating(ell).g(n, twice_ms) == closed

    @pytest.mark.parametrize("form", ["product", "trinomial"])
    @pytest.mark.parametrize("ell", range(5))
    def test_factored_forms(self, form, ell):
        table = g_factored(ell, form)
        offset = 2 * ell + 1
        for shell_ell, n, twice_ms in shell_states(ell):
            if shell_ell == ell:
                assert table[n, twice_ms + offset] == g_closed(ell, n, twice_ms)

    def test_unknown_factored_form(self):
        with pytest.raises(ValueError):
            g_factored(1, "quadrinomial")

    def test_projection_resolved_counts(self):
        table = expand_generating(1)
        assert table.f(2, 0, 0) == 3
        assert table.f(2, 2, 2) == 0
        assert table.f(2, 0, 2) == 1
        assert sum(table.f_counts(2).values()) == 15

    def test_expansion_cap(self):
        with pytest.raises(CapacityError):
            expand_generating(7)

    @given(st.integers(0, 4).flatmap(
        lambda ell: st.tuples(st.just(ell), st.integers(0, 4 * ell + 2))
    ))
    def test_particle_hole_symmetry(self, shell):
        ell, n = shell
        holes = 4 * ell + 2 - n
        for twice_s in range(n % 2, n + 1, 2):
            if twice_s <= holes:
                assert h_count(ell, n, twice_s) == h_count(ell, holes, twice_s)

    def test_spin_counts_never_negative(self):
        for ell, n, twice_ms in shell_states(4):
            if twice_ms >= 0:
                assert h_count(ell, n, twice_ms) >= 0


class TestSpinQuantities:
    def test_allowed_spins(self):
        assert allowed_spins(3, 6) == [6, 4, 2, 0]
        assert allowed_spins(1, 6) == [0]
        assert allowed_spins(1, 4) == [2, 0]

    @pytest.mark.parametrize("ell, n, expected", [
        (0, 1, Fraction(3, 4)),
        (1, 2, Fraction(6, 5)),
        (1, 6, Fraction(0)),
        (2, 5, Fraction(15, 4) * Fraction(5, 9)),
    ])
    def test_mean_s_squared(self, ell, n, expected):
        assert mean_s_squared_closed(ell, n) == expected
        assert mean_s_squared_census(ell, n) == expected

    def test_census_matches_closed_form(self):
        for ell in range(5):
            for n in range(4 * ell + 3):
                assert mean_s_squared_census(ell, n) == mean_s_squared_closed(ell, n)
                assert spin_excess_mean(ell, n) == spin_excess_mean_closed(ell, n)

    def test_spin_excess(self):
        assert spin_excess(2, 0) == 1
        assert spin_excess(3, 3) == 0
        assert spin_excess(4, 0) == 3


class TestValidation:
    def test_too_many_electrons(self):
        with pytest.raises(InvalidQuantumNumberError):
            ShellConfig(1, 7)

    def test_negative_momentum(self):
        with pytest.raises(InvalidQuantumNumberError):
            ShellConfig(-1, 0)

    def test_projection_parity(self):
        with pytest.raises(InvalidQuantumNumberError):
            g_closed(1, 2, 1)

    def test_spin_parity_in_table(self):
        table = expand_generating(1)
        with pytest.raises(InvalidQuantumNumberError):
            h_count(1, 2, 1)
        with pytest.raises(InvalidQuantumNumberError):
            table.h(2, 1)
        assert table.h(2, 0) == h_count(1, 2, 0)

    def test_spin_above_half_n(self):
        with pytest.raises(InvalidQuantumNumberError):
            h_count(1, 2, 4)

    def test_empty_spin_sector(self):
        assert h_count(1, 4, 4) == 0
