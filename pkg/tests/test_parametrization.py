from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import e_form, f_form
from shell_averages.energy.forms import E_BASIS, F_BASIS, Basis, EnergyForm
from shell_averages.energy.parametrization import (
    AomParams, ShellPair, SlaterParams, convert_form, e_to_f, e_to_f_component, f_to_e,
    f_to_e_images, params_from_json, s_and_d, uniform_aom
)
from shell_averages.shared.errors import InvalidQuantumNumberError
from shell_averages.shared.numerics import QuadraticSum

values = st.fractions(min_value=-20, max_value=20, max_denominator=12)
shell_pairs = st.tuples(st.integers(0, 4), st.integers(0, 4)).map(lambda p: ShellPair(*p))


class TestImages:
    def test_p_shell(self):
        images = f_to_e_images(ShellPair.equivalent(1))
        assert images[0] == f_form(1, F0=1, F2="2/5")
        assert images[1] == f_form(1, F0=1, F2="-1/5")

    def test_d_shell_sigma(self):
        images = f_to_e_images(ShellPair.equivalent(2))
        assert images[0] == f_form(2, F0=1, F2="2/7", F4="2/7")

    def test_images_are_rational_for_equivalent_shells(self):
        for ell in range(5):
            assert all(form.is_rational() for form in f_to_e_images(ShellPair.equivalent(ell)).values())


class TestTransforms:
    def test_e_to_f_p_shell(self):
        slater = e_to_f(AomParams(ShellPair.equivalent(1), {0: 1, 1: 0}))
        assert slater.values == {0: Fraction(1, 3), 2: Fraction(5, 3)}

    def test_f_to_e_p_shell(self):
        aom = f_to_e(SlaterParams(ShellPair.equivalent(1), {0: 1, 2: 5}))
        assert aom.values == {0: 3, 1: 0}

    def test_cross_shell_irrational(self):
        aom = f_to_e(SlaterParams(ShellPair(0, 1), {1: 1}))
        assert aom.values == {0: QuadraticSum({3: Fraction(1, 3)})}
        assert e_to_f(aom).values == {1: 1}

    @settings(max_examples=60, deadline=None)
    @given(shell_pairs, st.data())
    def test_roundtrip(self, pair, data):
        slater = SlaterParams(pair, {k: data.draw(values) for k in pair.allowed_k})
        assert e_to_f(f_to_e(slater)) == slater
        aom = AomParams(pair, {lam: data.draw(values) for lam in pair.allowed_lambda})
        assert f_to_e(e_to_f(aom)) == aom

    @pytest.mark.parametrize("ell", range(5))
    def test_uniform_collapses_to_monopole(self, ell):
        pair = ShellPair.equivalent(ell)
        slater = e_to_f(uniform_aom(pair, Fraction(7, 3)))
        assert slater[0] == Fraction(7, 3)
        assert all(slater[k] == 0 for k in pair.allowed_k if k > 0)

    def test_disallowed_rank(self):
        aom = uniform_aom(ShellPair.equivalent(1), 1)
        with pytest.raises(InvalidQuantumNumberError):
            e_to_f_component(aom, 1)

    def test_single_component(self):
        aom = AomParams(ShellPair.equivalent(1), {0: 1, 1: 0})
        assert e_to_f_component(aom, 2) == Fraction(5, 3)


class TestConvertForm:
    def test_e_form_to_f(self):
        assert convert_form(e_form(1, sigma=1), F_BASIS) == f_form(1, F0=1, F2="2/5")

    def test_f_form_to_e(self):
        assert convert_form(f_form(1, F0=1), E_BASIS) == e_form(1, sigma="1/3", pi="2/3")

    def test_same_basis_is_identity(self):
        form = e_form(2, pi=1)
        assert convert_form(form, E_BASIS) is form

    @pytest.mark.parametrize("ell", range(4))
    def test_evaluation_is_basis_independent(self, ell):
        pair = ShellPair.equivalent(ell)
        slater = SlaterParams(pair, {k: Fraction(k + 3, k + 1) for k in pair.allowed_k})
        aom = f_to_e(slater)
        form = EnergyForm(Basis.aom(ell), {lam: lam + 1 for lam in pair.allowed_lambda})
        assert convert_form(form, F_BASIS).evaluate(slater.values) == form.evaluate(aom.values)


class TestSAndD:
    def test_p_shell(self):
        assert s_and_d(AomParams(ShellPair.equivalent(1), {0: 1, 1: Fraction(1, 2)})) == \
            (Fraction(1, 2), Fraction(1, 4))

    def test_d_shell(self):
        assert s_and_d(AomParams(ShellPair.equivalent(2), {0: 3, 1: 2, 2: 1})) == \
            (Fraction(3, 2), Fraction(1, 2))

    def test_s_shell_has_no_s_and_d(self):
        with pytest.raises(InvalidQuantumNumberError):
            s_and_d(uniform_aom(ShellPair.equivalent(0), 1))

    def test_inequivalent_shells(self):
        with pytest.raises(InvalidQuantumNumberError):
            s_and_d(uniform_aom(ShellPair(1, 2), 1))


class TestParams:
    def test_wrong_label_set(self):
        with pytest.raises(InvalidQuantumNumberError):
            AomParams(ShellPair.equivalent(1), {0: 1})
        with pytest.raises(InvalidQuantumNumberError):
            SlaterParams(ShellPair.equivalent(1), {0: 1, 1: 0, 2: 0})

    def test_negative_momentum(self):
        with pytest.raises(InvalidQuantumNumberError):
            ShellPair(-1, 1)

    def test_json_roundtrip(self):
        aom = AomParams(ShellPair.equivalent(2), {0: 1, 1: Fraction(1, 2), 2: 0})
        record = aom.to_json()
        assert record == {
            "ell": 2,
            "ell_prime": 2,
            "basis": "E",
            "values": {"sigma": "1", "pi": "1/2", "delta": "0"},
        }
        assert params_from_json(record) == aom

    def test_json_defaults_ell_prime(self):
        slater = params_from_json({"ell": 1, "basis": "F", "values": {"F0": "1", "F2": "0.5"}})
        assert slater == SlaterParams(ShellPair.equivalent(1), {0: 1, 2: Fraction(1, 2)})

    @pytest.mark.parametrize("record", [
        {"basis": "E", "values": {}},
        {"ell": 1, "basis": "X", "values": {"sigma": "1", "pi": "1"}},
        {"ell": 1, "basis": "E", "values": {"sigma": "one", "pi": "1"}},
        {"ell": 1, "basis": "E", "values": {"sigma": "1"}},
    ])
    def test_malformed_json(self, record):
        with pytest.raises(InvalidQuantumNumberError):
            params_from_json(record)
