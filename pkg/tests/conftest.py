import io
import json
from fractions import Fraction

import pytest

from shell_averages.energy.forms import Basis, EnergyForm
from shell_averages.launcher import main
from shell_averages.shared import settings


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point the default settings file at an empty temp dir so a user's config never leaks in."""
    path = tmp_path / "config" / "config.toml"
    monkeypatch.setattr(settings, "get_config_path", lambda: path)
    return path


@pytest.fixture
def run_cli():
    """Run the launcher in-process; returns (exit code, stdout text)."""
    def _run(*argv: str) -> tuple[int, str]:
        out = io.StringIO()
        code = main(list(argv), stdout=out)
        return code, out.getvalue()
    return _run


@pytest.fixture
def run_cli_json(run_cli):
    def _run(*argv: str) -> tuple[int, dict]:
        code, text = run_cli(*argv)
        return code, json.loads(text) if text else {}
    return _run


def e_form(ell: int, **coeffs) -> EnergyForm:
    """E-basis form from keyword coefficients: e_form(1, sigma='1/2', pi='1/2')."""
    basis = Basis.aom(ell)
    return EnergyForm(basis, {basis.parse_key(key): Fraction(value) for key, value in coeffs.items()})


def f_form(ell: int, **coeffs) -> EnergyForm:
    """F-basis form from keyword coefficients: f_form(1, F0=1, F2='2/5')."""
    basis = Basis.slater(ell)
    return EnergyForm(basis, {basis.parse_key(key): Fraction(value) for key, value in coeffs.items()})
