import pytest

from shell_averages.shared.errors import ConfigError
from shell_averages.shared.settings import get_config_dir, load_settings


def test_missing_default_file_means_no_settings(isolated_config):
    assert not isolated_config.exists()
    assert load_settings() == {}


def test_default_file_is_read(isolated_config):
    isolated_config.parent.mkdir(parents=True)
    isolated_config.write_text('format = "csv"\nmax_ell = 2\n')
    assert load_settings() == {"format": "csv", "max_ell": 2}


def test_dashes_become_underscores(tmp_path):
    path = tmp_path / "settings.toml"
    path.write_text('max-n = 4\ndecimal = true\n')
    assert load_settings(path) == {"max_n": 4, "decimal": True}


def test_missing_explicit_file(tmp_path):
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "nope.toml")


@pytest.mark.parametrize("content", [
    'colour = "blue"\n',
    'max_ell = "three"\n',
    'max_ell = true\n',
    'format = "xml"\n',
    'digits = -3\n',
    'max_ell = \n',
])
def test_rejected_settings(tmp_path, content):
    path = tmp_path / "settings.toml"
    path.write_text(content)
    with pytest.raises(ConfigError):
        load_settings(path)


def test_config_dir_is_named_after_the_app():
    assert "shell_averages" in str(get_config_dir())
