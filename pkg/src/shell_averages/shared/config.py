"""
Application constants and configuration defaults.
"""

APP_NAME = "shell_averages"
APP_AUTHOR = "ShellAveragesProject"

# Spectroscopic shell letters
SHELL_LETTERS = {"s": 0, "p": 1, "d": 2, "f": 3, "g": 4, "h": 5, "i": 6}

# Names of the E^lambda parameters; lambda = 0 is sigma
LAMBDA_NAMES = ["sigma", "pi", "delta", "phi", "gamma", "eta", "iota"]

# Caps
GENERATING_ELL_CAP = 6
FACTORIAL_CAP = 4 * 40 + 2  # covers j1 + j2 + j3 + 1 for every j <= 40
MATRIX_DIMENSION_CAP = 4000

# verify defaults: full suites up to DEFAULT_MAX_ELL, spot checks at SPOT_CHECK_ELL
DEFAULT_MAX_ELL = 3
SPOT_CHECK_ELL = 4
SUM_RULE_MAX_ELL = 4
TRANSFORM_MAX_ELL = 4
DEGENERACY_SHELLS = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)]
DEGENERACY_TEST_VALUE = 1

# Output
OUTPUT_FORMATS = ["json", "csv"]
DECIMAL_DIGITS = 15
CONFIG_FILE_NAME = "config.toml"
REFERENCE_VALUES_FILE = "reference_values.json"
