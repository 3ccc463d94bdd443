"""
Generating-function expansion of the state counts of an nl^N shell.

Expanding prod_{m_s} prod_{m_l} (1 + z y^{m_s} x^{m_l}) gives the number
F_l(N, M_S, M_L) of determinants with given N, M_S and M_L. Spin exponents are
stored doubled so every polynomial lives in a dense integer numpy array
indexed by (N, 2 M_S + offset, M_L + offset).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from shell_averages.shared.config import GENERATING_ELL_CAP
from shell_averages.shared.errors import CapacityError, InvalidQuantumNumberError

logger = logging.getLogger(__name__)

FACTORED_FORMS = ("product", "trinomial")


@dataclass(frozen=True)
class ShellConfig:
    """N equivalent electrons in a shell of orbital momentum l (the radial label n is irrelevant)."""
    ell: int
    n_electrons: int

    def __post_init__(self):
        if isinstance(self.ell, bool) or not isinstance(self.ell, int) or self.ell < 0:
            raise InvalidQuantumNumberError(f"Orbital momentum must be a non-negative integer, got {self.ell!r}")
        if not isinstance(self.n_electrons, int) or not 0 <= self.n_electrons <= self.capacity:
            raise InvalidQuantumNumberError(
                f"N = {self.n_electrons} is outside the capacity 0..{self.capacity} of an l={self.ell} shell"
            )

    @property
    def capacity(self) -> int:
        return 4 * self.ell + 2

    @property
    def orbitals(self) -> int:
        return 2 * self.ell + 1


def _shift_add(poly: np.ndarray, twice_ms: int, m_ell: int) -> np.ndarray:
    """Multiply by (1 + z y^{twice_ms/2} x^{m_ell}); the exponent window is wide enough that nothing spills."""
    result = poly.copy()
    _, spins, projections = poly.shape
    result[1:,
           max(twice_ms, 0):spins + min(twice_ms, 0),
           max(m_ell, 0):projections + min(m_ell, 0)] += poly[:-1,
                                                             max(-twice_ms, 0):spins - max(twice_ms, 0),
                                                             max(-m_ell, 0):projections - max(m_ell, 0)]
    return result


@dataclass(frozen=True, eq=False)
class SpinCountTable:
    """
    F, G and H counts of one shell for every N.

    f_array[N, 2M_S + ms_offset, M_L + ml_offset] holds F_l(N, M_S, M_L).
    """
    ell: int
    f_array: np.ndarray

    @property
    def capacity(self) -> int:
        return 4 * self.ell + 2

    @property
    def ms_offset(self) -> int:
        return 2 * self.ell + 1

    @property
    def ml_offset(self) -> int:
        return self.ell * (self.ell + 1)

    def _check_n(self, n: int) -> None:
        ShellConfig(self.ell, n)

    def f(self, n: int, twice_ms: int, ml: int) -> int:
        self._check_n(n)
        j, i = twice_ms + self.ms_offset, ml + self.ml_offset
        if not (0 <= j < self.f_array.shape[1] and 0 <= i < self.f_array.shape[2]):
            return 0
        return int(self.f_array[n, j, i])

    def g(self, n: int, twice_ms: int) -> int:
        self._check_n(n)
        j = twice_ms + self.ms_offset
        if not 0 <= j < self.f_array.shape[1]:
            return 0
        return int(self.f_array[n, j].sum())

    def h(self, n: int, twice_s: int) -> int:
        if twice_s < 0:
            raise InvalidQuantumNumberError(f"S = {Fraction(twice_s, 2)} is negative")
        if (n - twice_s) % 2:
            raise InvalidQuantumNumberError(f"N/2 - S is not integral for N = {n}, S = {Fraction(twice_s, 2)}")
        return self.g(n, twice_s) - self.g(n, twice_s + 2)

    def total(self, n: int) -> int:
        self._check_n(n)
        return int(self.f_array[n].sum())

    def twice_ms_values(self, n: int) -> range:
        reach = min(n, self.capacity - n)
        return range(-reach, reach + 1, 2)

    def f_counts(self, n: int) -> dict[tuple[int, int], int]:
        """Non-zero F(N, ., .) keyed by (2 M_S, M_L)."""
        self._check_n(n)
        js, iis = np.nonzero(self.f_array[n])
        return {(int(j) - self.ms_offset, int(i) - self.ml_offset): int(self.f_array[n, j, i])
                for j, i in zip(js, iis)}

    def g_counts(self, n: int) -> dict[int, int]:
        return {tms: self.g(n, tms) for tms in self.twice_ms_values(n)}

    def h_counts(self, n: int) -> dict[int, int]:
        return {ts: self.h(n, ts) for ts in self.twice_ms_values(n) if ts >= 0}


@lru_cache(maxsize=None)
def expand_generating(ell: int, cap: int = GENERATING_ELL_CAP) -> SpinCountTable:
    if isinstance(ell, bool) or not isinstance(ell, int) or ell < 0:
        raise InvalidQuantumNumberError(f"Orbital momentum must be a non-negative integer, got {ell!r}")
    if ell > cap:
        raise CapacityError(f"Generating-function expansion is capped at l = {cap}, got l = {ell}")
    capacity = 4 * ell + 2
    ms_offset, ml_offset = 2 * ell + 1, ell * (ell + 1)
    poly = np.zeros((capacity + 1, 2 * ms_offset + 1, 2 * ml_offset + 1), dtype=np.int64)
    poly[0, ms_offset, ml_offset] = 1
    for twice_ms in (-1, 1):
        for m_ell in range(-ell, ell + 1):
            poly = _shift_add(poly, twice_ms, m_ell)
    poly.setflags(write=False)
    logger.debug(f"Expanded generating function for l={ell}: {int(poly.sum())} determinants")
    return SpinCountTable(ell, poly)


def _poly_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two polynomials in (z, y^{1/2}) stored as dense [N, 2M_S + offset] arrays centred on offset."""
    rows = a.shape[0] + b.shape[0] - 1
    cols = a.shape[1] + b.shape[1] - 1
    result = np.zeros((rows, cols), dtype=np.int64)
    for n, j in zip(*np.nonzero(b)):
        result[n:n + a.shape[0], j:j + a.shape[1]] += a * b[n, j]
    return result


def _poly_power(base: np.ndarray, exponent: int) -> np.ndarray:
    result = np.ones((1, 1), dtype=np.int64)
    for _ in range(exponent):
        result = _poly_mul(result, base)
    return result


def g_factored(ell: int, form: str = "product") -> np.ndarray:
    """
    G_l(N, M_S) from one of the two factored forms of its generating function:

    - "product":   (1 + z y^{-1/2})^{2l+1} (1 + z y^{1/2})^{2l+1}
    - "trinomial": [1 + z (y^{-1/2} + y^{1/2}) + z^2]^{2l+1}

    Returns an array indexed by [N, 2 M_S + 2l + 1].
    """
    if form not in FACTORED_FORMS:
        raise ValueError(f"Unknown factored form {form!r}; expected one of {FACTORED_FORMS}")
    ShellConfig(ell, 0)
    orbitals = 2 * ell + 1
    if form == "product":
        down = np.array([[0, 1, 0], [1, 0, 0]], dtype=np.int64)
        up = np.array([[0, 1, 0], [0, 0, 1]], dtype=np.int64)
        result = _poly_mul(_poly_power(down, orbitals), _poly_power(up, orbitals))
    else:
        trinomial = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.int64)
        result = _poly_power(trinomial, orbitals)
    # column width // 2 carries M_S = 0
    centre = result.shape[1] // 2
    return result[:, centre - orbitals:centre + orbitals + 1]
