"""
Closed-form state counts and spin expectation values for nl^N.
"""
import logging
from fractions import Fraction
from math import comb, factorial

from shell_averages.counting.generating import ShellConfig
from shell_averages.shared.errors import InvalidQuantumNumberError

logger = logging.getLogger(__name__)


def _check_projection(ell: int, n: int, twice_ms: int) -> ShellConfig:
    shell = ShellConfig(ell, n)
    if (n - twice_ms) % 2:
        raise InvalidQuantumNumberError(
            f"N/2 - M_S is not integral for N = {n}, M_S = {Fraction(twice_ms, 2)}"
        )
    return shell


def _binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def g_closed(ell: int, n: int, twice_ms: int) -> int:
    """G_l(N, M_S) = C(2l+1, N/2 - M_S) C(2l+1, N/2 + M_S)."""
    shell = _check_projection(ell, n, twice_ms)
    return _binomial(shell.orbitals, (n - twice_ms) // 2) * _binomial(shell.orbitals, (n + twice_ms) // 2)


def g_alternative(ell: int, n: int, twice_ms: int) -> int:
    """G_l(N, M_S) summed over the number i of doubly occupied orbitals."""
    shell = _check_projection(ell, n, twice_ms)
    orbitals = shell.orbitals
    down, up = (n - twice_ms) // 2, (n + twice_ms) // 2
    total = 0
    for i in range(n // 2 + 1):
        parts = (i, orbitals - n + i, down - i, up - i)
        if min(parts) < 0:
            continue
        denominator = 1
        for part in parts:
            denominator *= factorial(part)
        total += factorial(orbitals) // denominator
    return total


def h_count(ell: int, n: int, twice_s: int) -> int:
    """Number of states with total spin S: G(N, S) - G(N, S + 1), or G(N, N/2) at S = N/2."""
    _check_projection(ell, n, twice_s)
    if not 0 <= twice_s <= n:
        raise InvalidQuantumNumberError(f"S = {Fraction(twice_s, 2)} is outside 0..{Fraction(n, 2)}")
    if twice_s == n:
        return g_closed(ell, n, twice_s)
    return g_closed(ell, n, twice_s) - g_closed(ell, n, twice_s + 2)


def allowed_spins(ell: int, n: int) -> list[int]:
    """Doubled S values with at least one state, highest first."""
    ShellConfig(ell, n)
    return [ts for ts in range(n, -1, -2) if h_count(ell, n, ts) > 0]


def total_states(ell: int, n: int) -> int:
    shell = ShellConfig(ell, n)
    return comb(shell.capacity, n)


def mean_s_squared_closed(ell: int, n: int) -> Fraction:
    """<S^2> = 3N/4 (1 - (N-1)/(4l+1))."""
    ShellConfig(ell, n)
    return Fraction(3 * n, 4) * (1 - Fraction(n - 1, 4 * ell + 1))


def _spin_census(ell: int, n: int, weight) -> Fraction:
    numerator = sum((ts + 1) * h_count(ell, n, ts) * weight(ts) for ts in range(n % 2, n + 1, 2))
    return Fraction(numerator) / total_states(ell, n)


def mean_s_squared_census(ell: int, n: int) -> Fraction:
    """sum_S (2S+1) H(N, S) S(S+1) / C(4l+2, N)."""
    return _spin_census(ell, n, lambda ts: Fraction(ts * (ts + 2), 4))


def spin_excess(n: int, twice_s: int) -> Fraction:
    """(1/2)[N/2 (N/2 + 1) - S(S+1)], the coefficient of D in the spin-resolved average."""
    return Fraction(n * (n + 2) - twice_s * (twice_s + 2), 8)


def spin_excess_mean(ell: int, n: int) -> Fraction:
    """State-weighted mean of spin_excess over the configuration."""
    return _spin_census(ell, n, lambda ts: spin_excess(n, ts))


def spin_excess_mean_closed(ell: int, n: int) -> Fraction:
    """(l+1)/(4l+1) N(N-1)/2, the value spin_excess_mean must reproduce."""
    ShellConfig(ell, n)
    return Fraction(ell + 1, 4 * ell + 1) * Fraction(n * (n - 1), 2)
