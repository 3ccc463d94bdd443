"""
Slater determinants of an nl^N shell as bit masks.

Spin-orbitals are ordered by (m_s, m_l) ascending: index m_l + l for spin
down and 2l + 1 + m_l + l for spin up. A determinant is the mask of its
occupied indices; the canonical orbital order is increasing index.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from shell_averages.counting.generating import ShellConfig
from shell_averages.shared.errors import InvalidQuantumNumberError


@dataclass(frozen=True, order=True)
class SpinOrbital:
    twice_ms: int
    m_ell: int

    @classmethod
    def from_index(cls, ell: int, index: int) -> "SpinOrbital":
        orbitals = 2 * ell + 1
        if not 0 <= index < 2 * orbitals:
            raise InvalidQuantumNumberError(f"Spin-orbital index {index} outside 0..{2 * orbitals - 1}")
        return cls(-1 if index < orbitals else 1, index % orbitals - ell)

    def index(self, ell: int) -> int:
        if self.twice_ms not in (-1, 1) or abs(self.m_ell) > ell:
            raise InvalidQuantumNumberError(f"{self} is not a spin-orbital of an l={ell} shell")
        return (0 if self.twice_ms < 0 else 2 * ell + 1) + self.m_ell + ell

    @property
    def m_s(self) -> Fraction:
        return Fraction(self.twice_ms, 2)

    def __str__(self) -> str:
        return f"{self.m_ell}{'+' if self.twice_ms > 0 else '-'}"


@dataclass(frozen=True, order=True)
class Determinant:
    ell: int
    mask: int

    @classmethod
    def from_orbitals(cls, ell: int, orbitals) -> "Determinant":
        mask = 0
        for orbital in orbitals:
            bit = 1 << orbital.index(ell)
            if mask & bit:
                raise InvalidQuantumNumberError(f"{orbital} occupied twice")
            mask |= bit
        return cls(ell, mask)

    @cached_property
    def indices(self) -> tuple[int, ...]:
        mask, found, position = self.mask, [], 0
        while mask:
            if mask & 1:
                found.append(position)
            mask >>= 1
            position += 1
        return tuple(found)

    @property
    def occupied(self) -> tuple[SpinOrbital, ...]:
        return tuple(SpinOrbital.from_index(self.ell, i) for i in self.indices)

    @property
    def n_electrons(self) -> int:
        return self.mask.bit_count()

    @property
    def twice_ms(self) -> int:
        down = self.mask & ((1 << (2 * self.ell + 1)) - 1)
        return self.n_electrons - 2 * down.bit_count()

    @property
    def ml(self) -> int:
        return sum(orbital.m_ell for orbital in self.occupied)

    def __str__(self) -> str:
        return "|" + " ".join(str(orbital) for orbital in self.occupied) + "|"


def enumerate_determinants(ell: int, n: int, twice_ms: int | None = None) -> list[Determinant]:
    """All determinants of l^N in lexicographic order of their index tuples, optionally restricted to one M_S."""
    shell = ShellConfig(ell, n)
    result = []
    for chosen in combinations(range(shell.capacity), n):
        determinant = Determinant(ell, sum(1 << i for i in chosen))
        if twice_ms is None or determinant.twice_ms == twice_ms:
            result.append(determinant)
    return result
