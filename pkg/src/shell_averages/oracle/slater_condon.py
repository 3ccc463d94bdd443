"""
Coulomb matrix elements between determinants of one shell, in the F^(k) basis.

Two-electron integrals follow the Condon-Shortley convention:

    <ab|cd> = delta(ms_a, ms_c) delta(ms_b, ms_d) sum_k c^k(a, c) c^k(d, b) F^k

and determinant elements follow the Slater-Condon rules, with the sign fixed
by moving the excited orbitals of each determinant (in increasing index
order) to the front.
"""
import logging
from functools import lru_cache

from shell_averages.angular.wigner import gaunt_ck
from shell_averages.energy.forms import Basis, EnergyForm, sum_forms
from shell_averages.oracle.determinants import Determinant, SpinOrbital
from shell_averages.shared.errors import BasisMismatchError
from shell_averages.shared.numerics import QuadraticSum

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def two_electron_integral(ell: int, a: int, b: int, c: int, d: int) -> EnergyForm:
    """<ab|cd> over spin-orbital indices a, b, c, d."""
    basis = Basis.slater(ell)
    oa, ob, oc, od = (SpinOrbital.from_index(ell, i) for i in (a, b, c, d))
    if oa.twice_ms != oc.twice_ms or ob.twice_ms != od.twice_ms:
        return EnergyForm.zero(basis)
    if oa.m_ell + ob.m_ell != oc.m_ell + od.m_ell:
        return EnergyForm.zero(basis)
    coefficients = {}
    for k in basis.labels():
        product = gaunt_ck(ell, oa.m_ell, ell, oc.m_ell, k) * gaunt_ck(ell, od.m_ell, ell, ob.m_ell, k)
        coefficients[k] = QuadraticSum.from_sqrt(product)
    return EnergyForm(basis, coefficients)


@lru_cache(maxsize=None)
def antisymmetrized_integral(ell: int, a: int, b: int, c: int, d: int) -> EnergyForm:
    """<ab||cd> = <ab|cd> - <ab|dc>."""
    return two_electron_integral(ell, a, b, c, d) - two_electron_integral(ell, a, b, d, c)


def pair_energy(ell: int, i: int, j: int) -> EnergyForm:
    """Direct minus exchange energy J_ij - K_ij of two occupied spin-orbitals."""
    return antisymmetrized_integral(ell, i, j, i, j)


def _phase(excited: tuple[int, ...], indices: tuple[int, ...]) -> int:
    """Sign of moving the excited orbitals to the front, keeping their relative order."""
    swaps = sum(indices.index(orbital) for orbital in excited)
    swaps -= len(excited) * (len(excited) - 1) // 2
    return -1 if swaps % 2 else 1


def coulomb_element(ell: int, d1: Determinant, d2: Determinant) -> EnergyForm:
    """<d1| sum_{i<j} 1/r_ij |d2> as a form over F^k."""
    if d1.ell != ell or d2.ell != ell:
        raise BasisMismatchError(f"Determinants {d1} and {d2} do not both belong to an l={ell} shell")
    if d1.n_electrons != d2.n_electrons:
        raise BasisMismatchError(f"{d1} and {d2} hold different numbers of electrons")
    basis = Basis.slater(ell)
    if d1.twice_ms != d2.twice_ms or d1.ml != d2.ml:
        return EnergyForm.zero(basis)

    removed = tuple(i for i in d1.indices if not d2.mask >> i & 1)
    added = tuple(i for i in d2.indices if not d1.mask >> i & 1)
    rank = len(removed)
    if rank == 0:
        occupied = d1.indices
        return sum_forms(
            (pair_energy(ell, occupied[x], occupied[y])
             for x in range(len(occupied)) for y in range(x + 1, len(occupied))),
            basis,
        )
    if rank > 2:
        return EnergyForm.zero(basis)

    phase = _phase(removed, d1.indices) * _phase(added, d2.indices)
    if rank == 1:
        (p,), (q,) = removed, added
        common = (i for i in d1.indices if i != p)
        element = sum_forms((antisymmetrized_integral(ell, p, j, q, j) for j in common), basis)
    else:
        (p, r), (q, s) = removed, added
        element = antisymmetrized_integral(ell, p, r, q, s)
    return element * phase
