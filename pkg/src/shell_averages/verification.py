"""
Invariant suite behind `shell-averages verify`.

Every check enumerates its cases, compares exact values and records a
CheckResult; the report is deterministic apart from durations, which are kept
out of stdout.
"""
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from tqdm import tqdm

from shell_averages.angular.wigner import (
    Parity, clebsch_gordan, sum_rule_clebsch_gordan, sum_rule_lhs, sum_rule_rhs, three_j
)
from shell_averages.counting.core import (
    allowed_spins, g_alternative, g_closed, h_count, mean_s_squared_census, mean_s_squared_closed,
    spin_excess_mean, spin_excess_mean_closed, total_states
)
from shell_averages.counting.generating import expand_generating, g_factored
from shell_averages.energy.averages import (
    TermLabel, average_energy, evaluate_uniform, spin_average, spin_average_two_electrons,
    term_energy_two_electrons
)
from shell_averages.energy.forms import E_BASIS, F_BASIS, Basis, EnergyForm, sum_forms
from shell_averages.energy.parametrization import (
    AomParams, ShellPair, convert_form, e_to_f, e_to_f_images, f_to_e_images
)
from shell_averages.oracle.core import (
    configuration_average_oracle, degeneracy_check, determinant_matrix, spin_resolved_average_oracle
)
from shell_averages.shared.config import (
    DEFAULT_MAX_ELL, DEGENERACY_SHELLS, DEGENERACY_TEST_VALUE, GENERATING_ELL_CAP, MATRIX_DIMENSION_CAP,
    SPOT_CHECK_ELL, SUM_RULE_MAX_ELL, TRANSFORM_MAX_ELL
)
from shell_averages.shared.errors import ConsistencyError
from shell_averages.shared.report import load_reference_values

logger = logging.getLogger(__name__)

MAX_LISTED_FAILURES = 10
THREE_J_SYMMETRY_MAX_TWICE_J = 6
SPOT_CHECK_ELECTRONS = (2, 3)


@dataclass
class CheckResult:
    name: str
    description: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    failure_count: int = 0
    duration: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def record(self, ok: bool, case: str) -> None:
        self.cases += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_LISTED_FAILURES:
                self.failures.append(case)

    def to_json(self, with_timing: bool = False) -> dict:
        data = {
            "name": self.name,
            "description": self.description,
            "passed": self.passed,
            "cases": self.cases,
            "failures": self.failure_count,
            "failed_cases": self.failures,
        }
        if with_timing:
            data["duration_seconds"] = round(self.duration, 3)
        return data


@dataclass(frozen=True)
class VerificationScope:
    """How far the checks reach, and the caps they build tables and matrices under."""
    max_ell: int
    max_n: int | None
    generating_cap: int = GENERATING_ELL_CAP
    matrix_cap: int = MATRIX_DIMENSION_CAP


@dataclass
class VerificationReport:
    max_ell: int
    max_n: int | None
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_json(self, with_timing: bool = False) -> dict:
        return {
            "summary": {
                "max_ell": self.max_ell,
                "max_n": "all" if self.max_n is None else self.max_n,
                "total_checks": len(self.checks),
                "passed_checks": sum(1 for c in self.checks if c.passed),
                "total_cases": sum(c.cases for c in self.checks),
                "passed": self.passed,
            },
            "checks": [c.to_json(with_timing) for c in self.checks],
        }


def _electron_counts(ell: int, max_n: int | None) -> range:
    capacity = 4 * ell + 2
    return range(0, capacity + 1 if max_n is None else min(capacity, max_n) + 1)


def _generic_values(basis: Basis) -> dict[int, Fraction]:
    """Distinct, unrelated parameter values so identities cannot hold by accident."""
    primes = (2, 3, 5, 7, 11, 13, 17, 19, 23)
    return {label: Fraction(primes[i], primes[-1 - i]) for i, label in enumerate(basis.labels())}


# --- individual checks ------------------------------------------------------

def check_nf6_reference(result: CheckResult, scope: VerificationScope) -> None:
    reference = load_reference_values()["nf6"]
    ell, n = reference["ell"], reference["n"]
    table = expand_generating(ell, scope.generating_cap)
    for key, expected in reference["g_by_twice_ms"].items():
        twice_ms = int(key)
        for value, route in ((g_closed(ell, n, twice_ms), "closed"), (table.g(n, twice_ms), "generating")):
            result.record(value == expected, f"G_3(6, 2M_S={twice_ms}) {route} = {value}, expected {expected}")
    for key, expected in reference["h_by_twice_s"].items():
        value = h_count(ell, n, int(key))
        result.record(value == expected, f"H_3(6, 2S={key}) = {value}, expected {expected}")
    total = sum((int(key) + 1) * h_count(ell, n, int(key)) for key in reference["h_by_twice_s"])
    result.record(total == reference["total_states"] == total_states(ell, n), f"sum (2S+1) H = {total}")
    expected = Fraction(reference["mean_s_squared"])
    for value, route in ((mean_s_squared_closed(ell, n), "closed"), (mean_s_squared_census(ell, n), "census")):
        result.record(value == expected, f"<S^2> {route} = {value}, expected {expected}")


def check_count_routes(result: CheckResult, scope: VerificationScope) -> None:
    for ell in range(max(scope.max_ell, SPOT_CHECK_ELL) + 1):
        table = expand_generating(ell, scope.generating_cap)
        product, trinomial = g_factored(ell, "product"), g_factored(ell, "trinomial")
        capacity = 4 * ell + 2
        for n in _electron_counts(ell, scope.max_n):
            for twice_ms in table.twice_ms_values(n):
                values = {
                    "generating": table.g(n, twice_ms),
                    "closed": g_closed(ell, n, twice_ms),
                    "alternative": g_alternative(ell, n, twice_ms),
                    "product form": int(product[n, twice_ms + 2 * ell + 1]),
                    "trinomial form": int(trinomial[n, twice_ms + 2 * ell + 1]),
                    "particle-hole": g_closed(ell, capacity - n, twice_ms),
                    "mirror": g_closed(ell, n, -twice_ms),
                }
                result.record(len(set(values.values())) == 1, f"l={ell} N={n} 2M_S={twice_ms}: {values}")
            spins = [ts for ts in table.twice_ms_values(n) if ts >= 0]
            counts = [h_count(ell, n, ts) for ts in spins]
            ladder = [g_closed(ell, n, ts) for ts in spins]
            result.record(min(counts) >= 0, f"l={ell} N={n}: negative H in {counts}")
            result.record(ladder == sorted(ladder, reverse=True), f"l={ell} N={n}: G not unimodal {ladder}")
            weighted = sum((ts + 1) * h for ts, h in zip(spins, counts))
            result.record(weighted == total_states(ell, n) == table.total(n),
                          f"l={ell} N={n}: sum (2S+1) H = {weighted}")


def check_spin_identities(result: CheckResult, scope: VerificationScope) -> None:
    for ell in range(max(scope.max_ell, SPOT_CHECK_ELL) + 1):
        for n in _electron_counts(ell, scope.max_n):
            closed, census = mean_s_squared_closed(ell, n), mean_s_squared_census(ell, n)
            result.record(closed == census, f"l={ell} N={n}: <S^2> closed {closed} vs census {census}")
            ratio, expected = spin_excess_mean(ell, n), spin_excess_mean_closed(ell, n)
            result.record(ratio == expected, f"l={ell} N={n}: spin-excess mean {ratio} vs {expected}")


def check_sum_rules(result: CheckResult, scope: VerificationScope) -> None:
    for ell in range(SUM_RULE_MAX_ELL + 1):
        projections = range(-ell, ell + 1)
        for parity in Parity:
            for m in projections:
                for mp in projections:
                    for mu in projections:
                        for mup in projections:
                            lhs = sum_rule_lhs(ell, parity, m, mp, mu, mup)
                            rhs = sum_rule_rhs(parity, m, mp, mu, mup)
                            result.record(lhs == rhs, f"l={ell} {parity.name} ({m},{mp},{mu},{mup}): {lhs} vs {rhs}")
                            if ell <= 2:
                                cg = sum_rule_clebsch_gordan(ell, parity, m, mp, mu, mup)
                                result.record(cg == lhs, f"l={ell} {parity.name} ({m},{mp},{mu},{mup}): CG form {cg}")
        for m in projections:
            for mp in projections:
                total = sum(
                    (2 * big_l + 1) * three_j(ell, ell, big_l, m, mp, -m - mp).square()
                    for big_l in range(2 * ell + 1)
                )
                result.record(total == 1, f"l={ell} ({m},{mp}): orthogonality sum {total}")


def _three_j_cases(max_twice_j: int) -> Iterator[tuple[int, ...]]:
    for tj1 in range(max_twice_j + 1):
        for tj2 in range(max_twice_j + 1):
            for tj3 in range(abs(tj1 - tj2), min(tj1 + tj2, max_twice_j) + 1, 2):
                for tm1 in range(-tj1, tj1 + 1, 2):
                    for tm2 in range(-tj2, tj2 + 1, 2):
                        tm3 = -tm1 - tm2
                        if abs(tm3) <= tj3:
                            yield tj1, tj2, tj3, tm1, tm2, tm3


def check_three_j_symmetries(result: CheckResult, scope: VerificationScope) -> None:
    for tj1, tj2, tj3, tm1, tm2, tm3 in _three_j_cases(THREE_J_SYMMETRY_MAX_TWICE_J):
        j1, j2, j3 = (Fraction(t, 2) for t in (tj1, tj2, tj3))
        m1, m2, m3 = (Fraction(t, 2) for t in (tm1, tm2, tm3))
        base = three_j(j1, j2, j3, m1, m2, m3)
        odd = ((tj1 + tj2 + tj3) // 2) % 2
        flipped = -base if odd else base
        case = f"({j1} {j2} {j3}; {m1} {m2} {m3})"
        result.record(three_j(j2, j3, j1, m2, m3, m1) == base, f"{case}: cyclic")
        result.record(three_j(j2, j1, j3, m2, m1, m3) == flipped, f"{case}: transposition")
        result.record(three_j(j1, j2, j3, -m1, -m2, -m3) == flipped, f"{case}: m reversal")
        cg = clebsch_gordan(j1, m1, j2, m2, j3, -m3)
        result.record(cg.square() == (tj3 + 1) * base.square(), f"{case}: Clebsch-Gordan norm")


def check_transforms(result: CheckResult, scope: VerificationScope) -> None:
    for ell in range(TRANSFORM_MAX_ELL + 1):
        for ell_prime in range(TRANSFORM_MAX_ELL + 1):
            pair = ShellPair(ell, ell_prime)
            for kind in (E_BASIS, F_BASIS):
                basis = pair.basis(kind)
                other = F_BASIS if kind == E_BASIS else E_BASIS
                for label in basis.labels():
                    unit = EnergyForm.parameter(basis, label)
                    back = convert_form(convert_form(unit, other), kind)
                    result.record(back == unit, f"l={ell} l'={ell_prime} {basis.symbol(label)}: roundtrip {back}")
            if ell != ell_prime:
                continue
            for k, image in e_to_f_images(pair).items():
                uniform = evaluate_uniform(image, 1)
                expected = 1 if k == 0 else 0
                result.record(uniform == expected, f"l={ell} F^{k} at uniform E = {uniform}")
            images = f_to_e_images(pair)
            for lam in pair.allowed_lambda:
                for k in pair.allowed_k:
                    plus = three_j(ell, k, ell, -lam, 0, lam)
                    minus = three_j(ell, k, ell, lam, 0, -lam)
                    result.record(plus == minus, f"l={ell} k={k} lambda={lam}: E^-lambda != E^lambda")
                result.record(images[lam].is_rational(), f"l={ell} E^{lam}: irrational F coefficients")


def check_two_electron_terms(result: CheckResult, scope: VerificationScope) -> None:
    reference = load_reference_values()["p2_terms"]
    ell = reference["ell"]
    for kind, section in ((E_BASIS, "e_basis"), (F_BASIS, "f_basis")):
        basis = Basis(kind, ell)
        for symbol, coeffs in reference[section].items():
            expected = EnergyForm(basis, {basis.parse_key(key): Fraction(text) for key, text in coeffs.items()})
            form = convert_form(term_energy_two_electrons(ell, TermLabel.parse(symbol)), kind)
            result.record(form == expected, f"p^2 {symbol} in {kind}: {form}, expected {expected}")
    for ell in range(1, TRANSFORM_MAX_ELL + 1):
        for twice_s in (0, 2):
            try:
                averaged = spin_average_two_electrons(ell, twice_s)
                ok = averaged == spin_average(ell, 2, twice_s)
            except ConsistencyError:
                ok = False
            result.record(ok, f"l={ell} S={twice_s // 2}: two-electron averages disagree")


def check_average_of_averages(result: CheckResult, scope: VerificationScope) -> None:
    for ell in range(1, scope.max_ell + 1):
        basis = Basis.aom(ell)
        for n in _electron_counts(ell, scope.max_n):
            combined = sum_forms(
                ((ts + 1) * h_count(ell, n, ts) * spin_average(ell, n, ts) for ts in allowed_spins(ell, n)),
                basis,
            ) / total_states(ell, n)
            expected = average_energy(ell, n)
            result.record(combined == expected, f"l={ell} N={n}: {combined} vs {expected}")
            for ts in allowed_spins(ell, n):
                value = evaluate_uniform(spin_average(ell, n, ts), 3)
                result.record(value == Fraction(3 * n * (n - 1), 2), f"l={ell} N={n} 2S={ts}: uniform value {value}")


def _oracle_cases(scope: VerificationScope) -> Iterator[tuple[int, int]]:
    for ell in range(scope.max_ell + 1):
        for n in _electron_counts(ell, scope.max_n):
            yield ell, n
    if scope.max_ell < SPOT_CHECK_ELL:
        for n in SPOT_CHECK_ELECTRONS:
            if scope.max_n is None or n <= scope.max_n:
                yield SPOT_CHECK_ELL, n


def check_oracle_spin_averages(result: CheckResult, scope: VerificationScope) -> None:
    for ell, n in _oracle_cases(scope):
        for ts in allowed_spins(ell, n):
            oracle = spin_resolved_average_oracle(ell, n, ts)
            closed = spin_average(ell, n, ts)
            result.record(oracle == closed, f"l={ell} N={n} 2S={ts}: oracle {oracle} vs {closed}")


def check_oracle_configuration_average(result: CheckResult, scope: VerificationScope) -> None:
    for ell, n in _oracle_cases(scope):
        oracle = configuration_average_oracle(ell, n)
        closed = average_energy(ell, n)
        result.record(oracle == closed, f"l={ell} N={n}: oracle {oracle} vs {closed}")


def check_basis_independence(result: CheckResult, scope: VerificationScope) -> None:
    for ell in range(1, min(scope.max_ell, 2) + 1):
        for n in _electron_counts(ell, scope.max_n):
            for ts in allowed_spins(ell, n):
                in_f = spin_resolved_average_oracle(ell, n, ts, basis=F_BASIS)
                values = _generic_values(in_f.basis)
                e_values = {lam: form.evaluate(values) for lam, form in f_to_e_images(ShellPair.equivalent(ell)).items()}
                direct = in_f.evaluate(values)
                transformed = spin_average(ell, n, ts).evaluate(e_values)
                result.record(direct == transformed, f"l={ell} N={n} 2S={ts}: {direct} vs {transformed}")


def check_degeneracy(result: CheckResult, scope: VerificationScope) -> None:
    for ell, n in DEGENERACY_SHELLS:
        if ell > max(scope.max_ell, 1) or (scope.max_n is not None and n > scope.max_n):
            continue
        ok = degeneracy_check(ell, n, DEGENERACY_TEST_VALUE, scope.matrix_cap)
        result.record(ok, f"l={ell} N={n}: matrix is not scalar")
    if scope.max_n is None or scope.max_n >= 2:
        split = AomParams(ShellPair.equivalent(1), {0: 1, 1: 0})
        matrix = determinant_matrix(1, 2, cap=scope.matrix_cap)
        result.record(not matrix.is_scalar(e_to_f(split).values), "l=1 N=2: E^sigma != E^pi left the matrix scalar")


CHECKS: list[tuple[str, str, Callable[[CheckResult, VerificationScope], None]]] = [
    ("nf6_reference", "published nf^6 counts and <S^2>", check_nf6_reference),
    ("count_routes", "generating function = closed form = alternative sum = factored forms", check_count_routes),
    ("spin_identities", "<S^2> closed form = census; spin-excess mean identity", check_spin_identities),
    ("sum_rules", "symmetrized/antisymmetrized sum rules and 3-jm orthogonality", check_sum_rules),
    ("three_j_symmetries", "3-jm permutation and reversal symmetries", check_three_j_symmetries),
    ("transforms", "F <-> E roundtrips, all-equal collapse, lambda sign symmetry", check_transforms),
    ("two_electron_terms", "p^2 term energies and two-electron spin averages", check_two_electron_terms),
    ("average_of_averages", "spin-weighted averages reproduce the configuration average", check_average_of_averages),
    ("oracle_spin_averages", "determinant oracle = closed-form spin-resolved averages", check_oracle_spin_averages),
    ("oracle_configuration_average", "determinant oracle = configuration average", check_oracle_configuration_average),
    ("basis_independence", "oracle in the F basis commutes with the parameter transform", check_basis_independence),
    ("degeneracy", "uniform parameters give a scalar Coulomb matrix", check_degeneracy),
]


def run_verification(max_ell: int = DEFAULT_MAX_ELL, max_n: int | None = None, progress: bool = True,
                     generating_cap: int = GENERATING_ELL_CAP,
                     matrix_cap: int = MATRIX_DIMENSION_CAP) -> VerificationReport:
    scope = VerificationScope(max_ell, max_n, generating_cap, matrix_cap)
    report = VerificationReport(max_ell, max_n)
    for name, description, check in tqdm(CHECKS, desc="verify", unit="check", disable=not progress):
        result = CheckResult(name, description)
        started = time.perf_counter()
        check(result, scope)
        result.duration = time.perf_counter() - started
        status = "PASS" if result.passed else "FAIL"
        logger.debug(f"{status} {name}: {result.cases} cases in {result.duration:.2f}s")
        if not result.passed:
            logger.warning(f"{name}: {result.failure_count} of {result.cases} cases failed")
        report.checks.append(result)
    return report
