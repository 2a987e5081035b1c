"""Self-verification battery: every module invariant as a named check.

Each check is deterministic (fixed seeds), independent of the code path it
validates wherever an oracle is prescribed, and returns a CheckResult.  The
CLI ``verify`` subcommand runs the whole battery and fails loudly on any
regression.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._scalars import scalars_close
from .fredholm import (
    asymptotics_set_laplace,
    base_window,
    index_ladder,
    is_elliptic_at,
    to_gamma,
    window_ac0,
    window_acinf,
    witt_check,
)
from .link_spectra import (
    DiracSpectrumTable,
    SpectrumTable,
    point_spectrum,
    product_link_spectrum,
    rescale_link,
    sphere_laplace_spectrum,
)
from .model_cone import (
    LogGrid,
    ModeFunction,
    ModeTerm,
    apply_mode_operator,
    conformal_scalar_identity,
    euler_solve_mode,
    fd_branch_seed,
    fd_exponent_oracle,
    membership,
    mellin_derivative_check,
    mellin_forward,
    mellin_isometry_check,
    solve_model_problem,
    warped_cone_scalar_fd,
)
from .symbols import (
    ConeData,
    generic_conormal_roots,
    laplace_roots_downstairs,
    laplace_roots_upstairs,
    symbol_eval,
)

__all__ = ["CheckResult", "CHECKS", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


# ---------------------------------------------------------------------------
# oracles


@lru_cache(maxsize=None)
def harmonic_multiplicity_oracle(n: int, k: int) -> int:
    """dim of degree-k harmonic polynomials in n variables by rank-nullity.

    Builds the coordinate Laplacian as a matrix from degree-k monomials to
    degree-(k-2) monomials and subtracts its rank from the monomial count.
    """

    def monomials(total: int, nvars: int):
        if nvars == 1:
            yield (total,)
            return
        for first in range(total + 1):
            for rest in monomials(total - first, nvars - 1):
                yield (first,) + rest

    basis_k = list(monomials(k, n))
    if k < 2:
        return len(basis_k)
    basis_k2 = {mono: i for i, mono in enumerate(monomials(k - 2, n))}
    matrix = np.zeros((len(basis_k2), len(basis_k)))
    for col, mono in enumerate(basis_k):
        for var in range(n):
            e = mono[var]
            if e >= 2:
                lowered = list(mono)
                lowered[var] -= 2
                matrix[basis_k2[tuple(lowered)], col] += e * (e - 1)
    rank = np.linalg.matrix_rank(matrix)
    return len(basis_k) - int(rank)


def classical_sphere_exponents(n: int, s: int, k: int) -> tuple[int, int]:
    """Upstairs indicial roots over the round sphere link, in closed form.

    For s = 1 the harmonic exponents gamma in {k, 2-n-k} give roots
    {-k, k+n-2}; for s = -1 the roots are {2-n-k, k}.
    """
    if s == 1:
        return (-k, k + n - 2)
    if s == -1:
        return (2 - n - k, k)
    raise ValueError("closed form tabulated for s = +/-1 only")


def counting_oracle_index(n: int, s: int, beta: float, k_cap: int) -> int:
    """Signed count of admissible homogeneous solutions relative to a/2.

    Admissibility of x^{-zeta} phi at weight beta is membership beta > zeta;
    multiplicities come from the harmonic rank oracle.
    """
    a = (n - 2) * s
    ref = a / 2
    lo, hi = min(ref, beta), max(ref, beta)
    sign = 1 if beta > ref else -1
    count = 0
    for k in range(k_cap + 1):
        mult = harmonic_multiplicity_oracle(n, k)
        for zeta in classical_sphere_exponents(n, s, k):
            if lo < zeta < hi:
                count += sign * mult
    return count


# ---------------------------------------------------------------------------
# link_spectra checks


def check_sphere_multiplicities() -> CheckResult:
    for n in range(3, 9):
        table = sphere_laplace_spectrum(n, 6)
        for k in range(7):
            expected = harmonic_multiplicity_oracle(n, k)
            if table.entries[k][1] != expected:
                return CheckResult(
                    "link_spectra.sphere_multiplicity_oracle",
                    False,
                    f"n={n}, k={k}: table {table.entries[k][1]} vs oracle {expected}",
                )
    return CheckResult("link_spectra.sphere_multiplicity_oracle", True, "n<=8, k<=6 agree with rank oracle")


def check_product_algebra() -> CheckResult:
    s2 = sphere_laplace_spectrum(3, 4)
    s3 = sphere_laplace_spectrum(4, 4)
    cap = 12
    left = product_link_spectrum(product_link_spectrum(s2, s3, cap), s2, cap)
    right = product_link_spectrum(s2, product_link_spectrum(s3, s2, cap), cap)
    swap = product_link_spectrum(s3, s2, cap)
    direct = product_link_spectrum(s2, s3, cap)
    ident = product_link_spectrum(s2, point_spectrum(), cap)
    trunc = tuple((mu, m) for mu, m in s2.entries if mu <= cap)
    ok = (
        left.entries == right.entries
        and swap.entries == direct.entries
        and ident.entries == trunc
    )
    return CheckResult("link_spectra.product_algebra", ok, "commutative, associative, point identity")


def check_rescale_roundtrip() -> CheckResult:
    rng = random.Random(7)
    table = sphere_laplace_spectrum(5, 5)
    for _ in range(10):
        c = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        back = rescale_link(rescale_link(table, c), 1 / c)
        if back.entries != table.entries:
            return CheckResult("link_spectra.rescale_roundtrip", False, f"exact roundtrip failed at c={c}")
    cf = 1.7
    back = rescale_link(rescale_link(table, cf), 1 / cf)
    drift = max(abs(float(a[0]) - float(b[0])) for a, b in zip(back.entries, table.entries))
    ok = drift <= 1e-12
    return CheckResult("link_spectra.rescale_roundtrip", ok, f"float drift {drift:.2e}")


def check_rescale_mass() -> CheckResult:
    table = sphere_laplace_spectrum(4, 6)
    bound = 30
    c = Fraction(3, 2)
    before = table.total_multiplicity_below(bound)
    after = rescale_link(table, c).total_multiplicity_below(Fraction(bound) / (c * c))
    ok = before == after
    return CheckResult("link_spectra.rescale_mass", ok, f"total multiplicity {before} preserved")


# ---------------------------------------------------------------------------
# symbols checks


def check_shift_consistency() -> CheckResult:
    rng = random.Random(11)
    worst = 0.0
    for _ in range(100):
        n = rng.randint(3, 8)
        s = rng.uniform(-2.0, 2.0)
        mu = rng.uniform(0.0, 50.0)
        cone = ConeData(n, s)
        ups = laplace_roots_upstairs(cone, mu)
        downs = laplace_roots_downstairs(cone, mu)
        for u, d in zip(ups, downs):
            worst = max(worst, abs(float(d.zeta) - (float(u.zeta) - n / 2)))
    ok = worst <= 1e-12
    return CheckResult("symbols.shift_consistency", ok, f"max |down - (up - n/2)| = {worst:.2e}")


def check_vieta() -> CheckResult:
    rng = random.Random(13)
    worst = 0.0
    for _ in range(50):
        cone = ConeData(rng.randint(3, 8), rng.uniform(-2, 2))
        mu = rng.uniform(0, 40)
        lo, hi = laplace_roots_upstairs(cone, mu)
        scale = max(1.0, abs(float(cone.a)), mu)
        worst = max(
            worst,
            abs(float(lo.zeta + hi.zeta) - float(cone.a)) / scale,
            abs(float(lo.zeta * hi.zeta) + mu) / scale,
        )
    ok = worst <= 1e-12
    return CheckResult("symbols.vieta", ok, f"max relative defect {worst:.2e}")


def check_exponent_realization() -> CheckResult:
    rng = random.Random(17)
    worst = 0.0
    for _ in range(50):
        cone = ConeData(rng.randint(3, 8), rng.uniform(-2, 2))
        mu = rng.uniform(0, 40)
        for root in laplace_roots_upstairs(cone, mu):
            worst = max(worst, abs(complex(symbol_eval(cone, root.zeta, mu, "upstairs"))))
    ok = worst <= 1e-9
    return CheckResult("symbols.exponent_realization", ok, f"max |symbol at root| = {worst:.2e}")


def check_generic_quadratic() -> CheckResult:
    rng = random.Random(19)
    worst = 0.0
    for _ in range(25):
        cone = ConeData(rng.randint(3, 8), rng.uniform(-2, 2))
        mu = rng.uniform(0, 30)
        expected = sorted(float(r.zeta) for r in laplace_roots_upstairs(cone, mu))
        got = sorted(
            float(r.zeta.real if isinstance(r.zeta, complex) else r.zeta)
            for r in generic_conormal_roots([-mu, -float(cone.a), 1.0])
            for _ in range(r.mult)
        )
        worst = max(worst, max(abs(e - g) for e, g in zip(expected, got)))
    ok = worst <= 1e-9
    return CheckResult("symbols.generic_matches_quadratic", ok, f"max root deviation {worst:.2e}")


# ---------------------------------------------------------------------------
# fredholm checks


def check_ladder_oracle() -> CheckResult:
    for n in (4, 5, 6):
        for s in (1, -1):
            cone = ConeData(n, s)
            table = sphere_laplace_spectrum(n, 6)
            roots = [z for k in range(5) for z in classical_sphere_exponents(n, s, k)]
            lo, hi = min(roots) - 1, max(roots) + 1
            ladder = index_ladder(cone, table, lo, hi)
            for a, b, idx in ladder.intervals:
                mid = float(a + b) / 2
                expected = counting_oracle_index(n, s, mid, 6)
                if idx != expected:
                    return CheckResult(
                        "fredholm.ladder_counting_oracle",
                        False,
                        f"n={n}, s={s}, beta={mid}: ladder {idx} vs oracle {expected}",
                    )
    return CheckResult("fredholm.ladder_counting_oracle", True, "exact integer agreement on all midpoints")


def check_window_consistency() -> CheckResult:
    for n in range(4, 9):
        acinf = window_acinf(n)
        base = base_window(ConeData(n, -1))
        ac0 = window_ac0(n)
        gamma = to_gamma(n, base_window(ConeData(n, 1)))
        if acinf.endpoints() != base.endpoints() or ac0.endpoints() != gamma.endpoints():
            return CheckResult("fredholm.window_consistency", False, f"mismatch at n={n}")
    return CheckResult("fredholm.window_consistency", True, "acinf = base(s=-1), ac0 = gamma(base(s=1))")


def check_elliptic_breakpoints() -> CheckResult:
    cone = ConeData(4, 1)
    table = sphere_laplace_spectrum(4, 6)
    ladder = index_ladder(cone, table, Fraction(-3), Fraction(5))
    breakpoints = {z for z, _ in ladder.breakpoints}
    grid = [Fraction(num, 4) for num in range(-11, 20)]
    for beta in grid:
        elliptic = is_elliptic_at(cone, table, beta)
        if elliptic != (beta not in breakpoints):
            return CheckResult("fredholm.elliptic_iff_off_breakpoint", False, f"beta={beta}")
    return CheckResult("fredholm.elliptic_iff_off_breakpoint", True, "ellipticity fails exactly on breakpoints")


def check_ladder_monotone() -> CheckResult:
    for n in (4, 5, 6):
        for s in (1, -1):
            ladder = index_ladder(ConeData(n, s), sphere_laplace_spectrum(n, 6), -5, 6)
            indices = [idx for _, _, idx in ladder.intervals]
            if indices != sorted(indices):
                return CheckResult("fredholm.ladder_monotone", False, f"n={n}, s={s}: {indices}")
    return CheckResult("fredholm.ladder_monotone", True, "index nondecreasing in beta")


def check_asymptotics_empty_nonpositive() -> CheckResult:
    table = sphere_laplace_spectrum(5, 6)
    for s in (Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(0)):
        cone = ConeData(5, s)
        for beta in (-3, Fraction(-1, 2), 0, 2, 5):
            if asymptotics_set_laplace(cone, table, beta):
                return CheckResult(
                    "fredholm.asymptotics_empty_for_s_nonpositive", False, f"s={s}, beta={beta}"
                )
    return CheckResult("fredholm.asymptotics_empty_for_s_nonpositive", True, "empty strip for all s <= 0")


def check_witt_gap_range() -> CheckResult:
    # containment of the Witt interval in (-(n-1)/2, (n-1)/2) holds for
    # s <= 0 (empty interval) and for 1/(n-1) <= s <= (2n-1)/(n+1), not for
    # every s in [-1, 1]; assert the corrected endpoint arithmetic.
    for n in range(3, 9):
        gap = DiracSpectrumTable("gap", (), gap_bound=Fraction(n - 1, 2))
        samples = [
            Fraction(-1), Fraction(-1, 2), Fraction(0),
            Fraction(1, n - 1), Fraction(1, 2), Fraction(1),
            Fraction(1, 2 * (n - 1)),
        ]
        for s in samples:
            cone = ConeData(n, s)
            expected: bool | None
            if s <= 0 or Fraction(1, n - 1) <= s <= Fraction(2 * n - 1, n + 1):
                expected = True
            else:
                expected = None  # gap alone cannot decide
            if witt_check(cone, gap) is not expected:
                return CheckResult("fredholm.witt_gap_endpoints", False, f"n={n}, s={s}")
    return CheckResult("fredholm.witt_gap_endpoints", True, "gap containment matches endpoint arithmetic")


# ---------------------------------------------------------------------------
# model_cone checks


def check_membership_quadrature() -> CheckResult:
    rng = random.Random(23)
    for _ in range(50):
        gamma = rng.uniform(-2.0, 2.0)
        beta = rng.uniform(-2.0, 2.0)
        while abs(beta + gamma) < 0.2:
            beta = rng.uniform(-2.0, 2.0)
        m = rng.randint(0, 2)
        p = rng.choice([1.5, 2.0, 3.0])
        verdict = membership(gamma, m, beta, p)
        # quadrature of the weighted norm integrand over nested lower cutoffs:
        # a convergent integral gains a bounded tail when the cutoff doubles,
        # a divergent one grows by a huge exponential factor
        values = []
        with np.errstate(over="ignore"):
            for t_lo in (-40.0, -80.0):
                ts = np.linspace(t_lo, 0.0, 20001)
                integrand = np.exp((beta + gamma) * p * ts) * np.abs(ts) ** (p * m)
                values.append(float(np.trapezoid(integrand, ts)))
        diverges = values[-1] > 1e6 or values[-1] > 2 * values[-2]
        if verdict == diverges:
            return CheckResult(
                "model_cone.membership_quadrature",
                False,
                f"verdict {verdict} vs quadrature growth {values} (beta+gamma={beta + gamma:.3f})",
            )
    return CheckResult("model_cone.membership_quadrature", True, "50 randomized verdicts match quadrature")


def check_mellin_root_identity() -> CheckResult:
    rng = random.Random(29)
    worst = 0.0
    for _ in range(25):
        cone = ConeData(rng.randint(3, 8), Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        mu = Fraction(rng.randint(0, 20), rng.randint(1, 2))
        sol = euler_solve_mode(cone, mu, ModeTerm(0, 0, 0, mu))
        for hom in sol.homogeneous:
            residual = apply_mode_operator(cone, mu, hom)
            worst = max(worst, residual.max_abs_coeff())
            gamma = hom.terms[0].gamma
            worst = max(worst, abs(complex(symbol_eval(cone, -gamma, mu, "upstairs"))))
    ok = worst <= 1e-9
    return CheckResult("model_cone.mellin_root_identity", ok, f"max residual {worst:.2e}")


def _random_resonance_cases(count: int):
    rng = random.Random(31)
    cases = []
    while len(cases) < count:
        g_plus = Fraction(rng.randint(0, 12), rng.randint(1, 3))
        g_minus = -Fraction(rng.randint(0, 12), rng.randint(1, 3))
        a = -(g_plus + g_minus)
        mu = -(g_plus * g_minus)
        kind = rng.choice(["plain", "simple", "double"])
        m = rng.randint(0, 2)
        c = Fraction(rng.randint(1, 5), rng.randint(1, 3))
        if kind == "double":
            a, mu, lam = Fraction(0), Fraction(0), Fraction(0)
        elif kind == "simple":
            if g_plus == g_minus:
                continue
            lam = rng.choice([g_plus, g_minus])
        else:
            lam = Fraction(rng.randint(-14, 14), 2)
            if lam in (g_plus, g_minus):
                continue
        cases.append((a, mu, ModeTerm(c, lam, m, mu)))
    return cases


def check_euler_resonance() -> CheckResult:
    worst = 0.0
    for a, mu, term in _random_resonance_cases(50):
        n = 4
        s = Fraction(a, n - 2)
        cone = ConeData(n, s)
        sol = euler_solve_mode(cone, mu, term)
        lhs = apply_mode_operator(cone, mu, sol.particular)
        residual = lhs + ModeFunction((ModeTerm(-term.coeff, term.gamma, term.logpow, mu),))
        worst = max(worst, residual.max_abs_coeff())
        gammas = sol.exponents
        expected = 2 if gammas[0] == gammas[1] and term.gamma == gammas[0] else (
            1 if term.gamma in gammas else 0
        )
        if sol.resonance != expected:
            return CheckResult(
                "model_cone.euler_resonance", False, f"log escalation {sol.resonance} != {expected}"
            )
    ok = worst <= 1e-12
    return CheckResult("model_cone.euler_resonance", ok, f"max symbolic residual {worst:.2e}")


def check_fd_exponents() -> CheckResult:
    rng = random.Random(37)
    grid = LogGrid(-8.0, 8.0, 8001)
    worst = 0.0
    for _ in range(20):
        a = rng.choice([-1, 1]) * rng.uniform(1.0, 3.0)
        mu = rng.uniform(0.5, 10.0)
        n = 4
        cone = ConeData(n, a / (n - 2))
        g_lo = -a / 2 - math.sqrt(a * a / 4 + mu)
        g_hi = -a / 2 + math.sqrt(a * a / 4 + mu)
        low = fd_exponent_oracle(cone, mu, grid, fd_branch_seed(cone, mu, grid, "min"), seed_at="right")
        high = fd_exponent_oracle(cone, mu, grid, fd_branch_seed(cone, mu, grid, "max"), seed_at="left")
        worst = max(worst, abs(low.left - g_lo), abs(high.right - g_hi))
    ok = worst <= 1e-3
    return CheckResult("model_cone.fd_exponent_oracle", ok, f"max slope error {worst:.2e}")


def check_mellin_residuals() -> CheckResult:
    grid = LogGrid.reference()
    x = grid.x
    worst = 0.0
    # derivative rule on the reference grid, with analytic D f = x f'(x)
    cases = [
        (np.exp(-x), -x * np.exp(-x), 1.0),
        (np.exp(-(x ** 2)), -2 * x ** 2 * np.exp(-(x ** 2)), 2.0),
        (x * np.exp(-x), (x - x ** 2) * np.exp(-x), 1 + 1j),
    ]
    for f, df, zeta in cases:
        worst = max(worst, mellin_derivative_check(grid, f, zeta, df))
    # centered differences need a finer grid to beat the same bound
    fine = LogGrid(-20.0, 10.0, 2 ** 15)
    xf = fine.x
    for f, zeta in [(np.exp(-xf), 1.0), (np.exp(-(xf ** 2)), 2.0), (xf * np.exp(-xf), 1 + 1j)]:
        worst = max(worst, mellin_derivative_check(fine, f, zeta))
    # isometry on the documented valid pairs
    for f, theta in [
        (np.exp(-x), -0.5),
        (x * np.exp(-x), 0.5),
        (np.exp(-(grid.t ** 2) / 2), 0.0),
    ]:
        worst = max(worst, mellin_isometry_check(grid, f, theta))
    # integer-argument values against the integration-by-parts factorials
    for c, zeta in [(0, 1), (0, 4), (1, 2), (2, 3)]:
        value = mellin_forward(grid, x ** c * np.exp(-x), zeta)
        expected = math.factorial(c + zeta - 1)
        worst = max(worst, abs(value - expected) / expected)
    ok = worst <= 1e-6
    return CheckResult("model_cone.mellin_residuals", ok, f"max residual {worst:.2e}")


def check_solve_base_window() -> CheckResult:
    for n in (4, 5, 6):
        for s in (1, -1):
            cone = ConeData(n, s)
            table = sphere_laplace_spectrum(n, 6)
            window = base_window(cone)
            beta = window.lo + (window.hi - window.lo) * Fraction(1, 3)
            report = solve_model_problem(cone, table, ModeFunction.zero(), beta)
            if report.kernel_modes or report.lost_modes or report.obstructed_modes:
                return CheckResult("model_cone.solve_base_window", False, f"n={n}, s={s}")
    return CheckResult("model_cone.solve_base_window", True, "no kernel/obstruction modes on I_a")


def check_curvature_identity() -> CheckResult:
    worst = 0.0
    for n in (4, 5):
        for s in (-1.0, 0.5):
            for x in np.geomspace(0.05, 1.0, 10):
                ident = conformal_scalar_identity(n, s, lambda _x: 0.0, float(x))
                oracle = warped_cone_scalar_fd(n, s, float(x))
                scale = max(abs(ident), abs(oracle), (n - 1) * (n - 2) * float(x) ** (-2 * s))
                worst = max(worst, abs(ident - oracle) / scale)
    ok = worst <= 1e-6
    return CheckResult("model_cone.curvature_identity", ok, f"max relative defect {worst:.2e}")


def check_curvature_sign() -> CheckResult:
    xs = np.geomspace(1e-8, 1e-4, 9)
    for n in (4, 5):
        for s in (-2.0, -1.25, -1.0, -0.5, 0.25, 0.75, 1.0, 1.25, 2.0):
            values = [conformal_scalar_identity(n, s, lambda x: x ** -1, float(x)) for x in xs]
            nonneg = min(values) >= 0
            if nonneg != (abs(s) <= 1):
                return CheckResult("model_cone.curvature_sign_scan", False, f"n={n}, s={s}")
    return CheckResult("model_cone.curvature_sign_scan", True, "nonnegative for small x iff |s| <= 1")


CHECKS = {
    check.__name__.replace("check_", "", 1): check
    for check in (
        check_sphere_multiplicities,
        check_product_algebra,
        check_rescale_roundtrip,
        check_rescale_mass,
        check_shift_consistency,
        check_vieta,
        check_exponent_realization,
        check_generic_quadratic,
        check_ladder_oracle,
        check_window_consistency,
        check_elliptic_breakpoints,
        check_ladder_monotone,
        check_asymptotics_empty_nonpositive,
        check_witt_gap_range,
        check_membership_quadrature,
        check_mellin_root_identity,
        check_euler_resonance,
        check_fd_exponents,
        check_mellin_residuals,
        check_solve_base_window,
        check_curvature_identity,
        check_curvature_sign,
    )
}


def run_checks(names=None, inject_failure: str | None = None) -> list[CheckResult]:
    """Run the battery (all checks or a subset), sorted by check name.

    ``inject_failure`` marks the named check as failed after it runs, for
    exercising the reporting path.
    """
    selected = sorted(CHECKS) if names is None else sorted(names)
    results = []
    for name in selected:
        if name not in CHECKS:
            raise ValueError(f"unknown check {name!r}")
        result = CHECKS[name]()
        result = CheckResult(name, result.passed, result.detail)
        if inject_failure == name:
            result = CheckResult(name, False, "failure injected for testing")
        results.append(result)
    return results
