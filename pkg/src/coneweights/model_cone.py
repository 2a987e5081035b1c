"""Verification harness on the exact model cone.

Everything here works per mode: a link eigenmode reduces the operator to the
radial Euler operator L = D^2 + a*D - mu in D = x d/dx, which is a
constant-coefficient ODE in t = log x.  The harness provides Sobolev-Mellin
membership tests, a numerical Mellin transform with its defining identities,
symbolic Euler solving with resonance bookkeeping, a finite-difference
exponent oracle, exponent extraction from samples, and the scalar-curvature
identities of the conformal cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from ._scalars import Scalar, exactify, fmt, is_exact, sqrt_scalar
from .errors import GridError
from .link_spectra import SpectrumTable
from .symbols import ConeData

__all__ = [
    "ModeTerm",
    "ModeFunction",
    "LogGrid",
    "membership",
    "decay_check",
    "mellin_forward",
    "mellin_derivative_check",
    "mellin_isometry_check",
    "EulerSolution",
    "euler_solve_mode",
    "apply_mode_operator",
    "ModelProblemReport",
    "solve_model_problem",
    "FdExponents",
    "fd_branch_seed",
    "fd_exponent_oracle",
    "ExtractionResult",
    "asymptotics_extraction",
    "scalar_curvature_leading",
    "conformal_scalar_identity",
    "warped_cone_scalar_fd",
]

_RESONANCE_TOL = 1e-9


@dataclass(frozen=True)
class ModeTerm:
    """One summand c * x^gamma * (log x)^logpow riding on the mu-eigenmode."""

    coeff: Scalar
    gamma: Scalar
    logpow: int = 0
    mu: Scalar = 0

    def __post_init__(self):
        if not isinstance(self.logpow, int) or self.logpow < 0:
            raise ValueError(f"log power must be a nonnegative integer, got {self.logpow!r}")
        object.__setattr__(self, "coeff", exactify(self.coeff))
        object.__setattr__(self, "gamma", exactify(self.gamma))
        object.__setattr__(self, "mu", exactify(self.mu))


@dataclass(frozen=True)
class ModeFunction:
    """Finite sum of x^gamma (log x)^m terms; duplicates merged, zeros dropped."""

    terms: tuple[ModeTerm, ...]

    def __post_init__(self):
        grouped: dict[tuple, Scalar] = {}
        order: list[tuple] = []
        for term in self.terms:
            t = term if isinstance(term, ModeTerm) else ModeTerm(*term)
            key = (t.gamma, t.logpow, t.mu)
            if key not in grouped:
                grouped[key] = t.coeff
                order.append(key)
            else:
                grouped[key] = grouped[key] + t.coeff
        normalized = tuple(
            ModeTerm(grouped[key], key[0], key[1], key[2])
            for key in sorted(order, key=lambda k: (float(k[0]), k[1], float(k[2])))
            if grouped[key] != 0
        )
        object.__setattr__(self, "terms", normalized)

    @classmethod
    def single(cls, coeff, gamma, logpow=0, mu=0) -> "ModeFunction":
        return cls((ModeTerm(coeff, gamma, logpow, mu),))

    @classmethod
    def zero(cls) -> "ModeFunction":
        return cls(())

    def __add__(self, other: "ModeFunction") -> "ModeFunction":
        return ModeFunction(self.terms + other.terms)

    def scaled(self, factor) -> "ModeFunction":
        return ModeFunction(tuple(ModeTerm(factor * t.coeff, t.gamma, t.logpow, t.mu) for t in self.terms))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def max_abs_coeff(self) -> float:
        return max((abs(float(t.coeff)) for t in self.terms), default=0.0)

    def evaluate_t(self, t) -> np.ndarray:
        """Evaluate at t = log x (vectorized)."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for term in self.terms:
            out += float(term.coeff) * np.exp(float(term.gamma) * t) * t ** term.logpow
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for t in self.terms:
            s = f"{fmt(t.coeff)}*x^{fmt(t.gamma)}"
            if t.logpow:
                s += f"*(log x)^{t.logpow}"
            bits.append(s)
        return " + ".join(bits)


@dataclass(frozen=True)
class LogGrid:
    """Uniform grid in t = log x; the natural discretization of d_+x = dx/x."""

    t_min: float
    t_max: float
    count: int

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise ValueError("need t_min < t_max")
        if self.count < 2:
            raise ValueError("need at least two grid points")

    @classmethod
    def reference(cls) -> "LogGrid":
        """The documented reference grid: t in [-30, 30], 2^14 points."""
        return cls(-30.0, 30.0, 2 ** 14)

    @property
    def h(self) -> float:
        return (self.t_max - self.t_min) / (self.count - 1)

    @cached_property
    def t(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.count)

    @cached_property
    def x(self) -> np.ndarray:
        return np.exp(self.t)

    @property
    def decades(self) -> float:
        return (self.t_max - self.t_min) / math.log(10.0)

    def sample(self, fn) -> np.ndarray:
        return np.asarray(fn(self.x))


# ---------------------------------------------------------------------------
# membership in the weighted space near the tip


def membership(gamma: Scalar, logpow: int, beta: Scalar, p: Scalar = 2) -> bool:
    """Whether x^gamma (log x)^logpow lies in the weight-beta space near 0.

    The weighted p-norm integrates |x^{beta+gamma}|^p |log x|^{p*logpow}
    against dx/x, which converges iff beta + gamma > 0; log powers never
    rescue the boundary case beta + gamma = 0.
    """
    if not p > 1:
        raise ValueError(f"integrability exponent must satisfy p > 1, got {fmt(p)}")
    if not isinstance(logpow, int) or logpow < 0:
        raise ValueError(f"log power must be a nonnegative integer, got {logpow!r}")
    return beta + gamma > 0


def _term_member(term: ModeTerm, beta, p=2) -> bool:
    return membership(term.gamma, term.logpow, beta, p)


def decay_check(mf: ModeFunction, beta: Scalar, p: Scalar = 2) -> bool:
    """Check the pointwise bound u = O(x^{-beta}) for a weighted-space member."""
    for term in mf.terms:
        if not _term_member(term, beta, p):
            raise ValueError(
                f"term x^{fmt(term.gamma)}(log x)^{term.logpow} is not a member at weight {fmt(beta)}"
            )
    # every exponent satisfies gamma > -beta, so x^beta |u| stays bounded near 0
    return all(term.gamma > -beta for term in mf.terms)


# ---------------------------------------------------------------------------
# Mellin transform on the log grid


def _trapezoid(values: np.ndarray, h: float):
    return h * (values.sum() - (values[0] + values[-1]) / 2)


def _tail_estimate(boundary: float, inward: float, h: float, floor: float = 0.0) -> float:
    """Crude tail bound assuming the observed exponential decay continues.

    Values at or below ``floor`` (the quadrature noise level) count as zero.
    """
    if boundary <= floor:
        return 0.0
    if inward <= boundary:
        return math.inf
    rate = math.log(inward / boundary) / h
    return boundary / rate


def mellin_forward(grid: LogGrid, samples, zeta, tail_tol: float | None = 1e-8) -> complex:
    """Transform value integral(f(x) x^zeta dx/x) by trapezoid quadrature in t.

    The integrand must decay at both grid ends; the truncation tails are
    estimated from the observed end decay and a GridError is raised when
    their sum exceeds ``tail_tol``.
    """
    samples = np.asarray(samples)
    if samples.shape != (grid.count,):
        raise ValueError("samples must match the grid")
    integrand = samples * np.exp(complex(zeta) * grid.t)
    mags = np.abs(integrand)
    if tail_tol is not None:
        floor = 1e-30 * float(mags.max())
        tail = _tail_estimate(mags[0], mags[1], grid.h, floor) + _tail_estimate(
            mags[-1], mags[-2], grid.h, floor
        )
        if not tail <= tail_tol:
            raise GridError(
                f"grid too short: estimated truncation tail {tail:.3e} exceeds {tail_tol:.1e}"
            )
    return complex(_trapezoid(integrand, grid.h))


def mellin_derivative_check(grid: LogGrid, samples, zeta, d_samples=None) -> float:
    """Residual |M(Df)(zeta) + zeta*M(f)(zeta)| for the dilation derivative D.

    When ``d_samples`` is omitted, Df is formed by centered differences in t.
    """
    samples = np.asarray(samples)
    if d_samples is None:
        d_samples = np.gradient(samples, grid.t)
    rhs = mellin_forward(grid, samples, zeta)  # guards the truncation tails
    lhs = mellin_forward(grid, d_samples, zeta, tail_tol=None)
    return abs(lhs + complex(zeta) * rhs)


def mellin_isometry_check(
    grid: LogGrid,
    samples,
    theta: float,
    line_half_width: float = 60.0,
    line_count: int = 1201,
) -> float:
    """Relative discrepancy between the weighted norm and the line integral.

    Compares ||x^{-theta} f||^2 in L^2(dx/x) against the integral of
    |M(f)|^2 over the line Re zeta = -theta with the measure |dzeta|/(2 pi)
    (the normalization this harness pins down numerically).
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (grid.count,):
        raise ValueError("samples must match the grid")
    weighted = samples * np.exp(-theta * grid.t)
    mags2 = weighted * weighted
    peak = mags2.max()
    if peak == 0.0:
        raise GridError("identically zero samples")
    if mags2[0] > 1e-10 * peak or mags2[-1] > 1e-10 * peak:
        raise GridError(
            "weighted samples do not vanish at the grid ends: "
            "f is not (numerically) in the weighted space on this grid"
        )
    norm_sq = float(_trapezoid(mags2, grid.h))

    ys = np.linspace(-line_half_width, line_half_width, line_count)
    hy = ys[1] - ys[0]
    line_vals = np.empty(line_count)
    half = (weighted[0] + weighted[-1]) / 2  # trapezoid end correction
    for k, y in enumerate(ys):
        phases = np.exp(1j * y * grid.t)
        val = grid.h * ((weighted * phases).sum() - half * (phases[0] + phases[-1]) / 2)
        line_vals[k] = abs(val) ** 2
    # line-end values bottom out at the oscillatory-quadrature error floor
    # (~1e-16 of the peak), far above any true tail we still care about
    noise_floor = 1e-12 * float(line_vals.max())
    line_tail = _tail_estimate(line_vals[0], line_vals[1], hy, noise_floor) + _tail_estimate(
        line_vals[-1], line_vals[-2], hy, noise_floor
    )
    line_sq = float(_trapezoid(line_vals, hy)) / (2 * math.pi)
    if not line_tail / (2 * math.pi) <= 1e-8 * max(line_sq, 1e-300):
        raise GridError(
            f"insufficient line truncation: tail estimate {line_tail:.3e} at half-width {line_half_width}"
        )
    return abs(line_sq - norm_sq) / norm_sq


# ---------------------------------------------------------------------------
# Euler (equidimensional) solving with resonance


def _is_zero_scaled(value, scale: float) -> bool:
    if is_exact(value):
        return value == 0
    return abs(value) <= _RESONANCE_TOL * scale


@dataclass(frozen=True)
class EulerSolution:
    """Particular solution plus homogeneous basis of L u = c x^lambda log^m x."""

    particular: ModeFunction
    homogeneous: tuple[ModeFunction, ModeFunction]
    exponents: tuple[Scalar, Scalar]
    resonance: int  # log-degree escalation: 0 plain, 1 simple root, 2 double root


def euler_solve_mode(cone: ConeData, mu: Scalar, rhs) -> EulerSolution:
    """Solve D^2 u + a D u - mu u = c x^lambda (log x)^m on the mu-mode.

    If lambda avoids the homogeneous exponents the solution keeps log-degree
    m; a simple resonance escalates it by one, the double root (a = mu = 0,
    lambda = 0) by two.  Exact inputs produce exact coefficients.
    """
    term = rhs if isinstance(rhs, ModeTerm) else ModeTerm(*rhs)
    mu = exactify(mu)
    if mu < 0:
        raise ValueError(f"Laplace eigenvalue must be >= 0, got {fmt(mu)}")
    a = cone.a
    lam, m, c = term.gamma, term.logpow, term.coeff

    half = a / 2
    radical = sqrt_scalar(half * half + mu)
    g_minus, g_plus = -half - radical, -half + radical
    if radical == 0:
        hom = (
            ModeFunction.single(1, g_minus, 0, mu),
            ModeFunction.single(1, g_minus, 1, mu),
        )
    else:
        hom = (
            ModeFunction.single(1, g_minus, 0, mu),
            ModeFunction.single(1, g_plus, 0, mu),
        )

    scale = max(1.0, abs(float(lam)) ** 2, abs(float(a) * float(lam)), abs(float(mu)))
    p_val = lam * lam + a * lam - mu
    p_slope = 2 * lam + a

    if not _is_zero_scaled(p_val, scale):
        q = [None] * (m + 1)
        q[m] = c / p_val
        for j in range(m - 1, -1, -1):
            val = p_slope * (j + 1) * q[j + 1]
            if j + 2 <= m:
                val = val + (j + 2) * (j + 1) * q[j + 2]
            q[j] = -val / p_val
        resonance = 0
    elif not _is_zero_scaled(p_slope, scale):
        r = [None] * (m + 1)
        r[m] = c / p_slope
        for j in range(m - 1, -1, -1):
            r[j] = -((j + 1) * r[j + 1]) / p_slope
        q = [0] * (m + 2)
        for j in range(m + 1):
            q[j + 1] = r[j] / (j + 1)
        resonance = 1
    else:
        q = [0] * (m + 3)
        q[m + 2] = c / ((m + 1) * (m + 2))
        resonance = 2

    particular = ModeFunction(tuple(ModeTerm(q[j], lam, j, mu) for j in range(len(q)) if q[j] != 0))
    return EulerSolution(particular, hom, (g_minus, g_plus), resonance)


def apply_mode_operator(cone: ConeData, mu: Scalar, mf: ModeFunction) -> ModeFunction:
    """Apply L = D^2 + a D - mu to a mode function, symbolically.

    On x^lambda (log x)^m the operator acts as P(lambda) log^m +
    P'(lambda) m log^{m-1} + m(m-1) log^{m-2}, all at exponent lambda.
    """
    a = cone.a
    mu = exactify(mu)
    out: list[ModeTerm] = []
    for term in mf.terms:
        lam, m, c = term.gamma, term.logpow, term.coeff
        p_val = lam * lam + a * lam - mu
        p_slope = 2 * lam + a
        out.append(ModeTerm(c * p_val, lam, m, term.mu))
        if m >= 1:
            out.append(ModeTerm(c * p_slope * m, lam, m - 1, term.mu))
        if m >= 2:
            out.append(ModeTerm(c * m * (m - 1), lam, m - 2, term.mu))
    return ModeFunction(tuple(out))


# ---------------------------------------------------------------------------
# model problem report


@dataclass(frozen=True)
class HomogeneousVerdict:
    mu: Scalar
    mult: int
    zeta: Scalar  # upstairs indicial root; solution is x^{-zeta}
    function: ModeFunction
    member: bool
    newly_admissible: bool
    lost: bool


@dataclass(frozen=True)
class ModeSolveVerdict:
    mu: Scalar
    mult: int
    rhs: ModeFunction
    data_member: bool | None
    particular: ModeFunction | None
    particular_member: bool | None
    obstructed: bool


@dataclass(frozen=True)
class ModelProblemReport:
    beta: Scalar
    p: Scalar
    reference_weight: Scalar
    modes: tuple[ModeSolveVerdict, ...]
    homogeneous: tuple[HomogeneousVerdict, ...]

    @property
    def kernel_modes(self) -> tuple[HomogeneousVerdict, ...]:
        return tuple(h for h in self.homogeneous if h.newly_admissible)

    @property
    def lost_modes(self) -> tuple[HomogeneousVerdict, ...]:
        return tuple(h for h in self.homogeneous if h.lost)

    @property
    def obstructed_modes(self) -> tuple[ModeSolveVerdict, ...]:
        return tuple(mv for mv in self.modes if mv.obstructed)

    @property
    def net_kernel_change(self) -> int:
        return sum(h.mult for h in self.kernel_modes) - sum(h.mult for h in self.lost_modes)


def solve_model_problem(
    cone: ConeData,
    table: SpectrumTable,
    rhs: ModeFunction,
    beta: Scalar,
    p: Scalar = 2,
) -> ModelProblemReport:
    """Per-mode solvability and kernel report at weight beta on the model cone.

    The right-hand side is data for the dilation-form operator x^{2s} Delta,
    which lives at the same weight as the solution (Delta-data at beta + 2s
    carries exactly the x^{2s} factor).  Kernel and loss verdicts are
    relative to the index-0 reference weight a/2 (0 when a = 0): a
    homogeneous solution is a kernel mode when it is admissible at beta but
    not at the reference, and lost in the opposite case.
    """
    beta = exactify(beta)
    a = cone.a
    reference = a / 2 if a != 0 else exactify(0)

    by_mu: dict[Scalar, list[ModeTerm]] = {}
    for term in rhs.terms:
        by_mu.setdefault(term.mu, []).append(term)

    mode_set: list[tuple[Scalar, int]] = list(table.entries)
    tabulated = {mu for mu, _ in table.entries}
    for mu in by_mu:
        if mu not in tabulated:
            mode_set.append((mu, 1))
    mode_set.sort(key=lambda pair: float(pair[0]))

    homogeneous: list[HomogeneousVerdict] = []
    modes: list[ModeSolveVerdict] = []
    for mu, mult in mode_set:
        terms = by_mu.get(mu, [])
        solution_exponents = None
        if terms:
            particular = ModeFunction.zero()
            for term in terms:
                sol = euler_solve_mode(cone, mu, term)
                particular = particular + sol.particular
                solution_exponents = sol.exponents
            data_ok = all(_term_member(t, beta, p) for t in terms)
            part_ok = all(_term_member(t, beta, p) for t in particular.terms)
            modes.append(
                ModeSolveVerdict(mu, mult, ModeFunction(tuple(terms)), data_ok, particular, part_ok, not part_ok)
            )
        else:
            modes.append(ModeSolveVerdict(mu, mult, ModeFunction.zero(), None, None, None, False))
            solution_exponents = None

        sol0 = euler_solve_mode(cone, mu, ModeTerm(0, 0, 0, mu))
        gammas = sol0.exponents if solution_exponents is None else solution_exponents
        double = gammas[0] == gammas[1]
        for idx, gamma in enumerate(gammas):
            zeta = -gamma
            logpow = idx if double else 0
            func = ModeFunction.single(1, gamma, logpow, mu)
            member_beta = membership(gamma, logpow, beta, p)
            member_ref = membership(gamma, logpow, reference, p)
            homogeneous.append(
                HomogeneousVerdict(
                    mu,
                    mult,
                    zeta,
                    func,
                    member_beta,
                    member_beta and not member_ref,
                    member_ref and not member_beta,
                )
            )

    return ModelProblemReport(beta, exactify(p), reference, tuple(modes), tuple(homogeneous))


# ---------------------------------------------------------------------------
# finite-difference exponent oracle


@dataclass(frozen=True)
class FdExponents:
    """Dominant log-slopes of a marched homogeneous solution at each grid end."""

    left: float
    right: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.left, self.right)


def _fd_stencil(cone: ConeData, mu: float, h: float) -> tuple[float, float, float]:
    a = float(cone.a)
    plus = 1.0 / h ** 2 + a / (2 * h)
    minus = 1.0 / h ** 2 - a / (2 * h)
    center = 2.0 / h ** 2 + mu
    return plus, center, minus


def fd_branch_seed(cone: ConeData, mu: Scalar, grid: LogGrid, branch: str) -> tuple[float, float]:
    """Two-point seed exciting a single characteristic branch of the stencil.

    Solves the recurrence's own characteristic quadratic (not the continuum
    indicial equation) so the march stays on one branch up to roundoff;
    ``branch`` selects the smaller ('min') or larger ('max') exponent.
    """
    plus, center, minus = _fd_stencil(cone, float(mu), grid.h)
    disc = math.sqrt(center * center - 4 * plus * minus)
    lam_min = (center - disc) / (2 * plus)
    lam_max = (center + disc) / (2 * plus)
    if branch == "min":
        return (1.0, lam_min)
    if branch == "max":
        return (1.0, lam_max)
    raise ValueError(f"branch must be 'min' or 'max', got {branch!r}")


def fd_exponent_oracle(
    cone: ConeData, mu: Scalar, grid: LogGrid, seed, seed_at: str = "left"
) -> FdExponents:
    """March L u = 0 by centered finite differences in t and fit exponents.

    The stencil is constant-coefficient because D is translation-invariant
    in t, so the scheme is exact up to O(h^2).  The slope of log|u| over the
    first (last) quarter of the grid recovers the dominant homogeneous
    exponent at that end.  ``seed`` gives two consecutive values at the
    ``seed_at`` end; march away from the end whose exponent is sought, so
    roundoff excites only decaying contamination there.
    """
    if grid.decades < 6.0 - 1e-12:
        raise ValueError(f"grid must span at least 6 decades in x, got {grid.decades:.2f}")
    mu_f = float(mu)
    if mu_f < 0:
        raise ValueError("Laplace eigenvalue must be >= 0")
    u = np.empty(grid.count)
    plus, center, minus = _fd_stencil(cone, mu_f, grid.h)
    if seed_at == "left":
        u[0], u[1] = float(seed[0]), float(seed[1])
        for j in range(1, grid.count - 1):
            u[j + 1] = (center * u[j] - minus * u[j - 1]) / plus
    elif seed_at == "right":
        u[-2], u[-1] = float(seed[0]), float(seed[1])
        for j in range(grid.count - 2, 0, -1):
            u[j - 1] = (center * u[j] - plus * u[j + 1]) / minus
    else:
        raise ValueError(f"seed_at must be 'left' or 'right', got {seed_at!r}")

    if not np.all(np.isfinite(u)):
        raise GridError("marched solution overflowed; shrink the grid span")
    if np.abs(u).max() < 1e-250:
        raise GridError("degenerate seed: both characteristic directions suppressed below noise")

    quarter = max(grid.count // 4, 8)

    def _fit(sl: slice) -> float:
        seg = u[sl]
        ts = grid.t[sl]
        keep = np.abs(seg) > 0
        if keep.sum() < 8:
            raise GridError("degenerate seed: solution vanishes on the fit window")
        return float(np.polyfit(ts[keep], np.log(np.abs(seg[keep])), 1)[0])

    return FdExponents(_fit(slice(0, quarter)), _fit(slice(grid.count - quarter, grid.count)))


# ---------------------------------------------------------------------------
# exponent extraction


@dataclass(frozen=True)
class ExtractionResult:
    candidates: tuple[tuple[float, int], ...]
    coefficients: tuple[float, ...]
    residual: float
    condition: float


def asymptotics_extraction(grid: LogGrid, samples, candidates, cond_limit: float = 1e12) -> ExtractionResult:
    """Least-squares fit of samples against x^gamma (log x)^m candidates.

    Columns are normalized before solving; the condition number of the
    normalized design is reported and a GridError is raised beyond
    ``cond_limit`` (the grid cannot resolve the exponent gap).
    """
    samples = np.asarray(samples, dtype=float)
    cands: list[tuple[float, int]] = []
    for cand in candidates:
        if isinstance(cand, tuple):
            gamma, logpow = cand
        else:
            gamma, logpow = cand, 0
        cands.append((float(gamma), int(logpow)))
    if len(set(cands)) != len(cands):
        raise ValueError("candidate exponents must be distinct")

    design = np.column_stack([np.exp(g * grid.t) * grid.t ** m for g, m in cands])
    norms = np.linalg.norm(design, axis=0)
    if np.any(norms == 0):
        raise GridError("candidate column vanishes on the grid")
    design = design / norms
    condition = float(np.linalg.cond(design))
    if condition > cond_limit:
        raise GridError(
            f"ill-conditioned design (cond = {condition:.3e}): exponent gap too small for this grid"
        )
    scaled, *_ = np.linalg.lstsq(design, samples, rcond=None)
    residual = float(np.linalg.norm(design @ scaled - samples))
    coeffs = tuple(float(v) for v in scaled / norms)
    return ExtractionResult(tuple(cands), coeffs, residual, condition)


# ---------------------------------------------------------------------------
# scalar curvature identities


def scalar_curvature_leading(n: int, kappa_F: Scalar) -> Scalar:
    """Coefficient of x^{-2} in the scalar curvature of the exact cone."""
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"requires integer n >= 3, got {n!r}")
    return exactify(kappa_F) - (n - 1) * (n - 2)


def conformal_scalar_identity(n: int, s, kappa_bar_profile, x: float) -> float:
    """Scalar curvature of the conformal metric from the cone profile.

    Evaluates x^{-alpha(n+2)/(n-2)} ((n-1)(n-2)(1-s^2) x^{alpha-2} +
    kappa_bar(x) x^alpha) with alpha = (s-1)(n-2)/2.
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"requires integer n >= 3, got {n!r}")
    if not x > 0:
        raise ValueError("x must be positive")
    s = float(s)
    alpha = (s - 1) * (n - 2) / 2
    lead = (n - 1) * (n - 2) * (1 - s * s) * x ** (alpha - 2)
    return x ** (-alpha * (n + 2) / (n - 2)) * (lead + float(kappa_bar_profile(x)) * x ** alpha)


def warped_cone_scalar_fd(n: int, s, x: float, link_radius: float = 1.0, rel_step: float = 1e-3) -> float:
    """Scalar curvature of x^{2s-2}(dx^2 + x^2 R^2 g_round) by finite differences.

    Changes to the arclength variable rho (d rho = x^{s-1} dx), reads off the
    warping w(rho) = R x^s, and evaluates the warped-product curvature
    (n-1)(n-2)(1-w'^2)/w^2 - 2(n-1) w''/w over the unit round sphere with
    five-point stencils.  Independent of the conformal identity formula.
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"requires integer n >= 3, got {n!r}")
    s = float(s)
    if s == 0.0:
        raise ValueError("the arclength inversion used here requires s != 0")
    if not x > 0:
        raise ValueError("x must be positive")
    R = float(link_radius)

    rho0 = x ** s / s

    def w_of(rho: float) -> float:
        xr = (s * rho) ** (1.0 / s)
        return R * xr ** s

    h = abs(rho0) * rel_step
    stencil = [w_of(rho0 + k * h) for k in (-2, -1, 0, 1, 2)]
    w0 = stencil[2]
    w1 = (-stencil[4] + 8 * stencil[3] - 8 * stencil[1] + stencil[0]) / (12 * h)
    w2 = (-stencil[4] + 16 * stencil[3] - 30 * stencil[2] + 16 * stencil[1] - stencil[0]) / (12 * h ** 2)
    return (n - 1) * (n - 2) * (1 - w1 * w1) / (w0 * w0) - 2 * (n - 1) * w2 / w0
