"""Fredholm verdicts from root sets and spectra.

Weight windows are open intervals free of indicial roots: inside one the
operator is Fredholm with constant index, and the index jumps by the total
eigenvalue multiplicity at each root crossed.  The sign convention is that
the index increases with beta, because raising beta enlarges the admissible
near-tip profiles u = O(x^{-beta}); this is pinned by the homogeneous-
solution counting oracle of the model-cone harness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._scalars import DEFAULT_TOL, Scalar, exactify, fmt, is_exact, scalars_close, sqrt_scalar
from .errors import InsufficientSpectrumError, OnBreakpointError
from .link_spectra import DiracSpectrumTable, SpectrumTable
from .symbols import ConeData, laplace_roots_upstairs

__all__ = [
    "WeightedIndex",
    "WeightWindow",
    "IndexLadder",
    "is_elliptic_at",
    "base_window",
    "index_ladder",
    "to_gamma",
    "to_delta_acyl",
    "to_delta_ah",
    "window_ac0",
    "window_acinf",
    "window_ah",
    "window_ah_shifted",
    "AcylWindows",
    "acyl_windows",
    "ConifoldEndReport",
    "ConifoldVerdict",
    "conifold_windows",
    "witt_check",
    "DiracWindows",
    "dirac_windows",
    "asymptotics_set_laplace",
    "asymptotics_set_dirac",
    "unique_closed_extension",
    "self_adjoint_weight",
    "sobolev_embedding",
]


@dataclass(frozen=True)
class WeightedIndex:
    """A point on the Sobolev-Mellin scale: weight beta, smoothness sigma, p."""

    beta: Scalar
    sigma: Scalar
    p: Scalar = 2

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError(f"integrability exponent must satisfy p > 1, got {fmt(self.p)}")


@dataclass(frozen=True)
class WeightWindow:
    """Open weight interval with an optional constant Fredholm index."""

    lo: Scalar
    hi: Scalar
    parametrization: str = "beta"
    index: int | None = 0
    operator: str = "laplace"

    def __post_init__(self):
        if self.parametrization not in ("beta", "gamma", "delta"):
            raise ValueError(f"unknown parametrization {self.parametrization!r}")
        object.__setattr__(self, "lo", exactify(self.lo))
        object.__setattr__(self, "hi", exactify(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty window: [{fmt(self.lo)}, {fmt(self.hi)}]")

    def contains(self, value: Scalar) -> bool:
        return self.lo < value < self.hi

    def on_boundary(self, value: Scalar, tol: float = DEFAULT_TOL) -> bool:
        return scalars_close(value, self.lo, tol) or scalars_close(value, self.hi, tol)

    def endpoints(self) -> tuple[Scalar, Scalar]:
        return (self.lo, self.hi)

    def __str__(self):
        idx = "" if self.index is None else f", index {self.index}"
        return f"{self.parametrization}-window ({fmt(self.lo)}, {fmt(self.hi)}){idx}"


def _affine_window(window: WeightWindow, transform, parametrization: str) -> WeightWindow:
    lo, hi = transform(window.lo), transform(window.hi)
    if lo > hi:
        lo, hi = hi, lo
    return WeightWindow(lo, hi, parametrization, window.index, window.operator)


def to_gamma(cone_or_n, value):
    """Reparametrize beta -> gamma = n/2 - beta (windows flip orientation)."""
    n = cone_or_n.n if isinstance(cone_or_n, ConeData) else int(cone_or_n)
    shift = Fraction(n, 2)
    if isinstance(value, WeightWindow):
        return _affine_window(value, lambda b: shift - b, "gamma")
    return shift - exactify(value)


def to_delta_acyl(value):
    """Reparametrize beta -> delta = -beta of the cylindrical picture."""
    if isinstance(value, WeightWindow):
        return _affine_window(value, lambda b: -b, "delta")
    return -exactify(value)


def to_delta_ah(n: int, p: Scalar, value):
    """Reparametrize beta -> delta with beta = -delta + (1-n)/p."""
    if not p > 1:
        raise ValueError(f"integrability exponent must satisfy p > 1, got {fmt(p)}")
    offset = (1 - n) / exactify(p) if is_exact(p) else (1 - n) / float(p)
    if isinstance(value, WeightWindow):
        return _affine_window(value, lambda b: offset - b, "delta")
    return offset - exactify(value)


# ---------------------------------------------------------------------------
# ellipticity and the index ladder


def _required_mu(cone: ConeData, beta: Scalar) -> Scalar:
    # beta is an upstairs root for the eigenvalue mu = beta(beta - a)
    return beta * (beta - cone.a)


def is_elliptic_at(cone: ConeData, table: SpectrumTable, beta: Scalar) -> bool:
    """Whether no upstairs indicial root sits on the weight line beta.

    Exact for rational data; floats compare with the 1e-9 breakpoint
    tolerance.  Raises when the table cannot certify the answer.
    """
    beta = exactify(beta)
    mu_star = _required_mu(cone, beta)
    if mu_star < 0 and not scalars_close(mu_star, 0):
        return True
    table.require_sufficient(mu_star, f"cannot certify ellipticity at beta = {fmt(beta)}")
    return not any(scalars_close(mu, mu_star) for mu, _ in table.entries)


def base_window(cone: ConeData) -> WeightWindow:
    """The index-0 window between the weights 0 and a (requires n >= 4, a != 0)."""
    if cone.n < 4:
        raise ValueError("the base index-0 window requires n >= 4")
    a = cone.a
    if a == 0:
        raise ValueError("a = 0: cylindrical regime, use acyl_windows")
    lo, hi = (a, 0) if a < 0 else (0, a)
    return WeightWindow(lo, hi, "beta", 0, "laplace")


@dataclass(frozen=True)
class IndexLadder:
    """Piecewise-constant Fredholm index over a beta range.

    ``breakpoints`` are the distinct upstairs roots inside the range with
    summed multiplicities; ``intervals`` are (lo, hi, index) triples covering
    the range.  The index is 0 on the base window and nondecreasing in beta.
    """

    breakpoints: tuple[tuple[Scalar, int], ...]
    intervals: tuple[tuple[Scalar, Scalar, int], ...]
    base_window: WeightWindow

    @property
    def beta_min(self) -> Scalar:
        return self.intervals[0][0]

    @property
    def beta_max(self) -> Scalar:
        return self.intervals[-1][1]

    def classify(self, beta: Scalar):
        """('breakpoint', jump) on a root, else ('index', value)."""
        for zeta, jump in self.breakpoints:
            if scalars_close(beta, zeta):
                return ("breakpoint", jump)
        for lo, hi, idx in self.intervals:
            if lo < beta < hi or scalars_close(beta, lo) or scalars_close(beta, hi):
                return ("index", idx)
        raise ValueError(f"beta = {fmt(beta)} outside the ladder range")

    def index_at(self, beta: Scalar) -> int:
        kind, value = self.classify(beta)
        if kind == "breakpoint":
            raise OnBreakpointError(
                f"beta = {fmt(beta)} is an indicial root (jump {value}); not Fredholm there"
            )
        return value


def _merge_breakpoints(pairs: list[tuple[Scalar, int]]) -> list[list]:
    pairs.sort(key=lambda pr: float(pr[0]))
    merged: list[list] = []
    for zeta, mult in pairs:
        if merged and scalars_close(merged[-1][0], zeta):
            merged[-1][1] += mult
        else:
            merged.append([zeta, mult])
    return merged


def index_ladder(cone: ConeData, table: SpectrumTable, beta_min: Scalar, beta_max: Scalar) -> IndexLadder:
    """Index-vs-beta ladder over [beta_min, beta_max], anchored at 0 on I_a."""
    base = base_window(cone)
    beta_min, beta_max = exactify(beta_min), exactify(beta_max)
    if not beta_min < beta_max:
        raise ValueError("need beta_min < beta_max")
    a = cone.a
    reference = a / 2  # always root-free: a root there would need mu = -a^2/4 < 0

    hull_lo = min(beta_min, reference)
    hull_hi = max(beta_max, reference)
    mu_need = max(_required_mu(cone, hull_lo), _required_mu(cone, hull_hi), 0)
    table.require_sufficient(mu_need, "index ladder needs more spectrum")

    all_roots: list[tuple[Scalar, int]] = []
    for mu, mult in table.entries:
        for root in laplace_roots_upstairs(cone, mu, mult):
            if hull_lo <= root.zeta <= hull_hi:
                all_roots.append((root.zeta, mult))
    merged = _merge_breakpoints(all_roots)

    def relative_index(beta: Scalar) -> int:
        up = sum(m for z, m in merged if reference < z < beta)
        down = sum(m for z, m in merged if beta < z < reference)
        return up - down

    inside = [(z, m) for z, m in merged if beta_min < z < beta_max]
    cuts: list[Scalar] = [beta_min] + [z for z, _ in inside] + [beta_max]
    intervals = []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = (lo + hi) / 2
        intervals.append((lo, hi, relative_index(mid)))
    return IndexLadder(tuple((z, m) for z, m in inside), tuple(intervals), base)


# ---------------------------------------------------------------------------
# named application windows


def window_ac0(n: int) -> WeightWindow:
    """Index-0 gamma-window of the Laplacian on a cone point (s = 1)."""
    cone = ConeData(n, 1)
    return to_gamma(n, base_window(cone))


def window_acinf(n: int) -> WeightWindow:
    """Index-0 beta-window of the Laplacian on a conical end at infinity (s = -1)."""
    return base_window(ConeData(n, -1))


def window_ah(n: int, p: Scalar) -> WeightWindow:
    """Index-0 delta-window of the asymptotically hyperbolic Laplacian.

    The conormal symbol zeta^2 + (n-1)zeta has roots {1-n, 0}; the beta
    window between them maps to ((1-n)/p, (n-1)(p-1)/p) in delta.
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"requires integer n >= 3, got {n!r}")
    if not p > 1:
        raise ValueError(f"integrability exponent must satisfy p > 1, got {fmt(p)}")
    beta_window = WeightWindow(1 - n, 0, "beta", 0, "ah")
    return to_delta_ah(n, p, beta_window)


def window_ah_shifted(n: int, p: Scalar, t: Scalar) -> WeightWindow:
    """Index-0 delta-window of the shifted hyperbolic operator with potential
    t(n-1-t); the symbol factors as (zeta+t)(zeta+n-1-t)."""
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"requires integer n >= 3, got {n!r}")
    if not p > 1:
        raise ValueError(f"integrability exponent must satisfy p > 1, got {fmt(p)}")
    t = exactify(t)
    if not 2 * t > n - 1:
        raise ValueError(f"need 2t > n-1 (reflect t -> n-1-t first), got t = {fmt(t)}")
    lo_beta, hi_beta = -t, t - (n - 1)
    beta_window = WeightWindow(lo_beta, hi_beta, "beta", 0, "ah_shifted")
    return to_delta_ah(n, p, beta_window)


@dataclass(frozen=True)
class AcylWindows:
    """Cylindrical-regime Fredholm data in the delta parametrization.

    Fredholmness fails exactly at delta = +/- sqrt(mu); the paper asserts
    Fredholm (no index value) on the primary window (0, sqrt(mu_1)).
    """

    primary: WeightWindow
    failure_points: tuple[Scalar, ...]
    windows: tuple[WeightWindow, ...]
    table: SpectrumTable

    def classify(self, delta: Scalar) -> str:
        self.table.require_sufficient(delta * delta, "cylindrical verdict beyond tabulated spectrum")
        if any(scalars_close(delta, f) for f in self.failure_points):
            return "failure"
        return "fredholm"


def acyl_windows(n: int, table: SpectrumTable) -> AcylWindows:
    """Fredholm windows of the cylindrical Laplacian (a = 0)."""
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"requires integer n >= 3, got {n!r}")
    from .link_spectra import first_positive_eigenvalue

    mu1 = first_positive_eigenvalue(table)
    primary = WeightWindow(0, sqrt_scalar(mu1), "delta", None, "laplace")
    failures: list[Scalar] = []
    for mu, _ in table.entries:
        root = sqrt_scalar(mu)
        if root == 0:
            failures.append(exactify(0))
        else:
            failures.extend((-root, root))
    failures.sort(key=float)
    windows = tuple(
        WeightWindow(lo, hi, "delta", None, "laplace")
        for lo, hi in zip(failures, failures[1:])
    )
    return AcylWindows(primary, tuple(failures), windows, table)


@dataclass(frozen=True)
class ConifoldEndReport:
    kind: str  # "AC0" | "ACinf"
    window: WeightWindow
    weight: Scalar
    status: str  # "inside" | "boundary" | "outside"


@dataclass(frozen=True)
class ConifoldVerdict:
    ends: tuple[ConifoldEndReport, ...]
    ok: bool

    @property
    def failing_ends(self) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.ends) if e.status != "inside")


def conifold_windows(ends) -> ConifoldVerdict:
    """Combined index-0 verdict over a finite union of conical ends.

    Each end contributes its own window (gamma for AC0 ends, beta for ACinf
    ends); the combined verdict holds iff every per-end weight lies strictly
    inside its window.
    """
    ends = list(ends)
    if not ends:
        raise ValueError("need at least one end")
    dims = {n for _, n, _ in ends}
    if len(dims) != 1:
        raise ValueError(f"all ends must share the dimension, got {sorted(dims)}")
    reports = []
    for kind, n, weight in ends:
        if kind == "AC0":
            window = window_ac0(n)
        elif kind == "ACinf":
            window = window_acinf(n)
        else:
            raise ValueError(f"unknown end type {kind!r} (expected 'AC0' or 'ACinf')")
        weight = exactify(weight)
        if window.on_boundary(weight):
            status = "boundary"
        elif window.contains(weight):
            status = "inside"
        else:
            status = "outside"
        reports.append(ConifoldEndReport(kind, window, weight, status))
    return ConifoldVerdict(tuple(reports), all(r.status == "inside" for r in reports))


# ---------------------------------------------------------------------------
# Dirac: Witt condition, windows, asymptotics sets


def _witt_interval(cone: ConeData) -> tuple[Scalar, Scalar]:
    hi = Fraction(cone.n, 2) - cone.a_hat
    return (hi - cone.s, hi)


def witt_check(cone: ConeData, dirac: DiracSpectrumTable | None) -> bool | None:
    """Is the interval (n/2 - a_hat - s, n/2 - a_hat) free of link Dirac spectrum?

    Definitive False when a listed eigenvalue lies inside.  True when the
    declared gap covers the interval, or when the listed entries span it
    (entries are treated as exhaustive within their span).  None when the
    available data cannot decide.
    """
    lo, hi = _witt_interval(cone)
    if not lo < hi:
        return True  # empty interval (s <= 0)
    if dirac is None:
        return None
    for theta, _ in dirac.entries:
        if lo < theta < hi:
            return False
    g = dirac.gap_bound
    if g is not None and -g <= lo and hi <= g:
        return True
    if dirac.entries:
        span_lo, span_hi = dirac.entries[0][0], dirac.entries[-1][0]
        if span_lo <= lo and hi <= span_hi:
            return True
    return None


@dataclass(frozen=True)
class DiracWindows:
    """Applicable index-0 Dirac windows, or the named hypotheses that failed."""

    basic: WeightWindow | None
    enhanced: WeightWindow | None
    self_adjoint_weight: Scalar | None
    reasons: tuple[str, ...]
    notes: tuple[str, ...] = ()


def dirac_windows(
    cone: ConeData,
    dirac: DiracSpectrumTable | None = None,
    kappa_nonneg: bool = False,
) -> DiracWindows:
    """Index-0 beta-windows for the Dirac operator.

    The basic window (n/2 - s, n/2) needs s > 0 and the geometric Witt
    condition; the enhanced window ((n-1)(s-1)/2, (n-1)(s+1)/2) needs
    |s| <= 1 and nonnegative cone scalar curvature, which forces the link
    gap (n-1)/2.
    """
    n, s = cone.n, cone.s
    reasons: list[str] = []
    notes: list[str] = []

    effective = dirac
    if kappa_nonneg:
        curvature_gap = Fraction(n - 1, 2)
        if dirac is None:
            effective = DiracSpectrumTable("curvature gap", (), gap_bound=curvature_gap)
        else:
            gap = dirac.gap_bound
            best = curvature_gap if gap is None else max(exactify(gap), curvature_gap)
            effective = DiracSpectrumTable(dirac.label, dirac.entries, gap_bound=best)

    basic = None
    if s > 0:
        witt = witt_check(cone, effective)
        if witt is True:
            basic = WeightWindow(Fraction(n, 2) - s, Fraction(n, 2), "beta", 0, "dirac")
            if s == 1:
                notes.append("core operator essentially self-adjoint at beta = n/2 (s = 1)")
        elif witt is False:
            reasons.append("geometric Witt condition fails (spectrum meets the interval)")
        else:
            reasons.append("geometric Witt condition undecided by the available spectrum/gap")
    else:
        reasons.append("basic window requires s > 0")

    enhanced = None
    self_adjoint = None
    if kappa_nonneg:
        if abs(s) <= 1:
            enhanced = WeightWindow(
                Fraction(n - 1) * (s - 1) / 2,
                Fraction(n - 1) * (s + 1) / 2,
                "beta",
                0,
                "dirac",
            )
            weight = self_adjoint_weight(cone)
            if enhanced.contains(weight):
                self_adjoint = weight
        else:
            reasons.append("enhanced window requires |s| <= 1")
    else:
        reasons.append("enhanced window requires nonnegative scalar curvature near the tip")

    return DiracWindows(basic, enhanced, self_adjoint, tuple(reasons), tuple(notes))


def asymptotics_set_laplace(cone: ConeData, table: SpectrumTable, beta: Scalar) -> tuple[Scalar, ...]:
    """Eigenvalues whose half-discriminant +/- sqrt(a^2+4mu)/2 lies in the
    critical strip (beta - a/2 - 2s, beta - a/2); empty for all s <= 0."""
    beta = exactify(beta)
    a = cone.a
    hi = beta - a / 2
    lo = hi - 2 * cone.s
    if not lo < hi:
        return ()
    reach = max(abs(lo), abs(hi))
    mu_need = reach * reach - a * a / 4
    if mu_need >= 0:
        table.require_sufficient(mu_need, "asymptotics set needs more spectrum")
    out = []
    for mu, _ in table.entries:
        delta = sqrt_scalar(a * a / 4 + mu)
        if lo < delta < hi or lo < -delta < hi:
            out.append(mu)
    return tuple(out)


def asymptotics_set_dirac(cone: ConeData, dirac: DiracSpectrumTable | None, beta: Scalar) -> tuple[Scalar, ...]:
    """Dirac eigenvalues with root a_hat + theta - n/2 in the critical strip;
    equivalently theta in (beta - a_hat - s, beta - a_hat).  Empty for s <= 0."""
    beta = exactify(beta)
    hi = beta - cone.a_hat
    lo = hi - cone.s
    if not lo < hi:
        return ()
    if dirac is None:
        raise ValueError("an explicit Dirac spectrum table (or covering gap) is required")
    g = dirac.gap_bound
    if g is not None and -g <= lo and hi <= g:
        return ()
    if dirac.entries:
        span_lo, span_hi = dirac.entries[0][0], dirac.entries[-1][0]
        covered = span_lo <= lo and hi <= span_hi
        hits = tuple(theta for theta, _ in dirac.entries if lo < theta < hi)
        if hits or covered:
            return hits
    raise InsufficientSpectrumError(
        0, f"Dirac data cannot decide the strip ({fmt(lo)}, {fmt(hi)})"
    )


def unique_closed_extension(cone: ConeData, table, beta: Scalar, operator: str = "laplace") -> bool:
    """Whether the core operator at weight beta has a unique closed extension
    (the relevant asymptotics set is empty)."""
    if operator == "laplace":
        return not asymptotics_set_laplace(cone, table, beta)
    if operator == "dirac":
        return not asymptotics_set_dirac(cone, table, beta)
    raise ValueError(f"unknown operator {operator!r}")


def self_adjoint_weight(cone: ConeData) -> Scalar:
    """The unique symmetric weight beta = n*s/2."""
    return cone.n * cone.s / 2


def sobolev_embedding(w1: WeightedIndex, w2: WeightedIndex) -> str:
    """Embedding of the (beta', sigma') space into the (beta, sigma) space:
    'compact', 'continuous', or 'none'.  Stated within a single p."""
    if w1.p != w2.p:
        raise ValueError("the embedding statement requires equal integrability exponents")
    if w1.beta < w2.beta and w1.sigma > w2.sigma:
        return "compact"
    if w1.beta <= w2.beta and w1.sigma >= w2.sigma:
        return "continuous"
    return "none"
