"""Link spectra: eigenvalue/multiplicity tables feeding every indicial computation.

A Laplace table lists the nonnegative eigenvalues of the link Laplacian in
increasing order; a Dirac table lists link Dirac eigenvalues, which may be
negative, and optionally a symmetric spectral gap.  Completeness is explicit
metadata: operations that scan "all eigenvalues below a bound" check it and
fail loudly instead of under-counting.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass
from fractions import Fraction

from ._scalars import (
    DEFAULT_TOL,
    Scalar,
    exactify,
    fmt,
    is_exact,
    parse_scalar,
    scalars_close,
)
from .errors import (
    InsufficientSpectrumError,
    SpectrumInvariantError,
    SpectrumParseError,
)

__all__ = [
    "SpectrumTable",
    "DiracSpectrumTable",
    "point_spectrum",
    "sphere_laplace_spectrum",
    "product_link_spectrum",
    "rescale_link",
    "load_spectrum",
    "first_positive_eigenvalue",
    "dirac_gap_from_scalar_curvature",
]


def _normalize_entries(entries) -> tuple[tuple[Scalar, int], ...]:
    out = []
    for value, mult in entries:
        if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
            raise SpectrumInvariantError(f"multiplicity must be a positive integer, got {mult!r}")
        out.append((exactify(value), mult))
    return tuple(out)


@dataclass(frozen=True)
class SpectrumTable:
    """Laplace eigenvalue table of a link.

    ``complete_below`` is the exclusive bound below which the listing is
    exhaustive (None means the whole spectrum is listed, as for a point).
    Listed entries are additionally assumed consecutive from the bottom, so
    the table is sufficient for any bound up to its largest entry.
    """

    label: str
    entries: tuple[tuple[Scalar, int], ...]
    complete_below: Scalar | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", _normalize_entries(self.entries))
        prev = None
        for mu, _ in self.entries:
            if mu < 0:
                raise SpectrumInvariantError(f"Laplace eigenvalue must be >= 0, got {fmt(mu)}")
            if prev is not None and not mu > prev:
                raise SpectrumInvariantError(
                    f"eigenvalues must be strictly increasing ({fmt(prev)} then {fmt(mu)})"
                )
            prev = mu
        if self.complete_below is not None:
            object.__setattr__(self, "complete_below", exactify(self.complete_below))

    @property
    def mus(self) -> tuple[Scalar, ...]:
        return tuple(mu for mu, _ in self.entries)

    def sufficient_for(self, bound: Scalar) -> bool:
        """True when every eigenvalue <= bound is guaranteed to be listed."""
        if self.complete_below is None:
            return True
        if bound < self.complete_below:
            return True
        return bool(self.entries) and bound <= self.entries[-1][0]

    def require_sufficient(self, bound: Scalar, context: str = ""):
        if not self.sufficient_for(bound):
            raise InsufficientSpectrumError(bound, context or f"table {self.label!r} too short")

    def total_multiplicity_below(self, bound: Scalar) -> int:
        self.require_sufficient(bound)
        return sum(m for mu, m in self.entries if mu < bound)


@dataclass(frozen=True)
class DiracSpectrumTable:
    """Link Dirac eigenvalue table, or just a symmetric gap bound.

    ``gap_bound = g`` asserts Spec ∩ (−g, g) = ∅.  Explicit entries are
    treated as exhaustive within their span [min θ, max θ].
    """

    label: str
    entries: tuple[tuple[Scalar, int], ...] = ()
    gap_bound: Scalar | None = None

    def __post_init__(self):
        object.__setattr__(self, "entries", _normalize_entries(self.entries))
        prev = None
        for theta, _ in self.entries:
            if prev is not None and not theta > prev:
                raise SpectrumInvariantError(
                    f"eigenvalues must be strictly increasing ({fmt(prev)} then {fmt(theta)})"
                )
            prev = theta
        if self.gap_bound is not None:
            g = exactify(self.gap_bound)
            if g < 0:
                raise SpectrumInvariantError("gap bound must be nonnegative")
            object.__setattr__(self, "gap_bound", g)
            for theta, _ in self.entries:
                if -g < theta < g:
                    raise SpectrumInvariantError(
                        f"entry {fmt(theta)} lies inside the declared gap (-{fmt(g)}, {fmt(g)})"
                    )


def point_spectrum() -> SpectrumTable:
    """The (complete) Laplace spectrum of a point: {0} with multiplicity 1."""
    return SpectrumTable("point", ((0, 1),), complete_below=None)


def _harmonic_multiplicity(n: int, k: int) -> int:
    count = math.comb(n + k - 1, k)
    if k >= 2:
        count -= math.comb(n + k - 3, k - 2)
    return count


def sphere_laplace_spectrum(n: int, k_max: int) -> SpectrumTable:
    """Laplace spectrum of the unit round sphere of dimension n-1.

    Eigenvalues k(k+n-2) carry the dimension of degree-k harmonic
    homogeneous polynomials in n variables.
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"sphere link requires integer n >= 3, got {n!r}")
    if not isinstance(k_max, int) or k_max < 0:
        raise ValueError(f"k_max must be a nonnegative integer, got {k_max!r}")
    entries = [(Fraction(k * (k + n - 2)), _harmonic_multiplicity(n, k)) for k in range(k_max + 1)]
    nxt = Fraction((k_max + 1) * (k_max + n - 1))
    return SpectrumTable(f"sphere S^{n - 1}", tuple(entries), complete_below=nxt)


def product_link_spectrum(t1: SpectrumTable, t2: SpectrumTable, mu_max: Scalar) -> SpectrumTable:
    """Spectrum of a Riemannian product link, truncated at mu_max.

    Eigenvalues add and multiplicities convolve; both factor tables must be
    complete up to mu_max or the result would silently miss entries.
    """
    mu_max = exactify(mu_max)
    t1.require_sufficient(mu_max, f"product factor {t1.label!r} incomplete")
    t2.require_sufficient(mu_max, f"product factor {t2.label!r} incomplete")
    sums: list[tuple[Scalar, int]] = []
    for mu1, m1 in t1.entries:
        for mu2, m2 in t2.entries:
            mu = mu1 + mu2
            if mu <= mu_max or scalars_close(mu, mu_max):
                sums.append((mu, m1 * m2))
    merged = _merge_entries(sums)
    return SpectrumTable(f"{t1.label} x {t2.label}", merged, complete_below=mu_max)


def _merge_entries(pairs: list[tuple[Scalar, int]]) -> tuple[tuple[Scalar, int], ...]:
    """Sort and merge equal eigenvalues (exactly for rationals, 1e-9 for floats)."""
    pairs = sorted(pairs, key=lambda p: float(p[0]))
    merged: list[list] = []
    for value, mult in pairs:
        if merged and scalars_close(merged[-1][0], value):
            merged[-1][1] += mult
        else:
            merged.append([value, mult])
    return tuple((v, m) for v, m in merged)


def rescale_link(table, c: Scalar):
    """Rescale the link metric by c^2: Laplace eigenvalues divide by c^2,
    Dirac eigenvalues and gap by c."""
    c = exactify(c)
    if not c > 0:
        raise ValueError(f"rescaling factor must be positive, got {fmt(c)}")
    if isinstance(table, SpectrumTable):
        entries = tuple((mu / (c * c), m) for mu, m in table.entries)
        below = None if table.complete_below is None else table.complete_below / (c * c)
        return SpectrumTable(table.label, entries, complete_below=below)
    if isinstance(table, DiracSpectrumTable):
        entries = tuple((theta / c, m) for theta, m in table.entries)
        gap = None if table.gap_bound is None else table.gap_bound / c
        return DiracSpectrumTable(table.label, entries, gap_bound=gap)
    raise TypeError(f"expected a spectrum table, got {type(table).__name__}")


def first_positive_eigenvalue(table: SpectrumTable) -> Scalar:
    """Smallest positive Laplace eigenvalue of the link."""
    for mu, _ in table.entries:
        if mu > 0:
            return mu
    raise InsufficientSpectrumError(
        0, f"table {table.label!r} lists no positive eigenvalue"
    )


def dirac_gap_from_scalar_curvature(n: int, kappa_min: Scalar) -> Scalar | None:
    """Dirac gap (n-1)/2 implied by link scalar curvature >= (n-1)(n-2).

    Returns None (no conclusion) when the curvature hypothesis fails.
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"requires integer n >= 3, got {n!r}")
    if kappa_min >= (n - 1) * (n - 2):
        return Fraction(n - 1, 2)
    return None


def load_spectrum(source) -> SpectrumTable | DiracSpectrumTable:
    """Read a spectrum file.

    Format: a ``#spectrum laplace|dirac <label>`` header, an optional
    ``#gap <g>`` for Dirac tables, then one ``value mult`` pair per line.
    Values may be decimal or ``p/q`` rational literals; ``#`` comments are
    allowed.  Parse errors report the line number; invariant violations
    (order, signs, multiplicities) surface as SpectrumInvariantError.
    """
    if hasattr(source, "read"):
        text = source.read()
        name = getattr(source, "name", "<stream>")
    else:
        name = os.fspath(source)
        with io.open(name, "r", encoding="utf-8") as fh:
            text = fh.read()

    kind = None
    label = os.path.basename(str(name))
    gap: Scalar | None = None
    entries: list[tuple[Scalar, int]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#spectrum"):
            parts = line.split(None, 2)
            if len(parts) < 2 or parts[1] not in ("laplace", "dirac"):
                raise SpectrumParseError(line_no, "expected '#spectrum laplace|dirac <label>'")
            if kind is not None:
                raise SpectrumParseError(line_no, "duplicate #spectrum header")
            kind = parts[1]
            if len(parts) == 3 and parts[2].strip():
                label = parts[2].strip()
            continue
        if line.startswith("#gap"):
            parts = line.split()
            if len(parts) != 2:
                raise SpectrumParseError(line_no, "expected '#gap <g>'")
            try:
                gap = parse_scalar(parts[1])
            except ValueError as exc:
                raise SpectrumParseError(line_no, str(exc)) from exc
            continue
        if line.startswith("#"):
            continue
        payload = line.split("#", 1)[0].split()
        if kind is None:
            raise SpectrumParseError(line_no, "missing '#spectrum' header before data")
        if len(payload) != 2:
            raise SpectrumParseError(line_no, f"expected 'value mult', got {line!r}")
        try:
            value = parse_scalar(payload[0])
        except ValueError as exc:
            raise SpectrumParseError(line_no, str(exc)) from exc
        try:
            mult = int(payload[1])
        except ValueError as exc:
            raise SpectrumParseError(line_no, f"bad multiplicity {payload[1]!r}") from exc
        entries.append((value, mult))

    if kind is None:
        raise SpectrumParseError(0, "missing '#spectrum' header")
    if kind == "laplace":
        if gap is not None:
            raise SpectrumParseError(0, "'#gap' is only meaningful for Dirac spectra")
        if not entries:
            raise SpectrumParseError(0, "no eigenvalue entries")
        return SpectrumTable(label, tuple(entries), complete_below=entries[-1][0])
    return DiracSpectrumTable(label, tuple(entries), gap_bound=gap)
