"""Conormal symbols and their indicial roots.

The per-mode radial operator on the model cone is D^2 + a*D - mu in the
dilation derivative D = x d/dx, with a = (n-2)s.  Upstairs (before the
unitary conjugation by x^{n/2}) its symbol is zeta^2 - a*zeta - mu; the root
set there is where Fredholmness fails.  Downstairs roots are the upstairs
roots shifted left by n/2.  Homogeneous solutions behave like x^{-zeta}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._scalars import Scalar, exactify, fmt, is_exact, sqrt_scalar

__all__ = [
    "ConeData",
    "Convention",
    "IndicialRoot",
    "laplace_roots_upstairs",
    "laplace_roots_downstairs",
    "dirac_roots",
    "generic_conormal_roots",
    "symbol_eval",
]

# companion-matrix eigenvalues split a double root at about sqrt(machine eps)
ROOT_CLUSTER_TOL = 1e-7


@dataclass(frozen=True)
class ConeData:
    """Cone geometry: dimension n of the smooth locus and conformal exponent s.

    The derived exponents a = (n-2)s and a_hat = (n-1)s/2 are properties,
    never stored independently.
    """

    n: int
    s: Scalar

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise ValueError(f"cone dimension must be an integer >= 3, got {self.n!r}")
        object.__setattr__(self, "s", exactify(self.s))

    @property
    def a(self) -> Scalar:
        return (self.n - 2) * self.s

    @property
    def a_hat(self) -> Scalar:
        return (self.n - 1) * self.s / 2

    def __str__(self):
        return f"cone(n={self.n}, s={fmt(self.s)})"


@dataclass(frozen=True)
class Convention:
    """Root convention: upstairs (shift 0) or downstairs (shift -n/2)."""

    tag: str
    shift: Scalar

    @classmethod
    def upstairs(cls) -> "Convention":
        return cls("upstairs", 0)

    @classmethod
    def downstairs(cls, n: int) -> "Convention":
        return cls("downstairs", Fraction(-n, 2))


def _as_convention(convention, n: int) -> Convention:
    if isinstance(convention, Convention):
        return convention
    if convention == "upstairs":
        return Convention.upstairs()
    if convention == "downstairs":
        return Convention.downstairs(n)
    raise ValueError(f"unknown convention {convention!r}")


@dataclass(frozen=True)
class IndicialRoot:
    """One root of a conormal symbol.

    ``zeta`` is the root in the Mellin variable (complex only for generic
    operators); ``source`` is the link eigenvalue that produced it; ``mult``
    is inherited from the spectrum entry.
    """

    zeta: Scalar | complex
    source: Scalar | None
    mult: int
    operator: str
    convention: Convention

    @property
    def exponent(self) -> Scalar | complex:
        """Exponent gamma = -zeta of the homogeneous solution x^gamma (upstairs)."""
        return -self.zeta


def laplace_roots_upstairs(cone: ConeData, mu: Scalar, mult: int = 1):
    """Both roots of zeta^2 - a*zeta - mu = 0, sorted ascending.

    The discriminant a^2/4 + mu is nonnegative for mu >= 0, so the roots are
    real; they coincide only in the degenerate case a = 0, mu = 0.
    """
    mu = exactify(mu)
    if mu < 0:
        raise ValueError(f"Laplace eigenvalue must be >= 0, got {fmt(mu)}")
    a = cone.a
    half = a / 2
    radical = sqrt_scalar(half * half + mu)
    conv = Convention.upstairs()
    return (
        IndicialRoot(half - radical, mu, mult, "laplace", conv),
        IndicialRoot(half + radical, mu, mult, "laplace", conv),
    )


def laplace_roots_downstairs(cone: ConeData, mu: Scalar, mult: int = 1):
    """Both roots of zeta^2 + (n-a)zeta + n(n-2a)/4 - mu = 0, sorted ascending.

    Computed from (a-n)/2 +/- sqrt(a^2+4mu)/2, independently of the upstairs
    formula; the shift relation is a tested invariant, not an implementation
    shortcut.
    """
    mu = exactify(mu)
    if mu < 0:
        raise ValueError(f"Laplace eigenvalue must be >= 0, got {fmt(mu)}")
    a = cone.a
    center = (a - cone.n) / 2
    radical = sqrt_scalar(a * a + 4 * mu) / 2
    conv = Convention.downstairs(cone.n)
    return (
        IndicialRoot(center - radical, mu, mult, "laplace", conv),
        IndicialRoot(center + radical, mu, mult, "laplace", conv),
    )


def dirac_roots(cone: ConeData, theta: Scalar, convention="downstairs", mult: int = 1) -> IndicialRoot:
    """The single root of the Dirac conormal symbol on the theta-mode.

    Downstairs the symbol is -zeta + a_hat - n/2 + theta, so the root is
    a_hat + theta - n/2; upstairs it is a_hat + theta.
    """
    theta = exactify(theta)
    conv = _as_convention(convention, cone.n)
    zeta = cone.a_hat + theta
    if conv.tag == "downstairs":
        zeta = zeta - Fraction(cone.n, 2)
    return IndicialRoot(zeta, theta, mult, "dirac", conv)


def generic_conormal_roots(coeffs) -> list[IndicialRoot]:
    """All roots of the scalar polynomial sum(coeffs[i] * zeta^i).

    ``coeffs`` are the mode values of the conormal symbol with the Mellin
    sign already applied (coeffs[i] = (-1)^i * A_i(0) on the eigenmode).
    Roots are clustered within ROOT_CLUSTER_TOL into multiplicities and
    realified when their imaginary part is below the same tolerance.
    """
    coeffs = [complex(c) for c in coeffs]
    if len(coeffs) < 2:
        raise ValueError("need a polynomial of degree >= 1")
    if coeffs[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    raw = np.roots(coeffs[::-1])
    raw = sorted(raw, key=lambda z: (z.real, z.imag))

    clusters: list[list[complex]] = []
    for z in raw:
        if clusters and abs(z - clusters[-1][-1]) <= ROOT_CLUSTER_TOL:
            clusters[-1].append(z)
        else:
            clusters.append([z])

    conv = Convention.upstairs()
    out = []
    for group in clusters:
        center = sum(group) / len(group)
        zeta: Scalar | complex = center
        if abs(center.imag) <= ROOT_CLUSTER_TOL:
            zeta = center.real
        out.append(IndicialRoot(zeta, None, len(group), "generic", conv))
    return out


def symbol_eval(cone: ConeData, zeta, mu: Scalar, convention="upstairs"):
    """Value of the Laplace conormal symbol on the mu-mode at zeta.

    Upstairs: zeta^2 - a*zeta - mu.  Downstairs: zeta^2 + (n-a)zeta +
    n(n-2a)/4 - mu.  Exact arithmetic is preserved for exact inputs.
    """
    conv = _as_convention(convention, cone.n)
    a = cone.a
    if not isinstance(zeta, complex):
        zeta = exactify(zeta)
    mu = exactify(mu) if is_exact(mu) else float(mu)
    if conv.tag == "upstairs":
        return zeta * zeta - a * zeta - mu
    n = cone.n
    return zeta * zeta + (n - a) * zeta + n * (n - 2 * a) / 4 - mu
