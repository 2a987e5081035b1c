"""Exception types shared by the library and mapped to CLI exit codes."""

from __future__ import annotations

from ._scalars import Scalar, fmt


class ConeWeightsError(Exception):
    """Base class for all library errors."""


class SpectrumParseError(ConeWeightsError):
    """Malformed spectrum file; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class SpectrumInvariantError(ConeWeightsError):
    """A spectrum table violates its invariants (order, signs, multiplicity)."""


class InsufficientSpectrumError(ConeWeightsError):
    """A scan needs eigenvalues beyond the table's completeness bound.

    Index ladders and root scans are wrong, not approximate, when the
    spectrum is truncated too early, so this is always raised loudly.
    """

    def __init__(self, required: Scalar, message: str = ""):
        self.required = required
        detail = message or "spectrum table incomplete"
        super().__init__(f"{detail}: need completeness up to mu = {fmt(required)}")


class OnBreakpointError(ConeWeightsError):
    """A weight query landed exactly on an indicial root.

    Fredholmness genuinely fails there; this is a distinguished verdict,
    never silently folded into a neighboring window.
    """


class GridError(ConeWeightsError):
    """A numerical grid cannot support the requested computation."""
