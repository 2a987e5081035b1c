"""Batch front door: parse problem descriptions, dispatch, emit tables/JSON/CSV.

Exit codes: 0 success, 1 check failure (verify), 2 usage or malformed input,
3 insufficient spectrum data.  Every numeric shown in the human-readable
output is also present in the JSON payload; rationals are printed ``p/q``
and carried in JSON as {"display", "value"} pairs.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._scalars import Scalar, fmt, is_exact, parse_scalar
from .errors import ConeWeightsError, InsufficientSpectrumError
from .fredholm import (
    WeightWindow,
    acyl_windows,
    asymptotics_set_dirac,
    asymptotics_set_laplace,
    base_window,
    dirac_windows,
    index_ladder,
    is_elliptic_at,
    self_adjoint_weight,
    to_gamma,
    unique_closed_extension,
    window_ah,
    window_ah_shifted,
    witt_check,
)
from .link_spectra import (
    DiracSpectrumTable,
    SpectrumTable,
    load_spectrum,
    product_link_spectrum,
    sphere_laplace_spectrum,
)
from .model_cone import (
    LogGrid,
    ModeFunction,
    ModeTerm,
    mellin_derivative_check,
    mellin_forward,
    mellin_isometry_check,
    solve_model_problem,
)
from .symbols import (
    ConeData,
    dirac_roots,
    generic_conormal_roots,
    laplace_roots_downstairs,
    laplace_roots_upstairs,
)
from .verify import run_checks

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_INSUFFICIENT = 3


def jnum(value: Scalar) -> dict:
    return {"display": fmt(value), "value": float(value)}


def jroot(zeta) -> dict:
    if isinstance(zeta, complex):
        return {"display": str(zeta), "real": zeta.real, "imag": zeta.imag}
    return jnum(zeta)


def canonical_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit(args, payload: dict, lines: list[str]) -> None:
    text = canonical_json(payload)
    if args.json == "-":
        sys.stdout.write(text)
        return
    for line in lines:
        print(line)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# problem description


@dataclass(frozen=True)
class ProblemSpec:
    """Validated batch problem: operator, cone data, link source, weights."""

    operator: str
    n: int | None = None
    s: Scalar | None = None
    p: Scalar | None = None
    t: Scalar | None = None
    link: str = "sphere"
    kmax: int = 6
    spectrum_path: str | None = None
    gap: Scalar | None = None
    kappa_nonneg: bool = False
    convention: str = "both"

    @classmethod
    def from_args(cls, args) -> "ProblemSpec":
        op = args.op
        spec = cls(
            operator=op,
            n=getattr(args, "n", None),
            s=getattr(args, "s", None),
            p=getattr(args, "p", None),
            t=getattr(args, "t", None),
            link=getattr(args, "link", "sphere"),
            kmax=getattr(args, "kmax", 6),
            spectrum_path=getattr(args, "spectrum", None),
            gap=getattr(args, "gap", None),
            kappa_nonneg=getattr(args, "kappa_nonneg", False),
            convention=getattr(args, "convention", "both"),
        )
        if op in ("laplace", "dirac") and spec.s is None:
            raise ValueError(f"--op {op} requires --s")
        if op in ("ah", "ah_shifted") and spec.p is None and args.command == "windows":
            raise ValueError(f"--op {op} requires --p")
        if op == "ah_shifted" and spec.t is None:
            raise ValueError("--op ah_shifted requires --t")
        if op == "dirac" and args.command in ("extension",):
            if spec.spectrum_path is None and spec.gap is None and not spec.kappa_nonneg:
                raise ValueError("dirac problems need --spectrum, --gap, or --kappa-nonneg")
        return spec

    def cone(self) -> ConeData:
        if self.n is None or self.s is None:
            raise ValueError("this operation requires --n and --s")
        return ConeData(self.n, self.s)

    def laplace_table(self) -> SpectrumTable:
        return resolve_link(self.link, self.n, self.kmax)

    def dirac_table(self) -> DiracSpectrumTable | None:
        table = None
        if self.spectrum_path:
            loaded = load_spectrum(self.spectrum_path)
            if not isinstance(loaded, DiracSpectrumTable):
                raise ValueError(f"{self.spectrum_path}: not a Dirac spectrum file")
            table = loaded
        if self.gap is not None:
            if table is None:
                table = DiracSpectrumTable("gap", (), gap_bound=self.gap)
            else:
                best = max(self.gap, table.gap_bound) if table.gap_bound is not None else self.gap
                table = DiracSpectrumTable(table.label, table.entries, gap_bound=best)
        return table


def resolve_link(link: str, n: int | None, kmax: int) -> SpectrumTable:
    """Build the link table from a link expression.

    Grammar: ``sphere`` (round sphere matching --n), ``sphere:<d>`` (round
    S^d), a ``*``-product of such atoms (dimensions must sum to n-1), or a
    spectrum file path.
    """
    link = link.strip()
    if "*" in link:
        atoms = [atom.strip() for atom in link.split("*")]
        tables, dims = [], []
        for atom in atoms:
            if not atom.startswith("sphere:"):
                raise ValueError("product links list explicit factors like sphere:3*sphere:3")
            d = int(atom.split(":", 1)[1])
            dims.append(d)
            tables.append(sphere_laplace_spectrum(d + 1, kmax))
        if n is not None and sum(dims) != n - 1:
            raise ValueError(f"product link dimensions {dims} do not sum to n-1 = {n - 1}")
        mu_max = min(float(t.complete_below) for t in tables)
        out = tables[0]
        for t in tables[1:]:
            out = product_link_spectrum(out, t, Fraction(int(mu_max * 2), 2) - 1)
        return out
    if link == "sphere":
        if n is None:
            raise ValueError("--link sphere requires --n")
        return sphere_laplace_spectrum(n, kmax)
    if link.startswith("sphere:"):
        return sphere_laplace_spectrum(int(link.split(":", 1)[1]) + 1, kmax)
    loaded = load_spectrum(link)
    if not isinstance(loaded, SpectrumTable):
        raise ValueError(f"{link}: Laplace spectrum file expected")
    return loaded


def window_payload(window: WeightWindow) -> dict:
    payload = {
        "parametrization": window.parametrization,
        "lo": jnum(window.lo),
        "hi": jnum(window.hi),
        "operator": window.operator,
    }
    if window.index is not None:
        payload["index"] = window.index
    return payload


def window_line(label: str, window: WeightWindow) -> str:
    idx = "" if window.index is None else f"  index {window.index}"
    return (
        f"{label}: {window.parametrization} in ({fmt(window.lo)}, {fmt(window.hi)}){idx}"
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_roots(args) -> int:
    spec = ProblemSpec.from_args(args)
    rows = []
    lines = []
    payload: dict = {"command": "roots", "operator": spec.operator}

    if spec.operator == "laplace":
        cone = spec.cone()
        table = spec.laplace_table()
        payload["cone"] = {"n": cone.n, "s": jnum(cone.s), "a": jnum(cone.a)}
        lines.append(f"indicial roots of the Laplacian, {cone}, link {table.label}")
        for mu, mult in table.entries:
            row = {"mu": jnum(mu), "mult": mult}
            if spec.convention in ("upstairs", "both"):
                row["upstairs"] = [jroot(r.zeta) for r in laplace_roots_upstairs(cone, mu, mult)]
            if spec.convention in ("downstairs", "both"):
                row["downstairs"] = [jroot(r.zeta) for r in laplace_roots_downstairs(cone, mu, mult)]
            rows.append(row)
            bits = [f"mu={fmt(mu)}", f"mult={mult}"]
            if "upstairs" in row:
                bits.append("upstairs {" + ", ".join(r["display"] for r in row["upstairs"]) + "}")
            if "downstairs" in row:
                bits.append("downstairs {" + ", ".join(r["display"] for r in row["downstairs"]) + "}")
            lines.append("  " + "  ".join(bits))
    elif spec.operator == "dirac":
        cone = spec.cone()
        payload["cone"] = {"n": cone.n, "s": jnum(cone.s), "a_hat": jnum(cone.a_hat)}
        thetas = [(parse_scalar(t), 1) for t in (args.theta or [])]
        dt = spec.dirac_table()
        if dt is not None:
            thetas.extend(dt.entries)
        if not thetas:
            raise ValueError("dirac roots need --theta values or a --spectrum file")
        lines.append(f"indicial roots of the Dirac operator, {cone}")
        for theta, mult in thetas:
            row = {"theta": jnum(theta), "mult": mult}
            if spec.convention in ("upstairs", "both"):
                row["upstairs"] = [jroot(dirac_roots(cone, theta, "upstairs", mult).zeta)]
            if spec.convention in ("downstairs", "both"):
                row["downstairs"] = [jroot(dirac_roots(cone, theta, "downstairs", mult).zeta)]
            rows.append(row)
            bits = [f"theta={fmt(theta)}", f"mult={mult}"]
            for tag in ("upstairs", "downstairs"):
                if tag in row:
                    bits.append(f"{tag} {row[tag][0]['display']}")
            lines.append("  " + "  ".join(bits))
    elif spec.operator == "generic":
        if not args.coeffs:
            raise ValueError("generic roots need --coeffs c0,c1,...")
        coeffs = [float(parse_scalar(tok)) for tok in args.coeffs.split(",")]
        payload["coeffs"] = [jnum(c) for c in coeffs]
        lines.append("roots of the generic conormal polynomial")
        for root in generic_conormal_roots(coeffs):
            rows.append({"zeta": jroot(root.zeta), "mult": root.mult})
            lines.append(f"  zeta={rows[-1]['zeta']['display']}  mult={root.mult}")
    elif spec.operator in ("ah", "ah_shifted"):
        n = args.n
        if n is None:
            raise ValueError(f"--op {spec.operator} requires --n")
        if spec.operator == "ah":
            zetas = [(Fraction(1 - n), 1), (Fraction(0), 1)]
        else:
            t = Fraction(spec.t) if is_exact(spec.t) else spec.t
            zetas = sorted([(-t, 1), (t - (n - 1), 1)], key=lambda z: float(z[0]))
        payload["n"] = n
        lines.append(f"conormal roots, {spec.operator}, n={n}")
        for zeta, mult in zetas:
            rows.append({"zeta": jroot(zeta), "mult": mult})
            lines.append(f"  zeta={fmt(zeta)}  mult={mult}")
    else:
        raise ValueError(f"unknown operator {spec.operator!r}")

    payload["rows"] = rows
    emit(args, payload, lines)
    return EXIT_OK


def cmd_windows(args) -> int:
    spec = ProblemSpec.from_args(args)
    payload: dict = {"command": "windows", "operator": spec.operator}
    lines: list[str] = []

    if spec.operator == "laplace":
        cone = spec.cone()
        payload["cone"] = {"n": cone.n, "s": jnum(cone.s), "a": jnum(cone.a)}
        window = base_window(cone)
        gamma = to_gamma(cone, window)
        payload["windows"] = [window_payload(window), window_payload(gamma)]
        payload["self_adjoint_weight"] = jnum(self_adjoint_weight(cone))
        lines.append(window_line("index-0 window", window))
        lines.append(window_line("same window in gamma", gamma))
        lines.append(f"self-adjoint weight: beta = {fmt(self_adjoint_weight(cone))}")
    elif spec.operator == "acyl":
        if args.n is None:
            raise ValueError("--op acyl requires --n")
        table = spec.laplace_table()
        result = acyl_windows(args.n, table)
        payload["windows"] = [window_payload(result.primary)]
        payload["failure_points"] = [jnum(f) for f in result.failure_points]
        payload["gaps"] = [window_payload(w) for w in result.windows]
        lines.append(window_line("primary Fredholm window", result.primary))
        lines.append(
            "failure points: " + ", ".join(fmt(f) for f in result.failure_points)
            + "  (up to tabulated spectrum)"
        )
    elif spec.operator == "dirac":
        cone = spec.cone()
        payload["cone"] = {"n": cone.n, "s": jnum(cone.s)}
        verdict = dirac_windows(cone, spec.dirac_table(), spec.kappa_nonneg)
        payload["windows"] = []
        if verdict.basic is not None:
            payload["windows"].append({"kind": "basic", **window_payload(verdict.basic)})
            lines.append(window_line("basic window", verdict.basic))
        if verdict.enhanced is not None:
            payload["windows"].append({"kind": "enhanced", **window_payload(verdict.enhanced)})
            lines.append(window_line("enhanced window", verdict.enhanced))
        if verdict.self_adjoint_weight is not None:
            payload["self_adjoint_weight"] = jnum(verdict.self_adjoint_weight)
            lines.append(f"self-adjoint weight: beta = {fmt(verdict.self_adjoint_weight)}")
        payload["reasons"] = list(verdict.reasons)
        payload["notes"] = list(verdict.notes)
        for reason in verdict.reasons:
            lines.append(f"no verdict: {reason}")
        for note in verdict.notes:
            lines.append(f"note: {note}")
        if not payload["windows"]:
            lines.insert(0, "no window granted")
    elif spec.operator == "ah":
        window = window_ah(args.n, spec.p)
        payload["windows"] = [window_payload(window)]
        lines.append(window_line("index-0 window", window))
    elif spec.operator == "ah_shifted":
        window = window_ah_shifted(args.n, spec.p, spec.t)
        payload["windows"] = [window_payload(window)]
        lines.append(window_line("index-0 window", window))
    else:
        raise ValueError(f"unknown operator {spec.operator!r}")

    emit(args, payload, lines)
    return EXIT_OK


def _parse_range(text: str) -> tuple[Scalar, Scalar]:
    try:
        lo_text, hi_text = text.split(":", 1)
        return parse_scalar(lo_text), parse_scalar(hi_text)
    except ValueError as exc:
        raise ValueError(f"bad range {text!r}, expected lo:hi") from exc


def cmd_ladder(args) -> int:
    spec = ProblemSpec.from_args(args)
    cone = spec.cone()
    table = spec.laplace_table()
    lo, hi = _parse_range(args.range)
    lines: list[str] = []

    def nudged(value, direction):
        if is_elliptic_at(cone, table, value):
            return value
        eps = Fraction(1, 10 ** 6) if is_exact(value) else 1e-6
        moved = value + direction * eps
        lines.append(
            f"warning: range endpoint {fmt(value)} sits on a breakpoint; nudged to {fmt(moved)}"
        )
        return moved

    lo = nudged(lo, +1)
    hi = nudged(hi, -1)
    ladder = index_ladder(cone, table, lo, hi)

    payload = {
        "command": "ladder",
        "cone": {"n": cone.n, "s": jnum(cone.s), "a": jnum(cone.a)},
        "base_window": window_payload(ladder.base_window),
        "breakpoints": [{"beta": jnum(z), "jump": m} for z, m in ladder.breakpoints],
        "intervals": [
            {"beta_lo": jnum(a), "beta_hi": jnum(b), "index": idx} for a, b, idx in ladder.intervals
        ],
    }
    lines.append(f"index ladder on ({fmt(lo)}, {fmt(hi)}), link {table.label}")
    for z, m in ladder.breakpoints:
        lines.append(f"  breakpoint beta = {fmt(z)}  jump {m}")
    for a, b, idx in ladder.intervals:
        lines.append(f"  ({fmt(a)}, {fmt(b)}): index {idx}")

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["beta_lo", "beta_hi", "index"])
            for a, b, idx in ladder.intervals:
                writer.writerow([float(a), float(b), idx])
    emit(args, payload, lines)
    return EXIT_OK


def cmd_witt(args) -> int:
    spec = ProblemSpec.from_args(args)
    cone = spec.cone()
    hi = Fraction(cone.n, 2) - cone.a_hat
    lo = hi - cone.s
    verdict = witt_check(cone, spec.dirac_table())
    word = {True: "satisfied", False: "violated", None: "unknown"}[verdict]
    payload = {
        "command": "witt",
        "cone": {"n": cone.n, "s": jnum(cone.s)},
        "interval": {"lo": jnum(lo), "hi": jnum(hi)},
        "verdict": word,
    }
    lines = [
        f"geometric Witt interval: ({fmt(lo)}, {fmt(hi)})",
        f"Witt: {word}",
    ]
    emit(args, payload, lines)
    return EXIT_OK


def cmd_extension(args) -> int:
    spec = ProblemSpec.from_args(args)
    cone = spec.cone()
    beta = parse_scalar(args.beta)
    if spec.operator == "laplace":
        data = spec.laplace_table()
        members = asymptotics_set_laplace(cone, data, beta)
    elif spec.operator == "dirac":
        members = asymptotics_set_dirac(cone, spec.dirac_table(), beta)
    else:
        raise ValueError("extension supports --op laplace or dirac")
    unique = not members
    weight = self_adjoint_weight(cone)
    payload = {
        "command": "extension",
        "operator": spec.operator,
        "cone": {"n": cone.n, "s": jnum(cone.s)},
        "beta": jnum(beta),
        "asymptotics_set": [jnum(v) for v in members],
        "unique_closed_extension": unique,
        "self_adjoint_weight": jnum(weight),
        "essentially_self_adjoint_here": bool(unique and beta == weight),
    }
    lines = [
        f"asymptotics set at beta = {fmt(beta)}: "
        + ("empty" if unique else "{" + ", ".join(fmt(v) for v in members) + "}"),
        f"unique closed extension: {'yes' if unique else 'no'}; "
        f"essentially self-adjoint weight: {fmt(weight)}",
    ]
    emit(args, payload, lines)
    return EXIT_OK


_BUILTIN_FUNCTIONS = {
    "exp": lambda x: np.exp(-x),
    "xexp": lambda x: x * np.exp(-x),
    "gauss": lambda x: np.exp(-np.log(x) ** 2 / 2),
}


def _mellin_samples(args, grid: LogGrid):
    if args.samples:
        ts, values = [], []
        with open(args.samples, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().lower() in ("t", "#t"):
                    continue
                ts.append(float(row[0]))
                values.append(float(row[1]))
        ts = np.asarray(ts)
        if len(ts) != grid.count or abs(ts[0] - grid.t_min) > 1e-9 or abs(ts[-1] - grid.t_max) > 1e-9:
            grid = LogGrid(float(ts[0]), float(ts[-1]), len(ts))
        return grid, np.asarray(values)
    fn = _BUILTIN_FUNCTIONS[args.function]
    return grid, fn(grid.x)


def cmd_mellin(args) -> int:
    grid = LogGrid(args.tmin, args.tmax, args.points)
    grid, samples = _mellin_samples(args, grid)
    payload: dict = {
        "command": "mellin",
        "check": args.check,
        "grid": {"t_min": jnum(grid.t_min), "t_max": jnum(grid.t_max), "count": grid.count},
    }
    lines = []
    if args.check == "forward":
        zeta = complex(args.zeta)
        value = mellin_forward(grid, samples, zeta)
        payload["zeta"] = jroot(zeta if zeta.imag else zeta.real)
        payload["value"] = jroot(value if value.imag else value.real)
        lines.append(f"M(f)({payload['zeta']['display']}) = {payload['value']['display']}")
    elif args.check == "derivative":
        zeta = complex(args.zeta)
        residual = mellin_derivative_check(grid, samples, zeta)
        payload["zeta"] = jroot(zeta if zeta.imag else zeta.real)
        payload["residual"] = jnum(residual)
        lines.append(f"derivative-rule residual at zeta={payload['zeta']['display']}: {residual!r}")
    elif args.check == "isometry":
        theta = float(parse_scalar(args.theta))
        discrepancy = mellin_isometry_check(grid, samples, theta)
        payload["theta"] = jnum(theta)
        payload["relative_discrepancy"] = jnum(discrepancy)
        lines.append(f"isometry relative discrepancy at theta={fmt(theta)}: {discrepancy!r}")
    else:
        raise ValueError(f"unknown mellin check {args.check!r}")
    emit(args, payload, lines)
    return EXIT_OK


def _parse_rhs(text: str) -> ModeFunction:
    text = text.strip()
    if text in ("", "0", "none"):
        return ModeFunction.zero()
    terms = []
    for chunk in text.split(";"):
        fields = [f.strip() for f in chunk.split(",")]
        if len(fields) != 4:
            raise ValueError(f"bad rhs term {chunk!r}, expected c,gamma,logpow,mu")
        c, gamma = parse_scalar(fields[0]), parse_scalar(fields[1])
        logpow, mu = int(fields[2]), parse_scalar(fields[3])
        terms.append(ModeTerm(c, gamma, logpow, mu))
    return ModeFunction(tuple(terms))


def cmd_solve(args) -> int:
    spec = ProblemSpec.from_args(args)
    cone = spec.cone()
    table = spec.laplace_table()
    beta = parse_scalar(args.beta)
    rhs = _parse_rhs(args.rhs)
    report = solve_model_problem(cone, table, rhs, beta, args.p)

    payload = {
        "command": "solve",
        "cone": {"n": cone.n, "s": jnum(cone.s), "a": jnum(cone.a)},
        "beta": jnum(report.beta),
        "reference_weight": jnum(report.reference_weight),
        "kernel_modes": [
            {"mu": jnum(h.mu), "zeta": jnum(h.zeta), "mult": h.mult} for h in report.kernel_modes
        ],
        "lost_modes": [
            {"mu": jnum(h.mu), "zeta": jnum(h.zeta), "mult": h.mult} for h in report.lost_modes
        ],
        "obstructed_modes": [{"mu": jnum(m.mu)} for m in report.obstructed_modes],
        "net_kernel_change": report.net_kernel_change,
        "modes": [
            {
                "mu": jnum(mode.mu),
                "mult": mode.mult,
                "has_rhs": not mode.rhs.is_zero,
                "data_member": mode.data_member,
                "particular": None if mode.particular is None else str(mode.particular),
                "particular_member": mode.particular_member,
                "obstructed": mode.obstructed,
            }
            for mode in report.modes
        ],
    }
    lines = [
        f"model problem at beta = {fmt(report.beta)} (reference weight {fmt(report.reference_weight)})",
        "kernel modes: "
        + (", ".join(f"mu={fmt(h.mu)} (x^{fmt(-h.zeta)}, mult {h.mult})" for h in report.kernel_modes) or "none"),
        "lost modes: "
        + (", ".join(f"mu={fmt(h.mu)} (x^{fmt(-h.zeta)}, mult {h.mult})" for h in report.lost_modes) or "none"),
        "obstructed modes: " + (", ".join(fmt(m.mu) for m in report.obstructed_modes) or "none"),
        f"net kernel change relative to base window: {report.net_kernel_change}",
    ]
    for mode in report.modes:
        if not mode.rhs.is_zero:
            verdict = "obstructed" if mode.obstructed else "solvable"
            lines.append(f"  mu={fmt(mode.mu)}: particular {mode.particular}  [{verdict}]")
    emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks(inject_failure=args.inject_failure)
    payload = {
        "command": "verify",
        "checks": [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    lines = [
        f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results
    ]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    emit(args, payload, lines)
    return EXIT_OK if payload["passed"] else EXIT_CHECK_FAILURE


# ---------------------------------------------------------------------------
# parser


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", help="write the JSON payload to this path ('-' for stdout)")
    parser.add_argument("--spec-file", help="JSON file of flag defaults mirroring the CLI flags")


def _add_problem_flags(parser, *, need_op=True):
    if need_op:
        parser.add_argument("--op", required=True,
                            choices=["laplace", "dirac", "generic", "ah", "ah_shifted", "acyl"])
    parser.add_argument("--n", type=int)
    parser.add_argument("--s", type=parse_scalar)
    parser.add_argument("--p", type=parse_scalar, default=Fraction(2))
    parser.add_argument("--t", type=parse_scalar)
    parser.add_argument("--link", default="sphere",
                        help="sphere | sphere:<d> | sphere:<d>*sphere:<d> | spectrum file path")
    parser.add_argument("--kmax", type=int, default=6, help="sphere mode cutoff")
    parser.add_argument("--spectrum", help="Dirac spectrum file")
    parser.add_argument("--gap", type=parse_scalar, help="Dirac gap bound g: Spec excludes (-g, g)")
    parser.add_argument("--kappa-nonneg", action="store_true", dest="kappa_nonneg",
                        help="assert nonnegative scalar curvature near the tip")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coneweights",
        description="Indicial roots, Fredholm weight windows, and model-cone verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_roots = sub.add_parser("roots", help="indicial root tables")
    _add_problem_flags(p_roots)
    p_roots.add_argument("--convention", choices=["upstairs", "downstairs", "both"], default="both")
    p_roots.add_argument("--theta", action="append", help="Dirac link eigenvalue (repeatable)")
    p_roots.add_argument("--coeffs", help="generic symbol coefficients c0,c1,...")
    _add_common(p_roots)
    p_roots.set_defaults(handler=cmd_roots)

    p_windows = sub.add_parser("windows", help="Fredholm weight windows")
    _add_problem_flags(p_windows)
    _add_common(p_windows)
    p_windows.set_defaults(handler=cmd_windows)

    p_ladder = sub.add_parser("ladder", help="index-vs-beta ladder")
    _add_problem_flags(p_ladder, need_op=False)
    p_ladder.set_defaults(op="laplace")
    p_ladder.add_argument("--range", required=True, help="beta range lo:hi")
    p_ladder.add_argument("--csv", help="write beta_lo,beta_hi,index rows to this path")
    _add_common(p_ladder)
    p_ladder.set_defaults(handler=cmd_ladder)

    p_witt = sub.add_parser("witt", help="geometric Witt condition")
    _add_problem_flags(p_witt, need_op=False)
    p_witt.set_defaults(op="dirac")
    _add_common(p_witt)
    p_witt.set_defaults(handler=cmd_witt)

    p_ext = sub.add_parser("extension", help="unique closed extension / self-adjoint weight")
    _add_problem_flags(p_ext)
    p_ext.add_argument("--beta", required=True)
    _add_common(p_ext)
    p_ext.set_defaults(handler=cmd_extension)

    p_mellin = sub.add_parser("mellin", help="Mellin transform checks on the log grid")
    p_mellin.add_argument("--check", required=True, choices=["forward", "derivative", "isometry"])
    p_mellin.add_argument("--function", choices=sorted(_BUILTIN_FUNCTIONS), default="exp")
    p_mellin.add_argument("--samples", help="CSV of t,value samples")
    p_mellin.add_argument("--zeta", default="1", help="evaluation point (complex accepted)")
    p_mellin.add_argument("--theta", default="0", help="weight for the isometry check")
    p_mellin.add_argument("--tmin", type=float, default=-30.0)
    p_mellin.add_argument("--tmax", type=float, default=30.0)
    p_mellin.add_argument("--points", type=int, default=2 ** 14)
    _add_common(p_mellin)
    p_mellin.set_defaults(handler=cmd_mellin)

    p_solve = sub.add_parser("solve", help="model-cone solvability report")
    _add_problem_flags(p_solve, need_op=False)
    p_solve.set_defaults(op="laplace")
    p_solve.add_argument("--beta", required=True)
    p_solve.add_argument("--rhs", default="0", help="terms c,gamma,logpow,mu separated by ';'")
    _add_common(p_solve)
    p_solve.set_defaults(handler=cmd_solve)

    p_verify = sub.add_parser("verify", help="run the full invariant battery")
    p_verify.add_argument("--inject-failure", dest="inject_failure",
                          help="mark the named check failed (reporting test)")
    _add_common(p_verify)
    p_verify.set_defaults(handler=cmd_verify)

    return parser


def _apply_spec_file(argv: list[str]) -> list[str]:
    """Expand --spec-file into flag tokens right after the subcommand.

    Explicit command-line flags win because argparse keeps the last
    occurrence of a store action.
    """
    if "--spec-file" not in argv:
        return argv
    at = argv.index("--spec-file")
    if at + 1 >= len(argv):
        return argv
    path = argv[at + 1]
    with open(path, "r", encoding="utf-8") as fh:
        values = json.load(fh)
    if not isinstance(values, dict):
        raise ValueError(f"{path}: spec file must be a JSON object of flag values")
    tokens: list[str] = []
    for key, value in values.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                tokens.append(flag)
        elif isinstance(value, list):
            for item in value:
                tokens.extend([flag, str(item)])
        else:
            tokens.extend([flag, str(value)])
    return argv[:1] + tokens + argv[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if argv and not argv[0].startswith("-"):
            argv = _apply_spec_file(argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except InsufficientSpectrumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (ConeWeightsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    raise SystemExit(main())
