"""Command-line surface: cone-spec ingestion, dispatch, JSON reports.

The CLI is a thin shell over the library: it parses one cone spec,
calls exactly one library routine per subcommand, and serializes the
result.  No arithmetic happens here.  Rational values are emitted as
exact ``"p/q"`` strings so that exactness survives the pipe, and
reports are deterministic byte-for-byte for identical inputs, flags
and version.

Exit codes: 0 success, 1 usage, 2 malformed input, 3 mathematical
domain error (not Q-Gorenstein, irrational Reeb where rationality is
required, ...), 4 non-convergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Tuple

from . import __version__
from .config import default_tol, precision_bits
from .errors import (
    ConvergenceError,
    InputError,
    MathDomainError,
    NonIntegerRay,
    ReebconeError,
    ReebconeWarning,
    SchemaError,
)
from .characters import decompose_dual, index_character, truncated_character_oracle, weight_character
from .geometry import ToricCone, dual_cone, gorenstein_vector, reeb_vector
from .optimize import minimize_volume
from .stability import delta as delta_report
from .stability import futaki_product, s_m_oracle, s_prime, s_value

COMMANDS = ("check", "delta", "minimize", "futaki", "character", "oracle")


@dataclasses.dataclass(frozen=True)
class ConeSpec:
    """Validated cone description parsed from a JSON document."""

    name: str
    dim: int
    rays: Tuple[Tuple[int, ...], ...]
    xi: Optional[Tuple[Fraction, ...]] = None
    eta: Optional[Tuple[Fraction, ...]] = None
    boundary_coeffs: Optional[Tuple[Fraction, ...]] = None


@dataclasses.dataclass(frozen=True)
class Report:
    """Machine-readable outcome of one CLI invocation."""

    command: str
    input_hash: str
    spec_name: str
    flags: dict
    results: dict
    provenance: dict
    warnings: Tuple[str, ...]
    error: Optional[dict] = None

    def to_dict(self) -> dict:
        return _jsonable(dataclasses.asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _jsonable(obj):
    """Recursively convert report values to JSON-stable primitives.

    Fractions become exact "p/q" strings; any non-rational scalar is
    forced through float (shortest round-trip repr keeps the bytes
    deterministic).
    """
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return _jsonable(dataclasses.asdict(obj))
    return float(obj)


def _parse_scalar(value, where: str) -> Fraction:
    """One rational coordinate: int, "p/q" / decimal string, or [num, den]."""
    if isinstance(value, bool):
        raise SchemaError("%s: boolean is not a number" % where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise SchemaError("%s: cannot parse %r as a rational" % (where, value))
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, int) and not isinstance(v, bool) for v in value
    ):
        if value[1] == 0:
            raise SchemaError("%s: zero denominator" % where)
        return Fraction(value[0], value[1])
    raise SchemaError("%s: expected integer, rational string, or [num, den]" % where)


def _parse_vector(value, dim: int, where: str) -> Tuple[Fraction, ...]:
    if not isinstance(value, list):
        raise SchemaError("%s: expected a list" % where)
    if len(value) != dim:
        raise SchemaError(
            "%s: expected %d coordinates, got %d" % (where, dim, len(value))
        )
    return tuple(
        _parse_scalar(v, "%s[%d]" % (where, i)) for i, v in enumerate(value)
    )


_ALLOWED_KEYS = {"name", "dim", "rays", "xi", "eta", "boundary_coeffs", "comment"}


def parse_cone_spec(text: str) -> ConeSpec:
    """Parse and validate a JSON cone spec.

    Decimal literals are kept as strings during JSON decoding and
    converted to exact rationals, so ``0.5`` means exactly ``1/2``.
    Errors carry the offending field path.
    """
    try:
        doc = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise SchemaError(
            "invalid JSON at line %d column %d: %s"
            % (exc.lineno, exc.colno, exc.msg)
        )
    if not isinstance(doc, dict):
        raise SchemaError("top level: expected an object")
    unknown = sorted(set(doc) - _ALLOWED_KEYS)
    if unknown:
        raise SchemaError("unknown field(s): %s" % ", ".join(unknown))
    for key in ("dim", "rays"):
        if key not in doc:
            raise SchemaError("missing required field %r" % key)
    name = doc.get("name", "unnamed")
    if not isinstance(name, str):
        raise SchemaError("name: expected a string")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SchemaError("dim: expected a positive integer")
    rays_doc = doc["rays"]
    if not isinstance(rays_doc, list) or not rays_doc:
        raise SchemaError("rays: expected a nonempty list of integer vectors")
    rays = []
    for i, ray in enumerate(rays_doc):
        if not isinstance(ray, list) or len(ray) != dim:
            raise SchemaError("rays[%d]: expected %d integer entries" % (i, dim))
        coords = []
        for j, x in enumerate(ray):
            value = _parse_scalar(x, "rays[%d][%d]" % (i, j))
            if value.denominator != 1:
                raise NonIntegerRay(
                    "rays[%d][%d]: %s is not an integer" % (i, j, value)
                )
            coords.append(int(value))
        rays.append(tuple(coords))
    xi = _parse_vector(doc["xi"], dim, "xi") if "xi" in doc else None
    eta = _parse_vector(doc["eta"], dim, "eta") if "eta" in doc else None
    boundary = None
    if "boundary_coeffs" in doc:
        raw = doc["boundary_coeffs"]
        if not isinstance(raw, list) or len(raw) != len(rays):
            raise SchemaError(
                "boundary_coeffs: expected one rational per ray (%d)" % len(rays)
            )
        boundary = tuple(
            _parse_scalar(v, "boundary_coeffs[%d]" % i) for i, v in enumerate(raw)
        )
    return ConeSpec(
        name=name,
        dim=dim,
        rays=tuple(rays),
        xi=xi,
        eta=eta,
        boundary_coeffs=boundary,
    )


def _require_xi(spec: ConeSpec, flags: dict) -> Tuple[Fraction, ...]:
    xi = flags.get("xi") or spec.xi
    if xi is None:
        raise SchemaError("no Reeb vector: provide --xi or an 'xi' field")
    return xi


def _require_eta(spec: ConeSpec, flags: dict) -> Tuple[Fraction, ...]:
    eta = flags.get("eta") or spec.eta
    if eta is None:
        raise SchemaError("no direction: provide --eta or an 'eta' field")
    return eta


def _run_check(cone: ToricCone, spec: ConeSpec, flags: dict) -> dict:
    results = {
        "dim": cone.dim,
        "rays": [list(v) for v in cone.rays],
        "dual_rays": [list(u) for u in cone.dual_rays],
    }
    l = gorenstein_vector(cone, boundary=spec.boundary_coeffs)
    results["gorenstein"] = {"l": list(l.l)}
    results["q_gorenstein"] = True
    xi = flags.get("xi") or spec.xi
    if xi is not None:
        rv = reeb_vector(cone, xi)
        results["reeb"] = {
            "xi": list(rv.xi),
            "interior": True,
            "normalized": rv.normalized,
        }
        report = _delta_with_boundary(cone, xi, spec)
        results["kss"] = report.kss
        results["delta"] = report.delta
        results["residual"] = report.residual
    return results


def _delta_with_boundary(cone: ToricCone, xi, spec: ConeSpec):
    if spec.boundary_coeffs is None:
        return delta_report(cone, xi)
    # a boundary divisor in the spec file is the CLI user's opt-in
    warnings.warn(
        "boundary divisor coefficients are experimental and excluded "
        "from the acceptance-backed surface",
        ReebconeWarning,
        stacklevel=2,
    )
    return delta_report(
        cone, xi, boundary=spec.boundary_coeffs, experimental=True
    )


def _run_delta(cone: ToricCone, spec: ConeSpec, flags: dict) -> dict:
    xi = _require_xi(spec, flags)
    report = _delta_with_boundary(cone, xi, spec)
    return {
        "delta": report.delta,
        "delta_prime": report.delta_prime,
        "bary_P": list(report.bary_P),
        "gorenstein": {"l": list(report.gorenstein.l)},
        "minimizing_rays": list(report.minimizing_rays),
        "kss": report.kss,
        "residual": report.residual,
        "scale": report.scale,
    }


def _run_minimize(cone: ToricCone, spec: ConeSpec, flags: dict) -> dict:
    start = flags.get("xi") or spec.xi
    res = minimize_volume(
        cone,
        tol=flags.get("tol"),
        max_iter=flags.get("max_iter") or 100,
        start=start,
        probe_rational=flags.get("probe_rational"),
    )
    out = {
        "xi_star": [float(x) for x in res.xi_star.xi],
        "vol_star": res.vol_star,
        "gradient_norm": res.gradient_norm,
        "iterations": res.iterations,
        "kss_residual": res.kss_residual,
        "margin": res.margin,
        "rational_candidate": None,
    }
    if res.rational_candidate is not None:
        out["rational_candidate"] = {
            "vector": list(res.rational_candidate.vector),
            "max_denominator": res.rational_candidate.max_denominator,
            "distance": res.rational_candidate.distance,
        }
    return out


def _run_futaki(cone: ToricCone, spec: ConeSpec, flags: dict) -> dict:
    xi = _require_xi(spec, flags)
    eta = _require_eta(spec, flags)
    pieces = decompose_dual(cone)
    F = index_character(pieces, xi, order=2)
    C = weight_character(pieces, xi, eta, order=2)
    fut = futaki_product(cone, xi, eta)
    return {
        "futaki": fut,
        "a0": F.a0,
        "a1": F.a1,
        "b0": C.b0,
        "b1": C.b1,
    }


def _run_character(cone: ToricCone, spec: ConeSpec, flags: dict) -> dict:
    xi = _require_xi(spec, flags)
    order = flags.get("order") if flags.get("order") is not None else 2
    pieces = decompose_dual(cone)
    F = index_character(pieces, xi, order=order)
    results = {
        "index": {
            "order_low": F.order_low,
            "coeffs": list(F.coeffs),
            "a0": F.a0,
            "a1": F.a1,
        }
    }
    eta = flags.get("eta") or spec.eta
    if eta is not None:
        C = weight_character(pieces, xi, eta, order=order)
        results["weight"] = {
            "order_low": C.order_low,
            "coeffs": list(C.coeffs),
            "b0": C.b0,
            "b1": C.b1,
        }
    return results


def _run_oracle(cone: ToricCone, spec: ConeSpec, flags: dict) -> dict:
    xi = _require_xi(spec, flags)
    results = {}
    m_max = flags.get("m_max")
    if m_max:
        rows = []
        for v in cone.rays:
            rows.append(
                {
                    "v": list(v),
                    "s_m": [s_m_oracle(cone, xi, v, m) for m in range(1, m_max + 1)],
                    "s": s_value(cone, xi, v),
                    "s_prime": s_prime(cone, xi, v),
                }
            )
        results["s_m_table"] = {"m_max": m_max, "rows": rows}
    t_values = flags.get("t")
    if t_values:
        eta = flags.get("eta") or spec.eta
        entries = []
        for t in t_values:
            if float(t) <= 0:
                raise ValueError("t must be positive, got %r" % (t,))
            cutoff = flags.get("cutoff") or math.ceil(14.0 / float(t))
            value = truncated_character_oracle(cone, xi, eta, float(t), cutoff)
            entries.append({"t": float(t), "cutoff": cutoff, "value": value})
        results["character_values"] = {
            "kind": "weight" if eta is not None else "index",
            "entries": entries,
        }
    if not results:
        raise SchemaError("oracle: provide --m-max and/or --t")
    return results


_RUNNERS = {
    "check": _run_check,
    "delta": _run_delta,
    "minimize": _run_minimize,
    "futaki": _run_futaki,
    "character": _run_character,
    "oracle": _run_oracle,
}


def run(command: str, spec, flags: Optional[dict] = None) -> Report:
    """Execute one subcommand against a spec (text or parsed) and report.

    ``spec`` may be the raw JSON text (hashed as-is) or a ConeSpec
    (hashed over its canonical repr).  Library warnings raised during
    the run are captured into the report.
    """
    if command not in COMMANDS:
        raise ValueError("unknown command %r" % (command,))
    flags = dict(flags or {})
    if isinstance(spec, str):
        text = spec
        spec = parse_cone_spec(text)
    else:
        text = repr(spec)
    input_hash = "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cone = dual_cone(spec.rays, spec.dim)
        results = _RUNNERS[command](cone, spec, flags)
    floaty = command == "minimize" or (command == "oracle" and flags.get("t"))
    provenance = {
        "package": "reebcone",
        "version": __version__,
        "arithmetic": "float64" if floaty else "exact-rational",
        "precision_bits": precision_bits(),
        "tol": float(flags.get("tol") or default_tol()),
    }
    return Report(
        command=command,
        input_hash=input_hash,
        spec_name=spec.name,
        flags=_jsonable(flags),
        results=results,
        provenance=provenance,
        warnings=tuple(str(w.message) for w in caught),
    )


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def _fraction_arg(token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("%r is not a rational number" % token)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="reebcone",
        description="K-semistability of toric Fano cone singularities "
        "via the barycenter criterion.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for command, blurb in (
        ("check", "Q-Gorenstein check, Reeb membership and K-ss verdict"),
        ("delta", "stability threshold delta and barycenter report"),
        ("minimize", "normalized-volume-minimizing Reeb vector"),
        ("futaki", "Futaki pairing Fut(xi; eta)"),
        ("character", "index/weight character Laurent coefficients"),
        ("oracle", "brute-force S_m table and truncated character sums"),
    ):
        p = sub.add_parser(command, help=blurb)
        p.add_argument("--spec", required=True, help="path to a cone spec (JSON)")
        p.add_argument("--xi", nargs="+", type=_fraction_arg, metavar="C",
                       help="Reeb vector coordinates (overrides the spec)")
        p.add_argument("--eta", nargs="+", type=_fraction_arg, metavar="C",
                       help="direction coordinates (overrides the spec)")
        p.add_argument("--order", type=int, help="character expansion order")
        p.add_argument("--tol", type=float, help="convergence tolerance")
        p.add_argument("--m-max", type=int, dest="m_max",
                       help="oracle: compute S_m for m = 1..M")
        p.add_argument("--t", nargs="+", type=float, metavar="T",
                       help="oracle: evaluate truncated character at these t")
        p.add_argument("--cutoff", type=float,
                       help="oracle: pairing cutoff for the lattice sum")
        p.add_argument("--max-iter", type=int, dest="max_iter",
                       help="minimize: Newton iteration cap")
        p.add_argument("--probe-rational", type=int, dest="probe_rational",
                       metavar="N", help="minimize: probe a rational "
                       "minimizer with denominators up to N")
        p.add_argument("--json-out", dest="json_out",
                       help="also write the report to this file")
    return parser


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, InputError):
        return 2
    if isinstance(exc, MathDomainError):
        return 3
    if isinstance(exc, ConvergenceError):
        return 4
    return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    flags = {
        key: getattr(args, key)
        for key in ("xi", "eta", "order", "tol", "m_max", "t", "cutoff",
                    "max_iter", "probe_rational")
        if getattr(args, key, None) is not None
    }
    if "xi" in flags:
        flags["xi"] = tuple(flags["xi"])
    if "eta" in flags:
        flags["eta"] = tuple(flags["eta"])
    try:
        text = Path(args.spec).read_text(encoding="utf-8")
    except OSError as exc:
        report = Report(
            command=args.command,
            input_hash="",
            spec_name="",
            flags=_jsonable(flags),
            results={},
            provenance={"package": "reebcone", "version": __version__},
            warnings=(),
            error={"type": "InputError", "message": str(exc)},
        )
        _emit(report, args.json_out)
        return 2
    try:
        report = run(args.command, text, flags)
        code = 0
    except ReebconeError as exc:
        report = Report(
            command=args.command,
            input_hash="sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest(),
            spec_name="",
            flags=_jsonable(flags),
            results={},
            provenance={"package": "reebcone", "version": __version__},
            warnings=(),
            error={"type": type(exc).__name__, "message": str(exc)},
        )
        code = _exit_code(exc)
    except ValueError as exc:
        report = Report(
            command=args.command,
            input_hash="sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest(),
            spec_name="",
            flags=_jsonable(flags),
            results={},
            provenance={"package": "reebcone", "version": __version__},
            warnings=(),
            error={"type": "UsageError", "message": str(exc)},
        )
        code = 1
    _emit(report, args.json_out)
    return code


def _emit(report: Report, json_out: Optional[str]) -> None:
    payload = report.to_json()
    sys.stdout.write(payload)
    if json_out:
        Path(json_out).write_text(payload, encoding="utf-8")


if __name__ == "__main__":
    sys.exit(main())
