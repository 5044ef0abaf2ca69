"""Runtime configuration: precision and tolerance knobs.

Two environment variables tune the numerics:

``REEBCONE_PRECISION``
    Working precision, in bits, for multiprecision floating point
    (default 128).  Used on the irrational/numeric code path.

``REEBCONE_TOL``
    Default stopping tolerance for iterative solvers and the default
    comparison tolerance in reports (default ``1e-10``).
"""

from __future__ import annotations

import os
from fractions import Fraction

import mpmath

DEFAULT_PRECISION = 128
DEFAULT_TOL = 1e-10


def precision_bits() -> int:
    """Working mpmath precision in bits, from ``REEBCONE_PRECISION``."""
    raw = os.environ.get("REEBCONE_PRECISION", "")
    if not raw:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        return DEFAULT_PRECISION
    return bits if bits >= 53 else DEFAULT_PRECISION


def default_tol() -> float:
    """Default convergence/comparison tolerance, from ``REEBCONE_TOL``."""
    raw = os.environ.get("REEBCONE_TOL", "")
    if not raw:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        return DEFAULT_TOL
    return tol if tol > 0 else DEFAULT_TOL


def mp_context() -> mpmath.ctx_mp.MPContext:
    """A fresh mpmath context at the configured precision.

    Using a dedicated context (rather than mutating the global ``mpmath.mp``)
    keeps library calls from interfering with the caller's settings.
    """
    ctx = mpmath.mp.clone()
    ctx.prec = precision_bits()
    return ctx


def working_precision():
    """Context manager running mpmath arithmetic at the configured precision."""
    return mpmath.workprec(precision_bits())


def to_mpf(x, ctx=None):
    """Coerce ``x`` (int, Fraction, float, mpf) to an mpf in ``ctx``.

    Fractions are converted as numerator/denominator so no precision is
    lost before the final division.
    """
    if ctx is None:
        ctx = mpmath.mp
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / ctx.mpf(x.denominator)
    return ctx.mpf(x)
