"""Exact rational polyhedral geometry for affine toric cone singularities.

Conventions: the cone sigma lives in N_R = R^n and is generated by primitive
integer vectors v_1..v_d (``rays``).  Its dual
``sigma^v = {u : <v_i, u> >= 0 for all i}`` lives in M_R; the extreme rays of
sigma^v are the ``dual_rays`` and double as the facet data of sigma.  A Reeb
vector is a point of int(sigma); slicing sigma^v at ``<xi, u> <= 1`` produces
the bounded polytope Q_xi whose volume and barycenter drive everything else.

All computations with rational data are exact (``fractions.Fraction``);
irrational Reeb vectors are handled in multiprecision floats at the
configured working precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .config import default_tol, mp_context, to_mpf, working_precision
from .errors import (
    DegenerateSolutionSet,
    DimensionMismatch,
    ExceedsSupportedSize,
    IrrationalReeb,
    NonIntegerRay,
    NotFullDimensional,
    NotPointed,
    NotQGorenstein,
    RayPrimitivizedWarning,
    RedundantRayWarning,
    UnboundedSlice,
)

MAX_DIM = 8
MAX_RAYS = 64


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ToricCone:
    """A full-dimensional pointed cone together with its dual description.

    ``rays`` are the primitive extreme-ray generators of sigma; ``dual_rays``
    the primitive extreme-ray generators of sigma^v.  For a full-dimensional
    pointed cone the facet normals of sigma are exactly the extreme rays of
    sigma^v, so ``facets_sigma == dual_rays``; both fields are kept because
    callers use them in different roles (inequalities vs. generators).
    """

    dim: int
    rays: tuple[tuple[int, ...], ...]
    facets_sigma: tuple[tuple[int, ...], ...]
    dual_rays: tuple[tuple[int, ...], ...]

    def contains(self, v: Sequence) -> bool:
        """Membership of a vector in sigma (pairing >= 0 with every facet)."""
        return all(linalg.dot(v, u) >= 0 for u in self.dual_rays)

    def interior_contains(self, v: Sequence) -> bool:
        """Membership of a vector in int(sigma) (all pairings strict)."""
        return all(linalg.dot(v, u) > 0 for u in self.dual_rays)


@dataclass(frozen=True)
class GorensteinVector:
    """The rational covector l with <v_i, l> = 1 on every ray generator."""

    l: tuple[Fraction, ...]


@dataclass(frozen=True)
class ReebVector:
    """A point of the interior Reeb cone int(sigma).

    Entries are Fractions when the vector is rational and multiprecision
    floats otherwise; ``normalized`` records whether <xi, l> = 1.
    """

    xi: tuple
    normalized: bool

    @property
    def is_rational(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in self.xi)


@dataclass(frozen=True)
class PolytopeSlice:
    """V- and H-representations of Q_xi with exact volume and barycenters.

    ``hrep_Q`` lists inequalities as (coefficients, sense, rhs) triples;
    ``bary_Q`` / ``bary_P`` are the barycenters of Q_xi and of the facet
    P_xi = {u in sigma^v : <xi, u> = 1}.
    """

    vertices_Q: tuple
    hrep_Q: tuple
    volume_Q: object
    bary_Q: tuple
    bary_P: tuple


# ---------------------------------------------------------------------------
# cone construction (double description)
# ---------------------------------------------------------------------------

def _validate_rays(cone_rays: Sequence[Sequence], dim: int) -> list[tuple[int, ...]]:
    if dim < 1:
        raise DimensionMismatch(f"ambient dimension must be positive, got {dim}")
    if dim > MAX_DIM:
        raise ExceedsSupportedSize(f"dimension {dim} exceeds supported maximum {MAX_DIM}")
    if len(cone_rays) > MAX_RAYS:
        raise ExceedsSupportedSize(f"{len(cone_rays)} rays exceed supported maximum {MAX_RAYS}")
    rays = []
    for k, raw in enumerate(cone_rays):
        if len(raw) != dim:
            raise DimensionMismatch(f"ray {k} has length {len(raw)}, expected {dim}")
        entries = []
        for x in raw:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise NonIntegerRay(f"ray {k} has non-integer entry {x}")
                x = x.numerator
            if isinstance(x, float):
                if not x.is_integer():
                    raise NonIntegerRay(f"ray {k} has non-integer entry {x}")
                x = int(x)
            if not isinstance(x, int):
                raise NonIntegerRay(f"ray {k} has non-integer entry {x!r}")
            entries.append(x)
        if not any(entries):
            raise NonIntegerRay(f"ray {k} is the zero vector")
        prim = linalg.primitivize(entries)
        if list(prim) != entries:
            warnings.warn(
                f"ray {k} re-primitivized to {list(prim)}", RayPrimitivizedWarning,
                stacklevel=3,
            )
        rays.append(prim)
    return rays


def _double_description(constraints: list[tuple[int, ...]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of {u : <a, u> >= 0 for each constraint a}.

    Incremental insertion: start from n linearly independent constraints
    (whose cone is spanned by the columns of the inverse matrix), then cut
    with the remaining halfspaces, generating new rays from adjacent
    positive/negative pairs.
    """
    basis_idx: list[int] = []
    for k in range(len(constraints)):
        if linalg.rank([constraints[i] for i in basis_idx + [k]]) > len(basis_idx):
            basis_idx.append(k)
        if len(basis_idx) == dim:
            break
    if len(basis_idx) < dim:
        raise NotFullDimensional(
            f"rays span a subspace of dimension {len(basis_idx)} < {dim}"
        )
    basis = [constraints[i] for i in basis_idx]
    inv_cols = linalg.transpose(linalg.inverse(basis))
    rays = [linalg.integer_direction(col) for col in inv_cols]
    inserted = list(basis)
    for k, a in enumerate(constraints):
        if k in basis_idx:
            continue
        values = [linalg.dot(a, r) for r in rays]
        plus = [r for r, val in zip(rays, values) if val > 0]
        zero = [r for r, val in zip(rays, values) if val == 0]
        minus = [r for r, val in zip(rays, values) if val < 0]
        if minus:
            fresh: dict[tuple[int, ...], None] = {}
            for rp in plus:
                for rm in minus:
                    tight = [c for c in inserted
                             if linalg.dot(c, rp) == 0 and linalg.dot(c, rm) == 0]
                    if linalg.rank(tight) != dim - 2:
                        continue
                    combo = linalg.vec_sub(
                        linalg.vec_scale(linalg.dot(a, rp), rm),
                        linalg.vec_scale(linalg.dot(a, rm), rp),
                    )
                    fresh[linalg.primitivize(combo)] = None
            rays = plus + zero + list(fresh)
        inserted.append(a)
    return rays


def dual_cone(cone_rays: Sequence[Sequence], dim: int) -> ToricCone:
    """Build a fully populated ToricCone from generators of sigma.

    Computes the extreme rays of sigma^v by double description, drops input
    generators that are not extreme rays of sigma (with a warning), and
    records the facet data.  Raises NotFullDimensional or NotPointed on
    degenerate input.
    """
    rays = _validate_rays(cone_rays, dim)
    unique: dict[tuple[int, ...], None] = {}
    for k, r in enumerate(rays):
        if r in unique:
            warnings.warn(f"ray {k} duplicates an earlier ray; dropped",
                          RedundantRayWarning, stacklevel=2)
        else:
            unique[r] = None
    rays = list(unique)

    duals = _double_description(rays, dim)
    if linalg.rank(duals) < dim:
        raise NotPointed("cone contains a line (dual cone is not full-dimensional)")
    duals = sorted(duals)

    kept = []
    for k, v in enumerate(rays):
        tight = [u for u in duals if linalg.dot(v, u) == 0]
        if linalg.rank(tight) == dim - 1:
            kept.append(v)
        else:
            warnings.warn(
                f"ray {k} ({list(v)}) is not an extreme ray of the cone; dropped",
                RedundantRayWarning, stacklevel=2,
            )
    if linalg.rank(kept) < dim:  # pragma: no cover - precluded by DD success
        raise NotFullDimensional("extreme rays do not span the ambient space")
    return ToricCone(
        dim=dim,
        rays=tuple(kept),
        facets_sigma=tuple(duals),
        dual_rays=tuple(duals),
    )


# ---------------------------------------------------------------------------
# Gorenstein vector
# ---------------------------------------------------------------------------

def gorenstein_vector(cone: ToricCone,
                      boundary: Optional[Sequence[Fraction]] = None) -> GorensteinVector:
    """The rational covector with <v_i, l> = 1 on all ray generators.

    With per-ray boundary coefficients c_i (experimental log-pair support)
    the right-hand side becomes 1 - c_i.  Raises NotQGorenstein when the
    system is inconsistent and DegenerateSolutionSet when it has a
    positive-dimensional solution set.
    """
    if boundary is None:
        rhs = [Fraction(1)] * len(cone.rays)
    else:
        if len(boundary) != len(cone.rays):
            raise DimensionMismatch("one boundary coefficient per ray is required")
        rhs = []
        for c in boundary:
            c = Fraction(c)
            if not 0 <= c < 1:
                raise ValueError(f"boundary coefficient {c} outside [0, 1)")
            rhs.append(1 - c)
    try:
        l = linalg.solve_unique(cone.rays, rhs)
    except linalg.LinearSystemInconsistent as exc:
        raise NotQGorenstein(
            "no rational covector pairs correctly with every ray generator"
        ) from exc
    except linalg.LinearSystemUnderdetermined as exc:
        raise DegenerateSolutionSet(
            "Gorenstein system has a positive-dimensional solution set; "
            "supply l explicitly"
        ) from exc
    # Interiority of l in sigma^v: <v, l> > 0 for every nonzero v in sigma.
    # The defining equations make this automatic (<v_i, l> = 1 - c_i > 0),
    # but the check is kept as a defense for generalized callers.
    if not all(linalg.dot(v, l) > 0 for v in cone.rays):  # pragma: no cover
        raise NotQGorenstein("solution of the Gorenstein system is not interior")
    return GorensteinVector(l=l)


# ---------------------------------------------------------------------------
# Reeb vectors
# ---------------------------------------------------------------------------

def _coerce_xi(cone: ToricCone, xi: Sequence) -> tuple:
    if len(xi) != cone.dim:
        raise DimensionMismatch(f"xi has length {len(xi)}, expected {cone.dim}")
    if all(isinstance(x, (int, Fraction)) for x in xi):
        return tuple(Fraction(x) for x in xi)
    ctx = mp_context()
    return tuple(to_mpf(x, ctx) for x in xi)


def reeb_vector(cone: ToricCone, xi: Sequence) -> ReebVector:
    """Validate and wrap an interior point of sigma as a ReebVector."""
    if isinstance(xi, ReebVector):
        xi = xi.xi
    vec = _coerce_xi(cone, xi)
    if not all(linalg.dot(vec, u) > 0 for u in cone.dual_rays):
        raise UnboundedSlice(
            "xi is not interior to sigma: some dual ray pairs nonpositively"
        )
    normalized = False
    try:
        l = gorenstein_vector(cone).l
    except (NotQGorenstein, DegenerateSolutionSet):
        l = None
    if l is not None:
        pairing = linalg.dot(vec, l)
        if all(isinstance(x, Fraction) for x in vec):
            normalized = pairing == 1
        else:
            normalized = abs(pairing - 1) <= default_tol()
    return ReebVector(xi=vec, normalized=normalized)


def _as_xi_tuple(cone: ToricCone, xi) -> tuple:
    if isinstance(xi, ReebVector):
        return xi.xi
    return _coerce_xi(cone, xi)


# ---------------------------------------------------------------------------
# triangulation
# ---------------------------------------------------------------------------

def triangulate_cone(rays: Sequence[tuple[int, ...]],
                     normals: Sequence[tuple[int, ...]],
                     reverse: bool = False) -> tuple[tuple[int, ...], ...]:
    """Pulling triangulation of a pointed cone into simplicial subcones.

    ``rays`` are the extreme rays, ``normals`` a complete list of supporting
    inequalities (every facet of every face arises from one of them).  At
    every recursion level the lowest-ordered ray is pulled and coned over
    the triangulated facets not containing it; since each face is always
    pulled at its own lowest ray, triangulations of shared faces agree and
    the simplices form a genuine triangulation.  Returns tuples of indices
    into ``rays``.  ``reverse=True`` pulls highest-ordered rays instead,
    which generally yields a different triangulation of the same cone.
    """
    order = list(range(len(rays))) if not reverse else list(range(len(rays) - 1, -1, -1))
    position = {idx: pos for pos, idx in enumerate(order)}

    def facets_of(subset: tuple[int, ...], k: int) -> list[tuple[int, ...]]:
        seen: dict[frozenset, tuple[int, ...]] = {}
        for a in normals:
            tight = tuple(i for i in subset if linalg.dot(a, rays[i]) == 0)
            if len(tight) == len(subset):
                continue
            key = frozenset(tight)
            if key in seen:
                continue
            if linalg.rank([rays[i] for i in tight]) == k - 1:
                seen[key] = tight
        return list(seen.values())

    def recurse(subset: tuple[int, ...]) -> list[tuple[int, ...]]:
        k = linalg.rank([rays[i] for i in subset])
        if len(subset) == k:
            return [subset]
        pulled = subset[0]
        simplices = []
        for facet in facets_of(subset, k):
            if pulled in facet:
                continue
            for piece in recurse(facet):
                simplices.append((pulled,) + piece)
        return simplices

    top = tuple(sorted(range(len(rays)), key=position.get))
    return tuple(recurse(top))


# ---------------------------------------------------------------------------
# the polytope Q_xi
# ---------------------------------------------------------------------------

def _abs_det(rows) -> object:
    d = _generic_det(rows)
    return -d if d < 0 else d


def _generic_det(rows):
    """Determinant by elimination, generic over Fraction or mpf scalars."""
    n = len(rows)
    a = [list(row) for row in rows]
    result = 1
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if a[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return 0 * result
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        result = result * a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                factor = a[r][col] / a[col][col]
                for c in range(col, n):
                    a[r][c] = a[r][c] - factor * a[col][c]
    return result


def polytope_Q(cone: ToricCone, xi) -> PolytopeSlice:
    """The slice Q_xi = {u in sigma^v : <xi, u> <= 1} with exact metrics.

    The volume and barycenter of Q_xi come from the pyramid decomposition
    over a pulling triangulation of sigma^v (the origin is always a vertex
    of Q_xi); the barycenter of the cross-section facet P_xi is computed
    from an independently chosen (reversed-order) triangulation, so the
    reported relation bary_P = (n+1)/n * bary_Q genuinely cross-checks the
    two decompositions.
    """
    vec = _as_xi_tuple(cone, xi)
    n = cone.dim
    exact = all(isinstance(x, Fraction) for x in vec)
    with working_precision():
        pairings = [linalg.dot(vec, u) for u in cone.dual_rays]
        if not all(c > 0 for c in pairings):
            raise UnboundedSlice("Q_xi is unbounded: xi is not interior to sigma")

        scaled = [tuple(x / c for x in u) for u, c in zip(cone.dual_rays, pairings)]
        origin = tuple(Fraction(0) if exact else to_mpf(0) for _ in range(n))

        tri_q = triangulate_cone(cone.dual_rays, cone.rays)
        volume = 0
        moment = [0] * n
        for piece in tri_q:
            w = [scaled[i] for i in piece]
            vol_k = _abs_det(w) / math.factorial(n)
            volume = volume + vol_k
            centroid = [sum(col) / (n + 1) for col in zip(*w)]  # origin contributes 0
            moment = [acc + vol_k * c for acc, c in zip(moment, centroid)]
        bary_q = tuple(c / volume for c in moment)

        tri_p = triangulate_cone(cone.dual_rays, cone.rays, reverse=True)
        area = 0
        moment_p = [0] * n
        for piece in tri_p:
            w = [scaled[i] for i in piece]
            area_k = _abs_det(w)
            area = area + area_k
            centroid = [sum(col) / n for col in zip(*w)]
            moment_p = [acc + area_k * c for acc, c in zip(moment_p, centroid)]
        bary_p = tuple(c / area for c in moment_p)

        if exact:
            assert all(p == Fraction(n + 1, n) * q for p, q in zip(bary_p, bary_q))
            assert linalg.dot(vec, bary_p) == 1
            assert all(linalg.dot(v, bary_p) > 0 for v in cone.rays)
        else:
            tol = default_tol()
            assert all(abs(p - (n + 1) * q / n) <= tol * (1 + abs(p))
                       for p, q in zip(bary_p, bary_q))
            assert abs(linalg.dot(vec, bary_p) - 1) <= tol

    hrep = tuple([(v, ">=", 0) for v in cone.rays] + [(vec, "<=", 1)])
    return PolytopeSlice(
        vertices_Q=(origin,) + tuple(scaled),
        hrep_Q=hrep,
        volume_Q=volume,
        bary_Q=bary_q,
        bary_P=bary_p,
    )


# ---------------------------------------------------------------------------
# lattice points
# ---------------------------------------------------------------------------

def lattice_points(cone: ToricCone, xi, m: int) -> list[tuple[int, ...]]:
    """All integer points of m*Q_xi, i.e. u in sigma^v with <xi, u> <= m.

    Exact enumeration over the bounding box of m*Q_xi; requires rational xi
    (IrrationalReeb otherwise).  Points are returned in lexicographic order.
    """
    vec = _as_xi_tuple(cone, xi)
    if not all(isinstance(x, Fraction) for x in vec):
        raise IrrationalReeb("lattice enumeration requires a rational Reeb vector")
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    n = cone.dim
    pairings = [linalg.dot(vec, u) for u in cone.dual_rays]
    if not all(c > 0 for c in pairings):
        raise UnboundedSlice("m*Q_xi is unbounded: xi is not interior to sigma")

    denom = math.lcm(*(x.denominator for x in vec))
    xi_int = [int(x * denom) for x in vec]
    bound = m * denom

    vertices = [tuple(m * x / c for x in u) for u, c in zip(cone.dual_rays, pairings)]
    vertices.append(tuple(Fraction(0) for _ in range(n)))
    lo = [math.floor(min(v[i] for v in vertices)) for i in range(n)]
    hi = [math.ceil(max(v[i] for v in vertices)) for i in range(n)]

    # Constraints as (coeffs, rhs) meaning <coeffs, u> >= rhs, all integer.
    ge_constraints = [(v, 0) for v in cone.rays]
    ge_constraints.append((tuple(-c for c in xi_int), -bound))

    points: list[tuple[int, ...]] = []

    def scan(prefix: list[int], partials: list[int], depth: int):
        if depth == n - 1:
            lo_x, hi_x = lo[depth], hi[depth]
            for (coeffs, rhs), p in zip(ge_constraints, partials):
                c = coeffs[depth]
                if c == 0:
                    if p < rhs:
                        return
                elif c > 0:
                    need = rhs - p
                    lo_x = max(lo_x, -((-need) // c))
                else:
                    hi_x = min(hi_x, (p - rhs) // (-c))
            for x in range(lo_x, hi_x + 1):
                points.append(tuple(prefix) + (x,))
            return
        for x in range(lo[depth], hi[depth] + 1):
            scan(prefix + [x],
                 [p + coeffs[depth] * x for (coeffs, _), p in zip(ge_constraints, partials)],
                 depth + 1)

    scan([], [0] * len(ge_constraints), 0)
    return tuple(points)
