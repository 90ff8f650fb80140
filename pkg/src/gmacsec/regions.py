"""Rate polytopes, positive-part expansion, hulls, and frontier sweeps.

A RatePolytope is {x >= 0 : A x <= b} over named rate coordinates;
nonnegativity of every coordinate is always implicit and never appears in A.
Bound constructions with [.]_+ brackets are expressed as templates whose
clipped constraints are expanded into a union of plain polytopes by
clip_plus_split. Regions are unions of pieces, optionally convexified into a
cached vertex cloud.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import (
    EmptySlice,
    Unbounded,
    VertexEnumerationOverflow,
)

DEDUP_TOL = 1e-9
DEDUP_DECIMALS = 9
VERTEX_CEILING = 100_000
COMBO_CEILING = 2_000_000

# HiGHS default feasibility tolerances sit near 1e-7, which is visible
# noise at the 9-digit precision the outputs promise; pin them lower.
_LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


@dataclass(frozen=True)
class RatePolytope:
    """One conjunctive piece: {x >= 0 : A x <= b} over coords."""

    coords: tuple[str, ...]
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if A.shape[1] != len(self.coords) and A.size > 0:
            raise ValueError(
                f"constraint width {A.shape[1]} vs {len(self.coords)} coords"
            )
        if A.shape[0] != b.shape[0]:
            raise ValueError("A and b row counts differ")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def constraints(self):
        """The (coefficients, bound) pairs, excluding implicit nonnegativity."""
        return [(self.A[i].copy(), float(self.b[i])) for i in range(len(self.b))]


def polytope(coords, constraint_pairs) -> RatePolytope:
    """Build a RatePolytope from (coefficient vector, bound) pairs."""
    coords = tuple(coords)
    d = len(coords)
    if not constraint_pairs:
        return RatePolytope(coords, np.zeros((0, d)), np.zeros(0))
    A = np.array([np.asarray(c, dtype=float) for c, _ in constraint_pairs])
    b = np.array([float(v) for _, v in constraint_pairs])
    return RatePolytope(coords, A, b)


def piece_contains(piece: RatePolytope, point, tol: float = 1e-9) -> bool:
    """Membership test with additive slack tol on every constraint."""
    x = np.asarray(point, dtype=float)
    if x.shape != (piece.dim,):
        raise ValueError(f"point of dim {x.shape} vs polytope dim {piece.dim}")
    if np.any(x < -tol):
        return False
    if piece.A.shape[0] == 0:
        return True
    return bool(np.all(piece.A @ x <= piece.b + tol))


def piece_is_empty(piece: RatePolytope, tol: float = 1e-9) -> bool:
    """LP feasibility of the piece (with implicit nonnegativity)."""
    d = piece.dim
    if piece.A.shape[0] == 0:
        return False
    res = linprog(
        np.zeros(d), A_ub=piece.A, b_ub=piece.b + tol,
        bounds=[(0, None)] * d, method="highs", options=_LP_OPTIONS,
    )
    return res.status == 2


def piece_support(piece: RatePolytope, direction) -> tuple[float, np.ndarray]:
    """max d.x over the piece; returns (value, maximizing point).

    Raises Unbounded when the LP is unbounded in that direction and
    EmptySlice when the piece is infeasible.
    """
    d = np.asarray(direction, dtype=float)
    if d.shape != (piece.dim,):
        raise ValueError("direction dimension mismatch")
    if not np.any(d):
        raise ValueError("direction must be nonzero")
    res = linprog(
        -d, A_ub=piece.A if piece.A.shape[0] else None,
        b_ub=piece.b if piece.A.shape[0] else None,
        bounds=[(0, None)] * piece.dim, method="highs", options=_LP_OPTIONS,
    )
    if res.status == 3:
        raise Unbounded(f"support unbounded along {direction}")
    if res.status == 2:
        raise EmptySlice("support of an empty piece")
    if res.status != 0:
        raise Unbounded(f"support LP failed: {res.message}")
    return float(-res.fun), np.asarray(res.x)


def slice_piece(piece: RatePolytope, fixed: dict) -> RatePolytope:
    """Substitute fixed coordinate values, keeping the remaining coords.

    A fixed value below zero contradicts implicit nonnegativity, so the
    result is made infeasible explicitly (0 <= -1).
    """
    for name in fixed:
        if name not in piece.coords:
            raise ValueError(f"cannot fix unknown coordinate {name!r}")
    keep_idx = [i for i, c in enumerate(piece.coords) if c not in fixed]
    fix_idx = [i for i, c in enumerate(piece.coords) if c in fixed]
    if not keep_idx:
        raise ValueError("slice must keep at least one coordinate")
    vals = np.array([float(fixed[piece.coords[i]]) for i in fix_idx])
    new_coords = tuple(piece.coords[i] for i in keep_idx)
    if piece.A.shape[0]:
        new_A = piece.A[:, keep_idx]
        new_b = piece.b - piece.A[:, fix_idx] @ vals
    else:
        new_A = np.zeros((0, len(keep_idx)))
        new_b = np.zeros(0)
    if np.any(vals < -DEDUP_TOL):
        new_A = np.vstack([new_A, np.zeros((1, len(keep_idx)))])
        new_b = np.append(new_b, -1.0)
    return RatePolytope(new_coords, new_A, new_b)


@dataclass(frozen=True)
class ClippedConstraint:
    """lhs . x <= [affine . x + const]_+ inside a template."""

    lhs: np.ndarray
    affine: np.ndarray
    const: float


@dataclass(frozen=True)
class PolytopeTemplate:
    """Plain constraints plus positive-part constraints, pre-expansion."""

    coords: tuple[str, ...]
    plain: tuple
    clipped: tuple


def template(coords, plain, clipped) -> PolytopeTemplate:
    coords = tuple(coords)
    d = len(coords)
    plain_t = tuple(
        (np.asarray(c, dtype=float), float(v)) for c, v in plain
    )
    clipped_t = []
    for lhs, affine, const in clipped:
        lhs = np.asarray(lhs, dtype=float)
        affine = np.asarray(affine, dtype=float)
        if lhs.shape != (d,) or affine.shape != (d,):
            raise ValueError("clipped constraint width mismatch")
        clipped_t.append(ClippedConstraint(lhs, affine, float(const)))
    return PolytopeTemplate(coords, plain_t, tuple(clipped_t))


def clip_plus_split(tmpl: PolytopeTemplate, drop_empty: bool = True):
    """Expand positive-part constraints into a union of plain polytopes.

    x satisfies lhs.x <= [g(x)]_+ exactly when lhs.x <= g(x) or lhs.x <= 0,
    so each clipped constraint with variables inside the bracket doubles the
    piece count. A bracket with no variable content is resolved in place:
    nonnegative constant c gives the single constraint lhs.x <= c, negative c
    gives lhs.x <= 0. Empty pieces are dropped unless drop_empty is False.
    """
    base = list(tmpl.plain)
    branching = []
    for cc in tmpl.clipped:
        if np.max(np.abs(cc.affine)) <= 1e-15:
            if cc.const >= 0:
                base.append((cc.lhs, cc.const))
            else:
                base.append((cc.lhs, 0.0))
        else:
            branching.append(cc)
    pieces = []
    for choice in itertools.product((0, 1), repeat=len(branching)):
        pairs = list(base)
        for take_affine, cc in zip(choice, branching):
            if take_affine == 0:
                pairs.append((cc.lhs - cc.affine, cc.const))
            else:
                pairs.append((cc.lhs, 0.0))
        piece = polytope(tmpl.coords, pairs)
        if drop_empty and piece_is_empty(piece):
            continue
        pieces.append(piece)
    return pieces


def piece_vertices(piece: RatePolytope, max_vertices: int = VERTEX_CEILING) -> np.ndarray:
    """Enumerate the vertices of a bounded piece.

    Solves every d x d subsystem drawn from the constraints plus the implicit
    nonnegativity facets and keeps the feasible solutions. Intended for the
    low-dimensional polytopes this package produces (dim <= 5); raises
    VertexEnumerationOverflow if the subsystem count or the vertex count
    would run away. Unbounded pieces are not detected here; callers that can
    encounter them should probe supports first.
    """
    d = piece.dim
    A_full = np.vstack([piece.A, -np.eye(d)]) if piece.A.shape[0] else -np.eye(d)
    b_full = np.concatenate([piece.b, np.zeros(d)]) if piece.A.shape[0] else np.zeros(d)
    m = A_full.shape[0]
    n_combo = math.comb(m, d)
    if n_combo > COMBO_CEILING:
        raise VertexEnumerationOverflow(
            f"{n_combo} constraint subsets exceed the enumeration budget"
        )
    idx = np.array(list(itertools.combinations(range(m), d)), dtype=int)
    mats = A_full[idx]                        # (n, d, d)
    rhs = b_full[idx]                         # (n, d)
    dets = np.linalg.det(mats)
    ok = np.abs(dets) > 1e-10
    if not np.any(ok):
        return np.empty((0, d))
    sols = np.linalg.solve(mats[ok], rhs[ok][..., None])[..., 0]
    feas = np.all(A_full @ sols.T <= b_full[:, None] + 1e-9, axis=0)
    sols = sols[feas]
    if sols.shape[0] == 0:
        return np.empty((0, d))
    keys = np.round(sols, DEDUP_DECIMALS)
    keys[keys == 0.0] = 0.0                   # fold -0.0
    _, first = np.unique(keys, axis=0, return_index=True)
    verts = sols[np.sort(first)]
    if verts.shape[0] > max_vertices:
        raise VertexEnumerationOverflow(
            f"{verts.shape[0]} vertices exceed the ceiling {max_vertices}"
        )
    return verts


def _dedup_sorted(points: np.ndarray) -> np.ndarray:
    """Deduplicate rows at DEDUP_TOL and sort lexicographically."""
    if points.shape[0] == 0:
        return points
    keys = np.round(points, DEDUP_DECIMALS)
    keys[keys == 0.0] = 0.0
    _, first = np.unique(keys, axis=0, return_index=True)
    pts = points[np.sort(first)]
    order = np.lexsort(pts.T[::-1])
    return pts[order]


@dataclass(frozen=True)
class RateRegion:
    """A union of pieces, optionally with a convexified vertex cloud.

    hull_points, when present, spans the closed convex hull of the union;
    provenance, when present, aligns with pieces and records where each piece
    came from (typically a scheme dictionary). info carries free-form
    assembly diagnostics.
    """

    coords: tuple[str, ...]
    pieces: tuple
    hull_points: np.ndarray | None = None
    provenance: tuple | None = None
    info: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_convexified(self) -> bool:
        return self.hull_points is not None


def convexify(pieces, coords=None, provenance=None, info=None) -> RateRegion:
    """Convex hull of a union of pieces, cached as a sorted vertex cloud.

    Vertices of every piece are pooled, deduplicated, and sorted before any
    hull pruning, so the result does not depend on piece order. Pruning to
    extreme points uses Qhull when the cloud has full affine rank; flat
    clouds are kept as is (membership tests do not need minimality).
    """
    pieces = tuple(pieces)
    if coords is None:
        if not pieces:
            raise ValueError("convexify needs coords when no pieces are given")
        coords = pieces[0].coords
    coords = tuple(coords)
    for p in pieces:
        if p.coords != coords:
            raise ValueError(f"piece coords {p.coords} differ from {coords}")
    d = len(coords)
    clouds = [piece_vertices(p) for p in pieces]
    clouds = [c for c in clouds if c.shape[0]]
    if clouds:
        points = _dedup_sorted(np.vstack(clouds))
    else:
        points = np.empty((0, d))
    if points.shape[0] > d + 1:
        centered = points - points[0]
        if np.linalg.matrix_rank(centered, tol=1e-9) == d:
            try:
                from scipy.spatial import ConvexHull

                hull = ConvexHull(points)
                points = _dedup_sorted(points[hull.vertices])
            except Exception:
                pass  # degenerate geometry: the unpruned cloud is still correct
    points.setflags(write=False)
    return RateRegion(
        coords=coords,
        pieces=pieces,
        hull_points=points,
        provenance=None if provenance is None else tuple(provenance),
        info=dict(info or {}),
    )


def region_contains(region: RateRegion, point, tol: float = 1e-9) -> bool:
    """Membership: within tol of the hull if convexified, else in some piece."""
    x = np.asarray(point, dtype=float)
    if x.shape != (region.dim,):
        raise ValueError("point dimension mismatch")
    if region.is_convexified:
        pts = region.hull_points
        if pts.shape[0] == 0:
            return False
        # Chebyshev distance from x to conv(pts), as an LP over hull weights
        n = pts.shape[0]
        d = region.dim
        cost = np.zeros(n + 1)
        cost[n] = 1.0
        A_ub = np.zeros((2 * d, n + 1))
        b_ub = np.zeros(2 * d)
        A_ub[:d, :n] = pts.T
        A_ub[:d, n] = -1.0
        b_ub[:d] = x
        A_ub[d:, :n] = -pts.T
        A_ub[d:, n] = -1.0
        b_ub[d:] = -x
        A_eq = np.zeros((1, n + 1))
        A_eq[0, :n] = 1.0
        res = linprog(cost, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                      bounds=[(0, None)] * (n + 1), method="highs", options=_LP_OPTIONS)
        if res.status != 0:
            return False
        return float(res.fun) <= tol
    return any(piece_contains(p, x, tol) for p in region.pieces)


def region_support(region: RateRegion, direction) -> float:
    """Support value max d.x over the region (hull and union agree)."""
    d = np.asarray(direction, dtype=float)
    if d.shape != (region.dim,):
        raise ValueError("direction dimension mismatch")
    if not np.any(d):
        raise ValueError("direction must be nonzero")
    if region.is_convexified:
        if region.hull_points.shape[0] == 0:
            raise EmptySlice("support of an empty region")
        return float(np.max(region.hull_points @ d))
    values = []
    for p in region.pieces:
        try:
            values.append(piece_support(p, d)[0])
        except EmptySlice:
            continue
    if not values:
        raise EmptySlice("support of an empty region")
    return max(values)


@dataclass(frozen=True)
class FrontierSample:
    """One support-direction probe of a 2-D slice."""

    theta: float
    direction: tuple[float, float]
    point: np.ndarray
    value: float
    piece_index: int | None


def _pareto_filter(points: np.ndarray) -> np.ndarray:
    keep = []
    n = points.shape[0]
    for i in range(n):
        p = points[i]
        dominated = False
        for j in range(n):
            if j == i:
                continue
            q = points[j]
            if (
                q[0] >= p[0] - 1e-12
                and q[1] >= p[1] - 1e-12
                and (q[0] > p[0] + 1e-12 or q[1] > p[1] + 1e-12)
            ):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return points[keep]


def _hull_slice_probe(region, plane_idx, fixed_idx, fixed_vals, direction):
    """Support of the hull's slice in one direction, plus an optimal point.

    Works in hull-weight space: max d.(P w) over w >= 0, sum w = 1,
    F w = fixed values, where P and F are the plane and fixed coordinate
    blocks of the vertex cloud. A second stage maximizes the coordinate sum
    among near-optima so the reported point is Pareto-maximal.
    """
    pts = region.hull_points
    n = pts.shape[0]
    if n == 0:
        return None
    P = pts[:, plane_idx]                 # (n, 2)
    obj = P @ np.asarray(direction)
    A_eq = [np.ones(n)]
    b_eq = [1.0]
    for k, idx in enumerate(fixed_idx):
        A_eq.append(pts[:, idx])
        b_eq.append(fixed_vals[k])
    A_eq = np.array(A_eq)
    b_eq = np.array(b_eq)
    res = linprog(-obj, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * n,
                  method="highs", options=_LP_OPTIONS)
    if res.status == 2:
        return None
    if res.status != 0:
        raise Unbounded(f"hull slice LP failed: {res.message}")
    value = float(-res.fun)
    # stage two: pin the support value and push toward the Pareto-maximal
    # corner of the optimal face
    tie = P @ np.ones(2)
    A_eq2 = np.vstack([A_eq, obj[None, :]])
    b_eq2 = np.append(b_eq, value)
    res2 = linprog(-tie, A_eq=A_eq2, b_eq=b_eq2, bounds=[(0, None)] * n,
                   method="highs", options=_LP_OPTIONS)
    weights = res2.x if res2.status == 0 else res.x
    point = np.asarray(weights) @ P
    return value, point


def _piece_slice_probe(sliced_piece, direction):
    """Two-stage support probe of one pre-sliced 2-D piece."""
    try:
        value, _ = piece_support(sliced_piece, direction)
    except EmptySlice:
        return None
    d = np.asarray(direction, dtype=float)
    A2 = sliced_piece.A if sliced_piece.A.shape[0] else None
    b2 = sliced_piece.b if sliced_piece.A.shape[0] else None
    res = linprog(-np.ones(2), A_ub=A2, b_ub=b2, A_eq=d[None, :],
                  b_eq=[value], bounds=[(0, None)] * 2,
                  method="highs", options=_LP_OPTIONS)
    if res.status == 0:
        return value, np.asarray(res.x)
    return value, piece_support(sliced_piece, direction)[1]


def frontier_sweep(region: RateRegion, plane, fixed=None, resolution: int = 33,
                   use_hull: bool | None = None):
    """Raw support-direction sweep of a 2-D slice, one sample per direction.

    Directions are (cos t, sin t) for t evenly spaced over [0, pi/2].
    fixed must assign a value to every coordinate outside the plane. With
    use_hull unset, the hull is used when the region has one; passing False
    forces per-piece probing, which also reports the winning piece index for
    witness lookup.
    """
    plane = tuple(plane)
    if len(plane) != 2:
        raise ValueError("plane must name exactly two coordinates")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    fixed = dict(fixed or {})
    for name in plane:
        if name not in region.coords:
            raise ValueError(f"unknown plane coordinate {name!r}")
        if name in fixed:
            raise ValueError(f"plane coordinate {name!r} cannot be fixed")
    missing = [c for c in region.coords if c not in plane and c not in fixed]
    if missing:
        raise ValueError(f"missing fixed values for {missing}")
    if use_hull is None:
        use_hull = region.is_convexified
    if use_hull and not region.is_convexified:
        raise ValueError("use_hull requested but the region has no hull cache")
    plane_idx = [region.coords.index(c) for c in plane]
    fixed_names = [c for c in region.coords if c in fixed]
    fixed_idx = [region.coords.index(c) for c in fixed_names]
    fixed_vals = [float(fixed[c]) for c in fixed_names]

    sliced = None
    if not use_hull:
        sliced = []
        for p in region.pieces:
            sp = slice_piece(p, fixed) if fixed else p
            if sp.coords != plane:
                # permute columns into plane order
                perm = [sp.coords.index(c) for c in plane]
                sp = RatePolytope(plane, sp.A[:, perm] if sp.A.shape[0] else sp.A,
                                  sp.b)
            sliced.append(sp)

    thetas = [0.5 * math.pi * k / (resolution - 1) for k in range(resolution)]
    samples = []
    for theta in thetas:
        direction = (math.cos(theta), math.sin(theta))
        if use_hull:
            probe = _hull_slice_probe(region, plane_idx, fixed_idx, fixed_vals,
                                      direction)
            if probe is None:
                continue
            value, point = probe
            samples.append(FrontierSample(theta, direction, point, value, None))
        else:
            best = None
            for i, sp in enumerate(sliced):
                probe = _piece_slice_probe(sp, direction)
                if probe is None:
                    continue
                value, point = probe
                if best is None or value > best[0] + 1e-12:
                    best = (value, point, i)
            if best is None:
                continue
            samples.append(FrontierSample(theta, direction, best[1], best[0],
                                          best[2]))
    if not samples:
        raise EmptySlice(f"no feasible point in the slice at {fixed}")
    return samples


def frontier(region: RateRegion, plane, fixed=None, resolution: int = 33) -> np.ndarray:
    """Pareto-maximal boundary points of a 2-D slice of the region.

    Support directions sweep the first quadrant; the resulting points are
    deduplicated at 1e-9, sorted by the first plane coordinate, and filtered
    so no output point dominates another.
    """
    samples = frontier_sweep(region, plane, fixed=fixed, resolution=resolution)
    points = np.array([s.point for s in samples])
    points = _dedup_sorted(points)
    points = _pareto_filter(points)
    order = np.lexsort(points.T[::-1])
    return points[order]
