"""Stability of affine subspaces relative to a closed convex set.

An affine subspace L is stable for E when the recession cone of E meets the
real span of L's directions only at the origin.  Equivalently the truncated
cones around L (aperture c) cut E in compact pieces, which is what the
certification layer ultimately consumes.  This module provides:

* ``cone_membership`` -- the aperture-c cone test in a frame adapted to L,
* ``is_stable`` -- the recession-cone criterion with a constructive witness
  (an aperture for stable L, a recession direction inside L's span otherwise),
* ``halfline_in_intersection`` -- a halfline witness inside E intersect L,
* ``tube_or_support`` -- the dichotomy between "E is a tube over E intersect L"
  and "some parallel translate of L supports E", with verified witnesses.

Subspaces may be given over C (``AffineSubspaceC``) or over R; all cone
arithmetic happens on the interleaved realification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import SliceUnbounded, UnsupportedVariant
from .geometry import (
    AffineSubspaceC,
    AffineSubspaceR,
    adapt_frame,
    complexify,
    mgs,
    realify,
)
from .sets import ConvexSet, _nullspace_rows

# Translation offsets probed when testing whether parallel slices of E keep
# lining up along a candidate tube fiber.
PROBE_OFFSETS = tuple(float(2 ** k) for k in range(11))
RAY_FIT_TOL = 1e-6


@dataclass
class StabilityVerdict:
    """Outcome of the stability test for one affine subspace."""

    tag: str  # "stable" | "unstable" | "inconclusive"
    aperture: Optional[float] = None
    witness: Optional[np.ndarray] = None  # real unit recession direction
    reason: str = ""

    @property
    def stable(self) -> bool:
        return self.tag == "stable"

    def to_jsonable(self):
        out = {"tag": self.tag}
        if self.aperture is not None:
            out["aperture"] = float(self.aperture)
        if self.witness is not None:
            out["witness"] = [float(t) for t in self.witness]
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass
class TubeFound:
    """E equals (E intersect L) + span(fiber rows); fiber rows are orthonormal."""

    fiber: np.ndarray
    checked_samples: int = 0
    max_residual: float = 0.0


@dataclass
class SupportingTranslate:
    """A parallel translate of L touching E at ``contact`` from outside.

    ``normal`` is a real unit covector vanishing on the directions of L with
    sup over E of <normal, x> == support_value attained at the contact point.
    """

    translate: object  # AffineSubspaceC or AffineSubspaceR, parallel to input
    contact: np.ndarray  # real coordinates of the contact point
    normal: np.ndarray
    support_value: float


def _to_real_subspace(subspace) -> AffineSubspaceR:
    if isinstance(subspace, AffineSubspaceR):
        return subspace
    return subspace.to_real()


def cone_membership(subspace, p, c, x, tol=1e-12):
    """Is x in the aperture-c cone around the complex subspace through p?

    The cone is {|x''| <= c |x'|} where x' collects components along the
    subspace directions and x'' the orthogonal rest, both measured in the
    unitary frame adapted at p.  Monotone in c by construction.
    """
    if c < 0:
        raise ValueError("aperture must be nonnegative")
    frame = adapt_frame(subspace, p)
    w = frame.apply(np.asarray(x, dtype=complex))
    d = subspace.directions.shape[0]
    along = np.linalg.norm(w[:d])
    across = np.linalg.norm(w[d:])
    return bool(across <= c * along + tol * (1.0 + np.linalg.norm(w)))


def _recession_samples(E: ConvexSet, count=64, seed=20240811):
    """Sampled unit recession directions, memoized per set instance.

    The sample is deterministic in (count, seed), so reusing it across
    repeated stability queries on the same set changes nothing but speed.
    """
    cache = getattr(E, "_recession_sample_cache", None)
    if cache is None:
        cache = {}
        E._recession_sample_cache = cache
    key = (count, seed)
    if key not in cache:
        rng = np.random.default_rng(seed)
        cache[key] = E.recession_cone().sample_members(rng, count)
    return cache[key]


def _direction_ratios(E: ConvexSet, S: AffineSubspaceR, count=64, seed=20240811):
    """|r''| / |r'| over sampled recession directions, in the split induced by S."""
    D = S.directions
    ratios = []
    for r in _recession_samples(E, count, seed):
        along = (r @ D.T) @ D
        across = r - along
        na, nc = np.linalg.norm(along), np.linalg.norm(across)
        if na < 1e-12:
            ratios.append(np.inf)
        else:
            ratios.append(nc / na)
    return ratios


def _aperture_bisect(ratios):
    """Largest aperture (up to bisection resolution) violated by all ratios."""
    finite = [r for r in ratios if np.isfinite(r)]
    if not finite:
        return 1.0
    lo, hi = 0.0, 1.0
    while all(r > hi for r in finite) and hi < 2 ** 30:
        lo, hi = hi, 2.0 * hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if all(r > mid for r in finite):
            lo = mid
        else:
            hi = mid
    return max(lo * 0.999, 1e-12)


def is_stable(E: ConvexSet, subspace) -> StabilityVerdict:
    """Decide whether the recession cone of E meets the span of ``subspace``.

    Unstable verdicts carry a unit recession direction inside the span;
    stable verdicts carry an aperture c > 0 such that every sampled recession
    direction violates the cone inequality |r''| <= c |r'|.
    """
    S = _to_real_subspace(subspace)
    if S.directions.shape[1] != E.m:
        raise ValueError("subspace lives in a different ambient dimension")
    v = E.recession_cone().intersect_subspace(S.directions)
    if v is not None:
        return StabilityVerdict("unstable", witness=v)
    aperture = _aperture_bisect(_direction_ratios(E, S))
    return StabilityVerdict("stable", aperture=aperture)


def halfline_in_intersection(E: ConvexSet, subspace, base_point=None):
    """A halfline contained in E intersect L, as (point, unit direction), or None.

    Convexity makes the construction complete: a halfline exists in the closed
    convex set E intersect L iff some recession direction of E lies in L's
    direction span and the intersection is nonempty.
    """
    S = _to_real_subspace(subspace)
    v = E.recession_cone().intersect_subspace(S.directions)
    if v is None:
        return None
    if base_point is not None:
        x0 = np.asarray(base_point, dtype=float)
        if not E.contains(x0, tol=1e-7):
            x0 = None
    else:
        x0 = None
    if x0 is None:
        x0 = E.slice_point(S)
    if x0 is None:
        return None
    for t in (1.0, 8.0, 64.0):
        if not E.contains(x0 + t * v, tol=1e-6 * (1.0 + t)):
            return None
    return x0, v


def _orth_complement(D: np.ndarray, m: int) -> np.ndarray:
    if not D.shape[0]:
        return np.eye(m)
    return _nullspace_rows(D, cols=m)


def _fiber_from_lineality(L: np.ndarray, D: np.ndarray, W: np.ndarray):
    """Rows v_j in span(L) with component w_j across D; None if rank-deficient."""
    if not L.shape[0] or not W.shape[0]:
        return None
    M = W @ L.T  # (|W|, |L|)
    fibers = []
    for j in range(W.shape[0]):
        rhs = np.zeros(W.shape[0])
        rhs[j] = 1.0
        gamma, _, _, _ = np.linalg.lstsq(M, rhs, rcond=None)
        v = gamma @ L
        if np.linalg.norm(v @ W.T - rhs) > 1e-9:
            return None
        fibers.append(v)
    return np.array(fibers)


def tube_or_support(E: ConvexSet, subspace, rng=None):
    """Dichotomy for a subspace whose slice of E is bounded.

    Either E decomposes as (E intersect L) + V for a fiber subspace V
    complementary to L (``TubeFound``), or some parallel translate of L
    supports E at a contact point (``SupportingTranslate``).  Raises
    ``SliceUnbounded`` when E intersect L already contains a halfline.
    """
    S = _to_real_subspace(subspace)
    m = E.m
    if halfline_in_intersection(E, subspace) is not None:
        raise SliceUnbounded("E meets the subspace along a halfline")
    rng = np.random.default_rng(20240817) if rng is None else rng
    D = S.directions
    W = _orth_complement(D, m)

    tube = _try_tube(E, S, D, W)
    if tube is not None:
        return tube

    cone = E.recession_cone()
    candidates = []
    eta = cone.polar_direction_in(W, rng)
    if eta is not None:
        candidates.append(eta)
    for w_row in W:
        for sgn in (1.0, -1.0):
            if cone._max_over_cone(sgn * w_row) is None:
                candidates.append(sgn * w_row)
    for _ in range(20):
        c = rng.standard_normal(W.shape[0])
        eta = c @ W
        nv = np.linalg.norm(eta)
        if nv > 1e-9 and cone._max_over_cone(eta / nv) is None:
            candidates.append(eta / nv)

    seen = []
    for eta in candidates:
        if any(np.linalg.norm(eta - s) < 1e-9 for s in seen):
            continue
        seen.append(eta)
        try:
            res = E.support(eta)
        except UnsupportedVariant:
            continue
        if not res.finite or res.point is None:
            continue
        q = np.asarray(res.point, dtype=float)
        if isinstance(subspace, AffineSubspaceC):
            translate = AffineSubspaceC(base=complexify(q), directions=subspace.directions)
        else:
            translate = AffineSubspaceR(base=q, directions=S.directions)
        return SupportingTranslate(translate=translate, contact=q,
                                   normal=eta, support_value=float(res.value))
    raise UnsupportedVariant("no finite supporting direction across the subspace")


def _try_tube(E: ConvexSet, S: AffineSubspaceR, D, W):
    lin = E.lineality()
    V = _fiber_from_lineality(lin, D, W)
    if V is None:
        return None
    x0 = E.slice_point(S)
    if x0 is None:
        return None
    worst = 0.0
    # Probe translated slices: along each fiber row the slice points of
    # E intersect (S + t w_j) must line up on the ray x0 + t v_j.
    for v in V:
        for t in PROBE_OFFSETS:
            for sgn in (1.0, -1.0):
                pt = x0 + sgn * t * v
                viol = float(np.max(np.atleast_1d(E._violation(pt[None, :]))))
                worst = max(worst, viol)
                if viol > RAY_FIT_TOL * (1.0 + t):
                    return None
    # Sampled decomposition check: x in E iff its S-component is in E.
    rng = np.random.default_rng(20240823)
    B = np.vstack([D, mgs(V)])
    if B.shape[0] != E.m or np.linalg.matrix_rank(B) != E.m:
        return None
    checked = 0
    try:
        xs = E.sample_boundary(rng, 500, window=10.0)
    except Exception:
        xs = np.empty((0, E.m))
    Vn = mgs(V)
    for x in xs:
        coords_v = (x - x0) @ Vn.T
        y = x - coords_v @ Vn
        checked += 1
        if not E.contains(y, tol=1e-6):
            return None
    extra = rng.standard_normal((500, Vn.shape[0])) * 4.0
    base_pts = [x0] + [x0 + d for d in 0.5 * rng.standard_normal((4, E.m)) @ np.diag(np.ones(E.m))
                       if E.contains(x0 + d, tol=1e-9)]
    for k, coeff in enumerate(extra):
        y = base_pts[k % len(base_pts)]
        checked += 1
        if not E.contains(y + coeff @ Vn, tol=1e-6):
            return None
    return TubeFound(fiber=Vn, checked_samples=checked, max_residual=worst)
