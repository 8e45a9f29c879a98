"""Smooth strongly convex outer approximations of a convex set.

Two ingredients:

* a regularized maximum ``rmax``: max smoothed by averaging independent
  shifts of each argument against a compactly supported bump weight, so the
  result is smooth, convexity-preserving, and sandwiched between ``max`` and
  ``max + delta``;
* exponential separators: globally strongly convex functions negative on the
  windowed part of E and positive at a chosen exterior point, built from the
  metric projection of that point.

Folding separators into a running regularized maximum produces a decreasing
(nested) sequence of smooth strongly convex outer neighborhoods of E.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional

import numpy as np

from .errors import NotStronglyConvex, SeparatorNotFound
from .sets import ConvexSet


# ---------------------------------------------------------------------------
# quadrature weight
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _weight_nodes(delta: float, order: int):
    """Gauss-Legendre nodes on [-delta/2, delta/2] with weights proportional
    to the C^infty bump exp(-1/(1-(2t/delta)^2)), normalized to sum 1 and
    symmetrized so the first moment vanishes exactly."""
    x, w = np.polynomial.legendre.leggauss(order)
    t = 0.5 * delta * x
    u = np.clip(2.0 * t / delta, -1 + 1e-15, 1 - 1e-15)
    bump = np.exp(-1.0 / (1.0 - u * u))
    wt = w * bump
    wt = 0.5 * (wt + wt[::-1])
    wt = wt / np.sum(wt)
    return t, wt


@dataclass(frozen=True)
class WeightSpec:
    """Bump-weighted quadrature used to average the shifts in ``rmax``."""

    delta: float
    order: int = 32

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.order < 4:
            raise ValueError("order must be at least 4")

    @property
    def nodes(self) -> np.ndarray:
        return _weight_nodes(float(self.delta), int(self.order))[0]

    @property
    def weights(self) -> np.ndarray:
        return _weight_nodes(float(self.delta), int(self.order))[1]

    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def first_moment(self) -> float:
        return float(np.dot(self.weights, self.nodes))

    def to_jsonable(self):
        return {"delta": float(self.delta), "order": int(self.order)}


def _rmax_pair_values(a, b, spec: WeightSpec, force_quadrature: bool = False):
    """Regularized max of two arrays (vectorized, chunked tensor quadrature)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = np.broadcast_shapes(a.shape, b.shape)
    a = np.broadcast_to(a, shape).ravel()
    b = np.broadcast_to(b, shape).ravel()
    out = np.empty(a.shape[0])
    t, w = spec.nodes, spec.weights
    # fast path: separated by delta -> smoothed max equals the plain max
    gap = np.abs(a - b)
    easy = (gap >= spec.delta) & (not force_quadrature)
    out[easy] = np.maximum(a[easy], b[easy])
    hard = ~easy
    idx = np.nonzero(hard)[0]
    chunk = 4096
    W2 = np.outer(w, w).ravel()
    S = (t[:, None] + np.zeros_like(t)[None, :]).ravel()
    U = (np.zeros_like(t)[:, None] + t[None, :]).ravel()
    for k in range(0, idx.shape[0], chunk):
        sel = idx[k:k + chunk]
        va = a[sel, None] + S[None, :]
        vb = b[sel, None] + U[None, :]
        out[sel] = np.maximum(va, vb) @ W2
    return out.reshape(shape)


def _rmax_tensor3(vals, spec: WeightSpec):
    """Tensor-quadrature regularized max of value triples (B, 3)."""
    t, w = spec.nodes, spec.weights
    n = t.shape[0]
    S1 = t[:, None, None]
    S2 = t[None, :, None]
    S3 = t[None, None, :]
    W = (w[:, None, None] * w[None, :, None] * w[None, None, :]).ravel()
    out = np.empty(vals.shape[0])
    chunk = 256
    for k in range(0, vals.shape[0], chunk):
        v = vals[k:k + chunk]
        m = np.maximum(np.maximum(v[:, 0, None, None, None] + S1,
                                  v[:, 1, None, None, None] + S2),
                       v[:, 2, None, None, None] + S3)
        out[k:k + chunk] = m.reshape(v.shape[0], -1) @ W
    return out


def rmax(values, delta: float, order: int = 32,
         force_quadrature: bool = False) -> np.ndarray:
    """Regularized maximum along the last axis.

    Guarantees (for convex inputs, applied pointwise to their values):
    ``max <= rmax <= max + delta``, smoothness in the arguments, convexity
    preservation, and exact agreement with ``max`` whenever the largest entry
    exceeds all others by at least ``delta``.  Triples use tensor quadrature;
    longer tuples are folded pairwise with a subdivided delta budget.
    ``force_quadrature`` disables the separated-regime shortcut so the
    quadrature itself can be compared against the exact fast path.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        return float(rmax(v[None, :], delta, order, force_quadrature)[0])
    if v.shape[-1] == 1:
        return v[..., 0].copy()
    spec = WeightSpec(delta, order)
    if v.shape[-1] == 2:
        return _rmax_pair_values(v[..., 0], v[..., 1], spec, force_quadrature)
    if v.shape[-1] == 3:
        flat = v.reshape(-1, 3)
        srt = np.sort(flat, axis=1)
        out = np.empty(flat.shape[0])
        easy = (srt[:, 2] - srt[:, 1] >= delta) & (not force_quadrature)
        out[easy] = srt[easy, 2]
        hard = np.nonzero(~easy)[0]
        if hard.size:
            out[hard] = _rmax_tensor3(flat[hard], spec)
        return out.reshape(v.shape[:-1])
    k = v.shape[-1]
    sub = WeightSpec(delta / (k - 1), order)
    acc = v[..., 0]
    for j in range(1, k):
        acc = _rmax_pair_values(acc, v[..., j], sub, force_quadrature)
    return acc


def rmax_pair_grid(a, b, delta: float, order: int = 32) -> np.ndarray:
    """Vectorized pairwise regularized max for large grids of values."""
    return _rmax_pair_values(a, b, WeightSpec(delta, order))


def _pair_branch_weight(a: float, b: float, spec: WeightSpec) -> float:
    """Partial derivative of the discretized pair rmax in its first argument.

    Equals the quadrature mass of the region where the first branch wins;
    always in [0, 1], and the two partials sum to 1 away from exact ties.
    """
    if a - b >= spec.delta:
        return 1.0
    if b - a >= spec.delta:
        return 0.0
    t, w = spec.nodes, spec.weights
    wins = (a + t[:, None]) >= (b + t[None, :])
    return float(w @ wins @ w)


# ---------------------------------------------------------------------------
# exponential separators
# ---------------------------------------------------------------------------

@dataclass
class SeparatorFn:
    """Globally strongly convex separator rho(x) = scale * (e^{g(y)} - 1) with
    g(y) = alpha * |y'|^2 + d/4 - y_1 in the orthonormal frame y = B (x - h):
    the first frame axis points from the exterior point toward the set."""

    frame: np.ndarray          # (m, m) orthonormal rows, first row = inward axis
    center: np.ndarray         # midpoint h between exterior point and projection
    alpha: float
    gap: float                 # distance d between exterior point and projection
    scale: float

    def _g(self, y):
        return self.alpha * (np.sum(y * y, axis=-1) - y[..., 0] ** 2) \
            + 0.25 * self.gap - y[..., 0]

    def value(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        y = (np.atleast_2d(x) - self.center) @ self.frame.T
        out = self.scale * (np.exp(self._g(y)) - 1.0)
        return float(out[0]) if single else out

    def grad(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = (x - self.center) @ self.frame.T
        gy = 2.0 * self.alpha * y
        gy[0] = -1.0
        g = float(self._g(y))
        return self.scale * np.exp(g) * (gy @ self.frame)

    def hess(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        m = x.shape[0]
        y = (x - self.center) @ self.frame.T
        gy = 2.0 * self.alpha * y
        gy[0] = -1.0
        core = np.outer(gy, gy) + 2.0 * self.alpha * np.diag(
            [0.0] + [1.0] * (m - 1))
        g = float(self._g(y))
        return self.scale * np.exp(g) * (self.frame.T @ core @ self.frame)

    def to_jsonable(self):
        return {
            "frame": [[float(v) for v in row] for row in self.frame],
            "center": [float(v) for v in self.center],
            "alpha": float(self.alpha),
            "gap": float(self.gap),
            "scale": float(self.scale),
        }


def exp_separator(E: ConvexSet, q, window: float) -> SeparatorFn:
    """Separator positive at the exterior point ``q`` and <= -1 on the part of
    E within ``3 * window`` of the midpoint, strongly convex everywhere."""
    q = np.asarray(q, dtype=float)
    from .errors import PointInsideSet
    try:
        p = E.nearest_boundary(q)
    except PointInsideSet as exc:
        raise SeparatorNotFound(f"point is not exterior: {exc}") from exc
    d = float(np.linalg.norm(q - p))
    if d < 1e-10:
        raise SeparatorNotFound("exterior point is on the boundary")
    u = (p - q) / d
    h = 0.5 * (p + q)
    radius = 3.0 * window
    alpha = d / (8.0 * radius * radius)
    scale = 1.1 / (1.0 - np.exp(-d / 8.0))
    # orthonormal frame with first axis u
    A = np.eye(len(q))
    A[0] = u
    qmat, _ = np.linalg.qr(A.T)
    frame = qmat.T
    if np.dot(frame[0], u) < 0:
        frame = frame.copy()
        frame[0] = -frame[0]
    # force the first row to be exactly u
    frame[0] = u
    for i in range(1, frame.shape[0]):
        frame[i] = frame[i] - np.dot(frame[i], u) * u
        for j in range(1, i):
            frame[i] = frame[i] - np.dot(frame[i], frame[j]) * frame[j]
        nrm = np.linalg.norm(frame[i])
        if nrm < 1e-12:
            raise SeparatorNotFound("degenerate frame around the separating axis")
        frame[i] = frame[i] / nrm
    sep = SeparatorFn(frame=frame, center=h, alpha=alpha, gap=d, scale=scale)
    if sep.value(q) <= 0:
        raise SeparatorNotFound("separator is not positive at the exterior point")
    eig = np.linalg.eigvalsh(sep.hess(h))
    if eig[0] <= 0:
        raise NotStronglyConvex("separator Hessian is not positive definite")
    return sep


# ---------------------------------------------------------------------------
# outer approximation sequence
# ---------------------------------------------------------------------------

@dataclass
class SmoothingState:
    """Running regularized max tau of exponential separators.

    The sublevel sets {tau_k < 0} are smooth, strongly convex on compacts,
    contain E within the window, and are nested decreasing in k because the
    regularized max never falls below either argument.
    """

    separators: List[SeparatorFn]
    delta: float
    window: float
    exterior_points: List[np.ndarray] = field(default_factory=list)
    order: int = 32

    def value(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = np.atleast_2d(x)
        acc = self.separators[0].value(pts)
        for sep in self.separators[1:]:
            acc = rmax_pair_grid(acc, sep.value(pts), self.delta, self.order)
        return float(acc[0]) if single else acc

    def stage_values(self, x):
        """Values of tau_1, ..., tau_k at x (for nesting diagnostics)."""
        x = np.asarray(x, dtype=float)
        pts = np.atleast_2d(x)
        acc = self.separators[0].value(pts)
        stages = [acc]
        for sep in self.separators[1:]:
            acc = rmax_pair_grid(acc, sep.value(pts), self.delta, self.order)
            stages.append(acc)
        return np.stack(stages, axis=0)

    def stage_hessian(self, x, stage: Optional[int] = None) -> np.ndarray:
        """Hessian of tau_stage at x, via the chain rule through the fold.

        The discretized regularized max is piecewise linear in its two
        arguments, so almost everywhere the composite Hessian is exactly the
        branch-weighted convex combination of the separator Hessians; on the
        measure-zero facet boundaries the distributional Hessian only gains an
        extra positive-semidefinite kink part, so this value is a lower bound
        in the semidefinite order.
        """
        x = np.asarray(x, dtype=float)
        k = len(self.separators) if stage is None else int(stage)
        if not 1 <= k <= len(self.separators):
            raise ValueError("stage out of range")
        spec = WeightSpec(self.delta, self.order)
        acc = float(self.separators[0].value(x))
        H = self.separators[0].hess(x)
        for sep in self.separators[1:k]:
            v = float(sep.value(x))
            wa = _pair_branch_weight(acc, v, spec)
            H = wa * H + (1.0 - wa) * sep.hess(x)
            acc = float(_rmax_pair_values(acc, v, spec))
        return H

    @property
    def steps(self) -> int:
        return len(self.separators)

    def to_jsonable(self):
        return {
            "delta": float(self.delta),
            "window": float(self.window),
            "order": int(self.order),
            "separators": [s.to_jsonable() for s in self.separators],
            "exterior_points": [[float(v) for v in q] for q in self.exterior_points],
        }


def outer_sequence(E: ConvexSet, steps: int, window: float, delta: float = 0.1,
                   seed: int = 42, batch: int = 32) -> SmoothingState:
    """Build ``steps`` nested smooth strongly convex outer neighborhoods.

    Each step samples a batch of exterior points, keeps the one least covered
    by the running approximation (largest current tau value, i.e. farthest
    outside the previous neighborhood), builds its exponential separator, and
    folds it in with the regularized max.

    Raises ValueError when E contains affine lines (no strongly convex
    function can then be negative on E), and SeparatorNotFound when no usable
    exterior point remains.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    rows, _ = E.lineality_exact()
    if rows.shape[0]:
        raise ValueError("set contains affine lines; no strongly convex "
                         "outer approximation can contain it")
    separators: List[SeparatorFn] = []
    used: List[np.ndarray] = []
    state: Optional[SmoothingState] = None
    for j in range(steps):
        rng = np.random.default_rng([seed, j])
        qs = E.sample_exterior(rng, batch, window=window)
        if qs.shape[0] == 0:
            raise SeparatorNotFound(f"no exterior samples at step {j}")
        if state is None:
            pick = qs[0]
        else:
            vals = state.value(qs)
            pick = qs[int(np.argmax(vals))]
        sep = exp_separator(E, pick, window)
        separators.append(sep)
        used.append(np.asarray(pick, dtype=float))
        state = SmoothingState(separators=list(separators), delta=delta,
                               window=window, exterior_points=list(used))
    return state


def smooth_normcombo(phi, eta: float):
    """Smooth strongly convex surrogate of an irreducible norm combination."""
    phi.require_irreducible()
    return phi.smoothed(eta)


# ---------------------------------------------------------------------------
# numeric convexity probe
# ---------------------------------------------------------------------------

def hessian_min_eig(f: Callable, x, h: float = 1e-4) -> float:
    """Smallest eigenvalue of a central-difference Hessian of ``f`` at ``x``,
    with one step of Richardson extrapolation when the two step sizes
    disagree."""
    x = np.asarray(x, dtype=float)

    def fd_hess(step):
        m = x.shape[0]
        H = np.empty((m, m))
        for i in range(m):
            for j in range(i, m):
                ei = np.zeros(m); ei[i] = step
                ej = np.zeros(m); ej[j] = step
                v = (float(f(x + ei + ej)) - float(f(x + ei - ej))
                     - float(f(x - ei + ej)) + float(f(x - ei - ej))) / (4 * step * step)
                H[i, j] = v
                H[j, i] = v
        return 0.5 * (H + H.T)

    H1 = fd_hess(h)
    H2 = fd_hess(h / 2)
    denom = max(1.0, float(np.linalg.norm(H1)))
    if np.linalg.norm(H2 - H1) / denom > 1e-3:
        H = (4.0 * H2 - H1) / 3.0
    else:
        H = H2
    return float(np.linalg.eigvalsh(H)[0])
