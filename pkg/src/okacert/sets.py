"""Closed convex set variants over R^m (complex ambient space realified).

Every variant provides membership, an explicit polyhedral recession cone
{v : E v = 0, I v <= 0}, a support function with attainer, boundary sampling,
nearest-boundary projection and affine-slice feasibility. Complex sets use the
interleaved realification from :mod:`okacert.geometry` (m = 2n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (DimensionMismatch, InfeasiblePolyhedron, PointInsideSet,
                     ProjectionDidNotConverge, UnsupportedVariant)
from .functions import MaxAffine, NormCombo, Quadratic, midpoint_convexity_check
from .geometry import AffineSubspaceR, mgs
from .lp import feasible_point, solve_lp

DEFAULT_TOL = 1e-9


@dataclass
class SupportResult:
    value: float  # +inf when unbounded above
    point: np.ndarray | None  # attainer when finite

    @property
    def finite(self):
        return np.isfinite(self.value)


class RecessionCone:
    """Polyhedral cone {v : eq v = 0, ineq v <= 0} in R^m."""

    def __init__(self, m, eq=None, ineq=None):
        self.m = m
        self.eq = np.zeros((0, m)) if eq is None or not len(eq) else np.atleast_2d(np.asarray(eq, float))
        self.ineq = np.zeros((0, m)) if ineq is None or not len(ineq) else np.atleast_2d(np.asarray(ineq, float))

    def member(self, v, tol=1e-9):
        v = np.asarray(v, dtype=float)
        ok = True
        if self.eq.shape[0]:
            ok = ok and np.max(np.abs(self.eq @ v)) <= tol
        if ok and self.ineq.shape[0]:
            ok = ok and np.max(self.ineq @ v) <= tol
        return bool(ok)

    def lineality_rows(self):
        stacked = np.vstack([self.eq, self.ineq])
        if not stacked.shape[0]:
            return np.eye(self.m)
        return _nullspace_rows(stacked)

    def subspace_rows(self):
        """Orthonormal basis of {v : eq v = 0}."""
        if not self.eq.shape[0]:
            return np.eye(self.m)
        return _nullspace_rows(self.eq)

    def intersect_subspace(self, directions, tol=1e-9):
        """A unit cone member inside span(directions), or None if only {0}."""
        B = mgs(np.atleast_2d(np.asarray(directions, float)))
        if not B.shape[0]:
            return None
        if self.eq.shape[0]:
            M = self.eq @ B.T
            alpha = _nullspace_rows(M, cols=B.shape[0])
            if not alpha.shape[0]:
                return None
            V = alpha @ B
        else:
            V = B
        if not self.ineq.shape[0]:
            return V[0] / np.linalg.norm(V[0])
        G = self.ineq @ V.T
        w = V.shape[0]
        box = np.vstack([np.eye(w), -np.eye(w)])
        Aub = np.vstack([G, box])
        bub = np.concatenate([np.zeros(G.shape[0]), np.ones(2 * w)])
        for j in range(w):
            for sign in (1.0, -1.0):
                obj = np.zeros(w)
                obj[j] = sign
                res = solve_lp(obj, A_ub=Aub, b_ub=bub, maximize=True)
                if res.optimal and res.value > 1e-7:
                    v = res.x @ V
                    v = v / np.linalg.norm(v)
                    if self.member(v, tol=1e-7):
                        return v
        return None

    def sample_members(self, rng, count):
        """Unit cone members: subspace combinations plus LP vertex rays."""
        out = []
        sub = self.subspace_rows()
        for _ in range(count):
            if not sub.shape[0]:
                break
            v = rng.normal(size=sub.shape[0]) @ sub
            nv = np.linalg.norm(v)
            if nv < 1e-12:
                continue
            for cand in (v / nv, -v / nv):
                if self.member(cand, tol=1e-9):
                    out.append(cand)
                    break
        need = count - len(out)
        if need > 0 and (self.ineq.shape[0] or self.eq.shape[0]):
            m = self.m
            box = np.vstack([np.eye(m), -np.eye(m)])
            Aub = np.vstack([self.ineq, box]) if self.ineq.shape[0] else box
            bub = np.concatenate([np.zeros(self.ineq.shape[0]), np.ones(2 * m)])
            Aeq = self.eq if self.eq.shape[0] else None
            beq = np.zeros(self.eq.shape[0]) if self.eq.shape[0] else None
            for _ in range(3 * need):
                obj = rng.normal(size=m)
                res = solve_lp(obj, A_ub=Aub, b_ub=bub, A_eq=Aeq, b_eq=beq, maximize=True)
                if res.optimal and res.x is not None:
                    nv = np.linalg.norm(res.x)
                    if nv > 1e-7:
                        v = res.x / nv
                        if self.member(v, tol=1e-8):
                            out.append(v)
                if len(out) >= count:
                    break
        return np.array(out) if out else np.zeros((0, self.m))

    def polar_direction_in(self, W, rng, tol=1e-9):
        """eta in span(W rows) with <eta, v> <= 0 on the whole cone, found by a
        cutting-plane loop over sampled rays; None if no such direction.

        eta is forced orthogonal to the lineality space (necessary: +-v in the
        cone); strict negativity is requested only on the non-lineal ray parts.
        """
        W = mgs(np.atleast_2d(np.asarray(W, float)))
        if not W.shape[0]:
            return None
        L = self.lineality_rows()
        w = W.shape[0]
        A_eq = L @ W.T if L.shape[0] else None  # <W^T c, l> = 0 rows
        rays = []
        for r in self.sample_members(rng, max(8, 2 * self.m)):
            r_perp = r - (L @ r) @ L if L.shape[0] else r
            if np.linalg.norm(r_perp) > 1e-9:
                rays.append(r)
        for _ in range(25):
            if rays:
                R = np.array(rays)
                Rp = R - (R @ L.T) @ L if L.shape[0] else R
                G = R @ W.T
                A_ub = np.hstack([G, np.linalg.norm(Rp, axis=1, keepdims=True)])
                box = np.hstack([np.vstack([np.eye(w), -np.eye(w)]), np.zeros((2 * w, 1))])
                A_ub = np.vstack([A_ub, box])
                b_ub = np.concatenate([np.zeros(len(rays)), np.ones(2 * w)])
                obj = np.zeros(w + 1)
                obj[-1] = 1.0
                eq = np.hstack([A_eq, np.zeros((A_eq.shape[0], 1))]) if A_eq is not None and A_eq.shape[0] else None
                res = solve_lp(obj, A_ub=A_ub, b_ub=b_ub,
                               A_eq=eq, b_eq=np.zeros(eq.shape[0]) if eq is not None else None,
                               maximize=True)
                if not res.optimal or res.value <= tol:
                    c = self._polar_fallback(W, A_eq)
                    if c is None:
                        return None
                else:
                    c = res.x[:w]
            else:
                c = self._polar_fallback(W, A_eq)
                if c is None:
                    return None
            eta = c @ W
            nv = np.linalg.norm(eta)
            if nv < 1e-10:
                return None
            eta = eta / nv
            viol = self._max_over_cone(eta)
            if viol is None:
                return eta
            rays.append(viol[1])
        return None

    def _polar_fallback(self, W, A_eq):
        """A candidate coefficient vector orthogonal to the lineality rows."""
        w = W.shape[0]
        if A_eq is None or not A_eq.shape[0]:
            c = np.zeros(w)
            c[0] = 1.0
            return c
        ns = _nullspace_rows(A_eq, cols=w)
        if not ns.shape[0]:
            return None
        for cand in ns:
            eta = cand @ W
            if np.linalg.norm(eta) > 1e-10 and self._max_over_cone(eta) is None:
                return cand
        return ns[0]

    def _max_over_cone(self, eta):
        """Max <eta, v> over cone intersect box; None when ~0, else (val, v)."""
        m = self.m
        box = np.vstack([np.eye(m), -np.eye(m)])
        Aub = np.vstack([self.ineq, box]) if self.ineq.shape[0] else box
        bub = np.concatenate([np.zeros(self.ineq.shape[0]), np.ones(2 * m)])
        Aeq = self.eq if self.eq.shape[0] else None
        beq = np.zeros(self.eq.shape[0]) if self.eq.shape[0] else None
        res = solve_lp(eta, A_ub=Aub, b_ub=bub, A_eq=Aeq, b_eq=beq, maximize=True)
        if res.optimal and res.value > 1e-7:
            return res.value, res.x / max(np.linalg.norm(res.x), 1e-12)
        return None


def _nullspace_rows(M, cols=None, tol=1e-9):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    cols = M.shape[1] if cols is None else cols
    if not M.shape[0]:
        return np.eye(cols)
    _, s, vh = np.linalg.svd(M)
    rank = int(np.sum(s > tol * max(M.shape) * (s[0] if s.size else 1.0)))
    return vh[rank:]


def _normcombo_projection(phi, qu, qg):
    """Exact minimizer of |u - qu|^2 + max(phi(u) - qg, 0)^2 for piecewise
    linear phi(u) = sum_i c_i |<w_i, u>|.

    Enumerates the pieces of phi: a subset Z of functionals pinned to zero
    and a sign pattern on the rest make phi affine, so the restricted problem
    has a closed form. Inconsistent candidates are harmless because the true
    objective arbitrates, and the global minimizer's own piece is always in
    the enumeration.
    """
    W, c = phi.vectors, phi.coefs
    T, k = phi.terms, phi.k

    def objective(u):
        r = max(float(phi.value(u)) - qg, 0.0)
        d = u - qu
        return float(d @ d) + r * r

    best_u = qu.copy()
    best_f = objective(best_u)
    for zmask in range(2 ** T):
        pinned = [i for i in range(T) if zmask >> i & 1]
        B = _nullspace_rows(W[pinned]) if pinned else np.eye(k)
        rest = [i for i in range(T) if not (zmask >> i & 1)]
        if not B.shape[0]:
            cand = np.zeros(k)
            fc = objective(cand)
            if fc < best_f:
                best_u, best_f = cand, fc
            continue
        yq = B @ qu
        cand = B.T @ yq  # residual-inactive case: plain subspace projection
        fc = objective(cand)
        if fc < best_f:
            best_u, best_f = cand, fc
        for smask in range(2 ** len(rest)):
            signs = np.array([1.0 if smask >> j & 1 else -1.0
                              for j in range(len(rest))])
            a = (signs * c[rest]) @ W[rest] if rest else np.zeros(k)
            at = B @ a
            na2 = float(at @ at)
            if na2 <= 1e-300:
                continue
            r0 = float(at @ yq) - qg
            cands = [B.T @ (yq - (r0 / na2) * at)]  # pinned to phi(u) = qg
            if r0 > 0:
                cands.append(B.T @ (yq - (r0 / (1.0 + na2)) * at))
            for cand in cands:
                fc = objective(cand)
                if fc < best_f:
                    best_u, best_f = cand, fc
    return best_u


def _fraction_nullspace(A):
    """Exact rational nullspace basis rows of a float/int matrix."""
    rows = [[Fraction(v) for v in row] for row in np.atleast_2d(A).tolist()]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [v / rows[r][c] for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append([float(x) for x in v])
    out = np.array(basis) if basis else np.zeros((0, ncols))
    return mgs(out) if out.shape[0] else out


class ConvexSet:
    """Base class; subclasses fill in the variant-specific pieces."""

    json_type = "abstract"
    is_c1_boundary = False
    is_degenerate = False

    def __init__(self, m):
        self.m = int(m)
        self._cone = None

    # --- variant API -----------------------------------------------------
    def _violation(self, x):
        raise NotImplementedError

    def _build_cone(self) -> RecessionCone:
        raise NotImplementedError

    def support(self, c) -> SupportResult:
        raise NotImplementedError

    def nearest_boundary(self, q):
        raise NotImplementedError

    def sample_boundary(self, rng, count, window):
        raise NotImplementedError

    def boundary_gradient(self, p):
        raise UnsupportedVariant(f"{self.json_type} has no C1 boundary gradient")

    def slice_point(self, S: AffineSubspaceR):
        raise UnsupportedVariant(f"{self.json_type} has no affine-slice solver")

    def interior_point(self):
        return None

    def to_jsonable(self):
        raise NotImplementedError

    # --- shared ----------------------------------------------------------
    def contains(self, x, tol=DEFAULT_TOL):
        v = self._violation(np.asarray(x, dtype=float))
        if np.ndim(v) == 0:
            return bool(v <= tol)
        return v <= tol

    def recession_cone(self):
        if self._cone is None:
            self._cone = self._build_cone()
        return self._cone

    def recession_member(self, v, tol=DEFAULT_TOL):
        v = np.asarray(v, dtype=float)
        if abs(np.linalg.norm(v) - 1.0) > 1e-6:
            raise ValueError("direction must be a unit vector")
        return self.recession_cone().member(v, tol=tol)

    def lineality(self):
        return self.recession_cone().lineality_rows()

    def lineality_exact(self):
        """(rows, exact_flag); exact only for rational polyhedral data."""
        return self.lineality(), False

    def complex_n(self):
        if self.m % 2:
            raise UnsupportedVariant("odd ambient dimension has no complex structure")
        return self.m // 2

    def sample_exterior(self, rng, count, window):
        out = []
        for _ in range(60 * count):
            x = rng.uniform(-window, window, size=self.m)
            if self._violation(x) > 1e-7:
                out.append(x)
            if len(out) >= count:
                break
        return np.array(out) if out else np.zeros((0, self.m))


class HPolyhedron(ConvexSet):
    """{x : A x <= b}; rows stored normalized, original data kept for exact work."""

    json_type = "polyhedron"

    def __init__(self, A, b):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        if A.shape[0] != b.shape[0]:
            raise DimensionMismatch("one offset per inequality row")
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms < 1e-12):
            raise ValueError("zero rows not allowed")
        super().__init__(A.shape[1])
        self.A_raw, self.b_raw = A, b
        self.A = A / norms[:, None]
        self.b = b / norms
        if feasible_point(A_ub=self.A, b_ub=self.b) is None:
            raise InfeasiblePolyhedron("no point satisfies the system")
        self._cheb = {}

    @property
    def is_c1_boundary(self):
        return self.A.shape[0] == 1

    def _violation(self, x):
        return np.max(x @ self.A.T - self.b, axis=-1)

    def _build_cone(self):
        return RecessionCone(self.m, ineq=self.A)

    def lineality_exact(self):
        rows = _fraction_nullspace(self.A_raw)
        return rows, True

    def support(self, c):
        res = solve_lp(np.asarray(c, float), A_ub=self.A, b_ub=self.b, maximize=True)
        if res.status == "unbounded":
            return SupportResult(np.inf, None)
        if not res.optimal:
            return SupportResult(np.inf, None)
        return SupportResult(float(res.value), res.x)

    def nearest_boundary(self, q, max_sweeps=10000):
        q = np.asarray(q, dtype=float)
        if self.contains(q):
            raise PointInsideSet("q already lies in the set")
        # Dykstra's alternating projections onto the halfspaces
        x = q.copy()
        corr = np.zeros((self.A.shape[0], self.m))
        for _ in range(max_sweeps):
            prev = x.copy()
            for i in range(self.A.shape[0]):
                y = x + corr[i]
                resid = self.A[i] @ y - self.b[i]
                xnew = y - max(resid, 0.0) * self.A[i]
                corr[i] = y - xnew
                x = xnew
            if np.linalg.norm(x - prev) < 1e-13 * (1.0 + np.linalg.norm(x)):
                break
        else:
            raise ProjectionDidNotConverge("Dykstra sweep budget exhausted")
        return x

    def chebyshev(self, window=100.0):
        key = float(window)
        if key not in self._cheb:
            m = self.m
            box = np.vstack([np.eye(m), -np.eye(m)])
            A = np.vstack([self.A, box])
            b = np.concatenate([self.b, np.full(2 * m, window)])
            rows = np.hstack([A, np.ones((A.shape[0], 1))])
            obj = np.zeros(m + 1)
            obj[-1] = 1.0
            res = solve_lp(obj, A_ub=rows, b_ub=b, maximize=True)
            if not res.optimal:
                raise InfeasiblePolyhedron("no interior box point")
            self._cheb[key] = (res.x[:m], float(res.value))
        return self._cheb[key]

    @property
    def is_degenerate(self):
        try:
            _, t = self.chebyshev()
        except InfeasiblePolyhedron:
            return True
        return t <= 1e-10

    def interior_point(self):
        x, t = self.chebyshev()
        return x if t > 1e-10 else None

    def _vertices(self, rng, count, window):
        m = self.m
        box = np.vstack([np.eye(m), -np.eye(m)])
        A = np.vstack([self.A, box])
        b = np.concatenate([self.b, np.full(2 * m, window)])
        verts = []
        for _ in range(count):
            obj = rng.normal(size=m)
            res = solve_lp(obj, A_ub=A, b_ub=b, maximize=True)
            if res.optimal:
                verts.append(res.x)
        return verts

    def sample_boundary(self, rng, count, window):
        if self.is_degenerate:
            verts = self._vertices(rng, max(8, count // 4), window)
            if not verts:
                return np.zeros((0, self.m))
            V = np.array(verts)
            w = rng.uniform(size=(count, V.shape[0]))
            w /= w.sum(axis=1, keepdims=True)
            return w @ V
        x0, _ = self.chebyshev(window)
        slack = self.b - self.A @ x0
        out = []
        for _ in range(40 * count):
            d = rng.normal(size=self.m)
            d /= np.linalg.norm(d)
            Ad = self.A @ d
            rising = Ad > 1e-12
            if not np.any(rising):
                continue  # recession direction; resample
            t = float(np.min(slack[rising] / Ad[rising]))
            out.append(x0 + t * d)
            if len(out) >= count:
                break
        return np.array(out) if out else np.zeros((0, self.m))

    def boundary_gradient(self, p):
        resid = self.A @ np.asarray(p, float) - self.b
        active = np.where(np.abs(resid) <= 1e-7 * (1.0 + np.abs(self.b)))[0]
        if active.shape[0] != 1:
            raise UnsupportedVariant("boundary point is on an edge or corner")
        return self.A[active[0]].copy()

    def slice_point(self, S):
        D = S.directions
        if not D.shape[0]:
            return S.base.copy() if self.contains(S.base, tol=1e-8) else None
        A = self.A @ D.T
        b = self.b - self.A @ S.base
        keep = np.linalg.norm(A, axis=1) > 1e-12
        if np.any(~keep) and np.any(b[~keep] < -1e-9):
            return None
        if not np.any(keep):
            return S.base.copy()
        alpha = feasible_point(A_ub=A[keep], b_ub=b[keep])
        if alpha is None:
            return None
        return S.base + alpha @ D

    def to_jsonable(self):
        return {"type": "polyhedron", "A": self.A_raw.tolist(), "b": self.b_raw.tolist()}


class QuadricBall(ConvexSet):
    json_type = "ball"
    is_c1_boundary = True

    def __init__(self, center, radius):
        center = np.asarray(center, dtype=float)
        super().__init__(center.shape[0])
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.center, self.radius = center, float(radius)

    def _violation(self, x):
        return np.linalg.norm(x - self.center, axis=-1) - self.radius

    def _build_cone(self):
        return RecessionCone(self.m, eq=np.eye(self.m))

    def support(self, c):
        c = np.asarray(c, dtype=float)
        nc = np.linalg.norm(c)
        if nc < 1e-14:
            return SupportResult(0.0, self.center.copy())
        return SupportResult(float(c @ self.center + self.radius * nc),
                             self.center + self.radius * c / nc)

    def nearest_boundary(self, q):
        q = np.asarray(q, dtype=float)
        if self.contains(q):
            raise PointInsideSet("q already lies in the set")
        d = q - self.center
        return self.center + self.radius * d / np.linalg.norm(d)

    def sample_boundary(self, rng, count, window):
        d = rng.normal(size=(count, self.m))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        return self.center + self.radius * d

    def boundary_gradient(self, p):
        return 2.0 * (np.asarray(p, float) - self.center)

    def interior_point(self):
        return self.center.copy()

    def slice_point(self, S):
        d = self.center - S.base
        proj = S.base + (S.directions @ d) @ S.directions if S.dim else S.base
        if np.linalg.norm(proj - self.center) <= self.radius + 1e-12:
            return proj
        return None

    def to_jsonable(self):
        return {"type": "ball", "center": self.center.tolist(), "radius": self.radius}


class Epigraph(ConvexSet):
    """{x : x[graph] >= phi(x[base])} with optional free coordinates."""

    json_type = "epigraph"

    def __init__(self, phi, m, graph_index, base_indices, free_indices=(),
                 meta=None, convexity_rng=None):
        super().__init__(m)
        self.phi = phi
        self.gi = int(graph_index)
        self.bi = np.asarray(base_indices, dtype=int)
        self.fi = np.asarray(free_indices, dtype=int)
        if phi.k != self.bi.shape[0]:
            raise DimensionMismatch("phi arity must match base coordinates")
        claimed = set(self.bi.tolist()) | set(self.fi.tolist()) | {self.gi}
        if len(claimed) != m or claimed != set(range(m)):
            raise DimensionMismatch("indices must partition the ambient axes")
        self.meta = dict(meta or {})
        rng = convexity_rng or np.random.default_rng(20240801)
        if not midpoint_convexity_check(phi, rng):
            raise ValueError("phi failed the midpoint convexity spot-check")

    @property
    def is_c1_boundary(self):
        return self.phi.is_c1

    def _smooth_phi(self):
        if self.phi.is_c1:
            return self.phi
        if isinstance(self.phi, NormCombo):
            return self.phi.smoothed(1e-9)
        return None

    def _violation(self, x):
        x = np.asarray(x, dtype=float)
        return self.phi.value(x[..., self.bi]) - x[..., self.gi]

    def assemble(self, u, g, free=None):
        x = np.zeros(self.m)
        x[self.bi] = u
        x[self.gi] = g
        if self.fi.shape[0]:
            x[self.fi] = 0.0 if free is None else free
        return x

    def _build_cone(self):
        eq_u, ineq_u = self.phi.recession_rows()
        eq = np.zeros((eq_u.shape[0], self.m))
        if eq_u.shape[0]:
            eq[:, self.bi] = eq_u
        ineq = np.zeros((ineq_u.shape[0], self.m))
        if ineq_u.shape[0]:
            ineq[:, self.bi] = ineq_u[:, :-1]
            ineq[:, self.gi] = ineq_u[:, -1]
        return RecessionCone(self.m, eq=eq, ineq=ineq)

    def support(self, c):
        c = np.asarray(c, dtype=float)
        cb, cg = c[self.bi], c[self.gi]
        cf = c[self.fi] if self.fi.shape[0] else np.zeros(0)
        if cf.shape[0] and np.max(np.abs(cf)) > 1e-12:
            return SupportResult(np.inf, None)
        if cg > 1e-12:
            return SupportResult(np.inf, None)
        if abs(cg) <= 1e-12:
            if np.max(np.abs(cb), initial=0.0) <= 1e-12:
                p = self.assemble(np.zeros(self.phi.k), self.phi.value(np.zeros(self.phi.k)))
                return SupportResult(float(c @ p), p)
            return SupportResult(np.inf, None)
        val, ustar = self.phi.conjugate_attain(cb / (-cg))
        if not np.isfinite(val):
            return SupportResult(np.inf, None)
        p = self.assemble(ustar, float(self.phi.value(ustar)))
        return SupportResult(float(c @ p), p)

    def nearest_boundary(self, q, max_iter=300):
        q = np.asarray(q, dtype=float)
        if self.contains(q):
            raise PointInsideSet("q already lies in the set")
        if isinstance(self.phi, NormCombo) and self.phi.terms <= 8:
            u = _normcombo_projection(self.phi, q[self.bi], float(q[self.gi]))
            free = q[self.fi] if self.fi.shape[0] else None
            return self.assemble(u, float(self.phi.value(u)), free)
        phi = self._smooth_phi()
        if phi is None:
            raise UnsupportedVariant("no smooth surrogate for this phi")
        qu, qg = q[self.bi], q[self.gi]

        def fval(u):
            r = max(phi.value(u) - qg, 0.0)
            return float(np.dot(u - qu, u - qu) + r * r)

        u = qu.copy()
        f = fval(u)
        scale = 1.0 + np.linalg.norm(q)
        stalled = 0
        converged = False
        for _ in range(max_iter):
            r = max(phi.value(u) - qg, 0.0)
            grad = 2.0 * (u - qu) + 2.0 * r * phi.grad(u)
            gn = np.linalg.norm(grad)
            if gn <= 1e-10 * scale:
                converged = True
                break
            step = 1.0
            # Newton direction when curvature data is available
            H = 2.0 * np.eye(self.phi.k)
            if r > 0:
                gphi = phi.grad(u)
                H = H + 2.0 * (np.outer(gphi, gphi) + r * phi.hess(u))
            try:
                d = -np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                d = -grad
            if d @ grad > -1e-16 * gn * np.linalg.norm(d):
                d = -grad
            improved = False
            for _ in range(40):
                cand = u + step * d
                fc = fval(cand)
                if fc < f - 1e-12 * abs(f):
                    meaningful = f - fc > 1e-10 * (1.0 + abs(f))
                    u, f, improved = cand, fc, True
                    stalled = 0 if meaningful else stalled + 1
                    break
                step *= 0.5
            if not improved or stalled >= 5:
                converged = True
                break
        if not converged and gn > 1e-5 * scale:
            raise ProjectionDidNotConverge("descent budget exhausted")
        free = q[self.fi] if self.fi.shape[0] else None
        return self.assemble(u, float(self.phi.value(u)), free)

    def sample_boundary(self, rng, count, window):
        u = rng.normal(size=(count, self.phi.k))
        u /= np.maximum(np.linalg.norm(u, axis=1, keepdims=True), 1e-12)
        u *= rng.uniform(0.0, window, size=(count, 1)) ** (1.0 / max(self.phi.k, 1))
        out = np.zeros((count, self.m))
        out[:, self.bi] = u
        out[:, self.gi] = self.phi.value(u)
        if self.fi.shape[0]:
            out[:, self.fi] = rng.uniform(-window, window, size=(count, self.fi.shape[0]))
        return out

    def boundary_gradient(self, p):
        if not self.phi.is_c1:
            raise UnsupportedVariant("phi is not C1")
        g = np.zeros(self.m)
        g[self.bi] = self.phi.grad(np.asarray(p, float)[self.bi])
        g[self.gi] = -1.0
        return g

    def interior_point(self):
        u0 = np.zeros(self.phi.k)
        return self.assemble(u0, float(self.phi.value(u0)) + 1.0)

    def slice_point(self, S):
        D = S.directions
        k = D.shape[0]
        base_u = S.base[self.bi]
        base_g = S.base[self.gi]
        Du = D[:, self.bi] if k else np.zeros((0, self.bi.shape[0]))
        Dg = D[:, self.gi] if k else np.zeros(0)
        if isinstance(self.phi, Quadratic):
            # minimize alpha^T M alpha + w.alpha + c0  (phi(u(alpha)) - g(alpha))
            Q, l = self.phi.Q, self.phi.l
            M = Du @ Q @ Du.T
            w = 2.0 * Du @ Q @ base_u + Du @ l - Dg
            c0 = float(self.phi.value(base_u)) - base_g
            alpha = None
            if k:
                sol, *_ = np.linalg.lstsq(2.0 * M, -w, rcond=None)
                if np.linalg.norm(2.0 * M @ sol + w) <= 1e-8 * (1.0 + np.linalg.norm(w)):
                    alpha = sol
                else:
                    ns = _nullspace_rows(M, cols=k)
                    dirs = [v for v in ns if abs(v @ w) > 1e-10]
                    if dirs:
                        v = dirs[0] * (-np.sign(dirs[0] @ w))
                        t = (abs(c0) + 1.0) / max(abs(v @ w), 1e-12)
                        alpha = t * v
                    else:
                        alpha = np.zeros(k)
            else:
                alpha = np.zeros(0)
            val = float(alpha @ M @ alpha + w @ alpha + c0) if k else c0
            if val <= 1e-9:
                x = S.base + (alpha @ D if k else 0.0)
                return x
            return None
        if isinstance(self.phi, MaxAffine):
            A, b = self.phi.A, self.phi.b
            rows = A @ Du.T - np.outer(np.ones(A.shape[0]), Dg) if k else np.zeros((A.shape[0], 0))
            rhs = base_g - (A @ base_u + b)
            alpha = feasible_point(A_ub=rows, b_ub=rhs)
            if alpha is None:
                return None
            return S.base + (alpha @ D if k else 0.0)
        if isinstance(self.phi, NormCombo):
            T = self.phi.terms
            Wv, coefs = self.phi.vectors, self.phi.coefs
            # vars: alpha (k), s (T)
            rows, rhs = [], []
            for i in range(T):
                wu = Wv[i] @ Du.T if k else np.zeros(0)
                w0 = float(Wv[i] @ base_u)
                rows.append(np.concatenate([wu, -_unit(T, i)]))
                rhs.append(-w0)
                rows.append(np.concatenate([-wu, -_unit(T, i)]))
                rhs.append(w0)
            rows.append(np.concatenate([-Dg if k else np.zeros(0), coefs]))
            rhs.append(base_g)
            alpha = feasible_point(A_ub=np.array(rows), b_ub=np.array(rhs))
            if alpha is None:
                return None
            a = alpha[:k]
            return S.base + (a @ D if k else 0.0)
        raise UnsupportedVariant("no slice solver for this phi")

    def to_jsonable(self):
        if self.meta:
            return dict(self.meta)
        return {"type": "epigraph", "m": self.m, "graph_index": self.gi,
                "base_indices": self.bi.tolist(), "free_indices": self.fi.tolist(),
                "phi": self.phi.to_jsonable()}


def _unit(n, i):
    v = np.zeros(n)
    v[i] = 1.0
    return v


class SiegelClosure(Epigraph):
    """Closure of the model domain {Im z_n > |z'|^2} in C^n, realified."""

    json_type = "siegel"

    def __init__(self, n):
        if n < 2:
            raise ValueError("needs n >= 2")
        self.n = int(n)
        m = 2 * n
        base = list(range(0, 2 * n - 2))
        super().__init__(Quadratic(np.eye(2 * n - 2)), m,
                         graph_index=2 * n - 1, base_indices=base,
                         free_indices=[2 * n - 2],
                         meta={"type": "siegel", "n": int(n)})


class Tube(ConvexSet):
    """base set in the base coordinates, every fiber coordinate free."""

    json_type = "tube"

    def __init__(self, base: ConvexSet, base_indices, fiber_indices):
        self.base = base
        self.bi = np.asarray(base_indices, dtype=int)
        self.fi = np.asarray(fiber_indices, dtype=int)
        m = self.bi.shape[0] + self.fi.shape[0]
        if set(self.bi.tolist()) | set(self.fi.tolist()) != set(range(m)):
            raise DimensionMismatch("indices must partition the ambient axes")
        if base.m != self.bi.shape[0]:
            raise DimensionMismatch("base set dimension mismatch")
        super().__init__(m)

    @property
    def is_c1_boundary(self):
        return self.base.is_c1_boundary

    @property
    def is_degenerate(self):
        return self.base.is_degenerate

    def _violation(self, x):
        return self.base._violation(np.asarray(x, dtype=float)[..., self.bi])

    def _build_cone(self):
        bc = self.base.recession_cone()
        eq = np.zeros((bc.eq.shape[0], self.m))
        if bc.eq.shape[0]:
            eq[:, self.bi] = bc.eq
        ineq = np.zeros((bc.ineq.shape[0], self.m))
        if bc.ineq.shape[0]:
            ineq[:, self.bi] = bc.ineq
        return RecessionCone(self.m, eq=eq, ineq=ineq)

    def _lift(self, xb, xf):
        x = np.zeros(self.m)
        x[self.bi] = xb
        x[self.fi] = xf
        return x

    def support(self, c):
        c = np.asarray(c, dtype=float)
        if self.fi.shape[0] and np.max(np.abs(c[self.fi])) > 1e-12:
            return SupportResult(np.inf, None)
        res = self.base.support(c[self.bi])
        if not res.finite:
            return res
        pt = self._lift(res.point, np.zeros(self.fi.shape[0])) if res.point is not None else None
        return SupportResult(res.value, pt)

    def nearest_boundary(self, q):
        q = np.asarray(q, dtype=float)
        if self.contains(q):
            raise PointInsideSet("q already lies in the set")
        xb = self.base.nearest_boundary(q[self.bi])
        return self._lift(xb, q[self.fi])

    def sample_boundary(self, rng, count, window):
        xb = self.base.sample_boundary(rng, count, window)
        out = np.zeros((xb.shape[0], self.m))
        out[:, self.bi] = xb
        out[:, self.fi] = rng.uniform(-window, window, size=(xb.shape[0], self.fi.shape[0]))
        return out

    def boundary_gradient(self, p):
        g = np.zeros(self.m)
        g[self.bi] = self.base.boundary_gradient(np.asarray(p, float)[self.bi])
        return g

    def interior_point(self):
        ib = self.base.interior_point()
        if ib is None:
            return None
        return self._lift(ib, np.zeros(self.fi.shape[0]))

    def slice_point(self, S):
        D = S.directions
        pb = S.base[self.bi]
        Db = mgs(D[:, self.bi]) if D.shape[0] else np.zeros((0, self.bi.shape[0]))
        SB = AffineSubspaceR(pb, Db)
        y = self.base.slice_point(SB)
        if y is None:
            return None
        if not D.shape[0]:
            return S.base.copy()
        M = D[:, self.bi].T  # (mb, k)
        alpha, *_ = np.linalg.lstsq(M, y - pb, rcond=None)
        x = S.base + alpha @ D
        if not self.contains(x, tol=1e-7):
            return None
        return x

    def to_jsonable(self):
        return {"type": "tube", "base": self.base.to_jsonable(),
                "base_indices": self.bi.tolist(), "fiber_indices": self.fi.tolist()}


class Dilation(ConvexSet):
    """center + factor * (base - center), factor >= 1."""

    json_type = "dilation"

    def __init__(self, base: ConvexSet, factor, center=None):
        super().__init__(base.m)
        if factor < 1.0:
            raise ValueError("factor must be >= 1")
        self.base = base
        self.factor = float(factor)
        self.center = np.zeros(base.m) if center is None else np.asarray(center, float)
        if not base.contains(self.center, tol=1e-7):
            raise ValueError("dilation center must lie in the base set")

    @property
    def is_c1_boundary(self):
        return self.base.is_c1_boundary

    @property
    def is_degenerate(self):
        return self.base.is_degenerate

    def pull(self, x):
        return self.center + (np.asarray(x, float) - self.center) / self.factor

    def push(self, x):
        return self.center + self.factor * (np.asarray(x, float) - self.center)

    def _violation(self, x):
        x = np.asarray(x, dtype=float)
        return self.base._violation(self.center + (x - self.center) / self.factor)

    def _build_cone(self):
        bc = self.base.recession_cone()
        return RecessionCone(self.m, eq=bc.eq, ineq=bc.ineq)

    def support(self, c):
        c = np.asarray(c, dtype=float)
        res = self.base.support(c)
        if not res.finite:
            return res
        val = float(c @ self.center + self.factor * (res.value - c @ self.center))
        pt = self.push(res.point) if res.point is not None else None
        return SupportResult(val, pt)

    def nearest_boundary(self, q):
        if self.contains(q):
            raise PointInsideSet("q already lies in the set")
        return self.push(self.base.nearest_boundary(self.pull(q)))

    def sample_boundary(self, rng, count, window):
        xb = self.base.sample_boundary(rng, count, max(window / self.factor, 1.0))
        return np.array([self.push(x) for x in xb]) if xb.shape[0] else xb

    def boundary_gradient(self, p):
        return self.base.boundary_gradient(self.pull(p))

    def interior_point(self):
        ib = self.base.interior_point()
        return None if ib is None else self.push(ib)

    def slice_point(self, S):
        SP = AffineSubspaceR(self.pull(S.base), S.directions)
        y = self.base.slice_point(SP)
        return None if y is None else self.push(y)

    def to_jsonable(self):
        return {"type": "dilation", "base": self.base.to_jsonable(),
                "factor": self.factor, "center": self.center.tolist()}


def normcombo_cone_set(n, re_coefs, im_coefs, last_re_coef):
    """Graph-form epigraph of an irreducible weighted-absolute-value family:

    {Im z_n >= last_re_coef * |Re z_n| + sum_j (a_j |Re z_j| + b_j |Im z_j|)}.
    """
    n = int(n)
    re_coefs = np.asarray(re_coefs, dtype=float)
    im_coefs = np.asarray(im_coefs, dtype=float)
    if re_coefs.shape[0] != n - 1 or im_coefs.shape[0] != n - 1:
        raise DimensionMismatch("need n-1 coefficients per part")
    k = 2 * n - 1
    vecs, coefs = [], []
    for j in range(n - 1):
        vecs.append(_unit(k, 2 * j))
        coefs.append(re_coefs[j])
        vecs.append(_unit(k, 2 * j + 1))
        coefs.append(im_coefs[j])
    vecs.append(_unit(k, 2 * n - 2))
    coefs.append(float(last_re_coef))
    phi = NormCombo(coefs, vecs)
    meta = {"type": "normcombo", "n": n, "a": re_coefs.tolist(),
            "b": im_coefs.tolist(), "c": float(last_re_coef)}
    return Epigraph(phi, 2 * n, graph_index=2 * n - 1,
                    base_indices=list(range(2 * n - 1)), free_indices=[], meta=meta)


# ----------------------------------------------------------------------------
# module-level operation surface

def contains(convex_set, x, tol=DEFAULT_TOL):
    return convex_set.contains(x, tol=tol)


def recession_member(convex_set, v, tol=DEFAULT_TOL):
    return convex_set.recession_member(v, tol=tol)


def lineality(convex_set):
    return convex_set.lineality()


def support_sup(convex_set, c):
    return convex_set.support(c).value


def nearest_boundary(convex_set, q):
    return convex_set.nearest_boundary(q)


def halfline_direction_in(convex_set, S: AffineSubspaceR):
    """Unit v with {x0 + t v : t >= 0} inside set ∩ S for some x0, else None."""
    S = S.to_real()
    v = convex_set.recession_cone().intersect_subspace(S.directions)
    if v is None:
        return None
    if convex_set.slice_point(S) is None:
        return None
    return v
