"""Sampled certification that the complement of a closed convex set is Oka-like.

The certifier never claims the analytic conclusion itself; it verifies
sufficient geometric hypotheses (line-freeness, tangent-slice behavior,
stable separating hyperplanes) on sampled data and reports one of four
verdicts per check:

* ``certified-exact``   -- decided by exact algebra (rational/structural),
* ``verified-sampled``  -- every sampled instance satisfied the hypothesis,
* ``refuted``           -- an explicit witness violates the hypothesis,
* ``inconclusive``      -- the check does not apply or sampling was blocked.

Checks are grouped into routes; the overall verdict is the best outcome over
routes (a set can fail one route and still verify through another, so a
refuted check forces overall "refuted" only when no route verifies).

Complex hyperplanes are stored in bilinear form {z : sum_j c_j z_j = beta}
with Hermitian-unit, phase-canonical coefficients.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import (
    PathBlocked,
    PointInsideSet,
    ProjectionDidNotConverge,
    SliceUnbounded,
    UnsupportedVariant,
    ZeroGradient,
)
from .geometry import (
    AffineSubspaceC,
    adapt_frame,
    complex_gradient_from_real,
    complex_tangent,
    complexify,
    realify,
)
from .sets import ConvexSet
from .stability import (
    SupportingTranslate,
    TubeFound,
    halfline_in_intersection,
    is_stable,
    tube_or_support,
)

CERTIFIED = "certified-exact"
VERIFIED = "verified-sampled"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

_CHECK_ORDER = (
    "no_affine_line",
    "tangent_slice_halflines",
    "weak_projective",
    "line_lift",
    "connectivity",
    "chart_compact",
)

_ANCHORS = {
    "no_affine_line": "no-affine-line",
    "tangent_slice_halflines": "tangent-slice-halflines",
    "weak_projective": "exterior-stable-hyperplane",
    "line_lift": "line-lifts-to-hyperplane",
    "connectivity": "hyperplane-graph-connectivity",
    "chart_compact": "cone-chart-compactness",
    "normcombo_smoothing": "irreducible-normcombo-smoothing",
}


@dataclass(frozen=True)
class SamplingPlan:
    """Deterministic sampling budget shared by all checks."""

    seed: int = 42
    boundary: int = 500
    exterior: int = 200
    lines: int = 100
    hyperplanes: int = 60
    path_steps: int = 64
    window: float = 10.0
    tol: float = 1e-9

    def __post_init__(self):
        for name in ("boundary", "exterior", "lines", "hyperplanes", "path_steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.window <= 0 or self.tol <= 0:
            raise ValueError("window and tol must be positive")

    def rng(self, label: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(label.encode("ascii"))])

    def scaled(self, samples: int) -> "SamplingPlan":
        """Rescale every per-check budget proportionally to ``samples`` boundary points."""
        f = samples / 500.0
        return SamplingPlan(
            seed=self.seed,
            boundary=max(1, samples),
            exterior=max(1, int(round(200 * f))),
            lines=max(1, int(round(100 * f))),
            hyperplanes=max(2, int(round(60 * f))),
            path_steps=self.path_steps,
            window=self.window,
            tol=self.tol,
        )

    def to_jsonable(self):
        return {
            "seed": self.seed,
            "boundary": self.boundary,
            "exterior": self.exterior,
            "lines": self.lines,
            "hyperplanes": self.hyperplanes,
            "path_steps": self.path_steps,
            "window": self.window,
            "tol": self.tol,
        }


class Hyperplane:
    """Complex affine hyperplane {z : coeffs . z = offset} (bilinear pairing)."""

    __slots__ = ("coeffs", "offset")

    def __init__(self, coeffs, offset):
        c = np.asarray(coeffs, dtype=complex).ravel()
        norm = float(np.sqrt(np.sum(np.abs(c) ** 2)))
        if norm < 1e-14:
            raise ValueError("hyperplane coefficients are zero")
        c = c / norm
        offset = complex(offset) / norm
        idx = int(np.argmax(np.abs(c) > 1e-12))
        phase = np.exp(-1j * np.angle(c[idx]))
        self.coeffs = c * phase
        self.offset = offset * phase

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def from_real_normal(cls, point_real, normal_real):
        """The complex tangent hyperplane, through ``point``, of the real
        hyperplane with outward normal ``normal`` at that point."""
        nu = np.asarray(normal_real, dtype=float)
        if np.linalg.norm(nu) < 1e-13:
            raise ZeroGradient("normal direction vanishes")
        c = np.conj(complexify(nu / np.linalg.norm(nu)))
        z = complexify(np.asarray(point_real, dtype=float))
        return cls(c, np.dot(c, z))

    def eval(self, z) -> complex:
        return complex(np.dot(self.coeffs, np.asarray(z, dtype=complex)) - self.offset)

    def base_point(self) -> np.ndarray:
        c = self.coeffs
        return self.offset * np.conj(c) / float(np.sum(np.abs(c) ** 2))

    def subspace(self) -> AffineSubspaceC:
        _, _, vh = np.linalg.svd(self.coeffs[None, :])
        return AffineSubspaceC(base=self.base_point(), directions=np.conj(vh[1:]))

    def real_eta(self, theta: float) -> np.ndarray:
        """Real covector of x -> Re(e^{-i theta} (coeffs . z))."""
        alpha = np.exp(-1j * theta) * self.coeffs
        eta = np.empty(2 * self.n)
        eta[0::2] = alpha.real
        eta[1::2] = -alpha.imag
        return eta

    def translated(self, delta_offset: complex) -> "Hyperplane":
        return Hyperplane(self.coeffs, self.offset + delta_offset)

    def key(self):
        parts = [round(float(v), 6) for pair in
                 ((z.real, z.imag) for z in self.coeffs) for v in pair]
        parts += [round(self.offset.real, 6), round(self.offset.imag, 6)]
        return tuple(parts)

    def to_jsonable(self):
        return {
            "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs],
            "offset": [float(self.offset.real), float(self.offset.imag)],
        }

    @classmethod
    def from_jsonable(cls, data):
        c = np.array([complex(re, im) for re, im in data["coeffs"]])
        beta = complex(data["offset"][0], data["offset"][1])
        return cls(c, beta)


def hyperplane_disjoint(E: ConvexSet, H: Hyperplane, grid: int = 96):
    """Try to prove E and H are disjoint.

    The linear image z -> coeffs.z - offset maps E to a convex planar set;
    H misses E iff that image omits the origin, which is witnessed by a
    rotation angle theta with sup_E Re(e^{-i theta}(coeffs.z - offset)) < 0.
    Returns (True, theta, margin) on success, (False, best_theta, best_margin)
    when no separating angle was found on the candidate set.
    """
    offs = H.offset
    thetas = list(np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False))
    for a in H.coeffs:
        if abs(a) > 1e-12:
            ang = float(np.angle(a))
            thetas.extend([ang, ang + np.pi, ang + np.pi / 2, ang - np.pi / 2])
    best = (np.inf, 0.0)
    scale = 1.0 + abs(offs)
    for theta in thetas:
        eta = H.real_eta(theta)
        res = E.support(eta)
        if not res.finite:
            continue
        margin = res.value - float(np.real(np.exp(-1j * theta) * offs))
        if margin < best[0]:
            best = (margin, theta)
        if margin < -1e-10 * scale:
            return True, float(theta), float(margin)
    if not np.isfinite(best[0]):
        return False, 0.0, np.inf
    return False, float(best[1]), float(best[0])


def hyperplane_common_point(E: ConvexSet, H: Hyperplane):
    """A point of E on H, or None; used to make 'H meets E' concrete."""
    try:
        x = E.slice_point(H.subspace().to_real())
    except UnsupportedVariant:
        return None
    if x is None:
        return None
    z = complexify(x)
    if abs(H.eval(z)) > 1e-6 * (1 + np.linalg.norm(x)):
        return None
    return x


@dataclass
class CheckResult:
    name: str
    verdict: str
    witnesses: list = field(default_factory=list)
    samples: int = 0
    seed: int = 0
    tol: float = 0.0
    detail: str = ""

    @property
    def anchor(self) -> str:
        return _ANCHORS[self.name]

    @property
    def verified(self) -> bool:
        return self.verdict in (CERTIFIED, VERIFIED)

    def to_jsonable(self):
        return {
            "name": self.name,
            "anchor": self.anchor,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "samples": int(self.samples),
            "seed": int(self.seed),
            "tol": float(self.tol),
            "detail": self.detail,
        }


@dataclass
class Certificate:
    input_digest: str
    checks: List[CheckResult]
    overall: str

    def check(self, name: str) -> Optional[CheckResult]:
        for c in self.checks:
            if c.name == name:
                return c
        return None

    def to_jsonable(self):
        return {
            "input_digest": self.input_digest,
            "checks": [c.to_jsonable() for c in self.checks],
            "overall": self.overall,
        }


def _complex_dim(E: ConvexSet) -> Optional[int]:
    try:
        return E.complex_n()
    except UnsupportedVariant:
        return None


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------

def check_no_affine_line(E: ConvexSet, plan: SamplingPlan) -> CheckResult:
    """Does E contain an affine real line?  Empty lineality certifies the
    hypothesis exactly; a lineality direction is recorded as a witness but the
    verdict stays inconclusive for this route (E may verify through others)."""
    rows, exact = E.lineality_exact()
    if rows.shape[0] == 0:
        return CheckResult("no_affine_line", CERTIFIED if exact else VERIFIED,
                           samples=0, seed=plan.seed, tol=plan.tol,
                           detail="lineality space is trivial")
    witnesses = [{"kind": "line-direction", "direction": [float(t) for t in r]}
                 for r in rows]
    return CheckResult("no_affine_line", INCONCLUSIVE, witnesses=witnesses,
                       samples=0, seed=plan.seed, tol=plan.tol,
                       detail="E contains affine lines; route does not apply")


def check_tangent_slice_halflines(E: ConvexSet, plan: SamplingPlan) -> CheckResult:
    """At sampled boundary points p, the slice of E by the maximal complex
    subspace of the tangent hyperplane must not contain a halfline."""
    name = "tangent_slice_halflines"
    n = _complex_dim(E)
    if n is None or n < 2:
        return CheckResult(name, INCONCLUSIVE, seed=plan.seed, tol=plan.tol,
                           detail="ambient space is not C^n with n >= 2")
    if not E.is_c1_boundary:
        return CheckResult(name, INCONCLUSIVE, seed=plan.seed, tol=plan.tol,
                           detail="boundary is not C1; tangent data unavailable")
    rng = plan.rng("tangent")
    try:
        pts = E.sample_boundary(rng, plan.boundary, window=plan.window)
    except UnsupportedVariant as exc:
        return CheckResult(name, INCONCLUSIVE, seed=plan.seed, tol=plan.tol,
                           detail=f"boundary sampling unavailable: {exc}")
    witnesses = []
    checked = 0
    for p in pts:
        try:
            g = E.boundary_gradient(p)
            gc = complex_gradient_from_real(g)
            plane = complex_tangent(gc, complexify(p))
        except (UnsupportedVariant, ZeroGradient):
            continue
        checked += 1
        hit = halfline_in_intersection(E, plane, base_point=p)
        if hit is not None:
            x0, v = hit
            witnesses.append({
                "kind": "halfline",
                "boundary_point": [float(t) for t in p],
                "point": [float(t) for t in x0],
                "direction": [float(t) for t in v],
            })
            if len(witnesses) >= 3:
                break
    if witnesses:
        return CheckResult(name, REFUTED, witnesses=witnesses, samples=checked,
                           seed=plan.seed, tol=plan.tol,
                           detail="tangent slice contains a halfline")
    if checked == 0:
        return CheckResult(name, INCONCLUSIVE, samples=0, seed=plan.seed,
                           tol=plan.tol, detail="no usable boundary samples")
    return CheckResult(name, VERIFIED, samples=checked, seed=plan.seed,
                       tol=plan.tol, detail="no halfline in any sampled tangent slice")


def _canonical_exterior_hyperplane(E: ConvexSet, q: np.ndarray):
    """Translate of the complex tangent at the metric projection of q, through q."""
    p = E.nearest_boundary(q)
    nu = q - p
    if np.linalg.norm(nu) < 1e-12:
        return None, p
    return Hyperplane.from_real_normal(q, nu), p


def check_weak_projective(E: ConvexSet, plan: SamplingPlan) -> CheckResult:
    """Each sampled exterior point must lie on a stable complex hyperplane
    missing E; the hyperplane is constructed from the metric projection."""
    name = "weak_projective"
    n = _complex_dim(E)
    if n is None or n < 2:
        return CheckResult(name, INCONCLUSIVE, seed=plan.seed, tol=plan.tol,
                           detail="ambient space is not C^n with n >= 2")
    rng = plan.rng("projective")
    qs = E.sample_exterior(rng, plan.exterior, window=plan.window)
    if qs.shape[0] == 0:
        return CheckResult(name, INCONCLUSIVE, seed=plan.seed, tol=plan.tol,
                           detail="no exterior samples inside the window")
    witnesses = []
    verified_planes = []
    failures = []
    skipped = 0
    for q in qs:
        try:
            H, p = _canonical_exterior_hyperplane(E, q)
        except (ProjectionDidNotConverge, PointInsideSet, UnsupportedVariant, ZeroGradient):
            skipped += 1
            continue
        if H is None:
            skipped += 1
            continue
        verdict = is_stable(E, H.subspace())
        if not verdict.stable:
            failures.append({
                "kind": "unstable-hyperplane",
                "exterior_point": [float(t) for t in q],
                "hyperplane": H.to_jsonable(),
                "recession_direction": [float(t) for t in verdict.witness],
            })
            continue
        ok, theta, margin = hyperplane_disjoint(E, H)
        if not ok:
            common = hyperplane_common_point(E, H)
            entry = {
                "kind": "hyperplane-meets-set",
                "exterior_point": [float(t) for t in q],
                "hyperplane": H.to_jsonable(),
            }
            if common is not None:
                entry["common_point"] = [float(t) for t in common]
            failures.append(entry)
            continue
        verified_planes.append({
            "kind": "stable-hyperplane",
            "hyperplane": H.to_jsonable(),
            "theta": theta,
            "margin": margin,
            "aperture": verdict.aperture,
            "through": [float(t) for t in q],
        })
    checked = len(verified_planes) + len(failures)
    if failures:
        return CheckResult(name, REFUTED, witnesses=failures[:5], samples=checked,
                           seed=plan.seed, tol=plan.tol,
                           detail="projection hyperplane fails at sampled exterior point")
    if checked == 0:
        return CheckResult(name, INCONCLUSIVE, samples=0, seed=plan.seed, tol=plan.tol,
                           detail=f"all {skipped} exterior samples unusable")
    return CheckResult(name, VERIFIED, witnesses=verified_planes[:max(8, plan.hyperplanes)],
                       samples=checked, seed=plan.seed, tol=plan.tol,
                       detail="stable disjoint hyperplane through every sampled exterior point")


def check_line_lift(E: ConvexSet, plan: SamplingPlan) -> CheckResult:
    """Every sampled stable complex line must admit a parallel translate inside
    a stable complex hyperplane disjoint from (a translate off) E.

    Construction: squeeze the line against E (tube_or_support), take the
    complex tangent hyperplane at the contact point, verify it contains the
    line direction and is stable, then push it off E along the outward normal
    and re-verify disjointness.
    """
    name = "line_lift"
    n = _complex_dim(E)
    if n is None or n < 2:
        return CheckResult(name, INCONCLUSIVE, seed=plan.seed, tol=plan.tol,
                           detail="ambient space is not C^n with n >= 2")
    rng = plan.rng("lines")
    stable_lines = []
    attempts = 0
    unbounded = 0
    while len(stable_lines) < plan.lines and attempts < 10 * plan.lines:
        attempts += 1
        d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        d = d / np.linalg.norm(d)
        b = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * (plan.window / 4)
        line = AffineSubspaceC(base=b, directions=d[None, :])
        if is_stable(E, line).stable:
            stable_lines.append(line)
    if not stable_lines:
        return CheckResult(name, INCONCLUSIVE, samples=attempts, seed=plan.seed,
                           tol=plan.tol, detail="no stable lines found")
    lifted = 0
    tubes = 0
    skipped = 0
    witnesses = []
    for line in stable_lines:
        try:
            outcome = tube_or_support(E, line, rng=rng)
        except SliceUnbounded:
            unbounded += 1
            continue
        except UnsupportedVariant:
            skipped += 1
            continue
        if isinstance(outcome, TubeFound):
            tubes += 1
            continue
        q = outcome.contact
        try:
            g = E.boundary_gradient(q)
            H = Hyperplane.from_real_normal(q, g)
        except (UnsupportedVariant, ZeroGradient):
            # Fall back to the supporting covector itself (always conormal).
            try:
                H = Hyperplane.from_real_normal(q, outcome.normal)
            except ZeroGradient:
                skipped += 1
                continue
        d = line.directions[0]
        if abs(np.dot(H.coeffs, d)) > 1e-6:
            witnesses.append({
                "kind": "lift-misses-direction",
                "line_direction": _cvec(d),
                "hyperplane": H.to_jsonable(),
            })
            continue
        verdict = is_stable(E, H.subspace())
        if not verdict.stable:
            witnesses.append({
                "kind": "unstable-lift",
                "line_direction": _cvec(d),
                "hyperplane": H.to_jsonable(),
                "recession_direction": [float(t) for t in verdict.witness],
            })
            continue
        delta = 1e-3 * (1.0 + np.linalg.norm(q))
        shift = complex(np.dot(H.coeffs, complexify(outcome.normal))) * delta
        H_off = H.translated(shift)
        ok, theta, margin = hyperplane_disjoint(E, H_off)
        if not ok:
            witnesses.append({
                "kind": "lift-not-disjoint",
                "line_direction": _cvec(d),
                "hyperplane": H_off.to_jsonable(),
                "margin": margin,
            })
            continue
        lifted += 1
    checked = lifted + len(witnesses)
    if witnesses:
        return CheckResult(name, REFUTED, witnesses=witnesses[:5], samples=checked,
                           seed=plan.seed, tol=plan.tol,
                           detail="a stable line failed to lift into a stable disjoint hyperplane")
    if lifted == 0:
        return CheckResult(name, INCONCLUSIVE, samples=len(stable_lines),
                           seed=plan.seed, tol=plan.tol,
                           detail=f"no line produced a usable supporting translate "
                                  f"(tubes={tubes}, unbounded={unbounded}, skipped={skipped})")
    return CheckResult(name, VERIFIED, samples=checked, seed=plan.seed, tol=plan.tol,
                       detail=f"{lifted} stable lines lifted (tubes={tubes}, "
                              f"unbounded={unbounded})")


def _cvec(z):
    return [[float(v.real), float(v.imag)] for v in np.atleast_1d(z)]


def _collect_stable_disjoint(E, plan, rng, target, seeds=None):
    """Stable hyperplanes disjoint from E: seeded list topped up by exterior
    projections and by random conormals with support-based offsets."""
    found = []
    keys = set()

    def _push(H, theta, margin, aperture):
        k = H.key()
        if k in keys:
            return
        keys.add(k)
        found.append((H, theta, margin, aperture))

    for entry in seeds or []:
        H = Hyperplane.from_jsonable(entry["hyperplane"])
        _push(H, entry.get("theta", 0.0), entry.get("margin", 0.0),
              entry.get("aperture"))
    n = E.complex_n()
    guard = 0
    while len(found) < target and guard < 20 * target:
        guard += 1
        if guard % 2 == 0:
            qs = E.sample_exterior(rng, 1, window=plan.window)
            if qs.shape[0] == 0:
                continue
            try:
                H, _ = _canonical_exterior_hyperplane(E, qs[0])
            except Exception:
                continue
            if H is None:
                continue
        else:
            c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            try:
                H0 = Hyperplane(c, 0.0)
            except ValueError:
                continue
            res = E.support(H0.real_eta(0.0))
            if not res.finite:
                res = E.support(Hyperplane(-c, 0.0).real_eta(0.0))
                if not res.finite:
                    continue
                H0 = Hyperplane(-H0.coeffs, 0.0)
            beta = (res.value + 1.0 + float(rng.uniform(0, plan.window / 2))
                    + 1j * float(rng.uniform(-plan.window / 4, plan.window / 4)))
            H = Hyperplane(H0.coeffs, beta)
        verdict = is_stable(E, H.subspace())
        if not verdict.stable:
            continue
        ok, theta, margin = hyperplane_disjoint(E, H)
        if not ok:
            continue
        _push(H, theta, margin, verdict.aperture)
    return found


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def _phase_align(c_ref, c):
    inner = complex(np.sum(np.conj(c_ref) * c))
    if abs(inner) < 1e-12:
        return c, 1.0 + 0j
    phase = np.exp(-1j * np.angle(inner))
    return c * phase, phase


def _edge_ok(E, Hi, Hj, steps, theta_hints):
    """Interpolate in homogeneous conormal coordinates and keep every step
    stable and disjoint; returns (ok, blocking_t)."""
    cj, phase = _phase_align(Hi.coeffs, Hj.coeffs)
    bj = Hj.offset * phase
    for t in np.linspace(0.0, 1.0, steps):
        c = (1 - t) * Hi.coeffs + t * cj
        b = (1 - t) * Hi.offset + t * bj
        if np.linalg.norm(c) < 1e-8:
            return False, float(t)
        try:
            H = Hyperplane(c, b)
        except ValueError:
            return False, float(t)
        if not is_stable(E, H.subspace()).stable:
            return False, float(t)
        hit = False
        scale = 1.0 + abs(H.offset)
        for theta in theta_hints:
            res = E.support(H.real_eta(theta))
            if res.finite and res.value - float(np.real(np.exp(-1j * theta) * H.offset)) < -1e-10 * scale:
                hit = True
                break
        if not hit:
            ok, _, _ = hyperplane_disjoint(E, H)
            if not ok:
                return False, float(t)
    return True, None


def _retract_to_contact(E, H, theta, bisections=48):
    """Offset distance along e^{i theta} at which the translated hyperplane
    first touches E (bisection on the disjointness margin)."""
    res = E.support(H.real_eta(theta))
    if not res.finite:
        return None
    margin = res.value - float(np.real(np.exp(-1j * theta) * H.offset))
    if margin >= 0:
        return 0.0
    lo, hi = 0.0, -margin
    for _ in range(bisections):
        mid = 0.5 * (lo + hi)
        shifted = H.translated(-mid * np.exp(1j * theta))
        m = res.value - float(np.real(np.exp(-1j * theta) * shifted.offset))
        if m < 0:
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))


def check_connectivity(E: ConvexSet, plan: SamplingPlan, seeds=None) -> CheckResult:
    """The sampled family of stable disjoint hyperplanes must form a connected
    graph under stable-and-disjoint linear interpolation of their parameters."""
    name = "connectivity"
    n = _complex_dim(E)
    if n is None or n < 2:
        return CheckResult(name, INCONCLUSIVE, seed=plan.seed, tol=plan.tol,
                           detail="ambient space is not C^n with n >= 2")
    rng = plan.rng("connect")
    nodes = _collect_stable_disjoint(E, plan, rng, plan.hyperplanes, seeds=seeds)
    if len(nodes) < 2:
        return CheckResult(name, INCONCLUSIVE, samples=len(nodes), seed=plan.seed,
                           tol=plan.tol,
                           detail="fewer than two stable disjoint hyperplanes found")
    contacts = []
    for H, theta, _, _ in nodes:
        c = _retract_to_contact(E, H, theta)
        contacts.append(None if c is None else float(c))
    uf = _UnionFind(len(nodes))
    pairs = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            ci, cj = nodes[i][0], nodes[j][0]
            cj_al, _ = _phase_align(ci.coeffs, cj.coeffs)
            dist = float(np.linalg.norm(ci.coeffs - cj_al) +
                         abs(ci.offset - cj.offset) / (1 + abs(ci.offset)))
            pairs.append((dist, i, j))
    pairs.sort()
    edges = 0
    blocked = []
    for dist, i, j in pairs:
        if uf.find(i) == uf.find(j):
            continue
        hints = [nodes[i][1], nodes[j][1]]
        ok, t_block = _edge_ok(E, nodes[i][0], nodes[j][0], plan.path_steps, hints)
        if ok:
            uf.union(i, j)
            edges += 1
        else:
            blocked.append((i, j, t_block))
        roots = {uf.find(k) for k in range(len(nodes))}
        if len(roots) == 1:
            break
    roots = sorted({uf.find(k) for k in range(len(nodes))})
    if len(roots) == 1:
        return CheckResult(
            name, VERIFIED, samples=len(nodes), seed=plan.seed, tol=plan.tol,
            witnesses=[{"kind": "retraction-contacts",
                        "offsets": [c for c in contacts if c is not None][:10]}],
            detail=f"{len(nodes)} hyperplanes connected with {edges} verified edges")
    comps = {}
    for k in range(len(nodes)):
        comps.setdefault(uf.find(k), []).append(k)
    reps = [min(v) for v in comps.values()][:2]
    witnesses = [{
        "kind": "disconnected-components",
        "representatives": [nodes[r][0].to_jsonable() for r in reps],
        "components": len(roots),
    }]
    return CheckResult(name, REFUTED, witnesses=witnesses, samples=len(nodes),
                       seed=plan.seed, tol=plan.tol,
                       detail=f"hyperplane graph has {len(roots)} components")


def check_chart_compact(E: ConvexSet, plan: SamplingPlan, candidates=None,
                        c_grid=(1.0, 0.5, 0.1, 0.01)) -> CheckResult:
    """Truncated cones around candidate hyperplanes must cut E compactly:
    no sampled recession direction may satisfy |r''| <= c |r'|."""
    name = "chart_compact"
    n = _complex_dim(E)
    if n is None or n < 2:
        return CheckResult(name, INCONCLUSIVE, seed=plan.seed, tol=plan.tol,
                           detail="ambient space is not C^n with n >= 2")
    if not candidates:
        return CheckResult(name, INCONCLUSIVE, seed=plan.seed, tol=plan.tol,
                           detail="no candidate hyperplanes available")
    rng = plan.rng("chart")
    rays = list(E.recession_cone().sample_members(rng, 200))
    witnesses = []
    refuted = []
    for H in candidates[:3]:
        D = H.subspace().to_real().directions
        ratios = []
        for r in rays:
            along = (r @ D.T) @ D
            na = np.linalg.norm(along)
            nc = np.linalg.norm(r - along)
            ratios.append(np.inf if na < 1e-12 else nc / na)
        passing = [c for c in c_grid if all(t > c for t in ratios)]
        if passing:
            witnesses.append({
                "kind": "compact-chart",
                "hyperplane": H.to_jsonable(),
                "aperture": min(passing),
            })
        else:
            worst = int(np.argmin(ratios)) if rays else -1
            refuted.append({
                "kind": "cone-ray",
                "hyperplane": H.to_jsonable(),
                "direction": [float(t) for t in rays[worst]] if worst >= 0 else [],
                "ratio": float(ratios[worst]) if worst >= 0 else None,
            })
    if refuted:
        return CheckResult(name, REFUTED, witnesses=refuted, samples=len(rays),
                           seed=plan.seed, tol=plan.tol,
                           detail="a recession direction enters every candidate cone")
    return CheckResult(name, VERIFIED, witnesses=witnesses, samples=len(rays),
                       seed=plan.seed, tol=plan.tol,
                       detail=f"{len(witnesses)} candidate cones verified compact")


def check_normcombo_smoothing(E: ConvexSet, plan: SamplingPlan) -> CheckResult:
    """For epigraphs of irreducible nonnegative norm combinations: the smoothed
    surrogate must stay sandwiched and strongly convex on samples."""
    from .functions import NormCombo
    from .errors import NotIrreducibleFamily
    from .smoothing import smooth_normcombo

    name = "normcombo_smoothing"
    phi = getattr(E, "phi", None)
    if not isinstance(phi, NormCombo):
        return CheckResult(name, INCONCLUSIVE, seed=plan.seed, tol=plan.tol,
                           detail="set is not the epigraph of a norm combination")
    try:
        eta = 1e-3
        psi = smooth_normcombo(phi, eta)
    except NotIrreducibleFamily as exc:
        return CheckResult(name, REFUTED, seed=plan.seed, tol=plan.tol,
                           witnesses=[{"kind": "reducible-family", "reason": str(exc)}],
                           detail="norm family is not irreducible")
    rng = plan.rng("normcombo")
    k = phi.k
    total = float(np.sum(phi.coefs))
    xs = rng.uniform(-plan.window, plan.window, size=(512, k))
    lower = phi.value(xs) - eta * total
    upper = phi.value(xs)
    vals = psi.value(xs)
    bad = int(np.sum((vals < lower - 1e-12) | (vals > upper + 1e-12)))
    eigs = []
    for x in xs[:64]:
        eigs.append(float(np.linalg.eigvalsh(psi.hess(x))[0]))
    min_eig = float(min(eigs))
    if bad or min_eig <= 0:
        return CheckResult(name, REFUTED, samples=len(xs), seed=plan.seed, tol=plan.tol,
                           witnesses=[{"kind": "smoothing-failure",
                                       "sandwich_violations": bad,
                                       "hessian_min_eig": min_eig}],
                           detail="smoothed surrogate violates sandwich or convexity")
    return CheckResult(name, VERIFIED, samples=len(xs), seed=plan.seed, tol=plan.tol,
                       witnesses=[{"kind": "smoothing-evidence",
                                   "eta": eta, "hessian_min_eig": min_eig}],
                       detail="sandwich and strong convexity verified on samples")


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

def certify_oka_complement(E: ConvexSet, plan: Optional[SamplingPlan] = None) -> Certificate:
    """Run every check, group them into routes, and report the best verdict.

    Routes: (1) trivial lineality alone, (2) halfline-free tangent slices,
    (3) projective-hull style evidence (exterior hyperplanes + line lifts +
    connectivity + compact cone charts), (4) smoothing evidence for norm-
    combination epigraphs.  Overall is refuted only when no route verifies
    and at least one check produced an explicit witness.
    """
    from .specjson import digest

    plan = plan or SamplingPlan()
    checks: List[CheckResult] = []
    checks.append(check_no_affine_line(E, plan))
    checks.append(check_tangent_slice_halflines(E, plan))
    wp = check_weak_projective(E, plan)
    checks.append(wp)
    checks.append(check_line_lift(E, plan))
    seeds = [w for w in wp.witnesses if w.get("kind") == "stable-hyperplane"]
    checks.append(check_connectivity(E, plan, seeds=seeds))
    cand = [Hyperplane.from_jsonable(w["hyperplane"]) for w in seeds[:3]]
    checks.append(check_chart_compact(E, plan, candidates=cand))
    from .functions import NormCombo
    if isinstance(getattr(E, "phi", None), NormCombo):
        checks.append(check_normcombo_smoothing(E, plan))

    got = {c.name: c for c in checks}
    routes = [
        got["no_affine_line"].verified,
        got["tangent_slice_halflines"].verified,
        all(got[k].verified for k in
            ("weak_projective", "line_lift", "connectivity", "chart_compact")),
    ]
    if "normcombo_smoothing" in got:
        routes.append(got["normcombo_smoothing"].verified)

    if any(routes):
        overall = CERTIFIED if all(c.verdict == CERTIFIED for c in checks) else VERIFIED
    elif any(c.verdict == REFUTED for c in checks):
        overall = REFUTED
    else:
        overall = INCONCLUSIVE
    payload = {"set": E.to_jsonable(), "plan": plan.to_jsonable()}
    return Certificate(input_digest=digest(payload), checks=checks, overall=overall)


# ---------------------------------------------------------------------------
# witness rechecks (independent brute force)
# ---------------------------------------------------------------------------

def _recession_brute(E: ConvexSet, v, rng=None):
    rng = rng or np.random.default_rng(99)
    v = np.asarray(v, dtype=float)
    try:
        base = E.sample_boundary(rng, 4, window=8.0)
    except UnsupportedVariant:
        base = np.empty((0, E.m))
    if base.shape[0] == 0:
        return False
    for x0 in base:
        for t in (1.0, 4.0, 32.0, 256.0, 1024.0):
            if not E.contains(x0 + t * v, tol=1e-6 * (1 + t)):
                return False
    return True


def recheck_witness(E: ConvexSet, witness: dict) -> bool:
    """Re-verify a refutation witness by direct membership probes only."""
    kind = witness.get("kind")
    if kind == "halfline":
        x0 = np.asarray(witness["point"], dtype=float)
        v = np.asarray(witness["direction"], dtype=float)
        if not E.contains(x0, tol=1e-6):
            return False
        for t in (0.0, 1.0, 2.0, 8.0, 64.0, 512.0, 1024.0):
            if not E.contains(x0 + t * v, tol=1e-6 * (1 + t)):
                return False
        return True
    if kind in ("unstable-hyperplane", "unstable-lift"):
        H = Hyperplane.from_jsonable(witness["hyperplane"])
        v = np.asarray(witness["recession_direction"], dtype=float)
        vc = complexify(v)
        if abs(np.dot(H.coeffs, vc)) > 1e-6:
            return False
        return _recession_brute(E, v)
    if kind == "hyperplane-meets-set":
        if "common_point" not in witness:
            return False
        x = np.asarray(witness["common_point"], dtype=float)
        H = Hyperplane.from_jsonable(witness["hyperplane"])
        return bool(E.contains(x, tol=1e-6)) and abs(H.eval(complexify(x))) < 1e-5
    if kind == "cone-ray":
        v = np.asarray(witness["direction"], dtype=float)
        return _recession_brute(E, v)
    if kind == "line-direction":
        v = np.asarray(witness["direction"], dtype=float)
        return _recession_brute(E, v) and _recession_brute(E, -v)
    return False


def recheck_certificate(E: ConvexSet, cert: Certificate):
    """(check name, witness index, ok) for every refutation witness."""
    out = []
    for c in cert.checks:
        if c.verdict != REFUTED:
            continue
        for i, w in enumerate(c.witnesses):
            out.append((c.name, i, recheck_witness(E, w)))
    return out


# ---------------------------------------------------------------------------
# hull sweep
# ---------------------------------------------------------------------------

@dataclass
class HullSweepPath:
    hyperplanes: List[Hyperplane]
    margins: List[float]
    thetas: List[float]
    offsets: List[float]

    def to_jsonable(self):
        return {
            "steps": [h.to_jsonable() for h in self.hyperplanes],
            "margins": self.margins,
            "thetas": self.thetas,
            "offsets": self.offsets,
        }


def hull_sweep_witness(K: ConvexSet, subspace0, p, steps: int = 64,
                       window: float = 10.0) -> HullSweepPath:
    """A discrete path of complex hyperplanes, all disjoint from the bounded
    set K, carrying the starting hyperplane out past the window radius and
    tilting it back to pass through the target point p.

    Raises PathBlocked when K is unbounded, when the starting hyperplane
    already meets K, or when some step cannot be certified disjoint.
    """
    rng = np.random.default_rng(20240829)
    cone = K.recession_cone()
    if cone.subspace_rows().shape[0] or list(cone.sample_members(rng, 8)):
        raise PathBlocked("K has nontrivial recession; sweep requires a bounded set")
    p = np.asarray(p, dtype=complex)
    D = subspace0.directions
    _, s, vh = np.linalg.svd(D)
    conormals = np.conj(vh[D.shape[0]:])
    if conormals.shape[0] != 1:
        raise PathBlocked("starting subspace is not a complex hyperplane")
    c0 = conormals[0]
    H0 = Hyperplane(c0, np.dot(c0, subspace0.base))
    ok, theta0, margin0 = hyperplane_disjoint(K, H0)
    if not ok:
        raise PathBlocked("starting hyperplane is not disjoint from K")

    q_real = K.nearest_boundary(realify(p))
    nu = realify(p) - q_real
    nn = np.linalg.norm(nu)
    if nn < 1e-12:
        raise PathBlocked("target point lies on K")
    H1 = Hyperplane.from_real_normal(realify(p), nu / nn)

    far = max(8.0 * window, 8.0 * (abs(H0.offset) + abs(H1.offset) + 1.0))
    half = max(2, steps // 2)
    hyperplanes, margins, thetas, offsets = [], [], [], []

    for t in np.linspace(0.0, 1.0, half):
        H = H0.translated(t * far * np.exp(1j * theta0))
        ok, th, mg = hyperplane_disjoint(K, H)
        if not ok:
            raise PathBlocked(f"outward translation blocked at t={t:.3f}")
        hyperplanes.append(H)
        margins.append(mg)
        thetas.append(th)
        offsets.append(abs(H.offset))

    c_far, b_far = hyperplanes[-1].coeffs, hyperplanes[-1].offset
    c1_al, phase = _phase_align(c_far, H1.coeffs)
    b1_al = H1.offset * phase
    for sgm in np.linspace(0.0, 1.0, steps - half)[1:]:
        c = (1 - sgm) * c_far + sgm * c1_al
        b = (1 - sgm) * b_far + sgm * b1_al
        H = Hyperplane(c, b)
        ok, th, mg = hyperplane_disjoint(K, H)
        if not ok:
            raise PathBlocked(f"tilting blocked at sigma={sgm:.3f}")
        hyperplanes.append(H)
        margins.append(mg)
        thetas.append(th)
        offsets.append(abs(H.offset))
    # final step must pass through p exactly (same hyperplane as H1)
    zchk = abs(hyperplanes[-1].eval(p))
    if zchk > 1e-8 * (1 + np.linalg.norm(p)):
        raise PathBlocked("final hyperplane missed the target point")
    return HullSweepPath(hyperplanes, margins, thetas, offsets)
