"""Acceptance gate: ten primary criteria with pinned tolerances.

Each test covers one numbered criterion, asserts the stated tolerances and
runtime budgets, and prints a single PASS line with the measured quantities
(visible with ``pytest -s`` or on failure).
"""

import json
import time

import numpy as np
import pytest

from okacert.basin import BasinConfig, basin_report
from okacert.certify import (
    Hyperplane,
    SamplingPlan,
    certify_oka_complement,
    recheck_certificate,
    recheck_witness,
)
from okacert.cli import main as cli_main
from okacert.functions import NormCombo
from okacert.gallery import build_example
from okacert.geometry import cayley_forward, siegel_defect
from okacert.sets import Dilation, Epigraph, HPolyhedron
from okacert.smoothing import hessian_min_eig, outer_sequence, rmax, smooth_normcombo
from okacert.stability import is_stable


def _line(num: int, name: str, detail: str):
    print(f"ACCEPTANCE {num:02d} {name}: PASS ({detail})")


# ---------------------------------------------------------------------------
# 1. boundary-defect identity of the ball <-> halfspace chart
# ---------------------------------------------------------------------------

def test_criterion_01_cayley_identity():
    rng = np.random.default_rng(20240901)
    t0 = time.perf_counter()
    worst = 0.0
    checked = 0
    while checked < 10_000:
        g = rng.normal(size=(20_000, 4))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        r = rng.uniform(0.0, 1.0, size=20_000) ** 0.25  # uniform in the 4-ball
        w = (g[:, :2] * r[:, None]) + 1j * (g[:, 2:] * r[:, None])
        w = np.stack([w[:, 0], w[:, 1]], axis=-1)
        keep = np.abs(1.0 - w[:, 1]) > 0.05
        w = w[keep][: 10_000 - checked]
        z = cayley_forward(w)
        lhs = siegel_defect(z)
        rhs = (1.0 - np.sum(np.abs(w) ** 2, axis=-1)) / np.abs(1.0 - w[:, 1]) ** 2
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        checked += w.shape[0]
    dt = time.perf_counter() - t0
    assert checked == 10_000
    assert worst <= 1e-10, f"max residual {worst:.3e} exceeds 1e-10"
    assert dt < 1.0, f"took {dt:.2f}s, budget 1s"
    _line(1, "cayley-identity", f"10^4 points, max residual {worst:.2e}, {dt:.2f}s")


# ---------------------------------------------------------------------------
# 2. flagship positive cases certify under the default plan
# ---------------------------------------------------------------------------

def test_criterion_02_siegel_certification():
    details = []
    for name in ("siegel2", "siegel3"):
        t0 = time.perf_counter()
        cert = certify_oka_complement(build_example(name), SamplingPlan())
        dt = time.perf_counter() - t0
        refuted = [c.name for c in cert.checks if c.verdict == "refuted"]
        assert cert.overall == "verified-sampled", f"{name}: {cert.overall}"
        assert not refuted, f"{name}: refuted checks {refuted}"
        assert dt < 30.0, f"{name} took {dt:.1f}s, budget 30s"
        details.append(f"{name} {dt:.1f}s")
    _line(2, "siegel-certification", ", ".join(details))


# ---------------------------------------------------------------------------
# 3. negative controls refute with independently rechecked witnesses
# ---------------------------------------------------------------------------

def test_criterion_03_negative_controls():
    # halfspace: refuted, with both a lineality witness and halfline witnesses
    E = build_example("halfspace")
    cert = certify_oka_complement(E, SamplingPlan())
    assert cert.overall == "refuted"
    lin = cert.check("no_affine_line").witnesses
    assert lin and lin[0]["kind"] == "line-direction"
    assert recheck_witness(E, lin[0]), "lineality witness failed brute recheck"
    ts = cert.check("tangent_slice_halflines")
    assert ts.verdict == "refuted"
    assert any(w["kind"] == "halfline" for w in ts.witnesses)
    rechecks = recheck_certificate(E, cert)
    assert rechecks and all(ok for _, _, ok in rechecks), \
        f"halfspace witness recheck failed: {rechecks}"

    # totally real R^2 in C^2: refuted on the exterior-hyperplane check with
    # a complex-line witness (in C^2 a complex hyperplane is a complex line)
    F = build_example("r2-in-c2")
    cert2 = certify_oka_complement(F, SamplingPlan())
    assert cert2.overall == "refuted"
    wp = cert2.check("weak_projective")
    assert wp.verdict == "refuted"
    unstable = [w for w in wp.witnesses if w["kind"] == "unstable-hyperplane"]
    assert unstable, "expected an unstable-hyperplane witness"
    H = Hyperplane.from_jsonable(unstable[0]["hyperplane"])
    assert H.subspace().dim == 1  # a complex line
    rechecks2 = recheck_certificate(F, cert2)
    assert rechecks2 and all(ok for _, _, ok in rechecks2), \
        f"r2-in-c2 witness recheck failed: {rechecks2}"
    _line(3, "negative-controls",
          f"halfspace {len(rechecks)} witnesses ok, "
          f"r2-in-c2 {len(rechecks2)} witnesses ok")


# ---------------------------------------------------------------------------
# 4. disc tube certifies
# ---------------------------------------------------------------------------

def test_criterion_04_disc_tube():
    t0 = time.perf_counter()
    cert = certify_oka_complement(build_example("disc-tube-prop49"), SamplingPlan())
    dt = time.perf_counter() - t0
    assert cert.overall == "verified-sampled", cert.overall
    assert dt < 30.0, f"took {dt:.1f}s, budget 30s"
    _line(4, "disc-tube", f"verified-sampled in {dt:.1f}s")


# ---------------------------------------------------------------------------
# 5. norm-combination smoothing: sandwich and positivity
# ---------------------------------------------------------------------------

def test_criterion_05_normcombo_smoothing():
    # coefficients a = b = c = 1 for the C^2 cone; three functionals on R^3
    phi = NormCombo([1.0, 1.0, 1.0], np.eye(3))
    eta = 1e-2
    psi = smooth_normcombo(phi, eta)
    rng = np.random.default_rng(20240905)
    xs = rng.uniform(-2.0, 2.0, size=(10_000, 3))
    upper = phi.value(xs)
    lower = upper - 3.0 * eta
    vals = psi.value(xs)
    bad = int(np.sum((vals < lower - 1e-12) | (vals > upper + 1e-12)))
    assert bad == 0, f"{bad} sandwich violations beyond 1e-12"
    min_eig = np.inf
    f = lambda u: float(psi.value(u))
    for x in rng.uniform(-2.0, 2.0, size=(1_000, 3)):
        e = hessian_min_eig(f, x, h=1e-4)
        min_eig = min(min_eig, e)
        assert e > 0, f"Hessian min eigenvalue {e:.3e} not positive at {x}"
    _line(5, "normcombo-smoothing",
          f"0/10^4 sandwich violations, min Hessian eig {min_eig:.2e} over 10^3 points")


# ---------------------------------------------------------------------------
# 6. regularized maximum property suite
# ---------------------------------------------------------------------------

def test_criterion_06_rmax_suite():
    rng = np.random.default_rng(20240906)
    delta = 0.2
    total = 0
    for k in (2, 3, 4, 5):
        v = rng.uniform(-3.0, 3.0, size=(25_000, k))
        total += v.shape[0]
        r = rmax(v, delta)
        m = np.max(v, axis=-1)
        assert np.all(r >= m - 1e-12), "lower bound violated"
        assert np.all(r <= m + delta + 1e-12), "upper bound violated"
        if k <= 3:
            # the full tensor quadrature is symmetric; above the tensor cap
            # the operator is defined as a left-associative pairwise fold
            perm = rng.permutation(k)
            assert np.max(np.abs(rmax(v[:, perm], delta) - r)) <= 1e-12, \
                "symmetry"
        w = v + rng.uniform(0.0, 1.0, size=v.shape)
        assert np.all(rmax(w, delta) >= r - 1e-12), "monotonicity"
        lam = rng.uniform(0.0, 1.0, size=v.shape[0])
        mid = lam[:, None] * v + (1 - lam[:, None]) * w
        assert np.all(rmax(mid, delta)
                      <= lam * r + (1 - lam) * rmax(w, delta) + 1e-12), \
            "segment convexity"
    assert total == 100_000
    # separated regime: exact fast path vs forced quadrature
    a = rng.uniform(-3.0, 3.0, size=20_000)
    b = a - delta - rng.uniform(0.0, 2.0, size=20_000)
    v = np.stack([a, b], axis=-1)
    gap = float(np.max(np.abs(rmax(v, delta, force_quadrature=True)
                              - rmax(v, delta))))
    assert gap <= 1e-10, f"fast path vs quadrature gap {gap:.2e}"
    _line(6, "rmax-suite", f"10^5 tuples, 0 violations, separated gap {gap:.1e}")


# ---------------------------------------------------------------------------
# 7. nested smooth strongly convex outer sets for the planar cone
# ---------------------------------------------------------------------------

def test_criterion_07_outer_approximation_pipeline():
    t0 = time.perf_counter()
    E = Epigraph(NormCombo([1.0], [[1.0]]), m=2, graph_index=1, base_indices=[0])
    state = outer_sequence(E, steps=3, window=5.0)
    xs = np.linspace(-5.0, 5.0, 200)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    grid = np.stack([X.ravel(), Y.ravel()], axis=-1)
    stages = state.stage_values(grid)  # (3, 40000)
    # nesting: tau_1 <= tau_2 <= tau_3 pointwise makes the sublevel sets shrink
    nest_bad = int(np.sum(np.diff(stages, axis=0) < -1e-12))
    assert nest_bad == 0, f"{nest_bad} nesting violations on the 200x200 grid"
    # every stage set contains E with margin: tau_k <= -0.5 on E grid points
    in_e = E.contains(grid)
    worst_on_e = float(np.max(stages[:, in_e]))
    assert worst_on_e <= -0.5, f"max tau on E grid {worst_on_e:.3f} > -0.5"
    # strong convexity of every stage at sampled points
    rng = np.random.default_rng(20240907)
    min_eig = np.inf
    for x in rng.uniform(-5.0, 5.0, size=(1_000, 2)):
        for k in (1, 2, 3):
            e = float(np.linalg.eigvalsh(state.stage_hessian(x, stage=k))[0])
            min_eig = min(min_eig, e)
            assert e > 0, f"stage {k} Hessian not positive at {x}"
    dt = time.perf_counter() - t0
    assert dt < 60.0, f"took {dt:.1f}s, budget 60s"
    _line(7, "outer-approximation",
          f"0 nesting violations, max tau on E {worst_on_e:.2f}, "
          f"min stage-Hessian eig {min_eig:.1e}, {dt:.1f}s")


# ---------------------------------------------------------------------------
# 8. stability verdicts match a dense ray-probe oracle
# ---------------------------------------------------------------------------

def _ray_probe_unstable(A, D, angles=3600, tol=1e-10):
    """Brute oracle: does the 2-plane spanned by D's rows contain a direction
    v with A v <= 0 (a recession direction)?  Dense scan over the circle."""
    th = np.linspace(0.0, 2.0 * np.pi, angles, endpoint=False)
    V = np.cos(th)[:, None] * D[0] + np.sin(th)[:, None] * D[1]
    return bool(np.any(np.all(A @ V.T <= tol, axis=0)))


def test_criterion_08_stability_oracle_equivalence():
    rng = np.random.default_rng(20240908)
    disagreements = 0
    for trial in range(100):
        rows = int(rng.integers(3, 9))
        A = rng.normal(size=(rows, 4))
        A /= np.linalg.norm(A, axis=1, keepdims=True)
        b = rng.uniform(0.5, 2.0, size=rows)
        E = HPolyhedron(A, b)
        d = rng.normal(size=2) + 1j * rng.normal(size=2)
        d /= np.linalg.norm(d)
        from okacert.geometry import AffineSubspaceC
        base = rng.normal(size=2) + 1j * rng.normal(size=2)
        L = AffineSubspaceC(base, d[None, :])
        verdict = is_stable(E, L)
        D = L.to_real().directions
        oracle_unstable = _ray_probe_unstable(E.A, D)
        if verdict.stable == oracle_unstable:
            disagreements += 1
            continue
        # invariances on the same instance
        w = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert is_stable(E, L.translate(w)).stable == verdict.stable, \
            f"trial {trial}: translation changed the verdict"
        lam = float(rng.uniform(1.0, 4.0))
        assert is_stable(Dilation(E, lam), L).stable == verdict.stable, \
            f"trial {trial}: dilation changed the verdict"
    assert disagreements == 0, f"{disagreements}/100 oracle disagreements"
    _line(8, "stability-oracle", "100 polyhedra, 0 disagreements, "
                                 "translation+dilation invariant")


# ---------------------------------------------------------------------------
# 9. attracting-basin experiment with the pinned geometry
# ---------------------------------------------------------------------------

def test_criterion_09_basin_experiment():
    t0 = time.perf_counter()
    config = BasinConfig()  # f=(0,1), K=ball((2,0),1/2), a=0.3, b=0.52, eps=0.05
    report, csv_text, _ = basin_report(config)
    dt = time.perf_counter() - t0
    assert report["status"] == "ok", report.get("design", {}).get("reason")
    diag = report["design"]["diagnostics"]
    assert diag["estimate_radius"] <= 0.1
    for lo, hi in diag["sphere_ratios"].values():
        assert config.rate_low <= lo and hi <= config.rate_high, \
            f"contraction ratio [{lo}, {hi}] outside [0.3, 0.52]"
    counts = report["grid"]["counts"]
    assert sum(counts.values()) == 200 * 200
    a = report["assertions"]
    assert a["basin_points_in_k"] == 0, "basin point inside K"
    assert a["basin_points_near_fixed_line"] == 0, "basin point on the fixed line"
    for br in report["brackets"]:
        assert br["ok"]
        assert br["lower"] * (1 - 1e-9) <= br["min_ratio"]
        assert br["max_ratio"] <= br["upper"] * (1 + 1e-9)
    assert dt < 120.0, f"took {dt:.1f}s, budget 120s"
    # unreachable near-identity budget must surface as inconclusive, not pass
    strict, _, _ = basin_report(BasinConfig(epsilon=1e-7, grid_n=20))
    assert strict["status"] == "inconclusive"
    _line(9, "basin-experiment",
          f"{counts['basin']} basin points, assertions clean, "
          f"brackets k=1..6 ok, {dt:.1f}s; honest inconclusive at eps=1e-7")


# ---------------------------------------------------------------------------
# 10. byte-identical primary outputs on repeated runs
# ---------------------------------------------------------------------------

def test_criterion_10_determinism(tmp_path):
    pairs = []

    def rerun(label, argv_builder):
        out = []
        for i in (0, 1):
            d = tmp_path / f"{label}{i}"
            d.mkdir()
            argv, files = argv_builder(d)
            assert cli_main(argv) in (0, 1, 2)
            out.append([(d / f).read_bytes() for f in files])
        pairs.append(label)
        assert out[0] == out[1], f"{label}: outputs differ between runs"

    rerun("certify", lambda d: (
        ["certify", "siegel2", "--samples", "200", "--out",
         str(d / "cert.json")], ["cert.json"]))
    rerun("approx", lambda d: (
        ["approx", "cone-ex14", "--steps", "3", "--window", "5",
         "--out", str(d / "state.json")], ["state.json"]))

    def basin_builder(d):
        cfg = d / "cfg.json"
        cfg.write_text(json.dumps({"grid_n": 100, "max_iter": 120}),
                       encoding="utf-8")
        return (["basin", str(cfg), "--outdir", str(d), "--svg"],
                ["basin_report.json", "basin_grid.csv", "basin_slice.svg"])

    rerun("basin", basin_builder)
    rerun("cayley", lambda d: (
        ["cayley", "--check", "10000", "--out", str(d / "check.json")],
        ["check.json"]))
    rerun("examples", lambda d: (
        ["examples", "list", "--out", str(d / "list.json")], ["list.json"]))
    _line(10, "determinism", f"byte-identical reruns: {', '.join(pairs)}")
