"""Subspace stability: cones, recession criterion, halflines, tube dichotomy."""

import numpy as np
import pytest

from okacert.errors import PointNotOnSubspace, SliceUnbounded
from okacert.geometry import (
    AffineSubspaceC,
    AffineSubspaceR,
    adapt_frame,
    complex_tangent,
    realify,
)
from okacert.sets import Dilation, HPolyhedron, QuadricBall, SiegelClosure
from okacert.stability import (
    SupportingTranslate,
    TubeFound,
    cone_membership,
    halfline_in_intersection,
    is_stable,
    tube_or_support,
)

Z2_AXIS = AffineSubspaceC(np.zeros(2, dtype=complex),
                          np.array([[1.0 + 0j, 0.0 + 0j]]))


def _imz2_halfspace():
    # {Im z2 >= 0} in C^2, realified coordinates (x1, y1, x2, y2)
    return HPolyhedron(np.array([[0.0, 0.0, 0.0, -1.0]]), np.array([0.0]))


# ---------------------------------------------------------------------------
# cone membership
# ---------------------------------------------------------------------------

def test_cone_membership_basic():
    assert cone_membership(Z2_AXIS, np.zeros(2), 1.0, np.array([1.0, 0.5]))
    assert not cone_membership(Z2_AXIS, np.zeros(2), 1.0, np.array([0.1, 1.0]))


def test_cone_membership_monotone_in_aperture():
    """Membership at aperture c implies membership at any c' >= c; both sides
    are checked against the raw |x''| <= c |x'| inequality in the adapted frame."""
    rng = np.random.default_rng(411)
    frame = adapt_frame(Z2_AXIS, np.zeros(2))
    for _ in range(1000):
        x = rng.normal(size=2) + 1j * rng.normal(size=2)
        c = float(rng.uniform(0.05, 2.0))
        inner = cone_membership(Z2_AXIS, np.zeros(2), c, x)
        w = frame.apply(x)
        oracle = abs(w[1]) <= c * abs(w[0]) + 1e-12 * (1 + np.linalg.norm(w))
        assert inner == oracle
        if inner:
            assert cone_membership(Z2_AXIS, np.zeros(2), c + rng.uniform(0, 3), x)


def test_cone_membership_rejects_off_subspace_apex():
    with pytest.raises(PointNotOnSubspace):
        cone_membership(Z2_AXIS, np.array([0.0, 1.0 + 0j]), 1.0, np.zeros(2))


# ---------------------------------------------------------------------------
# is_stable
# ---------------------------------------------------------------------------

def test_siegel_complex_axis_is_stable():
    E = SiegelClosure(2)
    v = is_stable(E, Z2_AXIS)
    assert v.stable and v.tag == "stable"
    assert v.aperture is not None and v.aperture > 0
    # witness property: sampled recession directions all violate the cone
    # inequality |r''| <= c |r'| for the reported aperture
    D = Z2_AXIS.to_real().directions
    rng = np.random.default_rng(7)
    for r in E.recession_cone().sample_members(rng, 64):
        along = (r @ D.T) @ D
        across = r - along
        assert np.linalg.norm(across) > v.aperture * np.linalg.norm(along)


def test_halfspace_is_unstable_with_recession_witness():
    E = _imz2_halfspace()
    v = is_stable(E, Z2_AXIS)
    assert v.tag == "unstable" and not v.stable
    w = v.witness
    assert w is not None and abs(np.linalg.norm(w) - 1.0) < 1e-9
    # witness lies in the subspace direction span and recedes inside E
    D = Z2_AXIS.to_real().directions
    assert np.linalg.norm(w - (w @ D.T) @ D) < 1e-9
    assert E.recession_member(w)


def test_stability_translation_invariant():
    rng = np.random.default_rng(55)
    cases = [(SiegelClosure(2), "stable"), (_imz2_halfspace(), "unstable")]
    for E, tag in cases:
        assert is_stable(E, Z2_AXIS).tag == tag
        for _ in range(20):
            w = rng.normal(size=2) + 1j * rng.normal(size=2)
            assert is_stable(E, Z2_AXIS.translate(w)).tag == tag


def test_stability_dilation_invariant():
    for E, tag in [(SiegelClosure(2), "stable"), (_imz2_halfspace(), "unstable")]:
        for lam in (1.0, 2.0, 7.5):
            assert is_stable(Dilation(E, lam), Z2_AXIS).tag == tag


def test_stable_verdict_is_open_under_direction_perturbation():
    E = SiegelClosure(2)
    rng = np.random.default_rng(99)
    for _ in range(20):
        d = np.array([1.0 + 0j, 0.0]) + 1e-4 * (rng.normal(size=2)
                                                + 1j * rng.normal(size=2))
        d /= np.linalg.norm(d)
        S = AffineSubspaceC(np.zeros(2, dtype=complex), d[None, :])
        assert is_stable(E, S).stable


# ---------------------------------------------------------------------------
# halfline_in_intersection
# ---------------------------------------------------------------------------

def test_no_halfline_in_siegel_complex_tangent_slice():
    # the complex tangent at the vertex slices the paraboloid set in one point
    assert halfline_in_intersection(SiegelClosure(2), Z2_AXIS) is None


def test_halfline_found_in_halfspace_slice():
    E = _imz2_halfspace()
    out = halfline_in_intersection(E, Z2_AXIS)
    assert out is not None
    x0, v = out
    S = Z2_AXIS.to_real()
    assert S.contains_point(x0, tol=1e-8)
    assert np.linalg.norm(v - (v @ S.directions.T) @ S.directions) < 1e-9
    for t in (1.0, 100.0, 1e4):
        assert E.contains(x0 + t * v, tol=1e-6 * (1 + t))
        assert S.contains_point(x0 + t * v, tol=1e-6)


def test_real_tangent_carries_halfline_complex_tangent_does_not():
    """At a smooth boundary point of the paraboloid set the full real tangent
    hyperplane slices the boundary along a real line, while the complex
    tangent hyperplane slices it in a single point."""
    E = SiegelClosure(2)
    p = np.array([1.0 + 0j, 1.0j])  # boundary: Im z2 = |z1|^2 = 1
    pr = realify(p)
    # real tangent through p: orthogonal complement of the outward gradient
    g = E.boundary_gradient(pr)
    g = g / np.linalg.norm(g)
    _, _, vh = np.linalg.svd(g[None, :])
    real_tan = AffineSubspaceR(pr, vh[1:])
    out = halfline_in_intersection(E, real_tan)
    assert out is not None
    x0, v = out
    # the only recession directions inside the tangent are +- the x2 axis
    assert abs(abs(v[2]) - 1.0) < 1e-9 and np.linalg.norm(v[[0, 1, 3]]) < 1e-9
    for t in (1.0, 50.0):
        assert E.contains(x0 + t * v, tol=1e-7)
    # complex tangent at the same point: gradient (conj z1, i/2) at p
    ct = complex_tangent(np.array([np.conj(p[0]), 0.5j]), p)
    assert halfline_in_intersection(E, ct) is None
    assert is_stable(E, ct).stable


# ---------------------------------------------------------------------------
# tube_or_support
# ---------------------------------------------------------------------------

def test_slab_decomposes_as_vertical_tube():
    E = HPolyhedron(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([1.0, 1.0]))
    S = AffineSubspaceR(np.zeros(2), np.array([[1.0, 0.0]]))
    out = tube_or_support(E, S)
    assert isinstance(out, TubeFound)
    assert out.fiber.shape == (1, 2)
    assert abs(abs(out.fiber[0, 1]) - 1.0) < 1e-9 and abs(out.fiber[0, 0]) < 1e-9
    assert out.checked_samples > 0
    assert out.max_residual <= 1e-6
    # independent decomposition check: strip the fiber component, membership
    # must be unchanged
    rng = np.random.default_rng(64)
    f = out.fiber[0]
    for _ in range(300):
        x = rng.uniform(-6, 6, size=2)
        y = x - (x @ f) * f
        assert E.contains(x) == E.contains(y)


def test_disc_yields_supporting_translate():
    E = QuadricBall(np.zeros(2), 1.0)
    S = AffineSubspaceR(np.zeros(2), np.array([[1.0, 0.0]]))
    out = tube_or_support(E, S)
    assert isinstance(out, SupportingTranslate)
    assert abs(abs(out.contact[1]) - 1.0) < 1e-9 and abs(out.contact[0]) < 1e-9
    assert out.translate.contains_point(out.contact)
    assert np.allclose(out.translate.directions, S.directions)
    # supporting: the normal separates E from the translate
    assert abs(out.normal @ out.contact - out.support_value) < 1e-9
    rng = np.random.default_rng(12)
    for x in E.sample_boundary(rng, 200, window=3.0):
        assert out.normal @ x <= out.support_value + 1e-9


def test_siegel_supported_at_vertex():
    E = SiegelClosure(2)
    out = tube_or_support(E, Z2_AXIS)
    assert isinstance(out, SupportingTranslate)
    assert np.linalg.norm(out.contact) < 1e-7
    assert abs(out.support_value) < 1e-9
    assert isinstance(out.translate, AffineSubspaceC)
    rng = np.random.default_rng(21)
    for x in E.sample_boundary(rng, 200, window=4.0):
        assert out.normal @ x <= out.support_value + 1e-7


def test_unbounded_slice_is_rejected():
    with pytest.raises(SliceUnbounded):
        tube_or_support(_imz2_halfspace(), Z2_AXIS)


# ---------------------------------------------------------------------------
# cross-checks on random polyhedra
# ---------------------------------------------------------------------------

def _random_polyhedron(rng, m=4, rows=6):
    A = rng.normal(size=(rows, m))
    b = rng.uniform(0.5, 3.0, size=rows)  # contains the origin
    return HPolyhedron(A, b)


def test_halfline_absent_iff_stable_on_supporting_slices():
    """For a hyperplane supporting E at a boundary point, the slice E cap L
    contains a halfline exactly when L is unstable; the two verdicts come
    from independent code paths."""
    rng = np.random.default_rng(2024)
    tried = 0
    stable_seen = unstable_seen = 0
    while tried < 50:
        # alternate bounded-ish faces (random direction, 6 rows) with facet
        # normals of sparse polyhedra, whose faces are usually unbounded
        if tried % 2 == 0:
            E = _random_polyhedron(rng)
            c = rng.normal(size=4)
        else:
            E = _random_polyhedron(rng, rows=int(rng.integers(3, 5)))
            c = E.A[0]
        c = c / np.linalg.norm(c)
        res = E.support(c)
        if not res.finite or res.point is None:
            continue
        tried += 1
        q = np.asarray(res.point, float)
        _, _, vh = np.linalg.svd(c[None, :])
        L = AffineSubspaceR(q, vh[1:])
        halfline = halfline_in_intersection(E, L)
        verdict = is_stable(E, L)
        assert (halfline is None) == verdict.stable
        if verdict.stable:
            stable_seen += 1
        else:
            unstable_seen += 1
            x0, v = halfline
            assert E.contains(x0 + 64.0 * v, tol=1e-5)
            assert L.contains_point(x0 + 64.0 * v, tol=1e-6)
    assert stable_seen and unstable_seen
