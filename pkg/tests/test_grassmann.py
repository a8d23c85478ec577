import numpy as np
import pytest

from projlab.grassmann import (
    ChartPoint,
    Frame,
    chart_point_frame,
    chart_rows,
    complement,
    principal_angles,
    projector,
    rotate,
    span_frame,
    span_projector,
    standard_frame,
    subspace_distance,
    tangent_projection_derivative,
)


def test_frame_requires_orthonormal_rows():
    with pytest.raises(ValueError):
        Frame(np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]))


def test_rotate_coordinate_plane():
    # beta = pi/2 in the (1,3) plane sends e1 to e3
    x = np.array([1.0, 0.0, 0.0])
    y = rotate(x, 1, 3, np.pi / 2)
    assert np.allclose(y, [0.0, 0.0, 1.0], atol=1e-12)
    # untouched coordinate is preserved
    z = rotate(np.array([0.0, 1.0, 0.0]), 1, 3, 0.7)
    assert np.allclose(z, [0.0, 1.0, 0.0], atol=1e-12)


def test_rotate_is_orthogonal_and_invertible():
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = rng.standard_normal(5)
        b = rng.uniform(-np.pi, np.pi)
        y = rotate(x, 2, 4, b)
        assert np.linalg.norm(y) == pytest.approx(np.linalg.norm(x))
        assert np.allclose(rotate(y, 2, 4, -b), x, atol=1e-12)


def test_chart_rows_at_zero_is_base():
    base = standard_frame(4, 2)
    c = ChartPoint(base, np.zeros((2, 2)))
    assert np.allclose(chart_rows(c), base.basis, atol=1e-15)


def test_chart_rows_first_order_tilt():
    # a single small angle alpha_{1,1} tilts e_1 toward the first
    # complement direction with slope 1
    base = standard_frame(3, 2)
    eps = 1e-6
    a = np.zeros((2, 1))
    a[0, 0] = eps
    rows = chart_rows(ChartPoint(base, a))
    assert rows[0, 2] == pytest.approx(eps, rel=1e-6)
    assert np.allclose(rows[1], [0, 1, 0], atol=1e-12)


def test_chart_point_frame_spans_chart_rows():
    rng = np.random.default_rng(1)
    base = standard_frame(5, 3)
    a = rng.uniform(-0.6, 0.6, size=(3, 2))
    rows = chart_rows(ChartPoint(base, a))
    f = chart_point_frame(ChartPoint(base, a))
    # same span: projector of the frame fixes every chart row
    P = projector(f)
    assert np.allclose(rows @ P, rows, atol=1e-10)


def test_projector_properties():
    rng = np.random.default_rng(2)
    f = span_frame(rng.standard_normal((3, 6)))
    P = projector(f)
    assert np.allclose(P, P.T, atol=1e-12)
    assert np.allclose(P @ P, P, atol=1e-12)
    assert np.trace(P) == pytest.approx(3.0)


def test_span_projector_non_orthonormal_basis():
    P1 = span_projector([[1.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
    P2 = span_projector([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    assert np.allclose(P1, P2, atol=1e-12)


def test_complement_frame():
    rng = np.random.default_rng(3)
    f = span_frame(rng.standard_normal((2, 5)))
    g = complement(f)
    assert g.basis.shape == (3, 5)
    assert np.allclose(f.basis @ g.basis.T, 0.0, atol=1e-12)


def test_tangent_projection_derivative_swaps_coordinates():
    # d/d alpha_{i,j} Pi(z) at alpha=0 equals z_j e_i + z_i e_j
    # in chart coordinates, for the standard base frame
    base = standard_frame(4, 2)
    c = ChartPoint(base, np.zeros((2, 2)))
    z = np.array([1.0, 2.0, 3.0, 4.0])
    # i=1, j=3 (third ambient coordinate = first complement direction)
    d = tangent_projection_derivative(c, 1, 3, z)
    assert np.allclose(d, [3.0, 0.0, 1.0, 0.0], atol=1e-12)
    d2 = tangent_projection_derivative(c, 2, 4, z)
    assert np.allclose(d2, [0.0, 4.0, 0.0, 2.0], atol=1e-12)


def test_tangent_projection_derivative_matches_finite_difference():
    rng = np.random.default_rng(4)
    base = span_frame(rng.standard_normal((2, 4)))
    c0 = ChartPoint(base, np.zeros((2, 2)))
    B = np.vstack([c0.base.basis, c0.comp.basis])
    z = rng.standard_normal(4)
    zeta = B @ z  # chart coordinates of z
    h = 1e-6
    for i in (1, 2):
        for j in (3, 4):
            a = np.zeros((2, 2))
            a[i - 1, j - 3] = h
            # chart_rows works in chart coordinates throughout
            Pp = span_projector(chart_rows(ChartPoint(base, a, c0.comp)))
            Pm = span_projector(chart_rows(ChartPoint(base, -a, c0.comp)))
            fd = (Pp - Pm) @ zeta / (2 * h)
            an = tangent_projection_derivative(c0, i, j, z)
            assert np.allclose(B @ an, fd, atol=1e-6)


def test_principal_angles_and_distance():
    f1 = standard_frame(4, 2)
    rows = np.array([[np.cos(0.3), 0.0, np.sin(0.3), 0.0],
                     [0.0, 1.0, 0.0, 0.0]])
    f2 = Frame(rows)
    ang = principal_angles(f1, f2)
    assert ang[0] == pytest.approx(0.0, abs=1e-9)
    assert ang[-1] == pytest.approx(0.3, abs=1e-9)
    assert subspace_distance(f1, f2) == pytest.approx(0.3, abs=1e-9)
    assert subspace_distance(f1, f1) == pytest.approx(0.0, abs=1e-9)


def test_subspace_distance_symmetry_and_triangle():
    rng = np.random.default_rng(5)
    frames = [span_frame(rng.standard_normal((2, 5))) for _ in range(3)]
    a, b, c = frames
    dab = subspace_distance(a, b)
    assert dab == pytest.approx(subspace_distance(b, a), abs=1e-10)
    assert dab <= subspace_distance(a, c) + subspace_distance(c, b) + 1e-10
