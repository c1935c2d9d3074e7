import numpy as np
import pytest
from hypothesis import given, strategies as st

from polytverb.exceptions import GroupMismatchError, InvalidInputError
from polytverb.fourier import FiniteAbelianGroup
from polytverb.geometry import (CoordinateDecomposition, PlaneFrame, PointCloud,
                                certify_polytope, generate_points)


def polygon_vertices(r, center=0.3 - 0.2j, scale=1.5 * np.exp(0.7j), unit=1):
    g = np.arange(r)
    return center + scale * np.exp(2j * np.pi * unit * g / r)


def to_xy(z):
    return np.stack([z.real, z.imag], axis=1)


class TestPointCloud:
    def test_validation(self):
        with pytest.raises(InvalidInputError):
            PointCloud(np.zeros((0, 2)))
        with pytest.raises(InvalidInputError):
            PointCloud([[0.0, np.nan]])
        with pytest.raises(InvalidInputError):
            PointCloud(np.zeros((3, 2)), colors=[0, 1])
        with pytest.raises(InvalidInputError):
            PointCloud(np.zeros((2, 2)), colors=[0.5, 1.0])

    def test_immutable_and_classes(self):
        c = PointCloud(np.eye(3), colors=[1, 0, 1])
        with pytest.raises(ValueError):
            c.points[0, 0] = 5
        classes = c.color_classes()
        assert list(classes) == [0, 1]
        assert classes[1].tolist() == [0, 2]
        assert c == PointCloud(np.eye(3), colors=[1, 0, 1])
        assert c != PointCloud(np.eye(3))


class TestViews:
    def test_standard_decomposition(self):
        dec = CoordinateDecomposition.standard(5, 2)
        assert dec.plane_pairs == ((0, 1), (2, 3)) and dec.line_indices == (4,)
        with pytest.raises(InvalidInputError):
            CoordinateDecomposition.standard(3, 2)
        with pytest.raises(InvalidInputError):
            CoordinateDecomposition(((0, 1),), (1,))

    @given(st.integers(0, 2**32 - 1))
    def test_split_merge_roundtrip(self, seed):
        pts = np.random.default_rng(seed).normal(size=(6, 5))
        for view in (CoordinateDecomposition.with_planes(5, [(3, 0), (4, 2)]),
                     PlaneFrame.random(5, seed)):
            cplx, real = view.split(pts)
            assert np.allclose(view.merge(cplx, real), pts, atol=1e-12)

    def test_with_planes_orders_complex_coordinate(self):
        dec = CoordinateDecomposition.with_planes(3, [(2, 0)])
        cplx, real = dec.split(np.array([[1.0, 2.0, 3.0]]))
        assert cplx[0, 0] == 3 + 1j and real.tolist() == [[2.0]]

    def test_frame_checks(self):
        with pytest.raises(InvalidInputError):
            PlaneFrame([1, 0, 0], [1, 1, 0])
        with pytest.raises(InvalidInputError):
            PlaneFrame.from_span([1, 0, 0], [2, 0, 0])
        f = PlaneFrame.from_span([1, 1, 0], [0, 1, 1])
        basis = np.vstack([f.u, f.w, f.completion])
        assert np.allclose(basis @ basis.T, np.eye(3), atol=1e-12)

    def test_coordinate_frame_agrees_with_decomposition(self):
        pts = np.random.default_rng(2).normal(size=(4, 4))
        f = PlaneFrame.coordinate(4, 1, 3)
        d = CoordinateDecomposition.with_planes(4, [(1, 3)])
        assert np.allclose(f.split(pts)[0], d.split(pts)[0])
        assert np.allclose(f.split(pts)[1], d.split(pts)[1])


class TestGenerate:
    def test_deterministic_and_in_range(self):
        a = generate_points(3, 50, seed=7, scale=2.0)
        b = generate_points(3, 50, seed=7, scale=2.0)
        assert a == b
        assert np.all(np.abs(a.points) <= 2.0)
        assert generate_points(3, 50, seed=8) != a

    def test_distinct_points(self):
        c = generate_points(1, 200, seed=0)
        assert len(np.unique(c.points, axis=0)) == 200

    def test_rejects_bad_sizes(self):
        with pytest.raises(InvalidInputError):
            generate_points(0, 3)


class TestCertificates:
    @pytest.mark.parametrize("r", [3, 4, 5, 6, 7])
    @pytest.mark.parametrize("unit", [1, -1])
    def test_regular_polygon(self, r, unit):
        G = FiniteAbelianGroup((r,))
        cert = certify_polytope(G, to_xy(polygon_vertices(r, unit=unit)), "polygon")
        assert cert.valid
        assert cert.residual < 1e-12
        assert abs(cert.leading_magnitude - 1.5) < 1e-12
        assert abs(cert.centers[0] - (0.3 - 0.2j)) < 1e-12

    def test_star_pentagon_is_recognized(self):
        G = FiniteAbelianGroup((5,))
        cert = certify_polytope(G, to_xy(polygon_vertices(5, unit=2)), "polygon")
        assert cert.valid and cert.units == (2,)

    def test_perturbed_and_collapsed_polygons_fail(self):
        G = FiniteAbelianGroup((4,))
        v = to_xy(polygon_vertices(4))
        v[2] += [1e-4, 0]
        cert = certify_polytope(G, v, "polygon")
        assert not cert.valid and cert.residual > 1e-6
        cert = certify_polytope(G, np.ones((4, 2)), "polygon")
        assert not cert.valid and cert.leading_magnitude < 1e-12

    def test_polygon_out_of_plane_fails(self):
        G = FiniteAbelianGroup((3,))
        v = np.hstack([to_xy(polygon_vertices(3)), [[0.0], [0.0], [0.1]]])
        assert not certify_polytope(G, v, "polygon").valid
        v[:, 2] = 0.4
        assert certify_polytope(G, v, "polygon").valid

    def test_multiprism_and_prism(self):
        G = FiniteAbelianGroup((3, 4))
        a, b = polygon_vertices(3), polygon_vertices(4, center=1j, scale=0.5)
        verts = {g: [a[g[0]].real, a[g[0]].imag, b[g[1]].real, b[g[1]].imag] for g in G.elements}
        assert certify_polytope(G, verts, "multiprism").valid
        # swapping the planes breaks the alignment
        dec = CoordinateDecomposition(((2, 3), (0, 1)))
        assert not certify_polytope(G, verts, "multiprism", view=dec).valid

        H = FiniteAbelianGroup((3, 2))
        prism = {g: [a[g[0]].real, a[g[0]].imag, 2.0 * g[1] - 0.5] for g in H.elements}
        assert certify_polytope(H, prism, "prism").valid
        tilted = dict(prism)
        tilted[(1, 1)] = [a[1].real, a[1].imag, 1.7]
        assert not certify_polytope(H, tilted, "prism").valid

    def test_orthotope(self):
        G = FiniteAbelianGroup((2, 2, 2))
        sides = np.array([0.5, 2.0, 1.0])
        verts = {g: 0.1 + sides * np.array(g) for g in G.elements}
        cert = certify_polytope(G, verts, "orthotope")
        assert cert.valid
        # the e_i coefficient of c + s g_i on Z2 is -s/2
        assert np.allclose(cert.leading, -sides / 2)
        flat = {g: np.array([0.0, 2.0 * g[1], g[2]]) for g in G.elements}
        assert not certify_polytope(G, flat, "orthotope").valid

    def test_complex_flat(self):
        G = FiniteAbelianGroup((3,))
        z = polygon_vertices(3)
        w = (2 - 1j) * z + 0.5
        verts = np.stack([z.real, z.imag, w.real, w.imag], axis=1)
        assert certify_polytope(G, verts, "complex-flat").valid
        # a different triangle in the second plane is not complex-proportional
        w2 = (2 - 1j) * np.conj(z)
        verts[:, 2], verts[:, 3] = w2.real, w2.imag
        assert not certify_polytope(G, verts, "complex-flat").valid

    def test_errors(self):
        with pytest.raises(InvalidInputError):
            certify_polytope(FiniteAbelianGroup((3,)), np.zeros((3, 2)), "hexagon")
        with pytest.raises(GroupMismatchError):
            certify_polytope(FiniteAbelianGroup((3,)), np.zeros((2, 2)), "polygon")
        with pytest.raises(GroupMismatchError):
            certify_polytope(FiniteAbelianGroup((2,)), np.zeros((2, 2)), "polygon")
        with pytest.raises(GroupMismatchError):
            certify_polytope(FiniteAbelianGroup((3,)), np.zeros((3, 1)), "orthotope")
