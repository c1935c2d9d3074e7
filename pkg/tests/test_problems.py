import numpy as np
import pytest

from polytverb.exceptions import InvalidInputError, WrongCountError
from polytverb.fourier import FiniteAbelianGroup
from polytverb.geometry import PlaneFrame, generate_points
from polytverb.problems import (AnnihilationTarget, ColoredPolygon, Multiprism, Orthotope,
                                Polygon, PolygonComplexFlat, PolygonInPlane, Prism,
                                build_target, conjugate_representatives, kind_from_dict,
                                make_kind, required_points, tverberg_number)

T = tverberg_number


def test_tverberg_number():
    assert T(3, 2) == 7 and T(2, 1) == 3 and T(4, 3) == 13


@pytest.mark.parametrize("r", range(3, 10))
def test_polygon_count(r):
    assert required_points(Polygon(r)) == 3 * r - 4 == T(r, 2) - 2


@pytest.mark.parametrize("factors", [(3,), (3, 3), (4, 3), (5,), (3, 4, 3)])
def test_multiprism_count(factors):
    k = len(factors)
    assert required_points(Multiprism(factors)) == T(int(np.prod(factors)), 2 * k) - 2 * k


@pytest.mark.parametrize("factors", [(3,), (4,), (5,), (3, 3)])
def test_prism_count(factors):
    k = len(factors)
    assert required_points(Prism(factors)) == T(2 * int(np.prod(factors)), 2 * k + 1) - 2 * k - 1
    if k == 1:
        assert required_points(Prism(factors)) == 8 * factors[0] - 6


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_orthotope_count(k):
    assert required_points(Orthotope(k)) == T(2 ** k, k) - k


@pytest.mark.parametrize("r,D", [(3, 3), (3, 4), (4, 3), (5, 5)])
def test_polygon_in_plane_count(r, D):
    assert required_points(PolygonInPlane(r, PlaneFrame.random(D, 0))) == T(r, D) - 2


@pytest.mark.parametrize("r,D", [(3, 2), (3, 4), (4, 4), (3, 6)])
def test_complex_flat_count(r, D):
    assert required_points(PolygonComplexFlat(r, D)) == T(r, D) - D


@pytest.mark.parametrize("r,D", [(3, 2), (4, 2), (3, 4)])
def test_colored_count(r, D):
    kind = ColoredPolygon(r, D)
    assert kind.n_classes == (r - 2) * D + 1
    assert required_points(kind) == r * kind.n_classes


def test_worked_examples():
    assert required_points(Multiprism((3, 3))) == 37
    assert required_points(Prism((3,))) == 18
    assert required_points(Orthotope(2)) == 8
    assert required_points(PolygonComplexFlat(3, 4)) == 7


def test_target_counts_real_order_two():
    t = build_target(Orthotope(2))
    assert t.m == 4 and t.m_prime == 4
    t = build_target(Prism((3,)))
    # complex channel: 6 - 2 killed; real channel: {h != 0, (0,1)} up to conjugation
    assert len(t.killed[0]) == 4
    assert t.m_prime == len(t.order2[1])


def test_target_validation():
    G = FiniteAbelianGroup((3,))
    with pytest.raises(InvalidInputError):
        AnnihilationTarget(G, (((0,),),), (False,))
    with pytest.raises(InvalidInputError):
        AnnihilationTarget(G, (((1,), (1,)),), (False,))
    with pytest.raises(InvalidInputError):
        AnnihilationTarget(G, (((1,), (2,)),), (True,))
    assert AnnihilationTarget(G, (((1,), (2,)),), (False,)).m == 2


def test_conjugate_representatives():
    G = FiniteAbelianGroup((4,))
    assert conjugate_representatives(G, [(1,), (2,), (3,)]) == ((1,), (2,))
    assert conjugate_representatives(G, [(3,)]) == ((3,),)


def test_validate_cloud():
    kind = Polygon(3)
    with pytest.raises(WrongCountError):
        kind.validate_cloud(generate_points(2, 6))
    with pytest.raises(InvalidInputError):
        kind.validate_cloud(generate_points(3, 5))
    kind.validate_cloud(generate_points(2, 6), exact_count=False)
    col = ColoredPolygon(3, 2)
    with pytest.raises(InvalidInputError):
        col.validate_cloud(generate_points(2, 9))
    with pytest.raises(InvalidInputError):
        col.validate_cloud(generate_points(2, 9, colors=[0, 0, 0, 0, 1, 1, 2, 2, 2]))


def test_channels_layout():
    kind = ColoredPolygon(3, 2)
    cloud = generate_points(2, 9, seed=1, colors=np.repeat(np.arange(3), 3))
    ch = kind.channels(cloud)
    assert ch.shape == (9, 3)
    assert np.allclose(ch[:, 0], cloud.points[:, 0] + 1j * cloud.points[:, 1])
    assert ch[:, 1].real.tolist() == [0, 0, 0, 1, 1, 1, 0, 0, 0]


class TestMakeKind:
    def test_polygon_variants(self):
        assert make_kind("polygon", 2, r=3) == Polygon(3)
        k = make_kind("polygon", 3, r=3)
        assert isinstance(k, PolygonInPlane) and k.dimension == 3
        k = make_kind("polygon", 4, r=3, planes=[(1, 3)])
        assert np.allclose(k.frame.u, [0, 1, 0, 0]) and np.allclose(k.frame.w, [0, 0, 0, 1])

    def test_errors(self):
        with pytest.raises(InvalidInputError):
            make_kind("hexagon", 2, r=6)
        with pytest.raises(InvalidInputError):
            make_kind("polygon", 2)
        with pytest.raises(InvalidInputError):
            make_kind("orthotope", 2, k=3)
        with pytest.raises(InvalidInputError):
            make_kind("prism", 4, factors=(3,))
        with pytest.raises(InvalidInputError):
            make_kind("complex-flat", 3, r=3)

    @pytest.mark.parametrize("kind", [
        Polygon(4), Multiprism((3, 3), ((0, 2), (1, 3))), Prism((3,), ((1, 2),)), Orthotope(3),
        PolygonInPlane(3, PlaneFrame.random(3, 4)), PolygonComplexFlat(3, 4), ColoredPolygon(3, 2),
    ])
    def test_dict_roundtrip(self, kind):
        back = kind_from_dict(kind.to_dict())
        assert type(back) is type(kind)
        assert back.to_dict() == kind.to_dict()
        assert required_points(back) == required_points(kind)
