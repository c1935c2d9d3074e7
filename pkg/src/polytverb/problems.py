"""Partition problems and the Fourier coefficients each one must annihilate.

Every problem kind fixes a group ``G``, a coordinate view of ``R^D`` and a
list of *channels* (complex or real scalar functions of the points).  Its
:class:`AnnihilationTarget` lists, per channel, the coefficient positions
that must vanish and the leading positions that must not.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar, Optional, Sequence

import numpy as np

from .exceptions import InvalidInputError, WrongCountError
from .fourier import Element, FiniteAbelianGroup
from .geometry import CoordinateDecomposition, PlaneFrame, PointCloud, View


def tverberg_number(r: int, d: int) -> int:
    return (r - 1) * (d + 1) + 1


@dataclass(frozen=True)
class AnnihilationTarget:
    """Coefficients to kill per channel.

    ``killed[i]`` is the set ``S_i`` (for real channels already reduced to one
    representative per conjugate pair).  ``leading`` holds one entry per
    polytope factor: the ``(channel, h)`` positions whose joint magnitude
    certifies that the factor does not collapse to a point.
    """

    group: FiniteAbelianGroup
    killed: tuple[tuple[Element, ...], ...]
    real_flags: tuple[bool, ...]
    leading: tuple[tuple[tuple[int, Element], ...], ...] = ()

    def __post_init__(self):
        G = self.group
        if len(self.killed) != len(self.real_flags):
            raise InvalidInputError("one real flag per channel is required")
        for i, (S, real) in enumerate(zip(self.killed, self.real_flags)):
            if G.zero in S:
                raise InvalidInputError(f"channel {i}: the zero coefficient cannot be killed")
            if len(set(S)) != len(S):
                raise InvalidInputError(f"channel {i}: repeated coefficient positions")
            if real:
                for h in S:
                    if G.element_order(h) > 2 and G.neg(h) in S:
                        raise InvalidInputError(
                            f"channel {i}: real channel lists both {h} and its conjugate")

    @property
    def order2(self) -> tuple[tuple[Element, ...], ...]:
        """``T_i``: order-two positions on real channels (empty on complex ones)."""
        G = self.group
        return tuple(tuple(h for h in S if G.element_order(h) == 2) if real else ()
                     for S, real in zip(self.killed, self.real_flags))

    @property
    def n_channels(self) -> int:
        return len(self.killed)

    @property
    def m(self) -> int:
        return sum(len(S) for S in self.killed)

    @property
    def m_prime(self) -> int:
        return sum(len(T) for T in self.order2)

    @property
    def simplex_dim(self) -> int:
        return 2 * self.m - self.m_prime + self.group.order - 1

    @property
    def required_points(self) -> int:
        return self.simplex_dim + 1


def conjugate_representatives(G: FiniteAbelianGroup, positions) -> tuple[Element, ...]:
    """Keep order-two positions and the lexicographically smaller of each ``{h, -h}``."""
    out = []
    for h in positions:
        if G.element_order(h) <= 2 or h <= G.neg(h):
            out.append(h)
        elif G.neg(h) not in positions:
            out.append(h)
    return tuple(out)


class ProblemKind:
    """Base class for partition problems; subclasses are frozen dataclasses."""

    name: ClassVar[str]
    certificate_kind: ClassVar[str]

    def group(self) -> FiniteAbelianGroup:
        raise NotImplementedError

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    @property
    def view(self) -> View:
        raise NotImplementedError

    @property
    def n_extra_channels(self) -> int:
        return 0

    def real_flags(self) -> tuple[bool, ...]:
        v = self.view
        return (False,) * v.n_complex + (True,) * (v.n_real + self.n_extra_channels)

    def kill_sets(self) -> list[tuple[Element, ...]]:
        raise NotImplementedError

    def leading(self) -> tuple:
        raise NotImplementedError

    def extra_channels(self, cloud: PointCloud) -> np.ndarray:
        return np.zeros((cloud.n_points, 0))

    def validate_cloud(self, cloud: PointCloud, exact_count: bool = True) -> None:
        if cloud.dimension != self.dimension:
            raise InvalidInputError(
                f"{self.name} lives in R^{self.dimension}, cloud is in R^{cloud.dimension}")
        need = required_points(self)
        if exact_count and cloud.n_points != need:
            raise WrongCountError(f"{self.name} needs exactly {need} points, got {cloud.n_points}")

    def channels(self, cloud: PointCloud) -> np.ndarray:
        """Channel values per point, shape ``(N, n_channels)``, complex dtype."""
        cplx, real = self.view.split(cloud.points)
        extra = self.extra_channels(cloud)
        return np.hstack([cplx, real.astype(complex), extra.astype(complex)])

    def to_dict(self) -> dict:
        raise NotImplementedError

    # cyclic problems share the "polygon in the first complex channel" shape
    def _cyclic(self, r: int) -> FiniteAbelianGroup:
        return FiniteAbelianGroup((r,))


def _check_r(r: int) -> int:
    r = int(r)
    if r < 3:
        raise InvalidInputError(f"polygon factors must be >= 3, got {r}")
    return r


def _planes_for(dimension: int, n_planes: int, planes) -> CoordinateDecomposition:
    if planes is None:
        return CoordinateDecomposition.standard(dimension, n_planes)
    planes = tuple(tuple(int(i) for i in p) for p in planes)
    if len(planes) != n_planes or any(len(p) != 2 for p in planes):
        raise InvalidInputError(f"expected {n_planes} coordinate planes, got {planes}")
    if any(not 0 <= i < dimension for p in planes for i in p):
        raise InvalidInputError(f"plane indices {planes} out of range for R^{dimension}")
    return CoordinateDecomposition.with_planes(dimension, planes)


@dataclass(frozen=True)
class Polygon(ProblemKind):
    """Regular ``r``-gon partitions of points in the plane."""

    r: int
    name: ClassVar[str] = "polygon"
    certificate_kind: ClassVar[str] = "polygon"

    def __post_init__(self):
        object.__setattr__(self, "r", _check_r(self.r))

    def group(self):
        return self._cyclic(self.r)

    @property
    def dimension(self):
        return 2

    @property
    def view(self):
        return CoordinateDecomposition(((0, 1),))

    def kill_sets(self):
        G = self.group()
        return [tuple(h for h in G.elements if h[0] not in (0, 1))]

    def leading(self):
        return (((0, (1,)),),)

    def to_dict(self):
        return {"name": self.name, "r": self.r}


@dataclass(frozen=True)
class Multiprism(ProblemKind):
    """Products of regular polygons, each parallel to a prescribed coordinate plane."""

    factors: tuple[int, ...]
    planes: Optional[tuple[tuple[int, int], ...]] = None
    name: ClassVar[str] = "multiprism"
    certificate_kind: ClassVar[str] = "multiprism"

    def __post_init__(self):
        factors = tuple(_check_r(f) for f in self.factors)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "planes", _planes_for(2 * len(factors), len(factors),
                                                       self.planes).plane_pairs)

    def group(self):
        return FiniteAbelianGroup(self.factors)

    @property
    def dimension(self):
        return 2 * len(self.factors)

    @property
    def view(self):
        return CoordinateDecomposition.with_planes(self.dimension, self.planes)

    def kill_sets(self):
        G = self.group()
        keep = lambda i: {G.zero, G.unit_vector(i)}  # noqa: E731
        return [tuple(h for h in G.elements if h not in keep(i)) for i in range(G.rank)]

    def leading(self):
        G = self.group()
        return tuple(((i, G.unit_vector(i)),) for i in range(G.rank))

    def to_dict(self):
        return {"name": self.name, "factors": list(self.factors),
                "planes": [list(p) for p in self.planes]}


@dataclass(frozen=True)
class Prism(ProblemKind):
    """Multiprism times a segment along the remaining coordinate axis."""

    factors: tuple[int, ...]
    planes: Optional[tuple[tuple[int, int], ...]] = None
    name: ClassVar[str] = "prism"
    certificate_kind: ClassVar[str] = "prism"

    def __post_init__(self):
        factors = tuple(_check_r(f) for f in self.factors)
        object.__setattr__(self, "factors", factors)
        dim = 2 * len(factors) + 1
        object.__setattr__(self, "planes", _planes_for(dim, len(factors), self.planes).plane_pairs)

    def group(self):
        return FiniteAbelianGroup(self.factors + (2,))

    @property
    def dimension(self):
        return 2 * len(self.factors) + 1

    @property
    def view(self):
        return CoordinateDecomposition.with_planes(self.dimension, self.planes)

    def kill_sets(self):
        G = self.group()
        return [tuple(h for h in G.elements if h not in (G.zero, G.unit_vector(i)))
                for i in range(G.rank)]

    def leading(self):
        G = self.group()
        return tuple(((i, G.unit_vector(i)),) for i in range(G.rank))

    def to_dict(self):
        return {"name": self.name, "factors": list(self.factors),
                "planes": [list(p) for p in self.planes]}


@dataclass(frozen=True)
class Orthotope(ProblemKind):
    """Axis-parallel boxes in ``R^k`` indexed by ``Z2^k``."""

    k: int
    name: ClassVar[str] = "orthotope"
    certificate_kind: ClassVar[str] = "orthotope"

    def __post_init__(self):
        if int(self.k) < 1:
            raise InvalidInputError("orthotope dimension must be >= 1")
        object.__setattr__(self, "k", int(self.k))

    def group(self):
        return FiniteAbelianGroup((2,) * self.k)

    @property
    def dimension(self):
        return self.k

    @property
    def view(self):
        return CoordinateDecomposition((), tuple(range(self.k)))

    def kill_sets(self):
        G = self.group()
        return [tuple(h for h in G.elements if h not in (G.zero, G.unit_vector(i)))
                for i in range(self.k)]

    def leading(self):
        G = self.group()
        return tuple(((i, G.unit_vector(i)),) for i in range(self.k))

    def to_dict(self):
        return {"name": self.name, "k": self.k}


@dataclass(frozen=True)
class PolygonInPlane(ProblemKind):
    """Regular ``r``-gon parallel to an arbitrary 2-flat of ``R^D``."""

    r: int
    frame: PlaneFrame
    name: ClassVar[str] = "polygon-in-plane"
    certificate_kind: ClassVar[str] = "polygon"

    def __post_init__(self):
        object.__setattr__(self, "r", _check_r(self.r))

    def group(self):
        return self._cyclic(self.r)

    @property
    def dimension(self):
        return self.frame.dimension

    @property
    def view(self):
        return self.frame

    def kill_sets(self):
        G = self.group()
        nonzero = tuple(h for h in G.elements if h != G.zero)
        return [tuple(h for h in nonzero if h != (1,))] + [nonzero] * self.frame.n_real

    def leading(self):
        return (((0, (1,)),),)

    def to_dict(self):
        return {"name": self.name, "r": self.r, "frame": {
            "u": self.frame.u.tolist(), "w": self.frame.w.tolist(),
            "completion": self.frame.completion.tolist()}}


@dataclass(frozen=True)
class PolygonComplexFlat(ProblemKind):
    """Regular ``r``-gon inside a complex line of ``C^{D/2}``, ``D`` even."""

    r: int
    dim: int
    planes: Optional[tuple[tuple[int, int], ...]] = None
    name: ClassVar[str] = "complex-flat"
    certificate_kind: ClassVar[str] = "complex-flat"

    def __post_init__(self):
        object.__setattr__(self, "r", _check_r(self.r))
        if int(self.dim) < 2 or int(self.dim) % 2:
            raise InvalidInputError(f"{self.name} needs an even dimension >= 2, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "planes",
                           _planes_for(self.dim, self.dim // 2, self.planes).plane_pairs)

    def group(self):
        return self._cyclic(self.r)

    @property
    def dimension(self):
        return self.dim

    @property
    def view(self):
        return CoordinateDecomposition.with_planes(self.dim, self.planes)

    def kill_sets(self):
        G = self.group()
        poly = tuple(h for h in G.elements if h[0] not in (0, 1))
        return [poly] * (self.dim // 2)

    def leading(self):
        return (tuple((i, (1,)) for i in range(self.dim // 2)),)

    def to_dict(self):
        return {"name": self.name, "r": self.r, "dimension": self.dim,
                "planes": [list(p) for p in self.planes]}


@dataclass(frozen=True)
class ColoredPolygon(PolygonComplexFlat):
    """Rainbow ``r``-gon partitions with equal barycentric coordinates.

    The cloud carries ``n = (r-2) D + 1`` color classes of ``r`` points each,
    labelled ``0..n-1``.  Classes ``1..n-1`` contribute one real channel each:
    the indicator of the class, whose per-part value is the total barycentric
    weight the part puts on that class.
    """

    name: ClassVar[str] = "colored-polygon"
    certificate_kind: ClassVar[str] = "colored-polygon"

    @property
    def n_classes(self) -> int:
        return (self.r - 2) * self.dim + 1

    @property
    def n_extra_channels(self):
        return self.n_classes - 1

    def kill_sets(self):
        G = self.group()
        nonzero = tuple(h for h in G.elements if h != G.zero)
        return super().kill_sets() + [nonzero] * self.n_extra_channels

    def validate_cloud(self, cloud, exact_count=True):
        super().validate_cloud(cloud, exact_count)
        if cloud.colors is None:
            raise InvalidInputError("colored-polygon needs color classes")
        classes = cloud.color_classes()
        if exact_count and sorted(classes) != list(range(self.n_classes)):
            raise InvalidInputError(
                f"expected color classes 0..{self.n_classes - 1}, got {sorted(classes)}")
        if any(len(idx) != self.r for idx in classes.values()):
            raise InvalidInputError(f"every color class needs exactly {self.r} points")

    def extra_channels(self, cloud):
        if cloud.colors is None:
            raise InvalidInputError("colored-polygon needs color classes")
        return np.stack([(cloud.colors == c).astype(float)
                         for c in range(1, self.n_classes)], axis=1)


KINDS = {cls.name: cls for cls in
         (Polygon, Multiprism, Prism, Orthotope, PolygonInPlane, PolygonComplexFlat,
          ColoredPolygon)}


def build_target(kind: ProblemKind) -> AnnihilationTarget:
    """Annihilation target for ``kind``: full kill sets, halved on real channels."""
    G = kind.group()
    flags = kind.real_flags()
    sets = kind.kill_sets()
    if len(sets) != len(flags):
        raise InvalidInputError(f"{kind.name}: channel layout mismatch")
    killed = tuple(conjugate_representatives(G, S) if real else tuple(S)
                   for S, real in zip(sets, flags))
    return AnnihilationTarget(G, killed, flags, kind.leading())


def required_points(kind: ProblemKind) -> int:
    return build_target(kind).required_points


def make_kind(name: str, dimension: Optional[int] = None, r: Optional[int] = None,
              factors: Optional[Sequence[int]] = None, k: Optional[int] = None,
              planes=None, frame: Optional[PlaneFrame] = None) -> ProblemKind:
    """Build a problem kind from loose parameters (CLI and estimator entry point).

    ``polygon`` in a dimension other than 2, or with a frame, becomes a
    :class:`PolygonInPlane`; a single ``planes`` entry selects a coordinate
    frame in that case.
    """
    if name not in KINDS:
        raise InvalidInputError(f"unknown problem kind {name!r}; choose from {sorted(KINDS)}")
    if planes is not None:
        planes = tuple(tuple(int(i) for i in p) for p in planes)
    if name in ("polygon", "polygon-in-plane"):
        if r is None:
            raise InvalidInputError(f"{name} needs r")
        if frame is None and name == "polygon" and dimension in (None, 2) and planes in (None, ((0, 1),)):
            return Polygon(r)
        if frame is None:
            if dimension is None:
                raise InvalidInputError("a plane-prescribed polygon needs the dimension")
            i, j = planes[0] if planes else (0, 1)
            frame = PlaneFrame.coordinate(dimension, i, j)
        if dimension is not None and frame.dimension != dimension:
            raise InvalidInputError(f"frame lives in R^{frame.dimension}, not R^{dimension}")
        return PolygonInPlane(r, frame)
    if name in ("multiprism", "prism"):
        if factors is None:
            factors = (r,) if r is not None else None
        if not factors:
            raise InvalidInputError(f"{name} needs polygon factors")
        cls = KINDS[name]
        kind = cls(tuple(factors), planes)
        if dimension is not None and kind.dimension != dimension:
            raise InvalidInputError(f"{name} over {tuple(factors)} lives in R^{kind.dimension}")
        return kind
    if name == "orthotope":
        k = k if k is not None else dimension
        if k is None:
            raise InvalidInputError("orthotope needs k")
        if dimension is not None and dimension != k:
            raise InvalidInputError(f"orthotope of rank {k} lives in R^{k}")
        return Orthotope(k)
    if r is None or dimension is None:
        raise InvalidInputError(f"{name} needs r and an even dimension")
    return KINDS[name](r, dimension, planes)


def kind_from_dict(data: dict) -> ProblemKind:
    name = data.get("name")
    if name == "polygon-in-plane":
        fr = data["frame"]
        return PolygonInPlane(data["r"], PlaneFrame(fr["u"], fr["w"], fr.get("completion")))
    return make_kind(name, dimension=data.get("dimension"), r=data.get("r"),
                     factors=data.get("factors"), k=data.get("k"), planes=data.get("planes"))
