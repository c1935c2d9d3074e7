"""Point clouds, coordinate views and Fourier certificates for polytopes.

A *view* turns points of ``R^D`` into ``d`` complex coordinates plus ``d'``
real ones.  Two views exist: :class:`CoordinateDecomposition` (a relabeling
of coordinates into planes and lines) and :class:`PlaneFrame` (an orthonormal
2-frame plus an orthonormal completion).  Both expose ``split`` and
``merge``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np
from scipy.linalg import null_space

from .exceptions import GroupMismatchError, InvalidInputError
from .fourier import Element, FiniteAbelianGroup, spectrum_array

EPS_KILL = 1e-7
EPS_LEAD = 1e-7

CERTIFICATE_KINDS = ("polygon", "multiprism", "prism", "orthotope",
                     "colored-polygon", "complex-flat")


@dataclass(frozen=True, eq=False)
class PointCloud:
    """``N`` points in ``R^D``, optionally split into color classes."""

    points: np.ndarray
    colors: Optional[np.ndarray] = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidInputError(f"points must be a non-empty (N, D) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InvalidInputError("points contain non-finite coordinates")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.colors is not None:
            colors = np.array(self.colors)
            if colors.shape != (pts.shape[0],) or not np.issubdtype(colors.dtype, np.integer):
                raise InvalidInputError("colors must be one integer class index per point")
            colors.setflags(write=False)
            object.__setattr__(self, "colors", colors)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def color_classes(self) -> dict[int, np.ndarray]:
        if self.colors is None:
            return {}
        return {int(c): np.flatnonzero(self.colors == c) for c in np.unique(self.colors)}

    def __len__(self):
        return self.n_points

    def __eq__(self, other):
        if not isinstance(other, PointCloud):
            return NotImplemented
        same_colors = (self.colors is None and other.colors is None) or (
            self.colors is not None and other.colors is not None
            and np.array_equal(self.colors, other.colors))
        return np.array_equal(self.points, other.points) and same_colors


def _as_points(points) -> np.ndarray:
    if isinstance(points, PointCloud):
        return points.points
    arr = np.asarray(points, dtype=float)
    return arr.reshape(1, -1) if arr.ndim == 1 else arr


@dataclass(frozen=True)
class CoordinateDecomposition:
    """Coordinate planes ``U_i`` (ordered index pairs) and lines ``L_j``.

    The first index of a pair becomes the real part of the complex coordinate.
    """

    plane_pairs: tuple[tuple[int, int], ...]
    line_indices: tuple[int, ...] = ()

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.plane_pairs)
        lines = tuple(int(i) for i in self.line_indices)
        object.__setattr__(self, "plane_pairs", pairs)
        object.__setattr__(self, "line_indices", lines)
        used = [i for p in pairs for i in p] + list(lines)
        if sorted(used) != list(range(len(used))):
            raise InvalidInputError(
                f"decomposition indices {used} must be distinct and cover 0..{len(used) - 1}")

    @classmethod
    def standard(cls, dimension: int, n_planes: int) -> "CoordinateDecomposition":
        if 2 * n_planes > dimension:
            raise InvalidInputError(f"{n_planes} planes do not fit in R^{dimension}")
        pairs = tuple((2 * i, 2 * i + 1) for i in range(n_planes))
        return cls(pairs, tuple(range(2 * n_planes, dimension)))

    @classmethod
    def with_planes(cls, dimension: int, planes: Sequence[Sequence[int]]) -> "CoordinateDecomposition":
        """Given planes, remaining coordinates become lines in increasing order."""
        used = {int(i) for p in planes for i in p}
        return cls(tuple(tuple(p) for p in planes),
                   tuple(i for i in range(dimension) if i not in used))

    @property
    def dimension(self) -> int:
        return 2 * len(self.plane_pairs) + len(self.line_indices)

    @property
    def n_complex(self) -> int:
        return len(self.plane_pairs)

    @property
    def n_real(self) -> int:
        return len(self.line_indices)

    def split(self, points) -> tuple[np.ndarray, np.ndarray]:
        pts = _as_points(points)
        if pts.shape[1] != self.dimension:
            raise InvalidInputError(
                f"decomposition covers R^{self.dimension}, points live in R^{pts.shape[1]}")
        cplx = np.empty((pts.shape[0], self.n_complex), dtype=complex)
        for k, (a, b) in enumerate(self.plane_pairs):
            cplx[:, k] = pts[:, a] + 1j * pts[:, b]
        return cplx, pts[:, list(self.line_indices)].copy()

    def merge(self, cplx, real) -> np.ndarray:
        cplx = np.asarray(cplx, dtype=complex).reshape(-1, self.n_complex)
        real = np.asarray(real, dtype=float).reshape(cplx.shape[0], self.n_real)
        out = np.empty((cplx.shape[0], self.dimension))
        for k, (a, b) in enumerate(self.plane_pairs):
            out[:, a] = cplx[:, k].real
            out[:, b] = cplx[:, k].imag
        out[:, list(self.line_indices)] = real
        return out

    def to_dict(self) -> dict:
        return {"planes": [list(p) for p in self.plane_pairs],
                "lines": list(self.line_indices)}


@dataclass(frozen=True, eq=False)
class PlaneFrame:
    """Orthonormal pair ``(u, w)`` spanning a 2-flat, with a completion basis."""

    u: np.ndarray
    w: np.ndarray
    completion: Optional[np.ndarray] = None
    tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float).ravel()
        w = np.asarray(self.w, dtype=float).ravel()
        if u.shape != w.shape or u.size < 2:
            raise InvalidInputError("frame vectors must share a dimension >= 2")
        comp = self.completion
        if comp is None:
            comp = null_space(np.vstack([u, w])).T
        comp = np.asarray(comp, dtype=float).reshape(-1, u.size)
        basis = np.vstack([u, w, comp])
        if basis.shape[0] != u.size or not np.allclose(basis @ basis.T, np.eye(u.size),
                                                       atol=self.tol, rtol=0):
            raise InvalidInputError("frame is not orthonormal")
        for name, arr in (("u", u), ("w", w), ("completion", comp)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_span(cls, a, b) -> "PlaneFrame":
        """Gram-Schmidt on two spanning vectors."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        u = a / np.linalg.norm(a)
        w = b - (b @ u) * u
        nw = np.linalg.norm(w)
        if nw < 1e-12:
            raise InvalidInputError("plane vectors are parallel")
        return cls(u, w / nw)

    @classmethod
    def coordinate(cls, dimension: int, i: int, j: int) -> "PlaneFrame":
        eye = np.eye(dimension)
        rest = [k for k in range(dimension) if k not in (i, j)]
        return cls(eye[i], eye[j], eye[rest])

    @classmethod
    def random(cls, dimension: int, seed=None) -> "PlaneFrame":
        rng = np.random.default_rng(seed)
        q, _ = np.linalg.qr(rng.standard_normal((dimension, dimension)))
        return cls(q[:, 0], q[:, 1], q[:, 2:].T)

    @property
    def dimension(self) -> int:
        return self.u.size

    @property
    def n_complex(self) -> int:
        return 1

    @property
    def n_real(self) -> int:
        return self.dimension - 2

    def split(self, points) -> tuple[np.ndarray, np.ndarray]:
        pts = _as_points(points)
        if pts.shape[1] != self.dimension:
            raise InvalidInputError(
                f"frame lives in R^{self.dimension}, points live in R^{pts.shape[1]}")
        cplx = (pts @ self.u + 1j * (pts @ self.w)).reshape(-1, 1)
        return cplx, pts @ self.completion.T

    def merge(self, cplx, real) -> np.ndarray:
        cplx = np.asarray(cplx, dtype=complex).reshape(-1)
        real = np.asarray(real, dtype=float).reshape(cplx.size, self.n_real)
        return (np.outer(cplx.real, self.u) + np.outer(cplx.imag, self.w)
                + real @ self.completion)

    def to_dict(self) -> dict:
        return {"u": self.u.tolist(), "w": self.w.tolist()}


View = Union[CoordinateDecomposition, PlaneFrame]


def apply_decomposition(cloud, dec: CoordinateDecomposition):
    """Per-point complex plane coordinates and real line coordinates."""
    return dec.split(cloud)


def frame_project(cloud, frame: PlaneFrame):
    """Coordinates of each point in the frame (complex) and completion (real)."""
    return frame.split(cloud)


def generate_points(dimension: int, count: int, seed=0, scale: float = 1.0,
                    colors: Optional[Sequence[int]] = None) -> PointCloud:
    """I.i.d. uniform points in ``[-scale, scale]^D`` from a Philox stream."""
    if dimension < 1 or count < 1:
        raise InvalidInputError("dimension and count must be >= 1")
    rng = np.random.Generator(np.random.Philox(seed))
    pts = rng.uniform(-scale, scale, size=(count, dimension))
    while len(np.unique(pts, axis=0)) < count:
        _, first = np.unique(pts, axis=0, return_index=True)
        dup = np.setdiff1d(np.arange(count), first)
        pts[dup] = rng.uniform(-scale, scale, size=(dup.size, dimension))
    return PointCloud(pts, None if colors is None else np.asarray(colors, dtype=int))


@dataclass(frozen=True)
class PolytopeCertificate:
    """Spectral recognition result for a group-indexed vertex tuple.

    ``residual`` is the largest coefficient that should vanish;
    ``leading_magnitude`` the smallest coefficient that must not.
    """

    kind: str
    centers: tuple
    leading: tuple
    units: tuple[int, ...]
    residual: float
    leading_magnitude: float
    eps_kill: float = EPS_KILL
    eps_lead: float = EPS_LEAD

    @property
    def valid(self) -> bool:
        return self.residual <= self.eps_kill and self.leading_magnitude >= self.eps_lead

    def to_dict(self) -> dict:
        def num(z):
            z = complex(z)
            return [z.real, z.imag]
        return {"kind": self.kind, "valid": self.valid, "residual": self.residual,
                "leading_magnitude": self.leading_magnitude, "units": list(self.units),
                "centers": [num(c) for c in self.centers],
                "leading": [num(c) for c in self.leading]}


def _units(r: int) -> list[int]:
    return [u for u in range(1, r) if math.gcd(u, r) == 1] if r > 2 else [1]


def _best_unit_fit(G: FiniteAbelianGroup, coeffs: np.ndarray, axes: Sequence[int],
                   cyclic_factor: int):
    """Pick the unit ``u`` whose support ``{0, u e}`` best explains ``coeffs``.

    ``coeffs`` has shape ``(|G|, n)``; all columns share the unit.  Returns
    ``(u, residual, leading_column_values)``.
    """
    best = None
    zero = G.index(G.zero)
    for u in _units(G.factors[cyclic_factor]):
        lead = G.index(G.scale(u, G.unit_vector(cyclic_factor)))
        mask = np.ones(G.order, dtype=bool)
        mask[[zero, lead]] = False
        resid = float(np.max(np.abs(coeffs[mask][:, axes]))) if mask.any() else 0.0
        lead_vals = coeffs[lead, axes]
        key = (resid, -float(np.linalg.norm(lead_vals)))
        if best is None or key < best[0]:
            best = (key, u, resid, lead_vals)
    return best[1], best[2], best[3]


def _constant_residual(coeffs: np.ndarray) -> float:
    if coeffs.size == 0:
        return 0.0
    return float(np.max(np.abs(coeffs[1:]))) if coeffs.shape[0] > 1 else 0.0


def default_view(kind: str, G: FiniteAbelianGroup, dimension: int) -> View:
    if kind == "orthotope":
        return CoordinateDecomposition((), tuple(range(dimension)))
    if kind == "prism":
        return CoordinateDecomposition.standard(dimension, G.rank - 1)
    if kind == "multiprism":
        return CoordinateDecomposition.standard(dimension, G.rank)
    if kind in ("complex-flat", "colored-polygon"):
        return CoordinateDecomposition.standard(dimension, dimension // 2)
    return CoordinateDecomposition.standard(dimension, 1)


def vertex_array(G: FiniteAbelianGroup, vertices) -> np.ndarray:
    """Vertices as a ``(|G|, D)`` array in enumeration order."""
    if isinstance(vertices, Mapping):
        keys = {tuple(k) for k in vertices}
        missing = [g for g in G.elements if g not in keys]
        if missing:
            raise GroupMismatchError(f"no vertex for group elements {missing[:4]}")
        lookup = {tuple(k): v for k, v in vertices.items()}
        arr = np.array([np.atleast_1d(np.asarray(lookup[g], dtype=float)) for g in G.elements])
    else:
        arr = np.asarray(vertices, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.shape[0] != G.order:
            raise GroupMismatchError(f"expected {G.order} vertices, got {arr.shape[0]}")
    return arr


def certify_polytope(G: FiniteAbelianGroup, vertices, kind: str,
                     view: Optional[View] = None, eps_kill: float = EPS_KILL,
                     eps_lead: float = EPS_LEAD) -> PolytopeCertificate:
    """Recognize a group-indexed vertex tuple by its Fourier spectrum.

    Parameters
    ----------
    G : FiniteAbelianGroup
        Index group of the vertices.
    vertices : mapping or array
        One vertex per group element (``(|G|, D)`` array in enumeration order
        or a mapping from element tuples to vectors).
    kind : str
        One of ``polygon``, ``multiprism``, ``prism``, ``orthotope``,
        ``complex-flat``, ``colored-polygon``.
    view : CoordinateDecomposition or PlaneFrame, optional
        Orientation the polytope must be aligned with.  Coordinates of the view
        not claimed by a polygon/segment factor must be constant.

    Returns
    -------
    PolytopeCertificate
    """
    if kind not in CERTIFICATE_KINDS:
        raise InvalidInputError(f"unknown polytope kind {kind!r}")
    verts = vertex_array(G, vertices)
    if view is None:
        view = default_view(kind, G, verts.shape[1])
    cplx, real = view.split(verts)
    C = spectrum_array(G, cplx)
    R = spectrum_array(G, real.astype(complex))
    factors = G.factors

    centers, leading, units, residuals, magnitudes = [], [], [], [], []

    def factor(coeffs, axes, i):
        u, resid, lead = _best_unit_fit(G, coeffs, axes, i)
        units.append(u)
        residuals.append(resid)
        leading.extend(complex(c) for c in lead)
        centers.extend(complex(c) for c in coeffs[G.index(G.zero), axes])
        magnitudes.append(float(np.linalg.norm(lead)))

    if kind in ("polygon", "complex-flat", "colored-polygon"):
        if G.rank != 1 or factors[0] < 3:
            raise GroupMismatchError(f"{kind} needs a cyclic group of order >= 3, got {G}")
        if view.n_complex < 1:
            raise InvalidInputError(f"{kind} needs at least one complex coordinate")
        n_poly = 1 if kind == "polygon" else view.n_complex
        factor(C, list(range(n_poly)), 0)
        residuals.append(_constant_residual(C[:, n_poly:]))
        residuals.append(_constant_residual(R))
    elif kind == "multiprism":
        if any(f < 3 for f in factors) or view.n_complex != G.rank:
            raise GroupMismatchError(
                f"multiprism over {G} needs {G.rank} complex coordinates and factors >= 3")
        for i in range(G.rank):
            factor(C, [i], i)
        residuals.append(_constant_residual(R))
    elif kind == "prism":
        k = G.rank - 1
        if factors[-1] != 2 or any(f < 3 for f in factors[:-1]):
            raise GroupMismatchError(f"prism needs a group G + Z2 with factors >= 3, got {G}")
        if view.n_complex != k or view.n_real < 1:
            raise InvalidInputError(f"prism over {G} needs {k} complex and >= 1 real coordinates")
        for i in range(k):
            factor(C, [i], i)
        factor(R, [0], k)
        residuals.append(_constant_residual(R[:, 1:]))
    else:  # orthotope
        if any(f != 2 for f in factors):
            raise GroupMismatchError(f"orthotope needs Z2^k, got {G}")
        if view.n_complex != 0 or view.n_real != G.rank:
            raise InvalidInputError(f"orthotope over {G} needs {G.rank} real coordinates")
        for i in range(G.rank):
            factor(R, [i], i)

    return PolytopeCertificate(
        kind=kind, centers=tuple(centers), leading=tuple(leading), units=tuple(units),
        residual=float(max(residuals)), leading_magnitude=float(min(magnitudes)),
        eps_kill=eps_kill, eps_lead=eps_lead)
