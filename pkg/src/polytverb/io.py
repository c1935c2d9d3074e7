"""JSON instance, result and frame files.

Floats are written with Python's shortest round-trip ``repr``, so a
write-then-read cycle reproduces every coordinate bit for bit.  Group
elements are keyed by their comma-joined coordinates, e.g. ``"1,0"``.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
from typing import Any, Optional, Union

import numpy as np

from . import __version__
from .caratheodory import SolverReport, SolverStatus
from .engine import PartitionResult
from .exceptions import InvalidInputError, MalformedFileError
from .fourier import FiniteAbelianGroup
from .geometry import PlaneFrame, PointCloud, certify_polytope
from .problems import kind_from_dict

PathLike = Union[str, os.PathLike]
TOOL = "polytverb"


def element_key(g) -> str:
    return ",".join(str(int(x)) for x in g)


def parse_element_key(key: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in key.split(","))
    except ValueError as exc:
        raise MalformedFileError(f"bad group element key {key!r}") from exc


def _read_json(path: PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedFileError(f"cannot read {path}: {exc}") from exc


def _write_json(path: Optional[PathLike], data: Any) -> str:
    text = json.dumps(data, indent=2) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# -- instances --------------------------------------------------------------

def instance_to_dict(cloud: PointCloud, metadata: Optional[dict] = None) -> dict:
    data = {"dimension": cloud.dimension, "points": cloud.points.tolist()}
    if cloud.colors is not None:
        data["colors"] = [int(c) for c in cloud.colors]
    if metadata:
        data["metadata"] = dict(metadata)
    return data


def instance_from_dict(data: Any) -> tuple[PointCloud, dict]:
    if not isinstance(data, dict) or "points" not in data:
        raise MalformedFileError("an instance needs a 'points' array")
    points = data["points"]
    if (not isinstance(points, list) or not points
            or not all(isinstance(p, list) for p in points)
            or len({len(p) for p in points}) != 1):
        raise MalformedFileError("'points' must be a non-empty rectangular array")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for p in points for x in p):
        raise MalformedFileError("'points' must hold numbers only")
    dim = data.get("dimension", len(points[0]))
    if dim != len(points[0]):
        raise MalformedFileError(f"'dimension' is {dim} but points have {len(points[0])} coordinates")
    colors = data.get("colors")
    if colors is not None:
        if (not isinstance(colors, list) or len(colors) != len(points)
                or not all(isinstance(c, int) and not isinstance(c, bool) for c in colors)):
            raise MalformedFileError("'colors' must hold one integer per point")
        colors = np.array(colors, dtype=int)
    try:
        cloud = PointCloud(np.array(points, dtype=float), colors)
    except InvalidInputError as exc:
        raise MalformedFileError(str(exc)) from exc
    return cloud, dict(data.get("metadata") or {})


def save_instance(path: Optional[PathLike], cloud: PointCloud,
                  metadata: Optional[dict] = None) -> str:
    return _write_json(path, instance_to_dict(cloud, metadata))


def load_instance(path: PathLike) -> tuple[PointCloud, dict]:
    return instance_from_dict(_read_json(path))


# -- frames -----------------------------------------------------------------

def load_frame(path: PathLike) -> PlaneFrame:
    data = _read_json(path)
    try:
        return PlaneFrame(np.array(data["u"], dtype=float), np.array(data["w"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedFileError(f"a frame file needs vectors 'u' and 'w': {exc}") from exc


def save_frame(path: Optional[PathLike], frame: PlaneFrame) -> str:
    return _write_json(path, frame.to_dict())


# -- results ----------------------------------------------------------------

def result_to_dict(result: PartitionResult, timestamp: bool = True) -> dict:
    """Serializable form of a partition result.

    ``created`` is the only field that varies between identical runs.
    """
    G = result.group
    cert = result.certificate
    data = {
        "tool": TOOL,
        "version": __version__,
        "kind": result.kind.to_dict(),
        "group": list(G.factors),
        "parts": {element_key(g): list(result.parts[g]) for g in G.elements},
        "weights": {element_key(g): list(result.weights[g]) for g in G.elements},
        "vertices": {element_key(g): np.asarray(result.vertices[g], dtype=float).tolist()
                     for g in G.elements},
        "residuals": {"kill": cert.residual, "lead": cert.leading_magnitude},
        "certificate": cert.to_dict(),
        "solver": result.report.to_dict() if result.report is not None else None,
        "seed": result.seed,
    }
    if timestamp:
        data["created"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return data


def result_from_dict(data: Any) -> PartitionResult:
    """Rebuild a :class:`PartitionResult`; the certificate is recomputed."""
    if not isinstance(data, dict):
        raise MalformedFileError("a result must be a JSON object")
    try:
        kind = kind_from_dict(data["kind"])
        G = FiniteAbelianGroup(tuple(data["group"]))
        if G.factors != kind.group().factors:
            raise MalformedFileError("result group does not match its problem kind")
        parts, weights, vertices = {}, {}, {}
        for key, idx in data["parts"].items():
            g = G.check(parse_element_key(key))
            parts[g] = tuple(int(i) for i in idx)
            weights[g] = tuple(float(w) for w in data["weights"][key])
            vertices[g] = np.array(data["vertices"][key], dtype=float)
        if set(parts) != set(G.elements):
            raise MalformedFileError("result must list a part for every group element")
        solver = data.get("solver")
        report = None
        if solver:
            report = SolverReport(int(solver["iterations"]), int(solver["pivots"]),
                                  float(solver["final_residual"]), SolverStatus(solver["status"]),
                                  int(solver.get("restarts", 0)))
    except MalformedFileError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedFileError(f"malformed result: {exc!r}") from exc
    verts = np.array([vertices[g] for g in G.elements])
    cert = certify_polytope(G, verts, kind.certificate_kind, kind.view)
    return PartitionResult(kind, G, parts, weights, vertices, cert, report, data.get("seed"))


def save_result(path: Optional[PathLike], result: PartitionResult, timestamp: bool = True) -> str:
    return _write_json(path, result_to_dict(result, timestamp))


def load_result(path: PathLike) -> PartitionResult:
    return result_from_dict(_read_json(path))
