"""End-to-end partition search and independent re-verification."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .caratheodory import EPS_ZERO, SolverReport, SolverStatus, solve
from .exceptions import (DegenerateError, EmptyPartError, InvalidInputError,
                         SolverFailedError)
from .fourier import Element, FiniteAbelianGroup
from .geometry import EPS_KILL, EPS_LEAD, PointCloud, PolytopeCertificate, certify_polytope
from .problems import (ColoredPolygon, PolygonComplexFlat, PolygonInPlane, ProblemKind,
                       build_target)
from .reduction import build_map_table, group_join_point

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PartitionResult:
    """A polytopal partition with its witnesses.

    ``parts[g]`` lists point indices, ``weights[g]`` their barycentric weights
    and ``vertices[g]`` the witness image in the original coordinates.
    """

    kind: ProblemKind
    group: FiniteAbelianGroup
    parts: dict[Element, tuple[int, ...]]
    weights: dict[Element, tuple[float, ...]]
    vertices: dict[Element, np.ndarray]
    certificate: PolytopeCertificate
    report: Optional[SolverReport] = None
    seed: Optional[int] = None

    def vertex_array(self) -> np.ndarray:
        return np.array([self.vertices[g] for g in self.group.elements])

    def labels(self, n_points: int) -> np.ndarray:
        """Enumeration index of each point's part, ``-1`` when unused."""
        lab = np.full(n_points, -1, dtype=int)
        for a, g in enumerate(self.group.elements):
            lab[list(self.parts[g])] = a
        return lab


@dataclass
class Verification:
    """Per-check ``(value, threshold, passed)`` triples."""

    checks: dict[str, tuple[float, float, bool]] = field(default_factory=dict)

    def add(self, name: str, value: float, threshold: float, upper: bool = True):
        ok = value <= threshold if upper else value >= threshold
        self.checks[name] = (float(value), float(threshold), bool(ok))

    @property
    def passed(self) -> bool:
        return all(ok for _, _, ok in self.checks.values())

    def __bool__(self):
        return self.passed

    def table(self) -> str:
        lines = [f"{'check':<20} {'value':>12} {'threshold':>12}  result"]
        for name, (v, t, ok) in self.checks.items():
            lines.append(f"{name:<20} {v:>12.3e} {t:>12.3e}  {'pass' if ok else 'FAIL'}")
        return "\n".join(lines)


def _result_from_weights(cloud, kind, G, grouped, report, seed, eps_kill, eps_lead):
    verts = grouped.witness_points(cloud.points)
    cert = certify_polytope(G, verts, kind.certificate_kind, kind.view, eps_kill, eps_lead)
    parts, weights, vertices = {}, {}, {}
    for a, g in enumerate(G.elements):
        order = np.argsort(grouped.supports[a], kind="stable")
        parts[g] = tuple(int(i) for i in grouped.supports[a][order])
        weights[g] = tuple(float(w) for w in grouped.witness[a][order])
        vertices[g] = verts[a]
    return PartitionResult(kind, G, parts, weights, vertices, cert, report, seed)


def find_partition(cloud: PointCloud, kind: ProblemKind, *, eps_zero: float = EPS_ZERO,
                   eps_kill: float = EPS_KILL, eps_lead: float = EPS_LEAD,
                   max_iter: int = 20000, seed: int = 0, retries: int = 5,
                   allow_surplus: bool = False) -> PartitionResult:
    """Partition ``cloud`` so that one point per part spans the polytope of ``kind``.

    Parameters
    ----------
    cloud : PointCloud
        Exactly ``required_points(kind)`` points (at least that many with
        ``allow_surplus``; surplus points may end up unused).
    kind : ProblemKind
    seed : int
        Seeds the solver's initial selections; attempt ``a`` uses ``[seed, a]``.
    retries : int
        Extra attempts after a degenerate zero or a solver failure.

    Raises
    ------
    WrongCountError, InvalidInputError
        Bad input.
    DegenerateError
        Every attempt found a zero whose leading coefficients vanish too.
    SolverFailedError
        Every attempt exhausted the pivot budget.
    """
    kind.validate_cloud(cloud, exact_count=not allow_surplus)
    target = build_target(kind)
    if cloud.n_points < target.required_points:
        raise InvalidInputError(f"{kind.name} needs at least {target.required_points} points")
    G = target.group
    table = build_map_table(target, kind.channels(cloud), check_count=not allow_surplus)

    last_error: Exception = SolverFailedError("no attempt was made")
    for attempt in range(retries + 1):
        selection, report = solve(table, max_iter=max_iter, seed=[seed, attempt],
                                  eps_zero=eps_zero)
        if report.status is SolverStatus.PRECONDITION_FAILED:
            raise SolverFailedError("map table violates the barycenter precondition")
        if report.status is not SolverStatus.ZERO:
            last_error = SolverFailedError(
                f"no zero within {max_iter} pivots (best residual {report.final_residual:.3g})")
            log.info("attempt %d: %s", attempt, last_error)
            continue
        try:
            grouped = group_join_point(G, selection.chosen, selection.weights)
        except EmptyPartError as exc:
            last_error = SolverFailedError(str(exc))
            continue
        result = _result_from_weights(cloud, kind, G, grouped, report, seed, eps_kill, eps_lead)
        cert = result.certificate
        if cert.leading_magnitude < eps_lead:
            last_error = DegenerateError(
                f"leading coefficient {cert.leading_magnitude:.3g} < {eps_lead:g}: "
                "the zero is a Tverberg-type collapse")
            log.info("attempt %d: %s", attempt, last_error)
            continue
        if not cert.valid:
            last_error = SolverFailedError(f"certificate residual {cert.residual:.3g} too large")
            continue
        if isinstance(kind, ColoredPolygon) and not verify_result(cloud, kind, result):
            last_error = DegenerateError("parts are not rainbow with equal barycentric weights")
            continue
        return result
    raise last_error


def verify_result(cloud: PointCloud, kind: ProblemKind, result: PartitionResult, *,
                  eps_kill: float = EPS_KILL, eps_lead: float = EPS_LEAD,
                  side_tol: float = 1e-7) -> Verification:
    """Recompute witnesses and spectra from the parts and weights alone."""
    G = kind.group()
    n = cloud.n_points
    ver = Verification()
    if result.group.factors != G.factors or set(result.parts) != set(G.elements):
        ver.add("shape", 1, 0)
        return ver

    all_idx = [i for g in G.elements for i in result.parts[g]]
    bad = sum(1 for i in all_idx if not 0 <= i < n)
    bad += sum(1 for g in G.elements if len(result.parts[g]) == 0)
    bad += sum(1 for g in G.elements if len(result.parts[g]) != len(result.weights[g]))
    ver.add("indices", bad, 0)
    ver.add("disjoint", len(all_idx) - len(set(all_idx)), 0)
    if ver.checks["indices"][2] is False:
        return ver

    conv = 0.0
    verts = np.zeros((G.order, cloud.dimension))
    for a, g in enumerate(G.elements):
        w = np.asarray(result.weights[g], dtype=float)
        conv = max(conv, abs(w.sum() - 1.0), float(np.max(-w, initial=0.0)))
        verts[a] = w @ cloud.points[list(result.parts[g])]
    ver.add("convexity", conv, 1e-9)
    reported = np.array([np.asarray(result.vertices[g], dtype=float) for g in G.elements])
    ver.add("vertices", float(np.max(np.abs(reported - verts))), 1e-10)

    cert = certify_polytope(G, verts, kind.certificate_kind, kind.view, eps_kill, eps_lead)
    ver.add("kill", cert.residual, eps_kill)
    ver.add("lead", cert.leading_magnitude, eps_lead, upper=False)

    if isinstance(kind, PolygonInPlane):
        diffs = verts - verts[0]
        ver.add("plane", float(np.max(np.abs(diffs @ kind.frame.completion.T), initial=0.0)),
                side_tol)
    if isinstance(kind, PolygonComplexFlat):
        cplx, _ = kind.view.split(verts)
        diffs = cplx[1:] - cplx[0]
        sv = np.linalg.svd(diffs, compute_uv=False)
        ver.add("complex-rank", float(sv[1]) if sv.size > 1 else 0.0, side_tol)
    if isinstance(kind, ColoredPolygon):
        rainbow_bad, spread = 0, 0.0
        classes = cloud.color_classes()
        for c, members in classes.items():
            member_set = set(int(i) for i in members)
            per_part = []
            for g in G.elements:
                hits = [k for k, i in enumerate(result.parts[g]) if i in member_set]
                if len(hits) != 1:
                    rainbow_bad += 1
                per_part.append(sum(result.weights[g][k] for k in hits))
            spread = max(spread, max(per_part) - min(per_part))
        ver.add("rainbow", rainbow_bad, 0)
        ver.add("equal-barycentric", spread, side_tol)
    return ver
