"""Exhaustive ground truth for small instances.

Every surjective labeling of the points by the group is tested for a convex
weighting per part that kills the targeted Fourier coefficients.  This is
independent of the pivoting solver: it works in barycentric weights per part
and uses linear programming, not the join-of-groups map.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from .exceptions import EnumerationBoundError, InvalidInputError
from .fourier import FiniteAbelianGroup
from .geometry import PointCloud, certify_polytope, generate_points
from .lp import linprog_eq
from .problems import (AnnihilationTarget, ProblemKind, build_target,
                       conjugate_representatives, required_points)
from .reduction import RepresentationSpace

MAX_LABELINGS = 500_000
CONSISTENCY_TOL = 1e-7
NONDEGENERATE_TOL = 1e-9


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind, by the explicit alternating sum."""
    return sum((-1) ** i * math.comb(k, i) * (k - i) ** n for i in range(k + 1)) // math.factorial(k)


def surjection_count(n: int, r: int) -> int:
    return math.factorial(r) * stirling2(n, r)


def set_partitions(n: int, r: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings of length ``n`` with exactly ``r`` blocks."""
    if r < 1 or n < r:
        return
    a = [0] * n

    def rec(i, top):
        if n - i < r - 1 - top:
            return
        if i == n:
            if top == r - 1:
                yield tuple(a)
            return
        for v in range(min(top + 1, r - 1) + 1):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0)


def _symmetries(G: FiniteAbelianGroup, units: bool) -> list[np.ndarray]:
    """Index permutations ``g -> u g + s`` (``u = 1`` unless ``units``)."""
    scalars = [1]
    if units and G.rank == 1:
        scalars = [u for u in range(1, G.order) if math.gcd(u, G.order) == 1]
    maps = []
    for u in scalars:
        for s in G.elements:
            maps.append(np.array([G.index(G.add(G.scale(u, g), s)) for g in G.elements]))
    return maps


@lru_cache(maxsize=64)
def _assignments(factors: tuple[int, ...], mode: str):
    """Block-to-element assignments to test, and the relabelings applied to each.

    ``mode`` is ``all`` (no deduplication), ``affine`` (modulo translations and,
    for cyclic groups, unit multiplication) or ``any`` (labels irrelevant).
    """
    G = FiniteAbelianGroup(factors)
    r = G.order
    if mode == "any":
        return [tuple(range(r))], [np.arange(r)]
    if mode == "all":
        return list(itertools.permutations(range(r))), [np.arange(r)]
    syms = _symmetries(G, units=True)
    reps = sorted({min(tuple(int(x) for x in phi[list(sigma)]) for phi in syms)
                   for sigma in itertools.permutations(range(r))})
    unit_maps = [phi for phi in _symmetries(G, units=True) if phi[0] == 0]
    return reps, unit_maps


def enumerate_labelings(n: int, G: FiniteAbelianGroup, dedup: bool = True,
                        mode: Optional[str] = None) -> Iterator[np.ndarray]:
    """Surjective labelings (enumeration indices per point) to be tested.

    With ``dedup`` each translation/unit orbit contributes one representative
    times every unit relabeling, which covers all leading units of a fixed
    target.  Without it, all ``r! S(n, r)`` surjections are produced.
    """
    mode = mode or ("affine" if dedup else "all")
    reps, variants = _assignments(G.factors, mode)
    reps_arr = np.array(reps)
    for rgs in set_partitions(n, G.order):
        blocks = np.array(rgs)
        for sigma in reps_arr:
            base = sigma[blocks]
            for phi in variants:
                yield phi[base]


@dataclass(frozen=True, eq=False)
class LabelingCheck:
    feasible: bool
    nondegenerate: bool
    weights: Optional[np.ndarray] = None


class _LabelingSystem:
    """Linear constraints of one target on per-point weights, for any labeling."""

    def __init__(self, target: AnnihilationTarget, values: np.ndarray):
        self.target = target
        self.values = np.asarray(values, dtype=complex)
        G = target.group
        space = RepresentationSpace(target)
        self.blocks = space.blocks
        self.conjX = np.conj(G.character_table)
        self.bc = np.array([b.channel for b in self.blocks], dtype=int)
        self.bh = np.array([G.index(b.h) for b in self.blocks], dtype=int)
        self.complex_rows = np.array([b.width == 2 for b in self.blocks], dtype=bool)
        self.leading = [[(ch, G.index(h)) for ch, h in factor] for factor in target.leading]

    def equations(self, idx: np.ndarray, labels: np.ndarray):
        r = self.target.group.order
        vals = self.values[idx]
        if self.blocks:
            M = vals[:, self.bc].T * self.conjX[self.bh][:, labels]
            coef = np.vstack([M.real, M.imag[self.complex_rows]])
        else:
            coef = np.zeros((0, idx.size))
        norm = (labels[None, :] == np.arange(r)[:, None]).astype(float)
        A = np.vstack([coef, norm])
        b = np.concatenate([np.zeros(coef.shape[0]), np.ones(r)])
        return A, b

    def leading_functionals(self, idx, labels):
        r = self.target.group.order
        vals = self.values[idx]
        return [[vals[:, ch] * self.conjX[h, labels] / r for ch, h in factor]
                for factor in self.leading]

    def check(self, idx: np.ndarray, labels: np.ndarray, need_leading: bool = True) -> LabelingCheck:
        A, b = self.equations(idx, labels)
        x, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
        scale = max(1.0, float(np.abs(A).max()))
        if np.linalg.norm(A @ x - b) > CONSISTENCY_TOL * scale:
            return LabelingCheck(False, False)
        n = idx.size
        if rank == n:
            if x.min() < -1e-9:
                return LabelingCheck(False, False)
            x = np.clip(x, 0.0, None)
            if not need_leading:
                return LabelingCheck(True, True, x)
            ok = all(max(abs(complex(f @ x)) for f in factor) > NONDEGENERATE_TOL
                     for factor in self.leading_functionals(idx, labels))
            return LabelingCheck(True, ok, x)
        res = linprog_eq(np.zeros(n), A, b)
        if not res.success:
            return LabelingCheck(False, False)
        if not need_leading or not self.leading:
            return LabelingCheck(True, True, res.x)
        witnesses = [res.x]
        for factor in self.leading_functionals(idx, labels):
            factor_ok = False
            for f in factor:
                for obj in (-f.real, f.real, -f.imag, f.imag):
                    if not np.any(obj):
                        continue
                    opt = linprog_eq(obj, A, b)
                    if opt.success:
                        witnesses.append(opt.x)
                        if abs(opt.fun) > NONDEGENERATE_TOL:
                            factor_ok = True
            if not factor_ok:
                return LabelingCheck(True, False, res.x)
        # a generic convex combination of the optimizers avoids every {c = 0}
        mix = np.random.default_rng(0).dirichlet(np.ones(len(witnesses)))
        return LabelingCheck(True, True, mix @ np.array(witnesses))


@dataclass(frozen=True, eq=False)
class OracleResult:
    found: bool
    labeling: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None
    example: object = None
    n_labelings: int = 0


def _example(cloud, kind, labels, weights):
    from .engine import PartitionResult

    G = kind.group()
    parts, wts, verts = {}, {}, {}
    for a, g in enumerate(G.elements):
        idx = np.flatnonzero((labels == a) & (weights > 1e-12))
        w = weights[idx] / weights[idx].sum()
        parts[g] = tuple(int(i) for i in idx)
        wts[g] = tuple(float(x) for x in w)
        verts[g] = w @ cloud.points[idx]
    cert = certify_polytope(G, verts, kind.certificate_kind, kind.view)
    return PartitionResult(kind, G, parts, wts, verts, cert)


def _bound(n: int, r: int, max_labelings: int):
    count = surjection_count(n, r)
    if count > max_labelings:
        raise EnumerationBoundError(
            f"{count} labelings of {n} points by {r} labels exceed the bound {max_labelings}")


def polytopal_partition_exists(cloud: PointCloud, kind: ProblemKind, dedup: bool = True,
                               max_labelings: int = MAX_LABELINGS) -> OracleResult:
    """Search all labelings for a non-degenerate polytopal partition."""
    kind.validate_cloud(cloud, exact_count=False)
    target = build_target(kind)
    G = target.group
    n = cloud.n_points
    _bound(n, G.order, max_labelings)
    system = _LabelingSystem(target, kind.channels(cloud))
    idx = np.arange(n)
    count = 0
    for labels in enumerate_labelings(n, G, dedup):
        count += 1
        chk = system.check(idx, labels)
        if chk.feasible and chk.nondegenerate:
            return OracleResult(True, labels, chk.weights,
                                _example(cloud, kind, labels, chk.weights), count)
    return OracleResult(False, n_labelings=count)


def labeling_feasible(cloud: PointCloud, kind: ProblemKind,
                      labeling: Union[Mapping[int, Sequence[int]], Sequence[int]]) -> LabelingCheck:
    """Check one (possibly partial) labeling.

    ``labeling`` maps point index to group element, or is an array of
    enumeration indices with ``-1`` for unlabeled points.
    """
    G = kind.group()
    if isinstance(labeling, Mapping):
        pairs = sorted((int(i), G.index(g)) for i, g in labeling.items())
        idx = np.array([i for i, _ in pairs], dtype=int)
        labels = np.array([a for _, a in pairs], dtype=int)
    else:
        lab = np.asarray(labeling, dtype=int)
        idx = np.flatnonzero(lab >= 0)
        labels = lab[idx]
    if idx.size and (idx.max() >= cloud.n_points or labels.max() >= G.order):
        raise InvalidInputError("labeling refers to points or elements out of range")
    if set(labels.tolist()) != set(range(G.order)):
        return LabelingCheck(False, False)
    system = _LabelingSystem(build_target(kind), kind.channels(cloud))
    return system.check(idx, labels)


def tverberg_target(r: int, dimension: int) -> AnnihilationTarget:
    G = FiniteAbelianGroup((r,))
    nonzero = conjugate_representatives(G, [h for h in G.elements if h != G.zero])
    return AnnihilationTarget(G, (nonzero,) * dimension, (True,) * dimension, ())


def tverberg_partition_exists(cloud: PointCloud, r: int,
                              max_labelings: int = MAX_LABELINGS) -> bool:
    """Whether some partition into ``r`` parts has intersecting convex hulls."""
    n = cloud.n_points
    _bound(n, r, max_labelings)
    target = tverberg_target(r, cloud.dimension)
    system = _LabelingSystem(target, cloud.points.astype(complex))
    idx = np.arange(n)
    return any(system.check(idx, labels, need_leading=False).feasible
               for labels in enumerate_labelings(n, target.group, mode="any"))


@dataclass(frozen=True)
class TightnessResult:
    trials: int
    failures: int
    n_points: int

    @property
    def rate(self) -> float:
        return self.failures / self.trials if self.trials else float("nan")


def _trial(args):
    kind, n_points, seed, index, max_labelings = args
    cloud = generate_points(kind.dimension, n_points, seed=[seed, index])
    return not polytopal_partition_exists(cloud, kind, max_labelings=max_labelings).found


def tightness_experiment(kind: ProblemKind, trials: int, seed: int = 0, jobs: int = 1,
                         deficit: int = 1, max_labelings: int = MAX_LABELINGS) -> TightnessResult:
    """Failure rate of the oracle on random clouds ``deficit`` points short.

    ``deficit=0`` gives the control experiment at the critical count, where
    the expected failure rate is 0.
    """
    if kind.n_extra_channels:
        raise InvalidInputError(f"{kind.name} has no unlabeled random instances")
    n_points = required_points(kind) - deficit
    if n_points < kind.group().order:
        raise InvalidInputError("fewer points than parts")
    _bound(n_points, kind.group().order, max_labelings)
    args = [(kind, n_points, seed, i, max_labelings) for i in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_trial, args))
    else:
        outcomes = [_trial(a) for a in args]
    return TightnessResult(trials, sum(outcomes), n_points)
