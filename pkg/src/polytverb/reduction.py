"""The equivariant affine map on the join of the group, and the grouping
map that turns a join point back into a partition with witnesses.

The target space is laid out as one block per killed coefficient ``(i, h)``
(two slots for a complex value, one slot for the real value of an order-two
coefficient on a real channel) followed by ``|G| - 1`` slots holding
``lambda_g - 1/|G|`` for every non-zero ``g``.  The slot of ``g = 0`` is
dropped; it is minus the sum of the others.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .exceptions import EmptyPartError, InvalidInputError, WrongCountError
from .fourier import Element, FiniteAbelianGroup
from .problems import AnnihilationTarget

TAU_SUPPORT = 1e-12


@dataclass(frozen=True)
class Block:
    channel: int
    h: Element
    offset: int
    width: int  # 1 for a real order-two coefficient, else 2


@dataclass(frozen=True)
class RepresentationSpace:
    target: AnnihilationTarget

    @cached_property
    def blocks(self) -> tuple[Block, ...]:
        G = self.target.group
        blocks, offset = [], 0
        for i, (S, real) in enumerate(zip(self.target.killed, self.target.real_flags)):
            for h in S:
                width = 1 if real and G.element_order(h) == 2 else 2
                blocks.append(Block(i, h, offset, width))
                offset += width
        return tuple(blocks)

    @property
    def coefficient_dim(self) -> int:
        return sum(b.width for b in self.blocks)

    @property
    def real_dim(self) -> int:
        return self.coefficient_dim + self.target.group.order - 1

    def pack(self, coeffs: np.ndarray, lambdas: np.ndarray) -> np.ndarray:
        """Vector of ``W`` from per-block complex values and part weights."""
        out = np.empty(self.real_dim)
        for b, c in zip(self.blocks, coeffs):
            out[b.offset] = c.real
            if b.width == 2:
                out[b.offset + 1] = c.imag
        G = self.target.group
        out[self.coefficient_dim:] = (np.asarray(lambdas) - 1.0 / G.order)[1:]
        return out

    def act(self, shift: Sequence[int], vec: np.ndarray) -> np.ndarray:
        """Apply the group element ``shift`` to a vector of ``W``.

        Coefficient blocks are multiplied by ``chi_{-h}(shift)``; the regular
        block is translated.
        """
        G = self.target.group
        shift = G.check(shift)
        vec = np.asarray(vec, dtype=float)
        out = np.empty_like(vec)
        X = G.character_table
        s = G.index(shift)
        for b in self.blocks:
            phase = np.conj(X[G.index(b.h), s])
            if b.width == 2:
                z = complex(vec[b.offset], vec[b.offset + 1]) * phase
                out[b.offset], out[b.offset + 1] = z.real, z.imag
            else:
                out[b.offset] = vec[b.offset] * phase.real
        reg = vec[self.coefficient_dim:]
        full = np.concatenate([[-reg.sum()], reg])
        moved = np.empty_like(full)
        moved[G.translation_permutation(shift)] = full
        out[self.coefficient_dim:] = moved[1:]
        return out


@dataclass(frozen=True, eq=False)
class MapTable:
    """Images ``A(v_j^g)``: array of shape ``(N+1, |G|, dim W)``."""

    space: RepresentationSpace
    vectors: np.ndarray

    @property
    def target(self) -> AnnihilationTarget:
        return self.space.target

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.space.target.group

    @property
    def n_classes(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[2]

    def class_sums(self) -> np.ndarray:
        return self.vectors.sum(axis=1)

    def evaluate(self, selection: Sequence[int], weights: Sequence[float]) -> np.ndarray:
        """``sum_j t_j A(v_j^{g_j})`` with ``g_j`` given as enumeration indices."""
        sel = np.asarray(selection, dtype=int)
        t = np.asarray(weights, dtype=float)
        return t @ self.vectors[np.arange(self.n_classes), sel]


def build_map_table(target: AnnihilationTarget, values: np.ndarray,
                    check_count: bool = True) -> MapTable:
    """Tabulate the affine map on every join generator ``v_j^g``.

    Parameters
    ----------
    target : AnnihilationTarget
    values : array, shape (N+1, n_channels)
        Channel values ``f_i(v_j)`` of the points.
    check_count : bool
        Require exactly ``target.required_points`` rows.
    """
    values = np.asarray(values, dtype=complex)
    if values.ndim != 2 or values.shape[1] != target.n_channels:
        raise InvalidInputError(
            f"expected values of shape (N, {target.n_channels}), got {values.shape}")
    if check_count and values.shape[0] != target.required_points:
        raise WrongCountError(
            f"target needs {target.required_points} points, got {values.shape[0]}")
    space = RepresentationSpace(target)
    G = target.group
    n, r = values.shape[0], G.order
    X = G.character_table
    out = np.empty((n, r, space.real_dim))
    for b in space.blocks:
        block = values[:, b.channel][:, None] * np.conj(X[G.index(b.h)])[None, :]
        out[:, :, b.offset] = block.real
        if b.width == 2:
            out[:, :, b.offset + 1] = block.imag
    regular = np.eye(r) - 1.0 / r
    out[:, :, space.coefficient_dim:] = regular[:, 1:][None, :, :]
    out.setflags(write=False)
    return MapTable(space, out)


@dataclass(frozen=True, eq=False)
class GroupedPartition:
    """Result of grouping a join point by group label.

    ``supports[a]`` are the point indices of the part labelled by the
    ``a``-th group element and ``witness[a]`` their barycentric weights.
    """

    group: FiniteAbelianGroup
    lambdas: np.ndarray
    supports: tuple[np.ndarray, ...]
    witness: tuple[np.ndarray, ...]

    def witness_points(self, points: np.ndarray) -> np.ndarray:
        """``x_g`` mapped through an affine point map given by its vertex images."""
        pts = np.asarray(points)
        out = np.zeros((self.group.order,) + pts.shape[1:], dtype=pts.dtype)
        for a, (idx, w) in enumerate(zip(self.supports, self.witness)):
            if idx.size:
                out[a] = w @ pts[idx]
        return out

    def labels(self, n_points: int) -> np.ndarray:
        """Group-element index per point, ``-1`` for unused points."""
        lab = np.full(n_points, -1, dtype=int)
        for a, idx in enumerate(self.supports):
            lab[idx] = a
        return lab


def group_join_point(G: FiniteAbelianGroup, selection: Sequence[int], weights: Sequence[float],
                     tau: float = TAU_SUPPORT, allow_empty: bool = False) -> GroupedPartition:
    """Group ``sum_j t_j v_j^{g_j}`` into weighted witnesses per group element.

    ``selection`` holds enumeration indices of the chosen ``g_j``.  Points with
    ``t_j <= tau`` belong to no part.
    """
    sel = np.asarray(selection, dtype=int)
    t = np.asarray(weights, dtype=float)
    if sel.shape != t.shape:
        raise InvalidInputError("selection and weights must align")
    if np.any(t < -tau) or abs(t.sum() - 1.0) > 1e-9:
        raise InvalidInputError("join weights must be a probability vector")
    lambdas = np.zeros(G.order)
    supports, witness = [], []
    for a in range(G.order):
        idx = np.flatnonzero((sel == a) & (t > tau))
        lam = float(t[idx].sum())
        lambdas[a] = lam
        if lam <= tau * G.order:
            if not allow_empty:
                raise EmptyPartError(f"part {G.elements[a]} has weight {lam:.3g}")
            supports.append(idx[:0])
            witness.append(np.zeros(0))
            continue
        supports.append(idx)
        witness.append(t[idx] / lam)
    return GroupedPartition(G, lambdas, tuple(supports), tuple(witness))


def evaluate_grouped(target: AnnihilationTarget, values: np.ndarray,
                     grouped: GroupedPartition) -> np.ndarray:
    """The map evaluated on the grouped configuration ``sum_g lambda_g x_g``.

    Coefficient block ``(i, h)`` is ``sum_g lambda_g f_i(x_g) conj(chi_h(g))``
    where ``f_i(x_g)`` comes from the witness weights; the regular block is
    ``lambda_g - 1/|G|``.
    """
    space = RepresentationSpace(target)
    G = target.group
    images = grouped.witness_points(np.asarray(values, dtype=complex))
    X = G.character_table
    coeffs = [np.sum(grouped.lambdas * images[:, b.channel] * np.conj(X[G.index(b.h)]))
              for b in space.blocks]
    return space.pack(np.asarray(coeffs), grouped.lambdas)
