"""Finite abelian groups ``Z_r1 + ... + Z_rk``, their characters and Fourier
coefficients of group-indexed value tuples.

Group elements are plain tuples of ints.  Elements are enumerated in
lexicographic order of their coordinate tuples; that order is used for every
array indexed by the group (value vectors, spectra, map tables).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping, Sequence, Union

import numpy as np

from .exceptions import GroupMismatchError

Element = tuple[int, ...]
Values = Union[Mapping[Element, complex], Sequence[complex], np.ndarray]


@lru_cache(maxsize=None)
def root_of_unity(r: int, k: int) -> complex:
    """``exp(2*pi*i*k/r)``, cached per ``(r, k mod r)``."""
    k %= r
    if k == 0:
        return 1.0 + 0.0j
    if 4 * k == r:
        return 1.0j
    if 2 * k == r:
        return -1.0 + 0.0j
    if 4 * k == 3 * r:
        return -1.0j
    angle = 2.0 * math.pi * k / r
    return complex(math.cos(angle), math.sin(angle))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """The group ``Z_{r_1} + ... + Z_{r_k}``.

    Parameters
    ----------
    factors : tuple of int
        Cyclic factor orders, each at least 2.
    """

    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(f) for f in self.factors)
        if not factors:
            raise GroupMismatchError("a group needs at least one cyclic factor")
        if any(f < 2 for f in factors):
            raise GroupMismatchError(f"every factor must be >= 2, got {factors}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def cyclic(cls, r: int) -> "FiniteAbelianGroup":
        return cls((r,))

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(f) for f in self.factors)))

    @cached_property
    def _index(self) -> dict[Element, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def __len__(self) -> int:
        return self.order

    def __contains__(self, g) -> bool:
        return tuple(g) in self._index

    def index(self, g: Sequence[int]) -> int:
        """Position of ``g`` in the enumeration order."""
        try:
            return self._index[tuple(g)]
        except KeyError:
            raise GroupMismatchError(f"{tuple(g)} is not an element of Z{self.factors}") from None

    def check(self, g: Sequence[int]) -> Element:
        g = tuple(int(x) for x in g)
        if g not in self._index:
            raise GroupMismatchError(f"{g} is not an element of Z{self.factors}")
        return g

    def add(self, g: Element, h: Element) -> Element:
        return tuple((a + b) % f for a, b, f in zip(g, h, self.factors))

    def neg(self, g: Element) -> Element:
        return tuple((-a) % f for a, f in zip(g, self.factors))

    def scale(self, u: int, g: Element) -> Element:
        return tuple((u * a) % f for a, f in zip(g, self.factors))

    def unit_vector(self, i: int) -> Element:
        """The standard generator ``e_i`` of the ``i``-th factor."""
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def element_order(self, h: Element) -> int:
        return math.lcm(*(f // math.gcd(a, f) for a, f in zip(h, self.factors)))

    @cached_property
    def character_table(self) -> np.ndarray:
        """``X[a, b] = chi_{h_a}(g_b)`` over the enumeration order."""
        n = self.order
        table = np.empty((n, n), dtype=complex)
        for a, h in enumerate(self.elements):
            for b, g in enumerate(self.elements):
                table[a, b] = _character_value(self.factors, h, g)
        table.setflags(write=False)
        return table

    def translation_permutation(self, shift: Element) -> np.ndarray:
        """Index array ``p`` with ``p[idx(g)] = idx(g + shift)``."""
        return np.array([self.index(self.add(g, shift)) for g in self.elements])

    def __str__(self) -> str:
        return " + ".join(f"Z{f}" for f in self.factors)


def _character_value(factors, h, g) -> complex:
    value = 1.0 + 0.0j
    for r, a, b in zip(factors, h, g):
        value *= root_of_unity(r, a * b)
    return value


def character(G: FiniteAbelianGroup, h: Sequence[int], g: Sequence[int]) -> complex:
    """Evaluate ``chi_h(g) = prod_j exp(2 pi i h_j g_j / r_j)``."""
    h, g = G.check(h), G.check(g)
    return _character_value(G.factors, h, g)


def as_value_array(G: FiniteAbelianGroup, values: Values) -> np.ndarray:
    """Coerce a value map (or array in enumeration order) to a complex array.

    A 2-d array of shape ``(|G|, k)`` is accepted and kept 2-d, so vector
    valued tuples can be transformed coordinate-wise in one call.
    """
    if isinstance(values, Mapping):
        missing = [g for g in G.elements if g not in values]
        if missing:
            raise GroupMismatchError(f"value map is missing elements {missing[:4]}")
        extra = [g for g in values if tuple(g) not in G]
        if extra:
            raise GroupMismatchError(f"value map has keys outside the group: {extra[:4]}")
        return np.array([values[g] for g in G.elements], dtype=complex)
    arr = np.asarray(values, dtype=complex)
    if arr.ndim == 0 or arr.shape[0] != G.order:
        raise GroupMismatchError(
            f"expected {G.order} values in enumeration order, got shape {arr.shape}")
    return arr


def fourier_coefficient(G: FiniteAbelianGroup, values: Values, h: Sequence[int]) -> complex:
    """``c_h = (1/|G|) sum_g values(g) conj(chi_h(g))``."""
    h = G.check(h)
    arr = as_value_array(G, values)
    row = G.character_table[G.index(h)]
    return complex(np.dot(np.conj(row), arr) / G.order)


def spectrum_array(G: FiniteAbelianGroup, values: Values) -> np.ndarray:
    """All Fourier coefficients, indexed like the group enumeration.

    For a 2-d input the transform is applied column by column.
    """
    arr = as_value_array(G, values)
    return np.conj(G.character_table) @ arr / G.order


def full_spectrum(G: FiniteAbelianGroup, values: Values) -> dict[Element, complex]:
    coeffs = spectrum_array(G, values)
    return {h: complex(c) for h, c in zip(G.elements, coeffs)}


def inverse_transform(G: FiniteAbelianGroup, spectrum: Values) -> dict[Element, complex]:
    """Rebuild values from coefficients: ``values(g) = sum_h c_h chi_h(g)``."""
    coeffs = as_value_array(G, spectrum)
    values = G.character_table.T @ coeffs
    return {g: complex(v) for g, v in zip(G.elements, values)}


def inverse_array(G: FiniteAbelianGroup, coeffs: np.ndarray) -> np.ndarray:
    return G.character_table.T @ np.asarray(coeffs, dtype=complex)
