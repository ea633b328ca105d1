"""Monomial evaluation codes on Cartesian grids.

Points of ``S_1 x ... x S_m`` are ordered lexicographically with ``S_1``
varying slowest, each subset in its given order.  Generator rows follow the
inverse-lex order of their monomials.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .exceptions import BoxError, FieldError, GuardError, NotDecreasingError
from .gf import Field
from .monomials import (
    Monomial,
    MonomialBox,
    MonomialSet,
    divisibility_closure,
    is_decreasing,
    minimal_generating_set,
    monomial_gcd,
    reflect,
    sort_inverse_lex,
)

#: Hard limit on ``q ** k`` for exhaustive codeword enumeration.
BRUTE_FORCE_LIMIT = 2**24
#: Largest minimal generating set for the inclusion-exclusion formula.
MAX_IE_GENERATORS = 22


@dataclass(frozen=True)
class CartesianGrid:
    field: Field
    subsets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        subsets = tuple(tuple(int(v) for v in s) for s in self.subsets)
        if not subsets:
            raise ValueError("a grid needs at least one subset")
        for s in subsets:
            if not s:
                raise ValueError("subsets must be non-empty")
            if len(set(s)) != len(s):
                raise ValueError(f"subset {list(s)} has repeated elements")
            if min(s) < 0 or max(s) >= self.field.q:
                raise FieldError(f"subset {list(s)} has entries outside GF({self.field.q})")
        object.__setattr__(self, "subsets", subsets)

    @property
    def m(self) -> int:
        return len(self.subsets)

    @property
    def bounds(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.subsets)

    @property
    def n(self) -> int:
        return int(np.prod(self.bounds))

    @cached_property
    def box(self) -> MonomialBox:
        return MonomialBox.from_subsets(self.subsets)

    @cached_property
    def points(self) -> np.ndarray:
        """``(n, m)`` array of grid points in lexicographic order."""
        pts = np.array(list(itertools.product(*self.subsets)), dtype=np.int64)
        return pts.reshape(self.n, self.m)

    def to_json(self) -> dict:
        return {"field": self.field.descriptor(), "subsets": [list(s) for s in self.subsets]}


def evaluate(a: Sequence[int], grid: CartesianGrid) -> np.ndarray:
    """Evaluation vector of ``x^a`` over the grid (``0**0 == 1``)."""
    a = grid.box.check(a)
    F = grid.field
    out = np.ones(grid.n, dtype=np.int64)
    for i, e in enumerate(a):
        if e:
            out = F.mul(out, F.power(grid.points[:, i], e))
    return out


def generator_matrix(grid: CartesianGrid, S: MonomialSet | Sequence[Sequence[int]]) -> np.ndarray:
    monos = S.sorted() if isinstance(S, MonomialSet) else sort_inverse_lex(S)
    if not monos:
        return np.zeros((0, grid.n), dtype=np.int64)
    return np.vstack([evaluate(a, grid) for a in monos])


def _residue_scalars(grid: CartesianGrid) -> np.ndarray:
    """Per-point inverse of ``prod_i prod_{s' != s_i} (s_i - s')``."""
    F = grid.field
    denom = np.ones(grid.n, dtype=np.int64)
    for i, S_i in enumerate(grid.subsets):
        col = grid.points[:, i]
        for s in S_i:
            diff = F.sub(col, s)
            denom = F.mul(denom, np.where(col == s, 1, diff))
    return F.inv(denom)


def residue_vector(a: Sequence[int], grid: CartesianGrid) -> np.ndarray:
    return grid.field.mul(evaluate(a, grid), _residue_scalars(grid))


def dual_basis(grid: CartesianGrid, S: MonomialSet) -> list[np.ndarray]:
    """Residues of ``corner / M`` for every ``M`` outside the set.

    Ordered by the inverse-lex position of the complement monomial ``M``.
    """
    if not is_decreasing(S):
        raise NotDecreasingError("dual bases are built for decreasing sets only")
    box = grid.box
    return [residue_vector(reflect(a, box), grid) for a in S.complement().sorted()]


def dual_monomials(S: MonomialSet) -> MonomialSet:
    """Monomials ``corner / M`` of the complement (the dual's monomial set)."""
    return MonomialSet(S.box, frozenset(reflect(a, S.box) for a in S.complement().members))


def dimension_formula(B: Sequence[Sequence[int]]) -> int:
    """Inclusion-exclusion count of the monomials dividing some member of ``B``."""
    B = [tuple(a) for a in B]
    if len(B) > MAX_IE_GENERATORS:
        raise GuardError(f"{len(B)} generators exceed the inclusion-exclusion guard")
    total = 0
    for size in range(1, len(B) + 1):
        sign = 1 if size % 2 else -1
        for T in itertools.combinations(B, size):
            g = T[0]
            for t in T[1:]:
                g = monomial_gcd(g, t)
            total += sign * int(np.prod([x + 1 for x in g]))
    return total


def min_distance_formula(B: Sequence[Sequence[int]], bounds: Sequence[int]) -> int:
    if not B:
        raise ValueError("empty generating set")
    for a in B:
        if any(x >= n or x < 0 for x, n in zip(a, bounds)):
            raise BoxError(f"{tuple(a)} lies outside the box {tuple(bounds)}")
    return min(int(np.prod([n - x for x, n in zip(a, bounds)])) for a in B)


def distance_witness(a: Sequence[int], grid: CartesianGrid) -> np.ndarray:
    """Evaluation of ``prod_i prod_{j < a_i} (x_i - s_ij)``."""
    a = grid.box.check(a)
    F = grid.field
    out = np.ones(grid.n, dtype=np.int64)
    for i, e in enumerate(a):
        col = grid.points[:, i]
        for s in grid.subsets[i][:e]:
            out = F.mul(out, F.sub(col, s))
    return out


@dataclass(frozen=True)
class EvalCode:
    """The code spanned by evaluations of a monomial set over a grid."""

    grid: CartesianGrid
    monomials: MonomialSet

    def __post_init__(self) -> None:
        if self.monomials.box.bounds != self.grid.bounds:
            raise BoxError("monomial box does not match the grid")

    @classmethod
    def from_generators(cls, grid: CartesianGrid, generators: Sequence[Sequence[int]]) -> "EvalCode":
        return cls(grid, divisibility_closure(generators, grid.box))

    @property
    def field(self) -> Field:
        return self.grid.field

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def k(self) -> int:
        return len(self.monomials)

    @cached_property
    def generator(self) -> np.ndarray:
        return generator_matrix(self.grid, self.monomials)

    @property
    def is_decreasing(self) -> bool:
        return is_decreasing(self.monomials)

    @cached_property
    def minimal_generators(self) -> list[Monomial]:
        return minimal_generating_set(self.monomials)

    def dual_basis(self) -> list[np.ndarray]:
        return dual_basis(self.grid, self.monomials)

    def dual_matrix(self) -> np.ndarray:
        rows = self.dual_basis()
        return np.vstack(rows) if rows else np.zeros((0, self.n), dtype=np.int64)

    def min_distance(self) -> int:
        return min_distance_formula(self.minimal_generators, self.grid.bounds)

    def encode(self, messages) -> np.ndarray:
        return self.field.matmul(np.asarray(messages, dtype=np.int64), self.generator)


def min_distance_bruteforce(code: EvalCode | np.ndarray, field: Field | None = None,
                            limit: int = BRUTE_FORCE_LIMIT) -> int:
    """Minimum nonzero codeword weight by enumerating every message.

    Accepts an :class:`EvalCode` or a generator matrix plus its field.
    """
    if isinstance(code, EvalCode):
        G, F = code.generator, code.field
    else:
        if field is None:
            raise ValueError("a raw generator matrix needs its field")
        G, F = np.asarray(code, dtype=np.int64), field
    k, n = G.shape
    if k == 0:
        raise ValueError("the zero code has no minimum distance")
    if F.q**k > limit:
        raise GuardError(f"q^k = {F.q}^{k} exceeds the brute-force guard {limit}")
    return F.min_coset_weight(np.zeros(n, dtype=np.int64), G, skip_zero=True)


def gram(code: EvalCode) -> np.ndarray:
    G = code.generator
    return code.field.matmul(G, G.T)


def is_lcd(code: EvalCode) -> bool:
    """``C`` meets its dual trivially, i.e. ``G G^T`` has full rank ``k``."""
    return code.field.rank(gram(code)) == code.k


def is_self_orthogonal(code: EvalCode) -> bool:
    """``C`` is contained in its dual, i.e. ``G G^T == 0``."""
    return not gram(code).any()


def is_dual_containing(code: EvalCode) -> bool:
    """The dual is contained in ``C``."""
    F = code.field
    dual = code.dual_basis()
    G = code.generator
    return all(F.in_span(v, G) for v in dual)
