"""Monomials inside a bounded exponent box.

A monomial is an exponent tuple ``(a_1, ..., a_m)``.  A :class:`MonomialBox`
holds the bounds ``(n_1, ..., n_m)`` (exponent ``a_i < n_i``) and the
partition of the variables into classes of coordinates whose evaluation
sets coincide; the polar order uses that partition.

Every list returned from this module is sorted in inverse-lexicographic
order: the exponent of the *last* variable is the major key and larger
monomials come first.  This is the row order of the multikernel matrix,
whose first row is ``x_1^{n_1-1}...x_m^{n_m-1}`` and last row is ``1``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exceptions import BoxError, GuardError, NotDecreasingError

Monomial = tuple[int, ...]

#: Largest box for which the polar order is materialised.
MAX_ORDER_BOX = 2048


def inverse_lex_key(a: Sequence[int]) -> tuple[int, ...]:
    return tuple(reversed(a))


def sort_inverse_lex(monomials: Iterable[Sequence[int]]) -> list[Monomial]:
    return sorted((tuple(a) for a in monomials), key=inverse_lex_key, reverse=True)


def divides(a: Sequence[int], b: Sequence[int]) -> bool:
    """``x^a`` divides ``x^b``."""
    return all(x <= y for x, y in zip(a, b))


def monomial_gcd(a: Sequence[int], b: Sequence[int]) -> Monomial:
    return tuple(min(x, y) for x, y in zip(a, b))


def format_monomial(a: Sequence[int], names: Sequence[str] | None = None) -> str:
    if names is None:
        names = [f"x{i + 1}" for i in range(len(a))]
    parts = []
    for name, e in zip(names, a):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class MonomialBox:
    bounds: tuple[int, ...]
    partition: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        bounds = tuple(int(n) for n in self.bounds)
        if not bounds or any(n < 1 for n in bounds):
            raise BoxError(f"bounds must be positive, got {self.bounds}")
        object.__setattr__(self, "bounds", bounds)
        if self.partition is None:
            part = tuple((i,) for i in range(len(bounds)))
        else:
            part = tuple(sorted(tuple(sorted(int(i) for i in cls)) for cls in self.partition))
        covered = sorted(i for cls in part for i in cls)
        if covered != list(range(len(bounds))):
            raise BoxError(f"partition {part} does not cover the {len(bounds)} variables disjointly")
        for cls in part:
            if len({bounds[i] for i in cls}) > 1:
                raise BoxError(f"variables {cls} share an evaluation set but have different bounds")
        object.__setattr__(self, "partition", part)

    @classmethod
    def from_subsets(cls, subsets: Sequence[Sequence[int]]) -> "MonomialBox":
        """Box of a Cartesian grid; equal subsets (as sets) share a class."""
        classes: dict[frozenset, list[int]] = {}
        for i, s in enumerate(subsets):
            classes.setdefault(frozenset(int(v) for v in s), []).append(i)
        return cls(tuple(len(s) for s in subsets), tuple(tuple(v) for v in classes.values()))

    @property
    def m(self) -> int:
        return len(self.bounds)

    @property
    def size(self) -> int:
        return int(np.prod(self.bounds))

    @property
    def corner(self) -> Monomial:
        return tuple(n - 1 for n in self.bounds)

    def contains(self, a: Sequence[int]) -> bool:
        return len(a) == self.m and all(0 <= x < n for x, n in zip(a, self.bounds))

    def check(self, a: Sequence[int]) -> Monomial:
        a = tuple(int(x) for x in a)
        if not self.contains(a):
            raise BoxError(f"monomial {a} is outside the box {self.bounds}")
        return a

    def monomials(self) -> list[Monomial]:
        """All box monomials, inverse-lex order."""
        return inverse_lex_sort(self)

    def index(self, a: Sequence[int]) -> int:
        """Mixed-radix position with ``a_1`` most significant."""
        idx = 0
        for x, n in zip(a, self.bounds):
            idx = idx * n + x
        return idx

    def to_json(self) -> dict:
        return {"bounds": list(self.bounds), "partition": [list(c) for c in self.partition]}


def inverse_lex_sort(box: MonomialBox | Sequence[int]) -> list[Monomial]:
    """Every monomial of the box, first ``corner`` and last ``1``."""
    bounds = box.bounds if isinstance(box, MonomialBox) else tuple(box)
    return sort_inverse_lex(itertools.product(*(range(n) for n in bounds)))


@dataclass(frozen=True)
class MonomialSet:
    box: MonomialBox
    members: frozenset

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.box.check(a) for a in self.members))

    @classmethod
    def of(cls, box: MonomialBox, monomials: Iterable[Sequence[int]]) -> "MonomialSet":
        return cls(box, frozenset(tuple(a) for a in monomials))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.sorted())

    def __contains__(self, a) -> bool:
        return tuple(a) in self.members

    def sorted(self) -> list[Monomial]:
        return sort_inverse_lex(self.members)

    def complement(self) -> "MonomialSet":
        return MonomialSet(self.box, frozenset(self.box.monomials()) - self.members)

    def to_json(self) -> dict:
        return {**self.box.to_json(), "exponents": [list(a) for a in self.sorted()]}


# ----------------------------------------------------------------------
# divisibility structure
# ----------------------------------------------------------------------
def divisors(a: Sequence[int]) -> list[Monomial]:
    return list(itertools.product(*(range(x + 1) for x in a)))


def divisibility_closure(generators: Iterable[Sequence[int]], box: MonomialBox) -> MonomialSet:
    members: set[Monomial] = set()
    for g in generators:
        members.update(divisors(box.check(g)))
    return MonomialSet(box, frozenset(members))


def is_decreasing(S: MonomialSet) -> bool:
    members = S.members
    for a in members:
        for i, x in enumerate(a):
            if x and a[:i] + (x - 1,) + a[i + 1:] not in members:
                return False
    return True


def reduce_maximal(monomials: Iterable[Sequence[int]]) -> list[Monomial]:
    """Divisibility-maximal elements, duplicates removed."""
    uniq = set(tuple(a) for a in monomials)
    out = [a for a in uniq if not any(b != a and divides(a, b) for b in uniq)]
    return sort_inverse_lex(out)


def minimal_generating_set(S: MonomialSet) -> list[Monomial]:
    if not S.members:
        raise NotDecreasingError("the empty set has no generating set")
    if not is_decreasing(S):
        raise NotDecreasingError("minimal generating sets exist only for decreasing sets")
    return reduce_maximal(S.members)


def _gcd_sets(A: Iterable[Monomial], B: Iterable[Monomial]) -> set[Monomial]:
    return {monomial_gcd(a, b) for a in A for b in B}


def complement_dual_generators(B: Sequence[Sequence[int]], box: MonomialBox) -> list[Monomial]:
    """Pairwise-gcd fold of the sets ``P(M)`` for ``M`` in a minimal generating set.

    ``P(M)`` holds, for each coordinate ``i`` with ``n_i - a_i - 2 >= 0``,
    the box corner with coordinate ``i`` lowered to ``n_i - a_i - 2``.  The
    result generates (not necessarily minimally) the reflected complement
    ``{corner / M : M not in the set}``.
    """
    B = [box.check(a) for a in B]
    if not B:
        raise ValueError("generating set must be non-empty")
    corner = box.corner
    acc: set[Monomial] | None = None
    for a in B:
        P = set()
        for i, (x, n) in enumerate(zip(a, box.bounds)):
            if n - x - 2 >= 0:
                P.add(corner[:i] + (n - x - 2,) + corner[i + 1:])
        acc = P if acc is None else _gcd_sets(acc, P)
    return sort_inverse_lex(acc or ())


def gcd_generating_sets(B1: Sequence[Sequence[int]], B2: Sequence[Sequence[int]],
                        box: MonomialBox | None = None) -> list[Monomial]:
    """Minimal generating set of the intersection of two decreasing sets."""
    B1 = [tuple(a) for a in B1]
    B2 = [tuple(a) for a in B2]
    lengths = {len(a) for a in B1 + B2}
    if len(lengths) > 1:
        raise BoxError("generating sets live in different boxes")
    if box is not None:
        for a in B1 + B2:
            box.check(a)
    return reduce_maximal(_gcd_sets(B1, B2))


def reflect(a: Sequence[int], box: MonomialBox) -> Monomial:
    """``corner / x^a``."""
    return tuple(n - 1 - x for x, n in zip(a, box.bounds))


# ----------------------------------------------------------------------
# polar order
# ----------------------------------------------------------------------
class PolarOrder:
    """The order relation on all monomials of a box, materialised.

    ``relation[i, j]`` says ``mono_i`` precedes ``mono_j``, where monomials
    are indexed mixed-radix (see :meth:`MonomialBox.index`).  The relation
    is the smallest reflexive, transitive one containing divisibility and
    the index-shift rule inside each class of equal evaluation sets, and
    closed under concatenating relations of a prefix block of variables
    with relations of the complementary suffix block.
    """

    def __init__(self, box: MonomialBox) -> None:
        if box.size > MAX_ORDER_BOX:
            raise GuardError(f"box of size {box.size} exceeds the order guard {MAX_ORDER_BOX}")
        self.box = box
        self.monomials = list(itertools.product(*(range(n) for n in box.bounds)))
        E = np.array(self.monomials, dtype=np.int64).reshape(len(self.monomials), box.m)
        R = np.all(E[:, None, :] <= E[None, :, :], axis=2)
        for lo, hi in self._shift_pairs():
            R[lo, hi] = True
        self.relation = self._close(R, E)

    def _shift_pairs(self) -> Iterator[tuple[int, int]]:
        box = self.box
        m = box.m
        for cls in box.partition:
            if len(cls) < 2:
                continue
            n = box.bounds[cls[0]]
            for s in range(1, len(cls) + 1):
                combos = list(itertools.combinations(cls, s))
                for J in combos:
                    for H in combos:
                        if not all(j <= h for j, h in zip(J, H)) or J == H:
                            continue
                        for exps in itertools.product(range(1, n), repeat=s):
                            lo = [0] * m
                            hi = [0] * m
                            for j, h, e in zip(J, H, exps):
                                lo[j] = e
                                hi[h] = e
                            yield box.index(lo), box.index(hi)

    def _close(self, R: np.ndarray, E: np.ndarray) -> np.ndarray:
        box = self.box
        splits = []
        for k in range(1, box.m):
            prefix = np.nonzero(np.all(E[:, k:] == 0, axis=1))[0]
            suffix = np.nonzero(np.all(E[:, :k] == 0, axis=1))[0]
            splits.append((prefix, suffix))
        while True:
            before = R.copy()
            for prefix, suffix in splits:
                R |= np.kron(R[np.ix_(prefix, prefix)], R[np.ix_(suffix, suffix)])
            R = _transitive_closure(R)
            if np.array_equal(R, before):
                return R

    def leq(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return bool(self.relation[self.box.index(a), self.box.index(b)])

    def down_set(self, a: Sequence[int]) -> list[Monomial]:
        col = self.relation[:, self.box.index(a)]
        return [self.monomials[i] for i in np.nonzero(col)[0]]

    def down_set_size(self, a: Sequence[int]) -> int:
        return int(self.relation[:, self.box.index(a)].sum())


def _transitive_closure(R: np.ndarray) -> np.ndarray:
    R = R.copy()
    while True:
        nxt = R | ((R.astype(np.int32) @ R.astype(np.int32)) > 0)
        if np.array_equal(nxt, R):
            return R
        R = nxt


@functools.lru_cache(maxsize=64)
def polar_order(box: MonomialBox) -> PolarOrder:
    return PolarOrder(box)


def polar_leq(a: Sequence[int], b: Sequence[int], box: MonomialBox) -> bool:
    return polar_order(box).leq(box.check(a), box.check(b))


def polar_closure(generators: Iterable[Sequence[int]], box: MonomialBox) -> MonomialSet:
    order = polar_order(box)
    members: set[Monomial] = set()
    for g in generators:
        members.update(order.down_set(box.check(g)))
    return MonomialSet(box, frozenset(members))


def is_polar_decreasing(S: MonomialSet) -> bool:
    order = polar_order(S.box)
    return all(set(order.down_set(a)) <= S.members for a in S.members)


def polar_minimal_generators(S: MonomialSet) -> list[Monomial]:
    order = polar_order(S.box)
    members = list(S.members)
    out = [a for a in members if not any(b != a and order.leq(a, b) for b in members)]
    return sort_inverse_lex(out)
