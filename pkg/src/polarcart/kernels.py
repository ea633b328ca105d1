"""Kernels, multikernel matrices, standard forms and exponents."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .exceptions import DimensionError, GuardError
from .gf import Field, subfield_generated
from .monomials import Monomial, MonomialBox, inverse_lex_sort
from .evalcode import CartesianGrid, min_distance_formula
from .monomials import divisibility_closure, minimal_generating_set

#: Largest kernel for which every column permutation is tried.
MAX_STANDARD_FORM_SIZE = 6
#: Largest coset (``q ** (l - 1)`` vectors) enumerated for partial distances.
MAX_COSET_SIZE = 2**22


def kernel_matrix(field: Field, S: Sequence[int]) -> np.ndarray:
    """``T(S)``: row ``r`` evaluates ``x^(l-1-r)`` on ``S`` (last row is ones)."""
    S = [int(s) for s in S]
    if len(set(S)) != len(S):
        raise ValueError(f"kernel subset {S} has repeated elements")
    if not S:
        raise ValueError("kernel subset must be non-empty")
    l = len(S)
    pts = np.array(S, dtype=np.int64)
    return np.vstack([field.power(pts, l - 1 - r) for r in range(l)])


@dataclass(frozen=True, eq=False)
class KernelSequence:
    """Kernels ``T_1, ..., T_m`` over one field.

    ``subsets`` is set when every kernel is ``T(S_i)``; row labels and the
    evaluation-code view are only available then.
    """

    field: Field
    kernels: tuple[np.ndarray, ...]
    subsets: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        if not self.kernels:
            raise ValueError("a kernel sequence needs at least one kernel")
        ks = []
        for T in self.kernels:
            T = self.field.check_matrix(T)
            if T.shape[0] != T.shape[1]:
                raise DimensionError(f"kernel of shape {T.shape} is not square")
            if self.field.rank(T) != T.shape[0]:
                raise ValueError("kernels must be invertible")
            T.setflags(write=False)
            ks.append(T)
        object.__setattr__(self, "kernels", tuple(ks))

    @classmethod
    def from_subsets(cls, field: Field, subsets: Sequence[Sequence[int]]) -> "KernelSequence":
        subsets = tuple(tuple(int(v) for v in s) for s in subsets)
        return cls(field, tuple(kernel_matrix(field, s) for s in subsets), subsets)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(T.shape[0] for T in self.kernels)

    @property
    def m(self) -> int:
        return len(self.kernels)

    @property
    def n(self) -> int:
        return int(np.prod(self.sizes))

    @property
    def grid(self) -> CartesianGrid:
        if self.subsets is None:
            raise ValueError("the sequence was not built from subsets")
        return CartesianGrid(self.field, self.subsets)

    @property
    def box(self) -> MonomialBox:
        return self.grid.box if self.subsets is not None else MonomialBox(self.sizes)

    def prefix(self, k: int) -> "KernelSequence":
        return KernelSequence(self.field, self.kernels[:k],
                              None if self.subsets is None else self.subsets[:k])

    @cached_property
    def matrix(self) -> np.ndarray:
        return g_matrix(self)

    def to_json(self) -> dict:
        out = {"field": self.field.descriptor(), "m": self.m}
        if self.subsets is not None:
            out["subsets"] = [list(s) for s in self.subsets]
        out["kernels"] = [T.tolist() for T in self.kernels]
        return out


def g_matrix(seq: KernelSequence) -> np.ndarray:
    """``G_m`` by stacking ``G_{m-1} (x) Row_r T_m`` over the rows of ``T_m``."""
    F = seq.field
    G = np.array(seq.kernels[0])
    for T in seq.kernels[1:]:
        G = np.vstack([F.kron(G, T[r][None, :]) for r in range(T.shape[0])])
    return G


def kron_fold(seq: KernelSequence) -> np.ndarray:
    F = seq.field
    G = np.array(seq.kernels[0])
    for T in seq.kernels[1:]:
        G = F.kron(G, T)
    return G


def bit_reversal(sizes: Sequence[int]) -> np.ndarray:
    """Source rows of the mixed-radix digit reversal.

    ``perm[r2] = r`` where ``r = sum k_i prod_{j>i} n_j`` and
    ``r2 = sum k_i prod_{j<i} n_j``; row ``r2`` of ``G_m`` is row ``r`` of
    the plain Kronecker product.
    """
    sizes = [int(n) for n in sizes]
    if not sizes:
        raise ValueError("need at least one size")
    perm = np.empty(int(np.prod(sizes)), dtype=np.int64)
    for digits in itertools.product(*(range(n) for n in sizes)):
        r = r2 = 0
        for k, n in zip(digits, sizes):
            r = r * n + k
        for k, n in zip(reversed(digits), reversed(sizes)):
            r2 = r2 * n + k
        perm[r2] = r
    return perm


def bit_reversal_matrix(sizes: Sequence[int]) -> np.ndarray:
    perm = bit_reversal(sizes)
    B = np.zeros((perm.size, perm.size), dtype=np.int64)
    B[np.arange(perm.size), perm] = 1
    return B


def row_labels(seq: KernelSequence) -> list[Monomial]:
    """Monomial of each row of ``G_m`` (row ``i`` evaluates label ``i``)."""
    if seq.subsets is None:
        raise ValueError("row labels need kernels built from subsets")
    return inverse_lex_sort(seq.sizes)


# ----------------------------------------------------------------------
# standard forms
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class StandardForm:
    V: np.ndarray
    P: np.ndarray
    G_prime: np.ndarray
    perm: tuple[int, ...]

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.G_prime, np.eye(len(self.perm), dtype=np.int64)))


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """``P`` with ``(G P)[:, j] == G[:, perm[j]]``."""
    l = len(perm)
    P = np.zeros((l, l), dtype=np.int64)
    P[list(perm), np.arange(l)] = 1
    return P


def standard_form_for(field: Field, G, perm: Sequence[int]) -> StandardForm | None:
    """The unique standard form reachable with column order ``perm``, if any.

    Rows are built bottom-up: row ``i`` starts from ``(G P)[i]`` and the
    already finished lower rows clear its entries right of the diagonal.
    """
    F = field
    H = np.asarray(G, dtype=np.int64)[:, list(perm)]
    l = H.shape[0]
    L = H.copy()
    V = np.eye(l, dtype=np.int64)
    for i in range(l - 1, -1, -1):
        for k in range(l - 1, i, -1):
            c = L[i, k]
            if c:
                L[i] = F.sub(L[i], F.mul(c, L[k]))
                V[i] = F.sub(V[i], F.mul(c, V[k]))
        d = L[i, i]
        if d == 0:
            return None
        dinv = F.inv(d)
        L[i] = F.mul(dinv, L[i])
        V[i] = F.mul(dinv, V[i])
    return StandardForm(V, permutation_matrix(perm), L, tuple(int(p) for p in perm))


def verify_standard_form(field: Field, G, sf: StandardForm) -> bool:
    F = field
    G = np.asarray(G, dtype=np.int64)
    l = G.shape[0]
    V, P, L = sf.V, sf.P, sf.G_prime
    upper = not np.tril(V, -1).any() and F.rank(V) == l
    perm_ok = (
        set(np.unique(P).tolist()) <= {0, 1}
        and (P.sum(axis=0) == 1).all()
        and (P.sum(axis=1) == 1).all()
    )
    lower = not np.triu(L, 1).any() and (np.diag(L) == 1).all()
    product = np.array_equal(F.matmul(F.matmul(V, G), P), L)
    return bool(upper and perm_ok and lower and product)


def standard_forms(field: Field, G) -> Iterator[StandardForm]:
    G = field.check_matrix(G)
    l = G.shape[0]
    if G.shape[1] != l:
        raise DimensionError("standard forms are defined for square matrices")
    if l > MAX_STANDARD_FORM_SIZE:
        raise GuardError(f"kernel size {l} exceeds the permutation guard {MAX_STANDARD_FORM_SIZE}")
    if field.rank(G) != l:
        raise ValueError("standard forms need an invertible matrix")
    for perm in itertools.permutations(range(l)):
        sf = standard_form_for(field, G, perm)
        if sf is not None:
            yield sf


def standard_form_search(field: Field, G) -> StandardForm | None:
    """A non-identity standard form when one exists, else any standard form."""
    first = None
    for sf in standard_forms(field, G):
        if not sf.is_identity:
            return sf
        first = first or sf
    return first


def has_nonidentity_standard_form(field: Field, G) -> bool:
    sf = standard_form_search(field, G)
    return sf is not None and not sf.is_identity


def polarizes_sof(seq: KernelSequence) -> bool:
    return all(has_nonidentity_standard_form(seq.field, T) for T in seq.kernels)


def _generates_field(field: Field, G) -> bool:
    for sf in standard_forms(field, G):
        if not sf.is_identity and subfield_generated(np.unique(sf.G_prime), field) == field.q:
            return True
    return False


def polarizes_additive(seq: KernelSequence) -> bool:
    """Every kernel has a non-identity standard form whose entries generate GF(q)."""
    return all(_generates_field(seq.field, T) for T in seq.kernels)


# ----------------------------------------------------------------------
# exponents
# ----------------------------------------------------------------------
def partial_distances(field: Field, G, limit: int = MAX_COSET_SIZE) -> list[int]:
    """``D_j``: least weight in ``Row_j + span(Row_{j+1}, ..., Row_l)``."""
    F = field
    G = F.check_matrix(G)
    l, n = G.shape
    if F.q ** (l - 1) > limit:
        raise GuardError(f"coset enumeration of size {F.q}^{l - 1} exceeds the guard {limit}")
    return [F.min_coset_weight(G[j], G[j + 1:]) for j in range(l)]


def exponent_from_distances(D: Sequence[int]) -> float:
    l = len(D)
    if l < 2:
        raise ValueError("the exponent needs a kernel of size >= 2")
    return sum(math.log(d) for d in D) / (l * math.log(l))


def exponent(field: Field, G) -> float:
    return exponent_from_distances(partial_distances(field, G))


def exponent_kron(E1: float, l1: int, E2: float, l2: int) -> float:
    if l1 < 2 or l2 < 2:
        raise ValueError("kernel sizes must be >= 2")
    total = math.log(l1 * l2)
    return E1 * math.log(l1) / total + E2 * math.log(l2) / total


def exponent_kron_many(exps: Sequence[float], sizes: Sequence[int]) -> float:
    if any(l < 2 for l in sizes):
        raise ValueError("kernel sizes must be >= 2")
    total = math.log(math.prod(sizes))
    return sum(E * math.log(l) / total for E, l in zip(exps, sizes))


def exponent_mix(freqs: Sequence[float], sizes: Sequence[int], exps: Sequence[float]) -> float:
    """Frequency-weighted exponent of a multikernel process."""
    if not (len(freqs) == len(sizes) == len(exps)) or not freqs:
        raise ValueError("freqs, sizes and exps must be non-empty and aligned")
    if any(l < 2 for l in sizes):
        raise ValueError("kernel sizes must be >= 2")
    if abs(sum(freqs) - 1.0) > 1e-9 or any(p < 0 for p in freqs):
        raise ValueError("frequencies must be a probability vector")
    weights = [p * math.log2(l) for p, l in zip(freqs, sizes)]
    return sum(w * E for w, E in zip(weights, exps)) / sum(weights)


def rs_exponent(l: int) -> float:
    """Exponent of ``T(S)`` with ``|S| = l``: ``ln(l!) / (l ln l)``."""
    return math.lgamma(l + 1) / (l * math.log(l))


def exponent_lower_bound(seq: KernelSequence) -> float:
    """Bound from the distances of the codes spanned by trailing rows.

    Row ``j`` of ``G_m`` together with every later row spans the decreasing
    code of the last ``n - j`` monomials; its minimum distance bounds ``D_j``.
    """
    labels = row_labels(seq)
    box = MonomialBox(seq.sizes)
    n = len(labels)
    if n < 2:
        raise ValueError("the exponent needs n >= 2")
    total = 0.0
    for j in range(1, n + 1):
        tail = divisibility_closure(labels[n - j:], box)
        B = minimal_generating_set(tail)
        total += math.log(min_distance_formula(B, seq.sizes))
    return total / (n * math.log(n))
