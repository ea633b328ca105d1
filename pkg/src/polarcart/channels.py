"""Discrete memoryless channels with a finite-field input alphabet."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .exceptions import DimensionError, GuardError
from .gf import Field

ERASURE = "*"
#: Largest output alphabet searched for symmetry permutations.
MAX_SOF_OUTPUTS = 64
#: Largest ``|Y|^l * q^(l-1)`` materialised by :func:`split_exact`.
MAX_SPLIT_SIZE = 2**22
_SIGNATURE_DECIMALS = 12


@dataclass(frozen=True, eq=False)
class Channel:
    """Transition matrix ``W[x, y] = W(y | x)`` over input alphabet GF(q).

    ``kind`` and ``param`` record how the channel was built, so erasure
    channels can be recognised by the exact routines.
    """

    field: Field
    outputs: tuple
    W: np.ndarray
    kind: str = "custom"
    param: float | None = None

    def __post_init__(self) -> None:
        W = np.array(self.W, dtype=np.float64)
        if W.ndim != 2 or W.shape[0] != self.field.q:
            raise DimensionError(f"transition matrix needs {self.field.q} rows, got shape {W.shape}")
        if W.shape[1] != len(self.outputs):
            raise DimensionError("one output label per column is required")
        if (W < 0).any():
            raise ValueError("transition probabilities must be non-negative")
        if np.abs(W.sum(axis=1) - 1.0).max() > 1e-12:
            raise ValueError("each input row must sum to 1")
        W.setflags(write=False)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "outputs", tuple(self.outputs))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n_outputs(self) -> int:
        return self.W.shape[1]

    @property
    def erasure_prob(self) -> float | None:
        return None if self.kind != "qec" else 1.0 - float(self.param)

    def to_json(self) -> dict:
        out = {"field": self.field.descriptor(), "type": self.kind,
               "outputs": [o if isinstance(o, str) else int(o) for o in self.outputs],
               "matrix": self.W.tolist()}
        if self.param is not None:
            out["p"] = self.param
        return out


def _check_prob(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} is outside [0, 1]")
    return p


def qsc(field: Field, p: float) -> Channel:
    """q-ary symmetric channel ``W(y|x) = (1 - p) [x == y] + p / q``."""
    p = _check_prob(p)
    q = field.q
    W = (1 - p) * np.eye(q) + p / q
    return Channel(field, tuple(range(q)), W, "qsc", p)


def qec(field: Field, p: float) -> Channel:
    """q-ary erasure channel delivering the symbol intact with probability ``p``."""
    p = _check_prob(p)
    q = field.q
    W = np.zeros((q, q + 1))
    W[np.arange(q), np.arange(q)] = p
    W[:, q] = 1 - p
    return Channel(field, tuple(range(q)) + (ERASURE,), W, "qec", p)


def custom(field: Field, matrix, outputs: Sequence | None = None) -> Channel:
    W = np.asarray(matrix, dtype=np.float64)
    if outputs is None:
        outputs = tuple(range(W.shape[1])) if W.ndim == 2 else ()
    return Channel(field, tuple(outputs), W)


def _xlogy_ratio(w: np.ndarray, ratio: np.ndarray) -> np.ndarray:
    out = np.zeros_like(w)
    mask = w > 0
    out[mask] = w[mask] * np.log(ratio[mask])
    return out


def symmetric_rate(W: Channel) -> float:
    """Mutual information under uniform inputs, in base-q units."""
    P = W.W
    q = W.q
    py = P.mean(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(py[None, :] > 0, P / py[None, :], 1.0)
    return float(_xlogy_ratio(P, ratio).sum() / q / math.log(q))


def bhattacharyya_distance(W: Channel, x: int, x2: int) -> float:
    if x == x2:
        raise ValueError("the Bhattacharyya distance needs two distinct inputs")
    for v in (x, x2):
        if not 0 <= v < W.q:
            raise ValueError(f"input {v} is not a field element")
    return float(np.sqrt(W.W[x] * W.W[x2]).sum())


def bhattacharyya(W: Channel) -> float:
    """Average Bhattacharyya distance over ordered pairs of distinct inputs."""
    q = W.q
    S = np.sqrt(W.W[:, None, :] * W.W[None, :, :]).sum(axis=2)
    return float((S.sum() - np.trace(S)) / (q * (q - 1)))


# ----------------------------------------------------------------------
# symmetry
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class SymmetryWitness:
    """``sigma[a]`` and ``psi[a]`` map output columns; ``psi[0]`` is unused."""

    sigma: dict[int, tuple[int, ...]] = dc_field(default_factory=dict)
    psi: dict[int, tuple[int, ...]] = dc_field(default_factory=dict)


def _match_columns(A: np.ndarray, B: np.ndarray) -> tuple[int, ...] | None:
    """Bijection ``s`` with ``B[:, s[y]] == A[:, y]`` for every column ``y``."""
    pool: dict[tuple, list[int]] = {}
    for y in range(B.shape[1]):
        pool.setdefault(tuple(np.round(B[:, y], _SIGNATURE_DECIMALS)), []).append(y)
    perm = []
    for y in range(A.shape[1]):
        bucket = pool.get(tuple(np.round(A[:, y], _SIGNATURE_DECIMALS)))
        if not bucket:
            return None
        perm.append(bucket.pop(0))
    return tuple(perm)


def additive_witness(W: Channel) -> dict[int, tuple[int, ...]] | None:
    F = W.field
    xs = np.arange(W.q)
    sigma = {}
    for a in range(W.q):
        perm = _match_columns(W.W, W.W[F.add(xs, a)])
        if perm is None:
            return None
        sigma[a] = perm
    return sigma


def is_sof(W: Channel) -> SymmetryWitness | None:
    """Output permutations realising additive and multiplicative symmetry."""
    if W.n_outputs > MAX_SOF_OUTPUTS:
        raise GuardError(f"{W.n_outputs} outputs exceed the symmetry-search guard {MAX_SOF_OUTPUTS}")
    sigma = additive_witness(W)
    if sigma is None:
        return None
    F = W.field
    xs = np.arange(W.q)
    psi = {}
    for a in range(1, W.q):
        perm = _match_columns(W.W, W.W[F.mul(xs, a)])
        if perm is None:
            return None
        psi[a] = perm
    return SymmetryWitness(sigma, psi)


def check_witness(W: Channel, wit: SymmetryWitness) -> bool:
    F = W.field
    xs = np.arange(W.q)
    P = W.W
    for a, s in wit.sigma.items():
        if not np.allclose(P, P[F.add(xs, a)][:, list(s)], atol=1e-12):
            return False
    for a, s in wit.psi.items():
        if not np.allclose(P, P[F.mul(xs, a)][:, list(s)], atol=1e-12):
            return False
    return True


# ----------------------------------------------------------------------
# one-step splitting
# ----------------------------------------------------------------------
def split_exact(W: Channel, G, i: int) -> Channel:
    """Synthetic channel of input ``u_i`` (0-based) for one use of ``G``.

    Outputs are tuples ``(y_1, ..., y_l, u_1, ..., u_{i})``: every channel
    output followed by the already decoded inputs.
    """
    F = W.field
    G = F.check_matrix(G)
    l = G.shape[0]
    if G.shape[1] != l:
        raise DimensionError("the splitting matrix must be square")
    if not 0 <= i < l:
        raise ValueError(f"index {i} is outside 0..{l - 1}")
    q, ny = W.q, W.n_outputs
    if ny**l * q ** (l - 1) > MAX_SPLIT_SIZE:
        raise GuardError(f"|Y|^l q^(l-1) = {ny**l * q ** (l - 1)} exceeds the guard {MAX_SPLIT_SIZE}")
    U = np.array(list(itertools.product(range(q), repeat=l)), dtype=np.int64)
    X = F.matmul(U, G)
    # joint[u, y_1, ..., y_l]
    joint = np.ones((q**l,) + (1,) * l)
    for j in range(l):
        shape = [q**l] + [1] * l
        shape[1 + j] = ny
        joint = joint * W.W[X[:, j]].reshape(shape)
    joint = joint.reshape((q,) * l + (ny,) * l)
    joint = joint.sum(axis=tuple(range(i + 1, l))) / q ** (l - 1)
    # axes now (u_0..u_i, y_1..y_l); move u_i first and the decoded inputs last
    joint = np.moveaxis(joint, i, 0)
    joint = np.moveaxis(joint, list(range(1, i + 1)), list(range(l + 1, l + 1 + i)))
    outputs = list(itertools.product(*([W.outputs] * l + [range(q)] * i)))
    return Channel(F, tuple(outputs), joint.reshape(q, -1), "custom")
