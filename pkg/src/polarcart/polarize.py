"""Synthetic-channel statistics, information sets and erasure decoding.

Indices are 0-based rows of ``G_m``.  Erasure probabilities are written
``eps``; a :class:`~polarcart.channels.Channel` built by ``qec`` stores the
delivery probability ``p = 1 - eps`` instead.

Two structural facts drive the fast routines.  Row ``r * N + i`` of
``G_m`` (``N`` the length of ``G_{m-1}``) belongs to the ``r``-th synthetic
channel of the last kernel, which is then split again by ``G_{m-1}``; and a
linear split of an erasure channel is again an erasure channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .channels import Channel, additive_witness, bhattacharyya, is_sof, symmetric_rate, split_exact
from .evalcode import CartesianGrid, EvalCode
from .exceptions import CertificateError, DimensionError, GuardError
from .gf import Field
from .kernels import KernelSequence, polarizes_sof, row_labels
from .monomials import (
    Monomial,
    MonomialBox,
    MonomialSet,
    format_monomial,
    inverse_lex_key,
    is_polar_decreasing,
    minimal_generating_set,
    polar_minimal_generators,
    polar_order,
)

#: Largest ``n`` whose ``2^n`` erasure patterns are enumerated.
MAX_EXACT_PATTERNS_N = 22
TOL = 1e-9
_CHUNK = 2**14


@dataclass
class SyntheticStats:
    I: np.ndarray
    Z: np.ndarray
    labels: list[Monomial] | None = None
    method: str = "exact-erasure"
    meta: dict = dc_field(default_factory=dict)
    stderr: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.I)

    @property
    def exact(self) -> bool:
        return self.method.startswith("exact")

    def to_json(self) -> dict:
        rows = []
        for i in range(self.n):
            row = {"index": i, "I": float(self.I[i]), "Z": float(self.Z[i]), "method": self.method}
            if self.labels is not None:
                row["monomial"] = list(self.labels[i])
            if self.stderr is not None:
                row["stderr"] = float(self.stderr[i])
            rows.append(row)
        return {"indices": rows, "method": self.method, "meta": dict(self.meta)}


@dataclass(frozen=True)
class InfoSet:
    indices: tuple[int, ...]
    frozen: tuple[int, ...]
    labels: tuple[Monomial, ...] | None = None

    @property
    def K(self) -> int:
        return len(self.indices)

    def to_json(self) -> dict:
        out = {"K": self.K, "indices": list(self.indices), "frozen": list(self.frozen)}
        if self.labels is not None:
            out["monomials"] = [list(a) for a in self.labels]
        return out


# ----------------------------------------------------------------------
# erasure patterns
# ----------------------------------------------------------------------
def _batched_pivots(field: Field, M: np.ndarray) -> np.ndarray:
    """Leading coordinates of the column spans of a batch of matrices.

    ``M`` has shape ``(B, n, c)``; entry ``[b, i]`` of the result says some
    combination of the columns of ``M[b]`` has its last nonzero in row ``i``.
    """
    F = field
    M = M.copy()
    B, n, _ = M.shape
    out = np.zeros((B, n), dtype=bool)
    rows = np.arange(B)
    for i in range(n - 1, -1, -1):
        nz = M[:, i, :] != 0
        has = nz.any(axis=1)
        out[:, i] = has
        if not has.any():
            continue
        b = rows[has]
        c = np.argmax(nz[has], axis=1)
        piv = M[b, :, c]
        piv = F.mul_table[F.inv_table[piv[:, i]][:, None], piv]
        factors = M[b, i, :]
        M[b] = F.sub_table[M[b], F.mul_table[piv[:, :, None], factors[:, None, :]]]
        M[b, :, c] = 0
    return out


def _pattern_flags(field: Field, G: np.ndarray, delivered: np.ndarray) -> np.ndarray:
    """Determined inputs for each delivered-column mask (rows of ``delivered``)."""
    out = []
    for start in range(0, delivered.shape[0], _CHUNK):
        d = delivered[start:start + _CHUNK]
        M = np.where(d[:, None, :], G[None, :, :], 0)
        out.append(_batched_pivots(field, M))
    return np.concatenate(out) if out else np.zeros((0, G.shape[0]), dtype=bool)


def _mask_bits(n: int) -> np.ndarray:
    masks = np.arange(2**n, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n)) & 1).astype(bool)


@lru_cache(maxsize=64)
def _pattern_table_cached(field: Field, key: bytes, n: int) -> np.ndarray:
    G = np.frombuffer(key, dtype=np.int64).reshape(n, n)
    flags = _pattern_flags(field, G, _mask_bits(n))
    flags.setflags(write=False)
    return flags


def qec_pattern_table(field: Field, G) -> np.ndarray:
    """``table[mask, i]``: ``u_i`` is determined when the columns in ``mask`` arrive.

    Bit ``j`` of ``mask`` set means column ``j`` was delivered.  Determined
    means recoverable from the delivered symbols and ``u_0 .. u_{i-1}``.
    """
    G = field.check_matrix(G)
    n = G.shape[0]
    if G.shape[1] != n:
        raise DimensionError("synthetic channels need a square matrix")
    if n > MAX_EXACT_PATTERNS_N:
        raise GuardError(f"n = {n} exceeds the pattern-enumeration guard {MAX_EXACT_PATTERNS_N}")
    return _pattern_table_cached(field, np.ascontiguousarray(G).tobytes(), n)


@lru_cache(maxsize=64)
def _erasure_counts(field: Field, key: bytes, n: int) -> np.ndarray:
    """``counts[k, i]``: patterns with ``k`` erasures that determine ``u_i``."""
    table = _pattern_table_cached(field, key, n)
    erased = n - _mask_bits(n).sum(axis=1)
    counts = np.zeros((n + 1, n))
    np.add.at(counts, erased, table)
    return counts


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"erasure probability {eps} is outside [0, 1]")
    return eps


def qec_synthetic_exact(field: Field, G, eps: float, i: int | None = None):
    """Exact ``(I, Z)`` of the synthetic channels of ``G`` over an erasure channel.

    Returns a pair of floats for one index ``i``, else a pair of arrays.
    """
    eps = _check_eps(eps)
    G = field.check_matrix(G)
    qec_pattern_table(field, G)
    n = G.shape[0]
    counts = _erasure_counts(field, np.ascontiguousarray(G).tobytes(), n)
    k = np.arange(n + 1)
    weights = np.array([eps**int(a) * (1 - eps) ** int(n - a) for a in k])
    I = np.clip(weights @ counts, 0.0, 1.0)
    Z = 1.0 - I
    if i is not None:
        return float(I[i]), float(Z[i])
    return I, Z


def qec_synthetic_recursive(seq: KernelSequence, eps: float) -> np.ndarray:
    """Exact erasure probabilities ``Z_i`` through the kernel recursion."""
    eps = _check_eps(eps)
    return _recursive_z(seq, eps)


def _recursive_z(seq: KernelSequence, eps: float) -> np.ndarray:
    F = seq.field
    T = seq.kernels[-1]
    _, z = qec_synthetic_exact(F, T, eps)
    if seq.m == 1:
        return z
    inner = seq.prefix(seq.m - 1)
    return np.concatenate([_recursive_z(inner, float(e)) for e in z])


def _recursive_flags(tables: Sequence[np.ndarray], sizes: Sequence[int],
                     erased: np.ndarray) -> np.ndarray:
    """Per-pattern determined flags through the kernel recursion."""
    l = sizes[-1]
    T = erased.shape[0]
    blocks = erased.reshape(T, -1, l)
    masks = (~blocks).astype(np.int64) @ (1 << np.arange(l, dtype=np.int64))
    det = tables[-1][masks]
    if len(sizes) == 1:
        return det.reshape(T, l)
    parts = [_recursive_flags(tables[:-1], sizes[:-1], ~det[:, :, r]) for r in range(l)]
    return np.concatenate(parts, axis=1)


def _spawn_rngs(seed: int, chunks: int) -> list[np.random.Generator]:
    seqs = np.random.SeedSequence(seed).spawn(chunks)
    return [np.random.Generator(np.random.PCG64(s)) for s in seqs]


def qec_determined_mc(code, eps: float, trials: int, seed: int) -> np.ndarray:
    """Sampled determined-flags matrix of shape ``(trials, n)``.

    ``code`` is a :class:`KernelSequence` (fast recursion) or a pair
    ``(field, G)`` (batched elimination per pattern).
    """
    eps = _check_eps(eps)
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if isinstance(code, KernelSequence):
        tables = [qec_pattern_table(code.field, T) for T in code.kernels]
        n = code.n
        run = lambda erased: _recursive_flags(tables, code.sizes, erased)
    else:
        field, G = code
        G = field.check_matrix(G)
        n = G.shape[0]
        run = lambda erased: _pattern_flags(field, G, ~erased)
    n_chunks = -(-trials // _CHUNK)
    out = []
    for c, rng in enumerate(_spawn_rngs(seed, n_chunks)):
        size = min(_CHUNK, trials - c * _CHUNK)
        erased = rng.random((size, n)) < eps
        out.append(run(erased))
    return np.concatenate(out)


def qec_synthetic_mc(code, eps: float, i: int | None = None, trials: int = 10_000,
                     seed: int = 0):
    """Monte Carlo ``(I, Z, stderr)``; per index when ``i`` is given."""
    flags = qec_determined_mc(code, eps, trials, seed)
    I = flags.mean(axis=0)
    se = np.sqrt(I * (1 - I) / flags.shape[0])
    if i is not None:
        return float(I[i]), float(1 - I[i]), float(se[i])
    return I, 1 - I, se


# ----------------------------------------------------------------------
# general channels
# ----------------------------------------------------------------------
def _kernel_codebooks(field: Field, T: np.ndarray) -> list[np.ndarray]:
    """For each row ``r``: codewords of ``(x, u_{r+1}, ...)`` with earlier inputs zero."""
    l = T.shape[0]
    books = []
    for r in range(l):
        k = l - r
        U = np.indices((field.q,) * k).reshape(k, -1).T
        books.append(field.matmul(U, T[r:]))
    return books


def _sc_posteriors(books: Sequence[list[np.ndarray]], sizes: Sequence[int],
                   L: np.ndarray, q: int) -> np.ndarray:
    """Posteriors of every input given the outputs and zero earlier inputs."""
    l = sizes[-1]
    T = L.shape[0]
    blocks = L.reshape(T, -1, l, q)
    parts = []
    for r in range(l):
        X = books[-1][r]
        P = np.ones((T, blocks.shape[1], X.shape[0]))
        for c in range(l):
            P = P * blocks[:, :, c, :][:, :, X[:, c]]
        P = P.reshape(T, blocks.shape[1], q, -1).sum(axis=3)
        total = P.sum(axis=2, keepdims=True)
        P = np.divide(P, total, out=np.full_like(P, 1.0 / q), where=total > 0)
        if len(sizes) == 1:
            parts.append(P)
        else:
            parts.append(_sc_posteriors(books[:-1], sizes[:-1], P, q))
    return np.concatenate(parts, axis=1)


def sc_synthetic_mc(seq: KernelSequence, channel: Channel, trials: int = 10_000,
                    seed: int = 0) -> SyntheticStats:
    """Monte Carlo rates of every synthetic channel with the zero codeword sent.

    Sending zero is exact in distribution for additively symmetric channels,
    which is checked first.
    """
    if channel.field != seq.field:
        raise ValueError("channel and kernels use different fields")
    if additive_witness(channel) is None:
        raise ValueError("Monte Carlo with the zero codeword needs an additively symmetric channel")
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    q, n = channel.q, seq.n
    books = [_kernel_codebooks(seq.field, T) for T in seq.kernels]
    n_chunks = -(-trials // _CHUNK)
    ent, bha = [], []
    for c, rng in enumerate(_spawn_rngs(seed, n_chunks)):
        size = min(_CHUNK, trials - c * _CHUNK)
        y = rng.choice(channel.n_outputs, size=(size, n), p=channel.W[0])
        L = np.moveaxis(channel.W[:, y], 0, -1)
        P = _sc_posteriors(books, seq.sizes, L, q)
        with np.errstate(divide="ignore", invalid="ignore"):
            h = -np.where(P > 0, P * np.log(P), 0.0).sum(axis=2) / math.log(q)
        s = np.sqrt(P).sum(axis=2)
        ent.append(h)
        bha.append((s**2 - 1) / (q - 1))
    H = np.concatenate(ent)
    Zs = np.concatenate(bha)
    I = np.clip(1 - H.mean(axis=0), 0.0, 1.0)
    Z = np.clip(Zs.mean(axis=0), 0.0, 1.0)
    se = H.std(axis=0, ddof=1) / math.sqrt(trials) if trials > 1 else np.zeros(n)
    labels = row_labels(seq) if seq.subsets is not None else None
    return SyntheticStats(I, Z, labels, "monte-carlo",
                          {"seed": int(seed), "trials": trials, "z_stderr":
                           (Zs.std(axis=0, ddof=1) / math.sqrt(trials)).tolist() if trials > 1 else None},
                          se)


def synthetic_stats(seq: KernelSequence, channel: Channel, method: str = "auto",
                    trials: int = 10_000, seed: int = 0) -> SyntheticStats:
    """Statistics of every synthetic channel of ``G_m`` over ``channel``.

    ``method`` is ``auto``, ``exact-erasure``, ``exact-tiny`` or
    ``monte-carlo``.  ``auto`` picks the exact erasure recursion for erasure
    channels, explicit splitting when it fits the guard, else Monte Carlo.
    """
    labels = row_labels(seq) if seq.subsets is not None else None
    erasure = channel.kind == "qec"
    if method == "auto":
        if erasure:
            method = "exact-erasure"
        else:
            size = channel.n_outputs**seq.n * channel.q ** (seq.n - 1)
            method = "exact-tiny" if size <= 2**22 else "monte-carlo"
    if method == "exact-erasure":
        if not erasure:
            raise ValueError("exact erasure statistics need an erasure channel")
        Z = qec_synthetic_recursive(seq, channel.erasure_prob)
        return SyntheticStats(1 - Z, Z, labels, method, {"eps": channel.erasure_prob})
    if method == "exact-tiny":
        G = seq.matrix
        chans = [split_exact(channel, G, i) for i in range(seq.n)]
        I = np.array([symmetric_rate(c) for c in chans])
        Z = np.array([bhattacharyya(c) for c in chans])
        return SyntheticStats(I, Z, labels, method)
    if method == "monte-carlo":
        if erasure:
            I, Z, se = qec_synthetic_mc(seq, channel.erasure_prob, trials=trials, seed=seed)
            return SyntheticStats(I, Z, labels, method, {"seed": int(seed), "trials": int(trials)}, se)
        return sc_synthetic_mc(seq, channel, trials, seed)
    raise ValueError(f"unknown method {method!r}")


# ----------------------------------------------------------------------
# information sets and order checks
# ----------------------------------------------------------------------
def _label_box(stats: SyntheticStats, box: MonomialBox) -> np.ndarray:
    if stats.labels is None:
        raise ValueError("order checks need monomial labels")
    return np.array([box.index(a) for a in stats.labels], dtype=np.int64)


def information_set(stats: SyntheticStats, K: int, box: MonomialBox | None = None) -> InfoSet:
    """The ``K`` indices of smallest ``Z``.

    Values within ``1e-9`` of each other count as tied; ties go first to
    labels with smaller order down-sets, then to inverse-lex smaller labels.
    """
    n = stats.n
    K = int(K)
    if not 0 <= K <= n:
        raise ValueError(f"K = {K} is outside 0..{n}")
    order = np.argsort(stats.Z, kind="stable")
    cluster = np.zeros(n, dtype=np.int64)
    for pos in range(1, n):
        gap = stats.Z[order[pos]] - stats.Z[order[pos - 1]]
        cluster[order[pos]] = cluster[order[pos - 1]] + (gap > TOL)
    if stats.labels is not None:
        down = [0] * n
        if box is not None:
            po = polar_order(box)
            down = [po.down_set_size(a) for a in stats.labels]
        keys = [(int(cluster[i]), down[i], inverse_lex_key(stats.labels[i]), i) for i in range(n)]
    else:
        keys = [(int(cluster[i]), 0, (), i) for i in range(n)]
    ranked = [k[-1] for k in sorted(keys)]
    chosen = tuple(sorted(ranked[:K]))
    frozen = tuple(sorted(ranked[K:]))
    labels = None if stats.labels is None else tuple(stats.labels[i] for i in chosen)
    return InfoSet(chosen, frozen, labels)


def z_inequality_holds(stats: SyntheticStats, info: InfoSet, tol: float = TOL) -> bool:
    if not info.indices or not info.frozen:
        return True
    return bool(stats.Z[list(info.indices)].max() <= stats.Z[list(info.frozen)].min() + tol)


def check_order_monotonicity(stats: SyntheticStats, box: MonomialBox,
                             tol: float = TOL) -> list[dict]:
    """Pairs ``a <| b`` where ``a`` has lower rate or higher ``Z`` than ``b``."""
    idx = _label_box(stats, box)
    R = polar_order(box).relation[np.ix_(idx, idx)].copy()
    np.fill_diagonal(R, False)
    bad_I = stats.I[:, None] < stats.I[None, :] - tol
    bad_Z = stats.Z[:, None] > stats.Z[None, :] + tol
    out = []
    for a, b in zip(*np.nonzero(R & (bad_I | bad_Z))):
        out.append({
            "smaller": list(stats.labels[a]), "larger": list(stats.labels[b]),
            "I": [float(stats.I[a]), float(stats.I[b])],
            "Z": [float(stats.Z[a]), float(stats.Z[b])],
        })
    return out


def certify_polar_decreasing(S: MonomialSet) -> dict:
    """Closure certificate with both kinds of generating set."""
    ok = is_polar_decreasing(S)
    out = {"polar_decreasing": ok}
    if ok:
        out["order_basis"] = [list(a) for a in polar_minimal_generators(S)]
        out["divisibility_basis"] = [list(a) for a in minimal_generating_set(S)]
    return out


# ----------------------------------------------------------------------
# encoding and erasure decoding
# ----------------------------------------------------------------------
def _frozen_vector(n: int, A: Sequence[int], frozen) -> tuple[np.ndarray, np.ndarray]:
    A = np.asarray(sorted(int(a) for a in A), dtype=np.int64)
    if A.size and (A.min() < 0 or A.max() >= n or len(set(A.tolist())) != A.size):
        raise ValueError("information indices must be distinct and inside 0..n-1")
    u = np.zeros(n, dtype=np.int64)
    if frozen is not None:
        frozen = np.asarray(frozen, dtype=np.int64)
        if frozen.shape != (n,):
            raise DimensionError(f"frozen values need length {n}")
        u[:] = frozen
    return A, u


def encode(field: Field, message, A: Sequence[int], G, frozen=None) -> np.ndarray:
    """Codeword ``u G`` with ``u[A] = message`` and the rest from ``frozen`` (zeros)."""
    G = field.check_matrix(G)
    A, u = _frozen_vector(G.shape[0], A, frozen)
    message = np.asarray(message, dtype=np.int64)
    if message.shape != (A.size,):
        raise DimensionError(f"message length {message.size} does not match |A| = {A.size}")
    u[A] = message
    return field.matmul(u, G)


def sc_decode_qec(field: Field, received, A: Sequence[int], G, frozen=None) -> np.ndarray | None:
    """Successive recovery of ``u[A]`` from symbols where ``-1`` marks an erasure.

    Returns the message or ``None`` when some information symbol is not
    determined by the delivered symbols and the earlier inputs.
    """
    F = field
    G = F.check_matrix(G)
    n = G.shape[0]
    received = np.asarray(received, dtype=np.int64)
    if received.shape != (n,):
        raise DimensionError(f"received word needs length {n}")
    A, u = _frozen_vector(n, A, frozen)
    info = set(A.tolist())
    J = np.nonzero(received >= 0)[0]
    y = received[J]
    GJ = G[:, J]
    known = np.zeros(n, dtype=bool)
    for i in range(n):
        if i not in info:
            known[i] = True
            continue
        if J.size == 0:
            return None
        resid = F.sub(y, F.matmul(np.where(known, u, 0), GJ))
        rhs = np.zeros(n - i, dtype=np.int64)
        rhs[0] = 1
        h = F.solve(GJ[i:], rhs)
        if h is None:
            return None
        u[i] = F.dot(resid, h)
        known[i] = True
    return u[A]


@dataclass
class SimulationReport:
    trials: int
    block_errors: int
    union_bound: float | None
    seed: int

    @property
    def rate(self) -> float:
        return self.block_errors / self.trials

    @property
    def stderr(self) -> float:
        r = self.rate
        return math.sqrt(r * (1 - r) / self.trials)

    def to_json(self) -> dict:
        return {"trials": self.trials, "block_errors": self.block_errors,
                "block_error_rate": self.rate, "stderr": self.stderr,
                "union_bound": self.union_bound, "seed": self.seed}


def simulate_qec(field: Field, G, A: Sequence[int], eps: float, trials: int = 10_000,
                 seed: int = 0, frozen=None) -> SimulationReport:
    """Block-error rate of erasure decoding against the sum of ``Z`` over ``A``."""
    eps = _check_eps(eps)
    G = field.check_matrix(G)
    n = G.shape[0]
    A = sorted(int(a) for a in A)
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    msgs = rng.integers(0, field.q, size=(trials, len(A)))
    erased = rng.random((trials, n)) < eps
    errors = 0
    for t in range(trials):
        x = encode(field, msgs[t], A, G, frozen)
        x[erased[t]] = -1
        got = sc_decode_qec(field, x, A, G, frozen)
        if got is None or not np.array_equal(got, msgs[t]):
            errors += 1
    bound = None
    if n <= MAX_EXACT_PATTERNS_N:
        _, Z = qec_synthetic_exact(field, G, eps)
        bound = float(Z[A].sum())
    return SimulationReport(trials, errors, bound, int(seed))


# ----------------------------------------------------------------------
# pipeline
# ----------------------------------------------------------------------
@dataclass
class PipelineResult:
    code: EvalCode
    stats: SyntheticStats
    info: InfoSet
    report: dict


def polar_pipeline(field: Field, subsets: Sequence[Sequence[int]], channel: Channel, K: int,
                   method: str = "auto", trials: int = 10_000, seed: int = 0,
                   strict: bool = True) -> PipelineResult:
    """Kernels to certified information set to monomial-Cartesian code.

    With ``strict`` a failed certificate raises :class:`CertificateError`.
    """
    seq = KernelSequence.from_subsets(field, subsets)
    grid = CartesianGrid(field, seq.subsets)
    box = grid.box
    cert: dict = {
        "kernels_polarize_sof": polarizes_sof(seq),
        "channel_sof": is_sof(channel) is not None,
    }
    stats = synthetic_stats(seq, channel, method, trials, seed)
    info = information_set(stats, K, box)
    cert["z_inequality"] = z_inequality_holds(stats, info)
    if stats.exact:
        total = float(stats.I.sum())
        expected = seq.n * symmetric_rate(channel)
        cert["conservation"] = {"sum_I": total, "n_I_W": expected,
                                "ok": abs(total - expected) <= 1e-9}
        cert["monotonicity_violations"] = check_order_monotonicity(stats, box)
    S = MonomialSet.of(box, info.labels)
    cert.update(certify_polar_decreasing(S))
    code = EvalCode(grid, S)
    report = {
        "field": field.descriptor(),
        "subsets": [list(s) for s in seq.subsets],
        "n": seq.n,
        "K": info.K,
        "channel": channel.to_json(),
        "stats": stats.to_json(),
        "information_set": info.to_json(),
        "monomials": [format_monomial(a) for a in S.sorted()],
        "certificates": cert,
    }
    if strict:
        failed = [k for k in ("kernels_polarize_sof", "channel_sof", "z_inequality", "polar_decreasing")
                  if not cert[k]]
        if "conservation" in cert and not cert["conservation"]["ok"]:
            failed.append("conservation")
        if cert.get("monotonicity_violations"):
            failed.append("monotonicity")
        if failed:
            raise CertificateError("certificate failure: " + ", ".join(failed))
    return PipelineResult(code, stats, info, report)
