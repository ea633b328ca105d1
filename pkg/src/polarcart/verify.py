"""The invariant suite run by ``polarcart verify``."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .channels import Channel, qec
from .evalcode import (
    CartesianGrid,
    EvalCode,
    dimension_formula,
    min_distance_bruteforce,
)
from .exceptions import GuardError
from .gf import Field
from .kernels import (
    KernelSequence,
    bit_reversal,
    exponent_kron_many,
    exponent_lower_bound,
    exponent,
    kron_fold,
    row_labels,
    standard_forms,
    verify_standard_form,
)
from .monomials import MonomialSet
from .polarize import (
    MAX_EXACT_PATTERNS_N,
    SyntheticStats,
    certify_polar_decreasing,
    check_order_monotonicity,
    information_set,
    qec_synthetic_exact,
    qec_synthetic_mc,
    qec_synthetic_recursive,
)

Check = Callable[[], tuple[bool, str]]


def _field_axioms(F: Field) -> tuple[bool, str]:
    a = np.arange(F.q)
    A, B = np.meshgrid(a, a, indexing="ij")
    ok = np.array_equal(F.add(A, B), F.add(B, A)) and np.array_equal(F.mul(A, B), F.mul(B, A))
    for c in range(F.q):
        ok &= np.array_equal(F.mul(c, F.add(A, B)), F.add(F.mul(c, A), F.mul(c, B)))
    ok &= bool((F.mul(a[1:], F.inv(a[1:])) == 1).all())
    ok &= bool((F.add(a, F.neg(a)) == 0).all())
    return bool(ok), f"q = {F.q}"


def _code_checks(code: EvalCode, brute: bool) -> dict[str, Check]:
    F = code.field

    def dual():
        D = code.dual_matrix()
        orth = not F.matmul(code.generator, D.T).any()
        size = D.shape[0] == code.n - code.k
        return orth and size, f"{D.shape[0]} dual vectors, n - k = {code.n - code.k}"

    def dimension():
        kf = dimension_formula(code.minimal_generators)
        return kf == code.k == F.rank(code.generator), f"|M| = {code.k}, formula = {kf}"

    def distance():
        d = code.min_distance()
        if not brute:
            return True, f"formula d = {d} (brute force skipped)"
        try:
            db = min_distance_bruteforce(code)
        except GuardError as exc:
            return True, f"formula d = {d}; {exc}"
        return d == db, f"formula {d}, brute force {db}"

    return {"dual_orthogonality": dual, "dimension_formula": dimension, "distance_formula": distance}


def _kernel_checks(seq: KernelSequence) -> dict[str, Check]:
    F = seq.field

    def reversal():
        perm = bit_reversal(seq.sizes)
        return bool(np.array_equal(seq.matrix, kron_fold(seq)[perm])), f"n = {seq.n}"

    def forms():
        count = 0
        for T in seq.kernels:
            if T.shape[0] > 6:
                continue
            for sf in standard_forms(F, T):
                if not verify_standard_form(F, T, sf):
                    return False, "a standard form failed to verify"
                count += 1
        return True, f"{count} standard forms verified"

    def exponents():
        exps = [exponent(F, T) for T in seq.kernels if T.shape[0] >= 2]
        if len(exps) != seq.m:
            return True, "size-1 kernel present; skipped"
        E = exponent_kron_many(exps, seq.sizes)
        lb = exponent_lower_bound(seq)
        return lb <= E + 1e-12, f"lower bound {lb:.6f} <= E {E:.6f}"

    return {"bit_reversal": reversal, "standard_forms": forms, "exponent_bound": exponents}


def _erasure_checks(seq: KernelSequence, eps: float, trials: int, seed: int) -> dict[str, Check]:
    F = seq.field
    box = seq.box
    labels = row_labels(seq)

    def exact():
        I, Z = qec_synthetic_exact(F, seq.matrix, eps)
        Zr = qec_synthetic_recursive(seq, eps)
        cons = abs(I.sum() - seq.n * (1 - eps)) <= 1e-9
        dual = np.abs(I + Z - 1).max() <= 1e-12
        agree = np.abs(Z - Zr).max() <= 1e-12
        return bool(cons and dual and agree), f"sum I = {I.sum():.12f}, n p = {seq.n * (1 - eps):.12f}"

    def recursive():
        Z = qec_synthetic_recursive(seq, eps)
        return abs((1 - Z).sum() - seq.n * (1 - eps)) <= 1e-9, f"sum I = {(1 - Z).sum():.12f}"

    def monotone():
        Z = qec_synthetic_recursive(seq, eps)
        stats = SyntheticStats(1 - Z, Z, labels)
        bad = check_order_monotonicity(stats, box)
        info_ok = True
        for K in range(1, seq.n + 1):
            info = information_set(stats, K, box)
            S = MonomialSet.of(box, info.labels)
            info_ok &= certify_polar_decreasing(S)["polar_decreasing"]
        return not bad and info_ok, f"{len(bad)} order violations, closure for every K: {info_ok}"

    def degradation():
        grid = np.linspace(0.1, 0.9, 9)
        Zs = np.array([qec_synthetic_recursive(seq, 1 - p) for p in grid])
        return bool((np.diff(Zs, axis=0) <= 1e-12).all()), "Z non-increasing in p"

    def monte_carlo():
        if seq.n > MAX_EXACT_PATTERNS_N:
            Iex = 1 - qec_synthetic_recursive(seq, eps)
        else:
            Iex, _ = qec_synthetic_exact(F, seq.matrix, eps)
        Im, _, _ = qec_synthetic_mc(seq, eps, trials=trials, seed=seed)
        se = np.sqrt(Iex * (1 - Iex) / trials)
        dev = np.abs(Im - Iex)
        ok = bool(np.all((dev <= 4 * se) | (se == 0) & (dev == 0)))
        return ok, f"max deviation {dev.max():.4g}"

    out = {"erasure_recursion": recursive, "erasure_monotonicity": monotone,
           "degradation": degradation, "monte_carlo_agreement": monte_carlo}
    if seq.n <= 12:
        out["erasure_exact"] = exact
    return out


def run_checks(field: Field, subsets=None, generators=None, channel: Channel | None = None,
               trials: int = 10_000, seed: int = 0, brute_force: bool = True) -> dict:
    """Run every applicable invariant and collect pass/fail lines."""
    checks: dict[str, Check] = {"field_axioms": lambda: _field_axioms(field)}
    if subsets is not None:
        grid = CartesianGrid(field, subsets)
        if generators is not None:
            code = EvalCode.from_generators(grid, generators)
            checks.update(_code_checks(code, brute_force))
        seq = KernelSequence.from_subsets(field, subsets)
        checks.update(_kernel_checks(seq))
        ch = channel if channel is not None else qec(field, 0.5)
        if ch.kind == "qec" and seq.box.size <= 2048:
            checks.update(_erasure_checks(seq, ch.erasure_prob, trials, seed))
    results = []
    for name, fn in checks.items():
        try:
            ok, detail = fn()
        except GuardError as exc:
            ok, detail = True, f"skipped: {exc}"
        results.append({"name": name, "ok": bool(ok), "detail": detail})
    return {"ok": all(r["ok"] for r in results), "checks": results}

