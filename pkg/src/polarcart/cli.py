"""Command line front end: ``polarcart <command> --config job.json``.

Exit codes: 0 success, 2 bad config, 3 a size guard was hit, 4 a
certificate failed.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import io as pio
from .evalcode import (
    CartesianGrid,
    EvalCode,
    dimension_formula,
    is_dual_containing,
    is_lcd,
    is_self_orthogonal,
    min_distance_bruteforce,
)
from .exceptions import CertificateError, ConfigError, GuardError, PolarcartError
from .kernels import (
    MAX_STANDARD_FORM_SIZE,
    KernelSequence,
    bit_reversal_matrix,
    exponent_from_distances,
    exponent_kron_many,
    exponent_lower_bound,
    kron_fold,
    partial_distances,
    polarizes_additive,
    polarizes_sof,
    row_labels,
    standard_forms,
)
from .monomials import format_monomial
from .polarize import information_set, polar_pipeline, simulate_qec, synthetic_stats
from .validation import check_field, check_indices
from .verify import run_checks

EXIT_OK, EXIT_CONFIG, EXIT_GUARD, EXIT_CERT = 0, 2, 3, 4


def _sequence(cfg: dict, F) -> KernelSequence:
    if "kernels" in cfg:
        try:
            return KernelSequence(F, tuple(np.asarray(T, dtype=np.int64) for T in cfg["kernels"]))
        except ValueError as exc:
            raise ConfigError(f"kernels: {exc}") from None
    return KernelSequence.from_subsets(F, pio.config_subsets(cfg, F))


def cmd_code(cfg: dict) -> dict:
    F = pio.config_field(cfg)
    subsets = pio.config_subsets(cfg, F)
    if "generators" not in cfg:
        raise ConfigError("code reports need 'generators'")
    grid = CartesianGrid(F, subsets)
    try:
        code = EvalCode.from_generators(grid, cfg["generators"])
    except ValueError as exc:
        raise ConfigError(f"generators: {exc}") from None
    B = code.minimal_generators
    report = {
        "field": F.descriptor(),
        "subsets": [list(s) for s in subsets],
        "n": code.n,
        "k": code.k,
        "k_formula": dimension_formula(B),
        "minimal_generators": [list(a) for a in B],
        "monomials": [format_monomial(a) for a in code.monomials.sorted()],
        "d": code.min_distance(),
        "d_bruteforce": min_distance_bruteforce(code) if cfg.get("brute_force") else None,
        "lcd": is_lcd(code),
        "self_orthogonal": is_self_orthogonal(code),
        "dual_containing": is_dual_containing(code),
        "generator": code.generator,
        "dual": code.dual_matrix(),
    }
    return report


def _forms_report(F, T) -> list[dict] | None:
    if T.shape[0] > MAX_STANDARD_FORM_SIZE:
        return None
    return [{"perm": list(sf.perm), "V": sf.V, "P": sf.P, "G_prime": sf.G_prime,
             "is_identity": sf.is_identity} for sf in standard_forms(F, T)]


def cmd_kernel(cfg: dict) -> dict:
    F = pio.config_field(cfg)
    seq = _sequence(cfg, F)
    dists = [partial_distances(F, T) if T.shape[0] >= 2 else None for T in seq.kernels]
    exps = [exponent_from_distances(D) if D else None for D in dists]
    if all(e is not None for e in exps):
        E = exponent_kron_many(exps, seq.sizes)
    else:
        E = None
    D_m = None
    if cfg.get("brute_force_exponent"):
        D_m = partial_distances(F, seq.matrix)
        E = exponent_from_distances(D_m)
    report = {
        "field": F.descriptor(),
        "kernels": list(seq.kernels),
        "G_m": seq.matrix,
        "kron": kron_fold(seq),
        "bit_reversal": bit_reversal_matrix(seq.sizes),
        "standard_forms": [_forms_report(F, T) for T in seq.kernels],
        "polarizes_sof": polarizes_sof(seq),
        "polarizes_additive": polarizes_additive(seq),
        "partial_distances": dists,
        "kernel_exponents": exps,
        "partial_distances_G_m": D_m,
        "exponent": E,
        "exponent_lower_bound": exponent_lower_bound(seq) if seq.subsets is not None else None,
    }
    if seq.subsets is not None:
        report["subsets"] = [list(s) for s in seq.subsets]
        report["row_labels"] = [format_monomial(a) for a in row_labels(seq)]
    return report


def cmd_polarize(cfg: dict, seed: int = 0, trials: int = 10_000) -> dict:
    F = pio.config_field(cfg)
    subsets = pio.config_subsets(cfg, F)
    if "channel" not in cfg or "K" not in cfg:
        raise ConfigError("polarize needs 'channel' and 'K'")
    W = pio.build_channel(F, cfg["channel"])
    n = int(np.prod([len(s) for s in subsets]))
    if cfg["K"] > n:
        raise ConfigError(f"K = {cfg['K']} exceeds n = {n}")
    result = polar_pipeline(F, subsets, W, cfg["K"], cfg.get("method", "auto"), trials, seed,
                            strict=False)
    return result.report


def cmd_simulate(cfg: dict, seed: int = 0, trials: int = 10_000) -> dict:
    F = pio.config_field(cfg)
    seq = _sequence(cfg, F)
    W = pio.build_channel(F, cfg.get("channel", {"type": "qec", "p": 0.5}))
    if W.kind != "qec":
        raise ConfigError("simulation decodes erasure channels only")
    eps = W.erasure_prob
    if "info_set" in cfg:
        A = check_indices(cfg["info_set"], seq.n)
    elif "K" in cfg:
        stats = synthetic_stats(seq, W)
        A = list(information_set(stats, cfg["K"], seq.box if seq.subsets else None).indices)
    else:
        raise ConfigError("simulate needs 'info_set' or 'K'")
    rep = simulate_qec(F, seq.matrix, A, eps, trials, seed).to_json()
    rep["info_set"] = A
    rep["n"] = seq.n
    rep["erasure_prob"] = eps
    return rep


def cmd_verify(cfg: dict | None, seed: int = 0, trials: int = 10_000) -> dict:
    if cfg is None:
        cfg = {"field": {"p": 2, "m": 2}, "subsets": [[0, 1, 2], [0, 1, 2, 3]],
               "generators": [[2, 1], [0, 3]]}
    F = pio.config_field(cfg)
    subsets = pio.config_subsets(cfg, F) if "subsets" in cfg else None
    W = pio.build_channel(F, cfg["channel"]) if "channel" in cfg else None
    return run_checks(F, subsets, cfg.get("generators"), W, trials, seed,
                      brute_force=cfg.get("brute_force", True))


def cmd_export(cfg: dict) -> dict:
    F = pio.config_field(cfg)
    mats: dict[str, np.ndarray] = {}
    if "generators" in cfg:
        code = cmd_code(cfg)
        mats["generator"] = code["generator"]
        mats["dual"] = code["dual"]
    if "subsets" in cfg or "kernels" in cfg:
        seq = _sequence(cfg, F)
        for i, T in enumerate(seq.kernels, start=1):
            mats[f"T{i}"] = T
        mats["G_m"] = seq.matrix
        mats["bit_reversal"] = bit_reversal_matrix(seq.sizes)
    if not mats:
        raise ConfigError("nothing to export: give 'generators', 'subsets' or 'kernels'")
    return {"field": F.descriptor(), "matrices": mats}


# ----------------------------------------------------------------------
# rendering
# ----------------------------------------------------------------------
def _kv_csv(report: dict) -> str:
    rows = [[k, v] for k, v in sorted(report.items())
            if not isinstance(v, (list, dict, np.ndarray))]
    return pio.to_csv(["key", "value"], rows)


def render(command: str, report: dict, fmt: str) -> str:
    plain = pio.to_plain(report)
    pio.validate_report(command, plain)
    if fmt == "json":
        return pio.to_json(plain)
    if command == "polarize":
        chosen = set(plain["information_set"]["indices"])
        rows = [[r["index"], format_monomial(r.get("monomial", ())), r["I"], r["Z"], r["method"],
                 r["index"] in chosen] for r in plain["stats"]["indices"]]
        return pio.to_csv(["index", "monomial", "I", "Z", "method", "selected"], rows)
    if command == "verify":
        return pio.to_csv(["name", "ok", "detail"],
                          [[c["name"], c["ok"], c["detail"]] for c in plain["checks"]])
    if command == "export":
        F = check_field(plain["field"])
        return "".join(pio.matrix_csv(name, F, M) for name, M in plain["matrices"].items())
    if command == "kernel":
        return pio.matrix_csv("G_m", check_field(plain["field"]), plain["G_m"])
    return _kv_csv(plain)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarcart",
                                     description="Monomial-Cartesian codes and multikernel polar codes.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("code", "parameters, generator and dual matrices of an evaluation code"),
        ("kernel", "kernels, G_m, bit reversal, standard forms and exponents"),
        ("polarize", "synthetic-channel statistics and a certified information set"),
        ("simulate", "erasure decoding simulation against the union bound"),
        ("verify", "run the invariant suite"),
        ("export", "write matrices with the field descriptor"),
    ]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=(name != "verify"), help="job config (JSON)")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--trials", type=int, default=None)
    return parser


def run(args: argparse.Namespace) -> dict:
    cfg = pio.load_config(args.config) if args.config else None
    seed = args.seed if args.seed is not None else (cfg or {}).get("seed", 0)
    trials = args.trials if args.trials is not None else (cfg or {}).get("trials", 10_000)
    if seed < 0 or trials < 1:
        raise ConfigError("--seed must be >= 0 and --trials >= 1")
    if args.command == "code":
        return cmd_code(cfg)
    if args.command == "kernel":
        return cmd_kernel(cfg)
    if args.command == "polarize":
        return cmd_polarize(cfg, seed, trials)
    if args.command == "simulate":
        return cmd_simulate(cfg, seed, trials)
    if args.command == "verify":
        return cmd_verify(cfg, seed, trials)
    return cmd_export(cfg)


def _failed_certificates(command: str, report: dict) -> list[str]:
    if command == "verify":
        return [c["name"] for c in report["checks"] if not c["ok"]]
    if command == "polarize":
        cert = report["certificates"]
        bad = [k for k in ("kernels_polarize_sof", "channel_sof", "z_inequality", "polar_decreasing")
               if not cert.get(k)]
        if "conservation" in cert and not cert["conservation"]["ok"]:
            bad.append("conservation")
        if cert.get("monotonicity_violations"):
            bad.append("monotonicity")
        return bad
    return []


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
        text = render(args.command, report, args.format)
    except GuardError as exc:
        print(f"polarcart: guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except CertificateError as exc:
        print(f"polarcart: {exc}", file=sys.stderr)
        return EXIT_CERT
    except (ConfigError, PolarcartError, ValueError, KeyError, TypeError) as exc:
        print(f"polarcart: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = _failed_certificates(args.command, report)
    if failed:
        print(f"polarcart: certificate failure: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
