"""Job configs, channel specs, report schemas and serialisation."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .channels import Channel, custom, qec, qsc
from .exceptions import ConfigError
from .gf import Field
from .validation import check_field, check_probability, check_subsets

_FIELD = {
    "oneOf": [
        {"type": "integer", "minimum": 2},
        {
            "type": "object",
            "properties": {
                "p": {"type": "integer"},
                "m": {"type": "integer", "minimum": 1},
                "q": {"type": "integer"},
                "modulus": {"type": "array", "items": {"type": "integer"}},
            },
        },
    ]
}
_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}
_INT_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
_FIELD_DESC = {
    "type": "object",
    "required": ["p", "m", "modulus"],
    "properties": {"p": {"type": "integer"}, "m": {"type": "integer"},
                   "modulus": {"type": "array", "items": {"type": "integer"}}},
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["field"],
    "properties": {
        "field": _FIELD,
        "subsets": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "m": {"type": "integer", "minimum": 1},
        "kernels": {"type": "array", "items": _INT_MATRIX},
        "generators": _INT_MATRIX,
        "channel": {
            "type": "object",
            "required": ["type"],
            "properties": {
                "type": {"enum": ["qsc", "qec", "custom"]},
                "p": {"type": "number"},
                "erasure_prob": {"type": "number"},
                "matrix": _MATRIX,
                "outputs": {"type": "array"},
            },
        },
        "K": {"type": "integer", "minimum": 0},
        "info_set": {"type": "array", "items": {"type": "integer"}},
        "method": {"enum": ["auto", "exact-erasure", "exact-tiny", "monte-carlo"]},
        "brute_force": {"type": "boolean"},
        "brute_force_exponent": {"type": "boolean"},
        "seed": {"type": "integer", "minimum": 0},
        "trials": {"type": "integer", "minimum": 1},
    },
}

REPORT_SCHEMAS: dict[str, dict] = {
    "code": {
        "type": "object",
        "required": ["field", "subsets", "n", "k", "k_formula", "minimal_generators", "d",
                     "lcd", "self_orthogonal", "generator", "dual"],
        "properties": {
            "field": _FIELD_DESC,
            "n": {"type": "integer"},
            "k": {"type": "integer"},
            "k_formula": {"type": "integer"},
            "d": {"type": "integer"},
            "d_bruteforce": {"type": ["integer", "null"]},
            "lcd": {"type": "boolean"},
            "self_orthogonal": {"type": "boolean"},
            "generator": _INT_MATRIX,
            "dual": _INT_MATRIX,
        },
    },
    "kernel": {
        "type": "object",
        "required": ["field", "kernels", "G_m", "kron", "bit_reversal", "polarizes_sof",
                     "exponent", "exponent_lower_bound"],
        "properties": {
            "field": _FIELD_DESC,
            "kernels": {"type": "array", "items": _INT_MATRIX},
            "G_m": _INT_MATRIX,
            "kron": _INT_MATRIX,
            "bit_reversal": _INT_MATRIX,
            "polarizes_sof": {"type": "boolean"},
            "polarizes_additive": {"type": "boolean"},
            "exponent": {"type": ["number", "null"]},
            "exponent_lower_bound": {"type": ["number", "null"]},
        },
    },
    "polarize": {
        "type": "object",
        "required": ["field", "n", "K", "stats", "information_set", "certificates"],
        "properties": {
            "field": _FIELD_DESC,
            "stats": {
                "type": "object",
                "required": ["indices", "method"],
                "properties": {
                    "indices": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["index", "I", "Z", "method"],
                            "properties": {"I": {"type": "number", "minimum": 0, "maximum": 1},
                                           "Z": {"type": "number", "minimum": 0, "maximum": 1}},
                        },
                    }
                },
            },
            "certificates": {"type": "object", "required": ["polar_decreasing", "z_inequality"]},
        },
    },
    "simulate": {
        "type": "object",
        "required": ["trials", "block_errors", "block_error_rate", "union_bound", "seed"],
        "properties": {
            "trials": {"type": "integer"},
            "block_errors": {"type": "integer"},
            "union_bound": {"type": ["number", "null"]},
        },
    },
    "verify": {
        "type": "object",
        "required": ["ok", "checks"],
        "properties": {
            "ok": {"type": "boolean"},
            "checks": {"type": "array", "items": {"type": "object", "required": ["name", "ok"]}},
        },
    },
    "export": {
        "type": "object",
        "required": ["field", "matrices"],
        "properties": {"field": _FIELD_DESC,
                       "matrices": {"type": "object", "additionalProperties": _INT_MATRIX}},
    },
}


def load_config(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return check_config(cfg)


def check_config(cfg: Any) -> dict:
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config: {exc.message}") from None
    return cfg


def config_field(cfg: dict) -> Field:
    try:
        return check_field(cfg["field"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def config_subsets(cfg: dict, field: Field) -> tuple[tuple[int, ...], ...]:
    if "subsets" not in cfg:
        raise ConfigError("config needs 'subsets'")
    subsets = check_subsets(field, cfg["subsets"])
    if "m" in cfg:
        m = int(cfg["m"])
        if len(subsets) == 1:
            subsets = subsets * m
        elif len(subsets) != m:
            raise ConfigError(f"m = {m} does not match {len(subsets)} subsets")
    return subsets


def build_channel(field: Field, spec: dict) -> Channel:
    """Channel from ``{type, p | erasure_prob | matrix}``.

    For ``qec`` the key ``p`` is the delivery probability and
    ``erasure_prob`` its complement; give one of them.
    """
    kind = spec.get("type")
    try:
        if kind == "qsc":
            return qsc(field, check_probability(spec.get("p"), "p"))
        if kind == "qec":
            if ("p" in spec) == ("erasure_prob" in spec):
                raise ConfigError("qec needs exactly one of 'p' and 'erasure_prob'")
            if "p" in spec:
                return qec(field, check_probability(spec["p"], "p"))
            return qec(field, 1.0 - check_probability(spec["erasure_prob"], "erasure_prob"))
        if kind == "custom":
            if "matrix" not in spec:
                raise ConfigError("custom channels need 'matrix'")
            return custom(field, spec["matrix"], spec.get("outputs"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"channel: {exc}") from None
    raise ConfigError(f"unknown channel type {kind!r}")


def validate_report(kind: str, report: dict) -> None:
    jsonschema.validate(report, REPORT_SCHEMAS[kind])


def to_plain(obj):
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def to_json(report: dict) -> str:
    return json.dumps(to_plain(report), indent=2, sort_keys=True) + "\n"


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(to_plain(rows))
    return buf.getvalue()


def matrix_csv(name: str, field: Field, M) -> str:
    """A matrix as CSV, preceded by a comment line naming the field."""
    M = np.asarray(M)
    d = field.descriptor()
    head = f"# {name} over GF({d['p']}^{d['m']}) modulus={' '.join(map(str, d['modulus']))}\n"
    cols = [f"c{j}" for j in range(M.shape[1] if M.ndim == 2 else 0)]
    return head + to_csv(cols, M.tolist())
