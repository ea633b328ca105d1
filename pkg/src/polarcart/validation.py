"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

from typing import Sequence

import numpy as np
from sklearn.utils.validation import check_is_fitted  # noqa: F401  (re-exported)

from .exceptions import ConfigError, DimensionError, FieldError
from .gf import Field, field_new


def check_field(spec) -> Field:
    """A :class:`Field` from a field, an order ``q`` or a ``{p, m, modulus}`` mapping."""
    if isinstance(spec, Field):
        return spec
    if isinstance(spec, int):
        return field_from_order(spec)
    if isinstance(spec, dict):
        if "q" in spec and "p" not in spec:
            return field_from_order(int(spec["q"]), spec.get("modulus"))
        try:
            return field_new(int(spec["p"]), int(spec.get("m", 1)), spec.get("modulus"))
        except KeyError as exc:
            raise ConfigError(f"field spec is missing {exc}") from None
    raise ConfigError(f"cannot build a field from {spec!r}")


def field_from_order(q: int, modulus=None) -> Field:
    for p in range(2, q + 1):
        if q % p == 0:
            m, r = 1, p
            while r < q:
                r *= p
                m += 1
            if r != q:
                break
            return field_new(p, m, modulus)
    raise FieldError(f"{q} is not a prime power")


def check_subsets(field: Field, subsets) -> tuple[tuple[int, ...], ...]:
    if not isinstance(subsets, (list, tuple)) or not subsets:
        raise ConfigError("subsets must be a non-empty list of lists")
    out = []
    for s in subsets:
        if not isinstance(s, (list, tuple)) or not s:
            raise ConfigError("each subset must be a non-empty list")
        vals = [int(v) for v in s]
        if len(set(vals)) != len(vals):
            raise ConfigError(f"subset {vals} repeats an element")
        if min(vals) < 0 or max(vals) >= field.q:
            raise ConfigError(f"subset {vals} has entries outside GF({field.q})")
        out.append(tuple(vals))
    return tuple(out)


def check_symbols(field: Field, X, *, allow_erasure: bool = False) -> np.ndarray:
    """2-D array of field indices; ``-1`` is accepted as an erasure mark if asked."""
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise DimensionError("expected a 2-D array of symbols")
    if not np.issubdtype(X.dtype, np.integer):
        if not np.all(np.equal(np.mod(X, 1), 0)):
            raise FieldError("symbols must be integers")
        X = X.astype(np.int64)
    X = X.astype(np.int64)
    lo = -1 if allow_erasure else 0
    if X.size and (X.min() < lo or X.max() >= field.q):
        raise FieldError(f"symbols must lie in {lo}..{field.q - 1}")
    return X


def check_width(X: np.ndarray, width: int, what: str = "row") -> np.ndarray:
    if X.shape[1] != width:
        raise DimensionError(f"each {what} needs {width} symbols, got {X.shape[1]}")
    return X


def check_probability(p, name: str = "probability") -> float:
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number") from None
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"{name} {p} is outside [0, 1]")
    return p


def check_indices(indices: Sequence[int], n: int) -> list[int]:
    out = sorted(int(i) for i in indices)
    if len(set(out)) != len(out) or (out and (out[0] < 0 or out[-1] >= n)):
        raise ConfigError(f"indices must be distinct and inside 0..{n - 1}")
    return out
