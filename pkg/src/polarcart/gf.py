"""Table-driven arithmetic over GF(p^m) and dense linear algebra over it.

Elements are stored by canonical index: index 0 is zero and index ``k + 1``
is ``g**k`` for the field's fixed primitive element ``g``.  So index 1 is
always the unit.  Matrices are plain numpy integer arrays of indices; every
matrix routine lives on :class:`Field` so that one field object owns the
lookup tables it needs.

The "polynomial integer" of an element is its coefficient vector over
GF(p) read as a base-p number (lowest coefficient first).  For prime fields
this is the usual residue, which is what :meth:`Field.from_int` expects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionError, FieldError

MAX_ORDER = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _int_to_digits(v: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        out.append(v % p)
        v //= p
    return out


def _digits_to_int(digits: Sequence[int], p: int) -> int:
    v = 0
    for d in reversed(digits):
        v = v * p + d
    return v


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic-or-not polynomial ``mod``."""
    a = _poly_trim(list(a))
    mod = _poly_trim(list(mod))
    dm = len(mod) - 1
    lead_inv = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        coef = a[-1] * lead_inv % p
        shift = len(a) - 1 - dm
        for k, c in enumerate(mod):
            a[shift + k] = (a[shift + k] - coef * c) % p
        _poly_trim(a)
    return a


def _is_irreducible(mod: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    mod = _poly_trim(list(mod))
    deg = len(mod) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not _poly_mod(mod, divisor, p):
                return False
    return True


def default_modulus(p: int, m: int) -> list[int]:
    """Lowest monic irreducible of degree ``m`` (coefficients low to high).

    Candidates are scanned in increasing base-p value, i.e. lexicographically
    on the coefficient vector read from the top degree down.
    """
    for v in range(p**m, 2 * p**m):
        coeffs = _int_to_digits(v, p, m + 1)
        if _is_irreducible(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True, eq=False)
class Field:
    """The finite field GF(p^m), q = p^m <= 256.

    Construct through :func:`field_new` or directly; both validate ``p``
    and the modulus.  Fields compare equal when ``(p, m, modulus)`` agree.
    """

    p: int
    m: int = 1
    modulus: tuple[int, ...] | None = None
    q: int = dc_field(init=False)
    generator: int = dc_field(init=False)

    def __post_init__(self) -> None:
        p, m = self.p, self.m
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be >= 1")
        q = p**m
        if q > MAX_ORDER:
            raise FieldError(f"field size {q} exceeds the supported maximum {MAX_ORDER}")
        if self.modulus is None:
            modulus = default_modulus(p, m)
        else:
            modulus = [int(c) % p for c in self.modulus]
            if len(_poly_trim(list(modulus))) != m + 1:
                raise FieldError(f"modulus must have degree exactly {m}")
            if not _is_irreducible(modulus, p):
                raise FieldError(f"modulus {list(self.modulus)} is reducible over GF({p})")
            lead_inv = pow(modulus[m], p - 2, p)
            modulus = [c * lead_inv % p for c in modulus[: m + 1]]
        object.__setattr__(self, "modulus", tuple(modulus))
        object.__setattr__(self, "q", q)
        self._build_tables()

    # ------------------------------------------------------------------
    # table construction
    # ------------------------------------------------------------------
    def _poly_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da = _int_to_digits(a, p, m)
        db = _int_to_digits(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_mod(prod, self.modulus, p)
        return _digits_to_int(rem + [0] * (m - len(rem)), p)

    def _build_tables(self) -> None:
        p, m, q = self.p, self.m, self.q
        gen_poly = None
        for cand in range(1, q):
            v, order = cand, 1
            while v != 1:
                v = self._poly_mul(v, cand)
                order += 1
            if order == q - 1:
                gen_poly = cand
                break
        assert gen_poly is not None
        exp_poly = [1]
        for _ in range(q - 2):
            exp_poly.append(self._poly_mul(exp_poly[-1], gen_poly))

        idx_to_poly = np.zeros(q, dtype=np.int64)
        idx_to_poly[1:] = exp_poly
        poly_to_idx = np.zeros(q, dtype=np.int64)
        poly_to_idx[idx_to_poly] = np.arange(q)

        digits = np.array([_int_to_digits(int(v), p, m) for v in range(q)], dtype=np.int64)
        weights = p ** np.arange(m)
        poly_sum = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        add = poly_to_idx[poly_sum[idx_to_poly][:, idx_to_poly]]

        i = np.arange(q)
        mul = np.where(
            (i[:, None] == 0) | (i[None, :] == 0),
            0,
            1 + ((i[:, None] - 1) + (i[None, :] - 1)) % (q - 1),
        )
        neg = np.argmax(add == 0, axis=1)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = 1 + (-(i[1:] - 1)) % (q - 1)
        sub = add[:, neg]

        for name, table in [
            ("add_table", add),
            ("sub_table", sub),
            ("mul_table", mul.astype(np.int64)),
            ("neg_table", neg.astype(np.int64)),
            ("inv_table", inv),
            ("idx_to_poly", idx_to_poly),
            ("poly_to_idx", poly_to_idx),
        ]:
            table.setflags(write=False)
            object.__setattr__(self, name, table)
        object.__setattr__(self, "generator", 2 if q > 2 else 1)
        object.__setattr__(self, "generator_poly", gen_poly)

    # ------------------------------------------------------------------
    # identity
    # ------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Field):
            return NotImplemented
        return (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        return f"Field(p={self.p}, m={self.m}, modulus={list(self.modulus)})"

    def descriptor(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    # ------------------------------------------------------------------
    # element helpers
    # ------------------------------------------------------------------
    zero = 0
    one = 1

    def __call__(self, value: int) -> "FieldElement":
        """Element with the given canonical index."""
        return FieldElement(self, int(value))

    def from_int(self, v):
        """Canonical index (or array of them) of a polynomial integer."""
        return self.poly_to_idx[np.asarray(v) % self.q] if np.ndim(v) else int(self.poly_to_idx[int(v) % self.q])

    def to_int(self, idx):
        return self.idx_to_poly[np.asarray(idx)] if np.ndim(idx) else int(self.idx_to_poly[int(idx)])

    def elements(self) -> range:
        return range(self.q)

    def prime_subfield(self) -> list[int]:
        return [int(self.poly_to_idx[k]) for k in range(self.p)]

    def power(self, a, e: int):
        """``a ** e`` elementwise with ``0 ** 0 == 1``."""
        a = np.asarray(a)
        if e == 0:
            out = np.ones_like(a)
        else:
            out = np.where(a == 0, 0, 1 + ((a - 1) * e) % (self.q - 1))
        return out if out.ndim else int(out)

    def element_name(self, idx: int) -> str:
        if idx == 0:
            return "0"
        if idx == 1:
            return "1"
        if self.m == 1:
            return str(self.to_int(idx))
        k = idx - 1
        return "a" if k == 1 else f"a^{k}"

    # ------------------------------------------------------------------
    # vectorised arithmetic on index arrays
    # ------------------------------------------------------------------
    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.sub_table[a, b]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("zero has no inverse")
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul_table[a, self.inv(b)]

    def sum(self, a, axis: int = -1):
        a = np.moveaxis(np.asarray(a), axis, -1)
        acc = np.zeros(a.shape[:-1], dtype=np.int64)
        for k in range(a.shape[-1]):
            acc = self.add_table[acc, a[..., k]]
        return acc

    def dot(self, u, v) -> int:
        return int(self.sum(self.mul_table[np.asarray(u), np.asarray(v)]))

    # ------------------------------------------------------------------
    # matrices
    # ------------------------------------------------------------------
    def check_matrix(self, A) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        if A.ndim != 2:
            raise DimensionError(f"expected a 2-d matrix, got shape {A.shape}")
        if A.size and (A.min() < 0 or A.max() >= self.q):
            raise FieldError(f"matrix entries must be canonical indices in [0, {self.q})")
        return A

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        vec = B.ndim == 1
        if vec:
            B = B[:, None]
        squeeze_left = A.ndim == 1
        if squeeze_left:
            A = A[None, :]
        if A.shape[1] != B.shape[0]:
            raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            out = self.add_table[out, self.mul_table[A[:, k, None], B[None, k, :]]]
        if vec:
            out = out[:, 0]
        if squeeze_left:
            out = out[0]
        return out

    def transpose(self, A) -> np.ndarray:
        return np.asarray(A).T.copy()

    def kron(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        out = self.mul_table[A[:, None, :, None], B[None, :, None, :]]
        return out.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])

    def rref(self, A, col_order: Sequence[int] | None = None) -> tuple[np.ndarray, list[int]]:
        """Reduced row echelon form; pivots are chosen scanning ``col_order``."""
        R = np.array(A, dtype=np.int64, copy=True)
        if R.ndim != 2:
            raise DimensionError("rref expects a matrix")
        rows, cols = R.shape
        order = range(cols) if col_order is None else col_order
        pivots: list[int] = []
        r = 0
        for c in order:
            if r == rows:
                break
            nz = np.nonzero(R[r:, c])[0]
            if nz.size == 0:
                continue
            piv = r + nz[0]
            if piv != r:
                R[[r, piv]] = R[[piv, r]]
            R[r] = self.mul_table[self.inv_table[R[r, c]], R[r]]
            factors = R[:, c].copy()
            factors[r] = 0
            mask = factors != 0
            if mask.any():
                R[mask] = self.sub_table[R[mask], self.mul_table[factors[mask, None], R[r][None, :]]]
            pivots.append(c)
            r += 1
        return R, pivots

    def rank(self, A) -> int:
        A = np.asarray(A)
        if A.size == 0:
            return 0
        return len(self.rref(A)[1])

    def solve(self, A, b) -> np.ndarray | None:
        """One solution of ``A x = b`` or ``None`` when inconsistent."""
        A = np.asarray(A, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if A.shape[0] != b.shape[0]:
            raise DimensionError(f"A has {A.shape[0]} rows but b has length {b.shape[0]}")
        aug = np.concatenate([A, b[:, None]], axis=1)
        R, pivots = self.rref(aug)
        n = A.shape[1]
        if n in pivots:
            return None
        x = np.zeros(n, dtype=np.int64)
        for r, c in enumerate(pivots):
            x[c] = R[r, n]
        return x

    def in_span(self, v, rows) -> bool:
        rows = np.asarray(rows, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if rows.size == 0:
            return not v.any()
        if rows.shape[1] != v.shape[0]:
            raise DimensionError("vector length does not match the row length")
        return self.rank(np.vstack([rows, v])) == self.rank(rows)

    def inverse(self, A) -> np.ndarray:
        A = self.check_matrix(A)
        n = A.shape[0]
        if A.shape[1] != n:
            raise DimensionError("only square matrices have inverses")
        R, pivots = self.rref(np.concatenate([A, self.identity(n)], axis=1))
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return R[:, n:]

    def span_table(self, rows) -> np.ndarray:
        """Every combination of ``rows`` (``q ** len(rows)`` vectors), zero first."""
        rows = np.asarray(rows, dtype=np.int64)
        n = rows.shape[1] if rows.ndim == 2 else 0
        span = np.zeros((1, n), dtype=np.int64)
        scalars = np.arange(self.q)[:, None]
        for r in rows:
            scaled = self.mul_table[scalars, r[None, :]]
            span = self.add_table[span[None, :, :], scaled[:, None, :]].reshape(-1, n)
        return span

    def min_coset_weight(self, offset, rows, *, skip_zero: bool = False,
                         block: int = 2**16) -> int:
        """Least weight of ``offset + span(rows)``.

        With ``skip_zero`` the trivial combination is left out, which turns
        a zero offset into a minimum-distance search.  At most ``block``
        vectors are held in memory at once.
        """
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, np.size(offset))
        offset = np.asarray(offset, dtype=np.int64)
        k = rows.shape[0]
        head = 0
        while head < k and self.q ** (head + 1) <= block:
            head += 1
        base = self.add_table[self.span_table(rows[:head]), offset[None, :]]
        tail = rows[head:]
        best = offset.size + 1
        for coeffs in itertools.product(range(self.q), repeat=k - head):
            if tail.shape[0]:
                shift = self.matmul(np.array(coeffs, dtype=np.int64), tail)
                words = self.add_table[base, shift[None, :]]
            else:
                words = base
            w = np.count_nonzero(words, axis=1)
            if skip_zero and not any(coeffs):
                w = w[1:]
            if w.size:
                best = min(best, int(w.min()))
        return best

    def weight(self, v, axis: int = -1):
        return np.count_nonzero(np.asarray(v), axis=axis)

    def format_matrix(self, A) -> list[list[str]]:
        return [[self.element_name(int(x)) for x in row] for row in np.asarray(A)]


def field_new(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> Field:
    """Build GF(p^m); ``modulus`` lists coefficients from degree 0 upward."""
    return Field(p, m, None if modulus is None else tuple(modulus))


@dataclass(frozen=True)
class FieldElement:
    """A single element, handy for scalar work and doctest-style examples."""

    field: Field
    value: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.field.q:
            raise FieldError(f"index {self.value} outside [0, {self.field.q})")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("operands belong to different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, int(self.field.add_table[self.value, self._coerce(other)]))

    def __sub__(self, other):
        return FieldElement(self.field, int(self.field.sub_table[self.value, self._coerce(other)]))

    def __mul__(self, other):
        return FieldElement(self.field, int(self.field.mul_table[self.value, self._coerce(other)]))

    def __truediv__(self, other):
        b = self._coerce(other)
        if b == 0:
            raise ZeroDivisionError("division by zero in " + repr(self.field))
        return FieldElement(self.field, int(self.field.mul_table[self.value, self.field.inv_table[b]]))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg_table[self.value]))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(self.field, self.field.power(self.value, e))

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(self.field, int(self.field.inv_table[self.value]))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.field.element_name(self.value)} in GF({self.field.q})"


_OPS = {"add", "sub", "mul", "div", "inv", "neg"}


def arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Apply ``op`` to one or two elements of the same field."""
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if a.field != b.field:
        raise FieldError("operands belong to different fields")
    return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)


def subfield_generated(elems: Iterable[int], field: Field) -> int:
    """Size of the smallest subfield of ``field`` containing ``elems``.

    The prime subfield together with the given elements is closed under
    addition and multiplication until it stops growing.
    """
    current = set(field.prime_subfield())
    for e in elems:
        e = int(e)
        if not 0 <= e < field.q:
            raise FieldError(f"{e} is not an element of {field!r}")
        current.add(e)
    while True:
        arr = np.fromiter(current, dtype=np.int64)
        grown = set(field.add_table[arr[:, None], arr[None, :]].ravel().tolist())
        grown |= set(field.mul_table[arr[:, None], arr[None, :]].ravel().tolist())
        if grown <= current:
            return len(current)
        current |= grown
