"""scikit-learn style wrappers around the code and polar constructions.

``transform`` encodes messages row by row; ``predict`` of the polar
constructor recovers messages from received words with ``-1`` erasures.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .channels import qec, qsc
from .evalcode import CartesianGrid, EvalCode
from .exceptions import ConfigError
from .kernels import KernelSequence
from .monomials import divisibility_closure
from .polarize import information_set, sc_decode_qec, synthetic_stats, z_inequality_holds
from .validation import (
    check_field,
    check_is_fitted,
    check_probability,
    check_subsets,
    check_symbols,
    check_width,
)


class DecreasingMonomialCartesianCode(TransformerMixin, BaseEstimator):
    """Evaluation code of the monomials dividing ``generators`` on a grid.

    ``fit`` ignores its data and builds the code; ``transform`` encodes
    messages of length ``k`` into codewords of length ``n``.
    """

    def __init__(self, field=2, subsets=((0, 1),), generators=((0,),)):
        self.field = field
        self.subsets = subsets
        self.generators = generators

    def fit(self, X=None, y=None):
        F = check_field(self.field)
        grid = CartesianGrid(F, check_subsets(F, [list(s) for s in self.subsets]))
        gens = [tuple(int(v) for v in g) for g in self.generators]
        self.field_ = F
        self.code_ = EvalCode(grid, divisibility_closure(gens, grid.box))
        self.generator_ = self.code_.generator
        self.n_ = self.code_.n
        self.k_ = self.code_.k
        self.min_distance_ = self.code_.min_distance()
        return self

    def transform(self, X):
        check_is_fitted(self, "code_")
        X = check_width(check_symbols(self.field_, X), self.k_, "message")
        return self.code_.encode(X)


class PolarCodeConstructor(TransformerMixin, BaseEstimator):
    """Information set of a multikernel polar code for a given channel.

    ``channel`` is ``"qec"`` (``p`` is the delivery probability) or
    ``"qsc"``.  ``fit`` computes per-index statistics and picks the ``K``
    most reliable rows; ``transform`` encodes, ``predict`` decodes erasures.
    """

    def __init__(self, field=4, subsets=((0, 1, 2, 3),), channel="qec", p=0.5, K=1,
                 method="auto", trials=10_000, random_state=0):
        self.field = field
        self.subsets = subsets
        self.channel = channel
        self.p = p
        self.K = K
        self.method = method
        self.trials = trials
        self.random_state = random_state

    def _channel(self, F):
        p = check_probability(self.p, "p")
        if self.channel == "qec":
            return qec(F, p)
        if self.channel == "qsc":
            return qsc(F, p)
        raise ConfigError(f"unknown channel {self.channel!r}")

    def fit(self, X=None, y=None):
        F = check_field(self.field)
        seq = KernelSequence.from_subsets(F, check_subsets(F, [list(s) for s in self.subsets]))
        W = self._channel(F)
        seed = 0 if self.random_state is None else int(self.random_state)
        stats = synthetic_stats(seq, W, self.method, self.trials, seed)
        self.field_ = F
        self.sequence_ = seq
        self.stats_ = stats
        self.info_set_ = information_set(stats, self.K, seq.box)
        self.G_ = seq.matrix
        self.n_ = seq.n
        self.z_certified_ = z_inequality_holds(stats, self.info_set_)
        return self

    def transform(self, X):
        check_is_fitted(self, "info_set_")
        F = self.field_
        X = check_width(check_symbols(F, X), self.info_set_.K, "message")
        U = np.zeros((X.shape[0], self.n_), dtype=np.int64)
        U[:, list(self.info_set_.indices)] = X
        return F.matmul(U, self.G_)

    def predict(self, X):
        """Decoded messages; rows that cannot be recovered are filled with ``-1``."""
        check_is_fitted(self, "info_set_")
        X = check_width(check_symbols(self.field_, X, allow_erasure=True), self.n_, "received word")
        A = self.info_set_.indices
        out = np.full((X.shape[0], len(A)), -1, dtype=np.int64)
        for t, row in enumerate(X):
            got = sc_decode_qec(self.field_, row, A, self.G_)
            if got is not None:
                out[t] = got
        return out

    def score(self, X, y):
        """Fraction of received words decoded to exactly the given message."""
        pred = self.predict(X)
        y = np.asarray(y, dtype=np.int64).reshape(pred.shape)
        return float(np.mean(np.all(pred == y, axis=1)))
