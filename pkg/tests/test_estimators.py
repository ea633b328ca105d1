import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from polarcart.estimators import DecreasingMonomialCartesianCode, PolarCodeConstructor
from polarcart.exceptions import ConfigError, DimensionError, FieldError


def test_code_transformer():
    est = DecreasingMonomialCartesianCode(field={"p": 7}, subsets=[list(range(7))] * 2,
                                          generators=[(2, 6), (4, 4), (5, 2)])
    assert est.get_params()["field"] == {"p": 7}
    est.fit()
    assert (est.n_, est.k_, est.min_distance_) == (49, 34, 5)
    X = np.random.default_rng(0).integers(0, 7, (5, 34))
    C = est.transform(X)
    assert C.shape == (5, 49)
    assert np.array_equal(C, est.fit_transform(X))
    with pytest.raises(DimensionError):
        est.transform(np.zeros((1, 3), dtype=int))
    with pytest.raises(FieldError):
        est.transform(np.full((1, 34), 7))


def test_unfitted():
    with pytest.raises(NotFittedError):
        DecreasingMonomialCartesianCode().transform([[0]])
    with pytest.raises(NotFittedError):
        PolarCodeConstructor().predict([[0]])


def test_polar_constructor_roundtrip():
    est = PolarCodeConstructor(field=4, subsets=[[0, 1, 2], [0, 1, 2, 3]], p=0.5, K=6)
    clone(est).fit()
    est.fit()
    assert est.info_set_.K == 6 and est.z_certified_
    assert est.stats_.method == "exact-erasure"
    rng = np.random.default_rng(1)
    msgs = rng.integers(0, 4, (50, 6))
    X = est.transform(msgs)
    assert est.score(X, msgs) == 1.0
    erased = X.copy()
    erased[rng.random(X.shape) < 0.3] = -1
    pred = est.predict(erased)
    ok = (pred != -1).all(axis=1)
    assert np.array_equal(pred[ok], msgs[ok])


def test_polar_constructor_qsc_mc():
    est = PolarCodeConstructor(field=2, subsets=[[1, 0]] * 3, channel="qsc", p=0.3, K=4,
                               method="monte-carlo", trials=2000, random_state=4)
    est.fit()
    assert est.stats_.method == "monte-carlo" and est.info_set_.K == 4
    assert est.set_params(K=2).fit().info_set_.K == 2


def test_bad_channel():
    with pytest.raises(ConfigError):
        PolarCodeConstructor(channel="awgn").fit()
    with pytest.raises(ConfigError):
        PolarCodeConstructor(p=2.0).fit()
