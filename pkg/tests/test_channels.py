import math

import mpmath
import numpy as np
import pytest

from polarcart.channels import (
    ERASURE,
    MAX_SOF_OUTPUTS,
    SymmetryWitness,
    bhattacharyya,
    bhattacharyya_distance,
    check_witness,
    custom,
    is_sof,
    qec,
    qsc,
    split_exact,
    symmetric_rate,
)
from polarcart.exceptions import DimensionError, GuardError
from polarcart.gf import field_new


def test_qsc_extremes(F2):
    assert symmetric_rate(qsc(F2, 0)) == pytest.approx(1.0, abs=1e-15)
    assert bhattacharyya(qsc(F2, 0)) == 0.0
    assert symmetric_rate(qsc(F2, 1)) == pytest.approx(0.0, abs=1e-15)


def test_qec_closed_forms(F4):
    W = qec(F4, 0.5)
    assert W.outputs[-1] == ERASURE
    assert symmetric_rate(W) == pytest.approx(0.5, abs=1e-15)
    for p in (0.0, 0.3, 0.9):
        assert bhattacharyya(qec(F4, p)) == pytest.approx(1 - p, abs=1e-15)
        assert symmetric_rate(qec(F4, p)) == pytest.approx(p, abs=1e-15)


def test_qsc_rate_against_high_precision(F2):
    W = qsc(F2, 0.5)
    mpmath.mp.dps = 40
    rate = mpmath.mpf(0)
    P = [[mpmath.mpf(3) / 4, mpmath.mpf(1) / 4], [mpmath.mpf(1) / 4, mpmath.mpf(3) / 4]]
    for x in range(2):
        for y in range(2):
            py = (P[0][y] + P[1][y]) / 2
            rate += P[x][y] * mpmath.log(P[x][y] / py, 2) / 2
    got = symmetric_rate(W)
    assert 0 < got < 1
    assert abs(got - float(rate)) < 1e-14


def test_probability_range(F2):
    with pytest.raises(ValueError):
        qsc(F2, 1.5)
    with pytest.raises(ValueError):
        qec(F2, -0.1)


def test_channel_validation(F2):
    with pytest.raises(ValueError):
        custom(F2, [[0.5, 0.6], [0.5, 0.5]])
    with pytest.raises(ValueError):
        custom(F2, [[1.5, -0.5], [0.5, 0.5]])
    with pytest.raises(DimensionError):
        custom(F2, [[1.0], [1.0], [1.0]])


def test_distance_needs_distinct_inputs(F4):
    with pytest.raises(ValueError):
        bhattacharyya_distance(qsc(F4, 0.2), 1, 1)
    assert bhattacharyya_distance(qec(F4, 0.2), 0, 1) == pytest.approx(0.8)


@pytest.mark.parametrize("pm", [(2, 1), (3, 1), (2, 2), (5, 1)])
@pytest.mark.parametrize("p", [0.0, 0.25, 0.7])
def test_standard_channels_are_sof(pm, p):
    F = field_new(*pm)
    for W in (qsc(F, p), qec(F, p)):
        wit = is_sof(W)
        assert isinstance(wit, SymmetryWitness)
        assert check_witness(W, wit)


def test_z_channel_not_sof(F2):
    assert is_sof(custom(F2, [[1.0, 0.0], [0.5, 0.5]])) is None


def test_uniform_channel_identity_witness(F4):
    W = custom(F4, np.full((4, 3), 1 / 3))
    wit = is_sof(W)
    assert wit is not None
    assert all(s == (0, 1, 2) for s in wit.sigma.values())


def test_sof_guard(F2):
    W = custom(F2, np.full((2, MAX_SOF_OUTPUTS + 1), 1 / (MAX_SOF_OUTPUTS + 1)))
    with pytest.raises(GuardError):
        is_sof(W)


def test_split_erasure(F2, GA):
    W = qec(F2, 0.5)
    rates = [symmetric_rate(split_exact(W, GA, i)) for i in range(2)]
    assert rates == pytest.approx([0.25, 0.75], abs=1e-15)


@pytest.mark.parametrize("ch", ["qsc", "qec"])
def test_split_chain_rule(F4, ch):
    W = qsc(F4, 0.3) if ch == "qsc" else qec(F4, 0.6)
    G = np.array([[1, 1, 1], [0, 1, 2], [0, 1, 3]])
    total = sum(symmetric_rate(split_exact(W, G, i)) for i in range(3))
    assert total == pytest.approx(3 * symmetric_rate(W), abs=1e-12)


def test_split_column_scaling_invariance(F4):
    W = qsc(F4, 0.2)
    G = np.array([[1, 1], [1, 3]])
    Gs = G.copy()
    Gs[:, 0] = F4.mul(Gs[:, 0], 2)
    for i in range(2):
        a, b = split_exact(W, G, i), split_exact(W, Gs, i)
        assert symmetric_rate(a) == pytest.approx(symmetric_rate(b), abs=1e-12)
        assert bhattacharyya(a) == pytest.approx(bhattacharyya(b), abs=1e-12)


def test_split_output_labels(F2, GA):
    W = qec(F2, 0.5)
    ch = split_exact(W, GA, 1)
    assert ch.n_outputs == 3 * 3 * 2
    assert ch.outputs[0] == (0, 0, 0)


def test_split_guard(F4):
    with pytest.raises(GuardError):
        split_exact(qec(F4, 0.5), np.eye(8, dtype=np.int64), 0)


def test_rate_is_base_q(F4):
    W = qsc(F4, 0)
    assert symmetric_rate(W) == pytest.approx(1.0)
    assert math.isclose(bhattacharyya(W), 0.0)
