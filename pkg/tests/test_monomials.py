import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polarcart.exceptions import BoxError, GuardError, NotDecreasingError
from polarcart.monomials import (
    MonomialBox,
    MonomialSet,
    PolarOrder,
    complement_dual_generators,
    divides,
    divisibility_closure,
    format_monomial,
    gcd_generating_sets,
    inverse_lex_sort,
    is_decreasing,
    is_polar_decreasing,
    minimal_generating_set,
    polar_closure,
    polar_leq,
    polar_minimal_generators,
    polar_order,
    reflect,
)

F7_BOX = MonomialBox((7, 7))
F7_GENS = [(2, 6), (4, 4), (5, 2)]
F5_BOX = MonomialBox.from_subsets([[0, 1, 2], [0, 1, 2, 3, 4], [0, 1, 2]])


def test_inverse_lex_order():
    order = inverse_lex_sort((3, 4))
    assert order[:4] == [(2, 3), (1, 3), (0, 3), (2, 2)]
    assert order[-1] == (0, 0) and len(order) == 12
    assert inverse_lex_sort((2, 2)) == [(1, 1), (0, 1), (1, 0), (0, 0)]


def test_box_validation():
    with pytest.raises(BoxError):
        F7_BOX.check((7, 0))
    with pytest.raises(ValueError):
        MonomialBox((0, 3))
    assert F5_BOX.partition == ((0, 2), (1,))
    assert F7_BOX.index((1, 2)) == 9


def test_format_monomial():
    assert format_monomial((0, 2, 1)) == "x2^2*x3"
    assert format_monomial((0, 0)) == "1"


def test_f7_closure_and_generators():
    S = divisibility_closure(F7_GENS, F7_BOX)
    assert len(S) == 34
    assert is_decreasing(S)
    assert minimal_generating_set(S) == sorted(F7_GENS, key=lambda a: a[::-1], reverse=True)


def test_not_decreasing():
    S = MonomialSet.of(F7_BOX, [(1, 0)])
    assert not is_decreasing(S)
    with pytest.raises(NotDecreasingError):
        minimal_generating_set(S)


def test_f7_complement_generators():
    got = set(complement_dual_generators(F7_GENS, F7_BOX))
    assert got == {(0, 6), (1, 3), (0, 1), (3, 1)}


def _reflected_complement(S):
    return {reflect(a, S.box) for a in S.complement().members}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=3), st.integers(0, 2**32 - 1))
def test_complement_generators_bruteforce(bounds, seed):
    rng = np.random.default_rng(seed)
    box = MonomialBox(tuple(bounds))
    gens = [tuple(int(rng.integers(0, b)) for b in bounds) for _ in range(int(rng.integers(1, 4)))]
    S = divisibility_closure(gens, box)
    target = _reflected_complement(S)
    out = complement_dual_generators(minimal_generating_set(S), box)
    assert set(divisibility_closure(out, box).members) == target


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=3), st.integers(0, 2**32 - 1))
def test_gcd_generates_intersection(bounds, seed):
    rng = np.random.default_rng(seed)
    box = MonomialBox(tuple(bounds))
    pick = lambda: [tuple(int(rng.integers(0, b)) for b in bounds) for _ in range(int(rng.integers(1, 4)))]
    S1, S2 = divisibility_closure(pick(), box), divisibility_closure(pick(), box)
    B = gcd_generating_sets(minimal_generating_set(S1), minimal_generating_set(S2), box)
    inter = S1.members & S2.members
    assert set(divisibility_closure(B, box).members) == inter
    assert B == minimal_generating_set(MonomialSet(box, inter))


def test_gcd_mismatched_lengths():
    with pytest.raises(BoxError):
        gcd_generating_sets([(1, 1)], [(1, 1, 1)])


def test_polar_order_examples():
    box = MonomialBox.from_subsets([[0, 1, 2], [0, 1, 2], [0, 1, 2, 3, 4]])
    assert polar_leq((0, 0, 1), (0, 2, 1), box)
    assert polar_leq((1, 0, 0), (0, 1, 0), box)
    assert polar_leq((1, 0, 1), (0, 1, 1), box)
    assert not polar_leq((0, 1, 0), (1, 0, 0), box)


def test_polar_decreasing_example():
    S = MonomialSet.of(F5_BOX, [(0, 2, 1), (0, 1, 1), (0, 0, 1), (0, 2, 0), (0, 1, 0), (1, 0, 0), (0, 0, 0)])
    assert is_polar_decreasing(S)
    assert polar_minimal_generators(S) == [(0, 2, 1)]
    assert set(minimal_generating_set(S)) == {(0, 2, 1), (1, 0, 0)}
    assert polar_closure([(0, 2, 1)], F5_BOX) == S


def test_order_without_equal_sets_is_divisibility():
    box = MonomialBox.from_subsets([[0, 1, 2], [0, 1, 2, 3]])
    R = polar_order(box).relation
    mons = list(itertools.product(range(3), range(4)))
    D = np.array([[divides(a, b) for b in mons] for a in mons])
    assert np.array_equal(R, D)


@pytest.mark.parametrize("subsets", [
    [[0, 1, 2], [0, 1, 2]],
    [[0, 1], [0, 1], [0, 1]],
    [[0, 1, 2], [0, 1, 2, 3], [0, 1, 2]],
])
def test_polar_order_is_partial_order(subsets):
    box = MonomialBox.from_subsets(subsets)
    R = polar_order(box).relation
    mons = list(itertools.product(*(range(n) for n in box.bounds)))
    D = np.array([[divides(a, b) for b in mons] for a in mons])
    assert (R >= D).all()  # refines divisibility
    assert R.diagonal().all()
    assert not (R & R.T & ~np.eye(len(mons), dtype=bool)).any()  # antisymmetric
    assert np.array_equal(R, R | ((R.astype(int) @ R.astype(int)) > 0))  # transitive


def test_order_guard():
    with pytest.raises(GuardError):
        PolarOrder(MonomialBox((50, 50)))
