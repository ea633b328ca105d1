import numpy as np
import pytest

from polarcart.evalcode import (
    BRUTE_FORCE_LIMIT,
    CartesianGrid,
    EvalCode,
    dimension_formula,
    distance_witness,
    dual_monomials,
    evaluate,
    is_dual_containing,
    is_lcd,
    is_self_orthogonal,
    min_distance_bruteforce,
    min_distance_formula,
    residue_vector,
)
from polarcart.exceptions import BoxError, FieldError, GuardError, NotDecreasingError
from polarcart.gf import field_new
from polarcart.monomials import MonomialSet, minimal_generating_set

from conftest import F4_SUBSETS, G2_TEXT, f4_matrix

F7_GENS = [(2, 6), (4, 4), (5, 2)]


@pytest.fixture(scope="module")
def f7_code(F7):
    grid = CartesianGrid(F7, [list(range(7))] * 2)
    return EvalCode.from_generators(grid, F7_GENS)


def test_f7_parameters(f7_code):
    assert (f7_code.n, f7_code.k) == (49, 34)
    assert f7_code.field.rank(f7_code.generator) == 34
    assert dimension_formula(f7_code.minimal_generators) == 34
    assert f7_code.min_distance() == 5


def test_f7_witnesses(f7_code):
    grid = f7_code.grid
    assert np.count_nonzero(distance_witness((2, 6), grid)) == 5
    assert np.count_nonzero(distance_witness((4, 4), grid)) == 9
    for a in F7_GENS:
        w = distance_witness(a, grid)
        assert f7_code.field.in_span(w, f7_code.generator)


def test_f7_dual(f7_code):
    F = f7_code.field
    D = f7_code.dual_matrix()
    assert D.shape == (15, 49)
    assert not F.matmul(f7_code.generator, D.T).any()
    assert F.rank(D) == 15


def test_grid_rows_match_kernel_product(F4):
    grid = CartesianGrid(F4, F4_SUBSETS)
    G2 = f4_matrix(G2_TEXT)
    assert np.array_equal(evaluate((2, 3), grid), G2[0])
    assert np.array_equal(evaluate((1, 0), grid), G2[10])
    S = MonomialSet.of(grid.box, grid.box.monomials())
    code = EvalCode(grid, S)
    assert np.array_equal(code.generator, G2)


def test_residue_of_univariate(F7):
    # on S = {0, 1}, the residue scalars are 1/(0-1) and 1/(1-0)
    grid = CartesianGrid(F7, [[0, 1]])
    r = residue_vector((0,), grid)
    assert [F7.to_int(v) for v in r] == [6, 1]


def test_reed_muller_binary(F2):
    grid = CartesianGrid(F2, [[0, 1], [0, 1]])
    code = EvalCode.from_generators(grid, [(1, 0), (0, 1)])
    assert code.k == 3
    assert code.min_distance() == min_distance_bruteforce(code) == 2


def test_repetition_code(F4):
    grid = CartesianGrid(F4, [[0, 1, 2, 3]] * 2)
    code = EvalCode.from_generators(grid, [(0, 0)])
    assert code.min_distance() == min_distance_bruteforce(code) == 16


def test_grid_validation(F4):
    with pytest.raises(ValueError):
        CartesianGrid(F4, [[0, 0]])
    with pytest.raises(FieldError):
        CartesianGrid(F4, [[0, 4]])
    grid = CartesianGrid(F4, [[0, 1]])
    with pytest.raises(BoxError):
        EvalCode.from_generators(grid, [(2,)])


def test_dual_needs_decreasing(F4):
    grid = CartesianGrid(F4, [[0, 1, 2]])
    code = EvalCode(grid, MonomialSet.of(grid.box, [(1,)]))
    with pytest.raises(NotDecreasingError):
        code.dual_basis()


def test_bruteforce_guard(f7_code):
    with pytest.raises(GuardError):
        min_distance_bruteforce(f7_code)
    assert BRUTE_FORCE_LIMIT == 2**24


def test_min_distance_formula_errors():
    with pytest.raises(ValueError):
        min_distance_formula([], (3,))
    with pytest.raises(BoxError):
        min_distance_formula([(3,)], (3,))


FIELD_CHOICES = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)]


def _random_code(rng, max_n=6):
    p, m = FIELD_CHOICES[int(rng.integers(len(FIELD_CHOICES)))]
    F = field_new(p, m)
    mm = int(rng.integers(1, 4))
    subsets = []
    for _ in range(mm):
        size = int(rng.integers(1, min(F.q, max_n) + 1))
        subsets.append([int(v) for v in rng.permutation(F.q)[:size]])
    grid = CartesianGrid(F, subsets)
    gens = [tuple(int(rng.integers(0, b)) for b in grid.bounds) for _ in range(int(rng.integers(1, 4)))]
    return EvalCode.from_generators(grid, gens)


def test_random_duals_orthogonal():
    rng = np.random.default_rng(20240611)
    for _ in range(120):
        code = _random_code(rng)
        F = code.field
        D = code.dual_matrix()
        assert D.shape[0] == code.n - code.k
        assert not F.matmul(code.generator, D.T).any()
        if D.shape[0]:
            assert F.rank(D) == D.shape[0]
        assert len(dual_monomials(code.monomials)) == code.n - code.k
        assert dimension_formula(code.minimal_generators) == code.k == F.rank(code.generator)


def test_random_distance_formula():
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 100:
        code = _random_code(rng, max_n=5)
        if code.field.q ** code.k > 2**16:
            continue
        assert code.min_distance() == min_distance_bruteforce(code)
        checked += 1


def test_lcd_and_self_orthogonal_definitions(F2, F4):
    grid = CartesianGrid(F2, [[0, 1]] * 3)
    rm = EvalCode.from_generators(grid, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    # RM(1, 3) is self-dual
    assert is_self_orthogonal(rm) and is_dual_containing(rm) and not is_lcd(rm)
    grid = CartesianGrid(F4, [[0, 1, 2]])
    full = EvalCode.from_generators(grid, [(2,)])
    assert is_lcd(full) and is_dual_containing(full) and not is_self_orthogonal(full)


def test_minimal_generators_of_code(f7_code):
    assert set(minimal_generating_set(f7_code.monomials)) == set(F7_GENS)
