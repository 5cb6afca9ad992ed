import numpy as np
import pytest

from algebra.errors import BoundExceeded
from algebra.linalg import MAX_MODULUS, modular_smith, smith_form


@pytest.mark.parametrize("rows, cols, modulus", [(4, 6, 12), (7, 3, 8), (5, 5, 30), (6, 9, 2), (3, 3, 1)])
def test_transforms_diagonalize(rng, rows, cols, modulus):
    for _ in range(10):
        M = rng.integers(0, modulus, size=(rows, cols))
        smith = modular_smith(M, modulus, left=True, right=True)
        expected = np.zeros((rows, cols), dtype=np.int64)
        for i, d in enumerate(smith.diagonal):
            expected[i, i] = d
        assert np.array_equal(smith.left @ M @ smith.right % modulus, expected)
        assert np.array_equal(smith.left @ smith.left_inverse % modulus, np.eye(rows) % modulus)
        assert np.array_equal(smith.right @ smith.right_inverse % modulus, np.eye(cols) % modulus)
        assert all(modulus % d == 0 for d in smith.diagonal)
        assert all(b % a == 0 for a, b in zip(smith.diagonal, smith.diagonal[1:]))


@pytest.mark.parametrize("modulus", [4, 6, 12, 36])
def test_torsion_matches_integer_smith_form(rng, modulus):
    for _ in range(10):
        M = rng.integers(0, modulus, size=(5, 4))
        stacked = np.concatenate([M, modulus * np.eye(5, dtype=np.int64)], axis=1)
        over_z = tuple(abs(d) for d in smith_form(stacked).diagonal)
        assert modular_smith(M, modulus).torsion == over_z


def test_coprime_summands_merge():
    smith = modular_smith(np.array([[3, 0], [0, 2]]), 6)
    assert smith.diagonal == (1,)
    assert smith.torsion == (1, 6)


def test_kernel_scales_describe_the_kernel():
    M = np.array([[2, 4, 0], [0, 3, 3]])
    smith = modular_smith(M, 6, right=True)
    basis = smith.right * smith.kernel_scales[None, :] % 6
    assert not (M @ basis % 6).any()
    # every kernel vector is a combination of the basis columns
    kernel = [x for x in np.ndindex(6, 6, 6) if not (M @ np.array(x) % 6).any()]
    span = {tuple(basis @ np.array(y) % 6) for y in np.ndindex(6, 6, 6)}
    assert span == set(kernel)


def test_solve_finds_preimages(rng):
    M = rng.integers(0, 12, size=(6, 4))
    smith = modular_smith(M, 12, left=True, right=True)
    for _ in range(20):
        x = rng.integers(0, 12, size=4)
        rhs = M @ x % 12
        y = smith.solve(rhs)
        assert y is not None
        assert np.array_equal(M @ y % 12, rhs)


def test_solve_reports_inconsistent_systems():
    smith = modular_smith(np.array([[2], [0]]), 4, left=True, right=True)
    assert smith.solve([1, 0]) is None
    assert smith.solve([2, 1]) is None
    assert smith.solve([2, 0]).tolist() == [1]


def test_limits_raise_bound_exceeded():
    with pytest.raises(BoundExceeded):
        modular_smith(np.zeros((10, 10), dtype=np.int64), 6, max_entries=50)
    with pytest.raises(BoundExceeded):
        modular_smith(np.zeros((2, 2), dtype=np.int64), MAX_MODULUS)
