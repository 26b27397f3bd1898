import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from riglab.hadamard import (SignMatrix, exact_to_sign, is_generalized_hadamard, is_hadamard,
                             is_symmetric, read_sign_matrix, sylvester, write_sign_matrix)


def test_sylvester_examples():
    assert sylvester(0).data.tolist() == [[1]]
    assert sylvester(1).data.tolist() == [[1, 1], [1, -1]]
    assert sylvester(2).data.tolist() == [[1, 1, 1, 1], [1, -1, 1, -1],
                                          [1, 1, -1, -1], [1, -1, -1, 1]]


@pytest.mark.parametrize("k", range(7))
def test_sylvester_invariants(k):
    H = sylvester(k)
    n = 1 << k
    A = H.data.astype(np.int64)
    assert H.n == n and H.verified_hadamard
    assert np.array_equal(A @ A.T, n * np.eye(n, dtype=np.int64))
    assert np.array_equal(A, A.T)
    if k:
        assert np.trace(A) == 0


def test_sylvester_limits():
    with pytest.raises(ValueError):
        sylvester(-1)
    with pytest.raises(ValueError):
        sylvester(13)


def test_is_hadamard_examples():
    assert is_hadamard(sylvester(3))
    assert not is_hadamard(SignMatrix([[1, 1], [1, 1]]))
    assert not is_hadamard(sylvester(2).flip(1, 2))


@given(st.integers(0, 15))
def test_any_single_flip_breaks_h4(pos):
    assert not is_hadamard(sylvester(2).flip(*divmod(pos, 4)))


def test_generalized_hadamard_examples():
    assert is_generalized_hadamard(sylvester(2).to_real())
    assert not is_generalized_hadamard(np.eye(2))
    F = np.array([[1j ** (j * k) for k in range(4)] for j in range(4)])
    assert is_generalized_hadamard(F)
    assert is_generalized_hadamard(F.real, F.imag)
    # equal magnitudes but not orthogonal
    assert not is_generalized_hadamard(np.ones((3, 3)))


def test_is_symmetric_examples():
    for k in range(5):
        assert is_symmetric(sylvester(k))
    assert not is_symmetric(SignMatrix([[1, 1], [-1, 1]]))
    assert is_symmetric(SignMatrix([[1]]))


def test_sign_matrix_validation():
    with pytest.raises(ValueError):
        SignMatrix([[1, 0], [1, 1]])
    with pytest.raises(ValueError):
        SignMatrix([[1, 1, 1], [1, 1, 1]])
    with pytest.raises(ValueError):
        SignMatrix([[1, 1], [1, 1]], verified_hadamard=True)
    H = sylvester(2)
    with pytest.raises(ValueError):
        H.data[0, 0] = -1


def test_sign_matrix_file_roundtrip(tmp_path):
    p = tmp_path / "h.mat"
    write_sign_matrix(sylvester(3), p)
    assert read_sign_matrix(p) == sylvester(3)
    assert exact_to_sign(sylvester(2).to_exact()) == sylvester(2)
