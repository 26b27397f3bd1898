import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riglab.constructions import zero_outside
from riglab.hadamard import sylvester
from riglab.instances import rowspace_projection, theta_perturbation
from riglab.spectral import orthonormal_factor, referee_chain_check


def _check_factor(T, D, E):
    assert np.allclose(D.conj().T @ D, np.eye(D.shape[1]), atol=1e-10)
    assert np.allclose(D @ E, T.conj().T, atol=1e-10)


def test_orthonormal_factor_orthogonal_input():
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((5, 5)))
    D, E = orthonormal_factor(Q)
    _check_factor(Q, D, E)
    assert np.allclose(np.abs(E), np.eye(5), atol=1e-10)  # E diagonal up to signs


def test_orthonormal_factor_rank_one():
    x = np.array([2.0, -1.0, 3.0])
    y = np.array([1.0, 2.0, 2.0])
    D, E = orthonormal_factor(np.outer(x, y))
    assert D.shape == (3, 1)
    assert np.allclose(D[:, 0], y / 3)
    assert np.allclose(E[0], 3 * x)


def test_orthonormal_factor_zero_outside_h8():
    M, _ = zero_outside(sylvester(3), [0, 1, 2, 3], range(8))
    T = M.to_real()
    D, E = orthonormal_factor(T)
    assert D.shape == (8, 4)
    _check_factor(T, D, E)
    with pytest.raises(ValueError):
        orthonormal_factor(np.zeros((3, 3)))


def test_referee_identity_case():
    H = sylvester(3)
    rep = referee_chain_check(H, H.to_real())
    assert rep.r == 8
    assert rep.lhs_sum_inner == pytest.approx(8)
    assert rep.sqrt_rn == pytest.approx(8)
    assert rep.sum_squares == pytest.approx(8)
    assert rep.holds and not rep.quantum_tighter
    assert len(rep.links) == 12


def test_referee_zero_outside_h4_demo():
    H = sylvester(2)
    M, _ = zero_outside(H, [0, 1], range(4))
    rep = referee_chain_check(H, M)
    assert rep.r == 2 and rep.zero_rows == [2, 3]
    assert rep.sum_squares == pytest.approx(2)         # tight against r = 2
    assert rep.lhs_sum_inner == pytest.approx(2)
    assert rep.sqrt_rn == pytest.approx(np.sqrt(8))  # linear sum leaves slack
    assert rep.cs_implied == pytest.approx(np.sqrt(8))
    assert rep.holds


def test_referee_shape_mismatch():
    with pytest.raises(ValueError):
        referee_chain_check(sylvester(2), np.ones((3, 3)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([1, 2, 4]), st.sampled_from([3, 4]))
def test_referee_chain_on_projections(seed, r, k):
    rng = np.random.default_rng(seed)
    H = sylvester(k)
    rep = referee_chain_check(H, rowspace_projection(H, r, rng))
    assert rep.r == r
    assert rep.holds, [l.to_json() for l in rep.links if not l.holds]
    assert rep.sum_squares <= r + 1e-8


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([0.5, 1.0, 2.0]))
def test_referee_chain_on_theta_perturbations(seed, theta):
    rng = np.random.default_rng(seed)
    H = sylvester(3)
    pert = theta_perturbation(H, theta, rng)
    assert referee_chain_check(H, pert.apply_real(H)).holds
