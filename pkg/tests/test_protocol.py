import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riglab.constructions import Perturbation, zero_outside
from riglab.hadamard import sylvester
from riglab.instances import random_zero_outside, rowspace_projection, theta_perturbation
from riglab.protocol import (Povm, StateVector, ZeroRowError, encode_rows,
                             hadamard_povm_in_rowspace, regev_chain_check, rowspace_isometry,
                             success_probs, thm3_chain_check, verify_nayak)


# --- encoding -------------------------------------------------------------------

def test_encode_rows_examples():
    s = encode_rows(sylvester(1))
    assert np.allclose(s[0].amplitudes, np.array([1, 1]) / np.sqrt(2))
    assert np.allclose(s[1].amplitudes, np.array([1, -1]) / np.sqrt(2))
    M, _ = zero_outside(sylvester(3), [0, 2], [1, 4, 5])
    for i in (0, 2):
        live = encode_rows(M.to_real()[[i]])[0].amplitudes
        assert np.allclose(np.abs(live[[1, 4, 5]]), 1 / np.sqrt(3))
    with pytest.raises(ZeroRowError):
        encode_rows(np.array([[1.0, 1.0], [0.0, 0.0]]))


def test_success_probs_examples():
    H = sylvester(3)
    assert np.allclose(success_probs(H, H.to_real()), 1)
    M, _ = zero_outside(H, [1, 3, 6], [0, 2, 5, 7, 1])
    p = verify_nayak(H, M).p
    assert np.allclose(p[[1, 3, 6]], 5 / 8)
    T = H.to_real()
    T[0] *= -1
    assert np.allclose(success_probs(H, T), 1)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_success_probs_invariances(seed):
    rng = np.random.default_rng(seed)
    H = sylvester(3)
    T = rowspace_projection(H, 2, rng) + 0.1 * rng.standard_normal((8, 8))
    p = success_probs(H, T)
    signs = rng.choice([-1.0, 1.0], size=8)
    scales = rng.uniform(0.1, 10, size=8)
    assert np.allclose(success_probs(H, T * signs[:, None]), p, atol=1e-12)
    assert np.allclose(success_probs(H, T * scales[:, None]), p, atol=1e-12)


# --- Nayak ----------------------------------------------------------------------

def test_verify_nayak_examples():
    H = sylvester(2)
    rep = verify_nayak(H, H.to_real(), r=4)
    assert rep.p_avg == pytest.approx(1) and rep.passed
    M, _ = zero_outside(H, [0, 1], range(4))
    rep = verify_nayak(H, M)
    assert rep.r == 2 and rep.rank_source == "exact"
    assert rep.sum_p == pytest.approx(2) and rep.passed
    assert rep.zero_rows == [2, 3]


def test_verify_nayak_projection_sweep():
    rng = np.random.default_rng(0)
    H = sylvester(3)
    for _ in range(1000):
        rep = verify_nayak(H, rowspace_projection(H, 2, rng))
        assert rep.r == 2 and rep.rank_source == "numerical"
        assert rep.sum_p <= 2 + 1e-6


def test_nayak_can_fail_with_wrong_rank():
    H = sylvester(2)
    assert not verify_nayak(H, H.to_real(), r=1).passed


# --- isometry and POVM ------------------------------------------------------------

def test_rowspace_isometry_examples():
    H = sylvester(3).to_real()
    A, coords = rowspace_isometry(H)
    assert A.shape == (8, 8)
    assert np.max(np.abs(coords @ A.T - H / np.sqrt(8))) < 1e-9
    A, coords = rowspace_isometry(np.ones((4, 4)))
    assert A.shape == (4, 1) and np.allclose(A[:, 0], 0.5)
    M, _ = zero_outside(sylvester(2), [0, 1], range(4))
    A, coords = rowspace_isometry(M.to_real())
    assert A.shape == (4, 2)
    assert np.allclose(A.T @ A, np.eye(2), atol=1e-12)
    assert np.max(np.abs(coords[:2] @ A.T - M.to_real()[:2] / 2)) < 1e-9
    assert np.allclose(coords[2:], 0)


def test_povm_examples():
    H = sylvester(3)
    P = hadamard_povm_in_rowspace(H, np.eye(8))
    assert sum(np.trace(E) for E in P.elements) == pytest.approx(8)
    for E in P.elements:
        assert np.linalg.matrix_rank(E) == 1 and np.allclose(E @ E, E)
    u = np.random.default_rng(1).standard_normal(8)
    P = hadamard_povm_in_rowspace(H, (u / np.linalg.norm(u))[:, None])
    assert P.dim == 1
    assert sum(float(E[0, 0]) for E in P.elements) == pytest.approx(1)


def test_povm_validation():
    with pytest.raises(ValueError):
        Povm((np.eye(2), np.eye(2)))
    with pytest.raises(ValueError):
        Povm((np.diag([1.5, 0.5]), np.diag([-0.5, 0.5])))
    with pytest.raises(ValueError):
        Povm((np.array([[0.5, 0.5], [0.0, 0.5]]), np.array([[0.5, -0.5], [0.0, 0.5]])))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([1, 2, 4]))
def test_povm_invariants_random(seed, r):
    rng = np.random.default_rng(seed)
    H = sylvester(3)
    A, _ = rowspace_isometry(rowspace_projection(H, r, rng))
    P = hadamard_povm_in_rowspace(H, A)  # validates Hermitian, PSD, completeness
    assert P.dim == r
    assert sum(np.trace(E) for E in P.elements) == pytest.approx(r)


# --- Regev chain ----------------------------------------------------------------

def test_regev_orthonormal_projective():
    Q, _ = np.linalg.qr(np.random.default_rng(2).standard_normal((4, 4)))
    states = [StateVector(Q[:, i]) for i in range(4)]
    rep = regev_chain_check(states, Povm(tuple(np.outer(Q[:, i], Q[:, i]) for i in range(4))))
    assert np.allclose(rep.p, 1) and np.allclose(rep.op_norms, 1) and np.allclose(rep.traces, 1)
    assert rep.trace_sum == pytest.approx(4) and rep.holds


def test_regev_uniform_povm():
    s = StateVector(np.array([1.0, 2.0, 3.0]))
    rep = regev_chain_check([s] * 3, Povm(tuple(np.eye(3) / 3 for _ in range(3))))
    assert np.allclose(rep.p, 1 / 3) and np.allclose(rep.op_norms, 1 / 3)
    assert rep.holds


def test_regev_zero_outside_h8():
    H = sylvester(3)
    M, _ = zero_outside(H, [0, 1, 2, 3], range(8))
    A, coords = rowspace_isometry(M.to_real())
    P = hadamard_povm_in_rowspace(H, A)
    states = [StateVector(c) for c in coords[:4]] + [StateVector(np.eye(4)[0])] * 4
    rep = regev_chain_check(states, P)
    assert rep.holds and rep.trace_sum == pytest.approx(4)


def test_regev_dimension_checks():
    P = Povm((np.eye(2) / 2, np.eye(2) / 2))
    with pytest.raises(ValueError):
        regev_chain_check([StateVector(np.ones(2))], P)
    with pytest.raises(ValueError):
        regev_chain_check([StateVector(np.ones(3))] * 2, P)


# --- Thm 3 chain ------------------------------------------------------------------

def test_thm3_empty_perturbation():
    rep = thm3_chain_check(sylvester(2), Perturbation(4, (), 1.0))
    for row in rep.rows:
        assert row.delta == 0 and row.status == "ok"
        assert row.p == pytest.approx(1) and row.overlap_floor == pytest.approx(1)
        assert row.linearized == pytest.approx(1) and row.final == pytest.approx(1)
    assert rep.holds


@pytest.mark.parametrize("pos,new", [((1, 1), 1.0), ((0, 0), -1.0)])
def test_thm3_single_change_of_size_theta(pos, new):
    # hand evaluation: row becomes three agreeing entries and one flipped,
    # <h, ht> = 2, |ht|^2 = 4, so p = 4/16 = 1/4; floor = (4-2)^2/16 = 1/4;
    # linearized = (4-4)/4 = 0; final = 0/(4+8) = 0
    rep = thm3_chain_check(sylvester(2), Perturbation(4, ((*pos, new),), 2.0))
    row = rep.rows[pos[0]]
    assert row.delta == 1
    assert row.p == pytest.approx(0.25)
    assert row.overlap_floor == pytest.approx(0.25)
    assert row.linearized == pytest.approx(0.0, abs=1e-15)
    assert row.final == pytest.approx(0.0, abs=1e-15)
    assert row.status == "ok" and rep.holds


def test_thm3_reversed_row_breaks_the_literal_last_link():
    # row 1 of H_4 is (1,-1,1,-1); zero both -1 entries, each change of size 1 <= theta = 2.
    # n - theta*delta = 0 (chain not vacuous) but n - 2 theta*delta = -4 < 0.
    # hand values: c^2 = 1/2, p = 1/2, linearized = -2, final = -4/20 = -1/5
    rep = thm3_chain_check(sylvester(2), Perturbation(4, ((1, 1, 0.0), (1, 3, 0.0)), 2.0))
    row = rep.rows[1]
    assert row.status == "reversed"
    assert row.p == pytest.approx(0.5)
    assert row.linearized == pytest.approx(-2.0)
    assert row.final == pytest.approx(-0.2)
    assert row.linearized < row.final          # the literal link fails here
    assert row.p >= row.final                  # the end-to-end bound still holds
    assert rep.holds


def test_thm3_vacuous_row():
    p = Perturbation(4, tuple((0, j, -1.0) for j in range(3)), 2.0)
    rep = thm3_chain_check(sylvester(2), p)
    assert rep.rows[0].status == "vacuous" and rep.count("vacuous") == 1


def test_thm3_h8_sweep():
    rng = np.random.default_rng(11)
    H = sylvester(3)
    for _ in range(1000):
        rep = thm3_chain_check(H, theta_perturbation(H, 1.0, rng, weight=8))
        assert rep.holds and rep.aggregate_ok


def test_thm3_rejects_cap_violation():
    with pytest.raises(ValueError):
        thm3_chain_check(sylvester(2), Perturbation(4, ((0, 0, 3.0),), 1.0))
    with pytest.raises(ValueError):
        thm3_chain_check(sylvester(2), Perturbation(4, ((0, 0, 0.5),)))


def test_random_zero_outside_is_nayak_tight_on_live_rows():
    rng = np.random.default_rng(5)
    H = sylvester(3)
    for _ in range(50):
        M, _, rows, cols = random_zero_outside(H, rng)
        rep = verify_nayak(H, M)
        assert np.allclose(rep.p[rows], len(cols) / 8)
        assert rep.passed


def test_complex_generalized_hadamard_instances():
    # the 4x4 DFT matrix with a random complex rank-2 row-space projection
    F = np.array([[1j ** (j * k) for k in range(4)] for j in range(4)])
    rng = np.random.default_rng(9)
    for _ in range(100):
        Q, _ = np.linalg.qr(rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2)))
        T = F @ Q @ Q.conj().T
        rep = verify_nayak(F, T)
        assert rep.r == 2 and rep.passed and rep.pass_sum
        A, coords = rowspace_isometry(T)
        P = hadamard_povm_in_rowspace(F, A)
        assert regev_chain_check([StateVector(c) for c in coords], P).holds
