import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasifeynman.experiment import random_hermitian
from quasifeynman.families import (
    FAMILY_KINDS,
    ChernoffFamily,
    HypothesisError,
    assemble_decomposition,
    check_tangency,
    make_family,
    tangency_residual,
)
from quasifeynman.operators import hermitian_defect, operator_norm

from conftest import SX, SZ


def test_family_examples():
    assert make_family("linear", [[2.0]])(0.25)[0, 0] == pytest.approx(1.5)
    assert make_family("resolvent", [[1.0]], t_max=0.5)(0.1)[0, 0] == pytest.approx(1 / 0.9, abs=1e-15)
    np.testing.assert_allclose(make_family("quadratic", SX)(0.2), 1.02 * np.eye(2) + 0.2 * SX, atol=1e-15)


@pytest.mark.parametrize("kind", FAMILY_KINDS)
def test_family_identity_at_zero(kind):
    fam = make_family(kind, 0.3 * SX, t_max=1.0)
    np.testing.assert_array_equal(fam(0.0), np.eye(2))


def test_family_range_and_input_checks():
    fam = make_family("linear", SZ, t_max=0.5)
    with pytest.raises(ValueError):
        fam(0.6)
    with pytest.raises(ValueError):
        fam(-0.1)
    with pytest.raises(ValueError, match="resolvent"):
        make_family("resolvent", SZ, t_max=0.6)
    with pytest.raises(ValueError, match="not Hermitian"):
        make_family("linear", [[0, 1], [0, 0]])
    with pytest.raises(ValueError, match="unknown"):
        make_family("cubic", SZ)


def test_exact_exponential_family_is_exp_tl(rng):
    L = random_hermitian(5, rng)
    fam = make_family("exact_exponential", L)
    w, U = np.linalg.eigh(L)
    np.testing.assert_allclose(fam(0.3), U @ np.diag(np.exp(0.3 * w)) @ U.conj().T, atol=1e-13)


def test_tangency_linear_family_is_roundoff_exact(rng):
    L = random_hermitian(4, rng, norm=2.0)
    rep = check_tangency(make_family("linear", L))
    assert rep.tangent and rep.ct2_pass and rep.hermitian_at_grid
    # cancellation in (S(t) - I)/t costs about eps * (1 + ||L||) / t
    eps = np.finfo(float).eps
    for t, r in zip(rep.t_grid, rep.residuals):
        assert r <= 16 * eps * (1 + operator_norm(L)) / t


def test_tangency_quadratic_closed_form():
    rep = check_tangency(make_family("quadratic", SZ), tol=1e-2)
    # remainder t L^2 / 2 applied to a basis vector
    # difference quotients lose about eps/t absolute accuracy
    np.testing.assert_allclose(rep.residuals, [t / 2 for t in rep.t_grid], rtol=1e-9, atol=1e-11)
    assert rep.residuals[2] == pytest.approx(5e-4, rel=1e-9)
    assert rep.tangent


def test_tangency_rejects_wrong_generator():
    L = np.diag([1.0, 2.0])
    wrong = ChernoffFamily("I + tL^2", "custom", L.astype(complex), lambda t: np.eye(2) + t * (L @ L))
    rep = check_tangency(wrong)
    assert not rep.tangent
    assert rep.residuals[-1] == pytest.approx(2.0, abs=1e-9)


def test_tangency_collective_bound():
    rep = check_tangency(make_family("resolvent", [[1.0]], t_max=0.5))
    # ||(1 - t)^-1|| on [0, 0.5] peaks at the right end
    assert rep.collective_bound == pytest.approx(2.0, rel=1e-12)


def test_tangency_records_evaluator_failure():
    def evaluator(t):
        if t < 1e-3:
            raise np.linalg.LinAlgError("singular")
        return np.eye(1) + t

    rep = check_tangency(ChernoffFamily("flaky", "custom", np.eye(1, dtype=complex), evaluator))
    assert not rep.tangent
    assert rep.failed_at == 1e-4


def test_tangency_grid_validation():
    fam = make_family("linear", SZ, t_max=0.05)
    with pytest.raises(ValueError):
        check_tangency(fam, t_grid=[1e-3, 1e-2])
    with pytest.raises(ValueError):
        check_tangency(fam)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(FAMILY_KINDS), st.integers(1, 6), st.integers(0, 2**32 - 1), st.floats(0.1, 5.0))
def test_builtin_families_first_order_tangent(kind, dim, seed, norm):
    L = random_hermitian(dim, np.random.default_rng(seed), norm=norm)
    t_max = 0.1 if kind != "resolvent" else 0.5 / norm
    fam = make_family(kind, L, t_max=min(0.1, t_max))
    grid = [t for t in (1e-1, 1e-2, 1e-3, 1e-4) if t <= fam.t_max]
    rep = check_tangency(fam, t_grid=grid)
    for t in grid:
        assert hermitian_defect(fam(t)) <= 1e-10
    r = rep.residuals
    assert r[-1] < 10 * grid[-1] * norm**2 + 1e-12
    # first order: residual(t) <= t ||L||^2 g(t||L||), g carrying the higher-order terms
    x = np.array(grid) * norm
    g = {
        "linear": 0.0 * x,
        "quadratic": 0.5 + 0.0 * x,
        "exact_exponential": 0.5 * np.exp(x),
        "resolvent": 1.0 / (1.0 - x),
    }[kind]
    for t, res, gi in zip(grid, r, g):
        assert res <= t * norm**2 * gi + 1e-11
    # slope fitted at the two smallest points predicts the others once t||L|| is small
    kappa = r[-1] / grid[-1]
    for t, res in zip(grid, r):
        if t * norm <= 1e-2:
            assert res <= 1.05 * kappa * t + 1e-11
    if kind == "exact_exponential":
        assert tangency_residual(fam, 1e-4) < 1e-3 * (1 + norm**2)


def test_assemble_single_term():
    dec = assemble_decomposition([1.0], [make_family("linear", SZ)])
    np.testing.assert_array_equal(dec.assembled_generator, SZ)
    assert dec.coefficient_sum == 1.0
    np.testing.assert_array_equal(dec.hamiltonian, -SZ)


def test_assemble_two_terms_zero_sum():
    dec = assemble_decomposition([1, -1], [make_family("linear", SX), make_family("linear", SZ)])
    np.testing.assert_array_equal(dec.assembled_generator, SX - SZ)
    assert dec.coefficient_sum == 0.0


def test_assemble_matches_matrix_sum(rng):
    L1, L2 = random_hermitian(8, rng), random_hermitian(8, rng)
    dec = assemble_decomposition([1, 1], [make_family("quadratic", L1), make_family("quadratic", L2)])
    assert np.max(np.abs(dec.assembled_generator - (L1 + L2))) <= 1e-14


def test_augmented_terms():
    dec = assemble_decomposition([2.0, 0.5], [make_family("linear", SX), make_family("linear", SZ)])
    coeffs, ops = dec.augmented(0.1)
    assert coeffs == (2.0, 0.5, -2.5)
    np.testing.assert_array_equal(ops[-1], np.eye(2))
    np.testing.assert_allclose(sum(a * S for a, S in zip(coeffs, ops)), dec.shifted_sum(0.1), atol=1e-15)


def test_assemble_structural_errors():
    with pytest.raises(HypothesisError):
        assemble_decomposition([], [])
    with pytest.raises(HypothesisError, match="non-zero"):
        assemble_decomposition([0.0], [make_family("linear", SZ)])
    with pytest.raises(HypothesisError, match="dimensions"):
        assemble_decomposition([1, 1], [make_family("linear", SZ), make_family("linear", np.eye(3))])
    with pytest.raises(HypothesisError) as err:
        assemble_decomposition([1j], [make_family("linear", SZ)])
    assert err.value.condition == 5


def test_assemble_condition_4():
    # S(t) not self-adjoint although the generator is
    skew = np.array([[0, 1], [-1, 0]], dtype=complex)
    fam = ChernoffFamily("odd", "custom", SZ, lambda t: np.eye(2) + t * SZ + t * t * skew)
    with pytest.raises(HypothesisError) as err:
        assemble_decomposition([1.0], [fam])
    assert err.value.condition == 4


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_non_hermitian_bump_rejected_with_condition_3(dim, seed):
    r = np.random.default_rng(seed)
    L = random_hermitian(dim, r)
    bump = np.zeros((dim, dim), dtype=complex)
    i, j = r.choice(dim, size=2, replace=False)
    bump[i, j] = 1e-3
    Lb = L + bump
    fam = ChernoffFamily("bumped", "custom", Lb, lambda t: np.eye(dim) + t * Lb)
    with pytest.raises(HypothesisError) as err:
        assemble_decomposition([1.0], [fam])
    assert err.value.condition == 3
