import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from homc import (
    NonErgodicChain,
    ShapeMismatch,
    mfpt_reduced,
    mfpt_residual,
    random_stochastic_tensor,
    reduce_chain,
    solve_mfpt,
)
from homc.fixtures import FIXTURES, get_fixture
from homc.mfpt import assemble_mfpt_system


def _residual_direct(P, mu):
    n, m = P.shape[0], P.ndim
    worst = 0.0
    for t in itertools.product(range(n), repeat=m):
        i1, rest = t[0], t[1:]
        s = sum(P[(j,) + rest] * mu[(i1, j) + rest[:-1]] for j in range(n) if j != i1)
        worst = max(worst, abs(mu[t] - 1 - s))
    return worst


def test_uniform_mu(uniform):
    mu = solve_mfpt(uniform)
    np.testing.assert_allclose(mu, 3.0, atol=1e-9)
    assert mfpt_residual(uniform, mu) <= 1e-12


def test_residual_of_wrong_guess(uniform):
    mu = np.full((3, 3, 3), 2.0)
    assert mfpt_residual(uniform, mu) == pytest.approx(_residual_direct(uniform, mu), abs=1e-15)
    assert mfpt_residual(uniform, mu) == pytest.approx(1 / 3, abs=1e-15)


def test_residual_shape_check(uniform):
    with pytest.raises(ShapeMismatch):
        mfpt_residual(uniform, np.ones((3, 3)))


def test_four_state_solution(four_state):
    mu = solve_mfpt(four_state)
    assert mfpt_residual(four_state, mu) <= 1e-9
    assert np.all(mu >= 1 - 1e-12)
    assert _residual_direct(four_state, mu) <= 1e-9


def test_not_ergodic_raises(irreducible_not_ergodic):
    with pytest.raises(NonErgodicChain):
        solve_mfpt(irreducible_not_ergodic)


@pytest.mark.parametrize("name", list(FIXTURES))
def test_raises_exactly_on_non_ergodic(name):
    fx = FIXTURES[name]
    if fx.ergodic:
        mu = solve_mfpt(fx.tensor)
        assert mfpt_residual(fx.tensor, mu) <= 1e-9
    else:
        with pytest.raises(NonErgodicChain):
            solve_mfpt(fx.tensor)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_unique_solution_under_relabeling(n, seed):
    # relabeling the states permutes mu the same way
    rng = np.random.default_rng(seed)
    P = random_stochastic_tensor(3, n, rng)
    perm = rng.permutation(n)
    Pp = P[np.ix_(perm, perm, perm)]
    mu, mup = solve_mfpt(P), solve_mfpt(Pp)
    np.testing.assert_allclose(mup, mu[np.ix_(perm, perm, perm)], rtol=1e-9)


def test_system_matches_fixed_point(four_state):
    A, b = assemble_mfpt_system(four_state)
    mu = solve_mfpt(four_state)
    np.testing.assert_allclose(A @ mu.reshape(-1, order="F"), b, atol=1e-9)


def test_reduced_uniform_matrix(uniform):
    fx = get_fixture("s6_uniform")
    M = mfpt_reduced(reduce_chain(uniform)).M
    np.testing.assert_allclose(M, fx.expected["M"], atol=1e-9)
    assert M[0, 0] == pytest.approx(9) and M[1, 0] == pytest.approx(6) and M[0, 1] == pytest.approx(12)
    np.testing.assert_allclose(M[0], [9, 12, 12, 9, 12, 12, 9, 12, 12], atol=1e-9)
    # the reduced chain answers a different question than mu
    assert abs(M[0, 0] - solve_mfpt(uniform)[0, 0, 0]) > 1


def test_first_order_consistency(rng):
    P = random_stochastic_tensor(2, 4, rng)
    np.testing.assert_allclose(mfpt_reduced(reduce_chain(P)).M, solve_mfpt(P), rtol=1e-12)
    # Kac: mean return time is the reciprocal of the stationary mass
    w, V = np.linalg.eig(P)
    v = np.real(V[:, np.argmin(abs(w - 1))])
    v /= v.sum()
    np.testing.assert_allclose(np.diag(solve_mfpt(P)), 1 / v, rtol=1e-9)
