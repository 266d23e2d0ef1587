import itertools

import numpy as np
import pytest

from homc import (
    WrongOrder,
    entry_locator,
    export_dot,
    random_stochastic_tensor,
    recover_kstep,
    reduce_chain,
    reduced_first_passage,
    tensor_power,
)
from homc.fixtures import get_fixture
from homc.reduction import ReducedChain, reachable_states
from homc.tensor import linear_index


@pytest.mark.parametrize("m,n", [(4, 2), (3, 4), (3, 3), (2, 5)])
def test_locator_agrees_with_reduction(m, n, rng):
    P = random_stochastic_tensor(m, n, rng)
    Q = reduce_chain(P).Q
    placed = np.zeros_like(Q, dtype=bool)
    for t in itertools.product(range(1, n + 1), repeat=m):
        r, c = entry_locator(t, n)
        assert Q[r - 1, c - 1] == P[tuple(i - 1 for i in t)]
        placed[r - 1, c - 1] = True
    assert np.all(Q[~placed] == 0)


def test_locator_corners():
    assert entry_locator((1, 1, 1, 1), 2) == (1, 1)
    assert entry_locator((2, 2, 2, 2), 2) == (8, 8)
    assert entry_locator((1, 1, 1, 2), 2) == (1, 5)
    assert entry_locator((2, 1, 1, 2), 2) == (2, 5)


@pytest.mark.parametrize("m,n", [(3, 3), (4, 2), (3, 4)])
def test_reduced_chain_invariants(m, n, rng):
    P = random_stochastic_tensor(m, n, rng)
    red = reduce_chain(P)
    Q = red.Q
    assert red.N == n ** (m - 1)
    np.testing.assert_allclose(Q.sum(axis=0), 1.0, atol=1e-12)
    assert np.all((Q >= 0) & (Q <= 1))
    # nonzero only where the shifted history components agree
    for r, c in zip(*np.nonzero(Q)):
        row = red.labels[r]
        col = red.labels[c]
        assert row[1:] == col[:-1]
    assert np.all(np.count_nonzero(Q, axis=0) <= n)


def test_symbolic_template():
    P = np.arange(1.0, 17.0).reshape((2,) * 4, order="F")
    P = P / P.sum(axis=0, keepdims=True)
    Q = reduce_chain(P).Q
    assert Q[0, 0] == P[0, 0, 0, 0]
    assert Q[1, 4] == P[1, 0, 0, 1]
    assert Q[7, 7] == P[1, 1, 1, 1]


def test_regular_reducible_zero_row(regular_reducible):
    fx = get_fixture("s4_regular_reducible")
    red = reduce_chain(regular_reducible)
    np.testing.assert_allclose(red.Q, fx.expected["Q"], atol=1e-15)
    row = red.labels.index("31")
    assert np.all(red.Q[row] == 0)


def test_first_order_reduction_is_identity(rng):
    P = random_stochastic_tensor(2, 4, rng)
    np.testing.assert_array_equal(reduce_chain(P).Q, P)


def test_recover_kstep_random(rng):
    for n in (2, 3):
        P = random_stochastic_tensor(4, n, rng)
        for k in (2, 3, 5):
            np.testing.assert_allclose(recover_kstep(P, k), tensor_power(P, k), atol=1e-12)


def test_recover_kstep_uniform():
    P = np.full((2,) * 4, 0.5)
    for k in (2, 4, 7):
        np.testing.assert_allclose(recover_kstep(P, k), 0.5, atol=1e-15)


def test_recover_kstep_wrong_order(uniform):
    with pytest.raises(WrongOrder):
        recover_kstep(uniform, 2)


def test_first_passage_base_case(four_state):
    red = reduce_chain(four_state)
    np.testing.assert_array_equal(reduced_first_passage(red, 1).G, red.Q)


def test_second_first_passage_formula(rng):
    P = random_stochastic_tensor(4, 2, rng)
    red = reduce_chain(P)
    G2 = reduced_first_passage(red, 2).G
    idx = lambda t: linear_index(t, 2) - 1  # noqa: E731
    checked = 0
    for i1, i2, i3, j2, j3 in itertools.product((1, 2), repeat=5):
        if (i1, i2, i3) == (i3, i3, j2):
            continue
        expected = P[i1 - 1, i2 - 1, i3 - 1, j2 - 1] * P[i2 - 1, i3 - 1, j2 - 1, j3 - 1]
        assert G2[idx((i1, i2, i3)), idx((i3, j2, j3))] == pytest.approx(expected, abs=1e-15)
        checked += 1
    assert checked > 0


def test_absorbing_first_passage_vanishes():
    red = ReducedChain.from_matrix(np.eye(2))
    np.testing.assert_array_equal(reduced_first_passage(red, 2).G, 0)


def test_dot_single_state():
    dot = export_dot(ReducedChain.from_matrix([[1.0]]))
    assert '"1" -> "1" [label="1"];' in dot
    assert dot.count("->") == 1


def test_dot_regular_reducible(regular_reducible):
    dot = export_dot(reduce_chain(regular_reducible))
    assert dot.startswith("digraph reduced_chain {")
    assert dot.count(";") - dot.count("->") == 9
    assert '-> "31"' not in dot
    assert dot == export_dot(reduce_chain(regular_reducible))


def test_four_state_history_12_never_reaches_11(four_state):
    red = reduce_chain(four_state)
    assert red.N == 16
    assert export_dot(red).count("->") == np.count_nonzero(red.Q)
    reach = reachable_states(red, red.labels.index("12"))
    assert red.labels.index("11") not in reach
