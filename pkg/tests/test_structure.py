import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from homc import (
    InconsistentRelation,
    analyze_chain,
    classify_states,
    communication_classes,
    ever_reaching,
    is_ergodic,
    is_irreducible,
    random_stochastic_tensor,
    reachability,
    regularity_index,
    verify_class_consistency,
)
from homc.fixtures import FIXTURES


def test_irreducible_examples(irreducible_not_ergodic, rng):
    assert is_irreducible(irreducible_not_ergodic).irreducible
    assert is_irreducible(random_stochastic_tensor(3, 4, rng)).irreducible


def test_reducible_witness():
    P = np.full((2, 2, 2), 0.5)
    P[0, 1, 1], P[1, 1, 1] = 0.0, 1.0
    res = is_irreducible(P)
    assert not res.irreducible
    assert set(res.witness) == {1}


def test_ergodicity_examples(irreducible_not_ergodic, regular_reducible, four_state):
    res = is_ergodic(irreducible_not_ergodic)
    assert res.verdict == "no" and res.witness == (2, 2, 2)
    assert is_ergodic(regular_reducible).verdict == "yes"
    assert is_ergodic(four_state).verdict == "yes"


def test_regularity_examples(irreducible_not_ergodic, regular_reducible, four_state):
    assert regularity_index(regular_reducible).index == 2
    k = regularity_index(four_state).index
    assert k is not None and k <= 10
    assert regularity_index(irreducible_not_ergodic).index is None


def test_irreducible_not_ergodic_report(irreducible_not_ergodic):
    a = analyze_chain(irreducible_not_ergodic)
    assert a.irreducible and a.ergodic == "no" and a.regularity_index is None
    assert a.ergodic_witness == (2, 2, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.floats(0.3, 1.0), st.integers(0, 2**32 - 1))
def test_verdict_implications(n, density, seed):
    P = random_stochastic_tensor(3, n, np.random.default_rng(seed), density=density)
    a = analyze_chain(P)
    if a.ergodic == "yes":
        assert a.irreducible
    if a.regularity_index is not None:
        assert a.ergodic == "yes"


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), st.floats(0.2, 1.0), st.integers(0, 2**32 - 1))
def test_first_order_irreducible_iff_ergodic(n, density, seed):
    P = random_stochastic_tensor(2, n, np.random.default_rng(seed), density=density)
    assert is_irreducible(P).irreducible == (is_ergodic(P).verdict == "yes")


def test_ergodic_iff_positive_ever_reaching():
    for f in FIXTURES.values():
        F = ever_reaching(f.tensor).F
        assert (is_ergodic(f.tensor).verdict == "yes") == bool(np.all(F > 1e-12)), f.name


def test_reachability_two_state(two_state):
    R = reachability(two_state, ever_reaching(two_state))
    assert R[1, 0] and not R[0, 1]
    assert R.diagonal().all()
    assert communication_classes(R) == [[1], [2]]


def test_reachability_class_mixed(class_mixed):
    R = reachability(class_mixed, ever_reaching(class_mixed))
    assert R[0, 2] and R[2, 0]
    assert any(set(c) >= {1, 3} for c in communication_classes(R))


def test_positive_chain_single_class(rng):
    P = random_stochastic_tensor(3, 4, rng)
    R = reachability(P, ever_reaching(P))
    assert communication_classes(R) == [[1, 2, 3, 4]]


def test_inconsistent_relation():
    R = np.array([[1, 1, 0], [1, 1, 1], [0, 1, 1]], dtype=bool)
    with pytest.raises(InconsistentRelation):
        communication_classes(R)


def test_classify_no_recurrent(no_recurrent):
    rep = classify_states(no_recurrent, ever_reaching(no_recurrent))
    assert rep.recurrent_states() == []


def test_classify_two_state(two_state):
    rep = classify_states(two_state, ever_reaching(two_state))
    assert rep.recurrent_states() == [1, 2]
    assert rep[1].absorbing is False or rep[1].recurrent


def test_classify_class_mixed(class_mixed):
    rep = classify_states(class_mixed, ever_reaching(class_mixed))
    assert rep[1].transient and not rep[1].fully_transient
    assert rep[3].recurrent
    assert verify_class_consistency(rep)


def test_absorbing_state_is_recurrent():
    P = np.full((3, 3, 3), 0.0)
    P[:, :, :] = 1 / 3
    P[:, 0, :] = 0.0
    P[0, 0, :] = 1.0
    rep = classify_states(P, ever_reaching(P))
    assert rep[1].absorbing and rep[1].recurrent and rep[1].label == "absorbing"


@pytest.mark.parametrize("name", list(FIXTURES))
def test_class_consistency_on_fixtures(name):
    P = FIXTURES[name].tensor
    rep = classify_states(P, ever_reaching(P))
    assert verify_class_consistency(rep)
    for s in rep.states:
        assert not (s.recurrent and s.fully_transient)
        if s.absorbing:
            assert s.recurrent


def test_single_state_chain_rejected():
    with pytest.raises(ValueError):
        classify_states(np.ones((1, 1, 1)), None)
