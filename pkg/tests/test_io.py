import json

import numpy as np
import pytest

from homc import InputError, NotStochastic, analyze_chain, ever_reaching, solve_mfpt
from homc.fixtures import FIXTURES
from homc.io import chain_from_dict, chain_to_dict, dumps_report, load_chain, make_report, save_chain


@pytest.mark.parametrize("name", list(FIXTURES))
@pytest.mark.parametrize("sparse", [False, True])
def test_round_trip_bit_identical(name, sparse, tmp_path):
    path = tmp_path / "chain.json"
    save_chain(FIXTURES[name].tensor, path, sparse=sparse)
    P = load_chain(path)
    save_chain(P, path, sparse=sparse)
    Q = load_chain(path)
    assert P.tobytes(order="F") == Q.tobytes(order="F")
    np.testing.assert_allclose(P, FIXTURES[name].tensor, atol=1e-15)


def test_dense_and_sparse_agree(tmp_path):
    P = FIXTURES["s5_class_mixed"].tensor
    dense = chain_from_dict(chain_to_dict(P))
    sparse = chain_from_dict(chain_to_dict(P, sparse=True))
    assert dense.tobytes(order="F") == sparse.tobytes(order="F")
    assert analyze_chain(dense) == analyze_chain(sparse)
    np.testing.assert_array_equal(ever_reaching(dense).F, ever_reaching(sparse).F)


def test_sparse_indices_are_one_based():
    spec = {
        "order": 1,
        "states": 2,
        "sparse_entries": [{"index": [2, 1], "p": 1.0}, {"index": [1, 2], "p": 1.0}],
    }
    np.testing.assert_array_equal(chain_from_dict(spec), [[0, 1], [1, 0]])


def test_decimal_fractions_accepted():
    third = 0.33333333333333
    spec = {"order": 2, "states": 3, "entries": [third] * 27}
    P = chain_from_dict(spec)
    np.testing.assert_allclose(P.sum(axis=0), 1.0, atol=1e-15)


@pytest.mark.parametrize(
    "spec",
    [
        [],
        {"states": 2, "entries": [0.5] * 4},
        {"order": 1, "states": 2},
        {"order": 1, "states": 2, "entries": [0.5] * 4, "sparse_entries": []},
        {"order": 1, "states": 2, "entries": [0.5] * 3},
        {"order": 1, "states": 2, "sparse_entries": [{"index": [3, 1], "p": 1.0}]},
        {"order": 1, "states": 2, "sparse_entries": [{"index": [1], "p": 1.0}]},
        {"order": 1, "states": 2, "entries": [0.5, 0.5, "x", 0.5]},
        {"order": 0, "states": 2, "entries": [0.5, 0.5]},
    ],
)
def test_malformed_specs(spec):
    with pytest.raises(InputError):
        chain_from_dict(spec)


def test_not_stochastic_names_column():
    spec = {"order": 1, "states": 2, "entries": [0.5, 0.5, 0.6, 0.5]}
    with pytest.raises(NotStochastic, match=r"\(2\)|2"):
        chain_from_dict(spec)


def test_report_shape(uniform):
    rep = make_report("mfpt", uniform, {"tol": 1e-12}, {"mu": solve_mfpt(uniform)}, source="u.json")
    text = dumps_report(rep)
    data = json.loads(text)
    assert list(data) == ["schema_version", "tool", "tool_version", "command", "chain", "settings", "result"]
    assert data["schema_version"] == 1
    assert np.allclose(data["result"]["mu"], 3.0)
    assert text == dumps_report(rep)
