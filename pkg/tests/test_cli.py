import io
import json

import numpy as np
import pytest

from homc.cli import main
from homc.fixtures import FIXTURES
from homc.io import save_chain


@pytest.fixture
def chain_dir(tmp_path):
    for name, fx in FIXTURES.items():
        save_chain(fx.tensor, tmp_path / f"{name}.json")
    return tmp_path


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_mfpt_uniform(chain_dir):
    code, out, _ = run("mfpt", chain_dir / "s6_uniform.json")
    assert code == 0
    rep = json.loads(out)
    np.testing.assert_allclose(rep["result"]["mu"], 3.0, atol=1e-9)
    assert rep["settings"]["tol"] == 1e-12


def test_limit_four_state(chain_dir):
    for method in ("stationary", "powers"):
        code, out, _ = run("limit", chain_dir / "s4_four_state.json", "--method", method)
        assert code == 0
        np.testing.assert_allclose(json.loads(out)["result"]["pi"], np.array([2, 2, 2, 1]) / 7, atol=1e-8)


def test_analyze_not_ergodic(chain_dir):
    code, out, _ = run("analyze", chain_dir / "s4_irreducible_not_ergodic.json")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["irreducible"] is True
    assert res["ergodic"] is False
    assert res["ergodic_witness"] == [2, 2, 2]
    assert res["regularity_index"] is None


def test_domain_error_exit(chain_dir):
    code, out, err = run("mfpt", chain_dir / "s5_two_state.json")
    assert code == 1 and out == ""
    assert "NonErgodicChain" in err
    code, _, err = run("limit", chain_dir / "s4_irreducible_not_ergodic.json", "--method", "powers", "--kmax", "200")
    assert code == 1 and "NotConverged" in err


def test_input_error_exits(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("analyze", bad)[0] == 2
    assert run("analyze", tmp_path / "missing.json")[0] == 2
    ns = tmp_path / "ns.json"
    ns.write_text(json.dumps({"order": 1, "states": 2, "entries": [0.5, 0.5, 0.9, 0.5]}))
    code, _, err = run("mfpt", ns)
    assert code == 2
    assert "history (2,)" in err and "1.4" in err
    assert run("kstep", ns)[0] == 2
    assert run("frobnicate")[0] == 2


def test_validate(chain_dir):
    code, out, _ = run("validate", chain_dir / "s5_no_recurrent.json")
    assert code == 0 and json.loads(out)["result"]["stochastic"] is True


def test_reduce_with_dot(chain_dir, tmp_path):
    dot = tmp_path / "q.dot"
    code, out, _ = run("reduce", chain_dir / "s4_regular_reducible.json", "--dot", dot)
    assert code == 0
    res = json.loads(out)["result"]
    assert res["N"] == 9
    assert np.all(np.array(res["Q"])[res["labels"].index("31")] == 0)
    assert dot.read_text().startswith("digraph")


def test_classify_and_everreach(chain_dir):
    code, out, _ = run("classify", chain_dir / "s5_class_mixed.json")
    res = json.loads(out)["result"]
    assert code == 0 and [1, 3] in res["classes"]
    assert res["states"][0]["label"] == "transient"
    code, out, _ = run("everreach", chain_dir / "s5_two_state.json", "--tol", "1e-13")
    rep = json.loads(out)
    assert code == 0 and rep["settings"]["tol"] == 1e-13
    np.testing.assert_allclose(rep["result"]["F"], FIXTURES["s5_two_state"].expected["F"], atol=1e-9)


def test_kstep_entry(chain_dir):
    code, out, _ = run("kstep", chain_dir / "s5_two_state.json", "--k", 7, "--tuple", "2,1,1")
    assert code == 0 and json.loads(out)["result"]["p"] == 0.0


def test_simulate(chain_dir):
    args = ("simulate", chain_dir / "s6_uniform.json", "--quantity", "mfpt", "--tuple", "1,2,3")
    code, out, _ = run(*args, "--samples", 2000, "--seed", 5)
    assert code == 0
    res = json.loads(out)["result"]
    assert abs(res["value"] - 3) <= 4 * res["stderr"]
    assert out == run(*args, "--samples", 2000, "--seed", 5)[1]
    assert run("simulate", chain_dir / "s6_uniform.json", "--quantity", "kstep", "--tuple", "1,1,1")[0] == 2


def test_output_file_and_text(chain_dir, tmp_path):
    dest = tmp_path / "r.txt"
    code, out, _ = run("mfpt", chain_dir / "s6_uniform.json", "--format", "text", "--output", dest)
    assert code == 0 and out == ""
    assert dest.read_text().startswith("homc mfpt")


def test_examples_list():
    code, out, _ = run("examples", "list")
    assert code == 0 and len(out.strip().splitlines()) == 7


def test_examples_run():
    code, out, _ = run("examples", "run", "s5_no_recurrent")
    assert code == 0 and "expected F" in out and "computed F" in out
    code, out, _ = run("examples", "run", "s6_uniform")
    assert code == 0 and "PASS" in out
    assert run("examples", "run", "nope")[0] == 2
