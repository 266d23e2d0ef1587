"""Chain-spec files and analysis reports (JSON).

A chain-spec file looks like::

    {"order": 2, "states": 3, "entries": [...]}              # dense
    {"order": 2, "states": 3,
     "sparse_entries": [{"index": [1, 2, 3], "p": 0.5}, ...]}  # sparse

``order`` is the chain order ``m - 1``. Dense entries list all ``n**m``
probabilities in linear order (first index fastest); sparse indices are
1-based and omitted entries are zero.
"""

import json
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import InputError, NotStochastic
from .validation import STOCHASTIC_TOL, check_shape, validate_stochastic

SCHEMA_VERSION = 1
LOAD_TOL = 1e-9


def chain_from_dict(spec):
    """Build a transition tensor from a parsed chain-spec mapping."""
    if not isinstance(spec, dict):
        raise InputError("chain spec must be a JSON object")
    try:
        order = int(spec["order"])
        n = int(spec["states"])
    except KeyError as exc:
        raise InputError(f"chain spec is missing the field {exc.args[0]!r}") from None
    except (TypeError, ValueError):
        raise InputError("chain spec fields 'order' and 'states' must be integers") from None
    m, n = check_shape(order + 1, n)
    has_dense, has_sparse = "entries" in spec, "sparse_entries" in spec
    if has_dense == has_sparse:
        raise InputError("chain spec needs exactly one of 'entries' or 'sparse_entries'")
    if has_dense:
        try:
            flat = np.asarray(spec["entries"], dtype=float)
        except (TypeError, ValueError):
            raise InputError("'entries' must be a flat list of numbers") from None
        if flat.shape != (n**m,):
            raise InputError(f"'entries' must hold {n**m} numbers, got {flat.size}")
        P = flat.reshape((n,) * m, order="F")
    else:
        P = np.zeros((n,) * m, order="F")
        seen = set()
        for k, item in enumerate(spec["sparse_entries"]):
            try:
                idx = tuple(int(i) for i in item["index"])
                p = float(item["p"])
            except (KeyError, TypeError, ValueError):
                raise InputError(f"sparse entry {k} needs an integer 'index' list and a number 'p'") from None
            if len(idx) != m or any(not 1 <= i <= n for i in idx):
                raise InputError(f"sparse entry {k} has index {list(idx)}, expected {m} states in [1, {n}]")
            if idx in seen:
                raise InputError(f"sparse entry {k} repeats index {list(idx)}")
            seen.add(idx)
            P[tuple(i - 1 for i in idx)] = p
    if not np.all(np.isfinite(P)):
        raise InputError("chain spec contains non-finite probabilities")
    verdict = validate_stochastic(P, LOAD_TOL)
    if not verdict:
        raise NotStochastic(f"not a stochastic tensor (tol={LOAD_TOL:g}): {verdict.reason}")
    if not validate_stochastic(P, STOCHASTIC_TOL):
        # absorb decimal rounding so the tighter internal checks pass
        P = P / P.sum(axis=0, keepdims=True)
    return np.asfortranarray(P)


def load_chain(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read chain file {path}: {exc.strerror}") from None
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"chain file {path} is not valid JSON: {exc}") from None
    return chain_from_dict(spec)


def chain_to_dict(P, sparse=False):
    P = np.asarray(P, dtype=float)
    out = {"order": P.ndim - 1, "states": P.shape[0]}
    if sparse:
        n = P.shape[0]
        entries = []
        for lin, p in enumerate(P.reshape(-1, order="F")):
            if p != 0.0:
                idx = np.unravel_index(lin, P.shape, order="F")
                entries.append({"index": [int(i) + 1 for i in idx], "p": float(p)})
        out["sparse_entries"] = entries
    else:
        out["entries"] = [float(p) for p in P.reshape(-1, order="F")]
    return out


def save_chain(P, path, sparse=False):
    Path(path).write_text(json.dumps(chain_to_dict(P, sparse), indent=1) + "\n", encoding="utf-8")


def to_jsonable(value):
    """Convert numpy values and tuples into plain JSON types."""
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if np.isfinite(v) else None
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def make_report(command, P, settings, result, source=None):
    """Assemble a schema-versioned report with a fixed field order.

    Tensors inside ``result`` are nested lists whose outermost axis is
    ``i1``: ``F[a][b][c]`` is the value at the 1-based tuple ``(a+1, b+1, c+1)``.
    """
    P = np.asarray(P)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "homc",
        "tool_version": __version__,
        "command": command,
        "chain": {"order": P.ndim - 1, "states": P.shape[0], "source": source},
        "settings": to_jsonable(settings),
        "result": to_jsonable(result),
    }


def dumps_report(report):
    return json.dumps(report, indent=2) + "\n"
