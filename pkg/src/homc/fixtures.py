"""Built-in example chains with their known analytic results.

Tensors are written as frontal slices ``P[:, :, k]`` for ``m = 3``.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = ["Fixture", "FIXTURES", "get_fixture", "fixture_names"]


def _f(x):
    return float(Fraction(x))


def _slices(*slices):
    return np.asfortranarray(np.stack([np.array([[_f(x) for x in row] for row in s]) for s in slices], axis=2))


@dataclass(frozen=True)
class Fixture:
    name: str
    title: str
    origin: str
    tensor: np.ndarray = field(repr=False)
    criterion: int
    expected: dict = field(default_factory=dict, repr=False)
    ergodic: bool = False


_FOUR_STATE = _slices(
    [["1/2", 0, 0, 0], ["1/2", 0, 1, 0], [0, 1, 0, 1], [0, 0, 0, 0]],
    [[0, 0, "1/2", 1], [0, "1/2", 0, 0], ["1/2", "1/2", 0, 0], ["1/2", 0, "1/2", 0]],
    [[0, 1, 0, 1], [1, 0, "1/2", 0], [0, 0, "1/2", 0], [0, 0, 0, 0]],
    [[0, 0, 0, 0], [1, 1, 1, 0], [0, 0, 0, "1/2"], [0, 0, 0, "1/2"]],
)

_REG_SLICE = [["1/2", "1/3", "1/3"], ["1/2", "1/3", "1/3"], [0, "1/3", "1/3"]]
_H, _T = "1/2", "1/3"
_REG_Q = [
    [_H, 0, 0, _H, 0, 0, _H, 0, 0],
    [_H, 0, 0, _H, 0, 0, _H, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, _T, 0, 0, _T, 0, 0, _T, 0],
    [0, _T, 0, 0, _T, 0, 0, _T, 0],
    [0, _T, 0, 0, _T, 0, 0, _T, 0],
    [0, 0, _T, 0, 0, _T, 0, 0, _T],
    [0, 0, _T, 0, 0, _T, 0, 0, _T],
    [0, 0, _T, 0, 0, _T, 0, 0, _T],
]

_UNIFORM_M = [
    [9, 12, 12, 9, 12, 12, 9, 12, 12],
    [6, 9, 9, 6, 9, 9, 6, 9, 9],
    [6, 9, 9, 6, 9, 9, 6, 9, 9],
    [9, 6, 9, 9, 6, 9, 9, 6, 9],
    [12, 9, 12, 12, 9, 12, 12, 9, 12],
    [9, 6, 9, 9, 6, 9, 9, 6, 9],
    [9, 9, 6, 9, 9, 6, 9, 9, 6],
    [9, 9, 6, 9, 9, 6, 9, 9, 6],
    [12, 12, 9, 12, 12, 9, 12, 12, 9],
]

FIXTURES = {
    f.name: f
    for f in [
        Fixture(
            name="s4_irreducible_not_ergodic",
            title="three-state second-order chain that is irreducible but not ergodic",
            origin="irreducibility vs ergodicity counterexample",
            tensor=_slices(
                [[0, 0, 0], [1, 0, 0], [0, 1, 1]],
                [[0, 0, 0], [0, 0, 0], [1, 1, 1]],
                [[0, 0, 1], [0, 0, 0], [1, 1, 0]],
            ),
            criterion=1,
            expected={"irreducible": True, "ergodic": "no", "regularity_index": None},
        ),
        Fixture(
            name="s4_regular_reducible",
            title="regular three-state chain whose reduced chain is reducible",
            origin="regularity does not carry over to the reduced chain",
            tensor=_slices(_REG_SLICE, _REG_SLICE, _REG_SLICE),
            criterion=2,
            expected={
                "regularity_index": 2,
                "zero_row_label": "31",
                "Q": np.array([[_f(x) for x in row] for row in _REG_Q]),
            },
            ergodic=True,
        ),
        Fixture(
            name="s4_four_state",
            title="regular four-state chain with a reducible reduced chain",
            origin="ever-reaching and limiting distribution example",
            tensor=_FOUR_STATE,
            criterion=3,
            expected={
                "max_regularity_index": 10,
                "z": np.array([0, 0, 1, 1, 2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 1, 0]) / 7.0,
                "pi": np.array([2, 2, 2, 1]) / 7.0,
            },
            ergodic=True,
        ),
        Fixture(
            name="s5_no_recurrent",
            title="three-state chain without a recurrent state",
            origin="a higher-order chain need not have a recurrent state",
            tensor=_slices(
                [[1, 0, 0], [0, "1/2", "1/2"], [0, "1/2", "1/2"]],
                [[1, 0, "1/2"], [0, 1, 0], [0, 0, "1/2"]],
                [[0, "1/2", 1], [0, "1/2", 0], [1, 0, 0]],
            ),
            criterion=4,
            expected={
                "F": _slices(
                    [[1, "1/2", "3/4"], [0, 1, 1], [0, "1/2", "1/2"]],
                    [[1, 0, 1], [0, 1, 1], [0, 0, 1]],
                    [["3/4", "1/2", 1], [1, "1/2", 1], [1, 0, 1]],
                ),
            },
        ),
        Fixture(
            name="s5_two_state",
            title="two-state chain with both states recurrent but 1 not reaching 2",
            origin="recurrence is not characterized by reachability",
            tensor=_slices([[1, "1/2"], [0, "1/2"]], [[0, "1/2"], [1, "1/2"]]),
            criterion=5,
            expected={"F": _slices([[1, 1], [0, 1]], [[1, 1], [1, 1]])},
        ),
        Fixture(
            name="s5_class_mixed",
            title="three-state chain where recurrence is not a class property",
            # p[2,2,1] is 1/3: it is the only value that makes the column
            # stochastic and it reproduces every ever-reaching value below
            origin="recurrence and transience are not class properties",
            tensor=_slices(
                [["1/2", "1/3", "1/2"], ["1/2", "1/3", 0], [0, "1/3", "1/2"]],
                [[1, 0, "1/2"], [0, 1, "1/2"], [0, 0, 0]],
                [[0, 0, "1/2"], [0, 0, "1/2"], [1, 1, 0]],
            ),
            criterion=6,
            expected={
                "F": _slices(
                    [["5/6", "2/3", 1], [1, 1, 1], ["1/2", "1/2", 1]],
                    [[1, 0, 1], [1, 1, 1], ["1/2", 0, 1]],
                    [[1, 1, 1], [1, 1, 1], [1, 1, 1]],
                ),
            },
        ),
        Fixture(
            name="s6_uniform",
            title="uniform three-state second-order chain",
            origin="mean first passage times differ from the reduced chain's",
            tensor=np.full((3, 3, 3), 1.0 / 3.0, order="F"),
            criterion=7,
            expected={"mu": 3.0, "M": np.array(_UNIFORM_M, dtype=float)},
            ergodic=True,
        ),
    ]
}


def fixture_names():
    return list(FIXTURES)


def get_fixture(name):
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(FIXTURES)}") from None
