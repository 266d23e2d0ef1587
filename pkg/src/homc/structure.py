"""Irreducibility, ergodicity, regularity and classification of states."""

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .exceptions import GuardExceeded, InconsistentRelation
from .passage import ONE_THRESHOLD
from .tensor import multi_index
from .validation import check_transition_tensor

__all__ = [
    "IrreducibilityResult",
    "ErgodicityResult",
    "RegularityResult",
    "ChainAnalysis",
    "StateClass",
    "ClassificationReport",
    "is_irreducible",
    "is_ergodic",
    "regularity_index",
    "analyze_chain",
    "reachability",
    "communication_classes",
    "classify_states",
    "verify_class_consistency",
]

MAX_SUBSET_STATES = 16
ORBIT_HORIZON = 4096
REACH_THRESHOLD = 1e-12


class IrreducibilityResult(NamedTuple):
    irreducible: bool
    witness: Optional[Tuple[int, ...]] = None


class ErgodicityResult(NamedTuple):
    verdict: str  # "yes", "no" or "undetermined"
    witness: Optional[Tuple[int, ...]] = None


class RegularityResult(NamedTuple):
    index: Optional[int]
    horizon: int


def is_irreducible(P):
    """Check that every nonempty proper subset ``K`` can be entered from outside.

    The condition asks for some ``p[i1, i2, ..., im] > 0`` with ``i1`` in
    ``K`` and the whole history in the complement. Subsets are scanned by
    bitmask; the first failing one is returned as the witness.
    """
    P = check_transition_tensor(P)
    n, m = P.shape[0], P.ndim
    if n > MAX_SUBSET_STATES:
        raise GuardExceeded(f"subset scan is limited to {MAX_SUBSET_STATES} states, got {n}")
    pos = P > 0
    states = np.arange(n)
    for mask in range(1, 2**n - 1):
        inside = (mask >> states) & 1 == 1
        K, Kc = states[inside], states[~inside]
        if not pos[np.ix_(K, *([Kc] * (m - 1)))].any():
            return IrreducibilityResult(False, tuple(int(i) + 1 for i in K))
    return IrreducibilityResult(True)


def _bool_boxtimes(A, B):
    m = A.ndim
    a_axes = [0, m] + list(range(1, m - 1))
    b_axes = [m] + list(range(1, m))
    return np.einsum(A.astype(np.int64), a_axes, B.astype(np.int64), b_axes, list(range(m))) > 0


@dataclass
class _Orbit:
    ever_positive: np.ndarray
    regular_at: Optional[int]
    closed: bool
    steps: int


def _pattern_orbit(P, horizon):
    # Zero patterns of P^k evolve deterministically through a finite space,
    # so the orbit either revisits a pattern (exact answer) or hits the horizon.
    B1 = P > 0
    B = B1
    ever = B.copy()
    regular_at = None
    seen = set()
    for k in range(1, horizon + 1):
        if regular_at is None and B.all():
            regular_at = k
        ever |= B
        digest = hashlib.blake2b(np.packbits(B).tobytes(), digest_size=16).digest()
        if digest in seen:
            return _Orbit(ever, regular_at, True, k)
        seen.add(digest)
        B = _bool_boxtimes(B, B1)
    return _Orbit(ever, regular_at, False, horizon)


def _witness(never):
    n, m = never.shape[0], never.ndim
    # constant histories first, then linear order
    for i in range(n):
        if never[(i,) * m]:
            return (i + 1,) * m
    lin = int(np.flatnonzero(never.reshape(-1, order="F"))[0])
    return multi_index(lin + 1, n, m)


def is_ergodic(P, horizon=ORBIT_HORIZON):
    """Decide whether every ``p^(k)[t]`` is positive for some ``k >= 1``.

    Returns ``"no"`` with a tuple that stays zero for every ``k``, or
    ``"undetermined"`` if the pattern orbit does not close within ``horizon``.
    """
    P = check_transition_tensor(P)
    orbit = _pattern_orbit(P, horizon)
    if orbit.ever_positive.all():
        return ErgodicityResult("yes")
    if not orbit.closed:
        return ErgodicityResult("undetermined")
    return ErgodicityResult("no", _witness(~orbit.ever_positive))


def regularity_index(P, horizon=ORBIT_HORIZON):
    """Smallest ``k`` with ``P^k > 0`` entrywise, or ``None`` if there is none."""
    P = check_transition_tensor(P)
    orbit = _pattern_orbit(P, horizon)
    return RegularityResult(orbit.regular_at, orbit.steps)


@dataclass(frozen=True)
class ChainAnalysis:
    irreducible: bool
    irreducible_witness: Optional[Tuple[int, ...]]
    ergodic: str
    ergodic_witness: Optional[Tuple[int, ...]]
    regularity_index: Optional[int]
    horizon: int

    @property
    def is_ergodic(self):
        return self.ergodic == "yes"

    @property
    def is_regular(self):
        return self.regularity_index is not None


def analyze_chain(P, horizon=ORBIT_HORIZON):
    P = check_transition_tensor(P)
    irr = is_irreducible(P)
    orbit = _pattern_orbit(P, horizon)
    if orbit.ever_positive.all():
        erg = ErgodicityResult("yes")
    elif orbit.closed:
        erg = ErgodicityResult("no", _witness(~orbit.ever_positive))
    else:
        erg = ErgodicityResult("undetermined")
    return ChainAnalysis(
        irreducible=irr.irreducible,
        irreducible_witness=irr.witness,
        ergodic=erg.verdict,
        ergodic_witness=erg.witness,
        regularity_index=orbit.regular_at,
        horizon=orbit.steps,
    )


def reachability(P, report, threshold=REACH_THRESHOLD):
    """Boolean matrix ``R`` with ``R[i-1, j-1]`` true when ``i -> j``.

    ``i -> j`` holds when ``f[j, i, tail] > threshold`` for every tail; each
    state reaches itself.
    """
    P = check_transition_tensor(P)
    F = report.F
    pos = F > threshold
    R = pos.all(axis=tuple(range(2, F.ndim))).T.copy()
    np.fill_diagonal(R, True)
    return R


def communication_classes(R):
    """Classes of mutual reachability, each sorted, ordered by smallest member.

    Raises
    ------
    InconsistentRelation
        If mutual reachability is not transitive for this relation.
    """
    R = np.asarray(R, dtype=bool)
    C = R & R.T
    n = C.shape[0]
    for i, j, k in itertools.product(range(n), repeat=3):
        if C[i, j] and C[j, k] and not C[i, k]:
            raise InconsistentRelation(
                f"mutual reachability is not transitive: {i + 1}<->{j + 1} and "
                f"{j + 1}<->{k + 1} but not {i + 1}<->{k + 1}"
            )
    classes = []
    assigned = set()
    for i in range(n):
        if i in assigned:
            continue
        members = [int(j) + 1 for j in np.flatnonzero(C[i])]
        assigned.update(j - 1 for j in members)
        classes.append(members)
    return classes


@dataclass(frozen=True)
class StateClass:
    state: int
    label: str
    return_probabilities: np.ndarray = field(repr=False)
    absorbing: bool
    recurrent: bool
    transient: bool
    fully_transient: bool
    undecided: bool


@dataclass(frozen=True)
class ClassificationReport:
    states: List[StateClass]
    reachability: np.ndarray = field(repr=False)
    classes: List[List[int]]

    @property
    def labels(self):
        return {s.state: s.label for s in self.states}

    def recurrent_states(self):
        return [s.state for s in self.states if s.recurrent]

    def __getitem__(self, state):
        return self.states[state - 1]


def classify_states(P, report, threshold=ONE_THRESHOLD):
    """Label every state from the return probabilities ``f[i, i, tail]``.

    recurrent: all equal 1; transient: some below 1; fully transient: all
    below 1; absorbing: ``p[i, i, tail] == 1`` for every tail. A comparison
    the truncated series cannot settle marks the state undecided.
    """
    P = check_transition_tensor(P)
    n = P.shape[0]
    one = report.is_one(threshold)
    und = report.undecided(threshold)
    states = []
    for i in range(n):
        f = np.asarray(report.F[i, i, ...]).reshape(-1, order="F")
        o = one[i, i, ...].reshape(-1, order="F")
        u = und[i, i, ...].reshape(-1, order="F")
        less = ~o & ~u
        absorbing = bool(np.all(np.abs(P[i, i, ...] - 1.0) <= 1e-12))
        recurrent = bool(o.all())
        fully = bool(less.all())
        transient = bool(less.any())
        undecided = bool(u.any()) and not (transient and o.any())
        if undecided:
            label = "undecided"
        elif absorbing:
            label = "absorbing"
        elif recurrent:
            label = "recurrent"
        elif fully:
            label = "fully-transient"
        else:
            label = "transient"
        states.append(
            StateClass(
                state=i + 1,
                label=label,
                return_probabilities=f,
                absorbing=absorbing,
                recurrent=recurrent and not undecided,
                transient=transient,
                fully_transient=fully and not undecided,
                undecided=undecided,
            )
        )
    R = reachability(P, report)
    return ClassificationReport(states=states, reachability=R, classes=communication_classes(R))


def verify_class_consistency(report):
    """True unless some class holds both a recurrent and a fully transient state."""
    for cls in report.classes:
        members = [report[i] for i in cls]
        if any(s.recurrent for s in members) and any(s.fully_transient for s in members):
            return False
    return True
