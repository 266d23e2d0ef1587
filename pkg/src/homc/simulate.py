"""Seeded Monte Carlo simulation of higher-order chains.

Every sample owns an independent xorshift64* stream whose state is derived
from ``(seed, sample index)`` with splitmix64, and draws exactly one uniform
per step. Results therefore do not depend on batching or on the order in
which samples finish, and they are identical on every platform.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .tensor import mode1_matricize
from .validation import check_transition_tensor

__all__ = [
    "Xorshift64Star",
    "Trajectory",
    "Estimate",
    "sample_trajectory",
    "first_passage_times",
    "estimate",
    "estimate_kstep",
    "estimate_ever_reach",
    "estimate_mfpt",
    "estimate_occupancy",
]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_STAR = np.uint64(0x2545F4914F6CDD1D)
_MASK64 = (1 << 64) - 1


def _splitmix64(z):
    z = z + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


class Xorshift64Star:
    """Vector of independent xorshift64* streams, one per lane.

    Lane ``i`` is seeded with ``splitmix64(seed + i * golden)`` where ``i``
    counts from ``offset``.
    """

    def __init__(self, seed, n_lanes, offset=0):
        lanes = np.arange(offset, offset + n_lanes, dtype=np.uint64)
        base = np.uint64(int(seed) & _MASK64)
        with np.errstate(over="ignore"):
            state = _splitmix64(base + lanes * _GOLDEN)
        state[state == 0] = _GOLDEN  # zero is a fixed point
        self.state = state

    def next_uint64(self, lanes=None):
        x = self.state if lanes is None else self.state[lanes]
        x ^= x >> np.uint64(12)
        x ^= x << np.uint64(25)
        x ^= x >> np.uint64(27)
        if lanes is None:
            self.state = x
        else:
            self.state[lanes] = x
        with np.errstate(over="ignore"):
            return x * _STAR

    def random(self, lanes=None):
        """Uniforms in ``[0, 1)`` with 53 random bits, one per (selected) lane."""
        return (self.next_uint64(lanes) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


class _Sampler:
    """Inverse-CDF transitions for a transition tensor, vectorized over lanes."""

    def __init__(self, P):
        self.n = P.shape[0]
        self.m = P.ndim
        cols = mode1_matricize(P)
        cum = np.cumsum(cols, axis=0)
        # states after the last positive one are unreachable; pinning their
        # cumulative sum to 1 lets the last positive state absorb rounding
        last = self.n - 1 - np.argmax(cols[::-1] > 0, axis=0)
        rows = np.arange(self.n)[:, None]
        cum[rows >= last[None, :]] = 1.0
        self.cum = np.ascontiguousarray(cum[:-1])
        self.wrap = self.n ** (self.m - 2)

    def column(self, history0):
        """Linear 0-based column of 0-based histories given as (m-1, lanes)."""
        col = np.zeros(history0.shape[1], dtype=np.int64)
        for k in range(history0.shape[0] - 1, -1, -1):
            col = col * self.n + history0[k]
        return col

    def step(self, col, u):
        nxt = np.zeros(col.shape, dtype=np.int64)
        for row in self.cum:
            nxt += row.take(col) <= u
        return nxt, nxt + self.n * (col % self.wrap)


def _check_history(P, history):
    history = tuple(int(i) for i in history)
    n, m = P.shape[0], P.ndim
    if len(history) != m - 1:
        raise ValueError(f"history must have {m - 1} states, got {history}")
    if any(not 1 <= i <= n for i in history):
        raise ValueError(f"history {history} has states outside [1, {n}]")
    return history


@dataclass(frozen=True)
class Trajectory:
    """States visited after ``history`` (most recent state first), 1-based."""

    history: Tuple[int, ...]
    states: np.ndarray = field(repr=False)
    seed: int


def sample_trajectory(P, history, length, seed):
    P = check_transition_tensor(P)
    history = _check_history(P, history)
    length = int(length)
    if length < 1:
        raise ValueError("length must be at least 1")
    sampler = _Sampler(P)
    rng = Xorshift64Star(seed, 1)
    col = sampler.column(np.array(history, dtype=np.int64)[:, None] - 1)
    states = np.empty(length, dtype=np.int64)
    for t in range(length):
        nxt, col = sampler.step(col, rng.random())
        states[t] = nxt[0] + 1
    states.setflags(write=False)
    return Trajectory(history=history, states=states, seed=int(seed))


def _run_lanes(P, history, samples, seed, offset, horizon, targets_done):
    """Advance ``samples`` lanes from ``history`` until ``targets_done`` says stop.

    ``targets_done(step, states, lane_ids)`` sees the 0-based states just
    entered by the active lanes and returns a mask of lanes to retire.
    """
    sampler = _Sampler(P)
    rng = Xorshift64Star(seed, samples, offset)
    h0 = np.repeat(np.array(history, dtype=np.int64)[:, None] - 1, samples, axis=1)
    col = sampler.column(h0)
    lanes = np.arange(samples)
    subset = None  # None while every lane is still running
    for step in range(1, horizon + 1):
        u = rng.random(subset)
        nxt, col = sampler.step(col, u)
        done = targets_done(step, nxt, lanes)
        if done.any():
            keep = ~done
            lanes, col = lanes[keep], col[keep]
            subset = lanes
            if lanes.size == 0:
                break


def first_passage_times(P, history, samples, seed, horizon, offset=0):
    """First arrival step at every state, for ``samples`` runs from ``history``.

    Returns an ``(n, samples)`` integer array; censored runs hold 0.
    """
    P = check_transition_tensor(P)
    history = _check_history(P, history)
    n = P.shape[0]
    eta = np.zeros(n * samples, dtype=np.int64)
    missing = np.full(samples, n)

    def visit(step, states, lanes):
        flat = states * samples + lanes
        fresh = eta.take(flat) == 0
        if not fresh.any():
            return fresh
        eta[flat[fresh]] = step
        missing[lanes[fresh]] -= 1
        return missing.take(lanes) == 0

    _run_lanes(P, history, samples, seed, offset, int(horizon), visit)
    return eta.reshape(n, samples)


def _states_at(P, history, steps, samples, seed, offset=0):
    P = check_transition_tensor(P)
    history = _check_history(P, history)
    final = np.zeros(samples, dtype=np.int64)

    def record(step, states, lanes):
        if step == steps:
            final[lanes] = states
            return np.ones(lanes.size, dtype=bool)
        return np.zeros(lanes.size, dtype=bool)

    _run_lanes(P, history, samples, seed, offset, int(steps), record)
    return final


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo estimate with its standard error.

    ``censored`` counts runs that hit the horizon first; they are excluded
    from MFPT means and the estimate is flagged unreliable above 1 %.
    """

    value: np.ndarray
    stderr: np.ndarray
    samples: int
    seed: int
    censored: int = 0

    @property
    def censored_fraction(self):
        return self.censored / self.samples

    @property
    def reliable(self):
        return self.censored_fraction <= 0.01

    def within(self, expected, n_se=4.0, atol=1e-12):
        return np.abs(np.asarray(self.value) - expected) <= n_se * np.asarray(self.stderr) + atol


def _binomial(hits, samples):
    p = hits / samples
    return p, np.sqrt(p * (1.0 - p) / samples)


def _split_tuple(P, t):
    t = tuple(int(i) for i in t)
    if len(t) != P.ndim:
        raise ValueError(f"tuple {t} must have {P.ndim} components")
    return t[0], t[1:]


def estimate_kstep(P, t, k, samples, seed):
    P = check_transition_tensor(P)
    target, history = _split_tuple(P, t)
    final = _states_at(P, history, int(k), samples, seed)
    value, se = _binomial(np.count_nonzero(final == target - 1), samples)
    return Estimate(value, se, samples, int(seed))


def estimate_ever_reach(P, t, samples, seed, horizon=1000):
    P = check_transition_tensor(P)
    target, history = _split_tuple(P, t)
    eta = first_passage_times(P, history, samples, seed, horizon)[target - 1]
    value, se = _binomial(np.count_nonzero(eta), samples)
    return Estimate(value, se, samples, int(seed))


def _mean_passage(eta, samples, seed):
    hit = eta[eta > 0].astype(float)
    censored = samples - hit.size
    if hit.size == 0:
        return Estimate(np.nan, np.nan, samples, int(seed), censored)
    se = hit.std(ddof=1) / np.sqrt(hit.size) if hit.size > 1 else 0.0
    return Estimate(hit.mean(), se, samples, int(seed), censored)


def estimate_mfpt(P, t, samples, seed, horizon=10**6):
    P = check_transition_tensor(P)
    target, history = _split_tuple(P, t)
    eta = first_passage_times(P, history, samples, seed, horizon)[target - 1]
    return _mean_passage(eta, samples, seed)


def estimate_occupancy(P, t_max, samples, seed, history=None):
    """Distribution of the state occupied at step ``t_max``.

    Runs start from ``history`` (default: every state 1). The returned value
    and standard error are length-``n`` vectors.
    """
    P = check_transition_tensor(P)
    n = P.shape[0]
    if history is None:
        history = (1,) * (P.ndim - 1)
    final = _states_at(P, history, int(t_max), samples, seed)
    value, se = _binomial(np.bincount(final, minlength=n).astype(float), samples)
    return Estimate(value, se, samples, int(seed))


def estimate(P, quantity, samples, seed, **kw):
    """Dispatch on ``quantity`` in ``{"kstep", "ever_reach", "mfpt", "occupancy"}``."""
    funcs = {
        "kstep": estimate_kstep,
        "ever_reach": estimate_ever_reach,
        "mfpt": estimate_mfpt,
        "occupancy": estimate_occupancy,
    }
    try:
        func = funcs[quantity]
    except KeyError:
        raise ValueError(f"unknown quantity {quantity!r}; choose from {sorted(funcs)}") from None
    return func(P, samples=samples, seed=seed, **kw)


def passage_estimates(P, history, samples, seed, horizon, offset=0):
    """Ever-reaching and MFPT estimates for every target from one history.

    Returns ``(reach, mfpt)``, two :class:`Estimate` objects with
    length-``n`` value vectors.
    """
    eta = first_passage_times(P, history, samples, seed, horizon, offset)
    n = eta.shape[0]
    reach_v, reach_se = _binomial(np.count_nonzero(eta, axis=1).astype(float), samples)
    parts = [_mean_passage(eta[i], samples, seed) for i in range(n)]
    mfpt = Estimate(
        np.array([p.value for p in parts]),
        np.array([p.stderr for p in parts]),
        samples,
        int(seed),
        max(p.censored for p in parts),
    )
    return Estimate(reach_v, reach_se, samples, int(seed)), mfpt
