"""Acceptance checks: the built-in examples plus property and Monte Carlo suites.

Each ``criterion_N`` function returns a list of :class:`Check` results.
"""

from typing import NamedTuple

import numpy as np

from .exceptions import NonErgodicChain, NotConverged
from .fixtures import FIXTURES, get_fixture
from .limiting import (
    limit_via_powers,
    limiting_distribution,
    stationary_distribution,
    stationary_residual,
)
from .mfpt import mfpt_reduced, solve_mfpt
from .passage import ever_reaching, iter_powers, return_sum_partial
from .reduction import ReducedChain, export_dot, reachable_states, recover_kstep, reduce_chain
from .simulate import estimate_occupancy, passage_estimates
from .structure import (
    analyze_chain,
    classify_states,
    is_irreducible,
    verify_class_consistency,
)
from .tensor import (
    _boxtimes,
    boxtimes,
    identity_tensor,
    random_stochastic_tensor,
    tensor_power,
    tuples,
)
from .validation import validate_stochastic


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ""


def _close(name, actual, expected, tol):
    err = float(np.max(np.abs(np.asarray(actual, dtype=float) - np.asarray(expected, dtype=float))))
    return Check(name, err <= tol, f"max error {err:.3g} (tol {tol:g})")


def _truth(name, value, detail=""):
    return Check(name, bool(value), detail)


def _raises(name, exc, func, *args, **kw):
    try:
        func(*args, **kw)
    except exc as e:
        return Check(name, True, f"raised {type(e).__name__}")
    return Check(name, False, f"did not raise {exc.__name__}")


# -- worked examples -----------------------------------------------------------


def criterion_1():
    fx = get_fixture("s4_irreducible_not_ergodic")
    P = fx.tensor
    a = analyze_chain(P)
    out = [
        _truth("irreducible", a.irreducible is True, f"irreducible={a.irreducible}"),
        _truth("not ergodic", a.ergodic == "no", f"ergodic={a.ergodic}"),
        _truth("regularity absent", a.regularity_index is None, f"index={a.regularity_index}"),
    ]
    w = a.ergodic_witness
    idx = tuple(i - 1 for i in w) if w else None
    zero = idx is not None and all(Pk[idx] == 0 for Pk, _ in zip(iter_powers(P), range(50)))
    out.append(_truth("witness stays zero for k = 1..50", zero, f"witness={w}"))
    state2 = all(np.all(Pk[1] == 0) for k, Pk in zip(range(1, 51), iter_powers(P)) if k >= 2)
    out.append(_truth("p^(k)[2, :, :] = 0 for k = 2..50", state2))
    out.append(_raises("MFPT system singular", NonErgodicChain, solve_mfpt, P))
    out.append(_raises("powers do not converge", NotConverged, limit_via_powers, P, kmax=2000))
    return out


def criterion_2():
    fx = get_fixture("s4_regular_reducible")
    P = fx.tensor
    a = analyze_chain(P)
    red = reduce_chain(P)
    row = red.labels.index(fx.expected["zero_row_label"])
    dot = export_dot(red)
    label = fx.expected["zero_row_label"]
    return [
        _truth("regularity index 2", a.regularity_index == 2, f"index={a.regularity_index}"),
        _truth("ergodic", a.ergodic == "yes"),
        _close("reduced matrix", red.Q, fx.expected["Q"], 0.0),
        _truth("zero row at state 31", np.all(red.Q[row] == 0.0), f"row {row + 1}"),
        _truth("reduced chain reducible", not is_irreducible(red.Q).irreducible),
        _truth("no DOT edge into 31", f'-> "{label}"' not in dot),
    ]


def criterion_3():
    fx = get_fixture("s4_four_state")
    P = fx.tensor
    pi_true = fx.expected["pi"]
    a = analyze_chain(P)
    rep = ever_reaching(P)
    red = reduce_chain(P)
    z = fx.expected["z"]
    xi1 = stationary_distribution(red, "cesaro")
    xi2 = stationary_distribution(red, "nullspace")
    pis = [limiting_distribution(P, x).pi for x in (xi1, xi2)]
    rng = np.random.default_rng(7)
    for w in rng.random(5):
        pis.append(limiting_distribution(P, w * xi1.xi + (1 - w) * xi2.xi).pi)
    spread = max(float(np.max(np.abs(p - pis[0]))) for p in pis)
    distinct = float(np.max(np.abs(xi1.xi - xi2.xi)))
    lab = red.labels
    reach12 = reachable_states(red, lab.index("12"))
    return [
        _truth("regularity index <= 10", a.regularity_index is not None and a.regularity_index <= 10,
               f"index={a.regularity_index}"),
        _close("ever-reaching all ones", rep.F, 1.0, 1e-9),
        Check("z stationary", bool(stationary_residual(red, z) <= 1e-10 and z.min() >= 0 and abs(z.sum() - 1) < 1e-12),
              f"residual {stationary_residual(red, z):.3g}"),
        _close("pi from z", limiting_distribution(P, z).pi, pi_true, 1e-9),
        _close("pi from powers", limit_via_powers(P).pi, pi_true, 1e-8),
        Check("two distinct stationary vectors", distinct > 1e-6 and xi1.residual <= 1e-10 and xi2.residual <= 1e-10,
              f"distance {distinct:.3g}"),
        Check("pi invariant over stationary set", spread <= 1e-8, f"spread {spread:.3g}"),
        _close("pi from computed stationary vector", pis[0], pi_true, 1e-9),
        _truth("reduced chain reducible", not is_irreducible(red.Q).irreducible),
        _truth("11 unreachable from 12 in reduced chain", lab.index("11") not in reach12),
        _truth("f_112 = 1", abs(rep.F[0, 0, 1] - 1.0) <= 1e-9, f"f_112={rep.F[0, 0, 1]!r}"),
    ]


def _f_check(fx, rep):
    return _close("F matches expected slices", rep.F, fx.expected["F"], 1e-9)


def criterion_4():
    fx = get_fixture("s5_no_recurrent")
    P = fx.tensor
    rep = ever_reaching(P)
    cl = classify_states(P, rep)
    div = [return_sum_partial(P, 1, (t,), 200).verdict for t in range(1, 4)]
    conv = [return_sum_partial(P, 3, (t,), 200).verdict for t in range(1, 4)]
    return [
        _f_check(fx, rep),
        _truth("no recurrent state", not cl.recurrent_states(), f"labels={cl.labels}"),
        _truth("return sums (1,1,.) diverging", all(v == "diverging" for v in div), str(div)),
        _truth("return sums (3,3,.) converging", all(v == "converging" for v in conv), str(conv)),
        _truth("class consistency", verify_class_consistency(cl)),
    ]


def criterion_5():
    fx = get_fixture("s5_two_state")
    P = fx.tensor
    rep = ever_reaching(P)
    cl = classify_states(P, rep)
    R = cl.reachability
    zeros = all(Pk[1, 0, 0] == 0.0 for Pk, _ in zip(iter_powers(P), range(50)))
    return [
        _f_check(fx, rep),
        _truth("both states recurrent", cl.recurrent_states() == [1, 2], f"labels={cl.labels}"),
        _truth("2 -> 1", R[1, 0]),
        _truth("1 does not reach 2", not R[0, 1]),
        _truth("p^(k)_211 = 0 exactly for k = 1..50", zeros),
    ]


def criterion_6():
    fx = get_fixture("s5_class_mixed")
    P = fx.tensor
    rep = ever_reaching(P)
    cl = classify_states(P, rep)
    s1, s3 = cl[1], cl[3]
    same = any(1 in c and 3 in c for c in cl.classes)
    return [
        _f_check(fx, rep),
        _truth("state 1 transient, not fully", s1.transient and not s1.fully_transient, s1.label),
        _truth("state 3 recurrent", s3.recurrent, s3.label),
        _truth("1 <-> 3 share a class", same, f"classes={cl.classes}"),
        _truth("class consistency", verify_class_consistency(cl)),
    ]


def criterion_7():
    fx = get_fixture("s6_uniform")
    P = fx.tensor
    mu = solve_mfpt(P)
    M = mfpt_reduced(reduce_chain(P)).M
    return [
        _close("mu == 3", mu, fx.expected["mu"], 1e-9),
        _close("reduced MFPT matrix", M, fx.expected["M"], 1e-9),
        _close("M_11, M_21, M_12", [M[0, 0], M[1, 0], M[0, 1]], [9, 6, 12], 1e-9),
        _truth("M_11 differs from mu_111", abs(M[0, 0] - mu[0, 0, 0]) > 1),
    ]


# -- random and property suites ------------------------------------------------


def criterion_8(n_chains=20, seed=8):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for c in range(n_chains):
        P = random_stochastic_tensor(4, 2 + c % 2, rng)
        powers = iter_powers(P)
        next(powers)
        for k, Pk in zip(range(2, 7), powers):
            worst = max(worst, float(np.max(np.abs(recover_kstep(P, k) - Pk))))
    return [Check(f"k-step recovery from Q^k on {n_chains} chains, k = 2..6", worst <= 1e-12,
                  f"max error {worst:.3g} (tol 1e-12)")]


def _random_shapes():
    return [(m, n) for m in (2, 3, 4) for n in (2, 3, 4)]


def _sparse_chains(count, seed, m=3, n=3):
    rng = np.random.default_rng(seed)
    return [random_stochastic_tensor(m, n, rng, density=rng.uniform(0.25, 0.6)) for _ in range(count)]


def _absorbing_chains(count, seed, m=3, n=3):
    rng = np.random.default_rng(seed)
    out = []
    for c in range(count):
        P = np.array(random_stochastic_tensor(m, n, rng, density=0.5))
        i = c % n
        P[:, i, ...] = 0.0
        P[i, i, ...] = 1.0
        out.append(P)
    return out


def criterion_9(seed=9):
    rng = np.random.default_rng(seed)
    shapes = _random_shapes()
    out = []

    closure = True
    for m, n in shapes:
        A, B = (random_stochastic_tensor(m, n, rng) for _ in range(2))
        closure &= bool(validate_stochastic(boxtimes(A, B), 1e-12))
    out.append(_truth("stochasticity closure of boxtimes", closure))

    left = True
    for i in range(100):
        m, n = shapes[i % len(shapes)]
        A = rng.standard_normal((n,) * m)
        left &= bool(np.array_equal(_boxtimes(identity_tensor(m, n), A), A))
    out.append(_truth("I boxtimes A == A on 100 tensors", left))

    w = np.random.default_rng(2024)
    A = random_stochastic_tensor(3, 3, w)
    right_gap = float(np.max(np.abs(boxtimes(A, identity_tensor(3, 3)) - A)))
    out.append(_truth("stored witness A boxtimes I != A", right_gap > 0, f"gap {right_gap:.3g}"))
    A, B, C = (random_stochastic_tensor(3, 3, w) for _ in range(3))
    assoc_gap = float(np.max(np.abs(boxtimes(boxtimes(A, B), C) - boxtimes(A, boxtimes(B, C)))))
    out.append(_truth("stored non-associativity witness", assoc_gap > 0, f"gap {assoc_gap:.3g}"))
    A, B, C = (rng.standard_normal((4, 4)) for _ in range(3))
    out.append(_close("associativity at m = 2", boxtimes(boxtimes(A, B), C), boxtimes(A, boxtimes(B, C)), 1e-12))

    chains = [f.tensor for f in FIXTURES.values()] + _sparse_chains(20, seed) + _absorbing_chains(5, seed)
    analyses = [analyze_chain(P) for P in chains]
    reports = [ever_reaching(P) for P in chains]
    out.append(_truth("ergodic implies irreducible",
                      all(a.irreducible for a in analyses if a.ergodic == "yes")))
    out.append(_truth("regular implies ergodic",
                      all(a.ergodic == "yes" for a in analyses if a.regularity_index is not None)))
    agree = [(a.ergodic == "yes") == bool(np.all(r.F > 1e-12)) for a, r in zip(analyses, reports)]
    n_erg = sum(a.ergodic == "yes" for a in analyses)
    out.append(_truth("ergodic iff all ever-reaching entries positive", all(agree),
                      f"{n_erg} ergodic of {len(chains)}"))

    mats = [random_stochastic_tensor(2, int(rng.integers(2, 7)), rng, density=rng.uniform(0.2, 0.6))
            for _ in range(50)]
    eq = [is_irreducible(Q).irreducible == (analyze_chain(Q).ergodic == "yes") for Q in mats]
    out.append(_truth("first order: irreducible iff ergodic on 50 matrices", all(eq),
                      f"{sum(is_irreducible(Q).irreducible for Q in mats)} irreducible"))

    absorbing_ok = True
    n_abs = 0
    for P, r in zip(chains, reports):
        for s in classify_states(P, r).states:
            if s.absorbing:
                n_abs += 1
                absorbing_ok &= s.recurrent
    out.append(_truth("absorbing implies recurrent", absorbing_ok and n_abs > 0, f"{n_abs} absorbing states"))

    raised = []
    for f in FIXTURES.values():
        try:
            solve_mfpt(f.tensor)
            raised.append((f.name, False))
        except NonErgodicChain:
            raised.append((f.name, True))
    exact = all(r == (not FIXTURES[name].ergodic) for name, r in raised)
    out.append(_truth("NonErgodicChain exactly on non-ergodic examples", exact,
                      ", ".join(name for name, r in raised if r)))
    return out


# -- Monte Carlo oracle --------------------------------------------------------

MC_SEEDS = tuple(range(101, 121))


def monte_carlo_comparisons(P, seed, samples=10**5, horizon=10**6):
    """Count analytic-vs-simulated agreements within 4 standard errors.

    Compares every ever-reaching probability and mean first passage time
    (one batch of runs per history) and the limiting distribution.
    Returns ``(passed, total, censored)``.
    """
    n, m = P.shape[0], P.ndim
    F = ever_reaching(P).F
    mu = solve_mfpt(P)
    lim = limit_via_powers(P)
    passed = total = censored = 0
    for h, hist in enumerate(tuples(n, m - 1)):
        reach, mfpt = passage_estimates(P, hist, samples, seed, horizon, offset=h * samples)
        cols = (slice(None),) + tuple(i - 1 for i in hist)
        # analytic F carries series truncation error up to the 1e-9 "equals one" level
        passed += int(reach.within(F[cols], atol=1e-9).sum()) + int(mfpt.within(mu[cols]).sum())
        total += 2 * n
        censored += mfpt.censored
    occ = estimate_occupancy(P, lim.n_steps + 20, samples, seed)
    passed += int(occ.within(lim.pi).sum())
    total += n
    return passed, total, censored


def criterion_10(seeds=MC_SEEDS, samples=10**5):
    out = []
    for f in FIXTURES.values():
        if not f.ergodic:
            continue
        passed = total = censored = 0
        for s in seeds:
            p, t, c = monte_carlo_comparisons(f.tensor, s, samples)
            passed, total, censored = passed + p, total + t, censored + c
        rate = passed / total
        out.append(Check(f"Monte Carlo agreement on {f.name}", rate >= 0.99 and censored == 0,
                         f"{passed}/{total} within 4 SE ({rate:.2%}), {censored} censored, {len(seeds)} seeds"))
    return out


CRITERIA = {
    1: ("irreducible but not ergodic example", criterion_1),
    2: ("regular chain with reducible reduction", criterion_2),
    3: ("four-state regular chain", criterion_3),
    4: ("chain without recurrent states", criterion_4),
    5: ("two-state recurrence example", criterion_5),
    6: ("recurrence is not a class property", criterion_6),
    7: ("uniform chain mean first passage times", criterion_7),
    8: ("k-step recovery from the reduced chain", criterion_8),
    9: ("property suites", criterion_9),
    10: ("Monte Carlo oracle", criterion_10),
}


def run_criterion(number):
    title, func = CRITERIA[number]
    checks = func()
    return title, all(c.passed for c in checks), checks
