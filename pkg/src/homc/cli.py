"""Command-line interface: ``homc <command> [options]``.

Exit codes: 0 on success, 1 when the chain itself defeats the request
(non-ergodic, no convergence), 2 on bad input.
"""

import argparse
import sys

import numpy as np

from . import __version__
from .exceptions import DomainError, InputError
from .io import dumps_report, load_chain, make_report, to_jsonable
from .limiting import limit_via_powers, limiting_distribution, stationary_distribution
from .mfpt import mfpt_residual, solve_mfpt
from .passage import ever_reaching, kstep, return_sum_partial
from .reduction import export_dot, reduce_chain
from .simulate import estimate
from .structure import analyze_chain, classify_states, is_irreducible, verify_class_consistency
from .tensor import tuples
from .validation import validate_stochastic

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT = 0, 1, 2


def _tuple(text):
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated states, got {text!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-12, help="series truncation tolerance (default 1e-12)")
    common.add_argument("--kmax", type=int, default=100_000, help="maximum series terms or powers (default 100000)")
    common.add_argument("--output", "-o", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")

    parser = argparse.ArgumentParser(prog="homc", description="Analyze higher-order Markov chains.")
    parser.add_argument("--version", action="version", version=f"homc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def chain_cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("chain", help="chain-spec JSON file")
        return p

    chain_cmd("validate", "check that a chain file holds a stochastic tensor")
    p = chain_cmd("reduce", "build the reduced first-order chain")
    p.add_argument("--dot", metavar="PATH", help="also write the reduced chain digraph in DOT format")
    chain_cmd("analyze", "irreducibility, ergodicity and regularity")
    chain_cmd("classify", "classify states and list communication classes")
    chain_cmd("everreach", "ever-reaching probabilities")
    p = chain_cmd("kstep", "k-step transition tensor")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tuple", type=_tuple, help="report only this entry, e.g. 2,1,1")
    chain_cmd("mfpt", "mean first passage time tensor")
    p = chain_cmd("limit", "limiting probability distribution")
    p.add_argument("--method", choices=("stationary", "powers"), default="stationary")
    p.add_argument("--stationary-method", choices=("cesaro", "nullspace"), default="cesaro")
    p = chain_cmd("returnsum", "partial sums of return probabilities")
    p.add_argument("--state", type=int, required=True)
    p.add_argument("--tail", type=_tuple, default=(), help="history tail i3,...,im")
    p.add_argument("--K", type=int, default=200)
    p = chain_cmd("simulate", "Monte Carlo estimate of a chain quantity")
    p.add_argument("--quantity", choices=("kstep", "ever_reach", "mfpt", "occupancy"), required=True)
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tuple", type=_tuple, help="target tuple (i1, ..., im) for kstep/ever_reach/mfpt")
    p.add_argument("--k", type=int, help="steps for kstep")
    p.add_argument("--horizon", type=int, help="step cap for ever_reach (default 1000) and mfpt (default 1e6)")
    p.add_argument("--t-max", type=int, default=1000, help="steps for occupancy")

    p = sub.add_parser("examples", parents=[common], help="built-in example chains")
    p.add_argument("action", choices=("list", "run"))
    p.add_argument("name", nargs="?")
    p.add_argument("--all", action="store_true", help="run every acceptance criterion")
    return parser


def _settings(args, **extra):
    out = {"tol": args.tol, "kmax": args.kmax}
    out.update(extra)
    return out


def _text(report):
    lines = [f"homc {report['command']}"]

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}{k}.", v)
        elif isinstance(value, list) and value and isinstance(value[0], list):
            lines.append(f"{prefix[:-1]} = {np.array(value, dtype=object).tolist()}")
        else:
            lines.append(f"{prefix[:-1]} = {value}")

    walk("", {"chain": report["chain"], "settings": report["settings"], "result": report["result"]})
    return "\n".join(lines) + "\n"


def _emit(args, report, stdout):
    text = dumps_report(report) if args.format == "json" else _text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _cmd_validate(args, P):
    verdict = validate_stochastic(P)
    return {"stochastic": verdict.ok, "tail": verdict.tail, "reason": verdict.reason}, {}


def _cmd_reduce(args, P):
    red = reduce_chain(P)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(export_dot(red))
    irr = is_irreducible(red.Q) if red.N <= 16 else None
    result = {
        "N": red.N,
        "labels": list(red.labels),
        "Q": red.Q,
        "irreducible": None if irr is None else irr.irreducible,
        "ergodic": analyze_chain(red.Q).ergodic == "yes",
    }
    return result, {"dot": args.dot}


def _cmd_analyze(args, P):
    a = analyze_chain(P)
    result = {
        "irreducible": a.irreducible,
        "irreducible_witness": a.irreducible_witness,
        "ergodic": {"yes": True, "no": False}.get(a.ergodic),
        "ergodic_witness": a.ergodic_witness,
        "regularity_index": a.regularity_index,
    }
    return result, {"horizon": a.horizon}


def _cmd_classify(args, P):
    rep = ever_reaching(P, args.tol, args.kmax)
    cl = classify_states(P, rep)
    states = [
        {
            "state": s.state,
            "label": s.label,
            "recurrent": s.recurrent,
            "transient": s.transient,
            "fully_transient": s.fully_transient,
            "absorbing": s.absorbing,
            "return_probabilities": s.return_probabilities,
        }
        for s in cl.states
    ]
    result = {
        "states": states,
        "reachability": cl.reachability,
        "classes": cl.classes,
        "class_consistency": verify_class_consistency(cl),
    }
    return result, {"series_terms": rep.n_terms, "converged": rep.converged}


def _cmd_everreach(args, P):
    rep = ever_reaching(P, args.tol, args.kmax)
    result = {
        "F": rep.F,
        "terms": rep.n_terms,
        "stop_reason": rep.stop_reason,
        "last_increment": rep.last_increment,
        "max_residual": float(np.max(rep.residual)),
    }
    return result, {}


def _cmd_kstep(args, P):
    if args.tuple:
        return {"tuple": args.tuple, "k": args.k, "p": kstep(P, args.k, args.tuple)}, {}
    return {"k": args.k, "P_k": kstep(P, args.k)}, {}


def _cmd_mfpt(args, P):
    mu = solve_mfpt(P)
    return {"mu": mu, "residual": mfpt_residual(P, mu)}, {}


def _cmd_limit(args, P):
    if args.method == "powers":
        lim = limit_via_powers(P, kmax=args.kmax)
        return {"pi": lim.pi, "method": "powers", "steps": lim.n_steps, "spread": lim.spread}, {}
    xi = stationary_distribution(reduce_chain(P), args.stationary_method)
    pi = limiting_distribution(P, xi).pi
    a = analyze_chain(P)
    result = {
        "pi": pi,
        "method": "stationary",
        "stationary_method": xi.method,
        "stationary_residual": xi.residual,
        "regularity_index": a.regularity_index,
    }
    return result, {}


def _cmd_returnsum(args, P):
    d = return_sum_partial(P, args.state, args.tail, args.K)
    return {"state": d.state, "tail": d.tail, "partial_sums": d.partial_sums, "verdict": d.verdict}, {}


def _cmd_simulate(args, P):
    kw = {}
    q = args.quantity
    if q in ("kstep", "ever_reach", "mfpt"):
        if not args.tuple:
            raise InputError(f"--tuple is required for quantity {q}")
        kw["t"] = args.tuple
    if q == "kstep":
        if args.k is None:
            raise InputError("--k is required for quantity kstep")
        kw["k"] = args.k
    if q in ("ever_reach", "mfpt") and args.horizon is not None:
        kw["horizon"] = args.horizon
    if q == "occupancy":
        kw["t_max"] = args.t_max
    try:
        est = estimate(P, q, args.samples, args.seed, **kw)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = {
        "quantity": q,
        "value": est.value,
        "stderr": est.stderr,
        "censored": est.censored,
        "reliable": est.reliable,
    }
    return result, {"samples": args.samples, "seed": args.seed, **{k: v for k, v in kw.items() if k != "t"}}


COMMANDS = {
    "validate": _cmd_validate,
    "reduce": _cmd_reduce,
    "analyze": _cmd_analyze,
    "classify": _cmd_classify,
    "everreach": _cmd_everreach,
    "kstep": _cmd_kstep,
    "mfpt": _cmd_mfpt,
    "limit": _cmd_limit,
    "returnsum": _cmd_returnsum,
    "simulate": _cmd_simulate,
}


def _fmt_slices(T):
    lines = []
    for k in range(T.shape[2]):
        rows = "; ".join(" ".join(f"{x:.6g}" for x in row) for row in T[:, :, k])
        lines.append(f"    [:, :, {k + 1}] = [{rows}]")
    return lines


def _examples(args, stdout):
    from .acceptance import CRITERIA, run_criterion
    from .fixtures import FIXTURES, get_fixture

    if args.action == "list":
        for f in FIXTURES.values():
            P = f.tensor
            stdout.write(f"{f.name}\tm={P.ndim} n={P.shape[0]}\t{f.title}\n")
        return EXIT_OK
    if args.all:
        numbers = list(CRITERIA)
    elif args.name:
        try:
            numbers = [get_fixture(args.name).criterion]
        except KeyError as exc:
            stdout.write(f"error: {exc.args[0]}\n")
            return EXIT_INPUT
    else:
        stdout.write("error: give an example name or --all\n")
        return EXIT_INPUT
    ok_all = True
    for num in numbers:
        title, ok, checks = run_criterion(num)
        ok_all &= ok
        stdout.write(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title}\n")
        for c in checks:
            stdout.write(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}: {c.detail}\n")
        if args.name and not args.all:
            fx = get_fixture(args.name)
            if "F" in fx.expected:
                stdout.write("  expected F:\n" + "\n".join(_fmt_slices(fx.expected["F"])) + "\n")
                computed = ever_reaching(fx.tensor, args.tol, args.kmax).F
                stdout.write("  computed F:\n" + "\n".join(_fmt_slices(computed)) + "\n")
    return EXIT_OK if ok_all else EXIT_DOMAIN


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "examples":
            return _examples(args, stdout)
        P = load_chain(args.chain)
        result, extra = COMMANDS[args.command](args, P)
        report = make_report(args.command, P, _settings(args, **extra), result, source=args.chain)
        _emit(args, report, stdout)
        if args.command == "validate" and not result["stochastic"]:
            return EXIT_INPUT
        return EXIT_OK
    except InputError as exc:
        stderr.write(f"homc: input error: {exc}\n")
        return EXIT_INPUT
    except DomainError as exc:
        stderr.write(f"homc: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    except (OSError, ValueError) as exc:
        stderr.write(f"homc: input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
