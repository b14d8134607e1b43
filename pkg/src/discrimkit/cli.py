"""Command line front end.

Exit codes: 0 success, 1 domain or resource error, 2 input validation error.
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import channels as ch
from . import helstrom as hl
from . import multicopy as mc
from . import operators as ops
from . import strategies as st
from .errors import DomainError, ResourceError, ValidationError
from .problem import ProblemFile, encode_density, encode_matrix, load_problem, resolve_channel, resolve_pure, resolve_state

STRATEGIES = {"fixed": "fixed_individual", "adaptive": "adaptive_local", "collective": "collective"}


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return f"{v:.6g}"
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(float(x)) for x in v) + "]"
    return str(v)


def _json_default(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    raise TypeError(f"not JSON serializable: {type(v).__name__}")


def _json_value(v):
    # JSON has no infinity; the disjoint-support sentinel is spelled out
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def render(rows, fmt, payload=None, title=None):
    """Rows of ``(name, value)`` as a table or CSV; ``payload`` as JSON."""
    if fmt == "json":
        body = payload if payload is not None else {k: v for k, v in rows}
        body = {k: _json_value(v) for k, v in body.items()}
        return json.dumps(body, indent=2, default=_json_default) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "value"])
        for k, v in rows:
            if isinstance(v, (list, tuple, np.ndarray)):
                v = " ".join(repr(float(x)) for x in v)
            elif isinstance(v, float):
                v = "inf" if math.isinf(v) else repr(v)
            w.writerow([k, v])
        return buf.getvalue()
    width = max(len(k) for k, _ in rows)
    lines = [title] if title else []
    lines += [f"{k.ljust(width)}  {_fmt(v)}" for k, v in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _problem(args):
    return load_problem(args.problem) if args.problem else None


def _priors(args, problem):
    if args.prior0 is not None:
        p0 = args.prior0
        if not 0.0 <= p0 <= 1.0:
            raise ValidationError(f"--prior0 must lie in [0, 1], got {p0}")
        return p0
    if problem is not None and problem.priors is not None:
        return problem.priors[0]
    return 0.5


def _ensemble(args, problem):
    rho0 = resolve_state(args.state0, problem)
    rho1 = resolve_state(args.state1, problem)
    return hl.BinaryEnsemble(rho0, rho1, _priors(args, problem))


def _as_pure(name, problem):
    try:
        return resolve_pure(name, problem)
    except ValidationError:
        rho = resolve_state(name, problem)
    sd = ops.spectral_decompose(rho)
    if np.sum(sd.eigenvalues > sd.cutoff()) != 1:
        raise DomainError(f"state {name!r} is mixed; unambiguous discrimination needs pure states")
    return sd.eigenvectors[:, 0]


def _echo(names, states, priors=None):
    return ProblemFile(states=dict(zip(names, states)), priors=priors).to_json()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_discriminate(args, out):
    problem = _problem(args)
    if args.unambiguous:
        p0 = _priors(args, problem)
        psi0 = _as_pure(args.state0, problem)
        psi1 = _as_pure(args.state1, problem)
        res = hl.unambiguous_discrimination(psi0, psi1, p0)
        rows = [
            ("prior0", p0),
            ("q0", res.q0),
            ("q1", res.q1),
            ("inconclusive_probability", res.inconclusive_probability),
            ("clamped", res.clamped),
        ]
        payload = dict(rows)
        payload["povm"] = [encode_matrix(e) for e in res.povm.elements]
        payload["problem"] = _echo(
            [args.state0, args.state1],
            [ops.pure_to_density(psi0), ops.pure_to_density(psi1)],
            (p0, 1.0 - p0),
        )
        out.write(render(rows, args.format, payload, "unambiguous discrimination"))
        return 0

    ens = _ensemble(args, problem)
    res = hl.optimal_discrimination(ens)
    e0, e1 = res.povm.elements
    rows = [
        ("prior0", ens.prior0),
        ("error_probability", res.error_probability),
        ("type1_error", res.type1_error),
        ("type2_error", res.type2_error),
        ("gamma_eigenvalues", res.gamma_eigenvalues),
        ("rank_E0", int(round(np.trace(e0).real))),
        ("rank_E1", int(round(np.trace(e1).real))),
    ]
    payload = dict(rows)
    payload["povm"] = [encode_matrix(e0), encode_matrix(e1)]
    payload["problem"] = _echo([args.state0, args.state1], [ens.rho0, ens.rho1], (ens.prior0, ens.prior1))
    out.write(render(rows, args.format, payload, "minimum-error discrimination"))
    return 0


def cmd_bounds(args, out):
    problem = _problem(args)
    ens = _ensemble(args, problem)
    rep = mc.bound_report(ens, args.copies, require_exact=not args.no_exact)
    rows = rep.rows()
    payload = rep.as_dict()
    payload["problem"] = _echo([args.state0, args.state1], [ens.rho0, ens.rho1], (ens.prior0, ens.prior1))
    out.write(render(rows, args.format, payload, f"{args.copies}-copy error bounds"))
    return 0


def cmd_simulate(args, out):
    problem = _problem(args)
    ens = _ensemble(args, problem)
    kind = STRATEGIES[args.strategy]
    povm = None
    if args.povm is not None and kind != "fixed_individual":
        raise DomainError(f"--povm only applies to the fixed strategy, not {args.strategy}")
    if kind == "fixed_individual":
        if args.povm in (None, "support"):
            povm = st.support_projector_povm(ens.rho0)
        else:
            povm = hl.optimal_discrimination(ens).povm
    spec = st.StrategySpec(kind, args.copies, povm)
    config = st.SimulationConfig(ens, args.trials, args.seed)
    rep = st.simulate(spec, config, threads=args.threads)
    rows = [
        ("strategy", rep.strategy),
        ("copies", rep.m_copies),
        ("trials", rep.trials),
        ("seed", rep.seed),
        ("errors", rep.errors),
        ("empirical_error", rep.empirical_error),
        ("standard_error", rep.standard_error),
        ("analytic_error", rep.analytic_error),
    ]
    payload = rep.as_dict()
    payload["problem"] = _echo([args.state0, args.state1], [ens.rho0, ens.rho1], (ens.prior0, ens.prior1))
    title = f"simulation: {rep.empirical_error:.6g} +/- {rep.standard_error:.6g}"
    out.write(render(rows, args.format, payload, title))
    return 0


def cmd_channel(args, out):
    problem = _problem(args)
    phi0 = resolve_channel(args.channel0, problem)
    phi1 = resolve_channel(args.channel1, problem)
    cfg = ch.SearchConfig(starts=args.starts, seed=args.search_seed, threads=args.threads)
    if args.probe == "search":
        res = ch.best_unentangled_probe(phi0, phi1, cfg)
        desc = "search (heuristic lower bound)"
    elif args.probe == "entangled-search":
        res = ch.best_entangled_probe(phi0, phi1, args.ancilla_dim, cfg)
        desc = "entangled-search (heuristic lower bound on the diamond norm)"
    else:
        probe = resolve_state(args.probe, problem)
        d = phi0.dim_in
        extended = probe.shape[0] != d
        dims = None
        if extended:
            db = args.ancilla_dim or probe.shape[0] // d
            dims = (d, db)
        res = ch.discriminate_with_probe(phi0, phi1, probe, extended, dims)
        desc = args.probe
    rows = [
        ("probe", desc),
        ("error_probability", res.error_probability),
        ("trace_norm", res.norm),
        ("used_ancilla", res.used_ancilla),
        ("heuristic", res.heuristic),
    ]
    payload = dict(rows)
    payload["probe_state"] = encode_density(res.probe)
    payload["problem"] = ProblemFile(channels={args.channel0: phi0, args.channel1: phi1}).to_json()
    out.write(render(rows, args.format, payload, "channel discrimination"))
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser():
    parser = argparse.ArgumentParser(
        prog="discrimkit", description="Discrimination of quantum states and channels."
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", help="JSON problem file with named states/channels")
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")

    states = argparse.ArgumentParser(add_help=False)
    states.add_argument("state0", help="state name (builtin or from --problem)")
    states.add_argument("state1")
    states.add_argument("--prior0", type=float, default=None)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discriminate", parents=[common, states], help="single-copy discrimination")
    p.add_argument("--unambiguous", action="store_true", help="zero-error scheme (pure states)")
    p.set_defaults(func=cmd_discriminate)

    p = sub.add_parser("bounds", parents=[common, states], help="M-copy error and bounds")
    p.add_argument("--copies", type=_positive_int, required=True)
    p.add_argument("--no-exact", action="store_true", help="skip the dense tensor-power error")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", parents=[common, states], help="Monte Carlo strategy simulation")
    p.add_argument("--strategy", choices=sorted(STRATEGIES), required=True)
    p.add_argument("--copies", type=_positive_int, required=True)
    p.add_argument("--trials", type=_positive_int, default=100000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument(
        "--povm",
        choices=("support", "helstrom"),
        default=None,
        help="per-copy POVM for the fixed strategy (default: support projector of state0)",
    )
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("channel", parents=[common], help="channel discrimination")
    p.add_argument("channel0")
    p.add_argument("channel1")
    p.add_argument("--probe", default="search", help="state name, 'search' or 'entangled-search'")
    p.add_argument("--ancilla-dim", type=_positive_int, default=None)
    p.add_argument("--starts", type=_positive_int, default=32)
    p.add_argument("--search-seed", type=_seed, default=0)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.set_defaults(func=cmd_channel)
    return parser


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ValidationError as exc:
        err.write(f"error: {exc}\n")
        return 2
    except (DomainError, ResourceError) as exc:
        err.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
