"""Command-line front end.

Every command prints one JSON report ``{command, result, timings, version,
config}``. Exit codes: 0 ok, 1 a checked claim failed, 2 bad input,
3 internal error, 4 budget exceeded.
"""
import argparse
import json
import logging
import os
import sys
import time
from contextlib import contextmanager

from . import __version__
from .errors import BudgetExceeded, EmptyFeasibleSet, FRError
from .kernel.eig import EIG_TOL, RANK_TOL
from .lp_fr import (FRSequenceLP, LinearSet, brute_force_msd, fra_minimal, minimal_cone_lp,
                    sd_lp, verify_sequence_lp)
from .sat_reduce import (assignment_to_sequence, build_msd_sdp, certify, duplicate_clauses,
                         parse_dimacs, preprocess)
from .sdp_fr import (FRSequenceSDP, SdpProblem, fra_lowrank, verify_sequence_sdp,
                     worst_case_instance)
from .sdp_fr.lowrank import RES_TOL

log = logging.getLogger("frkit")

EXIT_OK, EXIT_CLAIM, EXIT_INPUT, EXIT_INTERNAL, EXIT_BUDGET = 0, 1, 2, 3, 4


class InputError(Exception):
    """Bad command-line usage or unreadable input."""


class Run:
    """Configuration echo and per-phase timings of one invocation."""

    def __init__(self, args):
        self.args = args
        self.timings = {}

    @contextmanager
    def phase(self, name):
        t = time.perf_counter()
        yield
        self.timings[name] = round((time.perf_counter() - t) * 1000, 3)

    def config(self) -> dict:
        a = self.args
        keys = ["inputs", "output", "emit", "eig_tol", "rank_tol", "res_tol", "seed",
                "budget", "jobs", "brute", "ranks", "starts", "worst_case", "assign",
                "no_duplicate"]
        return {k: getattr(a, k) for k in keys if getattr(a, k, None) is not None}


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _read_text(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write_json(path, data):
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _need_inputs(args, k):
    if len(args.inputs) != k:
        raise InputError(f"expected {k} input file(s), got {len(args.inputs)}")
    return args.inputs


# ----- commands: each returns (result, exit code) -----

def cmd_lp_analyze(run: Run):
    (path,) = _need_inputs(run.args, 1)
    with run.phase("parse"):
        L = LinearSet.from_json(_read_json(path))
    with run.phase("fra"):
        seq = fra_minimal(L)
    with run.phase("sd"):
        sd = sd_lp(L)
    with run.phase("minimal_cone"):
        try:
            cone = [i + 1 for i in minimal_cone_lp(L).zeros]
        except EmptyFeasibleSet:
            cone = None
    result = {"msd": len(seq), "sd": sd, "minimal_cone": cone, "sequence": seq.to_json()}
    code = EXIT_OK
    if run.args.brute:
        with run.phase("brute_force"):
            bf = brute_force_msd(L)
        result["brute_force"] = bf
        if bf != len(seq):
            log.error("brute force gives %d but the minimal sequence has length %d", bf, len(seq))
            code = EXIT_CLAIM
    return result, code


def cmd_lp_verify(run: Run):
    lp_path, seq_path = _need_inputs(run.args, 2)
    with run.phase("parse"):
        L = LinearSet.from_json(_read_json(lp_path))
        seq = FRSequenceLP.from_json(_read_json(seq_path), L.n)
    with run.phase("verify"):
        rep = verify_sequence_lp(L, seq)
    return rep.to_json(), EXIT_OK if rep.valid else EXIT_CLAIM


def cmd_sdp_verify(run: Run):
    p_path, seq_path = _need_inputs(run.args, 2)
    with run.phase("parse"):
        P = SdpProblem.from_json(_read_json(p_path))
        seq = FRSequenceSDP.from_json(_read_json(seq_path), P)
    with run.phase("verify"):
        rep = verify_sequence_sdp(P, seq, run.args.eig_tol, run.args.rank_tol)
    return rep.to_json(), EXIT_OK if rep.valid else EXIT_CLAIM


def _parse_ranks(text):
    try:
        ranks = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad rank list {text!r}") from None
    if not ranks or min(ranks) < 1:
        raise InputError("ranks must be positive integers")
    return ranks


def cmd_sdp_lowrank(run: Run):
    a = run.args
    with run.phase("parse"):
        if a.worst_case is not None:
            if a.inputs:
                raise InputError("give either an input file or --worst-case, not both")
            P = worst_case_instance(a.worst_case)
        else:
            (path,) = _need_inputs(a, 1)
            P = SdpProblem.from_json(_read_json(path))
        ranks = _parse_ranks(a.ranks)
    with run.phase("search"):
        seq = fra_lowrank(P, ranks, seeds=a.starts, base_seed=a.seed, res_tol=a.res_tol,
                          rank_tol=a.rank_tol)
    result = {"length": len(seq), "termination": seq.note,
              "residuals": [float(r) for r in seq.residuals],
              "face_dims": [f.k for f in seq.faces],
              "sequence": seq.to_json()}
    if a.emit:
        _write_json(a.emit, seq.to_json())
    return result, EXIT_OK


def cmd_sdp_worst_case(run: Run):
    n = run.args.order
    P = worst_case_instance(n)
    data = P.to_json()
    if run.args.emit:
        _write_json(run.args.emit, data)
    return {"n": n, "instance": data}, EXIT_OK


def _reduction(run: Run, path):
    with run.phase("parse"):
        cnf = parse_dimacs(_read_text(path))
    with run.phase("preprocess"):
        pre = preprocess(cnf)
    if pre.trivialized:
        return pre, None
    with run.phase("build"):
        dup = pre if run.args.no_duplicate else duplicate_clauses(pre)
        R = build_msd_sdp(dup)
    return pre, R


def cmd_sat_reduce(run: Run):
    (path,) = _need_inputs(run.args, 1)
    pre, R = _reduction(run, path)
    if R is None:
        return {"trivialized": True, "fixed": _fixed_json(pre)}, EXIT_OK
    data = R.to_json()
    if run.args.emit:
        _write_json(run.args.emit, data)
    return {"trivialized": False, "fixed": _fixed_json(pre), "var_map": list(pre.var_map),
            "meta": data["meta"], "n": R.n, "m": R.sdp.m, "instance": data}, EXIT_OK


def _fixed_json(cnf):
    return {str(v): bool(val) for v, val in cnf.fixed}


def _parse_assignment(text, p):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad assignment {text!r}") from None
    if any(v not in (0, 1) for v in vals):
        raise InputError("assignment entries must be 0 or 1")
    if len(vals) != p:
        raise InputError(f"assignment has {len(vals)} values, the preprocessed CNF has {p} variables")
    return [bool(v) for v in vals]


def cmd_sat_sequence(run: Run):
    (path,) = _need_inputs(run.args, 1)
    if run.args.assign is None:
        raise InputError("--assign is required")
    pre, R = _reduction(run, path)
    if R is None:
        raise InputError("preprocessing removed every clause; there is no instance")
    values = _parse_assignment(run.args.assign, R.p)
    with run.phase("sequence"):
        seq = assignment_to_sequence(R, values)
    with run.phase("verify"):
        rep = verify_sequence_sdp(R.sdp, seq, run.args.eig_tol, run.args.rank_tol)
    if run.args.emit:
        _write_json(run.args.emit, seq.to_json())
    result = {"length": len(seq), "d": R.d, "verification": rep.to_json(),
              "steps": [f"A_{k + 1}" for k in _step_indices(seq)]}
    ok = rep.valid and rep.length == R.d
    return result, EXIT_OK if ok else EXIT_CLAIM


def _step_indices(seq):
    return [int(abs(s.y).argmax()) for s in seq.steps]


def cmd_sat_certify(run: Run):
    (path,) = _need_inputs(run.args, 1)
    with run.phase("parse"):
        cnf = parse_dimacs(_read_text(path))
    with run.phase("certify"):
        rep = certify(cnf, run.args.budget, run.args.jobs)
    if rep.witness is not None and run.args.emit:
        _write_json(run.args.emit, rep.witness[1].to_json())
    result = rep.to_json(run.args.emit if rep.witness is not None else None)
    return result, EXIT_OK if rep.claim_holds else EXIT_CLAIM


# ----- argument parsing -----

def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("value must be at least 1")
    return v


def _default_seed():
    env = os.environ.get("FR_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"FR_SEED={env!r} is not an integer") from None


def _common(p):
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.add_argument("--eig-tol", type=_positive_float, default=EIG_TOL)
    p.add_argument("--rank-tol", type=_positive_float, default=RANK_TOL)
    p.add_argument("--res-tol", type=_positive_float, default=RES_TOL)
    p.add_argument("--seed", type=int, default=None, help="random seed (default: $FR_SEED or 0)")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--budget", type=_positive_int, default=1 << 16,
                   help="maximum number of assignments to enumerate")


def build_parser():
    parser = argparse.ArgumentParser(prog="frkit", description="Facial reduction toolkit")
    parser.add_argument("--version", action="version", version=f"frkit {__version__}")
    top = parser.add_subparsers(dest="area", required=True)

    lp = top.add_parser("lp", help="linear sets over the nonnegative orthant")
    lps = lp.add_subparsers(dest="action", required=True)
    p = lps.add_parser("analyze", help="MSD, singularity degree and minimal face")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--brute", action="store_true", help="cross-check against brute force")
    _common(p)
    p.set_defaults(func=cmd_lp_analyze)
    p = lps.add_parser("verify", help="check an FR sequence")
    p.add_argument("inputs", nargs="*")
    _common(p)
    p.set_defaults(func=cmd_lp_verify)

    sdp = top.add_parser("sdp", help="spectrahedra")
    sdps = sdp.add_subparsers(dest="action", required=True)
    p = sdps.add_parser("verify", help="check an FR sequence")
    p.add_argument("inputs", nargs="*")
    _common(p)
    p.set_defaults(func=cmd_sdp_verify)
    p = sdps.add_parser("lowrank", help="greedy FR with low-rank exposing vectors")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--ranks", default="1", help="comma-separated rank schedule")
    p.add_argument("--starts", type=_positive_int, default=4, help="random starts per rank")
    p.add_argument("--worst-case", type=int, default=None, metavar="N")
    p.add_argument("--emit", help="also write the sequence JSON here")
    _common(p)
    p.set_defaults(func=cmd_sdp_lowrank)
    p = sdps.add_parser("worst-case", help="emit the order-N worst-case instance")
    p.add_argument("order", type=int, metavar="N")
    p.add_argument("--emit", help="also write the instance JSON here")
    _common(p)
    p.set_defaults(func=cmd_sdp_worst_case, inputs=[])

    sat = top.add_parser("sat", help="3-CNF reduction")
    sats = sat.add_subparsers(dest="action", required=True)
    for name, func, text in (("reduce", cmd_sat_reduce, "emit the reduction instance"),
                             ("sequence", cmd_sat_sequence, "FR sequence of an assignment"),
                             ("certify", cmd_sat_certify, "exact MSD versus satisfiability")):
        p = sats.add_parser(name, help=text)
        p.add_argument("inputs", nargs="*")
        p.add_argument("--emit", help="also write the instance, sequence or witness JSON here")
        if name != "certify":
            p.add_argument("--no-duplicate", action="store_true",
                           help="skip clause duplication")
        if name == "sequence":
            p.add_argument("--assign", help="comma-separated 0/1 values of the preprocessed variables")
        _common(p)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="frkit: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.seed is None:
            args.seed = _default_seed()
        run = Run(args)
        result, code = args.func(run)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except FRError as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - reported as an internal breach
        log.error("internal error: %s: %s", type(exc).__name__, exc)
        return EXIT_INTERNAL
    report = {"command": f"{args.area} {args.action}", "result": result,
              "timings": run.timings, "version": __version__, "config": run.config()}
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
