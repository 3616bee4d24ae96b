"""Command-line entry point: ``cpaclab <group> <command> [flags]``.

Results go to stdout as JSON (one object per line) or CSV; diagnostics go
to stderr.  Exit status: 0 success or pass, 1 failed verdict, 2 usage or
configuration error.  Arguments taking a class spec, sample, distribution
or config accept inline JSON (leading ``{``) or a file path.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import codec
from .classes import MissingOracle, class_from_spec, class_hfin
from .harness import (
    CurveConfig,
    FiniteDistribution,
    experiment_curve,
    hoeffding_check,
    make_learner,
    nonuniform_trial_suite,
    pac_trial_suite,
)
from .hkl import Undecided, hkl_build, hkl_explore_E, hkl_member
from .hypothesis import Hypothesis, LabeledSample
from .learners import erm_enumerated, erm_hfin, srm, t_of
from .machine import decode_program, encode_program, program_from_json, program_to_json, run
from .vc import Witness, hkl_diagonalize, hkl_witness, verify_witness, vc_restricted, witness_from_erm

SEED_ENV = "CPACLAB_SEED"


class ConfigError(ValueError):
    pass


def _load_json(arg: str, what: str):
    text = arg if arg.lstrip().startswith("{") else None
    if text is None:
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {what} file {arg!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} is not valid JSON: {exc}") from None


def _naturals(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"expected comma-separated naturals, got {text!r}") from None
    if any(v < 0 for v in vals):
        raise ConfigError(f"expected naturals, got {text!r}")
    return vals


def _nat(minimum: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {v}")
        return v

    return parse


def _ell(text: str):
    if text in ("inf", "infinity"):
        return math.inf
    return _nat(1)(text)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return _nat(0)(env)
    except argparse.ArgumentTypeError:
        raise ConfigError(f"{SEED_ENV} must be a natural, got {env!r}") from None


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, default=str) + "\n")


def _class(args):
    return class_from_spec(_load_json(args.cls, "class spec")) if args.cls else class_hfin()


def _sample(args) -> LabeledSample:
    return LabeledSample.from_json(_load_json(args.sample, "sample"))


# -- handlers --------------------------------------------------------------


def cmd_codec(args) -> int:
    vals = _naturals(args.values)
    op = args.op
    if op == "godel":
        _emit(codec.godel_encode(vals))
    elif op == "ungodel":
        _single(vals)
        t = codec.godel_decode(vals[0])
        _emit(None if t is None else list(t))
    elif op == "pair":
        if len(vals) != 2:
            raise ConfigError("pair takes two values")
        _emit(codec.pair(*vals))
    elif op == "unpair":
        _single(vals)
        _emit(list(codec.unpair(vals[0])))
    elif op == "sample":
        if len(vals) % 2:
            raise ConfigError("sample takes x,y pairs")
        _emit(codec.sample_encode(list(zip(vals[::2], vals[1::2]))))
    else:  # unsample
        _single(vals)
        s = codec.sample_decode(vals[0])
        _emit(None if s is None else [list(p) for p in s])
    return 0


def _single(vals):
    if len(vals) != 1:
        raise ConfigError("expected exactly one value")


def cmd_machine_run(args) -> int:
    if (args.code is None) == (args.program is None):
        raise ConfigError("give exactly one of --code and --program")
    prog = decode_program(args.code) if args.code is not None else program_from_json(args.program)
    res = run(prog, _naturals(args.input), args.budget, arity=args.arity)
    if res.halted:
        _emit({"halted": True, "output": list(res.output), "steps": res.steps})
    else:
        _emit({"halted": False, "budget": args.budget})
    return 0


def cmd_machine_decode(args) -> int:
    sys.stdout.write(program_to_json(decode_program(args.code)) + "\n")
    return 0


def cmd_machine_encode(args) -> int:
    _emit(encode_program(program_from_json(args.program)))
    return 0


def cmd_explore_e(args) -> int:
    C = hkl_build(args.k, args.l, marker=args.marker)
    for rec in hkl_explore_E(C, args.index_budget, args.step_budget):
        _emit(rec.to_json())
    return 0


def cmd_member(args) -> int:
    h = Hypothesis(_naturals(args.support))
    if args.k is not None:
        if args.l is None:
            raise ConfigError("--k needs --l")
        _emit(hkl_member(hkl_build(args.k, args.l, marker=args.marker), h))
        return 0
    cls = _class(args)
    if cls.member is None:
        raise MissingOracle(f"{cls.name} has no membership decider")
    _emit(cls.member(h))
    return 0


def cmd_vc_dim(args) -> int:
    _emit(vc_restricted(_class(args), args.domain))
    return 0


def cmd_verify_witness(args) -> int:
    if args.hkl is not None:
        C = hkl_build(args.hkl[0], args.hkl[1])
        w, cls = hkl_witness(C), C.as_class()
    else:
        cls = _class(args)
        if args.erm_k is not None:
            w = witness_from_erm(lambda S: erm_enumerated(cls, S), args.erm_k)
        elif args.witness_code is not None and args.witness_k is not None:
            w = Witness(args.witness_k, args.witness_code, budget=args.step_budget)
        else:
            raise ConfigError("give --hkl K L, --erm-k K, or --witness-code C with --witness-k K")
    cex = verify_witness(w, cls, args.domain)
    _emit({"pass": cex is None, "counterexample": None if cex is None else cex.to_json()})
    return 0 if cex is None else 1


def cmd_witness_from_erm(args) -> int:
    cls = _class(args)
    pts = _naturals(args.points)
    if len(pts) != args.k + 1:
        raise ConfigError(f"a {args.k}-witness takes {args.k + 1} points")
    w = witness_from_erm(lambda S: erm_enumerated(cls, S), args.k)
    _emit(list(w(pts)))
    return 0


def cmd_diagonalize(args) -> int:
    C = hkl_build(args.k, args.l, marker=args.marker)
    res = hkl_diagonalize(C, args.candidate_code, total_out=args.total_out, step_budget=args.step_budget)
    _emit(res.to_json())
    return 0 if hasattr(res, "h") else 1


def cmd_learn(args) -> int:
    S = _sample(args)
    cert = None
    if args.learner == "erm":
        h = erm_hfin(S) if args.cls is None else erm_enumerated(_class(args), S)
    elif args.learner == "srm":
        h, cert = srm(_class(args), args.b, S)
    else:
        h, cert = srm(_class(args), t_of(len(S)), S)
    out = {"support": list(h.support)}
    if getattr(args, "emit_certificate", False) and cert is not None:
        out["certificate"] = cert.to_json()
    _emit(out)
    return 0


def _report(rep) -> int:
    _emit(rep.to_json())
    print(
        f"frequency {float(rep.frequency):.4f} vs threshold {float(rep.threshold):.4f} - {rep.margin:.4f}: "
        + ("pass" if rep.passed else "FAIL"),
        file=sys.stderr,
    )
    return 0 if rep.passed else 1


def cmd_harness_pac(args) -> int:
    cls = _class(args)
    D = FiniteDistribution.from_json(_load_json(args.distribution, "distribution"))
    learner = make_learner(args.learner, cls, args.srm_b)
    return _report(pac_trial_suite(learner, cls, D, args.a, args.b, args.m, args.trials, _seed(args), args.jobs))


def cmd_harness_nonuniform(args) -> int:
    cls = _class(args)
    D = FiniteDistribution.from_json(_load_json(args.distribution, "distribution"))
    return _report(nonuniform_trial_suite(cls, D, args.a, args.b, args.n_h, args.trials, _seed(args), args.jobs))


def cmd_harness_hoeffding(args) -> int:
    D = FiniteDistribution.from_json(_load_json(args.distribution, "distribution"))
    h = Hypothesis(_naturals(args.support))
    return _report(hoeffding_check(h, D, args.m, args.b, args.trials, _seed(args), args.jobs))


def cmd_harness_curve(args) -> int:
    raw = _load_json(args.config, "curve config")
    if args.seed is not None or os.environ.get(SEED_ENV) is not None:
        raw = {**raw, "seed": _seed(args)}
    if args.trials is not None:
        raw = {**raw, "trials": args.trials}
    rows = experiment_curve(CurveConfig.from_json(raw), jobs=args.jobs)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["m", "freq", "threshold", "pass"])
    for r in rows:
        out.writerow([r["m"], str(r["freq"]), str(r["threshold"]), str(r["pass"]).lower()])
    return 0 if all(r["pass"] for r in rows) else 1


# -- parser ----------------------------------------------------------------


def _add_class(p, required=False):
    p.add_argument("--class", dest="cls", required=required, help="class spec (JSON or path); default hfin")


def _add_trials(p):
    p.add_argument("--seed", type=_nat(0), default=None, help=f"base seed (fallback ${SEED_ENV}, then 0)")
    p.add_argument("--trials", type=_nat(1), default=1000)
    p.add_argument("--jobs", type=_nat(1), default=1, help="worker threads; results do not depend on it")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="cpaclab", description=__doc__.splitlines()[0])
    groups = top.add_subparsers(dest="group", required=True)

    p = groups.add_parser("codec", help="tuple, pair and sample codes")
    p.add_argument("op", choices=["godel", "ungodel", "pair", "unpair", "sample", "unsample"])
    p.add_argument("values", help="comma-separated naturals")
    p.set_defaults(func=cmd_codec)

    mach = groups.add_parser("machine", help="register machine").add_subparsers(dest="cmd", required=True)
    p = mach.add_parser("run")
    p.add_argument("--code", type=_nat(0))
    p.add_argument("--program", help="JSON instruction list")
    p.add_argument("--input", default="")
    p.add_argument("--budget", type=_nat(0), required=True)
    p.add_argument("--arity", type=_nat(0))
    p.set_defaults(func=cmd_machine_run)
    p = mach.add_parser("decode")
    p.add_argument("--code", type=_nat(0), required=True)
    p.set_defaults(func=cmd_machine_decode)
    p = mach.add_parser("encode")
    p.add_argument("--program", required=True)
    p.set_defaults(func=cmd_machine_encode)

    cl = groups.add_parser("classes", help="hypothesis classes").add_subparsers(dest="cmd", required=True)
    p = cl.add_parser("explore-e", help="confirmed E-records as JSON lines")
    p.add_argument("--k", type=_nat(1), required=True)
    p.add_argument("--l", type=_ell, required=True)
    p.add_argument("--index-budget", type=_nat(1), required=True)
    p.add_argument("--step-budget", type=_nat(1), required=True)
    p.add_argument("--marker", choices=["cantor", "prime_power"], default="cantor")
    p.set_defaults(func=cmd_explore_e)
    p = cl.add_parser("member")
    _add_class(p)
    p.add_argument("--k", type=_nat(1), help="use H^{k,l} instead of --class")
    p.add_argument("--l", type=_ell)
    p.add_argument("--marker", choices=["cantor", "prime_power"], default="cantor")
    p.add_argument("--support", required=True, help="comma-separated support")
    p.set_defaults(func=cmd_member)

    vc = groups.add_parser("vc", help="VC-dimension and witnesses").add_subparsers(dest="cmd", required=True)
    p = vc.add_parser("dim")
    _add_class(p, required=True)
    p.add_argument("--domain", type=_nat(0), required=True)
    p.set_defaults(func=cmd_vc_dim)
    p = vc.add_parser("verify-witness")
    _add_class(p)
    p.add_argument("--domain", type=_nat(0), required=True)
    p.add_argument("--hkl", type=_nat(1), nargs=2, metavar=("K", "L"))
    p.add_argument("--erm-k", type=_nat(0))
    p.add_argument("--witness-code", type=_nat(0))
    p.add_argument("--witness-k", type=_nat(0))
    p.add_argument("--step-budget", type=_nat(1), default=10**6)
    p.set_defaults(func=cmd_verify_witness)
    p = vc.add_parser("witness-from-erm")
    _add_class(p, required=True)
    p.add_argument("--k", type=_nat(0), required=True)
    p.add_argument("--points", required=True)
    p.set_defaults(func=cmd_witness_from_erm)
    p = vc.add_parser("diagonalize")
    p.add_argument("--k", type=_nat(1), required=True)
    p.add_argument("--l", type=_ell, required=True)
    p.add_argument("--candidate-code", type=_nat(0), required=True)
    p.add_argument("--total-out", type=_nat(1))
    p.add_argument("--step-budget", type=_nat(1), default=10**4)
    p.add_argument("--marker", choices=["cantor", "prime_power"], default="cantor")
    p.set_defaults(func=cmd_diagonalize)

    lr = groups.add_parser("learn", help="run a learner on a sample").add_subparsers(dest="learner", required=True)
    p = lr.add_parser("erm")
    _add_class(p)
    p.add_argument("--sample", required=True)
    p = lr.add_parser("srm")
    _add_class(p)
    p.add_argument("--b", type=_nat(1), required=True)
    p.add_argument("--sample", required=True)
    p.add_argument("--emit-certificate", action="store_true")
    p = lr.add_parser("nonuniform")
    _add_class(p)
    p.add_argument("--sample", required=True)
    p.add_argument("--emit-certificate", action="store_true")
    for sub in lr.choices.values():
        sub.set_defaults(func=cmd_learn)

    hr = groups.add_parser("harness", help="Monte-Carlo checks").add_subparsers(dest="cmd", required=True)
    p = hr.add_parser("pac")
    _add_class(p)
    p.add_argument("--learner", choices=["erm_hfin", "erm", "srm", "nonuniform"], default="erm_hfin")
    p.add_argument("--srm-b", type=_nat(1))
    p.add_argument("--distribution", required=True)
    p.add_argument("--a", type=_nat(1), required=True)
    p.add_argument("--b", type=_nat(1), required=True)
    p.add_argument("--m", type=_nat(1), required=True)
    _add_trials(p)
    p.set_defaults(func=cmd_harness_pac)
    p = hr.add_parser("nonuniform")
    _add_class(p)
    p.add_argument("--distribution", required=True)
    p.add_argument("--a", type=_nat(1), required=True)
    p.add_argument("--b", type=_nat(1), required=True)
    p.add_argument("--n-h", type=_nat(0), required=True)
    _add_trials(p)
    p.set_defaults(func=cmd_harness_nonuniform)
    p = hr.add_parser("hoeffding")
    p.add_argument("--support", default="", help="support of the fixed hypothesis")
    p.add_argument("--distribution", required=True)
    p.add_argument("--m", type=_nat(1), required=True)
    p.add_argument("--b", type=_nat(1), required=True)
    _add_trials(p)
    p.set_defaults(func=cmd_harness_hoeffding)
    p = hr.add_parser("curve", help="CSV rows m,freq,threshold,pass")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=_nat(0), default=None)
    p.add_argument("--trials", type=_nat(1), default=None, help="override the config value")
    p.add_argument("--jobs", type=_nat(1), default=1)
    p.set_defaults(func=cmd_harness_curve)
    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, ValueError, KeyError, TypeError, MissingOracle, Undecided) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"cpaclab: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
