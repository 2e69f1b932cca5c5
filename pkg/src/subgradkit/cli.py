"""Command-line front end: run, verify, certify, dump-config.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 runtime or oracle error.
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import schedules, solvers, verification, zoo
from .core import ConfigurationError, OracleError, UnsupportedOperation
from .solvers import AveragingRule

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3

DEFAULT_CONFIG = {
    "problem": {"spec": None},
    "schedule": {"spec": None},
    "run": {
        "iters": 100,
        "mode": None,
        "seed": 0,
        "seeds": 1,
        "base_seed": 0,
        "rules": None,
        "theorem": None,
        "x0": None,
        "certify_budget": 20000,
    },
    "output": {"trace": "trace.csv", "summary": "summary.json"},
}


# ---------------------------------------------------------------------------
# spec strings


def parse_spec(text: str) -> tuple[str, dict, list]:
    """``name:key=val,key=val,flag`` -> (name, {key: val}, [flag, ...])."""
    if not text:
        raise ConfigurationError("empty spec")
    name, _, rest = text.partition(":")
    params, flags = {}, []
    for part in filter(None, (p.strip() for p in rest.split(","))):
        if "=" in part:
            key, _, val = part.partition("=")
            params[key.strip()] = val.strip()
        else:
            flags.append(part)
    return name.strip(), params, flags


def _num(params, key, default=None, cast=float):
    if key not in params:
        if default is None:
            raise ConfigurationError(f"missing parameter {key!r}")
        return default
    try:
        return cast(float(params[key])) if cast is int else cast(params[key])
    except ValueError:
        raise ConfigurationError(f"parameter {key!r} must be numeric, got {params[key]!r}") from None


def build_problem(spec: str, certify_budget: int = 20000):
    name, p, flags = parse_spec(spec)
    if name == "lipschitz":
        return zoo.make_lipschitz_norm(_num(p, "d", 1, int), _num(p, "L", 1.0))
    if name == "holder":
        return zoo.make_holder_power(_num(p, "d", 1, int), _num(p, "L", 1.0), _num(p, "v", 1.0))
    if name == "composite":
        return zoo.make_additive_composite(_num(p, "d", 1, int), _num(p, "L_phi", 1.0),
                                           _num(p, "v", 1.0), _num(p, "L_h", 1.0))
    if name in ("qgrowth", "quadratic-growth"):
        return zoo.make_quadratic_growth(_num(p, "d", 1, int), _num(p, "r", 1.0))
    if name in ("cquad", "constrained-quadratic"):
        return zoo.make_constrained_quadratic(_num(p, "d", 2, int), _num(p, "mu", 1.0),
                                              _num(p, "radius", 1.0), noise=_num(p, "noise", 0.5))
    if name in ("svm", "hinge1d"):
        lam = _num(p, "lambda", 1.0 if name == "hinge1d" else 0.1)
        if name == "hinge1d":
            inst = zoo.SvmInstance(np.array([[1.0]]), np.array([1.0]), lam)
        elif "csv" in p:
            inst = zoo.load_svm_csv(p["csv"], lam)
        elif "synthetic" in flags or not p.keys() - {"lambda"} or {"n", "d", "seed", "flip"} & p.keys():
            inst = zoo.synthetic_svm(_num(p, "n", 50, int), _num(p, "d", 5, int), lam,
                                     _num(p, "seed", 7, int), _num(p, "flip", 0.1))
        else:
            raise ConfigurationError(f"svm spec needs 'synthetic' or csv=PATH: {spec!r}")
        prob = zoo.make_svm(inst)
        if certify_budget and certify_budget > 0:
            if inst.d == 1:
                cert = zoo.certify_optimum(prob, "bisection-1d", 10_000)
            else:
                cert = zoo.certify_optimum(prob, "long-run", certify_budget)
            prob = prob.with_certificate(cert)
        return prob
    raise ConfigurationError(f"unknown problem family {name!r}")


def build_schedule(spec: str, problem, T: int, stochastic: bool, x0=None):
    name, p, flags = parse_spec(spec)
    moment = problem.second_moment
    if name in ("constant", "constant-horizon"):
        if "R" in p:
            R = _num(p, "R")
        elif problem.certificate is not None:
            R = float(np.linalg.norm(problem.initial_point(x0) - problem.certificate.x_star))
        else:
            raise ConfigurationError("constant schedule needs R (no certificate to derive it from)")
        if not stochastic:
            return schedules.constant_step(R, T)
        L0 = _num(p, "L0", moment.L0 if moment is not None else None)
        L1 = _num(p, "L1", moment.L1 if moment is not None else 0.0)
        return schedules.constant_step(R, T, L0=L0, L1=L1)
    if name in ("classic-sc", "classic-strongly-convex"):
        return schedules.classic_strongly_convex(_num(p, "mu", problem.strong_convexity_mu))
    if name in ("extended-sc", "extended-strongly-convex"):
        return schedules.extended_strongly_convex(_num(p, "mu", problem.strong_convexity_mu),
                                                  _num(p, "L1", moment.L1 if moment else None))
    if name in ("qg", "quadratic-growth"):
        return schedules.quadratic_growth(_num(p, "mu", problem.quadratic_growth_mu),
                                          _num(p, "L1", moment.L1 if moment else None))
    if name in ("svm", "quad-regularized-svm"):
        return schedules.quad_regularized_svm(_num(p, "lambda", problem.meta.get("lam")))
    if name == "harmonic":
        return schedules.harmonic(T, _num(p, "c", 1.0))
    if name in ("sequence", "user-sequence"):
        values = [float(v) for v in (p.get("values") or " ".join(flags)).replace(";", " ").split()]
        return schedules.user_sequence(values)
    raise ConfigurationError(f"unknown schedule kind {name!r}")


_DEFAULT_THEOREM = {
    "classic-strongly-convex": "T4",
    "extended-strongly-convex": "T6",
    "quadratic-growth": "QG",
    "quad-regularized-svm": "C5",
}


def _default_theorem(schedule, problem, stochastic):
    if not stochastic:
        return "T2" if problem.growth_model is not None else None
    if schedule.kind == "constant-horizon":
        return "T5"
    return _DEFAULT_THEOREM.get(schedule.kind)


# ---------------------------------------------------------------------------
# config handling


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for section, values in override.items():
        if isinstance(values, dict) and isinstance(out.get(section), dict):
            out[section].update(values)
        else:
            out[section] = values
    return out


def resolve_config(args) -> dict:
    config = copy.deepcopy(DEFAULT_CONFIG)
    if getattr(args, "config", None):
        try:
            doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}") from None
        unknown = set(doc) - set(DEFAULT_CONFIG)
        if unknown:
            raise ConfigurationError(f"unknown config section(s): {', '.join(sorted(unknown))}")
        config = _merge(config, doc)
    flag_map = {
        "problem": ("problem", "spec"), "schedule": ("schedule", "spec"),
        "iters": ("run", "iters"), "seed": ("run", "seed"), "seeds": ("run", "seeds"),
        "base_seed": ("run", "base_seed"), "rules": ("run", "rules"), "theorem": ("run", "theorem"),
        "x0": ("run", "x0"), "certify_budget": ("run", "certify_budget"),
        "trace": ("output", "trace"), "summary": ("output", "summary"),
    }
    for attr, (section, key) in flag_map.items():
        val = getattr(args, attr, None)
        if val is not None:
            config[section][key] = val
    if getattr(args, "stochastic", False) or getattr(args, "seed", None) is not None:
        config["run"]["mode"] = "stochastic"
    run = config["run"]
    if run["mode"] is None:
        run["mode"] = "stochastic" if int(run["seeds"]) > 1 else "deterministic"
    if run["mode"] not in ("deterministic", "stochastic"):
        raise ConfigurationError(f"run.mode must be 'deterministic' or 'stochastic', got {run['mode']!r}")
    if not config["problem"]["spec"]:
        raise ConfigurationError("problem.spec is required")
    if not config["schedule"]["spec"]:
        raise ConfigurationError("schedule.spec is required")
    try:
        run["iters"] = int(run["iters"])
        run["seeds"] = int(run["seeds"])
        run["seed"] = int(run["seed"])
        run["base_seed"] = int(run["base_seed"])
        run["certify_budget"] = int(float(run["certify_budget"]))
    except (TypeError, ValueError):
        raise ConfigurationError("run.iters, run.seed(s), run.base_seed and run.certify_budget must be integers") from None
    if run["iters"] < 0:
        raise ConfigurationError("run.iters must be >= 0")
    return config


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".17g")


def write_trace_csv(path, trace) -> int:
    """Write one row per iterate; returns the row count."""
    n = trace.num_iterates
    stochastic = trace.stochastic
    header = ["k", "alpha_k", "f_gap", "xi_index" if stochastic else "hyperplane_dist"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for k in range(n):
            alpha = trace.step_sizes[k] if k < len(trace.step_sizes) else None
            gap = trace.objective_gaps[k] if trace.objective_gaps is not None else None
            if stochastic:
                last = "" if k >= len(trace.step_sizes) else str(trace.samples[k])
            else:
                hd = trace.hyperplane_distances
                last = _fmt(hd[k]) if hd is not None and k < len(hd) else ""
            writer.writerow([k, _fmt(alpha), _fmt(gap), last])
    return n


def execute_run(config: dict) -> dict:
    run = config["run"]
    problem = build_problem(config["problem"]["spec"], run["certify_budget"])
    stochastic = run["mode"] == "stochastic"
    T = run["iters"]
    x0 = run["x0"]
    schedule = build_schedule(config["schedule"]["spec"], problem, T, stochastic, x0)
    theorem = run["theorem"] or _default_theorem(schedule, problem, stochastic)
    summary = {
        "problem": problem.name,
        "schedule": schedule.to_dict(),
        "T": T,
        "mode": run["mode"],
    }
    if problem.certificate is not None:
        summary["certificate"] = problem.certificate.to_dict()

    if stochastic and run["seeds"] > 1:
        rules = run["rules"] or ([verification.theorem_rule(theorem).value] if theorem else ["uniform"])
        summary["seeds"] = run["seeds"]
        summary["base_seed"] = run["base_seed"]
        summary["ensembles"] = {}
        for rule in rules:
            rule = AveragingRule.parse(rule)
            entry = {}
            if theorem and rule is verification.theorem_rule(theorem):
                mean, se, bound, ok = verification.check_stochastic_rate(
                    problem, schedule, rule, theorem, T, run["seeds"], run["base_seed"], x0)
                entry.update(mean=mean, se=se, theorem=theorem, bound=bound, **{"pass": ok})
            else:
                mean, se = solvers.ensemble_expectation(problem, schedule, T, rule, run["seeds"],
                                                        run["base_seed"], x0)
                entry.update(mean=mean, se=se)
            summary["ensembles"][rule.value] = entry
        return summary

    if stochastic:
        trace = solvers.run_stochastic(problem, schedule, T, run["seed"], x0=x0)
        summary["seed"] = run["seed"]
    else:
        trace = solvers.run_deterministic(problem, schedule, T, x0=x0)
    rows = write_trace_csv(config["output"]["trace"], trace)
    summary["trace_rows"] = rows
    summary["terminated_at_minimizer"] = trace.terminated_at_minimizer
    summary["early_termination"] = trace.terminated_at_minimizer is not None
    if trace.objective_gaps is not None:
        summary["best_gap"] = trace.min_gap()
        averages = {}
        rules = run["rules"] or (["best-iterate"] if not stochastic else
                                 ([verification.theorem_rule(theorem).value] if theorem else ["uniform"]))
        L1 = problem.second_moment.L1 if problem.second_moment is not None else None
        for rule in rules:
            rule = AveragingRule.parse(rule)
            if rule is not AveragingRule.BEST_ITERATE and trace.terminated_at_minimizer is not None:
                continue
            point = solvers.weighted_average(trace, rule, schedule, L1=schedule.L1 if schedule.L1 is not None else L1)
            averages[rule.value] = problem.gap(point)
        summary["averaged_gaps"] = averages
        if theorem:
            try:
                if stochastic:
                    bound, _ = verification.stochastic_bound(problem, schedule, theorem, T, x0)
                    summary["theorem"] = {"id": theorem, "bound": bound}
                else:
                    rec = verification.check_deterministic_rate(trace, problem, theorem)
                    summary["theorem"] = {"id": theorem, "bound": rec.rhs, "pass": rec.passed}
            except ConfigurationError as exc:
                summary["theorem"] = {"id": theorem, "skipped": str(exc)}
    return summary


# ---------------------------------------------------------------------------
# commands


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    return obj


def cmd_run(args) -> int:
    config = resolve_config(args)
    summary = execute_run(config)
    text = json.dumps(_clean(summary), indent=2, default=_json_default)
    Path(config["output"]["summary"]).write_text(text + "\n", encoding="utf-8")
    print(text)
    return EXIT_OK


def cmd_dump_config(args) -> int:
    config = resolve_config(args)
    print(json.dumps(config, indent=2))
    return EXIT_OK


def cmd_verify(args) -> int:
    suite = args.suite or args.suite_pos or "exact"
    records = []
    if suite in ("exact", "all"):
        records += verification.exact_suite()
    if suite in ("statistical", "all"):
        records += verification.statistical_suite(num_seeds=args.seeds, T=args.iters)
    verification.write_report(records, args.report)
    failed = [r for r in records if not r.passed]
    for rec in failed:
        print("FAIL " + json.dumps(rec.to_dict()), file=sys.stderr)
    print(f"{len(records) - len(failed)}/{len(records)} checks passed; report: {args.report}")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_certify(args) -> int:
    budget = int(float(args.budget))
    problem = build_problem(args.problem, certify_budget=0)
    cert = zoo.certify_optimum(problem, args.method, budget, seed=args.seed)
    text = json.dumps(_clean(cert.to_dict()), indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    print(text)
    return EXIT_OK


def _add_run_flags(p):
    p.add_argument("--config", help="JSON config document (sections problem/schedule/run/output)")
    p.add_argument("--problem", help="problem spec, e.g. holder:v=1,L=1,d=2 or svm:synthetic,seed=7")
    p.add_argument("--schedule", help="schedule spec, e.g. constant:R=1 or svm:lambda=0.1")
    p.add_argument("--iters", type=int, help="horizon T")
    p.add_argument("--seed", type=int, help="seed of a single stochastic run")
    p.add_argument("--seeds", type=int, help="number of ensemble seeds M")
    p.add_argument("--base-seed", dest="base_seed", type=int)
    p.add_argument("--stochastic", action="store_true", help="use the stochastic iteration")
    p.add_argument("--rule", dest="rules", action="append", help="averaging rule (repeatable)")
    p.add_argument("--theorem", help="theorem whose bound to report")
    p.add_argument("--x0", type=lambda s: [float(v) for v in s.split(",")], help="start point, comma separated")
    p.add_argument("--certify-budget", dest="certify_budget", type=float)
    p.add_argument("--trace", help="trace CSV path")
    p.add_argument("--summary", help="summary JSON path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subgradkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a single or ensemble experiment")
    _add_run_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_dump = sub.add_parser("dump-config", help="print the resolved config document")
    _add_run_flags(p_dump)
    p_dump.set_defaults(func=cmd_dump_config)

    p_ver = sub.add_parser("verify", help="run verification suites")
    p_ver.add_argument("suite_pos", nargs="?", choices=("exact", "statistical", "all"), metavar="suite")
    p_ver.add_argument("--suite", choices=("exact", "statistical", "all"), default=None)
    p_ver.add_argument("--report", default="verify-report.jsonl")
    p_ver.add_argument("--seeds", type=int, default=200)
    p_ver.add_argument("--iters", type=int, default=10_000)
    p_ver.set_defaults(func=cmd_verify)

    p_cert = sub.add_parser("certify", help="certify f* and x* for a problem")
    p_cert.add_argument("problem")
    p_cert.add_argument("--method", choices=("bisection-1d", "long-run"), default="long-run")
    p_cert.add_argument("--budget", default="100000")
    p_cert.add_argument("--seed", type=int, default=0)
    p_cert.add_argument("--output")
    p_cert.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigurationError, UnsupportedOperation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OracleError, ArithmeticError, RuntimeError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
