"""Command-line entry point: ``bohrkit <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 domain or precondition failure,
4 solver failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import __version__
from .arith import set_default_limit
from .cyclicity import RECIPROCAL_PRIMES, EngineConfig, Hints, decide
from .delta import delta_sweep, sweep_csv
from .dilation import (
    as_theta,
    finite_support_evidence,
    ingest_piecewise,
    ingest_samples,
    kozlov_decide,
    kozlov_pair,
    noor_experiment,
    write_fixture,
)
from .errors import BohrError, SolverError, ValidationError
from .series import (
    dirichlet_multiply,
    dumps_series,
    evaluate,
    invert,
    load_json,
    norm,
    parse_number,
    parse_point,
    read_series,
    restrict_to_first_variables,
)
from .structure import PrimePartition, variable_support

RESULT_FORMAT = "bohrkit-result/1"


@dataclass
class RunConfig:
    prime_limit: int = 10**6
    n_max: int = 10**4
    zero_tol: float = 1e-10
    class_tol: float = 1e-10
    outer_tol: float = 1e-9
    szego_nodes: int = 4096
    threads: int = 1
    output_format: str = "json"
    seed: int = 0

    def validate(self):
        for name in ("zero_tol", "class_tol", "outer_tol"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        for name in ("prime_limit", "n_max", "szego_nodes", "threads"):
            if not isinstance(getattr(self, name), int) or getattr(self, name) < 1:
                raise ValidationError(f"{name} must be a positive integer")
        if self.output_format not in ("json", "csv"):
            raise ValidationError("output_format must be json or csv")
        return self

    def engine(self):
        return EngineConfig(
            zero_tol=self.zero_tol,
            class_tol=self.class_tol,
            outer_tol=self.outer_tol,
            szego_nodes=self.szego_nodes,
            seed=self.seed,
        )


CONFIG_FLAGS = {
    "prime_limit": int,
    "n_max": int,
    "zero_tol": float,
    "class_tol": float,
    "outer_tol": float,
    "szego_nodes": int,
    "threads": int,
    "seed": int,
}


def build_config(args):
    cfg = {}
    if args.config:
        doc = load_json(args.config)
        if not isinstance(doc, dict):
            raise ValidationError("config file must hold a JSON object")
        known = {f.name for f in dataclasses.fields(RunConfig)}
        extra = set(doc) - known
        if extra:
            raise ValidationError(f"unknown config keys: {sorted(extra)}")
        cfg.update(doc)
    for key in CONFIG_FLAGS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return RunConfig(**cfg).validate()


def digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class Runner:
    def __init__(self, args, cfg):
        self.args = args
        self.cfg = cfg
        self.inputs = {}

    def read(self, path):
        self.inputs[str(path)] = digest(path)
        return read_series(path)

    def meta(self):
        m = {"tool": f"bohrkit {__version__}", "config": dataclasses.asdict(self.cfg), "inputs": self.inputs}
        if not self.args.no_timestamp:
            m["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return m

    def emit(self, result):
        doc = {"format": RESULT_FORMAT, "command": self.args.command, **self.meta(), "result": result}
        self.write_text(json.dumps(doc, indent=1, sort_keys=False) + "\n")

    def write_series(self, F, out):
        text = dumps_series(F, meta=self.meta())
        if out:
            Path(out).write_text(text)
            self.emit({"written": str(out), "n_max": F.n_max, "terms": len(F)})
        else:
            sys.stdout.write(text)

    def write_text(self, text):
        out = getattr(self.args, "report_out", None)
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"expected a comma-separated integer list, got {text!r}") from None


def cmd_series(run):
    a = run.args
    if a.action == "show":
        F = run.read(a.file)
        shown = F.pruned(a.prune) if a.prune else F
        run.emit(
            {
                "n_max": F.n_max,
                "terms": len(F),
                "norm": norm(F),
                "variables": variable_support(F),
                "head": [[n, v.real, v.imag] for n, v in list(shown)[: a.limit]],
            }
        )
    elif a.action == "mul":
        F, G = run.read(a.file), run.read(a.other)
        run.write_series(dirichlet_multiply(F, G), a.out)
    elif a.action == "inv":
        run.write_series(invert(run.read(a.file)), a.out)
    elif a.action == "norm":
        run.emit({"norm": norm(run.read(a.file))})
    elif a.action == "eval":
        if not a.point:
            raise ValidationError("series eval needs --point")
        F = run.read(a.file)
        value, bound = evaluate(F, parse_point(a.point), a.tail_eps)
        run.emit({"point": a.point, "value": [value.real, value.imag], "abs": abs(value), "tail_bound": bound})
    elif a.action == "restrict":
        if a.k is None:
            raise ValidationError("series restrict needs --k")
        run.write_series(restrict_to_first_variables(run.read(a.file), a.k), a.out)
    return 0


def _partition(text):
    path = Path(text)
    doc = load_json(path) if path.exists() else json.loads(text)
    return PrimePartition.from_json(doc)


def cmd_decide(run):
    a = run.args
    F = run.read(a.file)
    kernel = None
    if a.kernel:
        kernel = RECIPROCAL_PRIMES if a.kernel == RECIPROCAL_PRIMES else parse_point(a.kernel)
    try:
        part = _partition(a.partition) if a.partition else None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"bad partition: {exc.msg}") from None
    hints = Hints(
        partition=part,
        S=frozenset(_ints(a.S)) if a.S else None,
        zeros=[parse_point(z) for z in a.zero or []],
        kernel=kernel,
    )
    run.emit(decide(F, hints, run.cfg.engine()).to_json())
    return 0


def cmd_delta(run):
    a = run.args
    F = run.read(a.file)
    rows = delta_sweep(F, _ints(a.N_list), a.M)
    if run.cfg.output_format == "csv" or a.csv:
        run.write_text(sweep_csv(rows, run.meta()))
    else:
        run.emit({"rows": [r.to_json() for r in rows]})
    return 0


def cmd_kozlov(run):
    a = run.args
    theta = as_theta(a.theta)
    n_max = a.nmax or run.cfg.n_max
    pair = kozlov_pair(theta, n_max)
    result = {"theta": str(theta), "n_max": n_max}
    reports = {"support", "evidence", "verdict"} if a.report == "all" else {a.report}
    if "support" in reports:
        G = pair.G.pruned(1e-12)
        result["G_support"] = [int(n) for n in G.indices]
        result["G_variables"] = variable_support(G)
        result["G_coefficients"] = [[n, v.real, v.imag] for n, v in list(G)[:32]]
        result["identity_residual"] = pair.residual()
    if "evidence" in reports:
        result["prime_evidence"] = [[p, c] for p, c in finite_support_evidence(pair.G, a.prime_bound)]
    if "verdict" in reports:
        result["verdict"] = kozlov_decide(theta, n_max, run.cfg.engine()).to_json()
    if a.out_dir:
        result["fixture"] = str(write_fixture(pair, a.out_dir))
    run.emit(result)
    return 0


def cmd_noor(run):
    a = run.args
    out = noor_experiment(a.m, _ints(a.N_list), a.M)
    if run.cfg.output_format == "csv" or a.csv:
        meta = run.meta()
        meta["factorization_error"] = out["factorization_error"]
        meta["intertwining_defect"] = out["intertwining_defect"]
        run.write_text(sweep_csv(out["rows"], meta))
    else:
        run.emit(
            {
                "m": a.m,
                "factorization_error": out["factorization_error"],
                "intertwining_defect": out["intertwining_defect"],
                "rows": [r.to_json() for r in out["rows"]],
            }
        )
    return 0


def cmd_ingest(run):
    a = run.args
    n_max = a.nmax or run.cfg.n_max
    if a.breakpoints:
        brk = [_exact(x) for x in a.breakpoints.split(",")]
        vals = [parse_number(x) for x in (a.values or "").split(",") if x.strip()]
        F = ingest_piecewise(brk, vals, n_max)
    elif a.samples:
        path = Path(a.samples)
        run.inputs[str(path)] = digest(path)
        text = path.read_text()
        try:
            samples = json.loads(text) if text.lstrip().startswith("[") else [float(x) for x in text.split()]
        except ValueError as exc:
            raise ValidationError(f"{path}: unreadable samples ({exc})") from None
        F = ingest_samples(samples, n_max)
    else:
        raise ValidationError("ingest needs --breakpoints/--values or --samples")
    run.write_series(F, a.out)
    return 0


def _exact(text):
    from fractions import Fraction

    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"bad breakpoint {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="bohrkit", description="Cyclicity toolkit for Dirichlet/Bohr series.")
    p.add_argument("--version", action="version", version=f"bohrkit {__version__}")
    p.add_argument("--config", help="JSON file with RunConfig keys; flags override it")
    p.add_argument("--threads", type=int, help="cap on BLAS/LAPACK threads")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for byte-identical output")
    p.add_argument("--prime-limit", dest="prime_limit", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--zero-tol", dest="zero_tol", type=float)
    p.add_argument("--class-tol", dest="class_tol", type=float)
    p.add_argument("--outer-tol", dest="outer_tol", type=float)
    p.add_argument("--szego-nodes", dest="szego_nodes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--report-out", dest="report_out", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("series", help="inspect and combine series files")
    s.add_argument("action", choices=["show", "mul", "inv", "norm", "eval", "restrict"])
    s.add_argument("file")
    s.add_argument("other", nargs="?")
    s.add_argument("--out")
    s.add_argument("--point")
    s.add_argument("--tail-eps", dest="tail_eps", type=float, default=0.0)
    s.add_argument("--k", type=int)
    s.add_argument("--prune", type=float, default=0.0)
    s.add_argument("--limit", type=int, default=20)
    s.set_defaults(func=cmd_series)

    d = sub.add_parser("decide", help="cyclicity verdict with certificate")
    d.add_argument("file")
    d.add_argument("--zero", action="append", help="candidate zero 'pos:value,...' (repeatable)")
    d.add_argument("--partition", help="partition JSON or file")
    d.add_argument("--S", help="comma-separated primes")
    d.add_argument("--kernel", help=f"'{RECIPROCAL_PRIMES}' or a point to divide out first")
    d.set_defaults(func=cmd_decide)

    e = sub.add_parser("delta", help="least-squares distance sweep")
    e.add_argument("file")
    e.add_argument("--N-list", dest="N_list", required=True)
    e.add_argument("--M", type=int, required=True)
    e.add_argument("--csv", action="store_true")
    e.set_defaults(func=cmd_delta)

    k = sub.add_parser("kozlov", help="indicator-function experiments")
    k.add_argument("--theta", required=True)
    k.add_argument("--nmax", type=int)
    k.add_argument("--report", choices=["support", "evidence", "verdict", "all"], default="all")
    k.add_argument("--prime-bound", dest="prime_bound", type=int, default=50)
    k.add_argument("--out-dir", dest="out_dir", help="write fixtures/kozlov/theta_<num>_<den>.json under this root")
    k.set_defaults(func=cmd_kozlov)

    n = sub.add_parser("noor", help="delta sweep for log(1-z^m) - log(1-z)")
    n.add_argument("--m", type=int, required=True)
    n.add_argument("--N-list", dest="N_list", required=True)
    n.add_argument("--M", type=int, required=True)
    n.add_argument("--csv", action="store_true")
    n.set_defaults(func=cmd_noor)

    g = sub.add_parser("ingest", help="sine coefficients of a function on (0, 1)")
    g.add_argument("--samples", help="midpoint samples (whitespace separated or JSON array)")
    g.add_argument("--breakpoints", help="step function breakpoints, e.g. 0,1/2,1")
    g.add_argument("--values", help="step values, one per interval")
    g.add_argument("--nmax", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_ingest)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        set_default_limit(cfg.prime_limit)
        with threadpool_limits(limits=cfg.threads):
            return args.func(Runner(args, cfg))
    except (ValidationError, FileNotFoundError, IsADirectoryError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 4
    except BohrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
