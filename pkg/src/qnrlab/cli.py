"""Command-line front end.

Exit codes: 0 success, 2 verification failures present, 3 invalid input or
precondition violation, 4 numerical non-convergence.  Numeric results are
printed as JSON on stdout; floats use Python's shortest round-trip decimal
form (up to 17 significant digits).  All randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import harness, kernel, means, qnr, sectorial, semihilbert
from .errors import QnrlabError, QuadratureNotConverged


def _emit(obj):
    json.dump(obj, sys.stdout)
    sys.stdout.write("\n")


def _write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".qnrlab-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_q(text):
    """Accept a real number or re[+im]i; returns the complex value."""
    s = text.strip().replace("I", "i")
    try:
        return complex(float(s))
    except ValueError:
        pass
    try:
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise QnrlabError(f"cannot parse q value {text!r}") from exc


def _vec_json(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v).ravel()]


def _build_parser():
    p = argparse.ArgumentParser(prog="qnrlab", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    mat = sub.add_parser("mat", help="matrix generation")
    matsub = mat.add_subparsers(dest="sub", required=True)
    g = matsub.add_parser("gen", help="draw from a random input family")
    g.add_argument("--kind", required=True, choices=sectorial.KINDS)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--alpha", type=float, default=0.0)
    g.add_argument("--rank", type=int, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", required=True)

    qn = sub.add_parser("qnr", help="q-numerical radius and range")
    qnsub = qn.add_subparsers(dest="sub", required=True)
    rad = qnsub.add_parser("radius")
    rad.add_argument("--matrix", required=True)
    rad.add_argument("--metric", default=None)
    rad.add_argument("--q", required=True)
    rad.add_argument("--starts", type=int, default=32)
    rad.add_argument("--oracle-samples", type=int, default=4096)
    rad.add_argument("--seed", type=int, default=0)
    rng = qnsub.add_parser("range")
    rng.add_argument("--matrix", required=True)
    rng.add_argument("--metric", default=None)
    rng.add_argument("--q", required=True)
    rng.add_argument("--samples", type=int, required=True)
    rng.add_argument("--seed", type=int, default=0)
    rng.add_argument("-o", "--out", required=True)

    sec = sub.add_parser("sector", help="sector certificates")
    secsub = sec.add_subparsers(dest="sub", required=True)
    ang = secsub.add_parser("angle")
    ang.add_argument("--matrix", required=True)

    me = sub.add_parser("means", help="matrix means")
    mesub = me.add_subparsers(dest="sub", required=True)
    mc = mesub.add_parser("compute")
    mc.add_argument("--op", required=True,
                    choices=("harmonic", "geometric", "weighted", "log",
                             "heinz", "sigma"))
    mc.add_argument("--a", required=True)
    mc.add_argument("--b", required=True)
    mc.add_argument("--t", type=float, default=0.5)
    mc.add_argument("--f", default="power:0.5",
                    help="monotone function name for --op sigma")
    mc.add_argument("--nodes", type=int, default=64)

    fc = sub.add_parser("funcalc", help="monotone functional calculus")
    fc.add_argument("--f", required=True,
                    help="power:t, identity, one, arithmetic, or a JSON "
                         "measure {\"atoms\": [[s,w],...], \"density\": {...}}")
    fc.add_argument("--matrix", required=True)
    fc.add_argument("--nodes", type=int, default=64)

    ver = sub.add_parser("verify", help="inequality verification harness")
    versub = ver.add_subparsers(dest="sub", required=True)
    vr = versub.add_parser("run")
    vr.add_argument("--suite", default="all", choices=sorted(harness.SUITES))
    vr.add_argument("--trials", type=int, default=200)
    vr.add_argument("--dims", default="2,3,4")
    vr.add_argument("--seed", type=int, default=0)
    vr.add_argument("--starts", type=int, default=16)
    vr.add_argument("--nodes", type=int, default=64)
    vr.add_argument("--oracle-samples", type=int, default=1024)
    vr.add_argument("--report", default=None)
    vr.add_argument("--format", default="json", choices=("json", "csv"))
    versub.add_parser("list")
    return p


def _load_metric(path):
    if path is None:
        return None
    return semihilbert.build_space(kernel.load_matrix(path))


def _cmd_mat_gen(args):
    spec = sectorial.GenSpec(kind=args.kind, n=args.n, alpha=args.alpha,
                             rank=args.rank, seed=args.seed)
    out = sectorial.gen(spec)
    if isinstance(out, tuple):
        payload = json.dumps([kernel.matrix_to_json(m) for m in out])
    else:
        payload = json.dumps(kernel.matrix_to_json(out))
    _write_atomic(args.out, payload + "\n")
    _emit({"written": args.out,
           "config": {"kind": args.kind, "n": args.n, "alpha": args.alpha,
                      "rank": args.rank, "seed": args.seed}})
    return 0


def _cmd_qnr_radius(args):
    t = kernel.load_matrix(args.matrix)
    space = _load_metric(args.metric)
    qval = _parse_q(args.q)
    qused = abs(qval)
    cfg = qnr.SolverCfg(starts=args.starts, oracle_samples=args.oracle_samples,
                        seed=args.seed)
    res = qnr.q_radius(space, t, qused, cfg)
    out = {
        "value": res.value,
        "oracle_lower": res.oracle_lower,
        "converged": res.converged,
        "starts": res.starts,
        "witness": {"x": _vec_json(res.witness.x), "y": _vec_json(res.witness.y)},
        "q_given": [qval.real, qval.imag],
        "q_used": qused,
        "config": {"matrix": args.matrix, "metric": args.metric,
                   "starts": args.starts, "oracle_samples": args.oracle_samples,
                   "seed": args.seed},
    }
    if qval.imag != 0.0 or qval.real < 0.0:
        out["note"] = ("complex q normalized to |q|; the radius is invariant "
                       "under rotating q by a phase")
    _emit(out)
    return 0


def _cmd_qnr_range(args):
    t = kernel.load_matrix(args.matrix)
    space = _load_metric(args.metric)
    qval = _parse_q(args.q)
    cloud = qnr.q_range_sample(space, t, qval, args.samples, seed=args.seed)
    _write_atomic(args.out, qnr.point_cloud_csv(cloud))
    _emit({"written": args.out, "points": int(len(cloud.points)),
           "hull_vertices": len(cloud.hull),
           "config": {"matrix": args.matrix, "metric": args.metric,
                      "q": [qval.real, qval.imag], "samples": args.samples,
                      "seed": args.seed}})
    return 0


def _cmd_sector_angle(args):
    cert = sectorial.sector_angle(kernel.load_matrix(args.matrix))
    _emit({"alpha_min": cert.alpha_min, "re_min_eig": cert.re_min_eig,
           "rho": cert.rho, "config": {"matrix": args.matrix}})
    return 0


def _cmd_means_compute(args):
    a = kernel.load_matrix(args.a)
    b = kernel.load_matrix(args.b)
    cfg = means.QuadCfg(nodes=args.nodes)
    if args.op == "harmonic":
        out = means.harmonic(a, b, args.t)
    elif args.op == "geometric":
        out = means.drury_geomean(a, b, cfg)
    elif args.op == "weighted":
        out = means.weighted_geomean(a, b, args.t, cfg)
    elif args.op == "log":
        out = means.log_mean(a, b, cfg)
    elif args.op == "heinz":
        out = means.heinz(a, b, args.t, cfg)
    else:
        out = means.sigma_f(a, b, _resolve_fn(args.f), cfg)
    _emit({"result": kernel.matrix_to_json(out),
           "config": {"op": args.op, "a": args.a, "b": args.b, "t": args.t,
                      "f": args.f if args.op == "sigma" else None,
                      "nodes": args.nodes}})
    return 0


def _resolve_fn(text):
    s = text.strip()
    if s.startswith("{"):
        return means.monotone_fn_from_dict(json.loads(s))
    return means.monotone_fn(s)


def _cmd_funcalc(args):
    a = kernel.load_matrix(args.matrix)
    fn = _resolve_fn(args.f)
    out = means.monotone_apply(fn, a, means.QuadCfg(nodes=args.nodes))
    _emit({"result": kernel.matrix_to_json(out),
           "config": {"f": args.f, "matrix": args.matrix, "nodes": args.nodes}})
    return 0


def _cmd_verify_run(args):
    dims = tuple(int(d) for d in args.dims.split(","))
    cfg = harness.HarnessConfig(trials=args.trials, dims=dims, seed=args.seed,
                                starts=args.starts, nodes=args.nodes,
                                oracle_samples=args.oracle_samples)
    report = harness.run_suite(args.suite, cfg)
    if args.report:
        if args.format == "json":
            _write_atomic(args.report, harness.report_to_json(report) + "\n")
        else:
            _write_atomic(args.report, harness.report_to_csv(report))
    _emit({
        "suite": report.suite,
        "predicates": len(report.predicates),
        "fails": sum(p.fails for p in report.predicates),
        "inconclusives": sum(p.inconclusives for p in report.predicates),
        "trials": sum(p.trials for p in report.predicates),
        "report": args.report,
        "config": report.config,
    })
    return 2 if harness.has_failures(report) else 0


def _cmd_verify_list(args):
    _emit({"predicates": [
        {"id": pid, "statement": stmt, "kind": kind}
        for pid, stmt, kind in harness.list_predicates()]})
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors; remap to "invalid input"
        return 0 if not exc.code else 3
    try:
        if args.cmd == "mat":
            return _cmd_mat_gen(args)
        if args.cmd == "qnr":
            return _cmd_qnr_radius(args) if args.sub == "radius" \
                else _cmd_qnr_range(args)
        if args.cmd == "sector":
            return _cmd_sector_angle(args)
        if args.cmd == "means":
            return _cmd_means_compute(args)
        if args.cmd == "funcalc":
            return _cmd_funcalc(args)
        if args.cmd == "verify":
            return _cmd_verify_run(args) if args.sub == "run" \
                else _cmd_verify_list(args)
        return 3
    except QuadratureNotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (QnrlabError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
