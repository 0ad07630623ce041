"""Command line front end.

Subcommands: gen, invert, check, det, bench.  Reports go to stdout as
JSON; errors go to stderr as JSON.  Exit codes are a stable contract:
0 ok, 2 parse/request error, 3 validation failure, 4 numerical failure,
5 identity check failure.
"""

import argparse
import json
import statistics
import sys
import time

import numpy as np

from . import io as rmpio
from ._linalg import fnorm
from .core import (
    IdentityTolerance,
    StructuredInverse,
    assemble,
    reassemble_inverse,
    validate,
)
from .determinant import det_inverse_via_lemma, det_via_lemma, logdet_via_lemma
from .direct import AnsatzParams, structured_inverse_direct, structured_inverse_general
from .errors import RankfillError
from .identities import check_identities, check_penrose, riedel_inverse
from .instances import GeneratorSpec, generate, haar_unitary
from .svd import structured_inverse_svd

BENCH_FAIL_RATIO = 2.0
BENCH_WARN_RATIO = 5.0


def _jsonable(value):
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def _emit(report):
    json.dump(_jsonable(report), sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load_validated(path, tol_rank=None):
    doc = rmpio.read_problem_file(path)
    problem = validate(doc.A, doc.e, doc.D, doc.f, tol_rank=tol_rank)
    return doc, problem


def _stored_or_computed_inverse(doc, problem):
    if doc.has_inverse_factors:
        inv = StructuredInverse(
            G=doc.G, x=doc.x, y=doc.y, n=problem.n, k=problem.k,
            field=problem.field,
        )
        return inv, "stored"
    return structured_inverse_svd(problem), "computed"


def _gaussian(rng, shape, field):
    g = rng.standard_normal(shape)
    if field == "complex":
        g = (g + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return g


def _drawn_general_params(problem, seed=7, max_pivot_cond=1e6):
    """Deterministic well-conditioned (u, v, M) for the general path."""
    rng = np.random.Generator(np.random.Philox(seed))
    n, k, field = problem.n, problem.k, problem.field

    def draw(target):
        while True:
            cand = _gaussian(rng, (n, k), field)
            s = np.linalg.svd(cand.conj().T @ target, compute_uv=False)
            if s[-1] > 0 and s[0] / s[-1] < max_pivot_cond:
                return cand

    u = draw(problem.e)
    v = draw(problem.f)
    spectrum = np.logspace(0.0, -np.log10(5.0), k) if k > 1 else np.ones(1)
    M = (haar_unitary(rng, k, field) * spectrum) @ haar_unitary(rng, k, field).conj().T
    return AnsatzParams(u=u, v=v, M=M)


def _random_core(rng, k, field, cond=10.0):
    spectrum = np.logspace(0.0, -np.log10(cond), k) if k > 1 else np.ones(1)
    return (haar_unitary(rng, k, field) * spectrum) @ haar_unitary(rng, k, field).conj().T


def cmd_gen(args):
    spec = GeneratorSpec(
        n=args.n, k=args.k, seed=args.seed, field=args.field,
        sigma_spread=args.spread, coupling=args.coupling, d_cond=args.dcond,
    )
    problem = generate(spec)
    rmpio.write_problem_file(args.out, problem)
    _emit({
        "command": "gen",
        "out": args.out,
        "n": spec.n, "k": spec.k, "seed": spec.seed, "field": spec.field,
        "sigma_spread": spec.sigma_spread, "coupling": spec.coupling,
        "d_cond": spec.d_cond,
        "diagnostics": problem.diagnostics,
    })
    return 0


def cmd_invert(args):
    doc, problem = _load_validated(args.input, tol_rank=args.tol)
    if args.path == "svd":
        inv = structured_inverse_svd(problem)
    elif args.path == "direct":
        inv = structured_inverse_direct(problem)
    else:
        inv = structured_inverse_general(problem, _drawn_general_params(problem))

    dense = reassemble_inverse(inv, problem.D)
    filled = assemble(problem)
    i_n = np.eye(problem.n, dtype=filled.dtype)
    report = {
        "command": "invert",
        "input": args.input,
        "path": args.path,
        "n": problem.n, "k": problem.k, "field": problem.field,
        "residual_right": fnorm(filled @ dense - i_n),
        "residual_left": fnorm(dense @ filled - i_n),
        "conditioning": {**problem.diagnostics, **inv.diagnostics},
        "out": args.out,
    }
    if args.path != "svd":
        ref = structured_inverse_svd(problem)
        report["path_agreement_vs_svd"] = {
            "G_rel_diff": fnorm(inv.G - ref.G) / max(fnorm(ref.G), 1e-300),
            "x_rel_diff": fnorm(inv.x - ref.x) / max(fnorm(ref.x), 1e-300),
            "y_rel_diff": fnorm(inv.y - ref.y) / max(fnorm(ref.y), 1e-300),
        }
    rmpio.write_problem_file(args.out, problem, inverse=inv, dense_inverse=dense)
    _emit(report)
    return 0


def cmd_check(args):
    doc, problem = _load_validated(args.input)
    tol = IdentityTolerance(abs=args.tol, rel=args.tol)
    inv, source = _stored_or_computed_inverse(doc, problem)

    ident = check_identities(problem, inv, tol)
    penrose = check_penrose(problem.A, inv.G, tol)
    # (iii)/(iv) may legitimately fail: G is not the Moore-Penrose inverse
    # unless e y* and x f* happen to be Hermitian.
    required_penrose = ("AGA_minus_A", "GAG_minus_G")

    riedel = riedel_inverse(problem)
    reassembled = reassemble_inverse(inv, problem.D)
    riedel_residual = fnorm(riedel - reassembled)
    riedel_scale = max(fnorm(riedel), fnorm(reassembled))
    riedel_ok = tol.accepts(riedel_residual, riedel_scale)

    ok = (
        ident.all_passed
        and all(penrose[name][1] for name in required_penrose)
        and riedel_ok
    )
    _emit({
        "command": "check",
        "input": args.input,
        "inverse_source": source,
        "identities": ident.to_dict(),
        "penrose": {
            name: {
                "residual": residual,
                "passed": passed,
                "required": name in required_penrose,
            }
            for name, (residual, passed) in penrose.items()
        },
        "riedel_agreement": {
            "residual": riedel_residual,
            "scale": riedel_scale,
            "passed": riedel_ok,
        },
        "all_passed": ok,
    })
    return 0 if ok else 5


def cmd_det(args):
    doc, problem = _load_validated(args.input)
    inv, source = _stored_or_computed_inverse(doc, problem)
    lemma = det_via_lemma(problem)
    dense = np.linalg.det(assemble(problem))
    dense = complex(dense) if problem.field == "complex" else float(dense)
    inverse_lemma = det_inverse_via_lemma(inv, problem.D)
    sign, logabs = logdet_via_lemma(problem)
    _emit({
        "command": "det",
        "input": args.input,
        "inverse_source": source,
        "det_lemma": lemma,
        "det_dense": dense,
        "det_inverse_lemma": inverse_lemma,
        "relative_gap": abs(lemma - dense) / max(abs(dense), 1e-300),
        "logdet_sign": sign,
        "logdet_magnitude": logabs,
    })
    return 0


def _timed(fn, *fn_args):
    start = time.perf_counter()
    result = fn(*fn_args)
    return time.perf_counter() - start, result


def run_benchmark(n, k, repeats=5, seed=0):
    """Median times: structured construction, D-swap reassembly, dense LU.

    The D-swap advantage is the measurable content of the D-independence
    of (G, x, y).  A Woodbury update on a diagonally shifted (hence
    invertible) copy of A is timed as a context baseline; it is not
    applicable to the singular A itself.
    """
    spec = GeneratorSpec(n=n, k=k, seed=seed)
    problem = generate(spec)
    field = problem.field
    rng = np.random.Generator(np.random.Philox(seed + 1))

    construct = {"svd": [], "direct": []}
    inv = None
    for _ in range(repeats):
        t, inv = _timed(structured_inverse_svd, problem)
        construct["svd"].append(t)
    for _ in range(repeats):
        t, _ = _timed(structured_inverse_direct, problem)
        construct["direct"].append(t)

    shifted = problem.A + np.eye(n, dtype=problem.A.dtype)
    shifted_inv = np.linalg.inv(shifted)

    reassemble_times, dense_times, woodbury_times = [], [], []
    reassemble_residuals, dense_residuals = [], []
    i_n = np.eye(n, dtype=problem.A.dtype)
    for _ in range(repeats):
        d_fresh = _random_core(rng, k, field)
        filled = problem.A + problem.e @ d_fresh @ problem.f.conj().T

        t_update, updated = _timed(reassemble_inverse, inv, d_fresh)
        t_dense, dense = _timed(np.linalg.inv, filled)
        reassemble_times.append(t_update)
        dense_times.append(t_dense)
        reassemble_residuals.append(fnorm(filled @ updated - i_n))
        dense_residuals.append(fnorm(filled @ dense - i_n))

        def woodbury():
            core = np.linalg.inv(d_fresh) \
                + problem.f.conj().T @ shifted_inv @ problem.e
            gain = shifted_inv @ problem.e
            return shifted_inv - gain @ np.linalg.solve(core, problem.f.conj().T @ shifted_inv)

        t_woodbury, _ = _timed(woodbury)
        woodbury_times.append(t_woodbury)

    med_reassemble = statistics.median(reassemble_times)
    med_dense = statistics.median(dense_times)
    speedup = med_dense / med_reassemble if med_reassemble > 0 else float("inf")
    status = "ok"
    if speedup < BENCH_FAIL_RATIO:
        status = "fail"
    elif speedup < BENCH_WARN_RATIO:
        status = "warn"
    return {
        "command": "bench",
        "n": n, "k": k, "repeats": repeats, "seed": seed,
        "construct_seconds": {
            name: statistics.median(times) for name, times in construct.items()
        },
        "reassemble_seconds": med_reassemble,
        "dense_invert_seconds": med_dense,
        "woodbury_update_on_shifted_seconds": statistics.median(woodbury_times),
        "speedup_dense_over_reassemble": speedup,
        "residual_reassemble_max": max(reassemble_residuals),
        "residual_dense_max": max(dense_residuals),
        "warn_below": BENCH_WARN_RATIO,
        "fail_below": BENCH_FAIL_RATIO,
        "status": status,
    }


def cmd_bench(args):
    # status conveys the speedup verdict; the exit code only reflects errors
    report = run_benchmark(args.n, args.k, repeats=args.repeats, seed=args.seed)
    _emit(report)
    return 0


def _nonneg_float(text):
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rankfill",
        description="Structured inverses of singular matrices completed by "
                    "rank-k updates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a reproducible problem file")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--field", choices=("real", "complex"), default="real")
    gen.add_argument("--spread", type=float, default=10.0,
                     help="sigma_max/sigma_min of A's kept spectrum")
    gen.add_argument("--coupling", type=float, default=0.5,
                     help="fraction of e, f mass inside range(A)/range(A*)")
    gen.add_argument("--dcond", type=float, default=10.0,
                     help="condition number of D")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen)

    inv = sub.add_parser("invert", help="compute (G, x, y) and the dense inverse")
    inv.add_argument("input")
    inv.add_argument("--path", choices=("svd", "direct", "general"), default="svd")
    inv.add_argument("--out", required=True)
    inv.add_argument("--tol", type=_nonneg_float, default=None,
                     help="rank-decision tolerance (default n*eps)")
    inv.set_defaults(func=cmd_invert)

    chk = sub.add_parser("check", help="verify the identity suite of a file")
    chk.add_argument("input")
    chk.add_argument("--tol", type=_nonneg_float, default=1e-9,
                     help="identity tolerance, used as both abs and rel")
    chk.set_defaults(func=cmd_check)

    det = sub.add_parser("det", help="determinant of the completed sum, both routes")
    det.add_argument("input")
    det.set_defaults(func=cmd_det)

    ben = sub.add_parser("bench", help="time D-swap reassembly against dense LU")
    ben.add_argument("--n", type=int, required=True)
    ben.add_argument("--k", type=int, required=True)
    ben.add_argument("--repeats", type=int, default=5)
    ben.add_argument("--seed", type=int, default=0)
    ben.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RankfillError as exc:
        json.dump({"error": exc.code, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
