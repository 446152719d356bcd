"""Command-line interface.

Matrices are read and written as UTF-8 JSON objects ``{"n": N, "rows": [...]}``.
Numbers are printed with 17 significant digits. Exit status is 0 on success,
1 on a domain or parse error and 2 when a verification fails.

The default seed for ``identify`` and ``verify`` comes from the environment
variable ``TRACE_METRIC_SEED`` (0 when unset).
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from . import curvature, geodesics, isometry, verify
from .exceptions import ArgumentError, DomainError, TraceMetricError
from .manifold import classify_point
from .symcore import TOL_SYM, sym

SEED_ENV = "TRACE_METRIC_SEED"
EXIT_OK, EXIT_ERROR, EXIT_VERIFY = 0, 1, 2


class ParseError(TraceMetricError, ValueError):
    """Malformed matrix file or argument."""


def fmt(x):
    """17-significant-digit rendering of a float (``-0`` printed as ``0``)."""
    x = float(x)
    if x == 0.0:
        return "0"
    return f"{x:.17g}"


def dump_matrix(A):
    """Serialize a square array to the matrix JSON format."""
    A = np.asarray(A, dtype=float)
    rows = ", ".join("[" + ", ".join(fmt(v) for v in row) + "]" for row in A)
    return f'{{"n": {A.shape[0]}, "rows": [{rows}]}}'


def parse_matrix(text, source="<input>"):
    """Parse matrix JSON text into an ``(n, n)`` float array.

    Raises
    ------
    ParseError
        On invalid JSON, missing fields, wrong shape or non-finite entries.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(obj, dict) or "n" not in obj or "rows" not in obj:
        raise ParseError(f'{source}: expected an object with "n" and "rows"')
    n, rows = obj["n"], obj["rows"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f'{source}: "n" must be a positive integer')
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise ParseError(f'{source}: "rows" must be an {n}x{n} nested array')
    for r in rows:
        for v in r:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParseError(f"{source}: entries must be finite numbers, got {v!r}")
    return np.array(rows, dtype=float)


def load_matrix(path, symmetric=True, report=None):
    """Read a matrix file; symmetric ones are checked and symmetrized.

    Asymmetry up to ``1e-12`` (relative to the largest entry) is removed by
    averaging with the transpose and noted in ``report``; anything larger is
    a parse error.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    A = parse_matrix(text, path)
    if not symmetric:
        return A
    asym = float(np.abs(A - A.T).max())
    scale = max(float(np.abs(A).max()), 1.0)
    if asym > TOL_SYM * scale:
        raise ParseError(f"{path}: matrix is not symmetric (max |A - A^T| = {asym:.3e})")
    if asym > 0.0 and report is not None:
        report.append(f"note: {path} symmetrized (max |A - A^T| = {asym:.3e})")
    return sym(A)


def _seed(value):
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None or env.strip() == "":
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise ParseError(f"{SEED_ENV} must be an integer, got {env!r}") from exc


def _cmd_distance(args, out, notes):
    A = load_matrix(args.A, report=notes)
    B = load_matrix(args.B, report=notes)
    out.append(fmt(geodesics.distance(A, B)))


def _cmd_geodesic(args, out, notes):
    A = load_matrix(args.start, report=notes)
    B = load_matrix(args.end, report=notes)
    if args.steps is None:
        t = 0.5 if args.t is None else args.t
        out.append(dump_matrix(geodesics.interpolate(A, B, [t])[0]))
        return
    if args.steps < 1:
        raise ArgumentError("--steps must be >= 1")
    ts = np.arange(args.steps + 1) / args.steps
    for t, P in zip(ts, geodesics.interpolate(A, B, ts)):
        out.append(f'{{"t": {fmt(t)}, "matrix": {dump_matrix(P)}}}')


def _cmd_mean(args, out, notes):
    A = load_matrix(args.A, report=notes)
    B = load_matrix(args.B, report=notes)
    out.append(dump_matrix(geodesics.geometric_mean(A, B).matrix))


def _cmd_transporter(args, out, notes):
    A = load_matrix(args.A, report=notes)
    B = load_matrix(args.B, report=notes)
    out.append(dump_matrix(geodesics.congruence_transporter(A, B)))


def _cmd_curvature(args, out, notes):
    pt = classify_point(load_matrix(args.point, report=notes))
    out.append(f"manifold {pt.manifold}")
    out.append(f"signature {pt.p} {pt.q}")
    out.append(f"scalar {fmt(curvature.scalar_at(pt, 'summed'))}")
    out.append(f"scalar closed form {fmt(curvature.scalar_closed_form(pt.n))}")
    if args.report:
        if not pt.on_unit_det_slice:
            raise DomainError(f"--report needs a point with det = (-1)^(n-p); got det {fmt(pt.det)}")
        rep = curvature.einstein_check(pt, samples=args.samples, seed=_seed(args.seed))
        out.append(f"einstein residual {fmt(rep.einstein_residual)} over {rep.samples} samples")
        out.append(f"ricci constant {fmt(-pt.n / 4)}")
        out.append("ok" if rep.ok else "not ok")


def parse_word(text):
    """Parse ``inv;psi;congr:path`` into a list of isometry letters."""
    letters = []
    for raw in text.split(";"):
        tok = raw.strip()
        if tok == "inv":
            letters.append(isometry.INV)
        elif tok == "psi":
            letters.append(isometry.PSI)
        elif tok.startswith("congr:") and tok[6:]:
            letters.append(isometry.Congr(load_matrix(tok[6:], symmetric=False)))
        else:
            raise ParseError(f"bad word letter {tok!r}; expected inv, psi or congr:<path>")
    return letters


def _print_canonical(iso, out):
    out.append(f"family {iso.family}")
    out.append(f"a {iso.a}")
    out.append(f"b {iso.b}")
    out.append(f"M {dump_matrix(iso.M)}")


def _cmd_canonicalize(args, out, notes):
    iso = isometry.canonicalize(parse_word(args.word), n=args.n)
    _print_canonical(iso, out)


FAMILIES = {"congr": (0, 0), "inv": (1, 0), "psi": (0, 1), "inv-psi": (1, 1)}


def _cmd_identify(args, out, notes):
    M = load_matrix(args.M, symmetric=False)
    a, b = FAMILIES[args.family]
    true = isometry.CanonicalIsometry(M, a, b)
    got = isometry.identify(true, true.n, seed=_seed(args.seed))
    _print_canonical(got, out)
    err = float(np.linalg.norm(got.M - true.M) / np.linalg.norm(true.M))
    out.append(f"relative M error {fmt(err)}")
    same = (got.a, got.b) == (true.a, true.b) and err <= isometry.TOL_ID
    out.append("round trip ok" if same else "round trip FAILED: recovered isometry differs")
    return EXIT_OK if same else EXIT_VERIFY


def _cmd_verify(args, out, notes):
    if args.jobs < 1:
        raise ArgumentError("--jobs must be >= 1")
    results = verify.run_suite(args.suite, seed=_seed(args.seed), n=args.n, p=args.p, jobs=args.jobs)
    out.extend(r.line() for r in results)
    failed = [r.name for r in results if not r.passed]
    if failed:
        out.append("verify FAILED: " + ", ".join(failed))
        return EXIT_VERIFY
    out.append(f"verify ok: {len(results)} checks in suite {args.suite}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="tracemetric", description="Trace-metric geometry of symmetric matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (
        ("distance", "geodesic distance between SPD matrices"),
        ("mean", "geometric mean (geodesic midpoint)"),
        ("transporter", "SPD X with X A X = B"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("A")
        p.add_argument("B")

    p = sub.add_parser("geodesic", help="points on the geodesic from A to B")
    p.add_argument("--from", dest="start", required=True)
    p.add_argument("--to", dest="end", required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--t", type=float, help="single parameter value (default 0.5)")
    grp.add_argument("--steps", type=int, help="table at t = 0, 1/k, ..., 1")

    p = sub.add_parser("curvature", help="scalar curvature and Einstein report")
    p.add_argument("--point", required=True)
    p.add_argument("--report", action="store_true")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("canonicalize", help="reduce an isometry word to (M, a, b)")
    p.add_argument("--word", required=True)
    p.add_argument("--n", type=int, help="order, needed when the word has no congr letter")

    p = sub.add_parser("identify", help="identify a known isometry as a black box")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--M", required=True)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=sorted(verify.SUITES), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    return parser


COMMANDS = {
    "distance": _cmd_distance,
    "geodesic": _cmd_geodesic,
    "mean": _cmd_mean,
    "transporter": _cmd_transporter,
    "curvature": _cmd_curvature,
    "canonicalize": _cmd_canonicalize,
    "identify": _cmd_identify,
    "verify": _cmd_verify,
}


def run(argv, stdout=None, stderr=None):
    """Run one command; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; those are parse errors here
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    out, notes = [], []
    try:
        code = COMMANDS[args.command](args, out, notes) or EXIT_OK
    except (TraceMetricError, ValueError, np.linalg.LinAlgError) as exc:
        for line in notes:
            print(line, file=stderr)
        print(f"error: {exc}", file=stderr)
        return EXIT_ERROR
    for line in notes:
        print(line, file=stderr)
    for line in out:
        print(line, file=stdout)
    return code


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))
