"""Command line front end.

Exit codes: 0 success, 2 usage or parse error, 3 singular point or
non-smooth product, 4 degenerate spectrum, 5 failed verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import charoracle, fourier, radialop, regtrace
from .rootsys import (
    CartanType,
    UnsupportedType,
    build_root_system,
    fundamental,
    pi_involution,
)

EXIT_OK, EXIT_USAGE, EXIT_SINGULAR, EXIT_DEGENERATE, EXIT_VERIFY = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


# -- deterministic output ------------------------------------------------------


def _num(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    if x == int(x) and abs(x) < 2**53:
        return repr(float(x))
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON with fixed key order and 17 significant digits for floats."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([obj.real, obj.imag], indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray, complex)) for v in seq):
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _note(msg: str):
    print(msg, file=sys.stderr)


# -- shared setup ----------------------------------------------------------------


def _root_system(args):
    if not args.type:
        raise UsageError("--type is required")
    try:
        return build_root_system(CartanType.parse(args.type))
    except UnsupportedType as exc:
        raise UsageError(str(exc)) from exc


def _load_focal(path, gram=None) -> radialop.FocalData:
    try:
        data = json.loads(Path(path).read_text())
        return radialop.FocalData.from_json(data, gram=gram)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read focal data from {path}: {exc}") from exc


def _operator(args):
    rs = _root_system(args)
    if args.focal:
        gram = [[float(x) for x in row] for row in rs.gram]
        fd = _load_focal(args.focal, gram)
    elif args.group_case is not None:
        fd = radialop.group_case_focal(rs, args.group_case)
    else:
        raise UsageError("one of --group-case or --focal is required")
    try:
        return rs, radialop.RadialOperator(rs, fd)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _top(rs, level):
    if level < 0:
        raise UsageError("--level must be nonnegative")
    return tuple(level * c for c in rs.rho)


def _vector(text, rank, name):
    try:
        v = [float(x) for x in text.split(",")]
    except (AttributeError, ValueError) as exc:
        raise UsageError(f"cannot parse {name} {text!r}") from exc
    if len(v) != rank:
        raise UsageError(f"{name} needs {rank} components")
    return np.array(v)


# -- commands ---------------------------------------------------------------------


def cmd_roots(args) -> int:
    rs = _root_system(args)
    fw = [[float(x) for x in row] for row in rs.fundamental_weights]
    perm = pi_involution(rs)
    if args.format == "csv":
        header = ["j", "pi_j"] + [f"omega_{i + 1}" for i in range(rs.rank)] + [
            f"cartan_{i + 1}" for i in range(rs.rank)
        ]
        rows = [[j + 1, perm[j] + 1, *fw[j], *rs.cartan_matrix[j]] for j in range(rs.rank)]
        _emit(args, _csv_text(header, rows))
        return EXIT_OK
    report = {
        "type": str(rs.cartan_type),
        "rank": rs.rank,
        "simple_roots": [[float(x) for x in r] for r in rs.simple_roots],
        "gram": [[float(x) for x in r] for r in rs.gram],
        "cartan_matrix": [list(r) for r in rs.cartan_matrix],
        "weyl_order": rs.weyl_order,
        "fundamental_weights": fw,
        "pi_involution": [p + 1 for p in perm],
    }
    _emit(args, dumps(report) + "\n")
    return EXIT_OK


def cmd_operator(args) -> int:
    rs, op = _operator(args)
    m = radialop.assemble_matrix(op, _top(rs, args.level), root_coset=args.root_coset)
    report = m.to_json()
    if args.eigen:
        pairs = radialop.eigenfunctions(m)
        report["eigenvalues"] = [[lam.real, lam.imag] for lam, _ in pairs]
    if args.format == "csv":
        rows = [
            [r, c, m.entries[r, c].real, m.entries[r, c].imag]
            for r in range(m.size)
            for c in range(m.size)
            if m.entries[r, c] != 0
        ]
        _emit(args, _csv_text(["row", "col", "re", "im"], rows))
    else:
        _emit(args, dumps(report) + "\n")
    _note(f"basis size {m.size}; max entry against the order {m.above_diagonal_max():.3e}")
    return EXIT_OK


def _grid(rs, n):
    # fundamental parallelepiped of the coroot lattice, sampled at t = i/n
    lengths = rs.root_lengths
    steps = np.arange(n) / n
    pts = np.array(list(itertools.product(steps, repeat=rs.rank)))
    scale = np.array([2.0 / float(lengths[j]) for j in range(rs.rank)])
    return pts * scale


def cmd_generators(args) -> int:
    rs, op = _operator(args)
    if args.level < 1:
        raise UsageError("--level must be at least 1 for generators")
    gens = radialop.generators(op, args.level)
    layout = radialop.generator_layout(rs)
    grid = None
    if args.sample and args.sample > 0:
        x = _grid(rs, args.sample)
        vals = np.column_stack([np.real(fourier.evaluate(g, x)) for g in gens])
        header = [f"x{i + 1}" for i in range(rs.rank)] + [f"psi{j + 1}" for j in range(len(gens))]
        grid = _csv_text(header, np.column_stack([x, vals]).tolist())
    if args.format == "csv":
        if grid is None:
            raise UsageError("--format csv needs --sample n with n > 0")
        _emit(args, grid)
        return EXIT_OK
    report = {
        "type": str(rs.cartan_type),
        "level": args.level,
        "generators": [
            {
                "index": i + 1,
                "weight": list(fundamental(rs, j)),
                "part": part,
                "terms": g.to_json(),
            }
            for i, (g, (j, part)) in enumerate(zip(gens, layout))
        ],
    }
    if grid is not None and args.out:
        Path(args.out).with_suffix(".csv").write_text(grid)
    elif grid is not None:
        report["grid_csv"] = grid
    _emit(args, dumps(report) + "\n")
    return EXIT_OK


def cmd_check_characters(args) -> int:
    rs = _root_system(args)
    if args.group_case is None:
        args.group_case = 2
    _, op = _operator(args)
    m = radialop.assemble_matrix(op, _top(rs, args.level))
    rows = []
    all_ok = True
    for hw in itertools.product(range(args.level + 1), repeat=rs.rank):
        if sum(hw) > args.level:
            continue
        ch = charoracle.weyl_character(rs, charoracle.HighestWeight(hw))
        ok, lam, res = charoracle.check_eigen(m, ch, args.tol)
        all_ok &= ok
        rows.append({"highest_weight": list(hw), "eigen": ok, "eigenvalue": [lam.real, lam.imag], "residual": res})
    rows.sort(key=lambda r: (sum(r["highest_weight"]), r["highest_weight"]))
    if args.format == "csv":
        table = [
            [" ".join(map(str, r["highest_weight"])), int(r["eigen"]), *r["eigenvalue"], r["residual"]]
            for r in rows
        ]
        _emit(args, _csv_text(["highest_weight", "eigen", "re", "im", "residual"], table))
    else:
        _emit(args, dumps({"type": str(rs.cartan_type), "tolerance": args.tol, "characters": rows}) + "\n")
    return EXIT_OK if all_ok else EXIT_VERIFY


def cmd_regtrace(args) -> int:
    if args.focal:
        gram = None
        if args.type:
            rs = _root_system(args)
            gram = [[float(x) for x in row] for row in rs.gram]
        fd = _load_focal(args.focal, gram)
    elif args.group_case is not None and args.type:
        fd = radialop.group_case_focal(_root_system(args), args.group_case)
    else:
        raise UsageError("--focal, or --type with --group-case, is required")
    q = _vector(args.point, fd.rank, "--point")
    xi = _vector(args.direction, fd.rank, "--direction")
    report = regtrace.focal_trace_gap(fd, q, xi, args.truncation)
    if args.format == "csv":
        _emit(args, _csv_text(list(report), [list(report.values())]))
    else:
        _emit(args, dumps(report) + "\n")
    return EXIT_OK


def cmd_sample(args) -> int:
    """Seeded pointwise check of the cot and tan multipliers on random input."""
    rs = _root_system(args)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    rows = []
    for trial in range(args.trials):
        alpha = rs.positive_roots[rng.integers(len(rs.positive_roots))]
        alpha = tuple(c // 2 for c in alpha)
        h = {}
        for _ in range(3):
            w = tuple(int(2 * c) for c in rng.integers(-2, 3, size=rs.rank))
            h[w] = complex(rng.normal(), rng.normal())
        h = fourier.FourierPolynomial(rs, h)
        f = h * (fourier.FourierPolynomial.monomial(rs, alpha) - 1)
        x = rng.uniform(-1, 1, size=(64, rs.rank))
        a = x @ fourier._pairing(rs).T @ np.array(alpha, dtype=float)
        keep = np.abs(a - np.round(a)) > 1e-3
        x, a = x[keep], a[keep]
        want = fourier.evaluate(f, x) / np.tan(np.pi * a)
        got = fourier.evaluate(fourier.cot_multiply(f, alpha), x)
        err = float(np.max(np.abs(got - want)) / max(1.0, np.max(np.abs(want))))
        worst = max(worst, err)
        rows.append({"trial": trial, "alpha": list(alpha), "rel_error": err})
    ok = worst <= args.tol
    if args.format == "csv":
        _emit(args, _csv_text(["trial", "rel_error"], [[r["trial"], r["rel_error"]] for r in rows]))
    else:
        _emit(args, dumps({"seed": args.seed, "max_rel_error": worst, "passed": ok, "trials": rows}) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "roots": cmd_roots,
    "operator": cmd_operator,
    "generators": cmd_generators,
    "check-characters": cmd_check_characters,
    "regtrace": cmd_regtrace,
    "sample": cmd_sample,
}


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", help="Cartan type such as A2, B3, G2")
    common.add_argument("--group-case", type=int, metavar="MULT", help="use root-system focal data")
    common.add_argument("--focal", metavar="PATH", help="focal data JSON file")
    common.add_argument("--level", type=int, default=1)
    common.add_argument("--truncation", type=_positive_int, default=100000)
    common.add_argument("--tol", type=_positive_float, default=1e-8)
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    parser = argparse.ArgumentParser(prog="radialweyl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("roots", parents=[common], help="root system data")
    p = sub.add_parser("operator", parents=[common], help="matrix of the radial operator")
    p.add_argument("--eigen", action="store_true", help="also solve for eigenvalues")
    p.add_argument("--root-coset", action="store_true", help="keep only the root-lattice coset of the top weight")
    p = sub.add_parser("generators", parents=[common], help="real generating eigenfunctions")
    p.add_argument("--sample", type=int, default=0, metavar="N", help="grid points per axis")
    sub.add_parser("check-characters", parents=[common], help="characters as eigenfunctions")
    p = sub.add_parser("regtrace", parents=[common], help="focal spectrum against the closed form")
    p.add_argument("--point", required=True, help="comma separated coordinates")
    p.add_argument("--direction", required=True, help="comma separated coordinates")
    p = sub.add_parser("sample", parents=[common], help="seeded pointwise multiplier check")
    p.add_argument("--trials", type=_positive_int, default=20)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (fourier.NotSmooth, radialop.SingularPoint, regtrace.FocalHit) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except radialop.DegenerateSpectrum as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
