"""Command-line front end.

Exit codes: 0 pass, 1 verification failure, 2 usage or parse error,
3 amplitude cap exceeded.
"""
import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager

import numpy as np

from . import __version__
from .config import CAP_ENV, OPERATOR_TOL, STATE_TOL, check_cap
from .errors import CapExceededError, NsghzError, ParseError
from .ghz import (ghz_general, ghz_qubit, ghz_qudit, seeded_amplitudes,
                  verify_half_alpha_graph, verify_prop1, verify_prop3,
                  verify_qudit_ghz_hypergraph)
from .hypergraph import load
from .builder import build_hypergraph_state
from .stabilizer import verify_prop2, verify_prop2_qudit
from .xalpha import (appendix_c_corrections, correction_product_residual,
                     resolve_commutation_sign, verify_appendix_c)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

PROPS = ("prop1", "half-alpha", "prop2", "prop2-qudit", "qudit-ghz", "prop3",
         "appendix-c", "commutation")
QUBIT_ONLY = {"prop1", "half-alpha", "prop2"}
NO_ALPHA = {"half-alpha", "prop3", "commutation"}
EXTRA_SITE = {"prop2", "prop2-qudit"}
OPERATOR_LEVEL = {"half-alpha", "appendix-c", "commutation"}


# -- argument parsing helpers ---------------------------------------------------

def parse_grid(text):
    """``start:stop:count`` (inclusive linspace), a comma list, or one number."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 0:
                raise ValueError
            return [float(x) for x in np.linspace(start, stop, count)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use start:stop:count") from None


def parse_int_range(text):
    """``lo:hi`` (inclusive), a comma list, or one integer."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}; use lo:hi") from None


def parse_complex_vector(text):
    """Comma-separated complex literals such as ``1,0.5j,-1+2j`` (``i`` also works)."""
    try:
        return [complex(tok.strip().replace(" ", "").replace("i", "j"))
                for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad complex vector {text!r}") from None


def _non_negative(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"tolerance must be >= 0, got {text}")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    common.add_argument("--cap", type=_positive_int, default=None,
                        help=f"amplitude cap (default ${CAP_ENV} or 2**20)")

    parser = argparse.ArgumentParser(prog="nsghz", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nsghz {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="dump state amplitudes")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", help="hypergraph file")
    src.add_argument("--ghz", choices=("qubit", "qudit", "general"))
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--a", type=parse_complex_vector)
    p.add_argument("--all", action="store_true", help="include zero amplitudes")

    p = sub.add_parser("verify", parents=[common], help="check one parameter point")
    p.add_argument("prop", choices=PROPS)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--a", type=parse_complex_vector)
    p.add_argument("--tol", type=_non_negative)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sweep", parents=[common], help="check a parameter grid")
    p.add_argument("prop", choices=PROPS)
    p.add_argument("--n", type=parse_int_range, required=True)
    p.add_argument("--d", type=parse_int_range, default=[2])
    p.add_argument("--alpha", type=parse_grid, default=[0.5])
    p.add_argument("--samples", type=int, default=20, help="random vectors per point (prop3)")
    p.add_argument("--tol", type=_non_negative)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=0, help="0 = one per CPU")

    p = sub.add_parser("decompose", parents=[common], help="list correction terms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--tol", type=_non_negative, default=OPERATOR_TOL)

    p = sub.add_parser("resolve-sign", parents=[common],
                       help="decide the sign in the X / multi-controlled Z commutation")
    p.add_argument("--d", type=parse_int_range, default=[2, 3, 4, 5])
    p.add_argument("--m", type=parse_int_range, default=[2, 3])
    p.add_argument("--tol", type=_non_negative, default=OPERATOR_TOL)
    return parser


# -- checks ----------------------------------------------------------------------

def default_tol(prop):
    return OPERATOR_TOL if prop in OPERATOR_LEVEL else STATE_TOL


def run_check(prop, params):
    """Dispatch one parameter point; ``params`` is a plain dict."""
    n, d, alpha, tol = params.get("n"), params.get("d", 2), params.get("alpha"), params["tol"]
    if prop == "prop1":
        return verify_prop1(n, alpha, tol)
    if prop == "half-alpha":
        return verify_half_alpha_graph(n, tol)
    if prop == "prop2":
        return verify_prop2(n, alpha, tol)
    if prop == "prop2-qudit":
        return verify_prop2_qudit(n, d, alpha, tol)
    if prop == "qudit-ghz":
        return verify_qudit_ghz_hypergraph(n, d, alpha, tol)
    if prop == "prop3":
        report = verify_prop3(n, d, params["a"], tol)
        if "sample" in params:
            report.params["sample"] = params["sample"]
        return report
    if prop == "appendix-c":
        return verify_appendix_c(n, d, alpha, tol)
    if prop == "commutation":
        return resolve_commutation_sign((d,), (n,), tol)
    raise ValueError(f"unknown check {prop!r}")


def _point(prop, n, d, alpha, tol, seed=0, sample=None, a=None):
    params = {"n": n, "d": 2 if prop in QUBIT_ONLY else d, "tol": tol}
    if prop not in NO_ALPHA:
        params["alpha"] = alpha
    if prop == "prop3":
        if a is None:
            a = seeded_amplitudes(params["d"], seed, 0 if sample is None else sample)
        params["a"] = [complex(x) for x in a]
        if sample is not None:
            params["sample"] = sample
    return params


def _sites_needed(prop, n):
    return n + 1 if prop in EXTRA_SITE else n


def _check_point_cap(prop, params, cap):
    if prop == "commutation":
        return
    check_cap(params["d"], _sites_needed(prop, params["n"]), cap)


def _run_point(task):
    prop, params = task
    return run_check(prop, params)


# -- output ----------------------------------------------------------------------

def _header(argv):
    return {"tool": "nsghz", "version": __version__, "command": list(argv)}


def _json_line(record):
    return json.dumps(record, sort_keys=True) + "\n"


def _num(x):
    return f"{float(x) + 0.0:.17g}"


@contextmanager
def _cap_env(cap):
    """Expose ``--cap`` to library calls and worker processes via the env var."""
    if cap is None:
        yield
        return
    old = os.environ.get(CAP_ENV)
    os.environ[CAP_ENV] = str(cap)
    try:
        yield
    finally:
        if old is None:
            os.environ.pop(CAP_ENV, None)
        else:
            os.environ[CAP_ENV] = old


# -- commands --------------------------------------------------------------------

def cmd_build(args, argv):
    if args.file:
        try:
            g = load(args.file)
        except OSError as exc:
            raise ParseError(f"cannot read {args.file}: {exc.strerror}") from None
        state = build_hypergraph_state(g, args.cap)
    else:
        if args.n is None:
            raise ParseError("--ghz needs --n")
        d = 2 if args.ghz == "qubit" else args.d
        check_cap(d, args.n, args.cap)
        if args.ghz == "qubit":
            state = ghz_qubit(args.n, args.alpha)
        elif args.ghz == "qudit":
            state = ghz_qudit(args.n, d, args.alpha)
        else:
            if args.a is None:
                raise ParseError("--ghz general needs --a")
            state = ghz_general(args.n, d, args.a)
    out = []
    if args.format == "structured":
        head = _header(argv)
        head.update({"d": state.d, "n": state.n})
        out.append(_json_line(head))
    else:
        out.append(f"# d={state.d} n={state.n}\n# index basis re im\n")
    for i, amp in enumerate(state.amps):
        if amp == 0 and not args.all:
            continue
        if args.format == "structured":
            out.append(_json_line({"index": i, "basis": state.label(i),
                                   "re": float(amp.real) + 0.0, "im": float(amp.imag) + 0.0}))
        else:
            out.append(f"{i} {state.label(i)} {_num(amp.real)} {_num(amp.imag)}\n")
    return EXIT_PASS, "".join(out)


def _verify_params(args):
    prop = args.prop
    tol = default_tol(prop) if args.tol is None else args.tol
    if prop == "commutation":
        params = {"n": args.n or 2, "d": args.d or 2, "tol": tol}
        return params
    if args.n is None:
        raise ParseError(f"{prop} needs --n")
    d = args.d or 2
    if prop in QUBIT_ONLY and d != 2:
        raise ParseError(f"{prop} is qubit-only; drop --d or use --d 2")
    a = args.a
    if prop == "prop3" and a is not None and len(a) != d:
        raise ParseError(f"--a has {len(a)} entries but d={d}")
    return _point(prop, args.n, d, args.alpha, tol, seed=args.seed, a=a)


def cmd_verify(args, argv):
    params = _verify_params(args)
    _check_point_cap(args.prop, params, args.cap)
    report = run_check(args.prop, params)
    if args.format == "structured":
        text = _json_line(_header(argv)) + report.to_jsonl()
    else:
        text = report.format_text() + "\n"
    return (EXIT_PASS if report.passed else EXIT_FAIL), text


def sweep_tasks(prop, ns, ds, alphas, tol, samples=20, seed=0):
    """Grid points in row order: n, then d, then alpha (or sample index)."""
    ds = [2] if prop in QUBIT_ONLY else ds
    tasks = []
    for n, d in itertools.product(ns, ds):
        if prop == "prop3":
            tasks += [(prop, _point(prop, n, d, None, tol, seed, s)) for s in range(samples)]
        elif prop in NO_ALPHA:
            tasks.append((prop, _point(prop, n, d, None, tol)))
        else:
            tasks += [(prop, _point(prop, n, d, a, tol)) for a in alphas]
    return tasks


def cmd_sweep(args, argv):
    tol = default_tol(args.prop) if args.tol is None else args.tol
    tasks = sweep_tasks(args.prop, args.n, args.d, args.alpha, tol, args.samples, args.seed)
    for prop, params in tasks:
        _check_point_cap(prop, params, args.cap)
    workers = args.workers or os.cpu_count() or 1
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            reports = list(pool.map(_run_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        reports = [_run_point(t) for t in tasks]
    failed = sum(not r.passed for r in reports)
    if args.format == "structured":
        text = _json_line(_header(argv)) + "".join(r.to_jsonl() for r in reports)
    else:
        lines = []
        for i, r in enumerate(reports):
            params = " ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                              for k, v in r.params.items() if k not in ("a", "tol"))
            worst = max(r.metrics, key=lambda m: m.error)
            lines.append(f"[{i}] {r.proposition} {params} {'PASS' if r.passed else 'FAIL'} "
                         f"worst {worst.name} error {worst.error:.3e} (tol {worst.tol:g})")
        lines.append(f"{len(reports)} rows, {failed} failed")
        text = "\n".join(lines) + "\n"
    return (EXIT_FAIL if failed else EXIT_PASS), text


def cmd_decompose(args, argv):
    check_cap(args.d, args.n, args.cap)
    terms = appendix_c_corrections(args.n, args.d, args.alpha, args.cap)
    residual = correction_product_residual(args.n, args.d, args.alpha, terms)
    passed = residual < args.tol
    params = {"n": args.n, "d": args.d, "alpha": args.alpha, "tol": args.tol}
    if args.format == "structured":
        out = [_json_line(_header(argv))]
        for t in terms:
            entries = [[list(k), v] for k, v in t.nonzero(args.d).items()]
            out.append(_json_line({"prop": "decompose", "params": params,
                                   "metric": "I_" + ",".join(map(str, t.vertices)),
                                   "value": entries, "pass": passed}))
        out.append(_json_line({"prop": "decompose", "params": params,
                               "metric": "product_residual", "value": residual, "pass": passed}))
        return (EXIT_PASS if passed else EXIT_FAIL), "".join(out)
    lines = [f"corrections for d={args.d} n={args.n} alpha={args.alpha:g}"]
    if not terms:
        lines.append("no corrections")
    for t in terms:
        entries = "; ".join(f"({','.join(map(str, k))}) {_num(v)}"
                            for k, v in t.nonzero(args.d).items())
        lines.append(f"I_{{{','.join(map(str, t.vertices))}}}: {entries}")
    lines.append(f"product residual {residual:.3e} ({'PASS' if passed else 'FAIL'}, tol {args.tol:g})")
    return (EXIT_PASS if passed else EXIT_FAIL), "\n".join(lines) + "\n"


def cmd_resolve_sign(args, argv):
    bad = [d for d in args.d if not 2 <= d <= 5] + [m for m in args.m if not 2 <= m <= 4]
    if bad:
        raise ParseError("resolve-sign supports d in 2..5 and m in 2..4")
    report = resolve_commutation_sign(tuple(args.d), tuple(args.m), args.tol)
    if args.format == "structured":
        text = _json_line(_header(argv)) + report.to_jsonl()
    else:
        text = report.format_text() + "\n"
    return (EXIT_PASS if report.passed else EXIT_FAIL), text


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "sweep": cmd_sweep,
            "decompose": cmd_decompose, "resolve-sign": cmd_resolve_sign}


def _emit(text, path):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        with _cap_env(args.cap):
            code, text = COMMANDS[args.command](args, argv)
        _emit(text, args.output)
        return code
    except CapExceededError as exc:
        print(f"nsghz: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (NsghzError, ValueError, OSError) as exc:
        print(f"nsghz: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
