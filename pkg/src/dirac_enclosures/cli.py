"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or precondition
error, 3 numerical failure.
"""
import argparse
import math
import sys

import numpy as np

from . import enclosures as enc
from .curves import Grid, default_box, trace_level_set, spectrum_mask
from .errors import (
    AtThreshold,
    BadExponent,
    DiracError,
    NoConvergence,
    NonFinite,
    Singular,
    SpectralPoint,
)
from .operators import load_potential, truncated_spectrum
from .resolvent import resolvent_block, t_matrix, truncated_free_resolvent
from .serialize import curveset_to_csv, curveset_to_dict, dumps, format_float
from .spectral_map import dist_to_spectrum, k_from_lambda, on_spectrum
from . import verify

BOUNDS = [k.value for k in enc.Kind]

# values used when neither a flag nor the config file provides one
DEFAULTS = {
    "nx": 800, "ny": 400, "format": "json", "trials": 100, "seed": 0,
    "count": 20, "jmax": 10, "kind": "l1",
}


class UsageError(Exception):
    pass


def parse_real(text):
    t = str(text).strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    return float(t)


def parse_complex(text):
    parts = str(text).split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")
    return complex(float(parts[0]), float(parts[1]))


def parse_box(text):
    parts = [float(s) for s in str(text).split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected x0,x1,y0,y1")
    return parts


def read_config(path):
    """Read ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


CONVERTERS = {
    "m": float, "Q": float, "p": parse_real, "q": parse_real, "lam": parse_complex,
    "lambda": parse_complex, "nx": int, "ny": int, "N": int, "trials": int, "seed": int,
    "count": int, "jmax": int, "box": parse_box,
}


def merge_config(args):
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    for key, value in cfg.items():
        dest = "lam" if key == "lambda" else key
        if hasattr(args, dest) and getattr(args, dest) is None:
            conv = CONVERTERS.get(key, str)
            try:
                setattr(args, dest, conv(value))
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {key}: {exc}") from exc
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return args


def require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            flag = "--lambda" if name == "lam" else f"--{name}"
            raise UsageError(f"missing required parameter {flag}")


def check_mass(m):
    if not (math.isfinite(m) and m >= 0):
        raise UsageError("--m must be a finite non-negative number")


def exponents(args, kind):
    """Return ``(p, q)`` from whichever of ``--p``/``--q`` was given."""
    if args.p is not None and args.q is not None:
        raise UsageError("give only one of --p and --q")
    if kind is enc.Kind.L1:
        if args.p not in (None, 1.0) or args.q not in (None, math.inf):
            raise UsageError("the l1 bound needs p = 1")
        return 1.0, math.inf
    if args.p is None and args.q is None:
        raise UsageError("one of --p or --q is required")
    if args.p is not None:
        if not args.p >= 1:
            raise UsageError("--p must be >= 1")
        return args.p, enc.conjugate_exponent(args.p)
    if not args.q >= 1:
        raise UsageError("--q must be >= 1")
    q = args.q
    p = math.inf if q == 1 else (1.0 if math.isinf(q) else q / (q - 1.0))
    return p, q


def exponent_json(x):
    return "inf" if math.isinf(x) else x


def region_d_flags(z, m):
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=bool)
    off = ~np.asarray(on_spectrum(z, m))
    if np.any(off):
        out[off] = enc.in_region_D(z[off], m)
    return out


def cmd_eval(args, out):
    require(args, "m", "lam", "bound")
    check_mass(args.m)
    kind = enc.Kind(args.bound)
    p, q = exponents(args, kind)
    lam = args.lam
    if on_spectrum(lam, args.m):
        raise SpectralPoint("lambda lies in the essential spectrum")
    kp = k_from_lambda(lam, args.m)
    value = float(enc.bound_function(kind, args.m, p=p)(lam))
    result = {
        "bound": kind.value, "m": args.m, "p": exponent_json(p), "q": exponent_json(q),
        "lambda": {"re": lam.real, "im": lam.imag},
        "bound_value": value,
        "k": {"re": kp.k.real, "im": kp.k.imag},
        "dist": float(dist_to_spectrum(lam, args.m)),
        "in_region_d": bool(enc.in_region_D(lam, args.m)),
    }
    if args.Q is not None:
        if kind is enc.Kind.L1:
            result["member_given_Q"] = bool(enc.in_l1_enclosure(lam, args.m, args.Q))
        else:
            result["member_given_Q"] = bool(value * args.Q >= 1.0)
    out.write(dumps(result, indent=2) + "\n")
    return 0


def cmd_trace(args, out):
    require(args, "m", "Q", "bound", "out")
    check_mass(args.m)
    kind = enc.Kind(args.bound)
    p, q = exponents(args, kind)
    if args.box is None:
        base = default_box(args.m)
        box = [base.x_min, base.x_max, base.y_min, base.y_max]
    else:
        box = args.box
    try:
        grid = Grid(*box, args.nx, args.ny)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    m, Q = args.m, args.Q
    flag = (lambda z: region_d_flags(z, m)) if args.flag_region_d else None
    if kind is enc.Kind.L1:
        curves = trace_level_set(lambda z: enc.l1_boundary_function(z, m, Q), 0.0, grid, flag=flag)
    else:
        F = enc.bound_function(kind, m, p=p)
        curves = trace_level_set(lambda z: np.asarray(F(z)) * Q, 1.0, grid,
                                 mask=spectrum_mask(m, grid), flag=flag)
    if args.format == "csv":
        text = curveset_to_csv(curves)
    else:
        data = curveset_to_dict(curves, m, Q, kind.value)
        data["p"], data["q"] = exponent_json(p), exponent_json(q)
        text = dumps(data) + "\n"
    with open(args.out, "w") as fh:
        fh.write(text)
    out.write(f"{curves.component_count}\n")
    return 0


def cmd_classify(args, out):
    require(args, "m", "Q")
    check_mass(args.m)
    lo, hi = enc.topology_thresholds(args.m)
    topo = enc.classify_topology(args.m, args.Q)
    out.write(f"{topo.value}\n{format_float(lo)}\n{format_float(hi)}\n")
    return 0


def cmd_spectrum(args, out):
    require(args, "m", "potential", "N")
    check_mass(args.m)
    try:
        V = load_potential(args.potential)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read potential: {exc}") from exc
    vals, genuine = truncated_spectrum(args.m, V, args.N)
    out.write("re,im,genuine\n")
    for z, g in zip(vals, genuine):
        out.write(f"{format_float(z.real)},{format_float(z.imag)},{int(g)}\n")
    return 0


def cmd_verify(args, out):
    require(args, "suite", "seed")
    if args.suite == "containment":
        require(args, "m", "Q")
        check_mass(args.m)
        kind = enc.Kind(args.kind)
        p, _ = exponents(args, kind)
        N = 300 if args.N is None else args.N
        report = verify.run_containment(args.m, p, args.Q, kind, args.trials, N, args.seed)
        out.write(dumps(report.to_dict(), indent=1) + "\n")
        return 1 if report.violations else 0
    if args.suite == "optimality":
        require(args, "m", "Q")
        check_mass(args.m)
        N = args.N if args.N is not None else 500
        witnesses = verify.optimality_suite(args.m, args.Q, args.count, N)
        bad = [w for w in witnesses
               if not (abs(w.upsilon_norm - args.Q) <= 1e-10 and w.det_residual <= 1e-10
                       and w.eig_gap <= 1e-6)]
        out.write(dumps({"m": args.m, "Q": args.Q, "N": N, "seed": args.seed,
                         "failures": len(bad), "witnesses": [w.to_dict() for w in witnesses]},
                        indent=1) + "\n")
        return 1 if bad or not witnesses else 0
    report = verify.bs_equivalence_suite(args.trials, 300 if args.N is None else args.N, args.seed)
    out.write(dumps(report.to_dict(), indent=1) + "\n")
    return 0 if report.ok else 1


def cmd_probe(args, out):
    require(args, "m", "lam", "N", "jmax")
    check_mass(args.m)
    kp = k_from_lambda(args.lam, args.m)
    R = truncated_free_resolvent(args.lam, args.m, args.N)
    dev = 0.0
    for j in range(-args.jmax, args.jmax + 1):
        dev = max(dev, float(np.max(np.abs(resolvent_block(R, args.N, 0, j) - t_matrix(j, kp)))))
    out.write(dumps({"m": args.m, "lambda": {"re": args.lam.real, "im": args.lam.imag},
                     "N": args.N, "jmax": args.jmax, "max_deviation": dev}, indent=2) + "\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="dirac-enclosures", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="file of 'key = value' lines; flags take precedence")
        p.add_argument("--m", type=float)
        return p

    def exps(p):
        p.add_argument("--p", type=parse_real)
        p.add_argument("--q", type=parse_real)

    p = common(sub.add_parser("eval", help="evaluate an enclosure bound at one point"))
    p.add_argument("--lambda", dest="lam", type=parse_complex)
    p.add_argument("--bound", choices=BOUNDS)
    p.add_argument("--Q", type=float)
    exps(p)

    p = common(sub.add_parser("trace", help="trace an enclosure boundary"))
    p.add_argument("--Q", type=float)
    p.add_argument("--bound", choices=BOUNDS)
    exps(p)
    p.add_argument("--box", type=parse_box)
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--flag-region-d", action="store_true")

    p = common(sub.add_parser("classify", help="topology class of the l1 boundary"))
    p.add_argument("--Q", type=float)

    p = common(sub.add_parser("spectrum", help="eigenvalues of a truncated perturbed operator"))
    p.add_argument("--potential")
    p.add_argument("--N", type=int)

    p = common(sub.add_parser("verify", help="run a verification suite"))
    p.add_argument("--suite", choices=["containment", "optimality", "bs"])
    p.add_argument("--seed", type=int)
    p.add_argument("--Q", type=float)
    p.add_argument("--kind", choices=BOUNDS)
    exps(p)
    p.add_argument("--trials", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--count", type=int)

    p = common(sub.add_parser("probe", help="compare truncated resolvent with closed-form blocks"))
    p.add_argument("--lambda", dest="lam", type=parse_complex)
    p.add_argument("--N", type=int)
    p.add_argument("--jmax", type=int)
    return parser


COMMANDS = {
    "eval": cmd_eval, "trace": cmd_trace, "classify": cmd_classify,
    "spectrum": cmd_spectrum, "verify": cmd_verify, "probe": cmd_probe,
}


def _attach_pair_values(argv):
    """Glue ``--lambda -1,2`` into ``--lambda=-1,2`` so argparse does not read
    the negative pair as an option."""
    out = []
    it = iter(argv)
    for a in it:
        if a in ("--lambda", "--box"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_attach_pair_values(argv))
    try:
        merge_config(args)
        return COMMANDS[args.command](args, out)
    except (UsageError, SpectralPoint, BadExponent, AtThreshold, ValueError) as exc:
        print(f"dirac-enclosures: error: {exc}", file=sys.stderr)
        return 2
    except (NonFinite, NoConvergence, Singular, DiracError, ArithmeticError) as exc:
        print(f"dirac-enclosures: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
