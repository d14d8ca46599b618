"""Command-line interface: ``fockweyl verify | kernel | symbol | star | star-exp | orbit``.

All output is JSON on stdout.  ``verify`` exits 0 iff every check passes; evaluation
commands exit 3 on a domain error and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import correspondences as corr
from . import orbit as orb
from . import representation as rep
from . import star as st
from . import verify
from .algebra import DiffOp, parse_poly
from .errors import FockWeylError
from .gaussian import GaussianKernelOp
from .group import GroupElement, _decode_complex, _encode_complex

EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_DOMAIN = 3


class InputError(ValueError):
    pass


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _complex_json(x) -> list[float]:
    x = complex(x)
    return [x.real, x.imag]


def parse_point(text: str, n: int) -> np.ndarray:
    """A point of ``C^n`` from JSON pairs ``[[re, im], ...]``, a JSON number list, or
    comma-separated Python complex literals; a single value is broadcast to all ``n`` slots."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            data = [complex(part.strip().replace(" ", "")) for part in text.split(",")]
        except ValueError as exc:
            raise InputError(f"cannot parse point {text!r}") from exc
    if isinstance(data, (int, float)):
        data = [data]
    arr = np.asarray(data)
    if arr.ndim == 2 and arr.shape[1] == 2:
        z = _decode_complex(arr)
    elif arr.ndim == 1:
        z = arr.astype(complex)
    else:
        raise InputError(f"cannot parse point {text!r}")
    if z.shape == (1,) and n > 1:
        z = np.full(n, z[0])
    if z.shape != (n,):
        raise InputError(f"point {text!r} has {z.shape[0]} coordinates, expected n={n}")
    return z


def parse_vector(text: str, dtype=float) -> np.ndarray:
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = [dtype(p.strip()) for p in text.split(",")]
    return np.atleast_1d(np.asarray(data, dtype=dtype))


def load_config(args) -> verify.Config:
    data = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    cfg = verify.Config.from_json(data)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "quad_order", None) is not None:
        cfg.quad_order = args.quad_order
    if getattr(args, "degree", None) is not None:
        cfg.truncation_degree = args.degree
    if getattr(args, "lam", None) is not None:
        cfg.lam = args.lam
    if getattr(args, "no_timing", False):
        cfg.timing = False
    cfg.__post_init__()
    return cfg


def parse_operator(text: str, ws):
    """Operator from JSON: ``{"type": "projector"|"omega0", "z": ...}``, ``{"type": "pi", "g": ...}``,
    ``{"type": "kernel", ...}`` (GaussianKernelOp fields) or ``{"type": "diffop", "terms": [...]}``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"operator must be JSON: {exc}") from exc
    kind = data.get("type")
    if kind == "projector":
        return GaussianKernelOp.coherent_projector(parse_point(json.dumps(data["z"]), ws.n), ws.lam)
    if kind == "omega0":
        return rep.omega0_kernel(parse_point(json.dumps(data["z"]), ws.n), ws)
    if kind == "pi":
        return GroupElement.from_json(data["g"])
    if kind == "kernel":
        return GaussianKernelOp.from_json({k: v for k, v in data.items() if k != "type"} | {"lambda": data.get("lambda", ws.lam)})
    if kind == "diffop":
        return DiffOp.from_json(data["terms"], ws.n)
    raise InputError(f"unknown operator type {kind!r}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args) -> int:
    cfg = load_config(args)
    report = verify.run(args.suite, cfg, jobs=args.jobs)
    _emit(report, args.out)
    if args.out:
        s = report["summary"]
        print(f"{s['passed']}/{s['checks']} checks passed", file=sys.stderr)
    return 0 if report["summary"]["pass"] else EXIT_FAIL


def cmd_kernel(args) -> int:
    cfg = load_config(args)
    ws = cfg.ws
    if args.which in ("pi", "pi-prime"):
        if not args.g:
            raise InputError("--g is required")
        g = GroupElement.from_json(json.loads(args.g))
        k = rep.pi_kernel(g, ws) if args.which == "pi" else rep.pi_prime_kernel(g, ws)
    elif args.which in ("sigma", "mehler"):
        if args.t is None:
            raise InputError("--t is required")
        t = parse_vector(args.t)
        k = rep.sigma_kernel(t, ws) if args.which == "sigma" else rep.mehler_kernel(t, ws)
    elif args.which == "rho":
        k = rep.rho_kernel(parse_point(args.z or "0", ws.n), args.c0, ws)
    elif args.which == "omega0":
        k = rep.omega0_kernel(parse_point(args.z or "0", ws.n), ws)
    else:
        k = GaussianKernelOp.coherent_projector(parse_point(args.z or "0", ws.n), ws.lam)
    _emit({"kernel": args.which, **k.to_json()}, args.out)
    return 0


def cmd_symbol(args) -> int:
    cfg = load_config(args)
    ws = cfg.ws
    A = parse_operator(args.op, ws)
    z = parse_point(args.at, ws.n)
    if args.kind == "weyl0":
        if isinstance(A, GroupElement):
            val = corr.weyl0_pi_closed(A, z, ws)[()]
        elif isinstance(A, DiffOp):
            val = corr.weyl0_diffop(A, ws.lam)(z)
        else:
            val = corr.weyl0_gaussian(A, z)[()]
    else:
        if isinstance(A, GroupElement):
            val = corr.berezin_pi_closed(A, z, ws)[()]
        elif isinstance(A, DiffOp):
            val = corr.berezin_diffop(A, ws.lam)(z)
        else:
            val = corr.berezin_symbol(A, z)[()]
    _emit({"kind": args.kind, "at": _encode_complex(z), "value": _complex_json(val)}, args.out)
    return 0


def cmd_star(args) -> int:
    cfg = load_config(args)
    if args.product == "star0":
        f, g = parse_poly(args.f, "z"), parse_poly(args.g, "z")
        n = max(f.dim, g.dim)
        f, g = parse_poly(args.f, "z", n), parse_poly(args.g, "z", n)
        res = st.star0(f, g, cfg.lam)
    else:
        f, g = parse_poly(args.f, "xy"), parse_poly(args.g, "xy")
        n = max(f.dim, g.dim)
        f, g = parse_poly(args.f, "xy", n), parse_poly(args.g, "xy", n)
        res = st.moyal(f, g) if args.product == "moyal" else st.star1(f, g, cfg.lam)
    _emit({"product": args.product, "lambda": cfg.lam, "text": res.to_text(), "terms": res.to_json()}, args.out)
    return 0


def cmd_star_exp(args) -> int:
    cfg = load_config(args)
    b = parse_vector(args.b)
    n = len(b)
    a = parse_point(args.a, n) if args.a else np.zeros(n, dtype=complex)
    z = parse_point(args.at, n)
    out = {
        "c0": args.c0,
        "a": _encode_complex(a),
        "b": b.tolist(),
        "at": _encode_complex(z),
        "lambda": cfg.lam,
        "closed": _complex_json(st.star_exp_closed(args.c0, a, b, z, cfg.lam)),
    }
    if args.series_order is not None:
        series = st.star_exp_series(st.star_exp_polynomial(args.c0, a, b), args.series_order, "star0", cfg.lam)
        out["series_coefficients"] = [_complex_json(v) for v in series.evaluate(z)]
        out["closed_form_taylor"] = [_complex_json(v) for v in st.closed_form_taylor(args.c0, a, b, z, cfg.lam, args.series_order)]
    _emit(out, args.out)
    return 0


def cmd_orbit(args) -> int:
    cfg = load_config(args)
    ws = cfg.ws
    z = parse_point(args.z, ws.n)
    xi = orb.psi_map(z, ws)
    _emit({"z": _encode_complex(z), "psi": xi.to_json(), "base_point": orb.base_point(ws).to_json()}, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (lambda, n, m, alpha, beta, seed, ...)")
    common.add_argument("--seed", type=int)
    common.add_argument("--quad-order", type=int, dest="quad_order")
    common.add_argument("--degree", type=int, help="truncation degree for Fock-basis matrices")
    common.add_argument("--lambda", type=float, dest="lam", help="override the config's lambda")
    common.add_argument("--out", help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="fockweyl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", action="append", choices=verify.SUITES + ("all",), help="repeatable; default all")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timing", action="store_true", help="record wall_time as 0 for byte-identical reports")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kernel", parents=[common], help="print a Gaussian kernel")
    p.add_argument("which", choices=["pi", "rho", "sigma", "omega0", "projector", "mehler", "pi-prime"])
    p.add_argument("--g", help='group element JSON, e.g. {"t":[0],"z0":[[0,0]],"c0":0}')
    p.add_argument("--t", help="torus parameter vector")
    p.add_argument("--z", help="point of C^n")
    p.add_argument("--c0", type=float, default=0.0)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("symbol", parents=[common], help="evaluate a symbol")
    p.add_argument("--kind", choices=["weyl0", "berezin"], default="weyl0")
    p.add_argument("--op", required=True, help="operator JSON")
    p.add_argument("--at", required=True, help="point of C^n")
    p.set_defaults(func=cmd_symbol)

    p = sub.add_parser("star", parents=[common], help="star product of two polynomials")
    p.add_argument("--product", choices=["moyal", "star0", "star1"], default="moyal")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("star-exp", parents=[common], help="closed-form star exponential")
    p.add_argument("--c0", type=float, default=0.0)
    p.add_argument("--a", help="vector in C^n (default 0)")
    p.add_argument("--b", required=True, help="real vector, all entries nonzero")
    p.add_argument("--at", required=True, help="point of C^n")
    p.add_argument("--series-order", type=int, dest="series_order")
    p.set_defaults(func=cmd_star_exp)

    p = sub.add_parser("orbit", parents=[common], help="print psi(z)")
    p.add_argument("--z", required=True)
    p.set_defaults(func=cmd_orbit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not args.suite:
        args.suite = ["all"]
    try:
        return args.func(args)
    except FockWeylError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_DOMAIN
    except (InputError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": "InvalidInput", "message": str(exc)}), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
