"""Command-line entry point: ``python -m layered_qldpc <verb> ...``."""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .codes import CssCode, css_validate, get_code, load_css
from .decoder import Decoder, DecoderConfig
from .gf2 import circulant, gf2_rank, mat_vec, read_alist, write_alist
from .latency import LatencyQuery, exact, latency
from .layering import (
    b1_cover,
    c2_component_layers,
    c2_layers,
    density_bound,
    greedy_decompose,
    hgp_layers,
    read_cover,
    validate_cover,
    write_cover,
)
from .simulation import run_trials, stats_to_csv


def _code(args) -> CssCode:
    if getattr(args, "hx", None):
        if not args.hz:
            raise SystemExit("--hx needs --hz")
        return load_css(args.hx, args.hz, name=args.name or "custom")
    return get_code(args.code)


def _default_cover(code: CssCode):
    if code.name == "c2":
        return c2_layers()
    if code.name == "b1":
        return b1_cover(code.m_x)
    return greedy_decompose(code.h_x)


def _add_code_args(p):
    p.add_argument("--code", default="c2", help="named code: c2 or b1")
    p.add_argument("--hx", help="alist file of H_X (overrides --code)")
    p.add_argument("--hz", help="alist file of H_Z")
    p.add_argument("--name", help="label for a code read from files")


def cmd_code(args):
    code = _code(args)
    if args.action == "build":
        write_alist(code.h_x, args.out_x)
        write_alist(code.h_z, args.out_z)
        print(f"wrote {args.out_x} and {args.out_z}")
        return
    rx, rz = gf2_rank(code.h_x), gf2_rank(code.h_z)
    print(f"code {code.name}: n={code.n} m_X={code.m_x} m_Z={code.m_z}")
    print(f"rank H_X={rx} rank H_Z={rz} dimension={code.n - rx - rz}")
    print(f"CSS valid: {css_validate(code)}")
    print(f"density bound (H_X): {density_bound(code.h_x)}")


def cmd_layers(args):
    if args.action == "product":
        if args.a:
            A = read_alist(args.a)
            B = read_alist(args.b) if args.b else A
            da, db = greedy_decompose(A), greedy_decompose(B.T)
        else:
            # C2 component table, valid for the circulant and its transpose
            A = B = circulant((0, 2, 5), 31)
            da = db = c2_component_layers()
        sigma = [int(x) for x in args.sigma.split(",")] if args.sigma else None
        cover = hgp_layers(da, db, sigma, A=A, Bt=B.T)
        print(f"k_A={da.k} k_Bt={db.k} -> {cover.k} layers, sizes {cover.sizes()}")
    else:
        code = _code(args)
        H = code.h_x if args.side == "x" else code.h_z
        if args.action == "decompose":
            cover = greedy_decompose(H)
        else:
            cover = read_cover(args.cover) if args.cover else _default_cover(code)
        print(validate_cover(H, cover))
        if args.action == "verify":
            report = validate_cover(H, cover)
            for msg in report.problems:
                print(f"  {msg}")
            if not report.valid:
                sys.exit(1)
    if args.out:
        write_cover(cover, args.out)


def _config(args) -> DecoderConfig:
    return DecoderConfig(
        algorithm=args.algo,
        schedule=args.schedule,
        random_order=args.random_order,
        constrain_successive=args.constrain_successive,
        max_iterations=args.budget if args.schedule == "flooded" else None,
        max_layer_iterations=args.budget if args.schedule != "flooded" else None,
        syndrome_check_period=args.check_period,
        rng_seed=args.seed,
    )


def _add_decoder_args(p):
    p.add_argument("--schedule", choices=["flooded", "serial", "layered"], default="layered")
    p.add_argument("--algo", choices=["sp", "nms", "pnms"], default="pnms")
    p.add_argument("--random-order", action="store_true")
    p.add_argument("--constrain-successive", action="store_true")
    p.add_argument("--cover", help="cover file for the layered schedule")
    p.add_argument("--budget", type=int, help="iterations (flooded) or layer applications")
    p.add_argument("--check-period", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)


def cmd_decode(args):
    code = _code(args)
    cover = (read_cover(args.cover) if args.cover else _default_cover(code)) if args.schedule == "layered" else None
    synd = np.loadtxt(args.syndrome, dtype=np.uint8).ravel()
    res = Decoder(code.h_x, _config(args), cover).decode(synd, args.p)
    print(f"converged={res.converged} layer_iterations={res.layer_iterations_used}")
    print(" ".join(str(int(b)) for b in res.estimate))
    if res.converged:
        assert np.array_equal(mat_vec(code.h_x, res.estimate), synd)


def cmd_simulate(args):
    code = _code(args)
    cover = (read_cover(args.cover) if args.cover else _default_cover(code)) if args.schedule == "layered" else None
    cfg = _config(args)
    stats = [run_trials(code, cover, cfg, p, args.trials, args.seed) for p in args.p]
    text = stats_to_csv(stats)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def cmd_latency(args):
    q = LatencyQuery(
        args.arch, args.clock, it_max=args.it_max, m=args.m,
        fractional_layers=args.layers, iterations=args.iterations,
    )
    ns = latency(q)
    print(f"{float(ns):g} ns ({float(ns / 1000):g} us)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="layered-qldpc")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("code", help="build or inspect a CSS code")
    p.add_argument("action", choices=["build", "info"])
    _add_code_args(p)
    p.add_argument("--out-x", default="hx.alist")
    p.add_argument("--out-z", default="hz.alist")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("layers", help="decompose, verify or build layer covers")
    p.add_argument("action", choices=["decompose", "verify", "product"])
    _add_code_args(p)
    p.add_argument("--side", choices=["x", "z"], default="x")
    p.add_argument("--cover", help="cover file to verify")
    p.add_argument("--a", help="alist of A for 'product' (default: C2 component)")
    p.add_argument("--b", help="alist of B for 'product' (default: A)")
    p.add_argument("--sigma", help="comma-separated layer permutation for 'product'")
    p.add_argument("--out", help="write the cover to this file")
    p.set_defaults(func=cmd_layers)

    p = sub.add_parser("decode", help="decode one syndrome read from a file")
    _add_code_args(p)
    _add_decoder_args(p)
    p.add_argument("--syndrome", required=True, help="whitespace-separated syndrome bits")
    p.add_argument("--p", type=float, required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="Monte Carlo Z-noise simulation")
    _add_code_args(p)
    _add_decoder_args(p)
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--csv", help="also write the CSV here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("latency", help="closed-form decoder latency")
    p.add_argument("--arch", choices=["parallel", "serial", "layered"], required=True)
    p.add_argument("--clock", type=exact, required=True, help="clock period in ns")
    p.add_argument("--it-max", type=int, help="parallel iteration budget")
    p.add_argument("--iterations", type=exact, help="own iteration count (overrides it_max/2)")
    p.add_argument("--m", type=int, help="check count (serial)")
    p.add_argument("--layers", type=exact, help="fractional layer number k/t (layered)")
    p.set_defaults(func=cmd_latency)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except ValueError as exc:
        raise SystemExit(f"error: {exc}") from None


if __name__ == "__main__":
    main()
