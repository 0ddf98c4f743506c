"""Command-line interface: build potentials and waves from seed files, extract
scattering data, run the time evolution and blow-up search, verify invariants,
and sample functions onto CSV grids.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import faddeev as fd
from . import harness as hn
from . import moutard as mt
from . import nv
from .algebra import RationalFn
from .errors import AlgebraError


def _parse_lambda(text: str) -> complex:
    re, im = text.split(",")
    return complex(float(re), float(im))


def _parse_grid(text: str, t: float) -> hn.GridSpec:
    parts = text.split(",")
    if len(parts) != 5:
        raise ValueError("grid must be xmin,xmax,ymin,ymax,n")
    return hn.GridSpec(float(parts[0]), float(parts[1]), float(parts[2]),
                       float(parts[3]), int(parts[4]), t)


def _load(args):
    seed, time = hn.load_seed(args.seed)
    return seed, time


def _write_json(args, payload) -> None:
    if args.out and not args.csv:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _fmt_coord(v: float) -> str:
    if abs(v - round(v)) < 5e-5:
        return str(int(round(v)))
    return f"{v:.4f}"


def cmd_potential(args) -> int:
    seed, time = _load(args)
    if time:
        w = nv.extended_w(seed)
    else:
        w = mt.double_w(seed)
    u = mt.potential(w)
    print(u)
    _write_json(args, {"u": hn.rational_to_json(u), "w": hn.poly_to_json(w)})
    return 0


def cmd_kernel(args) -> int:
    seed, time = _load(args)
    frame = mt.build_frame(seed if not time else nv.evolved_seed(seed))
    for name, f in (("theta1", frame.theta1), ("theta2", frame.theta2),
                    ("phi1", frame.phi1), ("phi2", frame.phi2)):
        print(f"{name} = {f}")
    _write_json(args, {name: hn.rational_to_json(f) for name, f in
                       (("theta1", frame.theta1), ("theta2", frame.theta2),
                        ("phi1", frame.phi1), ("phi2", frame.phi2))})
    return 0


def _build_wave(seed, time):
    if time:
        return nv.nv_faddeev(seed)
    return fd.build_faddeev(seed)


def cmd_faddeev(args) -> int:
    seed, time = _load(args)
    fw = _build_wave(seed, time)
    print("residual=0")
    print(fw.psi)
    _write_json(args, hn.wave_to_json(fw))
    return 0


def cmd_scatter(args) -> int:
    seed, time = _load(args)
    fw = _build_wave(seed, time)
    sd = fd.scattering_data(fw)
    print(sd)
    _write_json(args, {"A": {str(k): {"re": str(c.re), "im": str(c.im)}
                             for k, c in sorted(sd.a_coeffs.items())}, "B": "0"})
    return 0


def cmd_nv_evolve(args) -> int:
    seed, _ = _load(args)
    es = nv.evolved_seed(seed)
    wt = nv.extended_w(es)
    sol = nv.nv_potentials(wt)
    print(f"p1(t) = {es.p1}")
    print(f"p2(t) = {es.p2}")
    print(f"Wt = {wt}")
    _write_json(args, {"p1": hn.poly_to_json(es.p1), "p2": hn.poly_to_json(es.p2),
                       "wt": hn.poly_to_json(wt), "u": hn.rational_to_json(sol.u),
                       "v": hn.rational_to_json(sol.v)})
    return 0


def cmd_nv_faddeev(args) -> int:
    seed, _ = _load(args)
    fw = nv.nv_faddeev(seed)
    sd = fd.scattering_data(fw)
    print(f"{sd} stationary=yes")
    for k, mu in nv.kernel_mu(fw).items():
        print(f"mu{k} = {mu}")
    _write_json(args, hn.wave_to_json(fw))
    return 0


def cmd_blowup(args) -> int:
    seed, _ = _load(args)
    wt = nv.extended_w(nv.evolved_seed(seed))
    rep = nv.blowup_time(wt, refine_tol=args.tol or 1e-10)
    if not rep.found:
        print("no_blowup")
        return 0
    wx, wy = rep.witness
    print(f"t_star≈{rep.t_star:.6f} witness=({_fmt_coord(wx)},{_fmt_coord(wy)})")
    _write_json(args, {"t_star": rep.t_star, "witness": list(rep.witness),
                       "method": rep.method, "spread": rep.spread})
    return 0


def cmd_sample_grid(args) -> int:
    seed, time = _load(args)
    if args.grid is None:
        raise ValueError("sample-grid requires --grid")
    if args.out is None:
        raise ValueError("sample-grid requires --out")
    grid = _parse_grid(args.grid, args.t)
    if time:
        w = nv.extended_w(nv.evolved_seed(seed))
    else:
        w = mt.double_w(seed)
    if args.lam is not None:
        fw = _build_wave(seed, time)
        lam0 = _parse_lambda(args.lam)
        fn = lambda z, t: fd.faddeev_eval(fw, z, t, lam0)
    else:
        u = mt.potential(w)
        fn = lambda z, t: u.eval(z, t)
    hn.write_grid_csv(args.out, hn.sample_grid(fn, grid))
    print(f"wrote {args.out}")
    return 0


def cmd_verify(args) -> int:
    seed, time = _load(args)
    tol = args.tol or 1e-9
    checks = []

    def run(name, fn):
        try:
            fn()
            checks.append((name, True, ""))
        except Exception as exc:
            checks.append((name, False, f"{type(exc).__name__}: {exc}"))

    if not time:
        frame = {}
        run("frame-build", lambda: frame.update(f=mt.build_frame(seed)))
        wave = {}
        run("wave-residual-exact", lambda: wave.update(w=fd.build_faddeev(seed)))
        if "w" in wave:
            run("decay-bookkeeping", lambda: fd.assert_decay_bookkeeping(wave["w"]))
            run("scattering-exact-vs-rays", lambda: fd.scattering_data(wave["w"]))

            def fd_order():
                rep = hn.fd_residual(wave["w"].u, wave["w"], 1.0,
                                     hn.GridSpec(-2, 2, -2, 2, 7), 1e-2)
                if rep.order < 1.9:
                    raise AlgebraError(f"order {rep.order:.2f} < 1.9")

            run("finite-difference-order", fd_order)
        if "f" in frame:
            def nonvanish():
                rep = mt.nonvanishing_certificate(frame["f"].w)
                if rep.verdict == "zero-found":
                    raise AlgebraError(f"W vanishes near {rep.witness}")

            run("denominator-nonvanishing", nonvanish)
    else:
        es = nv.evolved_seed(seed)
        state = {}
        run("extended-w", lambda: state.update(wt=nv.extended_w(es)))
        if "wt" in state:
            sol = nv.nv_potentials(state["wt"])

            def residual_zero():
                r = nv.nv_residual(sol)
                if not r.is_zero():
                    raise AlgebraError("evolution residual nonzero")

            run("evolution-residual-exact", residual_zero)
            wave = {}
            run("wave-residuals-exact", lambda: wave.update(w=nv.nv_faddeev(seed)))
            if "w" in wave:
                run("scattering-exact-vs-rays", lambda: fd.scattering_data(wave["w"]))
            run("blowup-search", lambda: nv.blowup_time(state["wt"]))

    ok = all(c[1] for c in checks)
    print(f"verify: {'PASS' if ok else 'FAIL'}")
    for name, good, detail in checks:
        line = f"{'PASS' if good else 'FAIL'} {name}"
        if detail:
            line += f" ({detail})"
        print(line)
    return 0 if ok else 1


COMMANDS = {
    "potential": cmd_potential,
    "kernel": cmd_kernel,
    "faddeev": cmd_faddeev,
    "scatter": cmd_scatter,
    "nv-evolve": cmd_nv_evolve,
    "nv-faddeev": cmd_nv_faddeev,
    "blowup": cmd_blowup,
    "verify": cmd_verify,
    "sample-grid": cmd_sample_grid,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mnv", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--seed", required=True)
        p.add_argument("--out")
        p.add_argument("--csv", action="store_true")
        p.add_argument("--lambda", dest="lam")
        p.add_argument("--t", type=float, default=0.0)
        p.add_argument("--grid")
        p.add_argument("--tol", type=float)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except AlgebraError as exc:
        print(f"FAIL {type(exc).__name__}: {exc}")
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
