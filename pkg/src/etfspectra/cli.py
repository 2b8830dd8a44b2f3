"""Command line interface.

Subcommand groups mirror the library layout:

    etfspectra frames construct --family dss --n 31 --out frame.json
    etfspectra spectra sample --frame frame.json --k 412 --trials 1000 --seed 42 --out eigs.csv
    etfspectra manova density --beta 0.8 --gamma 0.5 --grid 2048 --out density.csv
    etfspectra functional eval --kind ac --frame frame.json --k 412 --trials 1000 --out psi.csv
    etfspectra moments asymptotic --d 6 --format json
    etfspectra moments ewb --gamma 0.5 --p 0.5 --d 4 --n 7
    etfspectra moments exact --frame frame.json --d 4
    etfspectra coding curve --direction sc --p 0.5 --model manova --sdr-db 0:60:2 --optimize-beta --out rd.csv
    etfspectra harness test1 --family dss --beta 0.8 --gamma 0.5 --profile desk --out test1.csv
    etfspectra harness test2 --functional shannon --alpha 1 --family dss --out test2.csv
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import coding, frames, frameio, harness, manova, moments
from .functionals import FunctionalSpec, evaluate
from .rng import derive_rng
from .spectra import select, subset_gram_spectrum


def _write_csv(path, columns, rows, header=None):
    lines = []
    if header:
        lines.append("# " + header)
    lines.append(",".join(columns))
    lines += [",".join(str(c) for c in row) for row in rows]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------

def _cmd_frames_construct(args):
    params = {}
    for key in ("n", "m", "q", "chirps", "seed"):
        val = getattr(args, key)
        if val is not None:
            params["L" if key == "chirps" else key] = val
    F = frames.construct(args.family, **params)
    frameio.save_frame(F, args.out)
    tight = frames.is_tight(F)
    equi = frames.is_equiangular(F)
    print(f"{args.family}: {F.m}x{F.n} field={'complex' if F.is_complex else 'real'} "
          f"tight={tight} equiangular={equi} -> {args.out}")


def _cmd_spectra_sample(args):
    F = frameio.load_frame(args.frame)
    rng = derive_rng(args.seed)
    rows = []
    for trial in range(args.trials):
        sel = select(F.n, "uniform_k", rng, k=args.k)
        ev = subset_gram_spectrum(F, sel).eigenvalues
        rows += [(trial, i, repr(float(v))) for i, v in enumerate(ev)]
    _write_csv(args.out, ("trial", "index", "eigenvalue"), rows,
               header=f"spectra sample k={args.k} trials={args.trials} seed={args.seed}")
    print(f"wrote {len(rows)} eigenvalues -> {args.out}")


def _cmd_manova_density(args):
    params = manova.ManovaParams(args.beta, args.gamma)
    dist = manova.ManovaDistribution(params)
    lo, hi = dist.edges
    pad = 0.05 * (hi - lo)
    xs = np.linspace(max(lo - pad, 0.0), hi + pad, args.grid)
    rows = [(repr(float(x)), repr(float(dist.pdf(x))), repr(float(dist.cdf(x))))
            for x in xs]
    _write_csv(args.out, ("x", "pdf", "cdf"), rows,
               header=f"manova density beta={args.beta} gamma={args.gamma}")
    sidecar = args.out + ".atoms.json"
    with open(sidecar, "w") as fh:
        json.dump({"atoms": [{"location": a.location, "mass": a.mass}
                             for a in dist.atoms],
                   "support": [lo, hi]}, fh, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.grid} grid points -> {args.out} (atoms in {sidecar})")


def _cmd_functional_eval(args):
    F = frameio.load_frame(args.frame)
    spec = FunctionalSpec(args.kind, delta=args.delta, alpha=args.alpha)
    rng = derive_rng(args.seed)
    rows = []
    for trial in range(args.trials):
        sel = select(F.n, "uniform_k", rng, k=args.k)
        val = evaluate(spec, subset_gram_spectrum(F, sel))
        rows.append((trial, repr(float(val))))
    _write_csv(args.out, ("trial", "value"), rows,
               header=f"functional {args.kind} k={args.k} trials={args.trials} seed={args.seed}")
    print(f"wrote {args.trials} evaluations -> {args.out}")


def _cmd_moments_asymptotic(args):
    poly = moments.asymptotic_moment(args.d)
    if args.format == "latex":
        print(poly.as_latex())
    else:
        print(json.dumps({"d": args.d, "coefficients": poly.as_dict()},
                         sort_keys=True, indent=2))


def _cmd_moments_ewb(args):
    val = moments.ewb_bound(args.gamma, args.p, args.d, args.n)
    print(json.dumps({"gamma": args.gamma, "p": args.p, "d": args.d, "n": args.n,
                      "ewb": val,
                      "manova_term": moments.manova_moment_formula(args.gamma, args.p, args.d),
                      "delta_term": moments.ewb_delta(args.gamma, args.p, args.d, args.n)},
                     sort_keys=True))


def _cmd_moments_exact(args):
    F = frameio.load_frame(args.frame)
    poly = moments.exact_expected_moment(F, args.d)
    coeffs = {f"p^{k}": poly.a[k] for k in range(1, args.d + 1)}
    print(json.dumps({"d": args.d, "n": F.n, "m": F.m, "coefficients": coeffs},
                     sort_keys=True))


def _parse_range(spec: str):
    parts = [float(x) for x in spec.split(":")]
    if len(parts) == 1:
        return np.array(parts)
    lo, hi, step = parts
    return np.arange(lo, hi + 0.5 * step, step)


def _cmd_coding_curve(args):
    if args.direction not in ("sc", "cc"):
        raise SystemExit("--direction must be sc or cc")
    rows = []
    for ydb in _parse_range(args.sdr_db):
        y = 10.0 ** (ydb / 10.0)
        if args.direction == "sc":
            if args.optimize_beta:
                beta, rate = coding.optimize_beta("source", args.p, y, args.model,
                                                  scan=args.scan_beta)
            else:
                beta = args.beta
                rate = coding.rate_sc(beta, args.p, y, args.model)
            rows.append((repr(float(ydb)), repr(float(beta)), repr(float(rate)),
                         repr(coding.rdf(args.p, y)),
                         repr(coding.rdf(args.p, y) + coding.si_benchmark(args.p))))
        else:
            if args.optimize_beta:
                beta, cap = coding.optimize_beta("channel", args.p, y, args.model,
                                                 scan=args.scan_beta)
            else:
                beta = args.beta
                cap = coding.capacity_cc(beta, args.p, y, args.model)
            rows.append((repr(float(ydb)), repr(float(beta)), repr(float(cap)),
                         repr(coding.shannon_capacity(args.p, y)),
                         repr(coding.si_benchmark(args.p))))
    _write_csv(args.out, ("y_db", "beta_opt", "rate", "benchmark_rdf", "benchmark_si"),
               rows, header=f"coding curve direction={args.direction} p={args.p} model={args.model}")
    print(f"wrote {len(rows)} points -> {args.out}")


def _config_dict(args, sizes):
    cfg = {k: v for k, v in vars(args).items() if k != "fn"}
    cfg["sizes"] = list(sizes)
    return cfg


def _harness_common(args):
    if args.config:
        with open(args.config) as fh:
            cfg = harness.parse_config(fh.read())
    else:
        cfg = {}
    # explicit flag > config file > built-in default (flags parse as None)
    for key, default in HARNESS_DEFAULTS.items():
        if getattr(args, key) is None:
            cast = type(default)
            setattr(args, key, cast(cfg[key]) if key in cfg else default)
    sizes = harness.DESK_SIZES if args.profile == "desk" else harness.FULL_SIZES
    if args.sizes:
        sizes = tuple(int(s) for s in args.sizes.split(","))
    elif "sizes" in cfg:
        sizes = tuple(int(s) for s in cfg["sizes"].split(","))
    return sizes


def _cmd_harness_test1(args):
    sizes = _harness_common(args)
    records, skipped = harness.run_ks_batch(args.family, sizes, args.beta,
                                            args.gamma, args.trials, args.seed)
    for size, why in skipped:
        print(f"skipped n={size}: {why}", file=sys.stderr)
    harness.export(records, "csv", args.out, config=_config_dict(args, sizes))
    fit = harness.fit_power_law(records, "test1")
    print(f"test1 {args.family}: slope={fit.slope:.5f} se={fit.stderr:.5f} "
          f"R2={fit.r_squared:.5f} -> {args.out}")


def _cmd_harness_test2(args):
    sizes = _harness_common(args)
    spec = FunctionalSpec(args.functional, delta=args.delta, alpha=args.alpha)
    real_families = ("real_paley", "spikes_hadamard", "random_cosine", "haar_real",
                     "gaussian_iid")
    base_family = ("manova_ensemble_real" if args.family in real_families
                   else "manova_ensemble")
    baseline, _ = harness.run_functional_batch(base_family, sizes, spec, args.beta,
                                               args.gamma, args.trials, args.seed)
    b0, a0, ratio = harness.fit_baseline_loglog(baseline)
    records, skipped = harness.run_functional_batch(args.family, sizes, spec, args.beta,
                                                    args.gamma, args.trials, args.seed)
    for size, why in skipped:
        print(f"skipped n={size}: {why}", file=sys.stderr)
    harness.export(records, "csv", args.out, config=_config_dict(args, sizes))
    fit = harness.fit_power_law(records, "test2", ratio=ratio)
    base_fit = harness.fit_power_law(baseline, "test2", ratio=ratio)
    p = harness.t_test_equal_slopes(fit, base_fit)
    print(f"test2 {args.family} psi_{args.functional}: b={fit.slope:.5f} "
          f"a={fit.second_coefficient:.5f} baseline_b={base_fit.slope:.5f} "
          f"p_equal={p:.5g} -> {args.out}")


HARNESS_DEFAULTS = {"family": "manova_ensemble", "beta": 0.8, "gamma": 0.5,
                    "trials": 200, "seed": 0, "profile": "desk"}


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="etfspectra", description=__doc__,
                                  formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = top.add_subparsers(dest="group", required=True)

    g = sub.add_parser("frames").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("construct", help="build a frame and write the container file")
    c.add_argument("--family", required=True,
                   choices=frames.DETERMINISTIC_FAMILIES + frames.RANDOM_FAMILIES)
    c.add_argument("--n", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--q", type=int, help="Paley prime parameter")
    c.add_argument("--chirps", type=int, help="alltop redundancy L")
    c.add_argument("--seed", type=int)
    c.add_argument("--out", required=True)
    c.set_defaults(fn=_cmd_frames_construct)

    g = sub.add_parser("spectra").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("sample", help="subset Gram eigenvalues to csv")
    c.add_argument("--frame", required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.set_defaults(fn=_cmd_spectra_sample)

    g = sub.add_parser("manova").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("density", help="density/cdf grid with atoms sidecar")
    c.add_argument("--beta", type=float, required=True)
    c.add_argument("--gamma", type=float, required=True)
    c.add_argument("--grid", type=int, default=2048)
    c.add_argument("--out", required=True)
    c.set_defaults(fn=_cmd_manova_density)

    g = sub.add_parser("functional").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("eval", help="evaluate a spectral functional over subsets")
    c.add_argument("--kind", required=True, choices=("rip", "strip", "ac", "shannon", "max", "min", "cond"))
    c.add_argument("--frame", required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--alpha", type=float)
    c.add_argument("--delta", type=float)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.set_defaults(fn=_cmd_functional_eval)

    g = sub.add_parser("moments").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("asymptotic", help="exact limiting moment polynomial")
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--format", choices=("latex", "json"), default="json")
    c.set_defaults(fn=_cmd_moments_asymptotic)
    c = g.add_parser("ewb", help="erasure Welch bound value")
    c.add_argument("--gamma", type=float, required=True)
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.set_defaults(fn=_cmd_moments_ewb)
    c = g.add_parser("exact", help="exact expected moment of a stored frame")
    c.add_argument("--frame", required=True)
    c.add_argument("--d", type=int, required=True)
    c.set_defaults(fn=_cmd_moments_exact)

    g = sub.add_parser("coding").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("curve", help="rate / capacity over an SDR/SNR sweep")
    c.add_argument("--direction", required=True, choices=("sc", "cc"))
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--model", default="manova", choices=("mp", "manova"))
    c.add_argument("--sdr-db", dest="sdr_db", required=True,
                   help="lo:hi:step in dB (or single value)")
    c.add_argument("--beta", type=float)
    c.add_argument("--optimize-beta", dest="optimize_beta", action="store_true")
    c.add_argument("--scan-beta", dest="scan_beta", type=int, default=0,
                   help="grid-scan fallback: number of beta grid points (0 = golden section)")
    c.add_argument("--out", required=True)
    c.set_defaults(fn=_cmd_coding_curve)

    g = sub.add_parser("harness").add_subparsers(dest="cmd", required=True)
    for name in ("test1", "test2"):
        c = g.add_parser(name)
        c.add_argument("--family")
        c.add_argument("--beta", type=float)
        c.add_argument("--gamma", type=float)
        c.add_argument("--trials", type=int)
        c.add_argument("--seed", type=int)
        c.add_argument("--profile", choices=("desk", "full"))
        c.add_argument("--sizes", help="comma-separated ladder overriding the profile")
        c.add_argument("--config", help="flat key=value config file; flags win")
        c.add_argument("--out", required=True)
        if name == "test2":
            c.add_argument("--functional", default="shannon",
                           choices=("rip", "strip", "ac", "shannon", "max", "min", "cond"))
            c.add_argument("--alpha", type=float, default=1.0)
            c.add_argument("--delta", type=float)
            c.set_defaults(fn=_cmd_harness_test2)
        else:
            c.set_defaults(fn=_cmd_harness_test1)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.fn(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
