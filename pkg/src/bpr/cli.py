"""Command-line front end.

Subcommands:
    simulate     draw a signal + ensemble, encode binary codes, write them to disk
    reconstruct  run a solver on a simulated instance read back from disk
    crb          estimation-bound curve over input SNRs (CSV: snr_db,crb_srer_db)
    experiment   run a config-driven experiment (one CSV per figure panel)
    image        patchwise image reconstruction from a PGM file
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import experiments as expmod
from .baselines import centroid_decode, phaselift_run
from .crb import crb_srer, fisher_information
from .measurement import (
    empirical_median_threshold,
    encode_binary,
    gen_gaussian_ensemble,
    gen_structured_illumination_ensemble,
    gen_two_sinusoid_signal,
    gen_unit_sphere_signal,
    load_ensemble,
    load_measurements,
    load_signal,
    save_ensemble,
    save_measurements,
    save_signal,
    sigma_for_snr,
)
from .pgm import write_pgm
from .solver import SolverConfig, apgd_run


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out-dir", default="results", help="output directory")


def _parse_list(text):
    return tuple(float(tok) for tok in text.replace(",", " ").split())


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bpr",
        description="Phase retrieval from binary-quantized quadratic measurements",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate and serialize a measurement instance")
    _add_common(p)
    p.add_argument("--kind", choices=("gaussian", "fourier-mask", "plain-dft"),
                   default="gaussian")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--oversampling", type=float, default=20.0, help="m / n")
    p.add_argument("--signal", choices=("sphere", "two-sinusoid"), default="sphere")
    p.add_argument("--tau", type=float, default=None,
                   help="threshold; default 0.4550 for gaussian, empirical median otherwise")
    p.add_argument("--snr-db", type=float, default=None,
                   help="input SNR; sets the pre-quantization noise level")
    p.add_argument("--sigma", type=float, default=None,
                   help="pre-quantization noise std (overrides --snr-db)")

    p = sub.add_parser("reconstruct", help="solve a serialized instance")
    _add_common(p)
    p.add_argument("--in-dir", required=True,
                   help="directory holding ensemble.csv / codes.csv (/ signal.csv)")
    p.add_argument("--algo", choices=("bpr", "phaselift"), default="bpr")
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--no-momentum", action="store_true")
    p.add_argument("--ls-range", type=float, default=0.0025)
    p.add_argument("--ls-precision", type=float, default=1e-5)

    p = sub.add_parser("crb", help="estimation-bound curve for the noisy binary model")
    _add_common(p)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--oversampling", type=float, default=20.0)
    p.add_argument("--snr-db", default="20,30,40", help="comma-separated input SNRs")
    p.add_argument("--ensembles", type=int, default=20)
    p.add_argument("--tau", type=float, default=0.4550)

    p = sub.add_parser("experiment", help="run a config-driven experiment")
    p.add_argument("config", help="flat key=value config file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--oversampling", default=None, help="comma-separated m/n values")
    p.add_argument("--snr-db", default=None, help="comma-separated input SNRs")
    p.add_argument("--no-momentum", action="store_true")

    p = sub.add_parser("image", help="patchwise reconstruction of a PGM image")
    _add_common(p)
    p.add_argument("path", help="8-bit grayscale binary PGM, dims divisible by 8")
    p.add_argument("--oversampling", type=float, default=20.0)
    p.add_argument("--iters", type=int, default=75)
    p.add_argument("--ls-range", type=float, default=0.0055)
    p.add_argument("--ls-precision", type=float, default=1e-5)

    return parser


def _cmd_simulate(args):
    os.makedirs(args.out_dir, exist_ok=True)
    if args.signal == "sphere":
        x = gen_unit_sphere_signal(args.n, expmod.cell_seed(args.seed, "signal", 0, 0))
    else:
        x = gen_two_sinusoid_signal(args.n)
    if args.kind == "gaussian":
        m = int(round(args.oversampling * args.n))
        ens = gen_gaussian_ensemble(args.n, m, expmod.cell_seed(args.seed, "ensemble", 0, 0))
    else:
        k = int(round(args.oversampling))
        ens = gen_structured_illumination_ensemble(
            args.n, k, expmod.cell_seed(args.seed, "ensemble", 0, 0),
            randomize=(args.kind == "fourier-mask"),
        )
    if args.tau is not None:
        tau = args.tau
    elif args.kind == "gaussian":
        tau = 0.4550
    else:
        tau = empirical_median_threshold(ens, x)
    sigma = 0.0
    if args.sigma is not None:
        sigma = args.sigma
    elif args.snr_db is not None:
        sigma = sigma_for_snr(ens, x, args.snr_db)
    y = encode_binary(ens, x, tau, noise_sigma=sigma,
                      seed=expmod.cell_seed(args.seed, "noise", 0, 0))
    save_signal(os.path.join(args.out_dir, "signal.csv"), x)
    save_ensemble(os.path.join(args.out_dir, "ensemble.csv"), ens)
    save_measurements(os.path.join(args.out_dir, "codes.csv"), y, ens)
    print(f"wrote signal.csv, ensemble.csv, codes.csv to {args.out_dir} "
          f"(kind={ens.kind}, n={ens.n}, m={ens.m}, tau={tau:.6g}, sigma={sigma:.6g})")
    return 0


def _cmd_reconstruct(args):
    os.makedirs(args.out_dir, exist_ok=True)
    ens = load_ensemble(os.path.join(args.in_dir, "ensemble.csv"))
    y, _ = load_measurements(os.path.join(args.in_dir, "codes.csv"))
    signal_path = os.path.join(args.in_dir, "signal.csv")
    x = load_signal(signal_path) if os.path.exists(signal_path) else None
    config = SolverConfig(
        max_iters=args.iters,
        ls_range_max=args.ls_range,
        ls_precision=args.ls_precision,
        momentum=not args.no_momentum,
        seed=args.seed,
    )
    if args.algo == "bpr":
        trace = apgd_run(ens, y, config, ground_truth=x)
    else:
        trace = phaselift_run(ens, centroid_decode(y), config, ground_truth=x)
    trace_path = os.path.join(args.out_dir, f"trace_{args.algo}.csv")
    trace.to_csv(trace_path)
    save_signal(os.path.join(args.out_dir, f"xhat_{args.algo}.csv"), trace.final_factor)
    last = -1
    msg = (f"{args.algo}: final cost {trace.cost[last]:.6g}, "
           f"consistency {trace.consistency[last]:.4f}")
    if x is not None:
        msg += f", SRER {trace.srer_db[last]:.2f} dB"
    print(msg)
    print(f"wrote {trace_path}")
    return 0


def _cmd_crb(args):
    os.makedirs(args.out_dir, exist_ok=True)
    x = gen_two_sinusoid_signal(args.n)
    m = int(round(args.oversampling * args.n))
    snrs = _parse_list(args.snr_db)
    rows = []
    for snr in snrs:
        values = []
        for e in range(args.ensembles):
            ens = gen_gaussian_ensemble(args.n, m,
                                        expmod.cell_seed(args.seed, "crb-ensemble", e))
            sigma = sigma_for_snr(ens, x, snr)
            fisher = fisher_information(ens, x, args.tau, sigma)
            values.append(crb_srer(fisher, x))
        rows.append((snr, float(np.mean(values))))
    path = os.path.join(args.out_dir, "crb.csv")
    with open(path, "w", newline="\n") as fh:
        fh.write("snr_db,crb_srer_db\n")
        for snr, value in rows:
            fh.write(f"{snr!r},{value!r}\n")
        print(f"wrote {path}")
    return 0


def _cmd_experiment(args):
    overrides = {
        "seed": None if args.seed is None else str(args.seed),
        "out_dir": args.out_dir,
        "n_iter": None if args.iters is None else str(args.iters),
        "oversampling": args.oversampling,
        "snr_db": args.snr_db,
    }
    if args.no_momentum:
        overrides["momentum"] = "false"
    cfg = expmod.load_config(args.config, overrides)
    written = expmod.run_experiment(cfg)
    for name in sorted(written):
        print(f"wrote {written[name]}")
    return 0


def _cmd_image(args):
    os.makedirs(args.out_dir, exist_ok=True)
    cfg = expmod.ExperimentConfig(
        experiment="image",
        oversampling=(args.oversampling,),
        n_iter=args.iters,
        ls_range_max=args.ls_range,
        ls_precision=args.ls_precision,
        seed=args.seed,
        out_dir=args.out_dir,
        image=args.path,
    )
    recon, report = expmod.image_reconstruct(args.path, args.oversampling, cfg)
    out_path = os.path.join(args.out_dir, "recon.pgm")
    write_pgm(out_path, recon)
    metrics_path = os.path.join(args.out_dir, "image_metrics.csv")
    with open(metrics_path, "w", newline="\n") as fh:
        fh.write("m_over_n,psnr_db,ssim\n")
        p = min(report.psnr_db, 300.0)
        fh.write(f"{args.oversampling!r},{p!r},{report.ssim!r}\n")
    print(f"PSNR {report.psnr_db:.2f} dB, SSIM {report.ssim:.4f}")
    print(f"wrote {out_path} and {metrics_path}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "reconstruct": _cmd_reconstruct,
    "crb": _cmd_crb,
    "experiment": _cmd_experiment,
    "image": _cmd_image,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
