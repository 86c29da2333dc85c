"""Command-line pipeline: simulate, estimate, reconstruct, dump tables.

All numeric output is deterministic given ``--seed``; every output file
embeds the exact command line and the seed as comment metadata (a ``meta``
object in JSON documents).
"""

import argparse
import json
import math
import shlex
import sys
import time
from pathlib import Path

import numpy as np

from . import estimator, homodyne, kernels, phasedist, states

PROG = "pml"


class UsageError(ValueError):
    """Invalid flags or flag values; maps to exit code 2."""


def parse_int_range(text: str) -> list[int]:
    """``a`` or ``a:b`` (inclusive) integer ranges."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [int(parts[0])]
        if len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
            if hi < lo:
                raise UsageError(f"empty integer range {text!r}")
            return list(range(lo, hi + 1))
    except ValueError:
        raise UsageError(f"malformed integer range {text!r} (expected a or a:b)") from None
    raise UsageError(f"malformed integer range {text!r} (expected a or a:b)")


def parse_float_grid(text: str) -> list[float]:
    """``a`` or ``a:b:step`` float grids, endpoints inclusive within 1e-9 step."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            lo, hi, step = (float(p) for p in parts)
            if step <= 0 or hi < lo:
                raise UsageError(f"malformed float grid {text!r}")
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            return [lo + i * step for i in range(count)]
    except ValueError:
        raise UsageError(f"malformed float grid {text!r} (expected a or a:b:step)") from None
    raise UsageError(f"malformed float grid {text!r} (expected a or a:b:step)")


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"malformed complex number {text!r} (expected e.g. 1.5 or 1+2j)") from None


def _state_from_args(args) -> states.StateSpec:
    if args.state in ("sv", "squeezed_vacuum", "squeezed-vacuum"):
        return states.StateSpec.squeezed_vacuum(args.zeta, args.psi)
    if args.state == "coherent":
        return states.StateSpec.coherent(_parse_complex(args.xi))
    if args.state == "fock":
        return states.StateSpec.fock(args.n)
    if args.state in ("displaced_fock", "displaced-fock"):
        return states.StateSpec.displaced_fock(args.n, _parse_complex(args.alpha))
    raise UsageError(f"unknown state {args.state!r}")


def _meta_comments(argv: list[str], seed: int | None) -> tuple[str, ...]:
    cmd = f"cmd={PROG} {shlex.join(argv)}"
    if seed is None:
        return (cmd,)
    return (cmd, f"seed={seed}")


def _add_state_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", required=True,
                   choices=["sv", "squeezed-vacuum", "coherent", "fock", "displaced-fock"],
                   help="state family to simulate")
    p.add_argument("--zeta", type=float, default=0.0, help="squeezing modulus |zeta|")
    p.add_argument("--psi", type=float, default=0.0, help="squeezing phase arg(zeta)")
    p.add_argument("--xi", default="0", help="coherent amplitude (complex literal)")
    p.add_argument("--n", type=int, default=1, help="Fock number")
    p.add_argument("--alpha", default="1", help="displacement (complex literal)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="simulate balanced homodyne data and directly sample "
                    "exponential phase moments of smoothed quasidistributions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_threads(p):
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: PML_THREADS or logical cores); "
                            "results do not depend on it")

    p_sim = sub.add_parser("simulate", help="synthesize a homodyne dataset")
    add_threads(p_sim)
    _add_state_flags(p_sim)
    p_sim.add_argument("--eta", type=float, default=1.0, help="detection efficiency in (0, 1]")
    p_sim.add_argument("--phases", type=int, required=True, help="number of phase bins M")
    p_sim.add_argument("--samples", type=int, required=True, help="samples per phase N")
    p_sim.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    p_sim.add_argument("-o", "--output", required=True, help="dataset file to write")

    p_est = sub.add_parser("estimate", help="sample phase moments from a dataset")
    add_threads(p_est)
    p_est.add_argument("-i", "--input", required=True, help="dataset file")
    p_est.add_argument("--l", default="0:10", help="moment index or range a:b")
    p_est.add_argument("--s", required=True, help="ordering parameter or grid a:b:step")
    p_est.add_argument("-o", "--output", required=True, help="moments JSON to write")

    p_rec = sub.add_parser("reconstruct", help="Fourier-synthesize the phase distribution")
    p_rec.add_argument("-i", "--input", required=True, help="moments JSON")
    p_rec.add_argument("--grid", type=int, default=phasedist.DEFAULT_GRID_SIZE,
                       help="number of theta grid points")
    p_rec.add_argument("--truncation", type=int, default=None,
                       help="highest l to keep (default: all provided)")
    p_rec.add_argument("--sigma-window", action="store_true",
                       help="apply a Lanczos sigma window to damp truncation ripple")
    p_rec.add_argument("-o", "--output", required=True, help="curve CSV to write")

    p_ker = sub.add_parser("kernels", help="dump filter/kernel tables as CSV")
    p_ker.add_argument("--table", choices=["filter", "kernel"], required=True,
                       help="filter functions F_l or sampling kernels K_l")
    p_ker.add_argument("--l", default="1:4", help="orders to tabulate")
    p_ker.add_argument("--u", default="0:4:0.05", help="argument grid a:b:step")
    p_ker.add_argument("-o", "--output", required=True, help="CSV to write")

    p_ora = sub.add_parser("oracle", help="emit exact moments or the exact phase curve")
    _add_state_flags(p_ora)
    p_ora.add_argument("--s", required=True, help="ordering parameter")
    p_ora.add_argument("--l", default="0:10", help="moment index or range a:b")
    p_ora.add_argument("--curve", action="store_true",
                       help="write the exact phase distribution CSV instead of moments JSON")
    p_ora.add_argument("--grid", type=int, default=phasedist.DEFAULT_GRID_SIZE)
    p_ora.add_argument("-o", "--output", required=True)

    p_fig = sub.add_parser("reproduce-figures",
                           help="run the full squeezed-vacuum pipeline and write fig1..fig6 CSVs")
    add_threads(p_fig)
    p_fig.add_argument("--seed", type=int, default=7, help="64-bit RNG seed")
    p_fig.add_argument("-o", "--output", required=True, help="output directory")

    return parser


def _write_lines(path, lines) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _cmd_simulate(args, argv) -> int:
    state = _state_from_args(args)
    plan = homodyne.MeasurementPlan(
        n_phases=args.phases, samples_per_phase=args.samples, eta=args.eta, seed=args.seed
    )
    ds = homodyne.simulate(state, plan, threads=args.threads)
    homodyne.write_dataset(ds, args.output, extra_comments=_meta_comments(argv, args.seed))
    print(f"wrote {plan.total_samples} samples to {args.output}")
    return 0


def _cmd_estimate(args, argv) -> int:
    ds = homodyne.read_dataset(args.input)
    l_values = parse_int_range(args.l)
    s_values = parse_float_grid(args.s)
    moments = []
    for s in s_values:
        if len(l_values) > 1 and l_values == list(range(min(l_values), max(l_values) + 1)) and min(l_values) == 0:
            moments.extend(estimator.estimate_spectrum(ds, max(l_values), s, threads=args.threads))
        else:
            moments.extend(estimator.estimate_moment(ds, l, s, threads=args.threads) for l in l_values)
    meta = {"command": f"{PROG} {shlex.join(argv)}", "seed": ds.plan.seed, "input": str(args.input)}
    Path(args.output).write_text(estimator.moments_to_json(moments, meta), encoding="utf-8")
    print(f"wrote {len(moments)} moment records to {args.output}")
    return 0


def _cmd_reconstruct(args, argv) -> int:
    text = Path(args.input).read_text(encoding="utf-8")
    moments = estimator.moments_from_json(text)
    if args.truncation is not None:
        moments = [m for m in moments if m.l <= args.truncation]
    curve = phasedist.reconstruct(moments, grid_size=args.grid, sigma_window=args.sigma_window)
    seed = json.loads(text).get("meta", {}).get("seed")
    meta = _meta_comments(argv, seed) + (f"s={curve.s!r}", f"truncation={curve.truncation_order}")
    phasedist.write_curve_csv(curve, args.output, comments=meta)
    print(f"wrote {args.grid}-point curve to {args.output}")
    return 0


def _cmd_kernels(args, argv) -> int:
    l_values = parse_int_range(args.l)
    u_values = parse_float_grid(args.u)
    lines = [f"# {c}" for c in _meta_comments(argv, None)]
    header = "u," + ",".join(
        (f"F{l}" if args.table == "filter" else f"K{l}") for l in l_values
    )
    lines.append(header)
    fn = kernels.filter_F if args.table == "filter" else kernels.kernel_base
    for u in u_values:
        row = [f"{u:.17g}"]
        row.extend(f"{fn(l, u):.17g}" for l in l_values)
        lines.append(",".join(row))
    _write_lines(args.output, lines)
    print(f"wrote {len(u_values)} rows to {args.output}")
    return 0


def _cmd_oracle(args, argv) -> int:
    state = _state_from_args(args)
    s_values = parse_float_grid(args.s)
    if args.curve:
        if len(s_values) != 1:
            raise UsageError("--curve requires a single --s value")
        s = s_values[0]
        theta = 2.0 * math.pi * np.arange(args.grid) / args.grid
        values = states.exact_phase_distribution(state, s, theta)
        lines = [f"# {c}" for c in _meta_comments(argv, None)]
        lines.append("theta,p")
        lines.extend(f"{t:.17g},{p:.17g}" for t, p in zip(theta, values))
        _write_lines(args.output, lines)
        print(f"wrote exact curve to {args.output}")
        return 0
    l_values = parse_int_range(args.l)
    moments = []
    for s in s_values:
        for l in l_values:
            value = states.exact_phase_moment(state, l, s)
            moments.append(
                estimator.MomentEstimate(
                    l=l, s=s, value=value, stderr_re=0.0, stderr_im=0.0, n_samples=1
                )
            )
    meta = {"command": f"{PROG} {shlex.join(argv)}", "state": state.label(), "exact": True}
    Path(args.output).write_text(estimator.moments_to_json(moments, meta), encoding="utf-8")
    print(f"wrote {len(moments)} exact moment records to {args.output}")
    return 0


def _cmd_reproduce_figures(args, argv) -> int:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    comments = _meta_comments(argv, args.seed)

    # filter functions (fig 1) and kernel closed forms (figs 2 and 3)
    u_grid = [0.05 * i for i in range(121)]
    lines = [f"# {c}" for c in comments] + ["u,F1,F2,F3,F4"]
    for u in u_grid:
        lines.append(f"{u:.17g}," + ",".join(f"{kernels.filter_F(l, u):.17g}" for l in (1, 2, 3, 4)))
    _write_lines(out / "fig1.csv", lines)
    lines = [f"# {c}" for c in comments] + ["u,K1"]
    lines += [f"{u:.17g},{kernels.kernel_base(1, u):.17g}" for u in u_grid]
    _write_lines(out / "fig2.csv", lines)
    lines = [f"# {c}" for c in comments] + ["u,K2"]
    lines += [f"{u:.17g},{kernels.kernel_base(2, u):.17g}" for u in u_grid]
    _write_lines(out / "fig3.csv", lines)

    # squeezed-vacuum pipeline: zeta = 1.317, psi = 0, eta = 0.8, 120 x 5000
    state = states.StateSpec.squeezed_vacuum(1.317, 0.0)
    plan = homodyne.MeasurementPlan(n_phases=120, samples_per_phase=5000, eta=0.8, seed=args.seed)
    ds = homodyne.simulate(state, plan, threads=args.threads)

    spectrum = estimator.estimate_spectrum(ds, 10, -1.0, threads=args.threads)
    lines = [f"# {c}" for c in comments] + ["l,re,im,stderr_re,stderr_im,exact_re,exact_im"]
    for m in spectrum:
        exact = states.exact_phase_moment(state, m.l, -1.0)
        lines.append(
            f"{m.l},{m.value.real:.17g},{m.value.imag:.17g},"
            f"{m.stderr_re:.17g},{m.stderr_im:.17g},{exact.real:.17g},{exact.imag:.17g}"
        )
    _write_lines(out / "fig4.csv", lines)

    curve = phasedist.reconstruct(spectrum, grid_size=512)
    exact_curve = states.exact_phase_distribution(state, -1.0, curve.theta_grid)
    lines = [f"# {c}" for c in comments] + ["theta,p,perr,p_exact"]
    for t, p, e, px in zip(curve.theta_grid, curve.values, curve.pointwise_err, exact_curve):
        lines.append(f"{t:.17g},{p:.17g},{e:.17g},{px:.17g}")
    _write_lines(out / "fig5.csv", lines)

    s_grid = [round(-0.3 - 0.1 * i, 10) for i in range(38)]  # -0.3 .. -4.0
    lines = [f"# {c}" for c in comments] + ["s,l,re,im,stderr_re,stderr_im,exact_re,exact_im"]
    for s in s_grid:
        # one radial pass per s, shared by every l
        per_s = estimator.estimate_spectrum(ds, 4, s, threads=args.threads)
        for m in per_s:
            if m.l not in (1, 2, 4):
                continue
            exact = states.exact_phase_moment(state, m.l, m.s)
            lines.append(
                f"{m.s:.17g},{m.l},{m.value.real:.17g},{m.value.imag:.17g},"
                f"{m.stderr_re:.17g},{m.stderr_im:.17g},{exact.real:.17g},{exact.imag:.17g}"
            )
    _write_lines(out / "fig6.csv", lines)

    elapsed = time.perf_counter() - started
    print(f"wrote fig1..fig6 CSVs to {out} in {elapsed:.1f} s")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "estimate": _cmd_estimate,
    "reconstruct": _cmd_reconstruct,
    "kernels": _cmd_kernels,
    "oracle": _cmd_oracle,
    "reproduce-figures": _cmd_reproduce_figures,
}


# flags whose values may start with '-' (negative numbers and grids like
# -4:-0.3:0.1, which argparse would otherwise read as an option)
_VALUE_FLAGS = {"--s", "--l", "--u", "--xi", "--alpha", "--zeta", "--psi"}


def _merge_negative_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            nxt = argv[i + 1]
            if len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(_merge_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, argv)
    except (UsageError, ValueError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
