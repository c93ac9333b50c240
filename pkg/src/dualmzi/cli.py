"""Command-line surface: figure-data sweeps, the Monte-Carlo runner and
estimation reports.

All angles are radians. Sweeps write CSV keyed by the detuning
vartheta - theta_g (the figures' x axis); singular points emit the
literal token NA. Output files are written to a temp file and renamed,
so a failed command never leaves partial output.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile

from . import analytics, circuit, estimation, montecarlo
from .circuit import CircuitParams
from .errors import (
    DegenerateConditional,
    DualMziError,
    InfiniteSNR,
    SingularFisher,
    WeakValueDivergence,
    ZeroProbabilityPostselection,
)

NA = "NA"

QUANTITIES = (
    "conditional_prob",
    "inferred_phase",
    "snr",
    "standard_probs",
    "weak_value",
    "fisher",
)

TWO_PI = 2.0 * math.pi

# Fig. 2's legend values are not all legible from the text; the chi list
# below is a representative reconstruction spanning weak to maximal coupling.
PRESETS = {
    "fig2": dict(quantity="conditional_prob", chi=[0.1, 1.0, 2.0, math.pi],
                 start=0.0, stop=TWO_PI, steps=721),
    "fig4": dict(quantity="inferred_phase", chi=[0.1],
                 start=0.0, stop=TWO_PI, steps=721),
    "fig5": dict(quantity="snr", chi=[0.05, 0.1, 0.5], n=1,
                 start=0.0, stop=TWO_PI, steps=721),
}


def _fmt(v) -> str:
    return NA if v is None else f"{v:.12g}"


def _parse_angle(text: str, chi: float) -> float:
    """Radian value, or the symbolic tokens theta_g / pi+theta_g."""
    if text == "theta_g":
        return analytics.geometric_phase(chi)
    if text == "pi+theta_g":
        return math.pi + analytics.geometric_phase(chi)
    return float(text)


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sweep_value(quantity: str, detuning: float, chi: float, phi_token: str, n: int):
    tg = analytics.geometric_phase(chi)
    vartheta = detuning + tg
    try:
        if quantity == "conditional_prob":
            return analytics.conditional_probs_A(vartheta, chi)[1]
        if quantity == "inferred_phase":
            phi = _parse_angle(phi_token, chi)
            return analytics.inferred_phase(CircuitParams(phi, vartheta, chi))
        if quantity == "snr":
            return estimation.snr(n, vartheta, chi)
        if quantity == "standard_probs":
            return analytics.standard_probs_B(vartheta, chi).p_y
        if quantity == "weak_value":
            return abs(analytics.weak_value(vartheta))
        if quantity == "fisher":
            p_y = analytics.conditional_probs_A(vartheta, chi)[1]
            return estimation.fisher_information(n, p_y)
    except (DegenerateConditional, ZeroProbabilityPostselection,
            WeakValueDivergence, SingularFisher, InfiniteSNR):
        return None
    raise ValueError(f"unknown quantity {quantity!r}")


def cmd_sweep(args) -> int:
    if args.preset:
        preset = PRESETS[args.preset]
        args.quantity = args.quantity or preset["quantity"]
        args.chi = args.chi or list(preset["chi"])
        args.start = preset["start"] if args.start is None else args.start
        args.stop = preset["stop"] if args.stop is None else args.stop
        args.steps = preset["steps"] if args.steps is None else args.steps
        if "n" in preset and args.n is None:
            args.n = preset["n"]
    if args.quantity is None:
        raise ValueError("--quantity is required (or use --preset)")
    if not args.chi:
        raise ValueError("at least one --chi is required (or use --preset)")
    args.start = 0.0 if args.start is None else args.start
    args.stop = TWO_PI if args.stop is None else args.stop
    args.steps = 721 if args.steps is None else args.steps
    args.n = 1 if args.n is None else args.n
    if args.steps < 2:
        raise ValueError("--steps must be at least 2")
    if not args.start < args.stop:
        raise ValueError("--start must be below --stop")

    step = (args.stop - args.start) / (args.steps - 1)
    detunings = [args.start + k * step for k in range(args.steps)]

    header = ["detuning_rad"]
    if args.raw_theta:
        header += [f"theta_chi={c:.12g}" for c in args.chi]
    header += [f"chi={c:.12g}" for c in args.chi]

    columns = {c: [] for c in args.chi}
    rows = []
    for t in detunings:
        row = [_fmt(t)]
        if args.raw_theta:
            row += [_fmt(t + analytics.geometric_phase(c)) for c in args.chi]
        for c in args.chi:
            v = _sweep_value(args.quantity, t, c, args.phi, args.n)
            columns[c].append(v)
            row.append(_fmt(v))
        rows.append(",".join(row))

    _atomic_write(args.output, ",".join(header) + "\n" + "\n".join(rows) + "\n")
    print(f"wrote {args.steps} rows x {len(args.chi)} chi values to {args.output}")

    if args.figure:
        from . import plotting

        plotting.render_sweep_figure(
            detunings,
            {f"chi={c:.12g}": columns[c] for c in args.chi},
            args.quantity,
            args.figure,
        )
        print(f"wrote figure to {args.figure}")
    return 0


_JOINT_LABELS = ("AxBx", "AxBy", "AyBx", "AyBy")


def _zscore(count: int, n: int, p: float):
    p = min(max(p, 0.0), 1.0)  # Born probabilities carry ~1e-16 noise
    sigma = math.sqrt(n * p * (1.0 - p))
    if sigma == 0.0:
        return 0.0 if count == n * p else None
    return (count - n * p) / sigma


def cmd_simulate(args) -> int:
    chi = args.chi
    params = CircuitParams(
        phi=_parse_angle(args.phi, chi),
        vartheta=_parse_angle(args.theta_b, chi),
        chi=chi,
    )
    if params.chi_out_of_range:
        print("warning: chi outside [0, pi]; formulas remain periodic", file=sys.stderr)

    record = montecarlo.run_experiment(params, args.trials, args.seed, args.workers)
    final = circuit.evolve(params)
    probs = circuit.joint_probabilities(final)
    stats = montecarlo.conditioned_statistics(record, args.port)

    b_port = args.port[1]  # "x" or "y"
    analytic_rate = circuit.marginal_probabilities(final, "B")[0 if b_port == "x" else 1]

    lines = ["quantity,count,empirical,analytic,zscore"]
    n = record.n_trials
    for label, count, p in zip(_JOINT_LABELS, record.joint_counts, probs):
        freq = count / n if n else 0.0
        lines.append(
            f"joint_{label},{count},{_fmt(freq)},{_fmt(p)},{_fmt(_zscore(count, n, p))}"
        )

    z_rate = _zscore(stats.n_postselected, n, analytic_rate) if n else None
    lines.append(
        f"postselection_rate,{stats.n_postselected},"
        f"{_fmt(stats.empirical_rate)},{_fmt(analytic_rate)},{_fmt(z_rate)}"
    )

    try:
        cond = circuit.postselect(final, "B", b_port)
        analytic_p = cond.probabilities()[1]
    except ZeroProbabilityPostselection:
        analytic_p = None
    if stats.empty or analytic_p is None:
        z_p = None
    else:
        z_p = _zscore(stats.n_ay, stats.n_postselected, analytic_p)
    lines.append(
        f"p_hat,{stats.n_ay},{_fmt(stats.p_hat)},{_fmt(analytic_p)},{_fmt(z_p)}"
    )

    _atomic_write(args.output, "\n".join(lines) + "\n")

    print(f"trials={n} seed={record.seed} port={args.port}")
    print(
        f"empirical postselection rate {_fmt(stats.empirical_rate)}"
        f" vs analytic {_fmt(analytic_rate)}"
    )
    print(f"conditioned p_hat {_fmt(stats.p_hat)} vs analytic {_fmt(analytic_p)}")
    if not stats.empty:
        print(f"empirical inferred phase {_fmt(montecarlo.empirical_inferred_phase(stats))} rad")
    print(f"wrote {args.output}")

    if args.figure:
        from . import plotting

        empirical = [c / n if n else 0.0 for c in record.joint_counts]
        plotting.render_counts_figure(
            _JOINT_LABELS, empirical, list(probs), args.figure,
            title=f"phi={params.phi:.4g}, vartheta={params.vartheta:.4g}, chi={chi:.4g}",
        )
        print(f"wrote figure to {args.figure}")
    return 0


def cmd_estimate(args) -> int:
    rf = estimation.fisher_from_rate(args.rate, args.duration, args.chi)
    tg = analytics.geometric_phase(args.chi)
    p_by = analytics.standard_probs_B(math.pi + tg, args.chi).p_y
    runs = estimation.mean_runs_per_postselection(args.chi, math.pi + tg)
    crb = estimation.crb_phase_uncertainty(rf.exact)
    snr_opt = math.sqrt(rf.n_postselections) / math.tan(args.chi / 4.0)
    disp = estimation.displacement_sensitivity(crb, args.wavelength)

    pairs = [
        ("chi_rad", args.chi),
        ("theta_g_rad", tg),
        ("postselection_prob", p_by),
        ("n_postselections", rf.n_postselections),
        ("mean_runs_per_postselection", runs),
        ("fisher_exact", rf.exact),
        ("fisher_rate_approx", rf.approx),
        ("crb_phase_uncertainty_rad", crb),
        ("snr_at_optimum", snr_opt),
        ("wavelength_m", args.wavelength),
        ("displacement_sensitivity_m", disp),
    ]
    for k, v in pairs:
        print(f"{k} = {_fmt(v)}")
    if args.output:
        _atomic_write(
            args.output,
            "quantity,value\n" + "\n".join(f"{k},{_fmt(v)}" for k, v in pairs) + "\n",
        )
        print(f"wrote {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualmzi",
        description="Postselected dual Mach-Zehnder interferometry: sweeps, "
        "Monte-Carlo runs and estimation reports (all angles in radians)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="tabulate a quantity over the detuning axis")
    p.add_argument("--quantity", choices=QUANTITIES)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--chi", action="append", type=float,
                   help="Kerr phase; repeat for one CSV column per value")
    p.add_argument("--phi", default="0",
                   help="A reference phase: radians or 'theta_g' (inferred_phase only)")
    p.add_argument("--start", type=float, help="first detuning (default 0)")
    p.add_argument("--stop", type=float, help="last detuning (default 2*pi)")
    p.add_argument("--steps", type=int, help="number of rows (default 721)")
    p.add_argument("--n", type=int, help="postselection count for snr/fisher (default 1)")
    p.add_argument("--raw-theta", action="store_true",
                   help="also emit raw vartheta columns (one per chi)")
    p.add_argument("--output", required=True)
    p.add_argument("--figure", help="optional PNG rendered alongside the CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="seeded Monte-Carlo run with postselection")
    p.add_argument("--phi", default="0", help="radians, 'theta_g' or 'pi+theta_g'")
    p.add_argument("--theta-b", default="0", help="radians, 'theta_g' or 'pi+theta_g'")
    p.add_argument("--chi", type=float, required=True)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--port", choices=("Bx", "By"), default="By")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", required=True)
    p.add_argument("--figure", help="optional PNG rendered alongside the CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="Fisher/CRB/SNR report from an input rate")
    p.add_argument("--rate", type=float, required=True, help="photon pairs per second")
    p.add_argument("--duration", type=float, required=True, help="seconds")
    p.add_argument("--chi", type=float, required=True)
    p.add_argument("--wavelength", type=float, default=1e-6, help="meters")
    p.add_argument("--output", help="optional CSV copy of the report")
    p.set_defaults(func=cmd_estimate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DualMziError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
