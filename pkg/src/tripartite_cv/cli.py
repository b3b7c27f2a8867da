"""Command-line front end: ``tripartite-cv <command> ...`` or ``python -m tripartite_cv``.

Output columns
--------------
sweep-r   : r, v_sum, v_diff, v_sum_helped (at --gain), v_sum_helped_opt
            (at the optimal gain), g_opt. Variances are SNL-relative.
capacity  : nbar, c_helped, c_unhelped, c_coherent, c_squeezed, in nats.
psd (montecarlo --psd): freq_hz, psd_db_rel_snl.

CSV numbers carry 6 significant digits; JSON carries full precision.
Exit codes: 0 success, 1 domain or numeric error, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from . import analysis as an
from . import circuit as ct
from . import detection as det
from . import montecarlo as mc

SWEEP_R_HEADER = ["r", "v_sum", "v_diff", "v_sum_helped", "v_sum_helped_opt", "g_opt"]
CAPACITY_HEADER = ["nbar", "c_helped", "c_unhelped", "c_coherent", "c_squeezed"]
AGREEMENT_TOL = 1e-9


class CommandError(Exception):
    """Domain or numeric failure; maps to exit code 1."""


@dataclass
class RunReport:
    params: dict
    noise_budget: dict
    capacities: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


def _provenance(seed=None, netlist=None):
    return {
        "tool": "tripartite-cv",
        "version": __version__,
        "seed": seed,
        "netlist_sha256": hashlib.sha256(netlist.encode()).hexdigest() if netlist is not None else None,
    }


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{float(v):.6g}" for v in row])
    return buf.getvalue()


def _params(args):
    try:
        return an.ExperimentParams(r=args.r, xi1_sq=args.xi1_sq, xi2_sq=args.xi2_sq,
                                   eta_sq=args.eta_sq, g=args.gain)
    except ValueError as exc:
        raise CommandError(str(exc)) from None


def _grid(args, name):
    if args.values:
        return [float(v) for v in args.values.split(",")]
    if args.steps < 1:
        raise CommandError("--steps must be >= 1")
    lo, hi = getattr(args, f"{name}_min"), getattr(args, f"{name}_max")
    return np.linspace(lo, hi, args.steps).tolist()


def cmd_budget(args):
    p = _params(args)
    closed = an.closed_form_variances(p)
    engine = an.circuit_variances(p)
    diffs = {k: abs(getattr(closed, k) - getattr(engine, k)) for k in ("v_sum", "v_diff", "v_sum_helped")}
    report = RunReport(
        params=asdict(p),
        noise_budget=closed.as_dict(),
        provenance=_provenance(),
        extra={
            "circuit_budget": engine.as_dict(),
            "max_abs_disagreement": max(diffs.values()),
            "g_opt": an.optimal_gain(p),
            "v_sum_helped_opt": an.variance_vs_gain(p, an.optimal_gain(p)),
        },
    )
    if args.nbar is not None:
        report.capacities = [asdict(an.channel_capacities(_with_nbar(p, args.nbar)))]
    text = report.to_json()
    if max(diffs.values()) > AGREEMENT_TOL:
        _emit(text, args)
        raise CommandError(f"closed form and circuit engine disagree by {max(diffs.values()):.3e}")
    return text


def _with_nbar(p, nbar):
    try:
        return p.with_nbar(nbar)
    except ValueError as exc:
        raise CommandError(str(exc)) from None


def cmd_simulate(args):
    try:
        with open(args.netlist, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CommandError(str(exc)) from None
    try:
        spec = ct.parse_netlist(text)
    except ct.NetlistError as exc:
        raise CommandError(str(exc)) from None
    state = ct.run_circuit(spec)
    readings = []
    for d in spec.detectors:
        if isinstance(d, ct.BellDetector):
            v_sum, v_diff = det.bell_variances(state, d.i, d.j, d.eta)
            readings.append({"type": "bell", "modes": [d.i, d.j], "eta": d.eta,
                             "v_sum": v_sum, "v_diff": v_diff})
        else:
            cur = det.claire_current(state, d.i, d.eta)
            readings.append({"type": "x", "modes": [d.i], "eta": d.eta, "variance": cur.variance_linear})
    out = {
        "n_modes": spec.n_modes,
        "mean": state.mean.tolist(),
        "cov": state.cov.tolist(),
        "detectors": readings,
        "provenance": _provenance(netlist=text),
    }
    return json.dumps(out, sort_keys=True, indent=2) + "\n"


def cmd_sweep_r(args):
    p = _params(args)
    try:
        rows = an.sweep_r(p, _grid(args, "r"))
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    return _csv(SWEEP_R_HEADER, rows)


def _floors(args):
    return an.MEASURED_FLOORS if args.measured_floors else None


def cmd_capacity(args):
    p = _params(args)
    grid = [args.nbar] if args.nbar is not None else _grid(args, "nbar")
    try:
        rows = an.sweep_nbar(p, grid, _floors(args))
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    return _csv(CAPACITY_HEADER, [[getattr(c, k) for k in CAPACITY_HEADER] for c in rows])


def cmd_thresholds(args):
    p = _params(args)
    try:
        th = an.capacity_thresholds(p, _floors(args))
    except an.NoRoot as exc:
        raise CommandError(str(exc)) from None
    out = {"floors": "measured" if args.measured_floors else "closed_form", **th._asdict()}
    return json.dumps(out, sort_keys=True, indent=2) + "\n"


def cmd_correct(args):
    enl = det.from_db(args.enl_db)
    measured = det.from_db(args.measured_db)
    try:
        corrected = np.atleast_1d(det.enl_correct(measured, float(enl)))
    except ValueError as exc:
        raise CommandError(str(exc)) from None
    out = {
        "enl_db": args.enl_db,
        "measured_db": list(args.measured_db),
        "corrected_linear": corrected.tolist(),
        "corrected_db": det.to_db(corrected).tolist(),
    }
    if len(args.measured_db) == 2:
        out["measured_gap_db"] = abs(args.measured_db[0] - args.measured_db[1])
        out["corrected_gap_db"] = float(abs(np.diff(det.to_db(corrected))[0]))
    return json.dumps(out, sort_keys=True, indent=2) + "\n"


def cmd_montecarlo(args):
    p = _params(args)
    if args.samples < 2:
        raise CommandError("--samples must be >= 2")
    if args.psd is not None:
        cfg = mc.SpectrumConfig()
        try:
            x = mc.synthesize_photocurrent(args.psd, mc.ToneSignal(depth=args.depth), cfg,
                                           cfg.samples_for_full_average(), args.seed)
        except ValueError as exc:
            raise CommandError(str(exc)) from None
        return mc.spectrum_estimate(x, cfg).to_csv()
    pp = p.setup_params()
    state = ct.run_circuit(ct.build_dense_coding_setup(pp, with_detectors=False))
    plus, minus = det.bell_currents(state, 1, 2, pp.eta)
    helped = det.feedforward_combine(plus, det.claire_current(state, 3, pp.eta), p.g, pp.xi1, pp.xi2)
    out = {"provenance": _provenance(seed=args.seed), "samples": args.samples, "estimates": {}}
    for name, cur in (("v_sum", plus), ("v_diff", minus), ("v_sum_helped", helped)):
        est = mc.sample_variance(cur.detected_state(), cur.form, args.samples, args.seed, args.workers)
        out["estimates"][name] = {
            "estimate": est.value,
            "stderr": est.stderr,
            "analytic": cur.variance_linear,
            "within_3_stderr": bool(est.within(cur.variance_linear)),
        }
    return json.dumps(out, sort_keys=True, indent=2) + "\n"


def _add_params(sp, gain=True):
    sp.add_argument("--r", type=float, default=0.674, help="squeeze parameter (default 0.674)")
    sp.add_argument("--xi1-sq", type=float, default=0.987, help="propagation efficiency of c1, c2")
    sp.add_argument("--xi2-sq", type=float, default=0.937, help="propagation efficiency of c3")
    sp.add_argument("--eta-sq", type=float, default=0.95, help="detector quantum efficiency")
    sp.add_argument("--gain", type=float, default=1 / math.sqrt(2), help="feed-forward gain (default 1/sqrt 2)")


def _add_grid(sp, name, lo, hi):
    sp.add_argument(f"--{name}-min", type=float, default=lo)
    sp.add_argument(f"--{name}-max", type=float, default=hi)
    sp.add_argument("--steps", type=int, default=21)
    sp.add_argument("--values", help="comma-separated grid, overrides min/max/steps")


def build_parser():
    parser = argparse.ArgumentParser(prog="tripartite-cv", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("budget", help="noise budget from closed forms and from the circuit engine (JSON)")
    _add_params(sp)
    sp.add_argument("--nbar", type=float, help="also report capacities at this mean photon number")
    sp.set_defaults(func=cmd_budget)

    sp = sub.add_parser("simulate", help="run a netlist and report detector variances (JSON)")
    sp.add_argument("netlist")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep-r", help="CSV: " + ",".join(SWEEP_R_HEADER))
    _add_params(sp)
    _add_grid(sp, "r", 0.0, 2.0)
    sp.set_defaults(func=cmd_sweep_r)

    sp = sub.add_parser("capacity", help="CSV: " + ",".join(CAPACITY_HEADER))
    _add_params(sp)
    sp.add_argument("--nbar", type=float, help="single mean photon number")
    _add_grid(sp, "nbar", 1.0, 20.0)
    sp.add_argument("--measured-floors", action="store_true",
                    help="use the measured floors 0.76/0.48/0.47 instead of the closed forms")
    sp.set_defaults(func=cmd_capacity)

    sp = sub.add_parser("thresholds", help="crossings with the coherent and squeezed baselines (JSON)")
    _add_params(sp)
    sp.add_argument("--measured-floors", action="store_true",
                    help="use the measured floors 0.76/0.48/0.47 instead of the closed forms")
    sp.set_defaults(func=cmd_thresholds)

    sp = sub.add_parser("correct", help="remove the electronics noise floor from SNL-relative levels (JSON)")
    sp.add_argument("--measured-db", type=float, nargs="+", required=True)
    sp.add_argument("--enl-db", type=float, required=True)
    sp.set_defaults(func=cmd_correct)

    sp = sub.add_parser("montecarlo", help="sampled variances of the three currents (JSON) or a PSD trace (CSV)")
    _add_params(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--psd", type=float, metavar="NOISE_VAR",
                    help="emit a spectrum-analyzer trace of white noise at this SNL-relative variance")
    sp.add_argument("--depth", type=float, default=0.0, help="2 MHz tone amplitude for --psd")
    sp.set_defaults(func=cmd_montecarlo)

    for name in ("budget", "simulate", "sweep-r", "capacity", "thresholds", "correct", "montecarlo"):
        sub.choices[name].add_argument("--out", help="write to this path instead of stdout")
    return parser


def _emit(text, args):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(text, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
