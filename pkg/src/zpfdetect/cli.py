"""Command-line front end.

One executable, six subcommands (spectrum, fixed-window, first-passage,
coincide, verdict, fit) plus a sweep driver that expands a parameter grid
from a JSON config into one output file per point and a manifest.

Conventions, kept identical everywhere:

* scalar results and verdicts are JSON; curves are CSV with fixed headers;
* every output embeds the resolved parameter set and the seed, CSV as
  '#'-prefixed comment lines before the header, JSON as a "parameters" map;
* numbers are printed at full round-trip precision;
* exit 0 on success, 2 on argument or validation problems, 3 when a
  simulation ran but could not deliver (for example too few counts);
* errors go to stderr and name the offending parameter, data go to stdout
  or to --output.

Seeds default to a fixed constant so runs are reproducible by default;
pass ``--seed random`` to draw one from the operating system (the drawn
value is embedded in the output, so even those runs can be replayed).
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import secrets
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .coincidence import (
    CoincidenceConfig,
    CorrelatedBeamPair,
    InsufficientStatisticsError,
    consistency_verdict,
    simulate_coincidences,
)
from .first_passage import (
    FirstPassageDetector,
    rate_analytic,
    rate_series,
    simulate_first_passage,
)
from .fit import fit_rate_curve, load_rate_csv
from .fixed_window import FixedWindowDetector, low_signal_suppression, rate_fixed_window
from .noise import NoiseModel, SeedSpec
from .spectrum import (
    SpectrumParams,
    spectral_density_thermal,
    spectral_density_zpf,
    zpf_band_intensity,
)

__all__ = ["DEFAULT_SEED", "RunConfig", "main", "parse_and_dispatch"]

DEFAULT_SEED = 12345


@dataclass(frozen=True)
class RunConfig:
    """Resolved record of one run: what ran, with what, under which seed.

    Every output embeds ``parameters`` and ``seed`` so the result file is
    self-describing; ``output`` picks the rendering (scalars and verdicts
    as json, curves as csv) and ``output_path`` None means stdout.
    """

    subcommand: str
    parameters: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    output: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        if self.output not in ("csv", "json"):
            raise ValueError(f"output must be 'csv' or 'json', got {self.output!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


def _seed_type(value: str) -> int:
    if value == "random":
        return secrets.randbits(63)
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"seed must be an integer or 'random', got {value!r}"
        ) from None
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return n


def _fmt(x) -> str:
    """Full round-trip decimal text for one value."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _json_payload(cfg: RunConfig, results: dict) -> str:
    record = {
        "subcommand": cfg.subcommand, "seed": cfg.seed, "parameters": cfg.parameters,
    }
    record.update(results)
    return json.dumps(record) + "\n"


def _csv_text(cfg: RunConfig, header: list, rows) -> str:
    lines = [f"# subcommand: {cfg.subcommand}", f"# seed: {cfg.seed}"]
    lines += [f"# {k} = {_fmt(v)}" for k, v in cfg.parameters.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _noise_from_args(args) -> NoiseModel:
    if args.noise == "white":
        if args.sigma is None:
            raise ValueError("sigma is required for white noise")
        return NoiseModel.white(args.sigma)
    if args.sigma_i is None or args.tau_c is None:
        raise ValueError("sigma_i and tau_c are required for colored noise")
    return NoiseModel.colored(args.sigma_i, args.tau_c)


# ---------------------------------------------------------------- spectrum

def _cmd_spectrum(args) -> str:
    params = SpectrumParams(
        temperature=args.temperature,
        **({"omega_cutoff": args.cutoff} if args.cutoff is not None else {}),
    )
    if args.band is not None:
        lo, hi = args.band
        value = zpf_band_intensity(lo, hi, params=params, convention=args.convention)
        check = zpf_band_intensity(
            lo, hi, params=params, method="quadrature", convention=args.convention
        )
        cfg = RunConfig(
            "spectrum",
            {"omega_lo": lo, "omega_hi": hi, "convention": args.convention,
             "temperature": args.temperature},
            args.seed, "json", args.output,
        )
        return _json_payload(
            cfg, {"band_intensity": value, "band_intensity_quadrature": check}
        )

    if args.omega_min is None or args.omega_max is None:
        raise ValueError("omega_min and omega_max are required without --band")
    if not 0 < args.omega_min < args.omega_max:
        raise ValueError("need 0 < omega_min < omega_max")
    if args.points < 2:
        raise ValueError(f"points must be at least 2, got {args.points}")
    if args.spacing == "log":
        omega = np.geomspace(args.omega_min, args.omega_max, args.points)
    else:
        omega = np.linspace(args.omega_min, args.omega_max, args.points)
    rho_z = spectral_density_zpf(omega)
    rho_t = spectral_density_thermal(omega, args.temperature)
    cfg = RunConfig(
        "spectrum",
        {"omega_min": args.omega_min, "omega_max": args.omega_max,
         "points": args.points, "spacing": args.spacing,
         "temperature": args.temperature},
        args.seed, "csv", args.output,
    )
    rows = zip(omega, rho_t, rho_z, rho_t + rho_z)
    return _csv_text(cfg, ["omega", "rho_thermal", "rho_zpf", "rho_total"], rows)


# ------------------------------------------------------------ fixed-window

def _cmd_fixed_window(args) -> str:
    det = FixedWindowDetector(
        T=args.t, I_m=args.im, xi=args.xi, I0=args.i0, sigma=args.sigma
    )
    pdict = {
        "t": args.t, "im": args.im, "xi": args.xi, "i0": args.i0,
        "sigma": args.sigma,
    }
    rows = []
    for i_s in args.i_s:
        if i_s < 0:
            raise ValueError(f"i_s must be nonnegative, got {i_s}")
        r_closed = rate_fixed_window(det, i_s, method="closed")
        r_quad = rate_fixed_window(det, i_s, method="quadrature")
        supp = low_signal_suppression(det, i_s) if i_s > 0 else math.nan
        rows.append((i_s, r_closed, r_quad, supp))
    if len(rows) == 1:
        i_s, r_closed, r_quad, supp = rows[0]
        pdict["i_s"] = i_s
        cfg = RunConfig("fixed-window", pdict, args.seed, "json", args.output)
        return _json_payload(
            cfg,
            {
                "rate_closed": r_closed,
                "rate_quadrature": r_quad,
                "suppression_ratio": None if math.isnan(supp) else supp,
            },
        )
    cfg = RunConfig("fixed-window", pdict, args.seed, "csv", args.output)
    return _csv_text(
        cfg, ["I_s", "R_closed", "R_quadrature", "suppression_ratio"], rows
    )


# ----------------------------------------------------------- first-passage

def _cmd_first_passage(args) -> str:
    noise = None
    if args.noise == "colored":
        noise = _noise_from_args(args)
        det_sigma = noise.effective_sigma
    else:
        if args.sigma is None:
            raise ValueError("sigma is required")
        det_sigma = args.sigma
    det = FirstPassageDetector(args.em, det_sigma, dead_time=args.dead_time)
    pdict = {
        "em": args.em, "sigma": det_sigma, "method": args.method,
        "noise": args.noise, "dead_time": args.dead_time,
    }
    if args.method == "monte_carlo":
        pdict.update({"dt": args.dt, "trials": args.trials, "max_steps": args.max_steps})
    if args.noise == "colored":
        pdict.update({"sigma_i": args.sigma_i, "tau_c": args.tau_c})

    base = SeedSpec(args.seed)
    rows = []
    for idx, i_s in enumerate(args.i_s):
        if i_s < 0:
            raise ValueError(f"i_s must be nonnegative, got {i_s}")
        r_an = rate_analytic(det, i_s)
        r_se = rate_series(det, i_s)
        r_mc = err = cfrac = math.nan
        if args.method == "monte_carlo":
            res = simulate_first_passage(
                det, i_s, noise=noise, dt=args.dt, n_trials=args.trials,
                seed=base.substream(idx * args.trials), max_steps=args.max_steps,
            )
            r_mc, err, cfrac = res.rate, res.rate_stderr, res.censored_fraction
        rows.append((i_s, r_an, r_se, r_mc, err, cfrac))

    if len(rows) == 1:
        i_s, r_an, r_se, r_mc, err, cfrac = rows[0]
        pdict["i_s"] = i_s
        picked = {"analytic": r_an, "series": r_se, "monte_carlo": r_mc}[args.method]
        results = {"rate": picked, "rate_analytic": r_an, "rate_series": r_se}
        if args.method == "monte_carlo":
            results.update(
                {"rate_mc_stderr": err, "censored_fraction": cfrac}
            )
        cfg = RunConfig("first-passage", pdict, args.seed, "json", args.output)
        return _json_payload(cfg, results)
    cfg = RunConfig("first-passage", pdict, args.seed, "csv", args.output)
    return _csv_text(
        cfg,
        ["I_s", "R_analytic", "R_series", "R_mc", "R_mc_stderr", "censored_fraction"],
        rows,
    )


# ---------------------------------------------------------------- coincide

def _cmd_coincide(args) -> str:
    noise = _noise_from_args(args)
    em2 = args.em2 if args.em2 is not None else args.em
    det1 = FirstPassageDetector(args.em, noise.effective_sigma, dead_time=args.dead_time)
    det2 = FirstPassageDetector(em2, noise.effective_sigma, dead_time=args.dead_time)
    config = CoincidenceConfig(
        window=args.window, duration=args.duration, detectors=(det1, det2), dt=args.dt
    )
    pdict = {
        "correlation": args.correlation, "em": args.em, "em2": em2,
        "dead_time": args.dead_time, "noise": args.noise,
        "window": args.window, "duration": args.duration, "dt": args.dt,
    }
    if args.noise == "white":
        pdict["sigma"] = args.sigma
    else:
        pdict.update({"sigma_i": args.sigma_i, "tau_c": args.tau_c})

    base = SeedSpec(args.seed)
    rows = []
    for idx, i_s in enumerate(args.i_s):
        pair = CorrelatedBeamPair(I_s=i_s, correlation=args.correlation, noise=noise)
        res = simulate_coincidences(pair, config, seed=base.substream(3 * idx))
        rows.append(
            (i_s, res.R1, res.R2, res.R12, res.accidental_estimate,
             res.excess, res.excess_stderr)
        )
    cfg = RunConfig("coincide", pdict, args.seed, "csv", args.output)
    return _csv_text(
        cfg, ["I_s", "R1", "R2", "R12", "accidental", "excess", "excess_stderr"], rows
    )


# ----------------------------------------------------------------- verdict

def _cmd_verdict(args) -> str:
    v = consistency_verdict(args.r1, args.r12, args.t, args.ratio)
    cfg = RunConfig(
        "verdict",
        {"r1": args.r1, "r12": args.r12, "t": args.t, "ratio": args.ratio},
        args.seed, "json", args.output,
    )
    return _json_payload(
        cfg,
        {
            "bound": v.bound,
            "consistent": v.consistent,
            "required_T_min": v.required_T_min,
            "required_sigma_ratio_min": v.required_sigma_ratio_min,
        },
    )


# --------------------------------------------------------------------- fit

def _cmd_fit(args) -> str:
    if not Path(args.input).is_file():
        raise ValueError(f"input file not found: {args.input}")
    points = load_rate_csv(args.input)
    init = None
    if (args.init_em is None) != (args.init_sigma is None):
        raise ValueError("init_em and init_sigma must be given together")
    if args.init_em is not None:
        init = (args.init_em, args.init_sigma)
    result = fit_rate_curve(points, model=args.model, init=init)
    pdict = {"input": args.input, "model": args.model, "n_points": len(points)}
    if init is not None:
        pdict.update({"init_em": args.init_em, "init_sigma": args.init_sigma})
    cfg = RunConfig("fit", pdict, args.seed, "json", args.output)
    return _json_payload(
        cfg,
        {
            "E_m": result.E_m,
            "Sigma": result.Sigma,
            "residual_norm": result.residual_norm,
            "covariance": [list(map(float, row)) for row in result.covariance],
            "predicted_dark_rate_exact": result.predicted_dark_rate_exact,
            "predicted_dark_rate_series": result.predicted_dark_rate_series,
            "iterations": result.iterations,
            "converged": result.converged,
        },
    )


# ------------------------------------------------------------------- sweep

def _cmd_sweep(args) -> int:
    path = Path(args.config)
    if not path.is_file():
        raise ValueError(f"config file not found: {args.config}")
    try:
        config = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"config is not valid JSON: {exc}") from None

    known = {"subcommand", "seed", "output_dir", "fixed", "grid"}
    unknown = set(config) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    sub = config.get("subcommand")
    if sub not in {"spectrum", "fixed-window", "first-passage", "coincide", "verdict", "fit"}:
        raise ValueError(f"subcommand must name a runnable subcommand, got {sub!r}")
    grid = config.get("grid", {})
    if not isinstance(grid, dict) or not grid or any(not v for v in grid.values()):
        raise ValueError("grid must map at least one parameter to a nonempty list")
    fixed = config.get("fixed", {})
    base_seed = int(config.get("seed", DEFAULT_SEED))
    out_dir = Path(config.get("output_dir", "."))
    out_dir.mkdir(parents=True, exist_ok=True)

    keys = sorted(grid)
    entries = []
    failed = False
    for index, combo in enumerate(itertools.product(*(grid[k] for k in keys))):
        params = dict(fixed)
        params.update(dict(zip(keys, combo)))
        seed = base_seed + index
        out_file = out_dir / f"{sub}_{index}.csv"
        argv = [sub, "--seed", str(seed), "--output", str(out_file)]
        for key, value in params.items():
            flag = "--" + key.replace("_", "-")
            if isinstance(value, (list, tuple)):
                argv.append(flag)
                argv.extend(str(v) for v in value)
            elif isinstance(value, bool):
                if value:
                    argv.append(flag)
            else:
                argv.extend([flag, str(value)])
        code = parse_and_dispatch(argv)
        entry = {
            "index": index,
            "file": out_file.name,
            "parameters": params,
            "seed": seed,
            "status": "ok" if code == 0 else "error",
        }
        if code != 0:
            entry["exit_code"] = code
            failed = True
        entries.append(entry)

    manifest = {"subcommand": sub, "base_seed": base_seed, "entries": entries}
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return 3 if failed else 0


# ------------------------------------------------------------------ parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zpfdetect",
        description="Photodetection models driven by zero-point field noise.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--seed", type=_seed_type, default=DEFAULT_SEED,
                       help="64-bit master seed, or 'random' (default %(default)s)")
        p.add_argument("--output", default=None, help="output file (default stdout)")

    p = subs.add_parser("spectrum", help="spectral density curve or band intensity")
    p.add_argument("--omega-min", type=float, default=None)
    p.add_argument("--omega-max", type=float, default=None)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--spacing", choices=["linear", "log"], default="linear")
    p.add_argument("--temperature", type=float, default=0.0)
    p.add_argument("--cutoff", type=float, default=None,
                   help="spectral cutoff frequency (rad/s)")
    p.add_argument("--band", type=float, nargs=2, metavar=("LO", "HI"), default=None,
                   help="integrated vacuum intensity over [LO, HI] rad/s (JSON)")
    p.add_argument("--convention", choices=["c", "c/4"], default="c")
    common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = subs.add_parser("fixed-window", help="fixed accumulation window detector")
    p.add_argument("--t", type=float, required=True, help="detection window T")
    p.add_argument("--im", type=float, required=True, help="threshold intensity I_m")
    p.add_argument("--xi", type=float, required=True, help="conversion slope xi")
    p.add_argument("--i0", type=float, default=0.0, help="baseline intensity I0")
    p.add_argument("--sigma", type=float, required=True, help="intensity spread sigma")
    p.add_argument("--is", dest="i_s", type=float, nargs="+", required=True,
                   help="signal intensities (one value: JSON; several: CSV)")
    common(p)
    p.set_defaults(func=_cmd_fixed_window)

    p = subs.add_parser("first-passage", help="threshold-accumulation detector")
    p.add_argument("--em", type=float, required=True, help="activation energy E_m")
    p.add_argument("--sigma", type=float, default=None, help="white noise amplitude")
    p.add_argument("--is", dest="i_s", type=float, nargs="+", required=True,
                   help="signal intensities (one value: JSON; several: CSV)")
    p.add_argument("--method", choices=["analytic", "series", "monte_carlo"],
                   default="analytic")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-steps", type=int, default=10**8)
    p.add_argument("--dead-time", type=float, default=0.0)
    p.add_argument("--noise", choices=["white", "colored"], default="white")
    p.add_argument("--sigma-i", type=float, default=None,
                   help="colored noise: stationary intensity spread")
    p.add_argument("--tau-c", type=float, default=None,
                   help="colored noise: correlation time")
    common(p)
    p.set_defaults(func=_cmd_first_passage)

    p = subs.add_parser("coincide", help="two-detector coincidence simulation")
    p.add_argument("--is", dest="i_s", type=float, nargs="+", required=True)
    p.add_argument("--correlation", type=float, required=True,
                   help="shared fluctuation variance fraction in [0, 1]")
    p.add_argument("--em", type=float, required=True)
    p.add_argument("--em2", type=float, default=None,
                   help="second detector threshold (default: same as --em)")
    p.add_argument("--dead-time", type=float, default=0.0)
    p.add_argument("--noise", choices=["white", "colored"], default="white")
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--sigma-i", type=float, default=None)
    p.add_argument("--tau-c", type=float, default=None)
    p.add_argument("--window", type=float, required=True)
    p.add_argument("--duration", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_coincide)

    p = subs.add_parser("verdict", help="coincidence-bound consistency check")
    p.add_argument("--r1", type=float, required=True, help="singles rate R1")
    p.add_argument("--r12", type=float, required=True, help="coincidence rate R12")
    p.add_argument("--t", type=float, required=True, help="detection window T")
    p.add_argument("--ratio", type=float, required=True,
                   help="fluctuation ratio sigma/I_s")
    common(p)
    p.set_defaults(func=_cmd_verdict)

    p = subs.add_parser("fit", help="fit the rate law to a measured curve")
    p.add_argument("--input", required=True, help="CSV with header I_s,R[,weight]")
    p.add_argument("--model", choices=["exact", "series"], default="exact")
    p.add_argument("--init-em", type=float, default=None)
    p.add_argument("--init-sigma", type=float, default=None)
    common(p)
    p.set_defaults(func=_cmd_fit)

    p = subs.add_parser("sweep", help="expand a JSON parameter grid into files")
    p.add_argument("config", help="JSON: subcommand, seed, output_dir, fixed, grid")
    p.set_defaults(func=None)

    return parser


def parse_and_dispatch(argv) -> int:
    """Run one command line; returns the exit code instead of raising."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        if args.subcommand == "sweep":
            return _cmd_sweep(args)
        payload = args.func(args)
    except InsufficientStatisticsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(payload, args.output)
    return 0


def main(argv=None) -> int:
    return parse_and_dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
