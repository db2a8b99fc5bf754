"""Configuration parsing, run driver and the command-line entry point.

Config files are line-oriented `key=value` with `#` comments. A run writes
`diagnostics.csv` (fixed header, comma-separated, 17 significant digits,
model-irrelevant columns empty) and per-time snapshot files in the plain-text
mesh format.
"""

import argparse
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import advection
from .core import BlowUpError, run_simulation
from .limiter import LimiterConfig
from .mesh import save_snapshot
from .presets import PRESETS, build_run

CSV_HEADER = ("time,entropy,l1_error,linf_error,tv,mass,momentum,energy,"
              "neg_cells,froude_max")
_COLUMNS = ("entropy", "l1_error", "linf_error", "tv", "mass", "momentum",
            "energy", "neg_cells", "froude_max")

_KEYS = {"model", "test", "scheme", "n_cells", "dt", "t_end", "sample_every",
         "snapshot_times", "alpha", "g", "output_dir", "seed"}


@dataclass
class RunConfig:
    model: str
    test: str
    scheme: str = ""
    n_cells: Optional[int] = None
    dt: object = None            # float or "auto"
    t_end: Optional[float] = None
    sample_every: Optional[float] = None
    snapshot_times: list = field(default_factory=list)
    alpha: Optional[float] = None
    g: Optional[float] = None
    output_dir: str = "."
    seed: int = 0


def _parse_value(key, raw):
    raw = raw.strip()
    try:
        if key == "n_cells":
            return int(raw)
        if key == "seed":
            return int(raw)
        if key == "dt":
            return "auto" if raw == "auto" else float(raw)
        if key in ("t_end", "sample_every", "alpha", "g"):
            return float(raw)
        if key == "snapshot_times":
            return [float(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"malformed value for {key!r}: {raw!r}") from None
    return raw


def parse_config(text):
    """Parse and validate a key=value config into a RunConfig."""
    values = {}
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {ln}: expected key=value, got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ValueError(f"line {ln}: unknown key {key!r}")
        values[key] = _parse_value(key, raw)
    for required in ("model", "test"):
        if required not in values:
            raise ValueError(f"missing required key {required!r}")
    config = RunConfig(**values)
    if config.model not in PRESETS:
        raise ValueError(f"unknown model {config.model!r}")
    if config.test not in PRESETS[config.model]:
        raise ValueError(f"unknown test {config.test!r}")
    schemes = PRESETS[config.model][config.test]
    if not config.scheme:
        config.scheme = schemes[0]
    if config.scheme not in schemes:
        raise ValueError(f"unknown scheme {config.scheme!r} for "
                         f"{config.model}/{config.test}")
    if config.t_end is not None and config.t_end < 0:
        raise ValueError("t_end must be nonnegative")
    if config.sample_every is not None and config.sample_every <= 0:
        raise ValueError("sample_every must be positive")
    return config


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % value


def _write_rows(path, rows):
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for rec in rows:
            cells = [_fmt(rec.t)] + [_fmt(getattr(rec, c)) for c in _COLUMNS]
            fh.write(",".join(cells) + "\n")


def thread_cap():
    """Internal-parallelism cap from RESIDEQ_THREADS (default 1).

    All solvers are single-threaded pure-numpy loops, so the cap is honored
    trivially; the variable is still validated so misconfiguration fails
    loudly.
    """
    raw = os.environ.get("RESIDEQ_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"RESIDEQ_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise ValueError("RESIDEQ_THREADS must be >= 1")
    return cap


def _run_tvd_sweep(config, outdir):
    from .mesh import make_grid_1d
    grid = make_grid_1d(config.n_cells or 100, 0.0, 5.0)
    params = advection.AdvectionParams(1.0, grid, 1.0)
    report = advection.tvd_sweep(
        params, LimiterConfig(alpha=config.alpha or 2.0),
        n_random=20, seed=config.seed, record=True)
    path = os.path.join(outdir, "tvd_report.csv")
    with open(path, "w") as fh:
        fh.write("case,step,tv,max_increase\n")
        for case in report.cases:
            for step, tv in enumerate(case.tv_trace):
                fh.write(f"{case.name},{step},{_fmt(tv)},"
                         f"{_fmt(case.max_increase)}\n")
    print(f"wrote {path}: {report.violations} violations, "
          f"max increase {report.max_increase:.3e}")
    return 0 if report.violations == 0 else 4


def run(config):
    """Execute one configured run; returns the process exit status."""
    thread_cap()
    outdir = config.output_dir
    os.makedirs(outdir, exist_ok=True)
    if not os.access(outdir, os.W_OK):
        raise OSError(f"output_dir {outdir!r} is not writable")
    if config.model == "advect" and config.test == "tvd-sweep":
        return _run_tvd_sweep(config, outdir)
    setup = build_run(config)
    rows = []
    snap_times = sorted(config.snapshot_times)
    pending = list(snap_times)

    def hook(t, u):
        rows.append(setup.diag(t, u))
        while pending and t >= pending[0] - 1e-9:
            tt = pending.pop(0)
            save_snapshot(u, os.path.join(outdir, f"solution_t{tt:g}.dat"))
        return None

    try:
        if setup.stepper_fn is not None:
            u, t = setup.u0, 0.0
            hook(t, u)
            n = max(1, round(setup.t_end / setup.stepper.dt))
            dt = setup.t_end / n
            next_sample = setup.sample_every
            for k in range(n):
                u = setup.stepper_fn(u, t)
                t = (k + 1) * dt
                if t >= next_sample - 1e-12 or k == n - 1:
                    hook(t, u)
                    while next_sample <= t + 1e-12:
                        next_sample += setup.sample_every
            final = u
        else:
            result = run_simulation(setup.operator, setup.u0, setup.stepper,
                                    setup.t_end,
                                    sample_every=setup.sample_every,
                                    hook=hook, dt_fn=setup.dt_fn)
            final = result.u
    except BlowUpError as exc:
        _write_rows(os.path.join(outdir, "diagnostics.csv"), rows)
        print(f"blow-up: {exc}", file=sys.stderr)
        return 3
    _write_rows(os.path.join(outdir, "diagnostics.csv"), rows)
    save_snapshot(final, os.path.join(outdir, "solution_final.dat"))
    return 0


def _apply_overrides(text, overrides):
    return text + "\n" + "\n".join(overrides or [])


def main(argv=None):
    parser = argparse.ArgumentParser(prog="resideq",
                                     description="steady-state preserving "
                                     "PDE solver experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="execute a configured run")
    p_run.add_argument("config", help="path to a key=value config file")
    p_run.add_argument("--output-dir", default=None)
    p_run.add_argument("--override", action="append", default=[],
                       metavar="key=value")
    sub.add_parser("presets", help="list available presets")
    args = parser.parse_args(argv)

    if args.command == "presets":
        for model, tests in PRESETS.items():
            for test, schemes in tests.items():
                print(f"{model}/{test}: schemes {', '.join(schemes)}")
        return 0

    with open(args.config) as fh:
        text = fh.read()
    text = _apply_overrides(text, args.override)
    config = parse_config(text)
    if args.output_dir is not None:
        config.output_dir = args.output_dir
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
