"""Grid sweeps over acceleration or ``z`` with deterministic CSV output."""

from __future__ import annotations

import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .csvio import format_csv
from .errors import ConfigError, ConvergenceFailure, UnruhCorrError
from .field_modes import GaussianModeSpec, QuadratureConfig
from .plot import emit_plot_script
from .scenario import (
    ScenarioConfig,
    UnruhMode,
    evaluate_point,
    residual_discord_limit,
    sudden_death_acceleration,
)

KINDS = ("local", "unruh", "sudden-death")
OUTPUT_DIR_ENV = "UNRUHCORR_OUTPUT_DIR"
MIN_LOCAL_A = 0.5


@dataclass
class SweepRequest:
    kind: str = "local"
    s: float = 1.0
    mode_n: float = 6.0
    lambda_l: float = 1.0 / 3.0
    omega0: Optional[float] = None
    grid_min: Optional[float] = None
    grid_max: Optional[float] = None
    count: int = 60
    spacing: str = "linear"
    bracket: tuple = (0.5, 70.0)
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    output: Optional[str] = None
    jobs: int = 1
    allow_small_a: bool = False

    @property
    def sweeps_z(self) -> bool:
        return self.kind == "unruh" and self.omega0 is None

    def validate(self):
        if self.kind not in KINDS:
            raise ConfigError("kind", f"must be one of {', '.join(KINDS)}, got {self.kind!r}")
        if not (self.s > 0 and math.isfinite(self.s)):
            raise ConfigError("s", f"squeezing must be positive, got {self.s!r}")
        if self.jobs < 1:
            raise ConfigError("jobs", f"must be at least 1, got {self.jobs!r}")
        if self.kind in ("local", "sudden-death"):
            if not self.mode_n > 0:
                raise ConfigError("mode-n", f"must be positive, got {self.mode_n!r}")
            if not 0 < self.lambda_l < self.mode_n:
                raise ConfigError("lambda-l", f"must lie in (0, mode-n), got {self.lambda_l!r}")
        if self.omega0 is not None and not self.omega0 > 0:
            raise ConfigError("omega0", f"must be positive, got {self.omega0!r}")
        if self.kind == "sudden-death":
            lo, hi = self.bracket
            if not 0 < lo < hi:
                raise ConfigError("bracket", f"needs 0 < low < high, got {self.bracket!r}")
            return
        lo_key, hi_key = ("z-min", "z-max") if self.sweeps_z else ("a-min", "a-max")
        if self.count < 2:
            raise ConfigError("count", f"must be at least 2, got {self.count!r}")
        if self.spacing not in ("linear", "log"):
            raise ConfigError("spacing", f"must be 'linear' or 'log', got {self.spacing!r}")
        lo, hi = self.grid_bounds()
        if not lo < hi:
            raise ConfigError(lo_key, f"must be below {hi_key} ({lo!r} >= {hi!r})")
        if self.sweeps_z:
            if not 0 < lo:
                raise ConfigError(lo_key, f"must be positive, got {lo!r}")
            if not hi < 1:
                raise ConfigError(hi_key, f"must be below 1, got {hi!r}")
        elif not lo > 0:
            raise ConfigError(lo_key, f"must be positive, got {lo!r}")
        if self.kind == "local" and lo < MIN_LOCAL_A and not self.allow_small_a:
            raise ConfigError(lo_key, f"local sweeps start at aL >= {MIN_LOCAL_A} unless --allow-small-a is set")
        if self.spacing == "log" and lo <= 0:
            raise ConfigError(lo_key, "log spacing needs a positive lower bound")

    def grid_bounds(self):
        if self.sweeps_z:
            lo_default, hi_default = 0.01, 0.9999
        else:
            lo_default, hi_default = MIN_LOCAL_A, 70.0
        lo = lo_default if self.grid_min is None else float(self.grid_min)
        hi = hi_default if self.grid_max is None else float(self.grid_max)
        return lo, hi

    def grid(self) -> np.ndarray:
        lo, hi = self.grid_bounds()
        if self.spacing == "log":
            return np.geomspace(lo, hi, self.count)
        return np.linspace(lo, hi, self.count)

    def scenario(self) -> ScenarioConfig:
        if self.kind in ("local", "sudden-death"):
            mode = GaussianModeSpec(N=self.mode_n, Lambda=self.lambda_l)
        else:
            mode = UnruhMode(omega0=self.omega0)
        return ScenarioConfig(s=self.s, mode=mode, quad=self.quad)

    def output_path(self) -> Path:
        name = self.output or f"sweep_{self.kind.replace('-', '_')}.csv"
        path = Path(name)
        override = os.environ.get(OUTPUT_DIR_ENV)
        if override and not path.is_absolute():
            path = Path(override) / path
        return path


def _evaluate(cfg: ScenarioConfig, x: float):
    try:
        return evaluate_point(cfg, x)
    except ConvergenceFailure as exc:
        return exc


def compute_records(cfg: ScenarioConfig, grid, jobs: int = 1):
    """Evaluate every grid point; results come back in grid order."""
    grid = [float(x) for x in grid]
    if jobs == 1:
        results = [_evaluate(cfg, x) for x in grid]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate, [cfg] * len(grid), grid))
    for x, res in zip(grid, results):
        if isinstance(res, ConvergenceFailure):
            raise ConvergenceFailure(f"grid point x={x:.12g}: {res}", res.quantity, res.achieved_error)
    return results


def _local_summary(records):
    xs = [r.x for r in records]
    g = [r.measures.nu_tilde_minus - 1.0 for r in records]
    for i in range(1, len(records)):
        if g[i - 1] < 0.0 <= g[i]:
            x0, x1 = xs[i - 1], xs[i]
            est = x0 + (x1 - x0) * (-g[i - 1]) / (g[i] - g[i - 1])
            return (
                f"sudden death between aL={x0:.6g} and aL={x1:.6g} "
                f"(interpolated a*L ~ {est:.6g}); E_N = 0 from row {i + 1}"
            )
    return "no sudden death on this grid"


def _unruh_summary(records, s):
    last = records[-1]
    limit = residual_discord_limit(s)
    gap = abs(last.measures.D_BA - limit) / limit
    return (
        f"D(B:A) at z={last.x:.6g} is {last.measures.D_BA:.6g} bits; "
        f"residual limit 2 log2(coth s) sinh^2 s = {limit:.6g} (relative gap {gap:.3%})"
    )


def run(request: SweepRequest, stdout=None, stderr=None) -> int:
    """Execute a request, writing the CSV (and plot script for sweeps).

    Returns the process exit code: 0 success, 1 invalid configuration,
    2 quadrature failure.
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        request.validate()
        cfg = request.scenario()
    except (ConfigError, UnruhCorrError) as exc:
        print(f"error: invalid configuration: {exc}", file=stderr)
        return 1

    out = request.output_path()
    try:
        if request.kind == "sudden-death":
            res = sudden_death_acceleration(cfg, request.bracket)
            records = [evaluate_point(cfg, res.a_star)]
            summary = (
                f"a*L = {res.a_star:.10g}; nu_tilde_minus - 1 = {res.nu_tilde_minus_minus_one:.3e}; "
                f"separability residual = {res.separability_residual:.3e}"
            )
        else:
            records = compute_records(cfg, request.grid(), request.jobs)
            if request.kind == "local":
                summary = _local_summary(records)
            elif request.sweeps_z:
                summary = _unruh_summary(records, request.s)
            else:
                spread = max(r.measures.E_N for r in records) - min(r.measures.E_N for r in records)
                summary = f"fixed Omega0={request.omega0:g}: spread of E_N over the grid {spread:.3e}"
    except ConvergenceFailure as exc:
        print(f"error: quadrature failed: {exc}", file=stderr)
        return 2
    except UnruhCorrError as exc:
        print(f"error: invalid configuration: {exc}", file=stderr)
        return 1

    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        fh.write(format_csv(records))
    print(f"wrote {len(records)} rows to {out}", file=stdout)
    if request.kind != "sudden-death":
        kind = "unruh-z" if request.sweeps_z else "acceleration"
        script = emit_plot_script(out, kind=kind)
        print(f"plot script {script}", file=stdout)
    print(summary, file=stdout)
    return 0
