"""Experiment runner: convergence and Cauchy-error studies, time series, file output.

Experiments are described by INI files read with :mod:`configparser`::

    [experiment]
    problem = burgers1d_case1
    scheme = hoc_splitting
    sweep = 90, 180, 270, 360
    time_rule = tau_ch2          ; fixed_tau | tau_ch | tau_ch2 | fixed_nt
    time_value = 1.0
    mode = exact                 ; exact | cauchy_space | cauchy_time | timeseries

    [problem]
    gamma = 2e-3                 ; keyword arguments of the problem factory

    [scheme]
    K = 1
    limiter = false
"""

from __future__ import annotations

import configparser
import csv
import dataclasses
import hashlib
import io
import json
import math
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .grid import Grid1D, GridFunction, weighted_sum, write_binary, write_csv
from .multipliers import SecantConfig
from .problems import REGISTRY, ProblemSpec, get_problem
from .schemes1d import (
    SCHEMES_1D,
    CflConfig,
    LimiterConfig,
    SchemeConfig,
    StepDiagnostics,
    SubstepConfig,
    make_stepper_1d,
)
from .schemes2d import SCHEMES_2D, make_stepper_2d

TIME_RULES = ("fixed_tau", "tau_ch", "tau_ch2", "fixed_nt")
MODES = ("exact", "cauchy_space", "cauchy_time", "timeseries")


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


# ------------------------------------------------------------------ config


def _parse_bool(v: str) -> bool:
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


def _parse_ints(v) -> tuple[int, ...]:
    if isinstance(v, (list, tuple)):
        return tuple(int(x) for x in v)
    items = [x for x in str(v).replace(",", " ").split() if x]
    try:
        return tuple(int(x) for x in items)
    except ValueError as exc:
        raise ConfigError(f"expected a list of integers, got {v!r}") from exc


def _parse_floats(v) -> tuple[float, ...]:
    if isinstance(v, (list, tuple)):
        return tuple(float(x) for x in v)
    items = [x for x in str(v).replace(",", " ").split() if x]
    try:
        return tuple(float(x) for x in items)
    except ValueError as exc:
        raise ConfigError(f"expected a list of numbers, got {v!r}") from exc


def _parse_scalar(v: str):
    s = v.strip()
    for conv in (int, float):
        try:
            return conv(s)
        except ValueError:
            pass
    if s.lower() in ("true", "false"):
        return s.lower() == "true"
    return s


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a problem, a scheme, a grid sweep and a time rule."""

    problem: str
    scheme: str
    sweep: tuple[int, ...]
    time_rule: str = "fixed_nt"
    time_value: float = 100.0
    mode: str = "exact"
    nt_sweep: tuple[int, ...] = ()
    T: float | None = None
    problem_params: dict = field(default_factory=dict)
    K: int = 1
    auto_substeps: bool = False
    C0: float = 1.0 / 3.0
    limiter: bool | None = None  # None -> the problem's default
    M_tvb: float = 10.0
    zero_multiplier_in_predictor: bool | None = None
    secant_tol: float | None = None
    secant_max_iter: int = 50
    xi1_seed: float | None = None
    snapshots: tuple[float, ...] = ()
    name: str = "experiment"
    out_dir: str = "results"
    seed: int = 0

    def __post_init__(self):
        if self.problem not in REGISTRY:
            raise ConfigError(f"unknown problem {self.problem!r}")
        if self.scheme not in SCHEMES_1D and self.scheme not in SCHEMES_2D:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if self.time_rule not in TIME_RULES:
            raise ConfigError(f"time_rule must be one of {TIME_RULES}, got {self.time_rule!r}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.sweep or any(n < 4 for n in self.sweep):
            raise ConfigError("sweep needs grid sizes N >= 4")
        if self.mode == "cauchy_time" and not self.nt_sweep:
            raise ConfigError("cauchy_time mode needs nt_sweep")
        if not self.time_value > 0:
            raise ConfigError("time_value must be positive")
        try:
            prob = self.build_problem()
            SubstepConfig(self.K)
            LimiterConfig(bool(self.limiter), self.M_tvb)
            CflConfig(self.C0, self.auto_substeps)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        dim = 1 if self.scheme in SCHEMES_1D else 2
        if prob.dim != dim:
            raise ConfigError(f"scheme {self.scheme!r} is {dim}D but problem {self.problem!r} is {prob.dim}D")
        if self.mode == "exact" and prob.exact is None:
            raise ConfigError(f"problem {self.problem!r} has no exact solution; use a Cauchy mode")
        if self.scheme in ("bp_hoc_splitting", "bpmc_hoc_splitting", "bp_adi", "bpmc_adi") and prob.bounds is None:
            raise ConfigError(f"scheme {self.scheme!r} needs a problem with bounds")

    # -- construction
    def build_problem(self) -> ProblemSpec:
        return get_problem(self.problem, **self.problem_params)

    def scheme_config(self) -> SchemeConfig:
        limiter = self.build_problem().limiter_default if self.limiter is None else self.limiter
        return SchemeConfig(
            substeps=SubstepConfig(self.K),
            limiter=LimiterConfig(limiter, self.M_tvb),
            cfl=CflConfig(self.C0, self.auto_substeps),
            secant=SecantConfig(self.xi1_seed, self.secant_tol, self.secant_max_iter),
            zero_multiplier_in_predictor=self.zero_multiplier_in_predictor,
        )

    def final_time(self, problem: ProblemSpec) -> float:
        return problem.T if self.T is None else float(self.T)

    def steps(self, problem: ProblemSpec, h: float) -> int:
        """Number of time steps for spacing ``h`` under the time rule."""
        duration = self.final_time(problem) - problem.t0
        if duration <= 0:
            return 0
        if self.time_rule == "fixed_nt":
            return int(self.time_value)
        tau = {"fixed_tau": self.time_value, "tau_ch": self.time_value * h, "tau_ch2": self.time_value * h * h}[
            self.time_rule
        ]
        return max(1, int(round(duration / tau)))

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["sweep"] = list(self.sweep)
        d["nt_sweep"] = list(self.nt_sweep)
        d["snapshots"] = list(self.snapshots)
        return d

    def config_hash(self) -> str:
        d = self.to_dict()
        for k in ("out_dir", "name"):
            d.pop(k)
        blob = json.dumps(d, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:12]

    def with_overrides(self, overrides: Iterable[str]) -> "ExperimentConfig":
        d = self.to_dict()
        params = dict(d["problem_params"])
        for item in overrides:
            if "=" not in item:
                raise ConfigError(f"override must look like key=value, got {item!r}")
            key, value = item.split("=", 1)
            key = key.strip()
            if key.startswith("problem."):
                params[key[len("problem."):]] = _parse_scalar(value)
                continue
            key = key.split(".", 1)[-1]
            if key not in d:
                raise ConfigError(f"unknown config key {key!r}")
            d[key] = value
        d["problem_params"] = params
        return config_from_mapping(d)


_FIELD_TYPES = {
    "sweep": _parse_ints,
    "nt_sweep": _parse_ints,
    "snapshots": _parse_floats,
    "time_value": float,
    "T": lambda v: None if str(v).strip().lower() in ("", "none") else float(v),
    "K": int,
    "auto_substeps": _parse_bool,
    "C0": float,
    "limiter": _parse_bool,
    "M_tvb": float,
    "zero_multiplier_in_predictor": lambda v: None if str(v).strip().lower() in ("", "none", "default") else _parse_bool(v),
    "secant_tol": lambda v: None if str(v).strip().lower() in ("", "none") else float(v),
    "secant_max_iter": int,
    "xi1_seed": lambda v: None if str(v).strip().lower() in ("", "none") else float(v),
    "seed": int,
}


def config_from_mapping(d: dict) -> ExperimentConfig:
    names = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(d) - names
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    kw = {}
    for k, v in d.items():
        conv = _FIELD_TYPES.get(k)
        if conv is not None and isinstance(v, str):
            try:
                v = conv(v)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {k}: {v!r}") from exc
        elif k in ("sweep", "nt_sweep") and v is not None:
            v = _parse_ints(v)
        elif k == "snapshots":
            v = _parse_floats(v)
        kw[k] = v
    for req in ("problem", "scheme", "sweep"):
        if req not in kw:
            raise ConfigError(f"missing required key {req!r}")
    return ExperimentConfig(**kw)


def load_config(path: str | Path) -> ExperimentConfig:
    """Read an INI experiment file (sections ``experiment``, ``problem``, ``scheme``, ``output``)."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    d: dict = {}
    for section in ("experiment", "scheme", "output"):
        if parser.has_section(section):
            d.update(parser[section])
    if "dir" in d:
        d["out_dir"] = d.pop("dir")
    if parser.has_section("problem"):
        d["problem_params"] = {k: _parse_scalar(v) for k, v in parser["problem"].items()}
    extra = set(parser.sections()) - {"experiment", "problem", "scheme", "output"}
    if extra:
        raise ConfigError(f"unknown config sections: {', '.join(sorted(extra))}")
    return config_from_mapping(d)


# ----------------------------------------------------------------- running


@dataclass
class ConvergenceRow:
    N: int
    Nt: int
    linf: float
    l2: float
    order_linf: float = math.nan
    order_l2: float = math.nan
    cpu: float = 0.0
    diverged: bool = False


@dataclass
class RunResult:
    grid: object
    u: np.ndarray | None
    Nt: int
    cpu: float
    diverged: bool = False
    diagnostics: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)
    message: str = ""


def make_stepper(cfg: ExperimentConfig, problem: ProblemSpec, grid, tau: float):
    if cfg.scheme in SCHEMES_1D:
        return make_stepper_1d(cfg.scheme, problem, grid, tau, cfg.scheme_config())
    return make_stepper_2d(cfg.scheme, problem, grid, tau, cfg.scheme_config())


def _spacing(grid) -> float:
    return grid.h if isinstance(grid, Grid1D) else grid.gx.h


def integrate(cfg: ExperimentConfig, N: int, Nt: int | None = None, record: bool = False) -> RunResult:
    """Integrate one run; ``record`` collects per-step diagnostics and snapshots."""
    problem = cfg.build_problem()
    grid = problem.grid(N)
    if Nt is None:
        Nt = cfg.steps(problem, _spacing(grid))
    T = cfg.final_time(problem)
    u = problem.initial_values(grid)
    res = RunResult(grid, u, Nt, 0.0)
    snap_steps: dict[int, float] = {}
    if Nt == 0:
        res.snapshots = {float(t): u.copy() for t in cfg.snapshots} if record else {}
        return res
    tau = (T - problem.t0) / Nt
    if record:
        for ts in cfg.snapshots:
            k = int(round((ts - problem.t0) / tau))
            if 0 <= k <= Nt:
                snap_steps[k] = float(ts)
        if 0 in snap_steps:
            res.snapshots[snap_steps[0]] = u.copy()
    stepper = make_stepper(cfg, problem, grid, tau)
    h = grid.h
    start = time.process_time()
    mass_prev = stepper.mass(u)
    try:
        for n in range(Nt):
            t = problem.t0 + n * tau
            w0 = time.perf_counter()
            target = stepper.mass_target(u, t) if record else 0.0
            u, diag = stepper.advance(u, t)
            target = getattr(stepper, "last_target", target)
            if not np.all(np.isfinite(u)):
                raise FloatingPointError(f"non-finite solution after step {n + 1}")
            if record:
                diag.wall = time.perf_counter() - w0
                diag.step = n + 1
                diag.time = t + tau
                diag.mass = stepper.mass(u)
                diag.mass_defect = (diag.mass - target) / max(abs(target), abs(mass_prev), 1e-300)
                mass_prev = diag.mass
                diag.umin = float(u.min())
                diag.umax = float(u.max())
                if problem.entropy is not None and problem.dim == 1:
                    diag.entropy = problem.entropy(grid.x, u, h)
                res.diagnostics.append(diag)
                if n + 1 in snap_steps:
                    res.snapshots[snap_steps[n + 1]] = u.copy()
    except (FloatingPointError, ArithmeticError, np.linalg.LinAlgError, RuntimeError) as exc:
        res.diverged = True
        res.message = str(exc)
        res.u = None
    res.cpu = time.process_time() - start
    if res.u is not None:
        res.u = u
    return res


def initial_diagnostics(cfg: ExperimentConfig, N: int) -> StepDiagnostics:
    problem = cfg.build_problem()
    grid = problem.grid(N)
    u = problem.initial_values(grid)
    vals = u[grid.interior]
    d = StepDiagnostics(step=0, time=problem.t0, mass=weighted_sum(vals, grid.h), mass_defect=0.0)
    d.umin, d.umax, d.xi = float(u.min()), float(u.max()), 0.0
    if problem.entropy is not None and problem.dim == 1:
        d.entropy = problem.entropy(grid.x, u, grid.h)
    return d


def coincident(fine: np.ndarray, periodic: bool) -> np.ndarray:
    """Values of a 2N run at the nodes of the N grid."""
    sl = slice(1, None, 2) if periodic else slice(None, None, 2)
    return fine[(sl,) * fine.ndim]


def _norms(e: np.ndarray, grid) -> tuple[float, float]:
    inner = e[grid.interior]
    return float(np.max(np.abs(inner))), math.sqrt(weighted_sum(inner * inner, grid.h))


def _orders(rows: list[ConvergenceRow], scale: Sequence[float]) -> None:
    for i in range(1, len(rows)):
        a, b = rows[i - 1], rows[i]
        if a.diverged or b.diverged:
            continue
        r = math.log(scale[i - 1] / scale[i])
        for attr in ("linf", "l2"):
            ea, eb = getattr(a, attr), getattr(b, attr)
            if ea > 0 and eb > 0:
                setattr(b, f"order_{attr}", math.log(ea / eb) / r)


def _run_job(args):
    cfg, N, Nt = args
    return integrate(cfg, N, Nt)


def _run_all(cfg: ExperimentConfig, jobs: Sequence[tuple[int, int | None]], n_jobs: int) -> list[RunResult]:
    tasks = [(cfg, N, Nt) for N, Nt in jobs]
    if n_jobs <= 1 or len(tasks) <= 1:
        return [_run_job(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(_run_job, tasks))


def run_convergence(cfg: ExperimentConfig, jobs: int = 1) -> list[ConvergenceRow]:
    """Errors and observed orders over the sweep.

    ``exact`` compares with the exact solution at the final time;
    ``cauchy_space`` compares each N with the 2N run on the coarse nodes;
    ``cauchy_time`` fixes ``N = sweep[0]`` and compares each ``N_t`` with
    the ``2 N_t`` run.
    """
    problem = cfg.build_problem()
    T = cfg.final_time(problem)
    if cfg.mode == "cauchy_time":
        N = cfg.sweep[0]
        nts = list(cfg.nt_sweep)
        runs = _run_all(cfg, [(N, nt) for nt in nts + [2 * nts[-1]]], jobs)
        rows = [_cauchy_row(N, nt, runs[i], runs[i + 1], False) for i, nt in enumerate(nts)]
        _orders(rows, [1.0 / nt for nt in nts])
        return rows
    if cfg.mode == "cauchy_space":
        Ns = list(cfg.sweep)
        runs = _run_all(cfg, [(n, None) for n in Ns + [2 * Ns[-1]]], jobs)
        rows = [_cauchy_row(N, runs[i].Nt, runs[i], runs[i + 1], True) for i, N in enumerate(Ns)]
        _orders(rows, [1.0 / n for n in Ns])
        return rows
    runs = _run_all(cfg, [(n, None) for n in cfg.sweep], jobs)
    rows = []
    for N, r in zip(cfg.sweep, runs):
        if r.diverged:
            rows.append(ConvergenceRow(N, r.Nt, math.nan, math.nan, cpu=r.cpu, diverged=True))
            continue
        linf, l2 = _norms(r.u - problem.exact_values(r.grid, T), r.grid)
        rows.append(ConvergenceRow(N, r.Nt, linf, l2, cpu=r.cpu))
    _orders(rows, [1.0 / n for n in cfg.sweep])
    return rows


def _cauchy_row(N: int, Nt: int, coarse: RunResult, fine: RunResult, space: bool) -> ConvergenceRow:
    cpu = coarse.cpu
    if coarse.diverged or fine.diverged:
        return ConvergenceRow(N, Nt, math.nan, math.nan, cpu=cpu, diverged=True)
    ref = coincident(fine.u, coarse.grid.periodic) if space else fine.u
    linf, l2 = _norms(coarse.u - ref, coarse.grid)
    return ConvergenceRow(N, Nt, linf, l2, cpu=cpu)


def run_timeseries(cfg: ExperimentConfig, N: int | None = None) -> RunResult:
    """Integrate once at ``N`` (default ``sweep[0]``) recording diagnostics each step."""
    N = cfg.sweep[0] if N is None else N
    res = integrate(cfg, N, record=True)
    res.diagnostics.insert(0, initial_diagnostics(cfg, N))
    return res


# ------------------------------------------------------------------ output

ROW_FIELDS = ["N", "Nt", "linf", "order_linf", "l2", "order_l2", "diverged"]
DIAG_FIELDS = [
    "step", "time", "mass", "mass_defect", "umin", "umax", "clipped",
    "max_lambda", "xi", "secant_iterations", "entropy", "substeps",
]


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: Sequence, fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(getattr(r, f)) for f in fields])
    return buf.getvalue()


def git_revision() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "HEAD"], capture_output=True, text=True, timeout=5, cwd=Path(__file__).parent
        )
        return out.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def emit(
    cfg: ExperimentConfig,
    rows: Sequence[ConvergenceRow] | None = None,
    series: RunResult | None = None,
    out_dir: str | Path | None = None,
    wall: float = 0.0,
) -> dict[str, Path]:
    """Write tables, diagnostics, snapshots and a manifest; returns the written paths.

    File names are ``<name>-<config hash>...``; numeric CSVs exclude timing
    (timing goes to ``-timing.csv``) so identical configs give identical files.
    """
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    stem = f"{cfg.name}-{cfg.config_hash()}"
    written: dict[str, Path] = {}
    if rows is not None:
        p = out / f"{stem}.csv"
        p.write_text(rows_to_csv(rows, ROW_FIELDS))
        written["table"] = p
        t = out / f"{stem}-timing.csv"
        t.write_text(rows_to_csv(rows, ["N", "Nt", "cpu"]))
        written["timing"] = t
    if series is not None:
        p = out / f"{stem}-diagnostics.csv"
        p.write_text(rows_to_csv(series.diagnostics, DIAG_FIELDS))
        written["diagnostics"] = p
        t = out / f"{stem}-diagnostics-timing.csv"
        t.write_text(rows_to_csv(series.diagnostics, ["step", "wall"]))
        written["diagnostics_timing"] = t
        for ts, vals in sorted(series.snapshots.items()):
            gf = GridFunction(series.grid, vals)
            base = out / f"{stem}-snapshot-t{ts:g}"
            write_csv(gf, base.with_suffix(".csv"))
            write_binary(gf, base.with_suffix(".bin"))
            written[f"snapshot_{ts:g}"] = base.with_suffix(".bin")
    manifest = {
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "git_revision": git_revision(),
        "version": __version__,
        "wall_clock_seconds": wall,
        "files": sorted(p.name for p in written.values()),
        "diverged": bool(rows and any(r.diverged for r in rows)) or bool(series and series.diverged),
    }
    m = out / f"{stem}-manifest.json"
    m.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    written["manifest"] = m
    return written


def run(cfg: ExperimentConfig, jobs: int = 1, out_dir: str | Path | None = None):
    """Run an experiment according to its mode and write its outputs."""
    start = time.perf_counter()
    if cfg.mode == "timeseries":
        series = run_timeseries(cfg)
        paths = emit(cfg, series=series, out_dir=out_dir, wall=time.perf_counter() - start)
        return series, paths, series.diverged
    rows = run_convergence(cfg, jobs)
    paths = emit(cfg, rows=rows, out_dir=out_dir, wall=time.perf_counter() - start)
    return rows, paths, any(r.diverged for r in rows)


# --------------------------------------------------------------- reproduce


def reproduce_configs(target: str, full: bool = False) -> list[ExperimentConfig]:
    """Experiment configs behind each reproducible table or figure.

    ``full=False`` trims the heaviest 2D runs (N = 360 sweeps, N = 500
    vortex) to CI-sized subsets.
    """
    E = ExperimentConfig
    if target == "table1":
        return [
            E("burgers1d_case1", "hoc_splitting", (180, 360, 540, 720), "fixed_tau", 1e-5, name="table1-K1"),
            E("burgers1d_case1", "hoc_splitting", (180, 360, 540, 720), "fixed_tau", 1e-4, K=10, name="table1-K10"),
        ]
    if target == "table2":
        p = {"gamma": 2e-3}
        return [
            E("burgers1d_case1", s, (90, 180, 270, 360), "tau_ch2", 1.0, problem_params=p, name=f"table2-{s}")
            for s in ("hoc_splitting", "bp_hoc_splitting")
        ]
    if target == "table4":
        return [E("fokker_planck", "bpmc_hoc_splitting", (50, 100, 200, 400), "fixed_tau", 1e-4, "cauchy_space", T=0.5, name="table4")]
    if target == "table5":
        return [
            E("fokker_planck", "bpmc_hoc_splitting", (503,), "fixed_nt", 100, "cauchy_time", nt_sweep=(100, 200, 400, 800), T=0.5, name="table5")
        ]
    if target == "table6":
        sweep = (90, 180, 270, 360) if full else (90, 180)
        return [E("burgers2d", s, sweep, "tau_ch2", 1.0, name=f"table6-{s}") for s in ("bdf2_imex_hoc", "hoc_adi_splitting")]
    if target == "table7":
        sweep = (60, 120, 240, 360) if full else (60, 120, 240)
        return [E("burgers2d", s, sweep, "tau_ch2", 1.0, name=f"table7-{s}") for s in ("bp_adi", "bpmc_adi")]
    if target == "fp-entropy":
        return [E("fokker_planck", "bpmc_hoc_splitting", (80,), "fixed_nt", 40, "timeseries", T=2.0, snapshots=(0.0, 2.0), name="fp-entropy")]
    if target == "mass-figures":
        vortex_n = 500 if full else 100
        h = 1.0 / vortex_n
        nt = int(math.ceil(2.0 / (h / (6.0 * math.pi / math.sqrt(2.0)))))
        cfgs = [
            E("burgers2d", s, (200,), "fixed_tau", 5.6e-3, "timeseries", snapshots=(0.0, 0.6), name=f"mass-burgers2d-{s}")
            for s in ("hoc_adi_splitting", "bp_adi", "bpmc_adi")
        ]
        cfgs += [
            E("vortex_hump", s, (vortex_n,), "fixed_nt", nt, "timeseries", snapshots=(0.0, 0.5, 1.5, 2.0), name=f"mass-vortex-{s}")
            for s in ("hoc_adi_splitting", "bpmc_adi")
        ]
        return cfgs
    raise ConfigError(f"unknown reproduce target {target!r}")


REPRODUCE_TARGETS = ("table1", "table2", "table4", "table5", "table6", "table7", "fp-entropy", "mass-figures")
