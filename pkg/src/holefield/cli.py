"""Command-line interface: single-point evaluation, parameter sweeps, Monte
Carlo runs, and canned figure-reproduction presets, emitted as CSV or JSON.

Exit codes: 0 ok, 2 configuration error, 3 partial numerical failure (one or
more grid points produced NaN; their rows carry a note).
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import click

from . import bounds as bd
from . import montecarlo as mc
from .model import (
    ConfigError,
    NetworkParams,
    PRESET_NAMES,
    coverage_argument,
    db_to_linear,
    preset,
)
from .quadrature import QuadSpec

SWEEP_VARIABLES = ("gamma_db", "lambda1", "D", "lambda2_over_lambda1")

# Estimator names accepted in sweep specs: the analytical tags, the k-closest
# aliases LBK2..LBK8, MC (simulation), and the direct bound ratio.
_K_ALIASES = {f"LBK{k}": k for k in range(2, 9)}
SPECIAL_ESTIMATORS = ("MC", "UB_OVER_LB1")


def estimator_names() -> tuple[str, ...]:
    return tuple(e.value for e in bd.Estimator if e != bd.Estimator.COND_SINGLE_HOLE) + tuple(
        _K_ALIASES
    ) + SPECIAL_ESTIMATORS


CSV_HEADER = "scenario,sweep_var,sweep_value,estimator,value,err,runtime_ms,seed"


@dataclass(frozen=True)
class Row:
    scenario: str
    sweep_var: str
    sweep_value: float
    estimator: str
    value: float
    err: float
    runtime_ms: float
    seed: int
    note: str = ""


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[Row, ...]

    @property
    def failed(self) -> bool:
        return any(math.isnan(r.value) for r in self.rows)


@dataclass(frozen=True)
class RunSpec:
    scenario: str  # preset name, or "custom"
    params: NetworkParams
    sweep_var: str
    grid: tuple[float, ...]
    estimators: tuple[str, ...]
    sim: mc.SimConfig = mc.SimConfig()
    quad: QuadSpec = QuadSpec()
    out_path: str | None = None
    out_format: str = "csv"
    timestamp: bool = True

    def __post_init__(self) -> None:
        if self.sweep_var not in SWEEP_VARIABLES:
            raise ConfigError(
                f"unknown sweep variable {self.sweep_var!r}; expected one of {SWEEP_VARIABLES}"
            )
        if not self.grid:
            raise ConfigError("sweep grid must be non-empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ConfigError("sweep grid must be strictly increasing")
        if not self.estimators:
            raise ConfigError("estimator list must be non-empty")
        known = estimator_names()
        for e in self.estimators:
            if e not in known:
                raise ConfigError(f"unknown estimator {e!r}; expected one of {known}")
        if self.out_format not in ("csv", "json"):
            raise ConfigError("output format must be csv or json")


def runspec_from_dict(doc: dict, **overrides) -> RunSpec:
    """Build a RunSpec from a JSON document; CLI flag overrides win."""
    doc = dict(doc)
    doc.update({k: v for k, v in overrides.items() if v is not None})
    scenario = doc.get("scenario", "LD-SH")
    if isinstance(scenario, dict):
        name, params = "custom", NetworkParams.from_dict(scenario)
    else:
        name = str(scenario)
        params = preset(name).params
    for key, value in doc.get("params", {}).items():
        params = params.with_(**{key: value})
    sweep = doc.get("sweep", {})
    sim_doc = doc.get("sim", {})
    if "seed" in doc:
        sim_doc = {**sim_doc, "seed": doc["seed"]}
    if "iterations" in doc:
        sim_doc = {**sim_doc, "iterations": doc["iterations"]}
    out = doc.get("output", {})
    try:
        return RunSpec(
            scenario=name,
            params=params,
            sweep_var=sweep.get("variable", "gamma_db"),
            grid=tuple(float(x) for x in sweep.get("grid", ())),
            estimators=tuple(doc.get("estimators", ("LB1_CLOSEST", "UB_INDEP_HOLES"))),
            sim=mc.SimConfig(**sim_doc),
            quad=QuadSpec(**doc.get("quad", {})),
            out_path=doc.get("out", out.get("path")),
            out_format=doc.get("format", out.get("format", "csv")),
            timestamp=not doc.get("no_timestamp", False),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _params_at(spec: RunSpec, x: float) -> NetworkParams:
    p = spec.params
    if spec.sweep_var == "gamma_db":
        return p.with_(gamma=db_to_linear(x))
    if spec.sweep_var == "lambda1":
        return p.with_(lambda1=x)
    if spec.sweep_var == "D":
        return p.with_(D=x)
    return p.with_(lambda2=x * p.lambda1)


def _eval_analytic(name: str, params: NetworkParams, spec: RunSpec, seed: int):
    if name in _K_ALIASES:
        est = bd.laplace_lbk(
            coverage_argument(params).s, params, _K_ALIASES[name], spec.quad, seed=seed
        )
        return est.value, est.numeric_error
    if name == "UB_OVER_LB1":
        s = coverage_argument(params).s
        ub = bd.laplace_ub(s, params, spec.quad)
        lb = bd.laplace_lb1(s, params, spec.quad)
        return ub.value / lb.value, 0.0
    est = bd.evaluate(name, coverage_argument(params).s, params, spec.quad, **(
        {"seed": seed} if name in ("LB2_TWO_HOLE_EXACT", "LBK_K_CLOSEST") else {}
    ))
    return est.value, est.numeric_error


def run(spec: RunSpec) -> SweepResult:
    """Evaluate every requested estimator at every grid point.

    Deterministic given the seed; rows ordered by (sweep_value, estimator).
    """
    rows: list[Row] = []
    seed = spec.sim.seed
    analytic = [e for e in spec.estimators if e != "MC"]
    want_mc = "MC" in spec.estimators

    # For a gamma sweep, one simulation pass serves every grid point.
    mc_shared = None
    if want_mc and spec.sweep_var == "gamma_db":
        cfg = dataclasses.replace(
            spec.sim, gamma_values=tuple(db_to_linear(x) for x in spec.grid)
        )
        mc_shared = mc.simulate(spec.params, cfg)

    for x in spec.grid:
        params = _params_at(spec, x)
        for name in analytic:
            t0 = time.perf_counter()
            try:
                value, err = _eval_analytic(name, params, spec, seed)
                note = ""
            except Exception as exc:  # pragma: no cover - defensive
                value, err, note = math.nan, math.nan, f"{type(exc).__name__}: {exc}"
            rows.append(
                Row(
                    spec.scenario,
                    spec.sweep_var,
                    _q(x),
                    name,
                    _q(value),
                    _q(err),
                    _q((time.perf_counter() - t0) * 1e3),
                    seed,
                    note,
                )
            )
        if want_mc:
            t0 = time.perf_counter()
            if mc_shared is not None:
                est = mc_shared.coverage[db_to_linear(x)]
            else:
                est = mc.empirical_coverage(params, spec.sim)
            rows.append(
                Row(
                    spec.scenario,
                    spec.sweep_var,
                    _q(x),
                    "MC",
                    _q(est.mean),
                    _q(est.std_error),
                    _q((time.perf_counter() - t0) * 1e3),
                    seed,
                )
            )
    rows.sort(key=lambda r: (r.sweep_value, r.estimator))
    return SweepResult(rows=tuple(rows))


# --- figure-reproduction presets -------------------------------------------

_GAMMA_GRID = tuple(float(x) for x in range(-10, 21, 2))
_FIG_ESTIMATORS = (
    "PPP_LOWER",
    "FOSA",
    "LB1_CLOSEST",
    "LBK2",
    "UB_INDEP_HOLES",
    "OVERLAP_MEAN_APPROX",
    "MC",
)


def figure_spec(figure_id: str, **overrides) -> RunSpec:
    """Canned RunSpec matching one of the published figures (fig5..fig15).

    Grid step sizes are implementation choices tuned to match the plots
    visually; the fixed parameters come from the figure captions.
    """
    fid = figure_id.lower()
    fig_presets = {"fig8": "LD-SH", "fig9": "HD-SH", "fig10": "LD-LH", "fig11": "HD-LH"}
    ratio_presets = {"fig12": "LD-SH", "fig13": "HD-SH", "fig14": "LD-LH", "fig15": "HD-LH"}
    if fid == "fig5":
        doc = {
            "scenario": "HD-LH",
            "sweep": {"variable": "gamma_db", "grid": _GAMMA_GRID},
            "estimators": ("RATIO_APPROX", "UB_OVER_LB1"),
        }
    elif fid == "fig6":
        doc = {
            "scenario": "LD-SH",
            "params": {"D": 1.0},
            "sweep": {"variable": "lambda1", "grid": [round(0.05 * i, 2) for i in range(11)]},
            "estimators": tuple(e for e in _FIG_ESTIMATORS if e != "LBK2"),
        }
    elif fid == "fig7":
        doc = {
            "scenario": "LD-SH",
            "params": {"lambda1": 0.1},
            "sweep": {"variable": "D", "grid": [round(0.1 * i, 2) for i in range(1, 21)]},
            "estimators": tuple(e for e in _FIG_ESTIMATORS if e != "LBK2"),
        }
    elif fid in fig_presets:
        doc = {
            "scenario": fig_presets[fid],
            "sweep": {"variable": "gamma_db", "grid": _GAMMA_GRID},
            "estimators": _FIG_ESTIMATORS,
        }
    elif fid in ratio_presets:
        doc = {
            "scenario": ratio_presets[fid],
            "sweep": {"variable": "lambda2_over_lambda1", "grid": [float(x) for x in range(2, 21, 2)]},
            "estimators": _FIG_ESTIMATORS,
        }
    else:
        raise ConfigError(f"unknown figure id {figure_id!r}; expected fig5..fig15")
    return runspec_from_dict(doc, **overrides)


def reproduce(figure_id: str, **overrides) -> SweepResult:
    return run(figure_spec(figure_id, **overrides))


# --- serialization ----------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _q(x: float) -> float:
    """Quantize to the 12-significant-digit CSV precision so that
    parse(emit(result)) == result holds exactly."""
    return float(_fmt(x))


def emit_csv(result: SweepResult, timestamp: bool = True) -> str:
    lines = []
    if timestamp:
        lines.append(f"# holefield {time.strftime('%Y-%m-%dT%H:%M:%S')}")
    lines.append(CSV_HEADER)
    for r in result.rows:
        runtime = _fmt(r.runtime_ms) if timestamp else "0"
        lines.append(
            f"{r.scenario},{r.sweep_var},{_fmt(r.sweep_value)},{r.estimator},"
            f"{_fmt(r.value)},{_fmt(r.err)},{runtime},{r.seed}"
        )
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> SweepResult:
    rows = []
    for line in text.splitlines():
        if not line or line.startswith("#") or line == CSV_HEADER:
            continue
        parts = line.split(",")
        rows.append(
            Row(
                scenario=parts[0],
                sweep_var=parts[1],
                sweep_value=float(parts[2]),
                estimator=parts[3],
                value=float(parts[4]),
                err=float(parts[5]),
                runtime_ms=float(parts[6]),
                seed=int(parts[7]),
            )
        )
    return SweepResult(rows=tuple(rows))


def gnuplot_columns(result: SweepResult) -> str:
    """Pivot rows into whitespace-separated columns (sweep_value, then one
    column per estimator) ready for `plot ... using 1:n`."""
    names = sorted({r.estimator for r in result.rows})
    by_x: dict[float, dict[str, float]] = {}
    for r in result.rows:
        by_x.setdefault(r.sweep_value, {})[r.estimator] = r.value
    lines = ["# sweep_value " + " ".join(names)]
    for x in sorted(by_x):
        cells = [_fmt(x)] + [_fmt(by_x[x].get(n, math.nan)) for n in names]
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def emit_json(result: SweepResult, timestamp: bool = True) -> str:
    doc = {
        "rows": [
            {**dataclasses.asdict(r), "runtime_ms": r.runtime_ms if timestamp else 0.0}
            for r in result.rows
        ]
    }
    if timestamp:
        doc["generated"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write_output(result: SweepResult, path: str | None, fmt: str, timestamp: bool) -> None:
    text = emit_csv(result, timestamp) if fmt == "csv" else emit_json(result, timestamp)
    if path:
        Path(path).write_text(text)
    else:
        click.echo(text, nl=False)


# --- click wiring -----------------------------------------------------------


def _load_params(preset_name, lambda1, lambda2, d, alpha, p, r0, gamma_db):
    if preset_name:
        params = preset(preset_name).params
    else:
        params = NetworkParams(
            lambda1=0.1, lambda2=1.0, D=1.0, alpha=4.0, P=1.0, r0=0.1, gamma=10.0
        )
    over = {}
    if lambda1 is not None:
        over["lambda1"] = lambda1
    if lambda2 is not None:
        over["lambda2"] = lambda2
    if d is not None:
        over["D"] = d
    if alpha is not None:
        over["alpha"] = alpha
    if p is not None:
        over["P"] = p
    if r0 is not None:
        over["r0"] = r0
    if gamma_db is not None:
        over["gamma"] = db_to_linear(gamma_db)
    return params.with_(**over) if over else params


_param_options = [
    click.option("--preset", "preset_name", type=click.Choice(PRESET_NAMES), default=None),
    click.option("--lambda1", type=float, default=None),
    click.option("--lambda2", type=float, default=None),
    click.option("--hole-radius", "-D", "d", type=float, default=None),
    click.option("--alpha", type=float, default=None),
    click.option("--power", "p", type=float, default=None),
    click.option("--r0", type=float, default=None),
    click.option("--gamma-db", type=float, default=None),
]


def _with_params(cmd):
    for opt in reversed(_param_options):
        cmd = opt(cmd)
    return cmd


@click.group()
def main() -> None:
    """Interference bounds and simulation for Poisson hole process networks."""


@main.command("bounds")
@_with_params
@click.option("--s", "s_value", type=float, default=None, help="Laplace argument; defaults to gamma*r0^alpha/P.")
@click.option("--seed", type=int, default=0)
@click.option("--with-lb2", is_flag=True, help="Also evaluate the sampled two-hole bound.")
def bounds_cmd(s_value, seed, with_lb2, **pkw) -> None:
    """Evaluate all analytical estimators at a single point."""
    try:
        params = _load_params(**pkw)
    except ConfigError as exc:
        raise click.exceptions.UsageError(str(exc))
    s = s_value if s_value is not None else coverage_argument(params).s
    click.echo(f"params: {params}")
    click.echo(f"s = {_fmt(s)}")
    ests = [
        bd.laplace_ppp(s, params.lambda2, params.P, params.alpha),
        bd.laplace_fosa(s, params),
        bd.laplace_lb1(s, params),
        bd.laplace_lbk(s, params, 2),
        bd.laplace_lbk(s, params, 3),
        bd.laplace_ub(s, params),
        bd.laplace_overlap_approx(s, params),
        bd.ratio_approx(s, params),
    ]
    if with_lb2:
        ests.append(bd.laplace_lb2_two_hole(s, params, seed=seed))
    for est in ests:
        name = est.estimator.value
        if est.meta.get("k"):
            name = f"{name}(k={est.meta['k']})"
        click.echo(f"{name:28s} {_fmt(est.value):>18s}  (err {_fmt(est.numeric_error)})")


@main.command("sweep")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--seed", type=int, default=None)
@click.option("--iterations", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)
@click.option("--no-timestamp", is_flag=True, help="Suppress the timestamp header and runtime column (for byte-stable regression output).")
def sweep_cmd(config_path, seed, iterations, out, fmt, no_timestamp) -> None:
    """Run a sweep described by a JSON RunSpec file."""
    try:
        doc = json.loads(Path(config_path).read_text())
        spec = runspec_from_dict(
            doc, seed=seed, iterations=iterations, out=out, format=fmt,
            no_timestamp=no_timestamp or None,
        )
    except (json.JSONDecodeError, ConfigError, ValueError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    result = run(spec)
    _write_output(result, spec.out_path, spec.out_format, spec.timestamp)
    if result.failed:
        sys.exit(3)


@main.command("simulate")
@_with_params
@click.option("--iterations", type=int, default=50_000)
@click.option("--seed", type=int, default=0)
@click.option("--window-radius", type=float, default=40.0)
@click.option("--s", "s_values", type=float, multiple=True, help="Laplace arguments to estimate (repeatable).")
def simulate_cmd(iterations, seed, window_radius, s_values, **pkw) -> None:
    """Monte Carlo estimate of coverage (and optionally the transform)."""
    try:
        params = _load_params(**pkw)
    except ConfigError as exc:
        raise click.exceptions.UsageError(str(exc))
    cfg = mc.SimConfig(
        window_radius=window_radius,
        iterations=iterations,
        seed=seed,
        s_values=tuple(s_values),
        gamma_values=(params.gamma,),
    )
    res = mc.simulate(params, cfg)
    cov = res.coverage[params.gamma]
    click.echo(f"coverage  {_fmt(cov.mean)}  +/- {_fmt(cov.std_error)}  (n={cov.n})")
    for s in s_values:
        est = res.laplace[s]
        click.echo(
            f"laplace(s={_fmt(s)})  {_fmt(est.mean)}  +/- {_fmt(est.std_error)}"
            f"  truncation_bias<={_fmt(res.truncation_bias[s])}"
        )


@main.command("ratio")
@_with_params
def ratio_cmd(**pkw) -> None:
    """Tightness check: ratio approximation vs the direct UB/LB1 ratio."""
    try:
        params = _load_params(**pkw)
    except ConfigError as exc:
        raise click.exceptions.UsageError(str(exc))
    s = coverage_argument(params).s
    approx = bd.ratio_approx(s, params)
    ub = bd.laplace_ub(s, params)
    lb = bd.laplace_lb1(s, params)
    click.echo(f"ratio_approx  {_fmt(approx.value)}")
    click.echo(f"ub/lb1        {_fmt(ub.value / lb.value)}")


@main.command("reproduce")
@click.argument("figure_id")
@click.option("--seed", type=int, default=None)
@click.option("--iterations", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)
@click.option("--no-timestamp", is_flag=True)
def reproduce_cmd(figure_id, seed, iterations, out, fmt, no_timestamp) -> None:
    """Emit the data behind one of the published figures (fig5..fig15)."""
    try:
        spec = figure_spec(
            figure_id, seed=seed, iterations=iterations, out=out, format=fmt,
            no_timestamp=no_timestamp or None,
        )
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    result = run(spec)
    _write_output(result, spec.out_path, spec.out_format, spec.timestamp)
    if result.failed:
        sys.exit(3)


if __name__ == "__main__":
    main()
