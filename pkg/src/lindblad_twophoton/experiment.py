"""
Scenario configs, figure presets, sweeps and CSV output.

A scenario is a flat ``key = value`` file (values are JSON literals; bare
words are read as strings) or a single JSON object. Lines starting with ``#``
are comments.
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .dynamics import coherence, evolve, excited_population, j_corr, qubit_marginal
from .errors import InvalidModelError
from .hilbert import DensityMatrix, HilbertSpace, default_n_cut, ho_displaced_thermal, tensor
from .model import (
    ModelParams,
    Verdict,
    build_effective_generator,
    build_full_generator,
    excitation_labels,
    nbar_double_frequency,
    validity,
)
from .steady import steady_state, steady_state_sparse

MODES = ("dynamics", "steady", "sweep", "validate")
MODELS = ("effective", "full", "both")
AXES = ("abs_alpha", "P", "nbar")
SCALES = ("linear", "log")
SMALL_DENSE = 1024


class ConfigError(ValueError):
    """Invalid scenario; ``line`` and ``key`` locate the problem when known."""

    def __init__(self, message, line=None, key=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"field '{key}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.key = key


@dataclass(frozen=True)
class GridSpec:
    axis: str
    start: float = 0.0
    stop: float = 1.0
    count: int = 2
    scale: str = "linear"
    values: tuple | None = None

    def points(self) -> np.ndarray:
        if self.values is not None:
            return np.array(self.values, dtype=float)
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class ScenarioConfig:
    mode: str = "dynamics"
    model: str = "effective"
    l: tuple = (1, 2)
    N: int = 1
    g: float = 0.01
    k: float = 1.0
    abs_alpha: float = 0.0
    alpha_phase: float = -math.pi / 2
    beta: tuple | None = None
    nbar: float = 0.0
    P: float = 0.0
    gamma_loc: float = 0.0
    n_cut: int | None = None
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    t_end: float | None = None
    samples: int = 201
    sweep: GridSpec | None = None
    sweep2: GridSpec | None = None
    full_every: int = 5
    compare_1ph_2w: bool = False
    output: str | None = None

    def as_dict(self) -> dict:
        """Flat key/value view; round-trips through :func:`config_from_mapping`."""
        out = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name in ("sweep", "sweep2"):
                if value is not None:
                    explicit = value.values is not None
                    for gf in dataclasses.fields(GridSpec):
                        gv = getattr(value, gf.name)
                        if explicit and gf.name in ("start", "stop", "count", "scale"):
                            continue
                        if gv is not None:
                            out[f"{f.name}_{gf.name}"] = list(gv) if gf.name == "values" else gv
                continue
            if self.beta is not None and f.name in ("abs_alpha", "alpha_phase"):
                continue
            if isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out

    def params(self, l: int, **overrides) -> ModelParams:
        """Model parameters for coupling order ``l`` with grid-axis overrides."""
        abs_alpha = overrides.pop("abs_alpha", None)
        kw = dict(nbar=self.nbar, P=self.P, gamma_loc=self.gamma_loc, k=self.k)
        kw.update(overrides)
        if abs_alpha is None and self.beta is not None:
            beta = complex(self.beta[0], self.beta[1])
            return ModelParams(l=l, N=self.N, g=self.g, beta=beta, **kw)
        mag = self.abs_alpha if abs_alpha is None else abs_alpha
        alpha = mag * complex(math.cos(self.alpha_phase), math.sin(self.alpha_phase))
        return ModelParams.from_alpha(l, self.N, self.g, alpha, **kw)


# --------------------------------------------------------------------------
# parsing

_SCALAR_KEYS = {
    "mode": str, "model": str, "N": int, "g": float, "k": float,
    "abs_alpha": float, "alpha_phase": float, "nbar": float, "P": float,
    "gamma_loc": float, "n_cut": int, "rel_tol": float, "abs_tol": float,
    "t_end": float, "samples": int, "full_every": int, "compare_1ph_2w": bool,
    "output": str,
}
_GRID_KEYS = {"axis": str, "start": float, "stop": float, "count": int, "scale": str, "values": list}


def _known_keys():
    keys = set(_SCALAR_KEYS) | {"l", "beta"}
    for prefix in ("sweep", "sweep2"):
        keys |= {f"{prefix}_{k}" for k in _GRID_KEYS}
    return keys


def _literal(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_config_text(text: str) -> ScenarioConfig:
    """Parse a flat ``key = value`` scenario or a JSON object."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
        if not isinstance(data, dict):
            raise ConfigError("JSON config must be an object")
        return config_from_mapping(data)
    data, lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key:
            raise ConfigError("missing key", line=lineno)
        if key in data:
            raise ConfigError("duplicate key", line=lineno, key=key)
        if not value:
            raise ConfigError("missing value", line=lineno, key=key)
        data[key] = _literal(value)
        lines[key] = lineno
    return config_from_mapping(data, lines)


def load_config(path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def _coerce(key, value, kind, line):
    if value is None and key in ("n_cut", "output", "t_end"):
        return None
    try:
        if kind is bool:
            if isinstance(value, bool):
                return value
            if isinstance(value, str) and value.lower() in ("true", "false"):
                return value.lower() == "true"
            raise TypeError
        if kind is int:
            if isinstance(value, bool) or float(value) != int(float(value)):
                raise TypeError
            return int(float(value))
        if kind is float:
            if isinstance(value, (bool, list, dict)):
                raise TypeError
            out = float(value)
            if not math.isfinite(out):
                raise ConfigError("value must be finite", line=line, key=key)
            return out
        if kind is str:
            if not isinstance(value, str):
                raise TypeError
            return value
        if kind is list:
            if not isinstance(value, list):
                raise TypeError
            return value
    except (TypeError, ValueError):
        raise ConfigError(f"cannot read {value!r} as {kind.__name__}", line=line, key=key) from None
    raise AssertionError(kind)


def _grid(prefix, data, lines):
    keys = {k: data[f"{prefix}_{k}"] for k in _GRID_KEYS if f"{prefix}_{k}" in data}
    if not keys:
        return None
    if "axis" not in keys:
        raise ConfigError("grid needs an axis", line=_first_line(prefix, lines), key=f"{prefix}_axis")
    kw = {}
    for k, v in keys.items():
        name = f"{prefix}_{k}"
        kw[k] = _coerce(name, v, _GRID_KEYS[k], lines.get(name))
    if kw["axis"] not in AXES:
        raise ConfigError(f"axis must be one of {AXES}", line=lines.get(f"{prefix}_axis"), key=f"{prefix}_axis")
    if "values" in kw:
        vals = []
        for v in kw["values"]:
            vals.append(_coerce(f"{prefix}_values", v, float, lines.get(f"{prefix}_values")))
        if len(vals) < 1:
            raise ConfigError("empty value list", line=lines.get(f"{prefix}_values"), key=f"{prefix}_values")
        kw["values"] = tuple(vals)
        kw["count"] = len(vals)
        return GridSpec(**kw)
    count = kw.get("count", 2)
    if count < 2:
        raise ConfigError(f"grid count must be >= 2, got {count}", line=lines.get(f"{prefix}_count"),
                          key=f"{prefix}_count")
    scale = kw.get("scale", "linear")
    if scale not in SCALES:
        raise ConfigError(f"scale must be one of {SCALES}", line=lines.get(f"{prefix}_scale"),
                          key=f"{prefix}_scale")
    if "start" not in kw or "stop" not in kw:
        raise ConfigError("grid needs start and stop (or values)", line=_first_line(prefix, lines),
                          key=f"{prefix}_start")
    if scale == "log" and (kw["start"] <= 0 or kw["stop"] <= 0):
        raise ConfigError("log grid bounds must be > 0", line=lines.get(f"{prefix}_start"),
                          key=f"{prefix}_start")
    return GridSpec(**kw)


def _first_line(prefix, lines):
    found = [v for k, v in lines.items() if k.startswith(prefix + "_")]
    return min(found) if found else None


def config_from_mapping(data: dict, lines: dict | None = None) -> ScenarioConfig:
    lines = lines or {}
    known = _known_keys()
    for key in data:
        if key not in known:
            raise ConfigError("unknown key", line=lines.get(key), key=key)
    kw = {}
    for key, kind in _SCALAR_KEYS.items():
        if key in data:
            kw[key] = _coerce(key, data[key], kind, lines.get(key))
    if "l" in data:
        raw = data["l"] if isinstance(data["l"], list) else [data["l"]]
        ls = tuple(_coerce("l", v, int, lines.get("l")) for v in raw)
        if not ls or any(v not in (1, 2) for v in ls) or len(set(ls)) != len(ls):
            raise ConfigError("l must be 1, 2 or a list of distinct values from {1, 2}",
                              line=lines.get("l"), key="l")
        kw["l"] = ls
    if "beta" in data and data["beta"] is not None:
        b = data["beta"]
        if not isinstance(b, list) or len(b) != 2:
            raise ConfigError("beta must be [re, im]", line=lines.get("beta"), key="beta")
        kw["beta"] = tuple(_coerce("beta", v, float, lines.get("beta")) for v in b)
        for key in ("abs_alpha", "alpha_phase"):
            if key in data:
                raise ConfigError("give either beta or abs_alpha/alpha_phase, not both",
                                  line=lines.get(key), key=key)
    kw["sweep"] = _grid("sweep", data, lines)
    kw["sweep2"] = _grid("sweep2", data, lines)
    cfg = ScenarioConfig(**kw)
    validate_config(cfg, lines)
    return cfg


def validate_config(cfg: ScenarioConfig, lines: dict | None = None) -> None:
    lines = lines or {}

    def fail(msg, key):
        raise ConfigError(msg, line=lines.get(key), key=key)

    if cfg.mode not in MODES:
        fail(f"mode must be one of {MODES}", "mode")
    if cfg.model not in MODELS:
        fail(f"model must be one of {MODELS}", "model")
    if cfg.N < 1:
        fail("N must be >= 1", "N")
    for key in ("g", "abs_alpha", "nbar", "P", "gamma_loc"):
        if getattr(cfg, key) < 0:
            fail("must be >= 0", key)
    if cfg.k <= 0:
        fail("must be > 0", "k")
    if cfg.rel_tol <= 0:
        fail("must be > 0", "rel_tol")
    if cfg.abs_tol <= 0:
        fail("must be > 0", "abs_tol")
    if cfg.n_cut is not None and cfg.n_cut < 2:
        fail("must be >= 2", "n_cut")
    if cfg.full_every < 1:
        fail("must be >= 1", "full_every")
    if cfg.mode == "dynamics":
        if cfg.t_end is None or not cfg.t_end > 0:
            fail("dynamics needs t_end > 0", "t_end")
        if cfg.samples < 2:
            fail("need at least 2 samples", "samples")
    if cfg.mode == "sweep" and cfg.sweep is None:
        fail("sweep mode needs a sweep grid", "sweep_axis")
    if cfg.sweep2 is not None and cfg.sweep is None:
        fail("sweep2 needs an inner sweep", "sweep2_axis")
    if cfg.sweep is not None and cfg.sweep2 is not None and cfg.sweep.axis == cfg.sweep2.axis:
        fail("sweep and sweep2 must use different axes", "sweep2_axis")
    for grid in (cfg.sweep, cfg.sweep2):
        if grid is not None and np.any(grid.points() < 0):
            fail("grid values must be >= 0", "sweep_start" if grid is cfg.sweep else "sweep2_start")
    try:
        for l in cfg.l:
            cfg.params(l)
    except InvalidModelError as exc:
        raise ConfigError(str(exc)) from None


# --------------------------------------------------------------------------
# presets

_CAPTION_BASE = """\
g = 0.01
k = 1.0
gamma_loc = 0.0
nbar = 0.0
P = 0.0
"""

PRESETS = {
    "fig1": _CAPTION_BASE + """\
mode = "dynamics"
model = "both"
l = [1, 2]
N = 1
beta = [1.25, 0.0]
t_end = 12500
samples = 251
n_cut = 40
""",
    "fig2": _CAPTION_BASE + """\
mode = "sweep"
model = "both"
l = [1, 2]
N = 1
sweep_axis = "abs_alpha"
sweep_start = 0.0
sweep_stop = 2.5
sweep_count = 51
full_every = 5
""",
    "fig3": """\
mode = "sweep"
model = "effective"
l = [1, 2]
N = 2
g = 0.01
k = 1.0
gamma_loc = 1e-4
abs_alpha = 0.0
sweep2_axis = "nbar"
sweep2_start = 0.0
sweep2_stop = 2.0
sweep2_count = 41
sweep_axis = "P"
sweep_start = 0.0
sweep_stop = 2e-3
sweep_count = 41
""",
    "fig4a": """\
mode = "sweep"
model = "both"
l = [1, 2]
N = 4
g = 0.01
k = 1.0
gamma_loc = 1e-4
abs_alpha = 0.0
nbar = 1.0
sweep_axis = "P"
sweep_start = 0.0
sweep_stop = 2e-3
sweep_count = 41
full_every = 5
compare_1ph_2w = true
""",
    "fig4b": """\
mode = "sweep"
model = "both"
l = [1, 2]
N = 4
g = 0.01
k = 1.0
gamma_loc = 1e-4
abs_alpha = 0.0
sweep2_axis = "P"
sweep2_values = [5e-4, 7.5e-4]
sweep_axis = "nbar"
sweep_start = 0.0
sweep_stop = 2.0
sweep_count = 41
full_every = 5
compare_1ph_2w = true
""",
}


def preset(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return parse_config_text(PRESETS[name])


def preset_json(name: str) -> str:
    return json.dumps(preset(name).as_dict(), sort_keys=True, indent=2)


# --------------------------------------------------------------------------
# results

@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def column(self, name) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows], dtype=float)


def emit_csv(table: Table, path=None) -> str:
    """Write ``table`` as CSV (to ``path`` if given) and return the text."""
    lines = [f"# lindblad-twophoton v{__version__}", ",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(f"{float(v):.14e}" for v in row))
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _observable_names(N: int):
    return ("rho_ee", "abs_rho_eg") if N == 1 else ("Jcorr",)


def _qubit_observables(N: int, rho: DensityMatrix) -> tuple:
    if N == 1:
        return excited_population(rho), abs(coherence(rho))
    return (j_corr(rho, N),)


def _full_n_cut(cfg: ScenarioConfig, p: ModelParams) -> int:
    return cfg.n_cut if cfg.n_cut is not None else default_n_cut(p.alpha, p.nbar)


def _steady_point(cfg: ScenarioConfig, p: ModelParams, full: bool) -> tuple:
    if not full:
        return _qubit_observables(p.N, steady_state(build_effective_generator(p)))
    gen = build_full_generator(p, _full_n_cut(cfg, p))
    # oscillator spaces make the dense SVD needlessly slow well below the cap
    if gen.dim ** 2 <= SMALL_DENSE:
        rho = steady_state(gen)
    else:
        # without drive the steady state lives in the equal-excitation sector
        labels = excitation_labels(gen.space, p.l) if p.beta == 0 else None
        rho = steady_state_sparse(gen, labels=labels)
    return _qubit_observables(p.N, qubit_marginal(rho))


def _point_task(job):
    cfg, l, overrides, full = job
    return _steady_point(cfg, cfg.params(l, **overrides), full)


def _pool_map(jobs, threads: int):
    if threads <= 1 or len(jobs) <= 1:
        return [_point_task(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_point_task, jobs, chunksize=max(1, len(jobs) // (4 * threads))))


def _worst_verdict(reports):
    order = [Verdict.OK, Verdict.MARGINAL, Verdict.VIOLATED]
    return max(reports, key=lambda r: (order.index(r.verdict), r.bound_1ph, r.bound_2ph, r.pump_ratio))


def _report(cfg: ScenarioConfig, points, log):
    for l in cfg.l:
        reports = [validity(cfg.params(l, **ov)) for ov in points]
        worst = _worst_verdict(reports)
        label = f"{l}ph" + (f", worst of {len(reports)} points" if len(reports) > 1 else "")
        log(worst.summary(label))
        if worst.verdict is Verdict.VIOLATED:
            log(f"[{l}ph] warning: bad-cavity elimination is not justified here")


def _max_deviation(table: Table, log):
    worst = 0.0
    for name in table.columns:
        if "_full_" not in name:
            continue
        base = name.replace("_full_", "_eff_") if name.replace("_full_", "_eff_") in table.columns \
            else name.replace("_full_", "_")
        full = table.column(name)
        eff = table.column(base)
        mask = np.isfinite(full)
        if mask.any():
            dev = float(np.max(np.abs(full[mask] - eff[mask])))
            log(f"max |full - effective| for {base}: {dev:.3e}")
            worst = max(worst, dev)
    table.notes.append(("max_deviation", worst))
    return worst


def _initial_qubits(N):
    return DensityMatrix.basis(HilbertSpace.qubits(N), 0)


def run_dynamics(cfg: ScenarioConfig, log=None) -> Table:
    """Effective and/or full trajectories from all qubits in |g>."""
    log = log or (lambda msg: None)
    times = np.linspace(0.0, cfg.t_end, cfg.samples)
    obs_name = "rho_ee" if cfg.N == 1 else "Jcorr"
    columns, data = ["t"], [times]

    def observe_eff(state):
        return excited_population(state) if cfg.N == 1 else j_corr(state, cfg.N)

    def observe_full(state):
        return observe_eff(qubit_marginal(state))

    if cfg.model in ("effective", "both"):
        for l in cfg.l:
            p = cfg.params(l)
            traj = evolve(build_effective_generator(p), _initial_qubits(cfg.N), cfg.t_end, times,
                          rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol, observables={"x": observe_eff})
            columns.append(f"{obs_name}_eff_{l}ph")
            data.append(traj["x"])
    if cfg.model in ("full", "both"):
        for l in cfg.l:
            p = cfg.params(l)
            n_cut = _full_n_cut(cfg, p)
            rho0 = tensor(ho_displaced_thermal(p.alpha, p.nbar, n_cut), _initial_qubits(cfg.N),
                          oscillator=True)
            traj = evolve(build_full_generator(p, n_cut), rho0, cfg.t_end, times,
                          rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol, observables={"x": observe_full},
                          check_positivity=False)
            log(f"[{l}ph] full model: n_cut={n_cut}, {traj.n_steps} steps")
            columns.append(f"{obs_name}_full_{l}ph")
            data.append(traj["x"])
    table = Table(columns, [list(r) for r in zip(*data)])
    if cfg.model == "both":
        _max_deviation(table, log)
    return table


def _grid_points(cfg: ScenarioConfig):
    """Ordered (overrides, outer_index, inner_index) over the sweep grid(s)."""
    if cfg.sweep is None:
        return [({}, 0, 0)]
    inner = cfg.sweep.points()
    outer = cfg.sweep2.points() if cfg.sweep2 is not None else [None]
    out = []
    for i, ov in enumerate(outer):
        for j, iv in enumerate(inner):
            point = {cfg.sweep.axis: float(iv)}
            if ov is not None:
                point[cfg.sweep2.axis] = float(ov)
            out.append((point, i, j))
    return out


def _on_full_grid(cfg, i, j):
    return i % cfg.full_every == 0 and j % cfg.full_every == 0


def _with_2w(cfg: ScenarioConfig, ov: dict) -> dict:
    # one-photon model with oscillator and qubits at 2*omega: same T, fewer quanta
    nbar = ov.get("nbar", cfg.nbar)
    out = dict(ov)
    out["nbar"] = nbar_double_frequency(nbar)
    return out


def run_grid(cfg: ScenarioConfig, threads: int = 1, log=None) -> Table:
    """Steady-state observables over the sweep grid (a single point in steady mode)."""
    log = log or (lambda msg: None)
    points = _grid_points(cfg)
    names = _observable_names(cfg.N)
    axes = []
    if cfg.sweep2 is not None:
        axes.append(cfg.sweep2.axis)
    if cfg.sweep is not None:
        axes.append(cfg.sweep.axis)

    # each entry: (column names, jobs, positions in the point list)
    blocks = []
    if cfg.model in ("effective", "both"):
        for l in cfg.l:
            jobs = [(cfg, l, ov, False) for ov, _, _ in points]
            blocks.append(([f"{n}_{l}ph" for n in names], jobs, list(range(len(points)))))
    if cfg.compare_1ph_2w:
        jobs = [(cfg, 1, _with_2w(cfg, ov), False) for ov, _, _ in points]
        blocks.append(([f"{n}_1ph_2w" for n in names], jobs, list(range(len(points)))))
    if cfg.model in ("full", "both"):
        keep = [q for q, (_, i, j) in enumerate(points) if _on_full_grid(cfg, i, j)]
        for l in cfg.l:
            jobs = [(cfg, l, points[q][0], True) for q in keep]
            blocks.append(([f"{n}_full_{l}ph" for n in names], jobs, keep))

    all_jobs = [job for _, jobs, _ in blocks for job in jobs]
    results = _pool_map(all_jobs, threads)

    columns = list(axes)
    values = np.full((len(points), sum(len(c) for c, _, _ in blocks)), np.nan)
    col = 0
    cursor = 0
    for cols, jobs, where in blocks:
        columns += cols
        for q, res in zip(where, results[cursor:cursor + len(jobs)]):
            values[q, col:col + len(cols)] = res
        cursor += len(jobs)
        col += len(cols)
    rows = []
    for q, (ov, _, _) in enumerate(points):
        rows.append([ov[a] for a in axes] + list(values[q]))
    table = Table(columns, rows)
    if cfg.model == "both":
        _max_deviation(table, log)
    return table


def run_validate(cfg: ScenarioConfig) -> Table:
    """Validity numbers per coupling order and grid point; verdict coded 0/1/2."""
    code = {Verdict.OK: 0, Verdict.MARGINAL: 1, Verdict.VIOLATED: 2}
    axes = [g.axis for g in (cfg.sweep2, cfg.sweep) if g is not None]
    columns = ["l"] + axes + ["g_over_k", "n_tilde", "bound_1ph", "bound_2ph", "P_over_k", "verdict"]
    rows = []
    for l in cfg.l:
        for ov, _, _ in _grid_points(cfg):
            r = validity(cfg.params(l, **ov))
            rows.append([l] + [ov[a] for a in axes]
                        + [r.epsilon, r.n_tilde, r.bound_1ph, r.bound_2ph, r.pump_ratio, code[r.verdict]])
    return Table(columns, rows)


def run(cfg: ScenarioConfig, threads: int = 1, log=None) -> Table:
    """Execute a scenario; the validity report always goes to ``log`` (stderr by default)."""
    if log is None:
        def log(msg):
            print(msg, file=sys.stderr)
    _report(cfg, [ov for ov, _, _ in _grid_points(cfg)], log)
    if cfg.mode == "dynamics":
        return run_dynamics(cfg, log)
    if cfg.mode == "validate":
        return run_validate(cfg)
    return run_grid(cfg, threads, log)


__all__ = [
    "ConfigError", "GridSpec", "ScenarioConfig", "Table", "PRESETS",
    "parse_config_text", "load_config", "config_from_mapping", "validate_config",
    "preset", "preset_json", "emit_csv", "run", "run_dynamics", "run_grid", "run_validate",
]
