"""Time series, field scans and level diagrams as tables of rows.

A row is a tuple of floats whose first entry is the independent variable
(``t``, ``bz`` or ``p``). :func:`write_csv` turns a table into a CSV file
with a fixed, reproducible format.
"""

from dataclasses import dataclass, field, replace
import json
import math
import os

import numpy as np

from .dynamics import Propagator, evolve_many, evolve_matrix, steady_state_matrix
from .errors import ConfigInvalid
from .linalg import hermitian_eig
from .model import ModelParams, analytic_energies, build_hamiltonian, resonance_fields
from .quantifiers import l1_coherence, linear_entropy, negativity
from .states import isotropic_matrix, werner_linear_entropy, werner_negativity
from .tolerances import TOL

QUANTITIES = ("negativity", "coherence", "linear_entropy")
OUTPUTS = QUANTITIES + ("energies",)


@dataclass
class SweepConfig:
    J: float = 0.8
    K: float = -0.4
    p: float = 0.7
    gamma: list = field(default_factory=lambda: [0.03])
    bz: list = field(default_factory=lambda: [0.0])
    t_start: float = 0.0
    t_end: float = 20.0
    n_points: int = 401
    outputs: tuple = QUANTITIES
    seed: int = 42
    deg_tol: float | None = None
    rescale_negativity: bool = False
    by_evolution: float | None = None

    def __post_init__(self):
        self.gamma = _as_list(self.gamma)
        self.bz = _as_list(self.bz)
        self.outputs = tuple(self.outputs)

    def validate(self) -> "SweepConfig":
        problems = []
        for name in ("J", "K", "p", "t_start", "t_end"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                problems.append(f"{name} must be a finite number, got {v!r}")
        if problems:
            raise ConfigInvalid("; ".join(problems))
        if not 0.0 <= self.p <= 1.0:
            problems.append(f"p must lie in [0, 1], got {self.p}")
        if not self.gamma:
            problems.append("gamma list is empty")
        if not self.bz:
            problems.append("bz list is empty")
        if any(not math.isfinite(g) or g < 0 for g in self.gamma):
            problems.append(f"gamma values must be finite and >= 0, got {self.gamma}")
        if any(not math.isfinite(b) for b in self.bz):
            problems.append("bz values must be finite")
        if self.t_start < 0 or not self.t_end > self.t_start:
            problems.append(f"need t_end > t_start >= 0, got t_start={self.t_start}, t_end={self.t_end}")
        if not isinstance(self.n_points, int) or self.n_points < 2:
            problems.append(f"n_points must be an integer >= 2, got {self.n_points!r}")
        bad = [o for o in self.outputs if o not in OUTPUTS]
        if bad or not self.outputs:
            problems.append(f"outputs must be a non-empty subset of {OUTPUTS}, got {list(self.outputs)}")
        if self.deg_tol is not None and not self.deg_tol > 0:
            problems.append(f"deg_tol must be positive, got {self.deg_tol}")
        if self.by_evolution is not None and not self.by_evolution >= 0:
            problems.append(f"by_evolution must be >= 0, got {self.by_evolution}")
        if problems:
            raise ConfigInvalid("; ".join(problems))
        return self

    def model(self, bz: float = 0.0) -> ModelParams:
        return ModelParams(self.J, self.K, bz)

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_points)

    def quantities(self) -> tuple:
        return tuple(q for q in QUANTITIES if q in self.outputs)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        data = flatten_config(data)
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(str(exc)) from exc

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        return cls.from_dict(load_config(path))

    def updated(self, **overrides) -> "SweepConfig":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def flatten_config(data: dict) -> dict:
    """Normalize a config mapping to flat SweepConfig field names.

    Accepts the nested ``t_grid`` and ``params`` groups and value specs
    understood by :func:`parse_values` for ``bz`` and ``gamma``.
    """
    data = dict(data)
    grid_spec = data.pop("t_grid", None)
    if grid_spec is not None:
        for key in ("t_start", "t_end", "n_points"):
            if key in grid_spec:
                data.setdefault(key, grid_spec[key])
    params = data.pop("params", None)
    if params is not None:
        for key in ("J", "K"):
            if key in params:
                data.setdefault(key, params[key])
        if "Bz" in params:
            data.setdefault("bz", params["Bz"])
    for key in ("bz", "gamma"):
        if key in data:
            data[key] = parse_values(data[key])
    unknown = set(data) - set(SweepConfig.__dataclass_fields__)
    if unknown:
        raise ConfigInvalid(f"unknown config fields: {sorted(unknown)}")
    return data


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigInvalid("config file must hold a JSON object")
    return data


def _as_list(x) -> list:
    if isinstance(x, (int, float)):
        return [float(x)]
    return [float(v) for v in x]


def grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive uniform grid; points are rounded to 12 decimals so 1.8 is hit exactly."""
    if not step > 0 or stop < start:
        raise ConfigInvalid(f"bad range {start}:{stop}:{step}")
    n = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 12) + 0.0 for i in range(n + 1)]


def parse_values(spec) -> list[float]:
    """Accept a number, a list, ``"a,b,c"``, ``"start:stop:step"`` or a range dict."""
    if isinstance(spec, (int, float)):
        return [float(spec)]
    if isinstance(spec, dict):
        try:
            return grid(float(spec["start"]), float(spec["stop"]), float(spec["step"]))
        except KeyError as exc:
            raise ConfigInvalid(f"range needs start/stop/step, missing {exc}") from exc
    if isinstance(spec, str):
        try:
            if ":" in spec:
                parts = [float(x) for x in spec.split(":")]
                if len(parts) != 3:
                    raise ValueError(spec)
                return grid(*parts)
            return [float(x) for x in spec.split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigInvalid(f"cannot parse values from {spec!r}") from exc
    try:
        return [float(v) for v in spec]
    except (TypeError, ValueError) as exc:
        raise ConfigInvalid(f"cannot parse values from {spec!r}") from exc


# --- rows ----------------------------------------------------------------------

@dataclass
class Table:
    columns: list[str]
    rows: list[tuple]
    name: str = ""
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])


def _measure(m: np.ndarray, which: tuple, rescale: bool) -> list[float]:
    out = []
    for q in which:
        if q == "negativity":
            out.append(negativity(m, 3, 3, rescale=rescale))
        elif q == "coherence":
            out.append(l1_coherence(m))
        elif q == "linear_entropy":
            out.append(linear_entropy(m))
    return out


def _check_row(row: tuple, columns: list[str], rescale: bool) -> tuple:
    for name, v in zip(columns, row):
        if not math.isfinite(v):
            raise ArithmeticError(f"non-finite value in column {name!r}: {v}")
    vals = dict(zip(columns, row))
    n_max = 4.0 if rescale else 2.0
    if "negativity" in vals and not -1e-12 <= vals["negativity"] <= n_max + 1e-12:
        raise ArithmeticError(f"negativity out of range: {vals['negativity']}")
    if "linear_entropy" in vals and not -1e-12 <= vals["linear_entropy"] <= 1 + 1e-12:
        raise ArithmeticError(f"linear entropy out of range: {vals['linear_entropy']}")
    if "coherence" in vals and vals["coherence"] < -1e-12:
        raise ArithmeticError(f"negative coherence: {vals['coherence']}")
    return row


def time_series(cfg: SweepConfig) -> list[Table]:
    """One table ``(t, quantities...)`` per (gamma, bz) combination, gamma-major."""
    cfg.validate()
    which = cfg.quantities()
    if not which:
        raise ConfigInvalid("time_series needs at least one of " + ", ".join(QUANTITIES))
    columns = ["t", *which]
    times = cfg.times()
    rho0 = isotropic_matrix(cfg.p)
    tables = []
    for gamma in cfg.gamma:
        for bz in cfg.bz:
            prop = Propagator.from_hamiltonian(build_hamiltonian(cfg.model(bz)), gamma)
            states = evolve_many(rho0, prop, times)
            rows = [_check_row((float(t), *_measure(s.matrix, which, cfg.rescale_negativity)),
                               columns, cfg.rescale_negativity)
                    for t, s in zip(times, states)]
            tables.append(Table(columns, rows, series_name(gamma, bz), {"gamma": gamma, "bz": bz}))
    return tables


def series_name(gamma: float, bz: float) -> str:
    return f"g{gamma:g}_b{bz:g}"


def steady_quantities(cfg: SweepConfig, bz: float, gamma: float | None = None) -> tuple:
    """(negativity, coherence, linear_entropy) of the t -> infinity state at ``bz``."""
    gamma = cfg.gamma[0] if gamma is None else gamma
    prop = Propagator.from_hamiltonian(build_hamiltonian(cfg.model(bz)), gamma)
    rho0 = isotropic_matrix(cfg.p)
    if cfg.by_evolution is not None:
        m = evolve_matrix(rho0, prop, cfg.by_evolution)
    else:
        m = steady_state_matrix(rho0, prop, cfg.deg_tol)
    return tuple(_measure(m, QUANTITIES, cfg.rescale_negativity))


def field_scan(cfg: SweepConfig) -> Table:
    """Steady-state ``(bz, negativity, coherence, linear_entropy)`` over ``cfg.bz``."""
    cfg.validate()
    if cfg.by_evolution is None and cfg.gamma[0] == 0:
        raise ConfigInvalid("field_scan needs gamma > 0 (gamma = 0 has no steady state)")
    columns = ["bz", *QUANTITIES]
    rows = [_check_row((bz, *steady_quantities(cfg, bz)), columns, cfg.rescale_negativity)
            for bz in cfg.bz]
    return Table(columns, rows, f"J{cfg.J:g}_K{cfg.K:g}",
                 {"J": cfg.J, "K": cfg.K, "p": cfg.p, "gamma": cfg.gamma[0]})


def spectrum_scan(cfg: SweepConfig) -> Table:
    """``(bz, E1..E9, crossing)`` with crossing = 1 within deg_tol of a level crossing."""
    cfg.validate()
    res = resonance_fields(cfg.model())
    tol = cfg.deg_tol
    if tol is None:
        tol = TOL.degeneracy_rel * max(1.0, abs(cfg.J), abs(cfg.K))
    columns = ["bz", *(f"E{i}" for i in range(1, 10)), "crossing"]
    rows = []
    for bz in cfg.bz:
        e = analytic_energies(cfg.model(bz))
        flag = float(any(abs(bz - c) <= tol for c in res.crossings))
        rows.append((bz, *(float(x) for x in e), flag))
    return Table(columns, rows, f"J{cfg.J:g}_K{cfg.K:g}", {"J": cfg.J, "K": cfg.K})


def numeric_spectrum_scan(cfg: SweepConfig) -> Table:
    """Sorted numeric eigenvalues of the built Hamiltonian over ``cfg.bz``."""
    cfg.validate()
    columns = ["bz", *(f"w{i}" for i in range(1, 10))]
    rows = [(bz, *(float(x) for x in hermitian_eig(build_hamiltonian(cfg.model(bz))).eigenvalues))
            for bz in cfg.bz]
    return Table(columns, rows, f"J{cfg.J:g}_K{cfg.K:g}_numeric")


def werner_table(n_points: int = 101) -> Table:
    """Closed-form ``(p, negativity, linear_entropy)`` of the isotropic family."""
    ps = np.linspace(0.0, 1.0, n_points)
    rows = [(float(p), werner_negativity(p), werner_linear_entropy(p)) for p in ps]
    return Table(["p", "negativity", "linear_entropy"], rows, "werner")


def local_maxima(table: Table, column: str, rel: float = 1e-9) -> list[float]:
    """Independent-variable values where ``column`` strictly exceeds both neighbours."""
    x = table.column(table.columns[0])
    y = table.column(column)
    scale = max(1.0, float(np.max(np.abs(y)))) if len(y) else 1.0
    eps = rel * scale
    return [float(x[i]) for i in range(1, len(y) - 1)
            if y[i] > y[i - 1] + eps and y[i] > y[i + 1] + eps]


# --- CSV -----------------------------------------------------------------------

def format_value(v: float) -> str:
    s = f"{v:.17g}"
    return "0" if s == "-0" else s


def csv_text(table: Table) -> str:
    lines = [",".join(table.columns)]
    lines.extend(",".join(format_value(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def write_csv(table: Table, path) -> str:
    path = os.fspath(path)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(csv_text(table))
    return path
