"""Scenario files.

A scenario is a TOML document with ``[input]``, ``[resource]``, ``[channel]``,
``[sweep]`` and ``[output]`` tables plus an optional ``[series]`` table that
repeats the sweep for several values of a second parameter. Squeezing
levels are given in dB through ``*_db`` keys; every other angle is in
radians.

Example::

    [input]
    s_db = 5.0

    [resource]
    kinds = ["SB", "PSS", "TwB"]
    sb_delta = "subopt"

    [channel]
    R2 = 0.05
    tau = 0.1
    g = "1/T"

    [sweep]
    axis = "r_db"
    start = 0.0
    stop = 25.0
    points = 251

    [output]
    observables = ["fidelity"]
"""

import copy
import math
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from ..errors import ConfigError
from ..states import ResourceKind

DEVIATION_OBSERVABLES = ("d_x", "d_p", "d_var_x", "d_var_p", "d_cov_xp")
OBSERVABLES = (
    "fidelity",
    "var_x",
    "var_p",
    "cov_xp",
    "var_x_in",
    "var_p_in",
    "sigma",
    *DEVIATION_OBSERVABLES,
    "delta",
    "delta_opt",
    "delta_optvar",
    "variance_ratio_gap",
)
SB_DELTA_RULES = ("subopt", "opt", "optvar")

# parameter name -> (table, default)
PARAMETERS = {
    "beta_re": ("input", 0.0),
    "beta_im": ("input", 0.0),
    "s_db": ("input", 0.0),
    "varphi": ("input", 0.0),
    "r_db": ("resource", 10.0),
    "phi_res": ("resource", math.pi),
    "theta": ("resource", 0.0),
    "sb_delta": ("resource", "subopt"),
    "s_bar_db": ("resource", 5.0),
    "R2": ("channel", 0.0),
    "tau": ("channel", 0.0),
    "n_th": ("channel", 0.0),
    "g": ("channel", "1/T"),
}
SWEEPABLE = tuple(name for name in PARAMETERS)


@dataclass
class Sweep:
    axis: str
    start: float
    stop: float
    points: int

    def values(self):
        step = (self.stop - self.start) / (self.points - 1)
        return [self.start + k * step for k in range(self.points)]


@dataclass
class Series:
    axis: str
    values: list


@dataclass
class Scenario:
    """Validated scenario; ``base`` maps every parameter to its fixed value."""

    base: dict
    kinds: list
    sweep: Sweep
    observables: list
    series: Series = None
    name: str = ""
    description: str = ""
    raw: dict = field(default_factory=dict)

    def echo(self):
        """Plain-data description of the scenario, suitable for output headers."""
        out = {
            "name": self.name,
            "description": self.description,
            "parameters": dict(self.base),
            "kinds": [k.value for k in self.kinds],
            "sweep": {
                "axis": self.sweep.axis,
                "start": self.sweep.start,
                "stop": self.sweep.stop,
                "points": self.sweep.points,
            },
            "observables": list(self.observables),
        }
        if self.series is not None:
            out["series"] = {"axis": self.series.axis, "values": list(self.series.values)}
        return out


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{where}: value must be finite, got {value!r}")
    return float(value)


def _check_parameter(name, value):
    where = f"{PARAMETERS[name][0]}.{name}"
    if name == "sb_delta":
        if isinstance(value, str):
            if value not in SB_DELTA_RULES:
                raise ConfigError(f"{where}: expected one of {SB_DELTA_RULES} or a number, got {value!r}")
            return value
        return _number(value, where)
    if name == "g":
        if isinstance(value, str):
            if value.replace(" ", "") != "1/T":
                raise ConfigError(f"{where}: expected a number or '1/T', got {value!r}")
            return "1/T"
        value = _number(value, where)
        if value <= 0:
            raise ConfigError(f"{where}: gain must be > 0")
        return value
    value = _number(value, where)
    if name in ("s_db", "r_db", "s_bar_db", "tau", "n_th") and value < 0:
        raise ConfigError(f"{where}: must be >= 0, got {value}")
    if name == "R2" and not (0.0 <= value < 1.0):
        raise ConfigError(f"{where}: must lie in [0, 1), got {value}")
    return value


def _table(doc, name, required=False):
    table = doc.get(name)
    if table is None:
        if required:
            raise ConfigError(f"missing [{name}] table")
        return {}
    if not isinstance(table, dict):
        raise ConfigError(f"[{name}] must be a table")
    return table


def scenario_from_dict(doc):
    """Validate a parsed scenario document.

    Raises:
        ConfigError: on any schema violation.
    """
    if not isinstance(doc, dict):
        raise ConfigError("scenario must be a table")
    known_tables = {"input", "resource", "channel", "sweep", "series", "output", "name", "description"}
    unknown = set(doc) - known_tables
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")

    base = {}
    for table_name in ("input", "resource", "channel"):
        table = _table(doc, table_name)
        allowed = {n for n, (t, _) in PARAMETERS.items() if t == table_name}
        if table_name == "resource":
            allowed.add("kinds")
        if table_name == "channel":
            allowed.add("T")
        extra = set(table) - allowed
        if extra:
            raise ConfigError(f"[{table_name}] has unknown keys: {sorted(extra)}")

    channel = _table(doc, "channel")
    if "T" in channel and "R2" in channel:
        raise ConfigError("[channel] give either T or R2, not both")
    for name, (table_name, default) in PARAMETERS.items():
        table = _table(doc, table_name)
        if name == "R2" and "T" in channel:
            T = _number(channel["T"], "channel.T")
            if not (0.0 < T <= 1.0):
                raise ConfigError(f"channel.T: must lie in (0, 1], got {T}")
            base[name] = 1.0 - T * T
            continue
        base[name] = _check_parameter(name, table.get(name, default))

    resource = _table(doc, "resource")
    kinds = resource.get("kinds", ["SB", "PSS", "TwB"])
    if isinstance(kinds, str):
        kinds = [kinds]
    if not isinstance(kinds, list) or not kinds:
        raise ConfigError("resource.kinds must be a non-empty list")
    try:
        kinds = [ResourceKind.parse(k) for k in kinds]
    except ValueError as exc:
        raise ConfigError(f"resource.kinds: {exc}") from None
    if len(set(kinds)) != len(kinds):
        raise ConfigError("resource.kinds contains duplicates")

    sweep_doc = _table(doc, "sweep", required=True)
    axis = sweep_doc.get("axis")
    if axis not in SWEEPABLE:
        raise ConfigError(f"sweep.axis must name a parameter {SWEEPABLE}, got {axis!r}")
    for key in ("start", "stop", "points"):
        if key not in sweep_doc:
            raise ConfigError(f"sweep.{key} is required")
    points = sweep_doc["points"]
    if isinstance(points, bool) or not isinstance(points, int) or points < 2:
        raise ConfigError(f"sweep.points must be an integer >= 2, got {points!r}")
    sweep = Sweep(
        axis=axis,
        start=_number(sweep_doc["start"], "sweep.start"),
        stop=_number(sweep_doc["stop"], "sweep.stop"),
        points=points,
    )
    for v in (sweep.start, sweep.stop):
        _check_parameter(axis, v)

    series = None
    series_doc = _table(doc, "series")
    if series_doc:
        s_axis = series_doc.get("axis")
        if s_axis not in SWEEPABLE or s_axis == axis:
            raise ConfigError(f"series.axis must name a parameter other than the sweep axis, got {s_axis!r}")
        values = series_doc.get("values")
        if not isinstance(values, list) or not values:
            raise ConfigError("series.values must be a non-empty list")
        series = Series(axis=s_axis, values=[_check_parameter(s_axis, v) for v in values])

    output = _table(doc, "output")
    observables = output.get("observables", ["fidelity"])
    if isinstance(observables, str):
        observables = [observables]
    expanded = []
    for obs in observables:
        if obs == "deviations":
            expanded.extend(DEVIATION_OBSERVABLES)
        elif obs in OBSERVABLES:
            expanded.append(obs)
        else:
            raise ConfigError(f"output.observables: unknown observable {obs!r}")
    if len(set(expanded)) != len(expanded):
        raise ConfigError("output.observables contains duplicates")

    return Scenario(
        base=base,
        kinds=kinds,
        sweep=sweep,
        observables=expanded,
        series=series,
        name=str(doc.get("name", "")),
        description=str(doc.get("description", "")),
        raw=copy.deepcopy(doc),
    )


def load_scenario(path):
    """Read and validate a scenario file."""
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from None
    return scenario_from_dict(doc)
