"""Sweep evaluation and CSV/JSON emission."""

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .. import __version__
from ..channel import ChannelParams
from ..errors import ComputeError, ConfigError, PhaseConventionError
from ..fidelity import fidelity_closed_form, fidelity_numeric
from ..moments import deviations, input_moments, output_moments, sigma
from ..optimize import delta_opt_fidelity, delta_opt_variance, delta_subopt
from ..states import InputState, ResourceKind, preset_resource
from ..units import db_to_natural


@dataclass
class SweepResult:
    """Tabulated sweep; ``rows[i][0]`` is the sweep value, then one cell per column."""

    scenario: dict
    version: str
    columns: list
    rows: list

    def column(self, name):
        j = self.columns.index(name)
        return [row[j] for row in self.rows]

    def to_dict(self):
        return {
            "scenario": self.scenario,
            "version": self.version,
            "columns": {name: self.column(name) for name in self.columns},
        }

    @classmethod
    def from_dict(cls, doc):
        columns = list(doc["columns"])
        data = [doc["columns"][name] for name in columns]
        rows = [list(cells) for cells in zip(*data)]
        return cls(scenario=doc["scenario"], version=doc["version"], columns=columns, rows=rows)


def build_setup(values, kind):
    """Input state, resource and channel for one parameter assignment."""
    state = InputState.from_db(
        beta=complex(values["beta_re"], values["beta_im"]), s_db=values["s_db"], varphi=values["varphi"]
    )
    r = db_to_natural(values["r_db"])
    g = values["g"]
    T = math.sqrt(1.0 - values["R2"])
    params = ChannelParams(T=T, tau=values["tau"], n_th=values["n_th"], g=1.0 / T if g == "1/T" else g)
    if kind is not ResourceKind.SB:
        return state, preset_resource(kind, r, values["phi_res"]), params
    rule = values["sb_delta"]
    if rule == "subopt":
        delta = delta_subopt(r, params, s_bar=db_to_natural(values["s_bar_db"]))
    elif rule == "opt":
        delta = delta_opt_fidelity(state.s, r, params)
    elif rule == "optvar":
        delta = delta_opt_variance(r, params.tau)
    else:
        delta = float(rule)
    res = preset_resource(ResourceKind.SB, r, values["phi_res"]).with_delta(delta, values["theta"])
    return state, res, params


def fidelity(state, res, params):
    """Closed form where it applies, quadrature otherwise."""
    try:
        return fidelity_closed_form(state, res, params)
    except PhaseConventionError:
        return fidelity_numeric(state, res, params)


def evaluate(observable, state, res, params):
    if observable == "fidelity":
        return fidelity(state, res, params)
    if observable in ("var_x", "var_p", "cov_xp"):
        return getattr(output_moments(state, res, params), observable)
    if observable in ("var_x_in", "var_p_in"):
        return getattr(input_moments(state), observable[:-3])
    if observable == "sigma":
        return sigma(res, params)
    if observable.startswith("d_"):
        return getattr(deviations(state, res, params), observable)
    if observable == "delta":
        return res.delta
    if observable == "delta_opt":
        return delta_opt_fidelity(state.s, res.r, params)
    if observable == "delta_optvar":
        return delta_opt_variance(res.r, params.tau)
    if observable == "variance_ratio_gap":
        # diagnostic only; never used as an optimization target
        out, inp = output_moments(state, res, params), input_moments(state)
        return out.var_x / out.var_p - inp.var_x / inp.var_p
    raise ConfigError(f"unknown observable {observable!r}")


def _series_values(scenario):
    return [None] if scenario.series is None else list(scenario.series.values)


def _suffix(scenario, sv):
    if sv is None:
        return ""
    text = sv if isinstance(sv, str) else f"{sv:g}"
    return f"@{scenario.series.axis}={text}"


def column_names(scenario):
    names = []
    for sv in _series_values(scenario):
        suffix = _suffix(scenario, sv)
        for obs in scenario.observables:
            for kind in scenario.kinds:
                names.append(f"{obs}[{kind.value}]{suffix}")
    return names


def _row(scenario, x):
    cells = [x]
    for sv in _series_values(scenario):
        values = dict(scenario.base)
        values[scenario.sweep.axis] = x
        if sv is not None:
            values[scenario.series.axis] = sv
        setups = {kind: build_setup(values, kind) for kind in scenario.kinds}
        for obs in scenario.observables:
            for kind in scenario.kinds:
                value = evaluate(obs, *setups[kind])
                if not math.isfinite(value):
                    raise ComputeError(
                        f"{obs} for {kind.value} is not finite at {scenario.sweep.axis}={x!r} "
                        f"(series value {sv!r})"
                    )
                cells.append(float(value))
    return cells


def run_scenario(scenario, jobs=1):
    """Evaluate every requested observable over the sweep grid.

    Points are independent and may be computed on ``jobs`` threads; the
    output order always follows the sweep grid.

    Raises:
        ComputeError: if any cell cannot be computed or is not finite.
    """
    xs = scenario.sweep.values()

    def task(x):
        try:
            return _row(scenario, x)
        except (ComputeError, ConfigError):
            raise
        except (ValueError, ArithmeticError) as exc:
            raise ComputeError(f"{scenario.sweep.axis}={x!r}: {exc}") from exc

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(task, xs))
    else:
        rows = [task(x) for x in xs]
    return SweepResult(
        scenario=scenario.echo(),
        version=__version__,
        columns=[scenario.sweep.axis, *column_names(scenario)],
        rows=rows,
    )


def _fmt(value):
    return format(value, ".17g")


def to_csv(result):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def to_json(result):
    return json.dumps(result.to_dict(), indent=2) + "\n"


def emit(result, fmt, path=None):
    """Write ``result`` as CSV or JSON to ``path``, or return the text if ``path`` is None.

    Raises:
        OSError: if the file cannot be written.
    """
    if fmt == "csv":
        text = to_csv(result)
    elif fmt == "json":
        text = to_json(result)
    else:
        raise ConfigError(f"unknown output format {fmt!r}")
    if path is None:
        return text
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text


def load_result(path):
    """Read a JSON sweep result written by :func:`emit`."""
    with open(path, encoding="utf-8") as fh:
        return SweepResult.from_dict(json.load(fh))
