"""
Experiment configs and the commands run by dual_schur.py.

A config is a single JSON document:

  {
    "spec": {"example": "example1", "alpha": 1, "c": 4},
    "n": 100,
    "seed": 7,
    "samples": 200,
    "grid_step": 0.05
  }

where "spec" is either a named example or explicit {"f": ..., "g": ..., "c": ...}
density families. Every command returns its files as text; nothing touches
the disk until write_outputs is called on a finished run.
"""
import csv
import io
import json
import logging
import os
import platform
import time
from collections import Counter
from dataclasses import asdict, dataclass, field, replace
from importlib import metadata
from typing import Optional, Tuple

import numpy as np

from .critical import critical_residual, gap_table
from .edge import fluctuation_experiment, tracy_widom_table
from .errors import ConfigInvalid, DualSchurError
from .kernel import ContourConfig, finite_kernel_table
from .limit_shape import limit_curve, support
from .output_formats import (COMMAND_OUTPUTS, CURVE_HEADER, GAP_HEADER, HISTOGRAM_HEADER, KERNEL_HEADER,
                             MANIFEST_NAME, MANIFEST_PACKAGES, MANIFEST_SCHEMA_VERSION, RESCALED_HEADER,
                             SAMPLE_HEADER, SUPPORT_HEADER, TABLE_FORMAT_VERSION, TW_HEADER, format_value)
from .parameters import DensitySpec, Specialization, example_density
from .sampler import STATISTICS, monte_carlo

COMMANDS = tuple(COMMAND_OUTPUTS)
DEFAULT_TW_GRID = (-8.0, 4.0, 0.25)


@dataclass(frozen=True)
class ExperimentConfig:
    spec: Optional[dict] = None
    n: Optional[int] = None
    k: Optional[int] = None
    seed: int = 0
    workers: int = 1
    samples: int = 100
    statistic: str = "lambda1"
    grid_step: float = 0.05
    deltas: Tuple[int, ...] = (1, 2, 3)
    positions: Tuple[float, ...] = ()
    tw_grid: Tuple[float, float, float] = DEFAULT_TW_GRID
    contour: dict = field(default_factory=dict)
    out: str = "results"

    def density(self):
        if self.spec is None:
            raise ConfigInvalid("this command needs a \"spec\" entry")
        return _build_density(self.spec)

    def specialization(self):
        return Specialization.from_density(self.density(), self.n, self.k)

    def contour_config(self):
        return ContourConfig(**self.contour)

    def grid(self):
        start, stop, step = self.tw_grid
        return np.arange(start, stop + step / 2, step)

    def to_dict(self):
        data = asdict(self)
        data["deltas"] = list(self.deltas)
        data["positions"] = list(self.positions)
        data["tw_grid"] = list(self.tw_grid)
        return data


def _build_density(config):
    try:
        if "example" in config:
            params = {key: value for key, value in config.items() if key != "example"}
            return example_density(config["example"], **params)
        return DensitySpec.from_config(config)
    except (KeyError, TypeError) as e:
        raise ConfigInvalid(f"bad spec {config}: {e}") from e
    except DualSchurError as e:
        raise ConfigInvalid(f"bad spec {config}: {e}") from e


def _whole_number(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not float(value).is_integer():
        raise ConfigInvalid(f"{name} must be an integer, got {value!r}")
    return int(value)


def parse_config(data, overrides=None):
    """Validate a config dict (plus command-line overrides) into an ExperimentConfig."""
    if not isinstance(data, dict):
        raise ConfigInvalid(f"config must be a JSON object, got {type(data).__name__}")
    data = dict(data)
    data.update({key: value for key, value in (overrides or {}).items() if value is not None})
    unknown = set(data) - set(ExperimentConfig.__dataclass_fields__)
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
    for key in ("deltas", "positions", "tw_grid"):
        if key in data:
            data[key] = tuple(data[key])
    config = ExperimentConfig(**data)

    if config.spec is not None:
        density = config.density()
        n = _whole_number("n", config.n)
        if n < 1:
            raise ConfigInvalid(f"n must be a positive integer, got {config.n}")
        config = replace(config, n=n, k=None if config.k is None else _whole_number("k", config.k))
        k = int(round(density.c * config.n))
        if config.k is None:
            config = replace(config, k=k)
        elif config.k != k:
            raise ConfigInvalid(f"k = {config.k} does not match round(c n) = {k}")
    if config.seed < 0 or config.seed >= 2 ** 64:
        raise ConfigInvalid(f"seed must be an unsigned 64-bit integer, got {config.seed}")
    if config.workers < 1 or config.samples < 1:
        raise ConfigInvalid("workers and samples must be at least 1")
    if config.statistic not in STATISTICS:
        raise ConfigInvalid(f"unknown statistic {config.statistic!r}")
    if not config.grid_step > 0:
        raise ConfigInvalid(f"grid_step must be positive, got {config.grid_step}")
    if any(int(d) != d or d < 1 for d in config.deltas):
        raise ConfigInvalid(f"deltas must be positive integers, got {config.deltas}")
    if len(config.tw_grid) != 3 or not config.tw_grid[2] > 0:
        raise ConfigInvalid(f"tw_grid must be [start, stop, step] with step > 0, got {config.tw_grid}")
    try:
        contour = config.contour_config()
    except TypeError as e:
        raise ConfigInvalid(f"bad contour settings {config.contour}") from e
    if not contour.tol > 0:
        raise ConfigInvalid(f"contour tol must be positive, got {contour.tol}")
    return config


def load_config(path, overrides=None):
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigInvalid(f"cannot read config {path}: {e}") from e
    return parse_config(data, overrides)


def _table(header, rows):
    buffer = io.StringIO()
    buffer.write(f"# dual-schur table v{TABLE_FORMAT_VERSION}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def _run_sample(config):
    batch = monte_carlo(config.specialization(), config.samples, config.statistic, config.seed, config.workers)
    if config.statistic == "shape":
        values = [lam.to_json() for lam in batch.values]
    else:
        values = batch.values
    files = {"samples.csv": _table(SAMPLE_HEADER, ((i, s, v) for i, (s, v) in enumerate(zip(batch.seeds, values))))}
    counts = Counter(values)
    files["histogram.csv"] = _table(HISTOGRAM_HEADER, ((v, c, c / len(values)) for v, c in sorted(counts.items())))
    return files, {"elapsed_sampling": batch.elapsed}


def _run_limit_shape(config):
    density = config.density()
    sup = support(density)
    curve = limit_curve(density, config.grid_step, sup)
    files = {
        "support.csv": _table(SUPPORT_HEADER, [(sup.z_minus, sup.z_plus, sup.x_minus, sup.x_plus) + tuple(sup.edge_density)]),
        "curve.csv": _table(CURVE_HEADER, curve.rows()),
    }
    return files, {"support": sup.to_dict()}


def _run_kernel(config):
    if not config.positions:
        raise ConfigInvalid("the kernel command needs \"positions\"")
    table = finite_kernel_table(list(config.positions), config.specialization(), config.contour_config())
    return {"kernel.csv": _table(KERNEL_HEADER, table.rows)}, {}


def _run_fluctuations(config):
    result = fluctuation_experiment(config.density(), config.n, config.samples, config.seed, config.workers, config.grid())
    summary = result.summary()
    files = {
        "rescaled.csv": _table(RESCALED_HEADER, zip(range(len(result.raw)), result.raw, result.rescaled)),
        "tracy_widom.csv": _table(TW_HEADER, result.table),
        "ks.json": json.dumps(summary, indent=2, sort_keys=True) + "\n",
    }
    return files, {"ks": summary, "elapsed_sampling": result.elapsed}


def _run_critical(config):
    density = config.density()
    data = critical_residual(density)
    rows = gap_table(config.deltas, density, config.n, config.samples, config.seed, config.workers)
    return {"gaps.csv": _table(GAP_HEADER, (row.row() for row in rows))}, {"critical": data.to_dict()}


def _run_tw_table(config):
    return {"tracy_widom.csv": _table(TW_HEADER, tracy_widom_table(config.grid()))}, {}


_RUNNERS = {
    "sample": _run_sample,
    "limit-shape": _run_limit_shape,
    "kernel": _run_kernel,
    "fluctuations": _run_fluctuations,
    "critical": _run_critical,
    "tw-table": _run_tw_table,
}


def package_versions():
    versions = {"python": platform.python_version()}
    for name in MANIFEST_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def build_manifest(command, config, files, results, elapsed):
    return {
        "schema": MANIFEST_SCHEMA_VERSION,
        "command": command,
        "config": config.to_dict(),
        "seeds": {"seed": config.seed, "workers": config.workers},
        "versions": package_versions(),
        "timings": {"elapsed": elapsed, **{k: v for k, v in results.items() if k.startswith("elapsed")}},
        "results": {k: v for k, v in results.items() if not k.startswith("elapsed")},
        "outputs": sorted(files),
    }


def run(command, config):
    """Run a command and return {file name: text}, manifest included. Writes nothing."""
    if command not in _RUNNERS:
        raise ConfigInvalid(f"unknown command {command!r}, expected one of {COMMANDS}")
    logging.info(f"running {command}")
    started = time.perf_counter()
    files, results = _RUNNERS[command](config)
    elapsed = time.perf_counter() - started
    manifest = build_manifest(command, config, files, results, elapsed)
    files[MANIFEST_NAME] = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    logging.info(f"{command} finished in {elapsed:.2f}s")
    return files


def write_outputs(files, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    for name, text in files.items():
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        logging.info(f"wrote {path}")
