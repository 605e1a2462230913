"""Energy-efficiency simulator for large-scale distributed antenna systems."""

import csv
import io
import json

from . import _core
from ._core import (
    ConfigError,
    agglomerate,
    greedy_select,
    lambert_w0,
    realization_seed,
    zf_precoder,
)

__all__ = [
    "ConfigError",
    "agglomerate",
    "cluster_power",
    "config",
    "draw_channel",
    "greedy_select",
    "lambert_w0",
    "realization_seed",
    "run_sweep",
    "solve",
    "zf_precoder",
]


def _dump(overrides):
    return json.dumps(overrides) if overrides else ""


def config(mode="ldas", **overrides):
    """Effective configuration as a dict."""
    return json.loads(_core.make_config(_dump(overrides), mode))


def draw_channel(seed, **overrides):
    return _core.draw_channel(_dump(overrides), seed)


def cluster_power(channel, active_das, num_clusters=1, method="heuristic", **overrides):
    return _core.cluster_power(channel, list(active_das), num_clusters, method, _dump(overrides))


def solve(index=0, mode="ldas", **overrides):
    """Report of one realization as a dict."""
    return json.loads(_core.solve(_dump(overrides), index, mode))


def run_sweep(sweep, mode="ldas", threads=1, **overrides):
    """Aggregated rows as a list of dicts keyed by column name."""
    text = _core.run_sweep(_dump(overrides), sweep, threads, mode)
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append({k: (int(v) if k == "n" else float(v)) for k, v in rec.items()})
    return rows
