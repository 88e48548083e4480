"""Finite sites, sheaves, points and valuation experiments."""

import json
import os

from . import _sitelab
from ._sitelab import (
    Outcome,
    builtin_demos,
    canonical_rv_trace,
    catalogue_spaces,
    center_sequence,
    cover_detection_sweep,
    deligne_sample,
    divisibility_witness,
    lift_dvr_point,
    membership,
    operations,
    topology_soundness,
    unit_or_zero_lift,
    value,
)

__all__ = [
    "Outcome",
    "builtin_demos",
    "canonical_rv_trace",
    "catalogue_spaces",
    "center_sequence",
    "cover_detection_sweep",
    "deligne_sample",
    "divisibility_witness",
    "lift_dvr_point",
    "membership",
    "operations",
    "run_demo",
    "run_scenario",
    "topology_soundness",
    "unit_or_zero_lift",
    "value",
]


def run_scenario(scenario, *, seed=0, max_n=None, base_dir="."):
    """Run a scenario given as a dict, a JSON string or a file path.

    Returns ``(report, exit_code)`` where ``report`` is the parsed JSON
    report and ``exit_code`` is 0 (all pass), 1 (a check failed) or 2
    (invalid input).
    """
    if isinstance(scenario, dict):
        text, code = _sitelab.run_scenario_text(json.dumps(scenario), base_dir, seed, max_n)
    elif isinstance(scenario, (str, os.PathLike)) and os.path.exists(scenario):
        text, code = _sitelab.run_scenario_file(os.fspath(scenario), seed, max_n)
    else:
        text, code = _sitelab.run_scenario_text(scenario, base_dir, seed, max_n)
    return json.loads(text), code


def run_demo(name, *, seed=0):
    """Run a bundled scenario by name; returns ``(report, exit_code)``."""
    text, code = _sitelab.run_demo(name, seed)
    return json.loads(text), code
