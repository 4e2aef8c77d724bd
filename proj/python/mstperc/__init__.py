"""Minimal spanning trees on critical percolation lattices."""

import json

from ._core import (
    ClusterTree,
    LabelField,
    Lattice,
    LatticeKind,
    MinimaxPath,
    SpanningForest,
    UsageError,
    __version__,
    _default_config,
    _replay,
    _run_command,
    asymmetry_experiment,
    cluster_tree,
    cycle_rule_check,
    estimate_alpha4,
    has_crossing,
    invasion_tree,
    lambda_threshold,
    make_field,
    mst,
    pivotal_sites,
    rate_r,
    reverse_delete_tree,
    sample_regional,
    sample_uniform,
)


def default_config():
    """The default run configuration as a dict."""
    return json.loads(_default_config())


def run(command, write_files=False, **overrides):
    """Run a command-line command in process and return its report dict.

    Keyword arguments override keys of the default configuration.
    """
    config = default_config()
    config["command"] = command
    config.update(overrides)
    return json.loads(_run_command(json.dumps(config), write_files))


def replay(report, threads=1):
    """True when re-running the report's configuration reproduces it."""
    return _replay(json.dumps(report), threads)
