"""Non-parametric subset scanning of activation matrices."""

import json

import numpy as np

from ._npss import (
    DEFAULT_ALPHA_GRID,
    SCHEMA_VERSION,
    NpssError,
    NpssIoError,
    bj_statistic,
    empirical_pvalues,
    hc_statistic,
    ks_critical_value,
    ks_uniform_distance,
    load_matrix,
    save_matrix,
    score_subset,
)
from . import _npss

__all__ = [
    "DEFAULT_ALPHA_GRID",
    "SCHEMA_VERSION",
    "NpssError",
    "NpssIoError",
    "bj_statistic",
    "empirical_pvalues",
    "experiment",
    "hc_statistic",
    "ks_critical_value",
    "ks_uniform_distance",
    "load_matrix",
    "run",
    "save_matrix",
    "scan",
    "score_subset",
]


def scan(p, **kwargs):
    """Scan a p-value matrix; returns the ScanResult document as a dict."""
    return json.loads(_npss.scan_json(np.asarray(p, dtype=float), **kwargs))


def run(reference, test, **kwargs):
    """Compute p-values and run a strategy (scanL, scanR, scanLR, scan2)."""
    return json.loads(_npss.run_json(np.asarray(reference, dtype=float), np.asarray(test, dtype=float), **kwargs))


def experiment(reference, clean, anomalous, **kwargs):
    """Repeated-trial detection experiment; returns the report as a dict."""
    return json.loads(
        _npss.experiment_json(
            np.asarray(reference, dtype=float),
            np.asarray(clean, dtype=float),
            np.asarray(anomalous, dtype=float),
            **kwargs,
        )
    )
