"""Spectral-sequence pages, differentials, folding, replay and charts."""
from __future__ import annotations

from .chart import chart_json, chart_svg, export_chart, import_chart
from .engine import (
    DifferentialSeed,
    NonPeriodicError,
    OperatorAction,
    SeedConflictError,
    SeedError,
    SseqClass,
    SseqError,
    SseqPage,
    apply_differentials,
    close_seeds,
    fold_periodic,
    fold_seeds,
    leibniz_seeds,
)
from .replay import ReplayResult, build_fixture, homotopy_table, load_fixture, run_replay

__all__ = [
    "DifferentialSeed",
    "NonPeriodicError",
    "OperatorAction",
    "SeedConflictError",
    "SeedError",
    "SseqClass",
    "SseqError",
    "SseqPage",
    "ReplayResult",
    "apply_differentials",
    "build_fixture",
    "chart_json",
    "chart_svg",
    "close_seeds",
    "export_chart",
    "fold_periodic",
    "fold_seeds",
    "homotopy_table",
    "import_chart",
    "leibniz_seeds",
    "load_fixture",
    "run_replay",
]
