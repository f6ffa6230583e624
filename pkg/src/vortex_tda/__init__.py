"""Sliding-window persistent homology for scalar time series.

Typical use::

    from vortex_tda import read_series, run_analysis, PipelineConfig
    result = run_analysis(read_series("zonal_wind_daily.csv"), PipelineConfig())
"""
from .embed import EmbeddingConfig, PointCloud, schedule_windows, sliding_window_embed, zscore_window
from .errors import ConfigError, DataError, VortexTDAError
from .ingest import Sample, TimeSeries, aggregate_daily, find_gaps, parse_series, read_series, slice_range
from .landscape import Landscape, build_landscape, count_features, landscape_norm, total_persistence
from .persistence import (
    BoundaryMatrix,
    PersistenceDiagram,
    PersistencePair,
    boundary_matrix,
    extract_diagram,
    persistence_diagrams,
    reduce,
)
from .pipeline import (
    AnalysisResult,
    NormRecord,
    NormSeries,
    PipelineConfig,
    correlate,
    emit_outputs,
    run_analysis,
    window_average,
)
from .rips import Filtration, Simplex, build_vr_filtration, enclosing_radius, pairwise_distances
from .synth import synth_signal

__version__ = "0.1.0"

__all__ = [
    "EmbeddingConfig",
    "PointCloud",
    "schedule_windows",
    "sliding_window_embed",
    "zscore_window",
    "ConfigError",
    "DataError",
    "VortexTDAError",
    "Sample",
    "TimeSeries",
    "aggregate_daily",
    "find_gaps",
    "parse_series",
    "read_series",
    "slice_range",
    "Landscape",
    "build_landscape",
    "count_features",
    "landscape_norm",
    "total_persistence",
    "BoundaryMatrix",
    "PersistenceDiagram",
    "PersistencePair",
    "boundary_matrix",
    "extract_diagram",
    "persistence_diagrams",
    "reduce",
    "AnalysisResult",
    "NormRecord",
    "NormSeries",
    "PipelineConfig",
    "correlate",
    "emit_outputs",
    "run_analysis",
    "window_average",
    "Filtration",
    "Simplex",
    "build_vr_filtration",
    "enclosing_radius",
    "pairwise_distances",
    "synth_signal",
]
