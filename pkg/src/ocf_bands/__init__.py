"""Optimal contiguous-band clustering for hyperspectral band selection."""
from .cube import BandInterval, CubeFormatError, HsiCube, load_cube, remove_bands, write_cube
from .dp import Cbiv, DpTables, Solution, evaluate, solve
from .evaluation import ExperimentConfig, OaReport, knn_overall_accuracy, stratified_split
from .objectives import IntervalScoreTable, build_na_scorer, build_trc_scorer, normalized_cut
from .oracle import brute_force_solve
from .ranking import RankVector, rank_efdpc, rank_entropy, rank_mvpca
from .selection import (
    BandSubset,
    estimate_band_count,
    rcs_select,
    select_bands,
    variance_power_ratio,
)
from .similarity import DegenerateBandsError, SimilarityMatrix, local_scaling_similarity

__version__ = "0.1.0"

__all__ = [
    "BandInterval",
    "CubeFormatError",
    "HsiCube",
    "load_cube",
    "remove_bands",
    "write_cube",
    "Cbiv",
    "DpTables",
    "Solution",
    "evaluate",
    "solve",
    "ExperimentConfig",
    "OaReport",
    "knn_overall_accuracy",
    "stratified_split",
    "IntervalScoreTable",
    "build_na_scorer",
    "build_trc_scorer",
    "normalized_cut",
    "brute_force_solve",
    "RankVector",
    "rank_efdpc",
    "rank_entropy",
    "rank_mvpca",
    "BandSubset",
    "estimate_band_count",
    "rcs_select",
    "select_bands",
    "variance_power_ratio",
    "DegenerateBandsError",
    "SimilarityMatrix",
    "local_scaling_similarity",
]
