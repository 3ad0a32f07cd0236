"""Symbolic entropy of discrete descriptions at different observation scales."""
__version__ = "0.1.0"

from .downgrade import DowngradedProfile, downgrade_profile
from .grid2d import Grid, GridTiling, grid_profile, grid_report
from .kernels import BACKEND
from .model import (
    Message,
    ScaleReport,
    Segmentation,
    SymbolProfile,
    entropy,
    entropy_flat,
    profile_from_segmentation,
    scale_report,
    specific_diversity,
    symbol_probability,
)
from .search import Move, SearchConfig, apply_move, diversity_delta_bounds, exhaustive_min_entropy, minimize_entropy
from .tokenizers import DelimiterPolicy, tokenize, tokenize_bits, tokenize_chars, tokenize_ngram, tokenize_words

__all__ = [
    "BACKEND",
    "DelimiterPolicy",
    "DowngradedProfile",
    "Grid",
    "GridTiling",
    "Message",
    "Move",
    "ScaleReport",
    "SearchConfig",
    "Segmentation",
    "SymbolProfile",
    "apply_move",
    "diversity_delta_bounds",
    "downgrade_profile",
    "entropy",
    "entropy_flat",
    "exhaustive_min_entropy",
    "grid_profile",
    "grid_report",
    "minimize_entropy",
    "profile_from_segmentation",
    "scale_report",
    "specific_diversity",
    "symbol_probability",
    "tokenize",
    "tokenize_bits",
    "tokenize_chars",
    "tokenize_ngram",
    "tokenize_words",
]
