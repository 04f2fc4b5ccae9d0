"""Exact small-n analysis of trace Sperner families, tight paths and tree posets."""

from .constructions import BandSpec, band, high_levels, level, low_levels, midband, midband_spec
from .family import (
    Chain,
    SetFamily,
    TightPath,
    TraceProblem,
    Violation,
    find_tight_path,
    find_violation,
    is_k_sperner,
    is_trace_sperner,
    longest_chain,
    modified_shadow,
    shadow,
    trace,
    uniform_slice,
)
from .poset import (
    Embedding,
    TreePoset,
    build_chain_poset,
    build_complete_tree_poset,
    contains_poset,
    descend_chain_avoiding,
    height_and_level_count,
    peel_roots,
)
from .search import (
    SearchBudget,
    SearchResult,
    heuristic_lower_bound,
    max_p_free,
    max_trace_sperner,
    theorem3_inequality_check,
)

__version__ = "0.1.0"
