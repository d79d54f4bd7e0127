"""Summarize an undirected graph into supernodes and weighted superedges
whose size in bits stays within a budget, keeping reconstruction error low."""

from .cost import CostConstants, CostMode, entropy_cost, listing_cost, pair_cost
from .engine import EngineConfig, SummarizeReport, summarize, threshold
from .errors import BudgetInfeasibleError, GraphSummError
from .graph import Graph, input_size_bits, load_edge_list, write_edge_list
from .summary import (SummaryGraph, deserialize_summary, reconstruction_error,
                      serialize_summary, summary_size_bits)

__all__ = [
    "BudgetInfeasibleError", "CostConstants", "CostMode", "EngineConfig", "Graph",
    "GraphSummError", "SummarizeReport", "SummaryGraph", "deserialize_summary",
    "entropy_cost", "input_size_bits", "listing_cost", "load_edge_list", "pair_cost",
    "reconstruction_error", "serialize_summary", "summarize", "summary_size_bits",
    "threshold", "write_edge_list",
]
