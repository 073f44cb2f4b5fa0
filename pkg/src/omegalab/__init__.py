"""Certified chain transitivity, h-shadowing and omega-limit realisation for PL interval maps and one-sided shifts."""

from .chains import BoxPartition, build_eps_graph, chain, is_ict
from .counterexamples import run_example
from .errors import OmegaLabError
from .numeric import Interval, PLMap, exact_map, parse_rational, tent
from .pseudo_orbit import PseudoOrbit, verify_h_shadow
from .realize import realize_sft, realize_tent2
from .shadowing import h_shadow_expanding, sft_h_shadow
from .symbolic import full_shift, golden_mean, sft, sofic

__all__ = [
    "BoxPartition", "Interval", "OmegaLabError", "PLMap", "PseudoOrbit",
    "build_eps_graph", "chain", "exact_map", "full_shift", "golden_mean", "h_shadow_expanding",
    "is_ict", "parse_rational", "realize_sft", "realize_tent2", "run_example", "sft", "sft_h_shadow",
    "sofic", "tent", "verify_h_shadow",
]
__version__ = "0.1.0"
