"""Grid realizations of abstract line shuffles."""
from .band import Band
from .gadgets import compute_gadget_tables, gadget_tables, legal_moves
from .highway import highway_shuffle
from .linear_merge import linear_merge_shuffle, merge_bound
from .local import center_within_cells, rearrange_cell
from .odd_even import UnsupportedDimension, line_groups, odd_even_line_shuffle
from .script import MotionScript

__all__ = [
    "Band",
    "MotionScript",
    "UnsupportedDimension",
    "center_within_cells",
    "compute_gadget_tables",
    "gadget_tables",
    "highway_shuffle",
    "legal_moves",
    "line_groups",
    "linear_merge_shuffle",
    "merge_bound",
    "odd_even_line_shuffle",
    "rearrange_cell",
]
