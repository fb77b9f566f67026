"""Instance generators, benchmark sweeps, SVG export and the command line."""
from .generators import KINDS, GeneratorSpec, generate_instance
from .runner import CSV_COLUMNS, BenchmarkRow, parse_csv, run_benchmark, summarize, write_csv
from .render import RenderOptions, glyph_positions, render_frames, render_svg

__all__ = [
    "CSV_COLUMNS",
    "KINDS",
    "RenderOptions",
    "BenchmarkRow",
    "GeneratorSpec",
    "generate_instance",
    "glyph_positions",
    "parse_csv",
    "render_frames",
    "render_svg",
    "run_benchmark",
    "summarize",
    "write_csv",
]
