"""SVG export of plans: one SMIL-animated document, or one frame per step.

Robots are ``<circle class="robot">`` glyphs carrying ``data-id``; cell
``(x, y)`` has its center at ``((y - 0.5) * cell, (x - 0.5) * cell)``.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import List, Optional

from ..grid_core import Instance, Plan, Pos

SVG_NS = "http://www.w3.org/2000/svg"


@dataclass(frozen=True)
class RenderOptions:
    cell: int = 20
    step_seconds: float = 0.4
    partition: Optional[int] = None  # draw heavier lines every k cells
    show_goals: bool = True


def center(p: Pos, cell: int) -> tuple:
    return ((p[1] - 0.5) * cell, (p[0] - 0.5) * cell)


def _color(rid: int) -> str:
    return f"hsl({(rid * 137.508) % 360:.1f},65%,50%)"


def _fmt(v: float) -> str:
    return f"{v:g}"


def _canvas(instance: Instance, opts: RenderOptions) -> ET.Element:
    g = instance.grid
    c = opts.cell
    svg = ET.Element("svg", xmlns=SVG_NS, width=str(g.cols * c), height=str(g.rows * c),
                     viewBox=f"0 0 {g.cols * c} {g.rows * c}")
    ET.SubElement(svg, "rect", width="100%", height="100%", fill="white")
    lines = ET.SubElement(svg, "g", stroke="#ddd", attrib={"stroke-width": "1"})
    for x in range(g.rows + 1):
        ET.SubElement(lines, "line", x1="0", y1=str(x * c), x2=str(g.cols * c), y2=str(x * c))
    for y in range(g.cols + 1):
        ET.SubElement(lines, "line", x1=str(y * c), y1="0", x2=str(y * c), y2=str(g.rows * c))
    if opts.partition:
        k = opts.partition
        heavy = ET.SubElement(svg, "g", {"class": "partition", "stroke": "#888", "stroke-width": "2"})
        for x in range(0, g.rows + 1, k):
            ET.SubElement(heavy, "line", x1="0", y1=str(x * c), x2=str(g.cols * c), y2=str(x * c))
        for y in range(0, g.cols + 1, k):
            ET.SubElement(heavy, "line", x1=str(y * c), y1="0", x2=str(y * c), y2=str(g.rows * c))
    obs = ET.SubElement(svg, "g", {"class": "obstacles", "fill": "#333"})
    for x, y in sorted(g.obstacles):
        ET.SubElement(obs, "rect", x=str((y - 1) * c), y=str((x - 1) * c), width=str(c), height=str(c))
    if opts.show_goals:
        goals = ET.SubElement(svg, "g", {"class": "goals", "fill": "none", "stroke-width": "1.5"})
        for rid, p in sorted(instance.goals.items()):
            cx, cy = center(p, c)
            h = c * 0.3
            ET.SubElement(goals, "rect", x=_fmt(cx - h), y=_fmt(cy - h), width=_fmt(2 * h), height=_fmt(2 * h),
                          stroke=_color(rid))
    return svg


def _glyph(parent: ET.Element, rid: int, p: Pos, cell: int) -> ET.Element:
    cx, cy = center(p, cell)
    return ET.SubElement(parent, "circle", {"class": "robot", "data-id": str(rid), "cx": _fmt(cx), "cy": _fmt(cy),
                                            "r": _fmt(cell * 0.35), "fill": _color(rid)})


def _text(svg: ET.Element) -> str:
    return ET.tostring(svg, encoding="unicode")


def render_svg(plan: Plan, instance: Instance, options: Optional[RenderOptions] = None) -> str:
    """Animated SVG; a plan with no moves yields a single static frame."""
    opts = options or RenderOptions()
    svg = _canvas(instance, opts)
    robots = ET.SubElement(svg, "g", {"class": "robots"})
    T = plan.horizon
    dur = f"{_fmt(max(T, 1) * opts.step_seconds)}s"
    for rid in sorted(plan.paths):
        path = plan.paths[rid]
        glyph = _glyph(robots, rid, path[0], opts.cell)
        if T == 0:
            continue
        pts = [center(p, opts.cell) for p in path]
        for attr, k in (("cx", 0), ("cy", 1)):
            ET.SubElement(glyph, "animate", attributeName=attr, dur=dur, fill="freeze",
                          values=";".join(_fmt(q[k]) for q in pts))
    return _text(svg)


def render_frames(plan: Plan, instance: Instance, options: Optional[RenderOptions] = None) -> List[str]:
    """One static SVG per time step ``0..horizon``."""
    opts = options or RenderOptions()
    frames = []
    for t in range(plan.horizon + 1):
        svg = _canvas(instance, opts)
        svg.set("data-time", str(t))
        robots = ET.SubElement(svg, "g", {"class": "robots"})
        for rid in sorted(plan.paths):
            _glyph(robots, rid, plan.paths[rid][t], opts.cell)
        frames.append(_text(svg))
    return frames


def glyph_positions(svg_text: str, final: bool = True) -> dict:
    """Read robot cells back from rendered SVG (last animation value if ``final``)."""
    root = ET.fromstring(svg_text)
    out = {}
    for el in root.iter():
        if not el.tag.endswith("circle") or el.get("class") != "robot":
            continue
        size = float(el.get("r")) / 0.35
        xy = {"cx": float(el.get("cx")), "cy": float(el.get("cy"))}
        if final:
            for anim in el:
                if anim.tag.endswith("animate"):
                    xy[anim.get("attributeName")] = float(anim.get("values").split(";")[-1])
        out[int(el.get("data-id"))] = (round(xy["cy"] / size + 0.5), round(xy["cx"] / size + 0.5))
    return out
