from html import escape
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from pdcsim.output.csv_writer import SweepResult

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]


class SvgCanvas:
    def __init__(self):
        self.svg = ""

    def header(self, width: int, height: int):
        self.svg += f"""<?xml version="1.0" standalone="no"?>
<svg version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" xmlns="http://www.w3.org/2000/svg">
<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>
"""

    def line(self, x1: float, y1: float, x2: float, y2: float, stroke: str = "black", extra: str = ""):
        self.svg += f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="{stroke}" {extra}/>\n'

    def polyline(self, points: Sequence[tuple], stroke: str, title: str = ""):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        self.svg += f'<polyline points="{coords}" fill="none" stroke="{stroke}" stroke-width="1.5">'
        if title:
            self.svg += f"<title>{escape(title)}</title>"
        self.svg += "</polyline>\n"

    def text(self, x: float, y: float, string: str, extra: str = ""):
        self.svg += f'<text x="{x:.1f}" y="{y:.1f}" font-family="sans-serif" font-size="12" {extra}>{escape(string)}</text>\n'

    def get_svg(self) -> str:
        return f"{self.svg}</svg>\n"


def _span(values: List[float]) -> tuple:
    low, high = min(values), max(values)
    if high == low:
        pad = abs(high) * 0.05 or 1.0
        return low - pad, high + pad
    return low, high


def render_line_chart(result: SweepResult, x_column: str, y_columns: Optional[List[str]] = None,
                      width: int = 640, height: int = 400, title: str = "") -> str:
    """Standalone SVG line chart with one polyline per y column."""
    if y_columns is None:
        y_columns = [name for name in result.numeric_columns() if name != x_column]
    if not y_columns:
        raise ValueError("no numeric series to plot")

    xs = [float(v) for v in result.column(x_column)]
    series: Dict[str, List[float]] = {name: [float(v) for v in result.column(name)] for name in y_columns}
    margin_left, margin_right, margin_top, margin_bottom = 70, 150, 30, 50
    plot_w = width - margin_left - margin_right
    plot_h = height - margin_top - margin_bottom

    x_low, x_high = _span(xs)
    y_low, y_high = _span([v for values in series.values() for v in values])

    def to_px(x: float, y: float) -> tuple:
        px = margin_left + (x - x_low) / (x_high - x_low) * plot_w
        py = margin_top + (1.0 - (y - y_low) / (y_high - y_low)) * plot_h
        return px, py

    canvas = SvgCanvas()
    canvas.header(width, height)
    if title:
        canvas.text(margin_left, 18, title, 'font-weight="bold"')

    bottom = margin_top + plot_h
    canvas.line(margin_left, bottom, margin_left + plot_w, bottom)
    canvas.line(margin_left, margin_top, margin_left, bottom)
    for fraction in (0.0, 0.5, 1.0):
        x_value = x_low + fraction * (x_high - x_low)
        y_value = y_low + fraction * (y_high - y_low)
        px, _ = to_px(x_value, y_low)
        _, py = to_px(x_low, y_value)
        canvas.line(px, bottom, px, bottom + 5)
        canvas.text(px, bottom + 18, f"{x_value:.4g}", 'text-anchor="middle"')
        canvas.line(margin_left - 5, py, margin_left, py)
        canvas.text(margin_left - 8, py + 4, f"{y_value:.4g}", 'text-anchor="end"')

    canvas.text(margin_left + plot_w / 2, height - 10, x_column, 'text-anchor="middle"')
    canvas.text(16, margin_top + plot_h / 2, ", ".join(y_columns),
                f'text-anchor="middle" transform="rotate(-90 16 {margin_top + plot_h / 2:.1f})"')

    for i, (name, values) in enumerate(series.items()):
        colour = PALETTE[i % len(PALETTE)]
        canvas.polyline([to_px(x, y) for x, y in zip(xs, values)], colour, name)
        legend_y = margin_top + 16 * i + 8
        canvas.line(width - margin_right + 10, legend_y, width - margin_right + 30, legend_y, colour)
        canvas.text(width - margin_right + 35, legend_y + 4, name)

    return canvas.get_svg()


def write_svg(result: SweepResult, path: Union[str, Path], x_column: str,
              y_columns: Optional[List[str]] = None, title: str = "") -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(render_line_chart(result, x_column, y_columns, title=title), encoding="utf-8")
    return target
