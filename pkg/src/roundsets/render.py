"""Deterministic figure output: a tiny SVG subset and a lossless CSV form.

The SVG writer emits only ``svg``, ``g`` and ``rect`` elements, one rect per
filled cell, with the viewBox equal to the raster bounding box; identical
grids and styles therefore produce byte-identical files, and structural
assertions (rect count == filled count) stay trivial. The CSV form stores
the grid header and one digit per cell (0 empty, 1 filled, 2 tolerance
band) and round-trips exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import ParseError, ShapeError
from .oracle import RasterGrid

_HEX_RE = re.compile(r"^#?([0-9a-fA-F]{6})$")


@dataclass(frozen=True)
class RenderStyle:
    """Per-layer appearance: fill color, opacity, pixel scale, legend flag."""

    fill: str = "#1f77b4"
    opacity: float = 1.0
    cell_px: float = 4.0
    legend: bool = False

    def __post_init__(self):
        m = _HEX_RE.match(self.fill)
        if not m:
            raise ShapeError(f"fill must be a 6-hex-digit RGB color, got {self.fill!r}")
        object.__setattr__(self, "fill", "#" + m.group(1).lower())
        if not (0.0 <= self.opacity <= 1.0):
            raise ShapeError(f"opacity {self.opacity} outside [0, 1]")
        if not self.cell_px > 0:
            raise ShapeError("cell_px must be positive")


LayerSpec = Union[RasterGrid, Tuple[RasterGrid, RenderStyle]]


def _fmt(v: float) -> str:
    # repr keeps the shortest round-trip form, so output is reproducible
    return repr(float(v))


def render_svg(layers: Sequence[LayerSpec]) -> bytes:
    """Render raster layers (back to front) into an SVG byte string."""
    if not layers:
        raise ShapeError("nothing to render")
    normalized = []
    for layer in layers:
        if isinstance(layer, RasterGrid):
            normalized.append((layer, RenderStyle()))
        else:
            grid, style = layer
            if not isinstance(grid, RasterGrid) or not isinstance(style, RenderStyle):
                raise ShapeError("layers must be RasterGrid or (RasterGrid, RenderStyle)")
            normalized.append((grid, style))
    first = normalized[0][0]
    for grid, _ in normalized[1:]:
        if grid.bbox != first.bbox or grid.nx != first.nx or grid.ny != first.ny:
            raise ShapeError("all layers must share one grid")
    xmin, xmax, ymin, ymax = first.bbox
    w, h = xmax - xmin, ymax - ymin
    dx, dy = w / first.nx, h / first.ny
    px_w = _fmt(first.nx * normalized[0][1].cell_px)
    px_h = _fmt(first.ny * normalized[0][1].cell_px)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(xmin)} {_fmt(ymin)} {_fmt(w)} {_fmt(h)}" '
        f'width="{px_w}" height="{px_h}">',
        # flip once so rows grow upward like the raster's y axis
        f'<g transform="translate(0,{_fmt(ymin + ymax)}) scale(1,-1)">',
    ]
    for grid, style in normalized:
        out.append(f'<g fill="{style.fill}" fill-opacity="{_fmt(style.opacity)}">')
        rows, cols = np.nonzero(grid.bits)
        for i, j in zip(rows.tolist(), cols.tolist()):
            x = xmin + j * dx
            y = ymin + i * dy
            out.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(dx)}" height="{_fmt(dy)}"/>'
            )
        out.append("</g>")
    if any(style.legend for _, style in normalized):
        out.append('<g stroke="none">')
        side = 0.03 * min(w, h)
        for k, (_, style) in enumerate(normalized):
            lx = xmin + 0.02 * w
            ly = ymax - (k + 1) * 1.5 * side
            out.append(
                f'<g fill="{style.fill}"><rect x="{_fmt(lx)}" y="{_fmt(ly)}" '
                f'width="{_fmt(side)}" height="{_fmt(side)}"/></g>'
            )
        out.append("</g>")
    out.append("</g>")
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def export_csv(grid: RasterGrid) -> bytes:
    """Serialize a raster: header line, then ny rows of nx digits.

    Header: ``xmin,xmax,ymin,ymax,nx,ny``. Cell codes: 0 empty, 1 filled,
    2 tolerance band (undecided). Row 0 is the ymin edge.
    """
    if not isinstance(grid, RasterGrid):
        raise ShapeError(f"expected a RasterGrid, got {type(grid).__name__}")
    xmin, xmax, ymin, ymax = grid.bbox
    lines = [f"{_fmt(xmin)},{_fmt(xmax)},{_fmt(ymin)},{_fmt(ymax)},{grid.nx},{grid.ny}"]
    codes = grid.bits.astype(np.int8) + 2 * grid.band.astype(np.int8)
    for i in range(grid.ny):
        lines.append(",".join(str(int(v)) for v in codes[i]))
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_csv(data: Union[bytes, str]) -> RasterGrid:
    """Inverse of :func:`export_csv`; raises ParseError on malformed input."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as err:
            raise ParseError(f"CSV is not UTF-8: {err}") from err
    lines = [ln for ln in data.split("\n") if ln != ""]
    if not lines:
        raise ParseError("empty CSV")
    head = lines[0].split(",")
    if len(head) != 6:
        raise ParseError(f"header needs 6 fields, got {len(head)}")
    try:
        xmin, xmax, ymin, ymax = (float(v) for v in head[:4])
        nx, ny = int(head[4]), int(head[5])
    except ValueError as err:
        raise ParseError(f"bad header: {err}") from err
    if len(lines) - 1 != ny:
        raise ParseError(f"expected {ny} rows, got {len(lines) - 1}")
    bits = np.zeros((ny, nx), dtype=bool)
    band = np.zeros((ny, nx), dtype=bool)
    for i, ln in enumerate(lines[1:]):
        vals = ln.split(",")
        if len(vals) != nx:
            raise ParseError(f"row {i} has {len(vals)} cells, expected {nx}")
        for j, v in enumerate(vals):
            if v == "0":
                continue
            if v == "1":
                bits[i, j] = True
            elif v == "2":
                band[i, j] = True
            else:
                raise ParseError(f"cell ({i},{j}) holds {v!r}, expected 0, 1 or 2")
    return RasterGrid((xmin, xmax, ymin, ymax), nx, ny, bits, band)
