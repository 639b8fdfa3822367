"""Plain SVG 1.1 drawings of domains, cells, paths and marked points."""

from __future__ import annotations

from typing import Iterable, Sequence
from xml.sax.saxutils import escape

from .geometry import Point, PolygonalDomain

PALETTE = ["#cfe3f5", "#f8e0c0", "#d8efd0", "#efd3ef", "#f3f0c4", "#d7d7f0"]


class Drawing:
    """Accumulates shapes in domain coordinates and writes them with y pointing up."""

    def __init__(self, dom: PolygonalDomain, size: int = 640, margin: int = 12):
        x0, y0, x1, y1 = (float(v) for v in dom.bbox())
        span = max(x1 - x0, y1 - y0) or 1.0
        self.scale = (size - 2 * margin) / span
        self.x0, self.y1 = x0, y1
        self.margin = margin
        self.width = round((x1 - x0) * self.scale) + 2 * margin
        self.height = round((y1 - y0) * self.scale) + 2 * margin
        self.items: list[str] = []
        self.dom = dom

    def _xy(self, p: Point) -> tuple[float, float]:
        return (
            round((float(p.x) - self.x0) * self.scale + self.margin, 3),
            round((self.y1 - float(p.y)) * self.scale + self.margin, 3),
        )

    def _pts(self, ring: Sequence[Point]) -> str:
        return " ".join(f"{x},{y}" for x, y in map(self._xy, ring))

    def polygon(self, ring: Sequence[Point], fill: str = "none", stroke: str = "#333", width: float = 1.0) -> None:
        self.items.append(
            f'<polygon points="{self._pts(ring)}" fill="{fill}" stroke="{stroke}" stroke-width="{width}"/>'
        )

    def polyline(self, path: Sequence[Point], stroke: str = "#c0392b", width: float = 2.0) -> None:
        self.items.append(
            f'<polyline points="{self._pts(path)}" fill="none" stroke="{stroke}" stroke-width="{width}"/>'
        )

    def point(self, p: Point, color: str = "#c0392b", r: float = 4.0, label: str = "") -> None:
        x, y = self._xy(p)
        self.items.append(f'<circle cx="{x}" cy="{y}" r="{r}" fill="{color}"/>')
        if label:
            self.items.append(f'<text x="{x + 6}" y="{y - 6}" font-size="12">{escape(label)}</text>')

    def domain(self) -> None:
        self.polygon(self.dom.outer, fill="#ffffff", stroke="#000", width=1.5)
        for hole in self.dom.holes:
            self.polygon(hole, fill="#999999", stroke="#000", width=1.5)

    def cells(self, rings: Iterable[Sequence[Point]]) -> None:
        for i, ring in enumerate(rings):
            self.polygon(ring, fill=PALETTE[i % len(PALETTE)], stroke="#777", width=0.5)

    def render(self, title: str = "") -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" height="{self.height}">\n'
        )
        if title:
            head += f"<title>{escape(title)}</title>\n"
        return head + "\n".join(self.items) + "\n</svg>\n"


def draw(
    dom: PolygonalDomain,
    cells: Iterable[Sequence[Point]] = (),
    paths: Iterable[Sequence[Point]] = (),
    points: Iterable[tuple[Point, str]] = (),
    title: str = "",
) -> str:
    """Domain, then cells on top, then the holes again so they stay visible."""
    d = Drawing(dom)
    d.domain()
    d.cells(cells)
    for hole in dom.holes:
        d.polygon(hole, fill="#999999", stroke="#000", width=1.5)
    for path in paths:
        d.polyline(path)
    for p, label in points:
        d.point(p, label=label)
    return d.render(title)

