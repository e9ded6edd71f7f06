import math
from collections.abc import Sequence
from dataclasses import dataclass
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 150, 40, 55
PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#ff7f0e', '#9467bd', '#8c564b', '#e377c2', '#7f7f7f']


@dataclass(frozen=True)
class Series:
	label: str
	xs: Sequence[float]
	ys: Sequence[float]


def _ticks(low: float, high: float, count: int = 5) -> list[float]:
	if high <= low:
		return [low]
	step = (high - low) / (count - 1)
	return [low + i * step for i in range(count)]


def _format(value: float) -> str:
	return f'{value:g}' if abs(value) >= 1e-3 or value == 0 else f'{value:.1e}'


def line_plot_svg(
	series: Sequence[Series],
	title: str,
	x_label: str,
	y_label: str,
	log_x: bool = False,
	y_range: tuple[float, float] | None = None,
) -> str:
	"""Render polylines with axes and a legend as a standalone SVG 1.1 document."""
	points = [(x, y) for s in series for x, y in zip(s.xs, s.ys)]
	transform_x = (lambda v: math.log2(v)) if log_x else float
	xs = [transform_x(x) for x, _ in points] or [0.0, 1.0]
	ys = [y for _, y in points] or [0.0, 1.0]
	x_min, x_max = min(xs), max(xs)
	if x_max == x_min:
		x_min, x_max = x_min - 0.5, x_max + 0.5
	y_min, y_max = y_range if y_range is not None else (min(ys), max(ys))
	if y_max == y_min:
		y_min, y_max = y_min - 0.5, y_max + 0.5

	plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
	plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

	def sx(value: float) -> float:
		return MARGIN_LEFT + (transform_x(value) - x_min) / (x_max - x_min) * plot_w

	def sy(value: float) -> float:
		return MARGIN_TOP + (1.0 - (value - y_min) / (y_max - y_min)) * plot_h

	parts = [
		'<?xml version="1.0" encoding="UTF-8"?>',
		f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
		f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
		f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
		f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
		f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>',
	]

	x_tick_values = sorted({x for x, _ in points}) if log_x else _ticks(x_min, x_max)
	for value in x_tick_values:
		x = sx(value)
		parts.append(f'<line x1="{x:.1f}" y1="{MARGIN_TOP + plot_h}" x2="{x:.1f}" y2="{MARGIN_TOP + plot_h + 5}" stroke="black"/>')
		parts.append(f'<text x="{x:.1f}" y="{MARGIN_TOP + plot_h + 18}" text-anchor="middle">{_format(value)}</text>')
	for value in _ticks(y_min, y_max):
		y = sy(value)
		parts.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{y:.1f}" x2="{MARGIN_LEFT}" y2="{y:.1f}" stroke="black"/>')
		parts.append(f'<line x1="{MARGIN_LEFT}" y1="{y:.1f}" x2="{MARGIN_LEFT + plot_w}" y2="{y:.1f}" stroke="#dddddd"/>')
		parts.append(f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.1f}" text-anchor="end">{_format(value)}</text>')

	parts.append(f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(x_label)}</text>')
	parts.append(
		f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
		f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.1f})">{escape(y_label)}</text>'
	)

	for index, s in enumerate(series):
		color = PALETTE[index % len(PALETTE)]
		coords = ' '.join(f'{sx(x):.2f},{sy(y):.2f}' for x, y in zip(s.xs, s.ys))
		if coords:
			parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
			for x, y in zip(s.xs, s.ys):
				parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="{color}"/>')
		legend_y = MARGIN_TOP + 14 + index * 18
		legend_x = MARGIN_LEFT + plot_w + 12
		parts.append(f'<line x1="{legend_x}" y1="{legend_y - 4}" x2="{legend_x + 20}" y2="{legend_y - 4}" stroke="{color}" stroke-width="2"/>')
		parts.append(f'<text x="{legend_x + 26}" y="{legend_y}">{escape(s.label)}</text>')

	parts.append('</svg>')
	return '\n'.join(parts) + '\n'
