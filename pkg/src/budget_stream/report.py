"""Budget-vs-AUC report rendering.

Emits a self-contained SVG line chart (one polyline per policy, shared axes,
legend) and a markdown summary table. The SVG is built directly so the output
is deterministic and trivially inspectable.
"""

from __future__ import annotations

from .harness import AggregateRow

PALETTE = [
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#17becf",
    "#bcbd22",
]

WIDTH, HEIGHT = 760, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 180, 30, 55


def _series(aggregates: list[AggregateRow]) -> dict[str, list[tuple[float, float]]]:
    series: dict[str, list[tuple[float, float]]] = {}
    for row in aggregates:
        series.setdefault(row.policy, []).append((row.alpha, row.mean_auc))
    for points in series.values():
        points.sort()
    return series


def render_svg(aggregates: list[AggregateRow]) -> str:
    if not aggregates:
        raise ValueError("no aggregate rows to plot")
    series = _series(aggregates)
    xs = [row.alpha for row in aggregates]
    ys = [row.mean_auc for row in aggregates]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.05, x_hi + 0.05
    pad = max((y_hi - y_lo) * 0.08, 0.01)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x: float) -> float:
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        # axes
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" '
        f'y2="{HEIGHT - MARGIN_BOTTOM}" stroke="black"/>',
        f'<line x1="{MARGIN_LEFT}" y1="{HEIGHT - MARGIN_BOTTOM}" '
        f'x2="{WIDTH - MARGIN_RIGHT}" y2="{HEIGHT - MARGIN_BOTTOM}" stroke="black"/>',
    ]

    for alpha in sorted({row.alpha for row in aggregates}):
        x = px(alpha)
        parts.append(
            f'<line x1="{x:.2f}" y1="{HEIGHT - MARGIN_BOTTOM}" x2="{x:.2f}" '
            f'y2="{HEIGHT - MARGIN_BOTTOM + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{HEIGHT - MARGIN_BOTTOM + 18}" '
            f'text-anchor="middle">{alpha:g}</text>'
        )
    for i in range(6):
        y_val = y_lo + (y_hi - y_lo) * i / 5
        y = py(y_val)
        parts.append(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{y:.2f}" x2="{MARGIN_LEFT}" '
            f'y2="{y:.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.2f}" '
            f'text-anchor="end">{y_val:.3f}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2:.2f}" y="{HEIGHT - 12}" '
        f'text-anchor="middle">budget fraction</text>'
    )
    parts.append(
        f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.2f})">mean AUC</text>'
    )

    for i, (policy, points) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in points)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        for x, y in points:
            parts.append(
                f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.5" fill="{color}"/>'
            )
        legend_y = MARGIN_TOP + 16 + i * 20
        legend_x = WIDTH - MARGIN_RIGHT + 14
        parts.append(
            f'<line x1="{legend_x}" y1="{legend_y - 4}" x2="{legend_x + 22}" '
            f'y2="{legend_y - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{legend_x + 28}" y="{legend_y}">{policy}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def markdown_table(aggregates: list[AggregateRow]) -> str:
    """Mean AUC (std in parentheses) per policy and budget fraction."""
    if not aggregates:
        raise ValueError("no aggregate rows to tabulate")
    series = _series(aggregates)
    alphas = sorted({row.alpha for row in aggregates})
    by_key = {(row.policy, row.alpha): row for row in aggregates}
    lines = [
        "| policy | " + " | ".join(f"a={a:g}" for a in alphas) + " |",
        "| --- | " + " | ".join("---" for _ in alphas) + " |",
    ]
    for policy in series:
        cells = []
        for alpha in alphas:
            row = by_key.get((policy, alpha))
            cells.append(f"{row.mean_auc:.4f} ({row.std_auc:.4f})" if row else "-")
        lines.append(f"| {policy} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def write_report(aggregates: list[AggregateRow], svg_path, markdown_path=None) -> None:
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(aggregates))
    if markdown_path is not None:
        with open(markdown_path, "w", encoding="utf-8") as fh:
            fh.write(markdown_table(aggregates))
