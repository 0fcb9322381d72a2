"""DOT, TikZ and SVG diagrams of a construction with its weight labels.

Layout is a fixed grid: node ``(i, j)`` sits at ``x = j``, ``y = -i``.
Each node shows its three weights in the order red (m=0), green (m=2),
blue (m=1). Each edge is stroked in the color(s) the coloring rule assigns.
"""

from __future__ import annotations

from collections.abc import Mapping
from xml.sax.saxutils import escape

from .coloring import ColoringRule, Rule, rule_name
from .construct import EdgeKey, Graph, construct, weights
from .model import DISPLAY_ORDER, Color, Node, VariantConfig, WeightTriple, check_dim
from .verify import color_classes

FORMATS = ("dot", "tikz", "svg")

# Stroke for an edge the rule leaves uncolored (possible under shared-support).
NO_COLOR = "gray"

SVG_UNIT = 90
SVG_MARGIN = 60


def layout(vertices) -> dict[Node, tuple[int, int]]:
    return {n: (n.j, -n.i) for n in vertices}


def edge_colors(graph: Graph, rule: Rule, table: Mapping[Node, WeightTriple]) -> dict[EdgeKey, list[Color]]:
    """Colors per edge, taken from the verifier's color classes."""
    classes = color_classes(graph, rule, table)
    out: dict[EdgeKey, list[Color]] = {e.endpoints: [] for e in graph.edges}
    for c in DISPLAY_ORDER:
        for key in classes[c]:
            out[key].append(c)
    return out


def _title(graph: Graph, rule: Rule) -> str:
    return f"d={graph.d} variant={graph.variant.label} rule={rule_name(rule)}"


def _dot_id(n: Node) -> str:
    return f'"{n.i},{n.j}"'


def to_dot(graph: Graph, table: Mapping[Node, WeightTriple], rule: Rule) -> str:
    colors = edge_colors(graph, rule, table)
    lines = [
        f'graph "pathforest_d{graph.d}" {{',
        f'  label="{_title(graph, rule)}";',
        "  node [shape=box, style=rounded, fontname=Helvetica];",
    ]
    for n, (x, y) in layout(graph.vertices).items():
        w = table[n]
        parts = " ".join(f'<FONT COLOR="{c.display}">{w[c]}</FONT>' for c in DISPLAY_ORDER)
        lines.append(f'  {_dot_id(n)} [pos="{x},{y}!", label=<{parts}>];')
    for (a, b), cs in colors.items():
        if cs:
            attrs = f'color="{":".join(c.display for c in cs)}"'
        else:
            attrs = f'color="{NO_COLOR}", style=dashed'
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _tikz_id(n: Node) -> str:
    return f"n{n.i}-{n.j}"


def to_tikz(graph: Graph, table: Mapping[Node, WeightTriple], rule: Rule) -> str:
    colors = edge_colors(graph, rule, table)
    lines = [
        f"% pathforest {_title(graph, rule)}",
        "% requires \\usepackage{tikz} and \\usepackage{xcolor}",
        "\\begin{tikzpicture}[x=1.8cm, y=1.1cm,",
        "  vertex/.style={draw, rounded corners, inner sep=2pt, font=\\scriptsize}]",
    ]
    for n, (x, y) in layout(graph.vertices).items():
        w = table[n]
        label = "\\,".join(f"\\textcolor{{{c.display}}}{{{w[c]}}}" for c in DISPLAY_ORDER)
        lines.append(f"  \\node[vertex] ({_tikz_id(n)}) at ({x},{y}) {{{label}}};")
    for (a, b), cs in colors.items():
        if cs:
            # Multi-colored edges are stroked in the first color; the rest go in the comment.
            style = cs[0].display
            note = f" % {','.join(c.display for c in cs)}" if len(cs) > 1 else ""
        else:
            style, note = f"{NO_COLOR}, dashed", ""
        lines.append(f"  \\draw[{style}] ({_tikz_id(a)}) -- ({_tikz_id(b)});{note}")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines) + "\n"


def to_svg(graph: Graph, table: Mapping[Node, WeightTriple], rule: Rule) -> str:
    colors = edge_colors(graph, rule, table)
    d = graph.d

    def px(n: Node) -> tuple[int, int]:
        return SVG_MARGIN + (n.j - 1) * SVG_UNIT, SVG_MARGIN + (n.i - 1) * SVG_UNIT

    size = 2 * SVG_MARGIN + (d - 1) * SVG_UNIT
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}" font-family="Helvetica, Arial, sans-serif" font-size="11">',
        f"<title>{escape(_title(graph, rule))}</title>",
        '<g id="edges" stroke-width="2">',
    ]
    for (a, b), cs in colors.items():
        (x1, y1), (x2, y2) = px(a), px(b)
        if cs:
            stroke = cs[0].display
            extra = ""
        else:
            stroke = NO_COLOR
            extra = ' stroke-dasharray="4 3"'
        names = ",".join(c.display for c in cs)
        lines.append(
            f'<line class="edge" data-from="{a.i},{a.j}" data-to="{b.i},{b.j}" data-colors="{names}" '
            f'x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}"{extra}/>'
        )
    lines.append("</g>")
    lines.append('<g id="nodes">')
    for n in graph.vertices:
        x, y = px(n)
        w = table[n]
        spans = " ".join(f'<tspan fill="{c.display}">{w[c]}</tspan>' for c in DISPLAY_ORDER)
        lines.append(
            f'<g class="node" id="n{n.i}-{n.j}">'
            f'<rect x="{x - 40}" y="{y - 10}" width="80" height="20" rx="5" '
            f'fill="white" stroke="black"/>'
            f'<text x="{x}" y="{y + 4}" text-anchor="middle">{spans}</text></g>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


_WRITERS = {"dot": to_dot, "tikz": to_tikz, "svg": to_svg}


def render_graph(
    graph: Graph, table: Mapping[Node, WeightTriple], rule: Rule, fmt: str
) -> str:
    try:
        writer = _WRITERS[fmt]
    except KeyError:
        raise ValueError(f"unsupported format {fmt!r}; choose from {', '.join(FORMATS)}") from None
    return writer(graph, table, rule)


def emit_figure(
    d: int,
    variant: VariantConfig,
    rule: Rule = ColoringRule.TARGET_DIFF,
    fmt: str = "dot",
) -> str:
    """Diagram of the construction for ``(d, variant)`` as DOT, TikZ or SVG text."""
    if fmt not in _WRITERS:
        raise ValueError(f"unsupported format {fmt!r}; choose from {', '.join(FORMATS)}")
    graph, _ = construct(d, variant)
    return render_graph(graph, weights(d, variant), rule, fmt)


def diagonal_label_audit(d: int, variant: VariantConfig) -> list[tuple[Node, int, int]]:
    """``(node, green, blue)`` for every diagonal vertex, as rendered.

    Base-formula diagonal nodes read green 3, blue 0; overridden nodes show
    their redefined values.
    """
    check_dim(d)
    table = weights(d, variant)
    return [
        (n, table[n][Color.GREEN], table[n][Color.BLUE])
        for n in sorted(table)
        if n.i == n.j
    ]
