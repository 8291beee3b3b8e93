"""Render canonical drawings to image files with matplotlib."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import FancyArrowPatch

from .construct import Layout
from .core import InOutGraph


def render_layout(g: InOutGraph, lay: Layout, path=None):
    """Draw the graph at its layout coordinates; returns the figure.

    Undirected pairs are drawn as plain lines, one-way arcs as arrows.
    Incoming/outgoing vertices are highlighted and labelled with their
    i/o indices; an optional Hamiltonian path is overlaid.
    """
    pos = lay.coords
    fig, ax = plt.subplots(figsize=(max(4.0, 0.55 * len(pos)), 4.5))
    arcs = g.graph.arcs
    for u, w in g.graph.drawn_segments():
        (x1, y1), (x2, y2) = pos[u], pos[w]
        if (w, u) in arcs and (u, w) in arcs:
            ax.plot([x1, x2], [y1, y2], color="0.25", lw=1.8, zorder=1)
        else:
            tail, head = ((u, w) if (u, w) in arcs else (w, u))
            arrow = FancyArrowPatch(
                pos[tail], pos[head], arrowstyle="-|>", mutation_scale=13,
                color="0.25", lw=1.4, shrinkA=9, shrinkB=9, zorder=1)
            ax.add_patch(arrow)
    if path is not None:
        xs = [pos[v][0] for v in path]
        ys = [pos[v][1] for v in path]
        ax.plot(xs, ys, color="tab:orange", lw=3.2, alpha=0.45, zorder=0)
    roles: dict[int, list[str]] = {}
    for j, v in enumerate(g.incoming, start=1):
        roles.setdefault(v, []).append(f"i{j}")
    for j, v in enumerate(g.outgoing, start=1):
        roles.setdefault(v, []).append(f"o{j}")
    for v, (x, y) in pos.items():
        labelled = v in roles
        ax.scatter([x], [y], s=260 if labelled else 180,
                   color="tab:blue" if labelled else "white",
                   edgecolors="black", zorder=2)
        ax.annotate(str(v), (x, y), ha="center", va="center",
                    color="white" if labelled else "black", fontsize=8,
                    zorder=3)
        if labelled:
            ax.annotate(",".join(roles[v]), (x, y), xytext=(0, 11),
                        textcoords="offset points", ha="center", fontsize=7,
                        color="tab:blue", zorder=3)
    ax.set_title(f"k={g.k}, order {g.graph.order}, "
                 f"{g.graph.arc_count} arcs, {lay.crossings} crossing(s)")
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    return fig


def save_layout(g: InOutGraph, lay: Layout, out_path: str, path=None) -> None:
    fig = render_layout(g, lay, path=path)
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
