"""Static three-view orthographic rendering of a packing."""

from xml.sax.saxutils import escape

from .geometry import orient

_VIEWS = (("top (x-y)", 0, 1), ("front (x-z)", 0, 2), ("side (y-z)", 1, 2))


def _color(item_id):
    h = (item_id * 2654435761) % 360
    return f"hsl({h},65%,55%)"


def render_svg(instance, sol, containers=(), size=240, margin=20):
    """SVG text with the top, front and side projections next to each other.

    Items are drawn back to front so nearer faces stay visible; containers
    are dashed outlines.
    """
    side = instance.side
    scale = size / side
    lookup = instance.by_id()
    boxes = []
    for pl in sol.placements:
        dims = orient(lookup[pl.item_id], pl.orient)
        boxes.append((pl.item_id, (pl.x, pl.y, pl.z), dims))
    width = 3 * size + 4 * margin
    height = size + 2 * margin + 16
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">']
    for v, (title, a, b) in enumerate(_VIEWS):
        ox = margin + v * (size + margin)
        oy = margin + 12
        out.append(f'<text x="{ox}" y="{oy - 4}">{escape(title)}</text>')
        out.append(f'<rect x="{ox}" y="{oy}" width="{size}" height="{size}" fill="none" stroke="black"/>')
        depth = 3 - a - b
        # Draw far items first; the depth axis points away from the viewer.
        for item_id, lo, dims in sorted(boxes, key=lambda t: (-t[1][depth], t[0])):
            x = ox + lo[a] * scale
            y = oy + size - (lo[b] + dims[b]) * scale
            out.append(f'<rect x="{x:.3f}" y="{y:.3f}" width="{dims[a] * scale:.3f}" '
                       f'height="{dims[b] * scale:.3f}" fill="{_color(item_id)}" fill-opacity="0.6" '
                       f'stroke="black" stroke-width="0.5"><title>item {item_id}</title></rect>')
        for c in containers:
            x = ox + c.origin[a] * scale
            y = oy + size - (c.origin[b] + c.dims[b]) * scale
            out.append(f'<rect x="{x:.3f}" y="{y:.3f}" width="{c.dims[a] * scale:.3f}" '
                       f'height="{c.dims[b] * scale:.3f}" fill="none" stroke="#333" '
                       f'stroke-dasharray="4 2"><title>{escape(c.label())}</title></rect>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
