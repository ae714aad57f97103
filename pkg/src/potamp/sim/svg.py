"""Debug SVG snapshots of an environment with optional particle overlay."""
from __future__ import annotations

from ..belief import HierarchicalBelief
from ..world import EnvironmentSpec

_SCALE = 60.0


def _rect(rect, fill, opacity=1.0, stroke="none"):
    return (
        f'<rect x="{rect.x0 * _SCALE:.1f}" y="{rect.y0 * _SCALE:.1f}" '
        f'width="{rect.width * _SCALE:.1f}" height="{rect.height * _SCALE:.1f}" '
        f'fill="{fill}" fill-opacity="{opacity}" stroke="{stroke}"/>'
    )


def render_environment(env: EnvironmentSpec, belief: HierarchicalBelief | None = None) -> str:
    width = max(r.rect.x1 for r in env.rooms) * _SCALE
    height = max(r.rect.y1 for r in env.rooms) * _SCALE
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="#fafafa"/>',
    ]
    for room in env.rooms:
        parts.append(_rect(room.rect, "none", stroke="#333"))
        parts.append(
            f'<text x="{(room.rect.x0 + 0.15) * _SCALE:.1f}" '
            f'y="{(room.rect.y0 + 0.35) * _SCALE:.1f}" font-size="13">{room.label}</text>'
        )
    for surf in env.surfaces:
        parts.append(_rect(surf.rect, "#7aa7e0", 0.8, stroke="#446"))
        parts.append(
            f'<text x="{surf.rect.x0 * _SCALE:.1f}" '
            f'y="{(surf.rect.y0 - 0.08) * _SCALE:.1f}" font-size="10">{surf.label}</text>'
        )
    for occ in env.occluders:
        parts.append(_rect(occ.rect, "#e6c34a", 0.9, stroke="#863"))
    for obj in env.objects:
        x, y = obj.pose[0] * _SCALE, obj.pose[1] * _SCALE
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="4" fill="#777"/>')
        parts.append(
            f'<text x="{x + 5:.1f}" y="{y - 3:.1f}" font-size="9">{obj.label}</text>'
        )
    if belief is not None:
        for s in range(belief.num_surfaces):
            for (x, y, _), w in zip(belief.particles[s], belief.weights[s]):
                r = 1.0 + 200.0 * w
                parts.append(
                    f'<circle cx="{x * _SCALE:.1f}" cy="{y * _SCALE:.1f}" '
                    f'r="{r:.1f}" fill="#d04040" fill-opacity="0.45"/>'
                )
    for node in env.nav_nodes:
        parts.append(
            f'<circle cx="{node.x * _SCALE:.1f}" cy="{node.y * _SCALE:.1f}" '
            f'r="2.5" fill="#2a7"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def save_svg(path, env: EnvironmentSpec, belief: HierarchicalBelief | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(render_environment(env, belief))
