"""Circle positions for a packing and static SVG output.

Positions are in units of the bounding radius, bounding circle at the origin.
Below the root, each new circle's curvature-times-center (as a complex number)
is obtained with the same generator as its curvature: 2 * (sum of the other
three) - old.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .core import PackingDescriptor
from .errors import UsageError


@dataclass(frozen=True)
class PositionedCircle:
    curvature: int
    center: Tuple[float, float]
    radius: float

    @property
    def z(self) -> complex:
        return complex(*self.center)


def _target_distance(parent: PositionedCircle, r: float) -> float:
    if parent.curvature < 0:
        return parent.radius - r
    return parent.radius + r


def _intersect(c1: complex, r1: float, c2: complex, r2: float) -> List[complex]:
    d = abs(c2 - c1)
    if d == 0:
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    h2 = r1 * r1 - a * a
    if h2 < 0:
        if h2 < -1e-9 * max(r1, r2) ** 2:
            return []
        h2 = 0.0
    h = math.sqrt(h2)
    u = (c2 - c1) / d
    base = c1 + a * u
    return [base + 1j * u * h, base - 1j * u * h]


def tangency_error(a: PositionedCircle, b: PositionedCircle) -> float:
    """Relative mismatch between center distance and the tangency distance."""
    if a.curvature < 0 or b.curvature < 0:
        want = abs(a.radius - b.radius)
    else:
        want = a.radius + b.radius
    return abs(abs(a.z - b.z) - want) / max(a.radius, b.radius)


def solve_center(parents: Sequence[PositionedCircle], curvature: int, scale: float,
                 exclude: Optional[complex] = None) -> complex:
    """Center of the circle of given curvature tangent to three mutually tangent parents.

    Of the two geometric solutions, the one near ``exclude`` is rejected; a
    remaining tie goes to the larger y coordinate.
    """
    r = scale / abs(curvature)
    p = sorted(parents, key=lambda c: c.curvature)
    cands = _intersect(p[0].z, _target_distance(p[0], r), p[1].z, _target_distance(p[1], r))
    good = [z for z in cands
            if abs(abs(z - p[2].z) - _target_distance(p[2], r)) <= 1e-9 * max(1.0, p[2].radius)]
    if exclude is not None:
        kept = [z for z in good if abs(z - exclude) > 1e-9 * max(r, 1e-300)]
        good = kept or good
    if not good:
        raise ArithmeticError("no tangent position found (degenerate configuration)")
    return max(good, key=lambda z: (z.imag, z.real))


def layout_root(packing: PackingDescriptor) -> List[PositionedCircle]:
    """Place the four root circles; the bounding circle has radius 1 at the origin."""
    v = packing.root
    if v[0] >= 0:
        raise UsageError("only bounded packings can be laid out")
    scale = float(-v[0])
    outer = PositionedCircle(v[0], (0.0, 0.0), 1.0)
    r2 = scale / v[1]
    second = PositionedCircle(v[1], (1.0 - r2, 0.0), r2)
    r3 = scale / v[2]
    cands = _intersect(outer.z, 1.0 - r3, second.z, r2 + r3)
    if not cands:
        raise ArithmeticError("degenerate root: third circle cannot be placed")
    z3 = max(cands, key=lambda z: (z.imag, z.real))
    third = PositionedCircle(v[2], (z3.real, z3.imag), r3)
    z4 = solve_center([outer, second, third], v[3], scale)
    fourth = PositionedCircle(v[3], (z4.real, z4.imag), scale / v[3])
    return [outer, second, third, fourth]


def _from_w(k: int, w: complex, scale: float) -> PositionedCircle:
    z = w * scale / k
    return PositionedCircle(k, (z.real, z.imag), scale / abs(k))


def layout(packing: PackingDescriptor, max_curvature: int,
           with_parents: bool = False) -> list:
    """Every circle of curvature < max_curvature, root circles first, then in walk order.

    With ``with_parents`` each entry is (circle, parent circles, replaced
    circle, depth); the replaced circle is None for the root circles.
    """
    if max_curvature < max(packing.root):
        raise UsageError("max_curvature must be at least the largest root curvature")
    scale = float(-packing.root[0])
    root = layout_root(packing)
    ks = tuple(packing.root)
    ws = tuple(c.z * c.curvature / scale for c in root)
    out = []
    for c in root:
        if c.curvature < max_curvature:
            out.append((c, [], None, 0) if with_parents else c)

    def child(kq, wq, i):
        ks_ = list(kq)
        ws_ = list(wq)
        ks_[i] = 2 * (sum(kq) - kq[i]) - kq[i]
        ws_[i] = 2 * (sum(wq) - wq[i]) - wq[i]
        return tuple(ks_), tuple(ws_)

    stack = []
    for i in reversed(range(4)):
        kq, wq = child(ks, ws, i)
        if kq[i] < max_curvature:
            stack.append((kq, wq, i, ks, ws, 1))
    while stack:
        kq, wq, g, pk, pw, depth = stack.pop()
        circle = _from_w(kq[g], wq[g], scale)
        if with_parents:
            parents = [_from_w(kq[j], wq[j], scale) for j in range(4) if j != g]
            out.append((circle, parents, _from_w(pk[g], pw[g], scale), depth))
        else:
            out.append(circle)
        for i in reversed(range(4)):
            if i == g:
                continue
            ck, cw = child(kq, wq, i)
            if ck[i] < max_curvature:
                stack.append((ck, cw, i, kq, wq, depth + 1))
    return out


SVG_HEADER = ('<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n'
              '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
              '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">\n')


def render_svg(packing: PackingDescriptor, max_curvature: int, canvas_px: int = 800, *,
               stroke: str = "black", fill: str = "none", stroke_width: float = 0.5,
               labels: bool = True, label_min_px: float = 10.0) -> str:
    circles = layout(packing, max_curvature)
    half = canvas_px / 2.0
    s = half * 0.98
    parts = [SVG_HEADER,
             f'<svg version="1.1" xmlns="http://www.w3.org/2000/svg" width="{canvas_px}" '
             f'height="{canvas_px}" viewBox="0 0 {canvas_px} {canvas_px}">\n',
             f'<g stroke="{stroke}" fill="{fill}" stroke-width="{stroke_width:g}">\n']
    text = []
    for c in circles:
        cx = half + c.center[0] * s
        cy = half - c.center[1] * s
        r = c.radius * s
        parts.append(f'<circle cx="{cx:.4f}" cy="{cy:.4f}" r="{r:.4f}"/>\n')
        if labels and c.curvature > 0 and r >= label_min_px:
            size = max(6.0, min(r * 0.6, 48.0))
            text.append(f'<text x="{cx:.4f}" y="{cy:.4f}" font-size="{size:.1f}" '
                        f'text-anchor="middle" dominant-baseline="central">{c.curvature}</text>\n')
    parts.append("</g>\n")
    if text:
        parts.append('<g font-family="sans-serif" fill="black">\n')
        parts.extend(text)
        parts.append("</g>\n")
    parts.append("</svg>\n")
    return "".join(parts)
