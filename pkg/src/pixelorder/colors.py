"""Viridis color mapping over a fixed global value domain."""

from __future__ import annotations

from ._viridis import VIRIDIS_RGB

_N = len(VIRIDIS_RGB)


def viridis_rgb(t: float) -> tuple[float, float, float]:
    """Interpolate the embedded control-point table at ``t`` in [0, 1].

    Control point ``i`` sits at ``i / 256``; values past the last point clamp
    to it, matching the reference lookup of the published table (so 0, 0.5,
    and 1 hit the canonical #440154, #21918c, #fde725 anchors exactly).
    """
    t = 0.0 if t < 0.0 else 1.0 if t > 1.0 else t
    position = t * _N
    i = int(position)
    if i >= _N - 1:
        return VIRIDIS_RGB[_N - 1]
    frac = position - i
    r0, g0, b0 = VIRIDIS_RGB[i]
    r1, g1, b1 = VIRIDIS_RGB[i + 1]
    return (
        r0 + (r1 - r0) * frac,
        g0 + (g1 - g0) * frac,
        b0 + (b1 - b0) * frac,
    )


def _channel(c: float) -> int:
    return int(255.0 * c + 0.5)


def rgb_hex(rgb: tuple[float, float, float]) -> str:
    return "#%02x%02x%02x" % (_channel(rgb[0]), _channel(rgb[1]), _channel(rgb[2]))


def color_map(value: float, domain: tuple[float, float]) -> str:
    """Map a value onto the viridis scale over ``domain``, clamped at the ends.

    A degenerate domain (min == max) maps everything to the midpoint color.
    """
    lo, hi = domain
    if hi <= lo:
        t = 0.5
    else:
        t = (value - lo) / (hi - lo)
    return rgb_hex(viridis_rgb(t))


def resolve_colors(cells, domain: tuple[float, float]) -> list[list[str]]:
    """Hex color per cell for an N x T value grid."""
    return [[color_map(float(v), domain) for v in row] for row in cells]
