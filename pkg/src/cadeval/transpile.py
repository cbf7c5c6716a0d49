"""Emit executable CadQuery script text from a command program.

Each extrude group becomes a plane, one chained sketch expression, and an
intermediate solid variable; the last line aliases the running solid to a
variable literally named ``solid``.  Emission is deterministic: identical
(sequence, options) produce byte-identical text, with all float literals
printed at fixed decimal precision and never in scientific notation.

No concision pass is applied: a rectangle encoded as four line commands is
emitted as four lineTo calls, not a rect() primitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import commands as ir
from .errors import (
    DegenerateArc,
    DegenerateLoop,
    UnsupportedBooleanOnFirstBody,
)

PREAMBLE = "import cadquery as cq"

_COINCIDENT_TOL = 1e-9


@dataclass(frozen=True)
class TranspileOptions:
    float_precision: int = 6
    variable_prefix: str = "solid"

    def __post_init__(self):
        if not 1 <= self.float_precision <= 12:
            raise ValueError(
                f"float_precision {self.float_precision} outside [1, 12]"
            )


@dataclass(frozen=True)
class ScriptText:
    source: str
    line_count: int = field(init=False)
    char_count: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "line_count", len(self.source.splitlines()))
        object.__setattr__(self, "char_count", len(self.source))


def script_stats(script: ScriptText) -> dict[str, int]:
    """Exact line and character counts of the script text."""
    return {"line_count": script.line_count, "char_count": script.char_count}


def arc_through_point(
    start: tuple[float, float],
    end: tuple[float, float],
    sweep_angle: float,
    ccw: bool,
) -> tuple[float, float]:
    """Mid-arc point of the circular arc from start to end.

    The arc sweeps ``sweep_angle`` degrees (in (0, 360)) from start to end,
    counter-clockwise when ``ccw`` is true.  The circle center sits on the
    chord's perpendicular bisector at distance |chord| / (2 tan(sweep/2))
    from the chord midpoint, on the side fixed by the orientation; the
    returned point is start rotated about that center by half the sweep.
    """
    sx, sy = start
    ex, ey = end
    cx, cy = ex - sx, ey - sy
    chord = math.hypot(cx, cy)
    if chord < _COINCIDENT_TOL:
        raise DegenerateArc(f"arc endpoints coincide: {start} ~ {end}")
    if not 0.0 < sweep_angle < 360.0:
        raise ValueError(f"sweep angle {sweep_angle} not in (0, 360)")

    half = math.radians(sweep_angle) / 2.0
    # signed distance from chord midpoint to center along the ccw normal
    dist = chord / (2.0 * math.tan(half))
    if not ccw:
        dist = -dist
    mx, my = (sx + ex) / 2.0, (sy + ey) / 2.0
    nx, ny = -cy / chord, cx / chord  # chord direction rotated +90 degrees
    ox, oy = mx + dist * nx, my + dist * ny

    turn = half if ccw else -half
    ct, st = math.cos(turn), math.sin(turn)
    rx, ry = sx - ox, sy - oy
    return (ox + ct * rx - st * ry, oy + st * rx + ct * ry)


def plane_frame(theta: float, phi: float, gamma: float):
    """Unit normal and in-plane x axis for plane angles given in degrees.

    (theta, phi) are the spherical coordinates of the plane normal; gamma
    rotates the plane x-axis about the normal, starting from the reference
    direction obtained by bumping theta a quarter turn.
    """
    t, p, g = math.radians(theta), math.radians(phi), math.radians(gamma)
    normal = (math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t))
    ref_x = (math.cos(t) * math.cos(p), math.cos(t) * math.sin(p), -math.sin(t))
    ref_y = _cross(normal, ref_x)
    cg, sg = math.cos(g), math.sin(g)
    x_axis = tuple(cg * rx + sg * ry for rx, ry in zip(ref_x, ref_y))
    return normal, x_axis


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def transpile(seq: ir.CommandSequence, opts: TranspileOptions | None = None) -> ScriptText:
    """Convert a validated command program into CadQuery script text."""
    opts = opts or TranspileOptions()
    fmt = _float_formatter(opts.float_precision)
    groups = seq.extrude_groups()

    lines = [PREAMBLE, ""]
    prefix = opts.variable_prefix

    for gi, (loops, ext_cmd) in enumerate(groups):
        ext = ir.extrude_params(ext_cmd)
        if gi == 0 and ext.boolean_op is not ir.BooleanOp.NEW_BODY:
            raise UnsupportedBooleanOnFirstBody(
                f"first extrude group uses {ext.boolean_op.name}; it must create a new body"
            )

        normal, x_axis = plane_frame(ext.theta, ext.phi, ext.gamma)
        origin, distance = _extent_placement(ext, normal)

        plane_var = f"plane{gi}"
        sketch_var = f"sketch{gi}"
        lines.append(
            f"{plane_var} = cq.Plane(origin=({_triple(origin, fmt)}), "
            f"xDir=({_triple(x_axis, fmt)}), normal=({_triple(normal, fmt)}))"
        )
        lines.append(f"{sketch_var} = (")
        lines.append(f"    cq.Workplane({plane_var})")
        for loop in loops:
            lines.extend(_emit_loop(loop, ext.sketch_scale, fmt))
        lines.append(")")

        body_expr = f"{sketch_var}.extrude({fmt(distance)})"
        if gi == 0:
            lines.append(f"{prefix}0 = {body_expr}")
        else:
            combine = {
                ir.BooleanOp.NEW_BODY: "union",  # later new bodies join the assembly
                ir.BooleanOp.JOIN: "union",
                ir.BooleanOp.CUT: "cut",
                ir.BooleanOp.INTERSECT: "intersect",
            }[ext.boolean_op]
            lines.append(f"{prefix}{gi} = {prefix}{gi - 1}.{combine}({body_expr})")
        lines.append("")

    lines.append(f"solid = {prefix}{len(groups) - 1}")
    return ScriptText("\n".join(lines) + "\n")


def _extent_placement(ext: ir.ExtrudeParams, normal) -> tuple[tuple[float, float, float], float]:
    """Plane origin and single extrude distance realizing the extent type.

    One-sided runs [0, e1] along the normal; symmetric runs [-e1, +e1];
    two-sided runs [-e2, +e1].  The latter two are emitted as a one-sided
    extrude from the plane shifted to the low end of the span.
    """
    ox, oy, oz = ext.origin
    if ext.extent_type is ir.ExtentType.ONE_SIDED:
        shift, distance = 0.0, ext.extrude_one
    elif ext.extent_type is ir.ExtentType.SYMMETRIC:
        shift, distance = -ext.extrude_one, 2.0 * ext.extrude_one
    else:  # TWO_SIDED
        shift, distance = -ext.extrude_two, ext.extrude_one + ext.extrude_two
    origin = (ox + shift * normal[0], oy + shift * normal[1], oz + shift * normal[2])
    return origin, distance


def _emit_loop(loop: list[ir.CadCommand], scale: float, fmt) -> list[str]:
    first = loop[0]
    if first.type is ir.CommandType.CIRCLE:
        c = ir.circle_params(first)
        radius = c.radius * scale
        if radius < _COINCIDENT_TOL:
            raise DegenerateLoop(f"circle radius {radius} vanishes after scaling")
        return [
            f"    .moveTo({fmt(c.center_x * scale)}, {fmt(c.center_y * scale)})",
            f"    .circle({fmt(radius)})",
        ]

    # chain of line/arc segments; the loop starts at the last end point
    ends = []
    for cmd in loop:
        if cmd.type is ir.CommandType.LINE:
            p = ir.line_params(cmd)
            ends.append((p.end_x * scale, p.end_y * scale))
        else:
            p = ir.arc_params(cmd)
            ends.append((p.end_x * scale, p.end_y * scale))
    start = ends[-1]

    out = [f"    .moveTo({fmt(start[0])}, {fmt(start[1])})"]
    prev = start
    for cmd, end in zip(loop, ends):
        if math.hypot(end[0] - prev[0], end[1] - prev[1]) < _COINCIDENT_TOL:
            raise DegenerateLoop(
                f"zero-length segment at {prev} after scaling"
            )
        if cmd.type is ir.CommandType.LINE:
            out.append(f"    .lineTo({fmt(end[0])}, {fmt(end[1])})")
        else:
            p = ir.arc_params(cmd)
            mid = arc_through_point(prev, end, p.sweep_angle, p.ccw)
            out.append(
                f"    .threePointArc(({fmt(mid[0])}, {fmt(mid[1])}), "
                f"({fmt(end[0])}, {fmt(end[1])}))"
            )
        prev = end
    out.append("    .close()")
    return out


def _float_formatter(precision: int):
    def fmt(value: float) -> str:
        text = f"{value + 0.0:.{precision}f}"
        if text == f"-{0.0:.{precision}f}":
            text = text[1:]
        return text

    return fmt


def _triple(vec, fmt) -> str:
    return ", ".join(fmt(v) for v in vec)
