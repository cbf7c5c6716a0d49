"""Sketch-and-extrude command programs: the 17-slot vector IR.

A program is an ordered sequence of commands.  Each command is one type tag
plus 16 parameter slots; slots a command does not use hold the sentinel
-1.0 and are ignored by every consumer.  The slot layout is fixed:

    0  x            line/arc end point or circle center, sketch units
    1  y
    2  sweep_angle  arc sweep, degrees in (0, 360)
    3  ccw_flag     1.0 counter-clockwise, 0.0 clockwise
    4  radius       circle radius, > 0
    5  theta        sketch plane normal, polar angle (degrees)
    6  phi          sketch plane normal, azimuth (degrees)
    7  gamma        rotation of the plane x-axis about the normal (degrees)
    8  origin_x     sketch plane origin in 3D
    9  origin_y
    10 origin_z
    11 sketch_scale multiplier applied to all sketch coordinates, > 0
    12 extrude_one  first signed extrude distance
    13 extrude_two  second signed extrude distance
    14 boolean_op   0 new body, 1 join, 2 cut, 3 intersect
    15 extent_type  0 one-sided, 1 symmetric, 2 two-sided

Grammar: a program is one or more extrude groups, each made of one or more
loops followed by an Extrude, optionally terminated by EndOfSequence.  A
loop is a LoopStart sentinel followed by either exactly one Circle or at
least two Line/Arc segments.  Segments chain end point to end point; the
first segment of a loop starts at the end point of the loop's last
segment, which closes the loop by construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, Iterator, Sequence

from .errors import (
    ArityError,
    GrammarError,
    MalformedDocument,
    OutOfRangeCode,
    UnknownCommandTag,
    ValidationError,
)

UNUSED = -1.0
N_PARAM_SLOTS = 16


class CommandType(Enum):
    LOOP_START = "SOL"
    LINE = "L"
    ARC = "A"
    CIRCLE = "R"
    EXTRUDE = "E"
    END_OF_SEQUENCE = "EOS"


_TAG_TO_TYPE = {t.value: t for t in CommandType}

# slots each command type actually reads
_USED_SLOTS = {
    CommandType.LOOP_START: (),
    CommandType.LINE: (0, 1),
    CommandType.ARC: (0, 1, 2, 3),
    CommandType.CIRCLE: (0, 1, 4),
    CommandType.EXTRUDE: (5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15),
    CommandType.END_OF_SEQUENCE: (),
}

# slots carrying continuous values, per type (used by dequantize)
_CONTINUOUS_SLOTS = {
    CommandType.LOOP_START: (),
    CommandType.LINE: (0, 1),
    CommandType.ARC: (0, 1, 2),
    CommandType.CIRCLE: (0, 1, 4),
    CommandType.EXTRUDE: (5, 6, 7, 8, 9, 10, 11, 12, 13),
    CommandType.END_OF_SEQUENCE: (),
}


class BooleanOp(IntEnum):
    NEW_BODY = 0
    JOIN = 1
    CUT = 2
    INTERSECT = 3


class ExtentType(IntEnum):
    ONE_SIDED = 0
    SYMMETRIC = 1
    TWO_SIDED = 2


@dataclass(frozen=True)
class CadCommand:
    """One 17-slot command: a type tag plus 16 parameter slots."""

    type: CommandType
    params: tuple[float, ...]

    def __post_init__(self):
        if len(self.params) != N_PARAM_SLOTS:
            raise ArityError(
                f"{self.type.value} command holds {len(self.params)} parameter "
                f"slots, expected {N_PARAM_SLOTS}"
            )
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))


def _command(ctype: CommandType, used: dict[int, float]) -> CadCommand:
    params = [UNUSED] * N_PARAM_SLOTS
    for slot, value in used.items():
        params[slot] = float(value)
    return CadCommand(ctype, tuple(params))


def loop_start() -> CadCommand:
    return _command(CommandType.LOOP_START, {})


def end_of_sequence() -> CadCommand:
    return _command(CommandType.END_OF_SEQUENCE, {})


def line(end_x: float, end_y: float) -> CadCommand:
    return _command(CommandType.LINE, {0: end_x, 1: end_y})


def arc(end_x: float, end_y: float, sweep_angle: float, ccw: bool) -> CadCommand:
    if not 0.0 < sweep_angle < 360.0:
        raise ValidationError(f"arc sweep angle {sweep_angle} not in (0, 360)")
    return _command(
        CommandType.ARC,
        {0: end_x, 1: end_y, 2: sweep_angle, 3: 1.0 if ccw else 0.0},
    )


def circle(center_x: float, center_y: float, radius: float) -> CadCommand:
    if not radius > 0.0:
        raise ValidationError(f"circle radius {radius} must be > 0")
    return _command(CommandType.CIRCLE, {0: center_x, 1: center_y, 4: radius})


def extrude(
    theta: float,
    phi: float,
    gamma: float,
    origin_x: float,
    origin_y: float,
    origin_z: float,
    sketch_scale: float,
    extrude_one: float,
    extrude_two: float,
    boolean_op: BooleanOp | int,
    extent_type: ExtentType | int,
) -> CadCommand:
    if not sketch_scale > 0.0:
        raise ValidationError(f"sketch_scale {sketch_scale} must be > 0")
    bop = _decode_enum(BooleanOp, boolean_op, "boolean_op")
    ext = _decode_enum(ExtentType, extent_type, "extent_type")
    return _command(
        CommandType.EXTRUDE,
        {
            5: theta,
            6: phi,
            7: gamma,
            8: origin_x,
            9: origin_y,
            10: origin_z,
            11: sketch_scale,
            12: extrude_one,
            13: extrude_two,
            14: float(bop),
            15: float(ext),
        },
    )


def _decode_enum(enum_cls, code, name: str):
    value = float(code)
    if value != int(value) or int(value) not in [e.value for e in enum_cls]:
        raise ValidationError(f"unknown {name} code {code!r}")
    return enum_cls(int(value))


# --- typed views over the parameter slots ---

@dataclass(frozen=True)
class LineParams:
    end_x: float
    end_y: float


@dataclass(frozen=True)
class ArcParams:
    end_x: float
    end_y: float
    sweep_angle: float
    ccw: bool


@dataclass(frozen=True)
class CircleParams:
    center_x: float
    center_y: float
    radius: float


@dataclass(frozen=True)
class ExtrudeParams:
    theta: float
    phi: float
    gamma: float
    origin: tuple[float, float, float]
    sketch_scale: float
    extrude_one: float
    extrude_two: float
    boolean_op: BooleanOp
    extent_type: ExtentType


def line_params(cmd: CadCommand) -> LineParams:
    _expect(cmd, CommandType.LINE)
    return LineParams(cmd.params[0], cmd.params[1])


def arc_params(cmd: CadCommand) -> ArcParams:
    _expect(cmd, CommandType.ARC)
    sweep = cmd.params[2]
    if not 0.0 < sweep < 360.0:
        raise ValidationError(f"arc sweep angle {sweep} not in (0, 360)")
    flag = cmd.params[3]
    if flag not in (0.0, 1.0):
        raise ValidationError(f"arc ccw flag must be 0 or 1, got {flag}")
    return ArcParams(cmd.params[0], cmd.params[1], sweep, flag == 1.0)


def circle_params(cmd: CadCommand) -> CircleParams:
    _expect(cmd, CommandType.CIRCLE)
    radius = cmd.params[4]
    if not radius > 0.0:
        raise ValidationError(f"circle radius {radius} must be > 0")
    return CircleParams(cmd.params[0], cmd.params[1], radius)


def extrude_params(cmd: CadCommand) -> ExtrudeParams:
    _expect(cmd, CommandType.EXTRUDE)
    p = cmd.params
    scale = p[11]
    if not scale > 0.0:
        raise ValidationError(f"sketch_scale {scale} must be > 0")
    return ExtrudeParams(
        theta=p[5],
        phi=p[6],
        gamma=p[7],
        origin=(p[8], p[9], p[10]),
        sketch_scale=scale,
        extrude_one=p[12],
        extrude_two=p[13],
        boolean_op=_decode_enum(BooleanOp, p[14], "boolean_op"),
        extent_type=_decode_enum(ExtentType, p[15], "extent_type"),
    )


def _expect(cmd: CadCommand, ctype: CommandType):
    if cmd.type is not ctype:
        raise ValidationError(f"expected {ctype.value} command, got {cmd.type.value}")


@dataclass(frozen=True)
class CommandSequence:
    """A validated program: grammar holds, parameter views decode."""

    commands: tuple[CadCommand, ...]

    def __post_init__(self):
        object.__setattr__(self, "commands", tuple(self.commands))
        validate_grammar(self.commands)

    def __iter__(self) -> Iterator[CadCommand]:
        return iter(self.commands)

    def __len__(self) -> int:
        return len(self.commands)

    def extrude_groups(self) -> list[tuple[list[list[CadCommand]], CadCommand]]:
        """Split into (loops, extrude) pairs; each loop is its command list."""
        groups = []
        loops: list[list[CadCommand]] = []
        current: list[CadCommand] | None = None
        for cmd in self.commands:
            if cmd.type is CommandType.LOOP_START:
                current = []
                loops.append(current)
            elif cmd.type in (CommandType.LINE, CommandType.ARC, CommandType.CIRCLE):
                current.append(cmd)
            elif cmd.type is CommandType.EXTRUDE:
                groups.append((loops, cmd))
                loops = []
                current = None
        return groups


def validate_grammar(commands: Sequence[CadCommand]) -> None:
    """Single left-to-right pass; raises GrammarError on the first violation."""
    T = CommandType
    n = len(commands)
    if n == 0:
        raise GrammarError("empty command sequence")
    i = 0
    n_groups = 0
    while i < n:
        ctype = commands[i].type
        if ctype is T.END_OF_SEQUENCE:
            if n_groups == 0:
                raise GrammarError("end-of-sequence before any extrude group")
            if i != n - 1:
                raise GrammarError(f"command after end-of-sequence at index {i}")
            return
        # parse one group: loop+ followed by Extrude
        group_loops = 0
        while i < n and commands[i].type is T.LOOP_START:
            i += 1
            if i >= n:
                raise GrammarError("loop start at end of sequence")
            if commands[i].type is T.CIRCLE:
                i += 1
            elif commands[i].type in (T.LINE, T.ARC):
                segs = 0
                while i < n and commands[i].type in (T.LINE, T.ARC):
                    segs += 1
                    i += 1
                if segs < 2:
                    raise GrammarError(
                        f"loop with a single segment at index {i - 1}; "
                        "line/arc loops need at least two"
                    )
            else:
                raise GrammarError(
                    f"loop start followed by {commands[i].type.value} at index {i}"
                )
            group_loops += 1
        if i >= n or commands[i].type is not T.EXTRUDE:
            found = commands[i].type.value if i < n else "end of sequence"
            raise GrammarError(f"expected loop or extrude, found {found} at index {i}")
        if group_loops == 0:
            raise GrammarError(f"extrude without a preceding loop at index {i}")
        i += 1
        n_groups += 1
    # fell off the end: fine as long as the last command was an Extrude
    if n_groups == 0:
        raise GrammarError("no extrude group in sequence")


# --- serialization ---

def parse_sequence(text: str) -> CommandSequence:
    """Parse a serialized program document into a validated CommandSequence.

    The document is a JSON object with a top-level "commands" list, each
    entry {"t": tag, "p": [16 numbers]}.  Values in slots the command type
    does not use are ignored and normalized to the -1.0 sentinel (null is
    accepted there too).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "commands" not in doc:
        raise MalformedDocument('document must be an object with a "commands" list')
    entries = doc["commands"]
    if not isinstance(entries, list):
        raise MalformedDocument('"commands" must be a list')

    commands = []
    for idx, entry in enumerate(entries):
        if not isinstance(entry, dict) or "t" not in entry or "p" not in entry:
            raise MalformedDocument(f'command {idx} must be an object with "t" and "p"')
        tag = entry["t"]
        if tag not in _TAG_TO_TYPE:
            raise UnknownCommandTag(f"command {idx}: unknown tag {tag!r}")
        ctype = _TAG_TO_TYPE[tag]
        raw = entry["p"]
        if not isinstance(raw, list) or len(raw) != N_PARAM_SLOTS:
            raise ArityError(
                f"command {idx}: expected {N_PARAM_SLOTS} parameter slots, "
                f"got {len(raw) if isinstance(raw, list) else type(raw).__name__}"
            )
        used = set(_USED_SLOTS[ctype])
        params = []
        for slot, value in enumerate(raw):
            if slot not in used:
                params.append(UNUSED)
                continue
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise MalformedDocument(
                    f"command {idx}: slot {slot} must be a number, got {value!r}"
                )
            params.append(float(value))
        cmd = CadCommand(ctype, tuple(params))
        _validate_views(cmd, idx)
        commands.append(cmd)

    return CommandSequence(tuple(commands))


def _validate_views(cmd: CadCommand, idx: int) -> None:
    try:
        if cmd.type is CommandType.ARC:
            arc_params(cmd)
        elif cmd.type is CommandType.CIRCLE:
            circle_params(cmd)
        elif cmd.type is CommandType.EXTRUDE:
            extrude_params(cmd)
    except ValidationError as exc:
        raise ValidationError(f"command {idx}: {exc}") from exc


def serialize_sequence(seq: CommandSequence) -> str:
    """Serialize to the program document format; inverse of parse_sequence."""
    lines = ['{', ' "commands": [']
    for i, cmd in enumerate(seq.commands):
        entry = json.dumps({"t": cmd.type.value, "p": list(cmd.params)})
        comma = "," if i < len(seq.commands) - 1 else ""
        lines.append(f"  {entry}{comma}")
    lines.append(" ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dequantize(
    seq: CommandSequence, bits: int, value_range: tuple[float, float]
) -> CommandSequence:
    """Map quantized integer codes in continuous slots to real values.

    Each continuous slot q becomes low + q * (high - low) / (2^bits - 1);
    type-specific flag/code slots and unused slots pass through unchanged.
    The result is re-checked against the grammar only: continuous ranges
    are the caller's responsibility, so a range that produces e.g. a
    non-positive radius will surface later, when the command is decoded.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    low, high = value_range
    levels = (1 << bits) - 1
    step = (high - low) / levels

    commands = []
    for idx, cmd in enumerate(seq.commands):
        cont = _CONTINUOUS_SLOTS[cmd.type]
        params = list(cmd.params)
        for slot in cont:
            q = params[slot]
            if q != round(q):
                raise OutOfRangeCode(
                    f"command {idx}: slot {slot} holds non-integer code {q}"
                )
            if not 0 <= q <= levels:
                raise OutOfRangeCode(
                    f"command {idx}: slot {slot} code {q} outside [0, {levels}]"
                )
            params[slot] = low + q * step
        commands.append(CadCommand(cmd.type, tuple(params)))

    return CommandSequence(tuple(commands))


def sequence_from_commands(commands: Iterable[CadCommand]) -> CommandSequence:
    """Build a validated sequence from already-constructed commands."""
    return CommandSequence(tuple(commands))
