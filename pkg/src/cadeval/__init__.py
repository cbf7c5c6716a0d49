"""cadeval: CAD command-program transpilation and solid-similarity metrics.

The package has two halves.  The program side parses 17-slot
sketch-and-extrude command sequences and emits executable CadQuery script
text.  The geometry side loads watertight triangle meshes, integrates
exact mass properties, normalizes away scale and translation, aligns
principal inertia axes, and scores voxel IOU_best; the evaluation harness
batches both into VSR / mean-IOU_best reports.
"""

from . import errors
from .align import AlignmentResult, iou_best, procrustes_align, rotation_candidates, union_bounds
from .commands import (
    BooleanOp,
    CadCommand,
    CommandSequence,
    CommandType,
    ExtentType,
    arc,
    circle,
    dequantize,
    end_of_sequence,
    extrude,
    line,
    loop_start,
    parse_sequence,
    sequence_from_commands,
    serialize_sequence,
)
from .evaluation import (
    EvalConfig,
    EvalReport,
    EvalRow,
    EvalSample,
    ExecStatus,
    ExecutionOutcome,
    compute_vsr,
    emit_report,
    load_manifest,
    parse_report,
    run_evaluation,
)
from .mesh import TriMesh, load_stl, save_stl
from .moments import MassProperties, mass_properties, normalize_solid, principal_axes, second_moment_about
from .transpile import (
    ScriptText,
    TranspileOptions,
    arc_through_point,
    plane_frame,
    script_stats,
    transpile,
)
from .voxel import VoxelGrid, iou, voxelize

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "BooleanOp",
    "CadCommand",
    "CommandSequence",
    "CommandType",
    "EvalConfig",
    "EvalReport",
    "EvalRow",
    "EvalSample",
    "ExecStatus",
    "ExecutionOutcome",
    "ExtentType",
    "MassProperties",
    "ScriptText",
    "TranspileOptions",
    "TriMesh",
    "VoxelGrid",
    "arc",
    "arc_through_point",
    "circle",
    "compute_vsr",
    "dequantize",
    "emit_report",
    "end_of_sequence",
    "errors",
    "extrude",
    "iou",
    "iou_best",
    "line",
    "load_manifest",
    "load_stl",
    "loop_start",
    "mass_properties",
    "normalize_solid",
    "parse_report",
    "parse_sequence",
    "plane_frame",
    "principal_axes",
    "procrustes_align",
    "rotation_candidates",
    "run_evaluation",
    "save_stl",
    "script_stats",
    "second_moment_about",
    "sequence_from_commands",
    "serialize_sequence",
    "transpile",
    "union_bounds",
    "voxelize",
]
