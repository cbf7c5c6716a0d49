"""Command line interface.

Subcommands:
  transpile <program> [-o script]       program document -> CadQuery script
  props <mesh>                          mass properties of an STL solid
  measure <mesh_a> <mesh_b>             IOU_best alignment of two STL solids
  evaluate <manifest>                   batch VSR / mean IOU_best report

Exit codes: 0 success, 2 input error, 3 executor unavailable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .align import iou_best
from .commands import parse_sequence
from .errors import INPUT_ERRORS, ExecutorUnavailable, MissingFile
from .evaluation import EvalConfig, emit_report, run_evaluation
from .mesh import load_stl
from .moments import mass_properties
from .transpile import TranspileOptions, transpile


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ExecutorUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (*INPUT_ERRORS, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cadeval", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transpile", help="convert a program document to a CadQuery script")
    p.add_argument("program", type=Path)
    p.add_argument("-o", "--output", type=Path, default=None)
    p.add_argument("--precision", type=int, default=6, help="decimal places for literals")
    p.set_defaults(func=_cmd_transpile)

    p = sub.add_parser("props", help="mass properties of an STL mesh")
    p.add_argument("mesh", type=Path)
    p.set_defaults(func=_cmd_props)

    p = sub.add_parser("measure", help="IOU_best between two STL meshes")
    p.add_argument("mesh_a", type=Path)
    p.add_argument("mesh_b", type=Path)
    p.add_argument("--resolution", type=int, default=128)
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("evaluate", help="evaluate a manifest of generated samples")
    p.add_argument("manifest", type=Path)
    p.add_argument("--executor", default=None, help="one-shot executor command")
    p.add_argument("--resolution", type=int, default=128)
    p.add_argument("--timeout", type=int, default=60)
    p.add_argument("--jobs", type=int, default=0, help="0 = logical cores")
    p.add_argument("--format", choices=("structured", "table", "csv"), default="structured")
    p.set_defaults(func=_cmd_evaluate)

    return parser


def _read_mesh(path: Path):
    if not path.is_file():
        raise MissingFile(f"mesh file not found: {path}")
    return load_stl(path.read_bytes())


def _cmd_transpile(args) -> int:
    if not args.program.is_file():
        raise MissingFile(f"program file not found: {args.program}")
    seq = parse_sequence(args.program.read_text())
    script = transpile(seq, TranspileOptions(float_precision=args.precision))
    if args.output:
        args.output.write_text(script.source)
    else:
        sys.stdout.write(script.source)
    return 0


def _cmd_props(args) -> int:
    props = mass_properties(_read_mesh(args.mesh))
    print(
        json.dumps(
            {
                "volume": props.volume,
                "centroid": list(props.centroid),
                "inertia": [list(row) for row in props.inertia],
                "trace": props.trace,
                "orientation_flipped": props.orientation_flipped,
            },
            indent=1,
        )
    )
    return 0


def _cmd_measure(args) -> int:
    result = iou_best(
        _read_mesh(args.mesh_a), _read_mesh(args.mesh_b), resolution=args.resolution
    )
    print(
        json.dumps(
            {
                "iou": result.iou,
                "scale": result.scale,
                "rotation": [list(row) for row in result.rotation],
                "translation": list(result.translation),
                "candidate_index": result.candidate_index,
                "degenerate_inertia": result.degenerate_inertia,
            },
            indent=1,
        )
    )
    return 0


def _cmd_evaluate(args) -> int:
    config = EvalConfig(
        resolution=args.resolution,
        timeout_s=args.timeout,
        **({"jobs": args.jobs} if args.jobs > 0 else {}),
    )
    report = run_evaluation(args.manifest, executor_command=args.executor, config=config)
    sys.stdout.write(emit_report(report, format=args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
