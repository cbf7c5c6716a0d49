"""Process entry point that actually runs one untrusted script.

Invoked by the runner as

    python -m cadexec.child <script> <outcome_json> <mesh_out> <tolerance>

and always reports through the outcome file, never the exit code: the
parent treats a missing outcome file as a crash.  The script executes in
an empty scratch working directory with a fresh namespace; when the real
cadquery package is absent, the bundled fallback kernel is put on sys.path
under that name so transpiled scripts stay runnable.
"""

from __future__ import annotations

import importlib.util
import json
import os
import sys
import tempfile
import traceback
from pathlib import Path


def _report(outcome_path: str, status: str, message: str = "", mesh_path: str | None = None):
    payload = {"status": status, "message": message}
    if mesh_path is not None:
        payload["mesh_path"] = mesh_path
    Path(outcome_path).write_text(json.dumps(payload))


def main(argv) -> int:
    script_path, outcome_path, mesh_path, tolerance = argv
    tolerance = float(tolerance)

    try:
        source = Path(script_path).read_text()
    except OSError as exc:
        _report(outcome_path, "RuntimeError", f"cannot read script: {exc}")
        return 0

    try:
        code = compile(source, os.path.basename(script_path), "exec")
    except SyntaxError:
        _report(outcome_path, "SyntaxError", traceback.format_exc(limit=0).strip())
        return 0

    os.environ["CADEXEC_TESS_TOL"] = repr(tolerance)
    if importlib.util.find_spec("cadquery") is None:
        shim = Path(__file__).parent / "_kernel"
        sys.path.insert(0, str(shim))

    scratch = tempfile.mkdtemp(prefix="cadexec_scratch_")
    os.chdir(scratch)

    namespace = {"__name__": "__main__", "__builtins__": __builtins__}
    try:
        exec(code, namespace)
    except SystemExit as exc:
        _report(outcome_path, "RuntimeError", f"script called sys.exit({exc.code})")
        return 0
    except BaseException:
        lines = traceback.format_exc().strip().splitlines()
        _report(outcome_path, "RuntimeError", lines[-1] if lines else "script raised")
        return 0

    if "solid" not in namespace:
        _report(outcome_path, "NoSolidVariable", "script defines no variable named `solid`")
        return 0

    shape = namespace["solid"]
    try:
        if hasattr(shape, "val"):
            shape = shape.val()
        vertices, triangles = shape.tessellate(tolerance)
    except Exception as exc:
        _report(
            outcome_path,
            "NoSolidVariable",
            f"variable `solid` does not hold a solid body: {exc}",
        )
        return 0

    try:
        from .stl import write_binary_stl

        write_binary_stl(mesh_path, vertices, triangles)
    except Exception as exc:
        _report(outcome_path, "RuntimeError", f"mesh export failed: {exc}")
        return 0

    _report(outcome_path, "Ok", "", mesh_path)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
