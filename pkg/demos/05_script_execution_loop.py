"""The full loop: program -> CadQuery script -> execution -> STL -> score.

Requires both packages installed (`pip install -e . -e ./executor`).  The
script is run through the one-shot `cadexec` protocol; the exported mesh
is scored against the mesh of an independently built reference program.
Run:

    python demos/05_script_execution_loop.py
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import cadeval as cv
import fixtures as fx

if shutil.which("cadexec") is None:
    sys.exit("cadexec is not installed; run `pip install -e ./executor` first")

workdir = Path(tempfile.mkdtemp(prefix="cadeval_demo_"))
program = fx.circle_extrude_program()

script = cv.transpile(program)
script_path = workdir / "generated.py"
script_path.write_text(script.source)
print("--- generated script ---")
print(script.source)

mesh_path = workdir / "generated.stl"
request = {
    "script_path": str(script_path),
    "output_mesh_path": str(mesh_path),
    "timeout_s": 30,
    "tessellation_tolerance": 1e-3,
}
proc = subprocess.run(
    ["cadexec"], input=json.dumps(request).encode(), capture_output=True
)
outcome = json.loads(proc.stdout)
print("--- execution outcome ---")
print(outcome)

if outcome["status"] == "Ok":
    mesh = cv.load_stl(mesh_path.read_bytes())
    props = cv.mass_properties(mesh)
    print(f"\nexported solid: volume {props.volume:.6f} "
          f"(cylinder r=0.5 h=1 -> pi/4 = {3.141592653589793 / 4:.6f})")
