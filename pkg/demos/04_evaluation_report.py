"""Batch evaluation: manifest in, VSR / mean IOU_best report out.

Builds a small mesh-only manifest in a temp directory (three generated
solids against their ground truths, one of them deliberately wrong) and
renders the report in all three formats.  Run:

    python demos/04_evaluation_report.py
"""

import json
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

import cadeval as cv
import fixtures as fx

workdir = Path(tempfile.mkdtemp(prefix="cadeval_demo_"))

pairs = {
    "exact_match": (fx.l_prism(), fx.l_prism()),
    "same_up_to_similarity": (
        fx.l_prism().transformed(scale=3.0, translation=(5, 5, 5)),
        fx.l_prism(),
    ),
    "wrong_shape": (fx.tetrahedron(), fx.l_prism()),
}
records = []
for name, (generated, truth) in pairs.items():
    (workdir / f"{name}_gen.stl").write_bytes(cv.save_stl(generated))
    (workdir / f"{name}_gt.stl").write_bytes(cv.save_stl(truth))
    records.append(
        {
            "id": name,
            "generated": {"mesh": f"{name}_gen.stl"},
            "ground_truth": {"mesh": f"{name}_gt.stl"},
        }
    )
manifest = workdir / "manifest.jsonl"
manifest.write_text("\n".join(json.dumps(r) for r in records) + "\n")
print(f"manifest: {manifest}\n")

report = cv.run_evaluation(manifest, config=cv.EvalConfig(resolution=96))

for fmt in ("table", "csv", "structured"):
    print(f"--- {fmt} ---")
    print(cv.emit_report(report, fmt))
