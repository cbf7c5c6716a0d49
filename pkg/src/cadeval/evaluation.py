"""Batch evaluation of generated CAD scripts against ground truths.

A manifest is line-delimited JSON; each record names a generated artifact
(script to execute, or an already-exported mesh) and a ground truth (mesh,
or a command program that is transpiled and executed once, then cached).
The report carries the valid syntax rate over evaluated samples and the
mean IOU_best over the samples that executed cleanly.

Samples whose *ground truth* cannot be realized are reported as
GroundTruthError rows and excluded from both metrics: VSR measures the
generated script, not the reference.
"""

from __future__ import annotations

import hashlib
import json
import os
import shlex
import subprocess
import tempfile
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from . import transpile as _transpile
from .align import iou_best
from .commands import parse_sequence
from .errors import (
    CadevalError,
    DuplicateId,
    EmptyInput,
    ExecutorUnavailable,
    MalformedManifest,
    MissingFile,
)
from .mesh import TriMesh, load_stl
from .moments import mass_properties


class ExecStatus(str, Enum):
    OK = "Ok"
    SYNTAX_ERROR = "SyntaxError"
    RUNTIME_ERROR = "RuntimeError"
    TIMEOUT = "Timeout"
    NO_SOLID_VARIABLE = "NoSolidVariable"
    GROUND_TRUTH_ERROR = "GroundTruthError"  # harness-side row status only


_SCRIPT_STATUSES = {
    s.value
    for s in (
        ExecStatus.OK,
        ExecStatus.SYNTAX_ERROR,
        ExecStatus.RUNTIME_ERROR,
        ExecStatus.TIMEOUT,
        ExecStatus.NO_SOLID_VARIABLE,
    )
}


@dataclass(frozen=True)
class ExecutionOutcome:
    status: ExecStatus
    message: str = ""
    mesh_path: Path | None = None

    def __post_init__(self):
        if (self.status is ExecStatus.OK) != (self.mesh_path is not None):
            raise ValueError("mesh_path must be present exactly when status is Ok")


@dataclass(frozen=True)
class EvalSample:
    id: str
    generated_script: Path | None = None
    generated_mesh: Path | None = None
    ground_truth_program: Path | None = None
    ground_truth_mesh: Path | None = None

    def needs_executor(self) -> bool:
        return self.generated_script is not None or self.ground_truth_program is not None


@dataclass(frozen=True)
class EvalRow:
    id: str
    status: ExecStatus
    iou_best: float | None
    runtime_ms: int
    message: str = ""


@dataclass(frozen=True)
class EvalReport:
    vsr: float
    mean_iou_best: float
    n_samples: int  # samples entering the VSR denominator
    n_valid: int
    rows: tuple[EvalRow, ...]


@dataclass(frozen=True)
class EvalConfig:
    resolution: int = 128
    timeout_s: int = 60
    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)
    tessellation_tolerance: float = 1e-3
    cache_dir: Path | None = None  # defaults to <manifest dir>/.cadeval_cache


def load_manifest(path: str | Path) -> list[EvalSample]:
    """Read a line-delimited manifest; paths resolve against its directory."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"manifest not found: {path}")
    base = path.parent
    samples: list[EvalSample] = []
    seen: set[str] = set()
    for ln, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedManifest(f"line {ln}: not valid JSON: {exc}") from exc
        if not isinstance(record, dict):
            raise MalformedManifest(f"line {ln}: record must be an object")
        sample = _parse_record(record, base, ln)
        if sample.id in seen:
            raise DuplicateId(f"line {ln}: duplicate id {sample.id!r}")
        seen.add(sample.id)
        samples.append(sample)
    return samples


def _parse_record(record: dict, base: Path, ln: int) -> EvalSample:
    for key in ("id", "generated", "ground_truth"):
        if key not in record:
            raise MalformedManifest(f"line {ln}: missing {key!r}")
    sample_id = record["id"]
    if not isinstance(sample_id, str) or not sample_id:
        raise MalformedManifest(f"line {ln}: id must be a non-empty string")

    def one_path(obj, allowed: tuple[str, str], label: str):
        if not isinstance(obj, dict) or len(obj) != 1:
            raise MalformedManifest(
                f"line {ln}: {label} must be an object with exactly one of {allowed}"
            )
        (kind, rel), = obj.items()
        if kind not in allowed:
            raise MalformedManifest(f"line {ln}: unknown {label} kind {kind!r}")
        p = base / rel
        if not p.is_file():
            raise MissingFile(f"line {ln}: {label} file not found: {p}")
        return kind, p

    gen_kind, gen_path = one_path(record["generated"], ("script", "mesh"), "generated")
    gt_kind, gt_path = one_path(record["ground_truth"], ("program", "mesh"), "ground_truth")
    return EvalSample(
        id=sample_id,
        generated_script=gen_path if gen_kind == "script" else None,
        generated_mesh=gen_path if gen_kind == "mesh" else None,
        ground_truth_program=gt_path if gt_kind == "program" else None,
        ground_truth_mesh=gt_path if gt_kind == "mesh" else None,
    )


def compute_vsr(outcomes: list[ExecutionOutcome]) -> float:
    """Fraction of outcomes with status Ok."""
    if not outcomes:
        raise EmptyInput("no outcomes to aggregate")
    ok = sum(1 for o in outcomes if o.status is ExecStatus.OK)
    return ok / len(outcomes)


class ScriptExecutor:
    """Invokes the one-shot executor CLI: request on stdin, outcome on stdout."""

    def __init__(self, command: str, timeout_s: int, tessellation_tolerance: float):
        self.argv = shlex.split(command)
        if not self.argv:
            raise ExecutorUnavailable("empty executor command")
        self.timeout_s = timeout_s
        self.tolerance = tessellation_tolerance

    def run(self, script_path: Path, output_mesh_path: Path) -> ExecutionOutcome:
        request = json.dumps(
            {
                "script_path": str(script_path),
                "output_mesh_path": str(output_mesh_path),
                "timeout_s": self.timeout_s,
                "tessellation_tolerance": self.tolerance,
            }
        )
        try:
            proc = subprocess.run(
                self.argv,
                input=request.encode(),
                capture_output=True,
                timeout=self.timeout_s + 30,  # executor enforces the real limit
            )
        except FileNotFoundError as exc:
            raise ExecutorUnavailable(f"executor command not found: {self.argv[0]}") from exc
        except subprocess.TimeoutExpired:
            return ExecutionOutcome(ExecStatus.TIMEOUT, "executor did not respond in time")

        if proc.returncode != 0:
            return ExecutionOutcome(
                ExecStatus.RUNTIME_ERROR,
                f"executor protocol violation: exit {proc.returncode}: "
                f"{proc.stderr.decode(errors='replace')[:500]}",
            )
        try:
            payload = json.loads(proc.stdout.decode())
            status = payload["status"]
            if status not in _SCRIPT_STATUSES:
                raise KeyError(status)
        except (ValueError, KeyError, AttributeError) as exc:
            return ExecutionOutcome(
                ExecStatus.RUNTIME_ERROR,
                f"executor protocol violation: unreadable outcome ({exc})",
            )
        status = ExecStatus(status)
        message = str(payload.get("message", ""))
        if status is ExecStatus.OK:
            mesh_path = Path(payload.get("mesh_path") or output_mesh_path)
            if not mesh_path.is_file():
                return ExecutionOutcome(
                    ExecStatus.RUNTIME_ERROR,
                    "executor reported Ok but wrote no mesh",
                )
            return ExecutionOutcome(status, message, mesh_path)
        return ExecutionOutcome(status, message)


def run_evaluation(
    manifest: list[EvalSample] | str | Path,
    executor_command: str | None = None,
    config: EvalConfig | None = None,
) -> EvalReport:
    """Evaluate every sample; per-sample failures never abort the batch."""
    config = config or EvalConfig()
    if isinstance(manifest, (str, Path)):
        manifest_path = Path(manifest)
        samples = load_manifest(manifest_path)
        default_cache = manifest_path.parent / ".cadeval_cache"
    else:
        samples = list(manifest)
        default_cache = Path(tempfile.gettempdir()) / "cadeval_cache"
    if not samples:
        raise EmptyInput("manifest holds no samples")

    executor = None
    if any(s.needs_executor() for s in samples):
        if executor_command is None:
            raise ExecutorUnavailable(
                "manifest contains scripts or programs but no executor command was given"
            )
        executor = ScriptExecutor(
            executor_command, config.timeout_s, config.tessellation_tolerance
        )
        _probe_executor(executor)

    cache_dir = Path(config.cache_dir) if config.cache_dir else default_cache
    work_dir = Path(tempfile.mkdtemp(prefix="cadeval_run_"))

    def evaluate(sample: EvalSample) -> EvalRow:
        started = time.monotonic()
        try:
            row = _evaluate_sample(sample, executor, config, cache_dir, work_dir)
        except Exception as exc:  # never abort the batch on one sample
            row = EvalRow(
                id=sample.id,
                status=ExecStatus.GROUND_TRUTH_ERROR,
                iou_best=None,
                runtime_ms=0,
                message=f"unexpected failure: {exc}",
            )
        elapsed = int(round((time.monotonic() - started) * 1000))
        return replace(row, runtime_ms=elapsed)

    jobs = max(1, int(config.jobs))
    if jobs == 1 or len(samples) == 1:
        rows = [evaluate(s) for s in samples]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(evaluate, samples))

    rows.sort(key=lambda r: r.id)
    scored = [r for r in rows if r.status is not ExecStatus.GROUND_TRUTH_ERROR]
    for row in rows:
        if row.status is ExecStatus.GROUND_TRUTH_ERROR:
            warnings.warn(
                f"sample {row.id}: ground truth could not be realized and was "
                f"excluded from all metrics ({row.message})",
                stacklevel=2,
            )
    if not scored:
        raise EmptyInput("every sample failed on the ground-truth side")

    n_valid = sum(1 for r in scored if r.status is ExecStatus.OK)
    ious = [r.iou_best for r in scored if r.status is ExecStatus.OK and r.iou_best is not None]
    return EvalReport(
        vsr=n_valid / len(scored),
        mean_iou_best=(sum(ious) / len(ious)) if ious else 0.0,
        n_samples=len(scored),
        n_valid=n_valid,
        rows=tuple(rows),
    )


def _probe_executor(executor: ScriptExecutor) -> None:
    """Fail fast with ExecutorUnavailable when the command cannot spawn."""
    try:
        subprocess.run(
            executor.argv,
            input=b"",
            capture_output=True,
            timeout=30,
        )
    except FileNotFoundError as exc:
        raise ExecutorUnavailable(f"executor command not found: {executor.argv[0]}") from exc
    except subprocess.TimeoutExpired as exc:
        raise ExecutorUnavailable("executor probe timed out") from exc


def _evaluate_sample(
    sample: EvalSample,
    executor: ScriptExecutor | None,
    config: EvalConfig,
    cache_dir: Path,
    work_dir: Path,
) -> EvalRow:
    try:
        gt_mesh = _ground_truth_mesh(sample, executor, config, cache_dir, work_dir)
    except Exception as exc:
        return EvalRow(sample.id, ExecStatus.GROUND_TRUTH_ERROR, None, 0, str(exc))

    if sample.generated_mesh is not None:
        try:
            gen_mesh = load_stl(sample.generated_mesh.read_bytes())
        except CadevalError as exc:
            # the artifact exists but holds no usable solid: scored as zero
            return EvalRow(sample.id, ExecStatus.OK, 0.0, 0, f"unusable mesh: {exc}")
        outcome_status = ExecStatus.OK
        outcome_message = ""
    else:
        out_path = work_dir / f"{_path_hash(sample.generated_script)}_gen.stl"
        outcome = executor.run(sample.generated_script, out_path)
        if outcome.status is not ExecStatus.OK:
            return EvalRow(sample.id, outcome.status, None, 0, outcome.message)
        try:
            gen_mesh = load_stl(outcome.mesh_path.read_bytes())
        except CadevalError as exc:
            return EvalRow(sample.id, ExecStatus.OK, 0.0, 0, f"empty or unusable solid: {exc}")
        outcome_status = outcome.status
        outcome_message = outcome.message

    try:
        result = iou_best(gen_mesh, gt_mesh, resolution=config.resolution)
        value = result.iou
    except CadevalError as exc:
        return EvalRow(sample.id, outcome_status, 0.0, 0, f"metric failed: {exc}")
    return EvalRow(sample.id, outcome_status, value, 0, outcome_message)


def _ground_truth_mesh(
    sample: EvalSample,
    executor: ScriptExecutor | None,
    config: EvalConfig,
    cache_dir: Path,
    work_dir: Path,
) -> TriMesh:
    if sample.ground_truth_mesh is not None:
        return _usable_solid(load_stl(sample.ground_truth_mesh.read_bytes()))

    program_bytes = sample.ground_truth_program.read_bytes()
    key = hashlib.sha256(
        program_bytes + f"|tol={config.tessellation_tolerance}".encode()
    ).hexdigest()[:24]
    cache_dir.mkdir(parents=True, exist_ok=True)
    cached = cache_dir / f"{key}.stl"
    if cached.is_file():
        return load_stl(cached.read_bytes())

    seq = parse_sequence(program_bytes.decode())
    script = _transpile.transpile(seq)
    script_path = cache_dir / f"{key}.py"
    script_path.write_text(script.source)
    out_path = cache_dir / f"{key}_tmp.stl"
    outcome = executor.run(script_path, out_path)
    if outcome.status is not ExecStatus.OK:
        raise CadevalError(
            f"ground-truth program execution failed: {outcome.status.value}: "
            f"{outcome.message}"
        )
    mesh = _usable_solid(load_stl(outcome.mesh_path.read_bytes()))
    os.replace(outcome.mesh_path, cached)
    return mesh


def _usable_solid(mesh: TriMesh) -> TriMesh:
    """Reject ground truths that cannot enter the metric pipeline."""
    mesh.validate_watertight()
    mass_properties(mesh)
    return mesh


def _path_hash(path: Path) -> str:
    return hashlib.sha256(str(path).encode()).hexdigest()[:16]


# --- report emission ---

def emit_report(report: EvalReport, format: str = "structured") -> str:
    """Render a report as structured JSON, a summary table, or CSV."""
    if format == "structured":
        payload = {
            "vsr": report.vsr,
            "mean_iou_best": report.mean_iou_best,
            "n_samples": report.n_samples,
            "n_valid": report.n_valid,
            "rows": [
                {
                    "id": r.id,
                    "status": r.status.value,
                    **({"iou_best": r.iou_best} if r.iou_best is not None else {}),
                    "runtime_ms": r.runtime_ms,
                    **({"message": r.message} if r.message else {}),
                }
                for r in report.rows
            ],
        }
        return json.dumps(payload, indent=1) + "\n"
    if format == "table":
        lines = [
            "VSR | IOU_best",
            f"{round(report.vsr * 100):d}% | {report.mean_iou_best:.3f}",
            "",
            f"{'id':<24} {'status':<18} {'iou_best':>9} {'runtime_ms':>11}",
        ]
        for r in report.rows:
            iou_text = f"{r.iou_best:.3f}" if r.iou_best is not None else "-"
            lines.append(
                f"{r.id:<24} {r.status.value:<18} {iou_text:>9} {r.runtime_ms:>11}"
            )
        return "\n".join(lines) + "\n"
    if format == "csv":
        lines = ["id,status,iou_best,runtime_ms"]
        for r in report.rows:
            iou_text = "" if r.iou_best is None else repr(r.iou_best)
            lines.append(f"{r.id},{r.status.value},{iou_text},{r.runtime_ms}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")


def parse_report(text: str) -> EvalReport:
    """Inverse of emit_report for the structured format."""
    payload = json.loads(text)
    rows = tuple(
        EvalRow(
            id=r["id"],
            status=ExecStatus(r["status"]),
            iou_best=r.get("iou_best"),
            runtime_ms=int(r["runtime_ms"]),
            message=r.get("message", ""),
        )
        for r in payload["rows"]
    )
    return EvalReport(
        vsr=payload["vsr"],
        mean_iou_best=payload["mean_iou_best"],
        n_samples=payload["n_samples"],
        n_valid=payload["n_valid"],
        rows=rows,
    )
