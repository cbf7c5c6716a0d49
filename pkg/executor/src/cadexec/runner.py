"""Orchestrates one script execution in an isolated child process."""

from __future__ import annotations

import json
import os
import signal
import subprocess
import sys
import tempfile
from pathlib import Path

from .protocol import ExecRequest, Outcome

_KILL_GRACE_S = 1.0


def execute_script(request: ExecRequest) -> Outcome:
    """Run the script under a hard timeout and classify the result.

    Every failure mode maps to an Outcome; this function does not raise on
    adversarial scripts.  The child runs in its own session so runaway
    process trees are killed as a group.
    """
    if not Path(request.script_path).is_file():
        return Outcome("RuntimeError", f"script not found: {request.script_path}")

    with tempfile.TemporaryDirectory(prefix="cadexec_run_") as workdir:
        outcome_path = os.path.join(workdir, "outcome.json")
        argv = [
            sys.executable,
            "-m",
            "cadexec.child",
            os.path.abspath(request.script_path),
            outcome_path,
            os.path.abspath(request.output_mesh_path),
            repr(request.tessellation_tolerance),
        ]
        proc = subprocess.Popen(
            argv,
            cwd=workdir,
            stdin=subprocess.DEVNULL,
            stdout=subprocess.DEVNULL,
            stderr=subprocess.PIPE,
            start_new_session=True,
        )
        timed_out = False
        try:
            _, stderr = proc.communicate(timeout=request.timeout_s)
        except subprocess.TimeoutExpired:
            timed_out = True
            _kill_tree(proc)
            try:
                _, stderr = proc.communicate(timeout=_KILL_GRACE_S)
            except subprocess.TimeoutExpired:
                stderr = b""

        if timed_out:
            return Outcome(
                "Timeout", f"script exceeded the {request.timeout_s}s time limit"
            )

        try:
            payload = json.loads(Path(outcome_path).read_text())
            outcome = Outcome(
                status=payload["status"],
                message=payload.get("message", ""),
                mesh_path=payload.get("mesh_path"),
            )
        except Exception:
            tail = (stderr or b"").decode(errors="replace")[-500:]
            return Outcome(
                "RuntimeError",
                f"runner child terminated without a result (exit {proc.returncode}): {tail}",
            )

    if outcome.status == "Ok" and not Path(outcome.mesh_path).is_file():
        return Outcome("RuntimeError", "child reported Ok but wrote no mesh file")
    return outcome


def _kill_tree(proc: subprocess.Popen) -> None:
    try:
        os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        try:
            proc.kill()
        except ProcessLookupError:
            pass
