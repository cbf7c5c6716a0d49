"""Wire types for the one-shot executor protocol."""

from __future__ import annotations

import json
from dataclasses import dataclass


class ProtocolError(ValueError):
    """Request object violates the protocol; maps to exit code 2."""


StatusValues = ("Ok", "SyntaxError", "RuntimeError", "Timeout", "NoSolidVariable")


@dataclass(frozen=True)
class ExecRequest:
    script_path: str
    output_mesh_path: str
    timeout_s: int = 60
    tessellation_tolerance: float = 1e-3

    def __post_init__(self):
        if not isinstance(self.timeout_s, int) or not 1 <= self.timeout_s <= 600:
            raise ProtocolError(f"timeout_s must be an integer in [1, 600], got {self.timeout_s!r}")
        if not self.tessellation_tolerance > 0:
            raise ProtocolError("tessellation_tolerance must be > 0")


@dataclass(frozen=True)
class Outcome:
    status: str
    message: str = ""
    mesh_path: str | None = None

    def __post_init__(self):
        if self.status not in StatusValues:
            raise ProtocolError(f"unknown status {self.status!r}")
        if (self.status == "Ok") != (self.mesh_path is not None):
            raise ProtocolError("mesh_path must be present exactly when status is Ok")

    def to_json(self) -> str:
        payload = {"status": self.status, "message": self.message}
        if self.mesh_path is not None:
            payload["mesh_path"] = self.mesh_path
        return json.dumps(payload)


def parse_request(text: str) -> ExecRequest:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"request is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ProtocolError("request must be a JSON object")
    for key in ("script_path", "output_mesh_path"):
        if key not in payload or not isinstance(payload[key], str) or not payload[key]:
            raise ProtocolError(f"request needs a non-empty string {key!r}")
    timeout = payload.get("timeout_s", 60)
    if isinstance(timeout, float) and timeout == int(timeout):
        timeout = int(timeout)
    tolerance = payload.get("tessellation_tolerance", 1e-3)
    if not isinstance(tolerance, (int, float)) or isinstance(tolerance, bool):
        raise ProtocolError("tessellation_tolerance must be a number")
    return ExecRequest(
        script_path=payload["script_path"],
        output_mesh_path=payload["output_mesh_path"],
        timeout_s=timeout,
        tessellation_tolerance=float(tolerance),
    )
