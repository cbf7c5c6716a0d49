"""cadexec: one-shot sandboxed runner for CadQuery scripts.

Reads an ExecRequest JSON object on stdin, executes the script in a fresh
child process with a hard timeout, verifies the final-`solid` convention,
tessellates the result to binary STL, and writes an ExecutionOutcome JSON
object on stdout.  Every failure mode is an outcome, never a crash.
"""

from .protocol import ExecRequest, Outcome, StatusValues
from .runner import execute_script

__version__ = "0.1.0"

__all__ = ["ExecRequest", "Outcome", "StatusValues", "execute_script"]
