"""One-shot CLI: ExecRequest JSON on stdin, ExecutionOutcome JSON on stdout.

Exit code 0 whenever a classification was produced (including failures);
exit code 2 only when the request itself violates the protocol.
"""

from __future__ import annotations

import sys

from .protocol import ProtocolError, parse_request
from .runner import execute_script


def main(argv=None) -> int:
    raw = sys.stdin.read()
    try:
        request = parse_request(raw)
    except ProtocolError as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return 2
    outcome = execute_script(request)
    sys.stdout.write(outcome.to_json() + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
