"""
Run recording and result records.

Why this exists:
- Every command produces one JSON result record with inputs and payload.
- Logging goes through one place so messages are consistent and captured.

Default records are deterministic: wall time and the log timeline are only
added when timing is requested or the record is written to a file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
import json
from pathlib import Path
import sys
import time
from typing import Any, Dict, List, TextIO

from .utils import UserError, ensure_dir


SCHEMA_VERSION = 1

STATUS_OK = "ok"
STATUS_CHECK_FAILED = "check_failed"


def _iso_now() -> str:
    """Return an ISO-8601 timestamp in UTC."""

    return datetime.now(timezone.utc).isoformat()


@dataclass
class RunRecorder:
    """
    Collect logs for one command, then assemble its result record.

    Console output goes to stderr so stdout stays clean for results.
    """

    tool_name: str
    tool_version: str
    command: str
    inputs: Dict[str, Any]
    verbosity: str = "normal"
    console_stream: TextIO = field(default_factory=lambda: sys.stderr)
    started_at: str = field(default_factory=_iso_now)
    started_clock: float = field(default_factory=time.perf_counter)
    logs: List[Dict[str, Any]] = field(default_factory=list)

    def log(self, message: str, level: str = "info") -> None:
        """Record a log message and also print it to the console."""

        entry = {"timestamp": _iso_now(), "level": level, "message": message}
        self.logs.append(entry)

        if self.verbosity == "quiet":
            should_print = level == "error"
        elif self.verbosity == "verbose":
            should_print = True
        else:
            should_print = level in {"info", "warning", "error"}

        if should_print:
            rendered = f"[{level}] {message}" if self.verbosity == "verbose" else message
            print(rendered, file=self.console_stream)

    def elapsed(self) -> float:
        return time.perf_counter() - self.started_clock

    def build_record(
        self,
        payload: Dict[str, Any],
        status: str = STATUS_OK,
        include_timing: bool = False,
    ) -> Dict[str, Any]:
        """Assemble the result record."""

        record: Dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "tool": self.tool_name,
            "version": self.tool_version,
            "command": self.command,
            "inputs": self.inputs,
            "payload": payload,
            "status": status,
        }
        if include_timing:
            record["started_at"] = self.started_at
            record["wall_time_s"] = round(self.elapsed(), 6)
            record["logs"] = self.logs
        return record

    def write_record(self, path: Path, record: Dict[str, Any]) -> None:
        """Write a record (with timing and logs) to a file."""

        try:
            ensure_dir(path.parent)
            with path.open("w", encoding="utf-8") as handle:
                handle.write(render_json(record))
                handle.write("\n")
        except OSError as exc:
            raise UserError(f"Failed to write record {path}: {exc}") from exc
        self.log(f"Wrote record to {path}", level="debug")


def render_json(record: Dict[str, Any]) -> str:
    """Sorted keys, ASCII only, so equal records render to equal bytes."""

    return json.dumps(record, indent=2, sort_keys=True, ensure_ascii=True)
