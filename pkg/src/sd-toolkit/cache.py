"""
Append-only cache of sweep results.

One JSON object per line: {"version", "q", "classification"}. Entries from
other package versions are ignored. A corrupt file is rebuilt from the valid
entries on the next write, with a warning.

Only the coordinating process writes; workers return results instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json
from pathlib import Path
from typing import Callable, Dict, Iterable, List

from .sd_classify import SdClassification
from .utils import UserError, ensure_dir


CACHE_FILE_NAME = "sweep.jsonl"

LogFn = Callable[[str, str], None]


def _silent(message: str, level: str) -> None:
    return None


@dataclass
class SweepCache:
    path: Path
    version: str
    log: LogFn = _silent
    corrupt: bool = False
    entries: Dict[int, SdClassification] = field(default_factory=dict)

    @classmethod
    def in_dir(cls, cache_dir: Path, version: str, log: LogFn = _silent) -> "SweepCache":
        return cls(cache_dir / CACHE_FILE_NAME, version, log)

    def load(self) -> Dict[int, SdClassification]:
        """Read entries for this version; corruption marks the file for rebuild."""

        self.entries = {}
        self.corrupt = False
        if not self.path.exists():
            return {}
        try:
            lines = self.path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            self.log(f"Cannot read cache {self.path}: {exc}; rebuilding.", "warning")
            self.corrupt = True
            return {}

        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                if raw["version"] != self.version:
                    continue
                entry = SdClassification.from_dict(raw["classification"])
                if entry.q != int(raw["q"]):
                    raise ValueError("q does not match the stored classification")
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                self.log(
                    f"Cache {self.path} is corrupt at line {number} ({exc}); rebuilding.",
                    "warning",
                )
                self.corrupt = True
                continue
            self.entries[entry.q] = entry
        return dict(self.entries)

    def store(self, results: Iterable[SdClassification]) -> int:
        """Append new results (or rewrite the file after corruption). Returns entries written."""

        fresh: List[SdClassification] = [r for r in results if r.q not in self.entries]
        for entry in fresh:
            self.entries[entry.q] = entry
        if not fresh and not self.corrupt:
            return 0

        try:
            ensure_dir(self.path.parent)
            if self.corrupt:
                rows = [self.entries[q] for q in sorted(self.entries)]
                mode = "w"
            else:
                rows = sorted(fresh, key=lambda item: item.q)
                mode = "a"
            with self.path.open(mode, encoding="utf-8") as handle:
                for row in rows:
                    handle.write(self._encode(row))
                    handle.write("\n")
        except OSError as exc:
            raise UserError(f"Failed to write cache {self.path}: {exc}") from exc
        self.corrupt = False
        return len(rows)

    def _encode(self, row: SdClassification) -> str:
        return json.dumps(
            {"version": self.version, "q": row.q, "classification": row.to_dict()},
            sort_keys=True,
            ensure_ascii=True,
        )
