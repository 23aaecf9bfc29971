"""The persisted script registry.

One JSON file with the exact schema
`{"scripts": [{"userPrompt": ..., "scriptContent": ..., "drawUI": ...}]}`.
Titles are unique case-insensitively and lookups ignore case, matching
how running scripts are keyed.  Saves go through a temp file + rename so
a crash can never truncate the registry.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path


class RegistryError(Exception):
    pass


@dataclass(frozen=True)
class ScriptRecord:
    userPrompt: str
    scriptContent: str
    drawUI: bool = True

    def to_json(self) -> dict:
        return {
            "userPrompt": self.userPrompt,
            "scriptContent": self.scriptContent,
            "drawUI": self.drawUI,
        }

    @staticmethod
    def from_json(obj: dict) -> "ScriptRecord":
        if not isinstance(obj, dict):
            raise RegistryError(f"script entry must be an object, found {type(obj).__name__}")
        missing = {"userPrompt", "scriptContent", "drawUI"} - set(obj)
        if missing:
            raise RegistryError(f"script entry missing fields: {sorted(missing)}")
        if not isinstance(obj["userPrompt"], str) or not isinstance(obj["scriptContent"], str):
            raise RegistryError("userPrompt and scriptContent must be strings")
        if not isinstance(obj["drawUI"], bool):
            raise RegistryError("drawUI must be a boolean")
        return ScriptRecord(
            userPrompt=obj["userPrompt"],
            scriptContent=obj["scriptContent"],
            drawUI=obj["drawUI"],
        )


class ScriptRegistry:
    """Ordered collection of records with case-insensitive title keys."""

    def __init__(self, records: list[ScriptRecord] | None = None):
        self.records: list[ScriptRecord] = []
        for record in records or []:
            if self.lookup(record.userPrompt) is not None:
                raise RegistryError(f"duplicate title {record.userPrompt!r}")
            self.records.append(record)

    def lookup(self, title: str) -> ScriptRecord | None:
        key = title.casefold()
        for record in self.records:
            if record.userPrompt.casefold() == key:
                return record
        return None

    def upsert(self, record: ScriptRecord) -> None:
        key = record.userPrompt.casefold()
        for i, existing in enumerate(self.records):
            if existing.userPrompt.casefold() == key:
                self.records[i] = record
                return
        self.records.append(record)

    def set_draw_ui(self, title: str, value: bool) -> bool:
        """Flip one record's drawUI flag; False when the title is unknown."""
        record = self.lookup(title)
        if record is None:
            return False
        self.upsert(
            ScriptRecord(
                userPrompt=record.userPrompt,
                scriptContent=record.scriptContent,
                drawUI=value,
            )
        )
        return True

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


def registry_load(path: str | Path) -> ScriptRegistry:
    """Load a registry; a missing file is an empty registry, a malformed
    file is an error (never a silent truncation)."""
    path = Path(path)
    if not path.exists():
        return ScriptRegistry()
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise RegistryError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(payload, dict) or "scripts" not in payload:
        raise RegistryError(f"{path}: expected an object with a 'scripts' array")
    scripts = payload["scripts"]
    if not isinstance(scripts, list):
        raise RegistryError(f"{path}: 'scripts' must be an array")
    return ScriptRegistry([ScriptRecord.from_json(entry) for entry in scripts])


def registry_save(path: str | Path, registry: ScriptRegistry) -> None:
    """Atomically write the registry (temp file in place, then rename)."""
    path = Path(path)
    payload = {"scripts": [record.to_json() for record in registry.records]}
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    fd, tmp_name = tempfile.mkstemp(
        dir=path.parent if path.parent.as_posix() else ".", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
