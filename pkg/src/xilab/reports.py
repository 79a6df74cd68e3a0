"""Run manifests, version strings and small report helpers."""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path


def get_version() -> str:
    """Package version, suffixed with the git description when available."""
    try:
        base = metadata.version("xilab")
    except metadata.PackageNotFoundError:
        base = "0.0.0+uninstalled"
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True, text=True, timeout=5,
            cwd=Path(__file__).resolve().parent,
        )
        if out.returncode == 0 and out.stdout.strip():
            return f"{base}+g{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return base


def utc_now() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


@dataclass
class RunManifest:
    """Everything needed to reproduce a CLI run byte-for-byte.

    Re-running the recorded command with the recorded config reproduces
    identical data files; the timestamps describe this particular run.
    """

    command: str
    params: dict
    seed: int | None
    version: str = field(default_factory=get_version)
    started: str = field(default_factory=utc_now)
    finished: str = ""
    outputs: list[str] = field(default_factory=list)

    def add_output(self, path) -> str:
        self.outputs.append(str(path))
        return str(path)

    def close(self):
        self.finished = utc_now()

    def write(self, path):
        self.close()
        payload = {
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "version": self.version,
            "started": self.started,
            "finished": self.finished,
            "outputs": self.outputs,
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def write_json(payload: dict, path):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
