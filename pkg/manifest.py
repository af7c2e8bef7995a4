"""
Run manifest - records what a run was computed from.

Each simulate/reproduce run writes manifest.json next to its reports so the
run can be repeated and its inputs checked:
- config file and weather files, with SHA-256 content digests
- mode, seed and timestep
- output directory and tool version
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional

from model import CLEAR_SKY


TOOL_VERSION = "1.0.0"
MANIFEST_VERSION = "1.0"


def file_digest(path: Path) -> str:
    """SHA-256 hex digest of a file's content."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    config_path: Optional[str]
    weather_paths: Dict[str, str]
    mode: str
    seed: int
    timestep_minutes: int
    output_dir: str
    tool_version: str = TOOL_VERSION
    digests: Dict[str, str] = field(default_factory=dict)

    def compute_digests(self) -> "RunManifest":
        """Fill digests for the config and every weather file that exists on disk."""
        paths = [self.config_path] if self.config_path else []
        paths += [p for p in self.weather_paths.values() if p != CLEAR_SKY]
        self.digests = {p: file_digest(Path(p)) for p in paths if Path(p).is_file()}
        return self


class ManifestFile:
    """Reads and writes manifest.json in an output directory."""

    def __init__(self, manifest_file: Path):
        self.manifest_file = Path(manifest_file)

    def write(self, manifest: RunManifest):
        """
        Write the manifest to file.

        Args:
            manifest: Run description with digests already computed
        """
        document = {
            "run": asdict(manifest),
            "metadata": {
                "written_at": datetime.now().isoformat(),
                "manifest_version": MANIFEST_VERSION,
            },
        }
        with open(self.manifest_file, "w", encoding="utf-8", newline="\n") as f:
            json.dump(document, f, indent=2)
            f.write("\n")

    def read(self) -> Optional[RunManifest]:
        """
        Read the manifest back.

        Returns:
            RunManifest, or None if the file doesn't exist
        """
        if not self.manifest_file.exists():
            return None

        with open(self.manifest_file, "r", encoding="utf-8") as f:
            return RunManifest(**json.load(f)["run"])

    def verify(self) -> Dict[str, bool]:
        """Recompute digests; maps each recorded input path to whether it is unchanged."""
        manifest = self.read()
        if manifest is None:
            return {}
        return {
            path: Path(path).is_file() and file_digest(Path(path)) == digest
            for path, digest in manifest.digests.items()
        }
