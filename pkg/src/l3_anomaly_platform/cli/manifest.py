import argparse
import json
import logging
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from l3_anomaly_platform.core.atomic_io import sha256_file, write_text_atomic
from l3_anomaly_platform.core.models.manifest_models import RunManifest

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"
# Namespace entries that are plumbing rather than configuration.
_NOT_CONFIG = {"handler", "command"}


def manifest_path_for(command: str, out: Optional[Union[str, Path]], explicit: Optional[Union[str, Path]] = None) -> Path:
    if explicit:
        return Path(explicit)
    if out is None:
        return Path(f"{command}{MANIFEST_SUFFIX}")
    out = Path(out)
    if out.is_dir() or not out.suffix:
        return out / f"{command}{MANIFEST_SUFFIX}"
    return out.with_name(out.name + MANIFEST_SUFFIX)


def _plain(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if hasattr(value, "value"):
        return value.value
    return value


class ManifestRecorder:
    """Collects what one CLI command read, wrote and was configured with."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.config: Dict[str, Any] = {
            key: _plain(value) for key, value in sorted(vars(args).items()) if key not in _NOT_CONFIG
        }
        self.seeds: Dict[str, int] = {}
        self.inputs: List[Path] = []
        self.outputs: List[Path] = []
        self._started_at = datetime.now(timezone.utc).isoformat()
        self._start = time.perf_counter()

    def seed(self, name: str, value: int) -> None:
        self.seeds[name] = value

    def read(self, path: Union[str, Path]) -> Path:
        self.inputs.append(Path(path))
        return Path(path)

    def wrote(self, path: Union[str, Path]) -> Path:
        self.outputs.append(Path(path))
        return Path(path)

    def build(self) -> RunManifest:
        return RunManifest(
            command=self.command,
            config=self.config,
            seeds=self.seeds,
            inputs=[str(path) for path in self.inputs],
            outputs=[str(path) for path in self.outputs],
            artifact_hashes={str(path): sha256_file(path) for path in self.outputs if path.is_file()},
            started_at=self._started_at,
            wall_seconds=time.perf_counter() - self._start,
        )

    def write(self, path: Union[str, Path]) -> Path:
        manifest = self.build()
        target = write_text_atomic(path, json.dumps(manifest.model_dump(mode="json"), indent=2) + "\n")
        logger.info("Wrote manifest %s", target)
        return target
