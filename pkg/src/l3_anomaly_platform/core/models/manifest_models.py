from typing import Any, Dict, List

from pydantic import BaseModel, Field


class RunManifest(BaseModel):
    """Everything needed to rerun a CLI command and check its outputs."""
    command: str
    config: Dict[str, Any] = Field(default_factory=dict)
    seeds: Dict[str, int] = Field(default_factory=dict)
    inputs: List[str] = Field(default_factory=list)
    outputs: List[str] = Field(default_factory=list)
    artifact_hashes: Dict[str, str] = Field(default_factory=dict)
    started_at: str = ""
    wall_seconds: float = 0.0
