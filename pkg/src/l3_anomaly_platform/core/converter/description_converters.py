import json
import logging
from pathlib import Path
from typing import Iterable, List, Union

from pydantic import ValidationError

from l3_anomaly_platform.core.atomic_io import write_text_atomic
from l3_anomaly_platform.core.exceptions import ConfigurationError
from l3_anomaly_platform.core.models.prompt_models import AttackDescription

logger = logging.getLogger(__name__)


class DescriptionConverter:
    """JSON-lines description files: one {"name", "body", "group"?} object per line."""

    @staticmethod
    def parse_line(line: str, line_no: int) -> AttackDescription:
        try:
            return AttackDescription.model_validate_json(line)
        except ValidationError as e:
            raise ConfigurationError(f"line {line_no}: invalid description ({e.errors()[0]['msg']})")

    @classmethod
    def read_descriptions(cls, path: Union[str, Path]) -> List[AttackDescription]:
        with open(path, encoding="utf-8") as handle:
            lines = handle.read().splitlines()
        descriptions = [cls.parse_line(line, line_no) for line_no, line in enumerate(lines, start=1) if line.strip()]
        if not descriptions:
            raise ConfigurationError(f"{path} contains no descriptions")
        logger.info("Read %d descriptions from %s", len(descriptions), path)
        return descriptions

    @staticmethod
    def write_descriptions(path: Union[str, Path], descriptions: Iterable[AttackDescription]) -> Path:
        lines = [
            json.dumps(description.model_dump(exclude_none=True), ensure_ascii=False)
            for description in descriptions
        ]
        return write_text_atomic(path, "\n".join(lines) + ("\n" if lines else ""))
