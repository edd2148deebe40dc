import pytest

from l3_anomaly_platform.core.converter.description_converters import DescriptionConverter
from l3_anomaly_platform.core.exceptions import ConfigurationError
from l3_anomaly_platform.core.models.prompt_models import AttackDescription


class TestDescriptionConverter:

    def test_round_trip(self, tmp_path):
        descriptions = [
            AttackDescription(body="First description."),
            AttackDescription(name="Null Cipher", body="Second.", group="Not"),
        ]
        path = DescriptionConverter.write_descriptions(tmp_path / "desc.jsonl", descriptions)
        assert DescriptionConverter.read_descriptions(path) == descriptions
        assert '"group"' not in path.read_text(encoding="utf-8").splitlines()[0]

    def test_name_defaults(self):
        assert DescriptionConverter.parse_line('{"body": "text"}', 1).name == "Blind DoS"

    def test_blank_body(self):
        with pytest.raises(ConfigurationError, match="line 3"):
            DescriptionConverter.parse_line('{"body": "   "}', 3)

    def test_invalid_line(self):
        with pytest.raises(ConfigurationError, match="line 2"):
            DescriptionConverter.parse_line('{"name": "x"}', 2)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            DescriptionConverter.read_descriptions(path)
