import json

import pytest

from l3_anomaly_platform.core.converter.trace_converters import (
    CSV_HEADER,
    MessageTypeConverter,
    TraceFormat,
    TraceRecordConverter,
)
from l3_anomaly_platform.core.exceptions import MalformedRecordError, TraceParseError
from l3_anomaly_platform.core.models.l3_models import GroundTruth, L3Message, OtherMessage, TelemetryRecord


class TestMessageTypeConverter:
    """Test message-name canonicalization"""

    def test_canonical_name(self):
        assert MessageTypeConverter.canonicalize("RRCSetupRequest") == L3Message.RRC_SETUP_REQUEST

    def test_security_mode_casing(self):
        assert MessageTypeConverter.canonicalize("Securitymodecommand") == L3Message.NAS_SECURITY_MODE_COMMAND
        assert MessageTypeConverter.canonicalize("SecurityModeCommand") == L3Message.RRC_SECURITY_MODE_COMMAND

    def test_unknown_name_is_other(self):
        assert MessageTypeConverter.canonicalize("IdentityRequest") == OtherMessage(text="IdentityRequest")

    def test_empty_name(self):
        with pytest.raises(MalformedRecordError):
            MessageTypeConverter.canonicalize("")


class TestTraceRecordConverter:
    """Test JSON-lines and CSV record parsing"""

    def test_parse_jsonl(self):
        line = json.dumps({"seq": 3, "ue": "ue-1", "msg": "RRCSetup", "rnti": 26168, "tmsi": 0, "label": "benign"})
        record = TraceRecordConverter.parse_record(line)
        assert record.seq == 3
        assert record.msg_type == L3Message.RRC_SETUP
        assert record.rnti == 26168
        assert record.label.is_benign

    def test_parse_csv(self):
        record = TraceRecordConverter.parse_record("7,attacker-1,RRCSetupRequest,12,99,blind_dos", TraceFormat.CSV)
        assert record.seq == 7
        assert record.label.is_blind_dos
        assert record.tmsi == 99

    def test_numeric_strings_accepted(self):
        line = json.dumps({"ue": "ue-1", "msg": "RRCSetup", "rnti": "5", "tmsi": "6", "label": "benign"})
        record = TraceRecordConverter.parse_record(line, default_seq=9)
        assert (record.seq, record.rnti, record.tmsi) == (9, 5, 6)

    @pytest.mark.parametrize("missing", ["msg", "rnti", "tmsi", "ue", "label"])
    def test_missing_field(self, missing):
        fields = {"ue": "ue-1", "msg": "RRCSetup", "rnti": 1, "tmsi": 0, "label": "benign"}
        del fields[missing]
        with pytest.raises(TraceParseError) as exc_info:
            TraceRecordConverter.parse_record(json.dumps(fields), line_no=4)
        assert exc_info.value.field == missing
        assert exc_info.value.line_no == 4

    def test_rnti_out_of_range(self):
        line = json.dumps({"ue": "ue-1", "msg": "RRCSetup", "rnti": 70000, "tmsi": 0, "label": "benign"})
        with pytest.raises(TraceParseError) as exc_info:
            TraceRecordConverter.parse_record(line)
        assert exc_info.value.field == "rnti"

    def test_non_numeric_tmsi(self):
        line = json.dumps({"ue": "ue-1", "msg": "RRCSetup", "rnti": 1, "tmsi": "0x1f", "label": "benign"})
        with pytest.raises(TraceParseError):
            TraceRecordConverter.parse_record(line)

    def test_boolean_is_not_numeric(self):
        line = json.dumps({"ue": "ue-1", "msg": "RRCSetup", "rnti": True, "tmsi": 0, "label": "benign"})
        with pytest.raises(TraceParseError):
            TraceRecordConverter.parse_record(line)

    def test_invalid_json(self):
        with pytest.raises(TraceParseError):
            TraceRecordConverter.parse_record("{not json", line_no=1)

    def test_csv_column_count(self):
        with pytest.raises(TraceParseError):
            TraceRecordConverter.parse_record("1,ue-1,RRCSetup,1", TraceFormat.CSV)

    def test_serialize_keeps_disguised_text(self):
        record = TraceRecordConverter.parse_record(
            json.dumps({"ue": "ue-1", "msg": "RRСSetup", "rnti": 1, "tmsi": 0, "label": "benign"})
        )
        assert json.loads(TraceRecordConverter.serialize_record(record))["msg"] == "RRСSetup"


class TestTraceFiles:
    """Test whole-file reading and writing"""

    def test_csv_file_round_trip(self, tmp_path, small_attack_trace):
        path = tmp_path / "trace.csv"
        TraceRecordConverter.write_trace(path, small_attack_trace)
        assert path.read_text(encoding="utf-8").splitlines()[0] == ",".join(CSV_HEADER)
        assert TraceRecordConverter.read_trace(path) == small_attack_trace

    def test_jsonl_file_round_trip(self, tmp_path, small_attack_trace):
        path = tmp_path / "trace.jsonl"
        TraceRecordConverter.write_trace(path, small_attack_trace)
        assert TraceRecordConverter.read_trace(path) == small_attack_trace

    def test_csv_header_required(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("1,ue-1,RRCSetup,1,0,benign\n", encoding="utf-8")
        with pytest.raises(TraceParseError):
            TraceRecordConverter.read_trace(path)

    def test_seq_must_increase(self, tmp_path):
        path = tmp_path / "trace.jsonl"
        lines = [
            json.dumps({"seq": 5, "ue": "ue-1", "msg": "RRCSetup", "rnti": 1, "tmsi": 0, "label": "benign"}),
            json.dumps({"seq": 5, "ue": "ue-1", "msg": "RRCSetup", "rnti": 1, "tmsi": 0, "label": "benign"}),
        ]
        path.write_text("\n".join(lines), encoding="utf-8")
        with pytest.raises(TraceParseError) as exc_info:
            TraceRecordConverter.read_trace(path)
        assert exc_info.value.line_no == 2

    @pytest.mark.parametrize("suffix", ["jsonl", "csv"])
    def test_unicode_line_breaks_round_trip(self, tmp_path, suffix):
        names = ["RRC\u2028SetupRequest", "RRCSetup\u0085Request", "RRC\nSetup\r\nRequest", "Paging , \"quoted\""]
        records = [
            TelemetryRecord(seq=i, ue_id="ue-1", msg_type=OtherMessage(text=name), rnti=i + 1, tmsi=7,
                            label=GroundTruth.benign())
            for i, name in enumerate(names)
        ]
        path = tmp_path / f"trace.{suffix}"
        TraceRecordConverter.write_trace(path, records)
        assert TraceRecordConverter.read_trace(path) == records

    def test_invalid_utf8_is_a_parse_error(self, tmp_path):
        path = tmp_path / "trace.jsonl"
        line = json.dumps({"ue": "ue-1", "msg": "RRCSetup", "rnti": 1, "tmsi": 0, "label": "benign"})
        path.write_bytes(line.encode("utf-8") + b"\n" + b"{\"msg\": \"\xff\xfe\"}\n")
        with pytest.raises(TraceParseError) as exc_info:
            TraceRecordConverter.read_trace(path)
        assert exc_info.value.line_no == 2

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "trace.jsonl"
        line = json.dumps({"ue": "ue-1", "msg": "RRCSetup", "rnti": 1, "tmsi": 0, "label": "benign"})
        path.write_text(f"{line}\n\n", encoding="utf-8")
        assert len(TraceRecordConverter.read_trace(path)) == 1
