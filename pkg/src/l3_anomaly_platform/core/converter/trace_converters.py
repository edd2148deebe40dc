import csv
import io
import json
import logging
import re
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple, Union

from l3_anomaly_platform.core.atomic_io import write_text_atomic
from l3_anomaly_platform.core.exceptions import MalformedRecordError, TraceParseError
from l3_anomaly_platform.core.models.l3_models import (
    CANONICAL_NAMES,
    RNTI_MAX,
    TMSI_MAX,
    GroundTruth,
    L3Message,
    MessageType,
    OtherMessage,
    TelemetryRecord,
    render_message_type,
)

logger = logging.getLogger(__name__)

CSV_HEADER = ["seq", "ue", "msg", "rnti", "tmsi", "label"]
MANDATORY_FIELDS = ("msg", "rnti", "tmsi", "ue", "label")
SEQ_MAX = 2**63 - 1

_DIGITS = re.compile(r"\d+", re.ASCII)
_BLIND_DOS_ALIASES = {"blind_dos", "blinddos", "blind-dos", "blind dos"}

# Both security-mode procedures share a name in raw captures; the casing
# tells them apart (NAS logs them lower-camel, RRC upper-camel).
_SECURITY_MODE_RENAMES: Dict[str, L3Message] = {
    "Securitymodecommand": L3Message.NAS_SECURITY_MODE_COMMAND,
    "Securitymodecomplete": L3Message.NAS_SECURITY_MODE_COMPLETE,
    "SecurityModeCommand": L3Message.RRC_SECURITY_MODE_COMMAND,
    "SecurityModeComplete": L3Message.RRC_SECURITY_MODE_COMPLETE,
}


class TraceFormat(str, Enum):
    JSONL = "jsonl"
    CSV = "csv"

    @classmethod
    def for_path(cls, path: Union[str, Path]) -> "TraceFormat":
        return cls.CSV if Path(path).suffix.lower() == ".csv" else cls.JSONL


class MessageTypeConverter:
    """Maps raw message names onto the canonical Layer-3 vocabulary."""

    @staticmethod
    def canonicalize(raw: str) -> MessageType:
        if not raw:
            raise MalformedRecordError("message type must be nonempty")
        if raw in _SECURITY_MODE_RENAMES:
            return _SECURITY_MODE_RENAMES[raw]
        if raw in CANONICAL_NAMES:
            return L3Message(raw)
        return OtherMessage(text=raw)


class GroundTruthConverter:

    @staticmethod
    def parse(text: str) -> GroundTruth:
        normalized = text.strip().lower()
        if normalized == "benign":
            return GroundTruth.benign()
        if normalized in _BLIND_DOS_ALIASES:
            return GroundTruth.blind_dos()
        return GroundTruth.other_attack(text)

    @staticmethod
    def render(label: GroundTruth) -> str:
        return label.tag


class TraceRecordConverter:
    """Converts telemetry records to and from JSON-lines and CSV trace lines."""

    @staticmethod
    def _identifier(value: Any, field: str, maximum: int, bits: int, line_no: Optional[int]) -> int:
        if isinstance(value, bool) or value is None:
            raise TraceParseError(f"{field} is not numeric", field, line_no)
        if isinstance(value, int):
            number = value
        elif isinstance(value, str) and _DIGITS.fullmatch(value.strip()):
            number = int(value.strip())
        else:
            raise TraceParseError(f"{field} is not numeric", field, line_no)

        if number < 0 or number > maximum:
            raise TraceParseError(f"{field} out of {bits}-bit range", field, line_no)
        return number

    @classmethod
    def _from_fields(cls, fields: Dict[str, Any], line_no: Optional[int], default_seq: int) -> TelemetryRecord:
        for name in MANDATORY_FIELDS:
            if name not in fields or fields[name] is None or fields[name] == "":
                raise TraceParseError(f"missing field '{name}'", name, line_no)

        raw_msg = fields["msg"]
        if not isinstance(raw_msg, str):
            raise TraceParseError("msg must be text", "msg", line_no)
        try:
            msg_type = MessageTypeConverter.canonicalize(raw_msg)
        except MalformedRecordError as e:
            raise TraceParseError(e.message, "msg", line_no)

        seq_value = fields.get("seq")
        seq = default_seq if seq_value in (None, "") else cls._identifier(seq_value, "seq", SEQ_MAX, 63, line_no)

        try:
            label = GroundTruthConverter.parse(str(fields["label"]))
        except ValueError as e:
            raise TraceParseError(f"invalid label: {e}", "label", line_no)

        return TelemetryRecord(
            seq=seq,
            ue_id=str(fields["ue"]),
            msg_type=msg_type,
            rnti=cls._identifier(fields["rnti"], "rnti", RNTI_MAX, 16, line_no),
            tmsi=cls._identifier(fields["tmsi"], "tmsi", TMSI_MAX, 32, line_no),
            label=label,
        )

    @classmethod
    def parse_record(
        cls,
        line: str,
        fmt: TraceFormat = TraceFormat.JSONL,
        line_no: Optional[int] = None,
        default_seq: int = 0,
    ) -> TelemetryRecord:
        if fmt == TraceFormat.CSV:
            return cls._from_row(next(csv.reader(io.StringIO(line, newline="")), []), line_no, default_seq)

        try:
            fields = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceParseError(f"invalid JSON: {e.msg}", None, line_no)
        if not isinstance(fields, dict):
            raise TraceParseError("record must be a JSON object", None, line_no)
        return cls._from_fields(fields, line_no, default_seq)

    @classmethod
    def _from_row(cls, row: List[str], line_no: Optional[int], default_seq: int) -> TelemetryRecord:
        if len(row) != len(CSV_HEADER):
            raise TraceParseError(f"expected {len(CSV_HEADER)} columns, got {len(row)}", None, line_no)
        return cls._from_fields(dict(zip(CSV_HEADER, row)), line_no, default_seq)

    @staticmethod
    def serialize_record(record: TelemetryRecord, fmt: TraceFormat = TraceFormat.JSONL) -> str:
        if fmt == TraceFormat.JSONL:
            return json.dumps({
                "seq": record.seq,
                "ue": record.ue_id,
                "msg": render_message_type(record.msg_type),
                "rnti": record.rnti,
                "tmsi": record.tmsi,
                "label": GroundTruthConverter.render(record.label),
            }, ensure_ascii=False)

        # keep the default "\r\n" terminator so fields holding either character are quoted
        buffer = io.StringIO(newline="")
        writer = csv.writer(buffer)
        writer.writerow([
            record.seq,
            record.ue_id,
            render_message_type(record.msg_type),
            record.rnti,
            record.tmsi,
            GroundTruthConverter.render(record.label),
        ])
        return buffer.getvalue().removesuffix("\r\n")

    @staticmethod
    def _read_text(path: Union[str, Path]) -> str:
        data = Path(path).read_bytes()
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise TraceParseError(f"invalid UTF-8 at byte {e.start}", None, data.count(b"\n", 0, e.start) + 1)

    @classmethod
    def _csv_records(cls, text: str) -> Iterator[Tuple[int, TelemetryRecord]]:
        reader = csv.reader(io.StringIO(text, newline=""))
        if next(reader, None) != CSV_HEADER:
            raise TraceParseError(f"CSV header must be {','.join(CSV_HEADER)}", None, 1)
        count = 0
        for row in reader:
            if not row or not any(cell.strip() for cell in row):
                continue
            yield reader.line_num, cls._from_row(row, reader.line_num, count)
            count += 1

    @classmethod
    def _jsonl_records(cls, text: str) -> Iterator[Tuple[int, TelemetryRecord]]:
        # JSON escapes "\n" but writes U+2028, U+0085 and friends raw, so only "\n" ends a record
        count = 0
        for line_no, line in enumerate(text.split("\n"), start=1):
            if not line.strip():
                continue
            yield line_no, cls.parse_record(line, TraceFormat.JSONL, line_no=line_no, default_seq=count)
            count += 1

    @classmethod
    def read_trace(cls, path: Union[str, Path], fmt: Optional[TraceFormat] = None) -> List[TelemetryRecord]:
        fmt = fmt or TraceFormat.for_path(path)
        text = cls._read_text(path)
        parsed = cls._csv_records(text) if fmt == TraceFormat.CSV else cls._jsonl_records(text)

        records: List[TelemetryRecord] = []
        for line_no, record in parsed:
            if records and record.seq <= records[-1].seq:
                raise TraceParseError("seq must be strictly increasing", "seq", line_no)
            records.append(record)

        logger.info("Read %d records from %s", len(records), path)
        return records

    @classmethod
    def write_trace(
        cls,
        path: Union[str, Path],
        records: Iterable[TelemetryRecord],
        fmt: Optional[TraceFormat] = None,
    ) -> Path:
        fmt = fmt or TraceFormat.for_path(path)
        lines = [cls.serialize_record(record, fmt) for record in records]
        if fmt == TraceFormat.CSV:
            lines.insert(0, ",".join(CSV_HEADER))
        target = write_text_atomic(path, "\n".join(lines) + ("\n" if lines else ""))
        logger.info("Wrote %d lines to %s", len(lines), target)
        return target
