from l3_anomaly_platform.core.models.l3_models import RecordView
from l3_anomaly_platform.core.models.window_models import FormattedRecord

NEW_MESSAGE_MARKER = " (New message)"
RECORD_TEMPLATE = "{msg} with RNTI {rnti}, and TMSI {tmsi}"


class RecordFormatter:
    """Renders records as the one-sentence form the detection prompt uses."""

    @classmethod
    def render(cls, view: RecordView, marked: bool) -> str:
        text = RECORD_TEMPLATE.format(msg=view.message_text, rnti=view.rnti, tmsi=view.tmsi)
        return text + NEW_MESSAGE_MARKER if marked else text

    @classmethod
    def format_record(cls, view: RecordView, is_new: bool) -> FormattedRecord:
        return FormattedRecord(text=cls.render(view, is_new), is_new=is_new, record=view)

    @classmethod
    def format_previous(cls, view: RecordView, mark_previous: bool = False) -> FormattedRecord:
        """The previous same-TMSI record. With `mark_previous` this line
        also carries the new-message marker."""
        return FormattedRecord(text=cls.render(view, mark_previous), is_new=False, record=view)
