import pytest

from l3_anomaly_platform.core.exceptions import ConfigurationError
from l3_anomaly_platform.service.sdl_sim.trace_store import PRE_START, PollCursor, TraceStore


class TestTraceStore:
    """Test the append-only store and cursor polling"""

    def test_store_assigns_seq(self, small_attack_trace):
        store = TraceStore()
        seqs = store.extend(record.with_seq(100 + i) for i, record in enumerate(small_attack_trace))
        assert seqs == list(range(len(small_attack_trace)))
        assert [record.seq for record in store.snapshot()] == seqs
        assert store.next_seq == len(small_attack_trace)

    def test_poll_in_batches(self, small_attack_trace):
        store = TraceStore()
        store.extend(small_attack_trace)

        cursor = PollCursor()
        assert cursor.position == PRE_START
        batch, cursor = store.poll(cursor, 4)
        assert [record.seq for record in batch] == [0, 1, 2, 3]
        assert cursor.position == 3

        batch, cursor = store.poll(cursor, 4)
        assert [record.seq for record in batch] == [4, 5]

        empty, same = store.poll(cursor, 4)
        assert empty == []
        assert same == cursor

    def test_poll_sees_later_appends(self, small_attack_trace):
        store = TraceStore()
        store.append(small_attack_trace[0])
        _, cursor = store.poll(PollCursor(), 10)
        store.append(small_attack_trace[1])
        batch, _ = store.poll(cursor, 10)
        assert len(batch) == 1
        assert batch[0].seq == 1

    def test_readers_are_independent(self, small_attack_trace):
        store = TraceStore()
        store.extend(small_attack_trace)
        first, _ = store.poll(PollCursor(), 2)
        second, _ = store.poll(PollCursor(), 2)
        assert first == second

    def test_batch_size_validated(self):
        with pytest.raises(ConfigurationError):
            TraceStore().poll(PollCursor(), 0)

    def test_save_and_load(self, tmp_path, small_attack_trace):
        store = TraceStore()
        store.extend(small_attack_trace)
        path = store.save(tmp_path / "sdl.jsonl")
        assert TraceStore.load(path).snapshot() == store.snapshot()
