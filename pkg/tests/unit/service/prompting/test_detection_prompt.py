import pytest

from l3_anomaly_platform.core.models.prompt_models import AttackDescription, ChatRole, PromptMode
from l3_anomaly_platform.core.models.window_models import WindowConfig
from l3_anomaly_platform.service.preprocess.window_builder import build_windows
from l3_anomaly_platform.service.prompting.attack_catalog import BLIND_DOS_SHORT
from l3_anomaly_platform.service.prompting.detection_prompt import (
    CUSTOM_COT,
    GENERIC_COT,
    VERDICT_ONLY,
    VERDICT_WITH_REASON,
    build_prompt,
    build_system_prompt,
    description_clause,
)


class TestDescriptionClause:

    def test_lowercases_ordinary_first_word(self):
        assert description_clause("The adversary sends a RRCSetupRequest.") == "the adversary sends a RRCSetupRequest"

    def test_keeps_acronyms(self):
        assert description_clause("RRCSetupRequest carries a spoofed TMSI.") == "RRCSetupRequest carries a spoofed TMSI"
        assert description_clause("TMSI reuse by an attacker") == "TMSI reuse by an attacker"


class TestSystemPrompt:

    def test_lines(self):
        lines = build_system_prompt(BLIND_DOS_SHORT).split("\n")
        assert len(lines) == 5
        assert lines[0] == "You are an expert anomaly detecting assistant in the 5G context."
        assert lines[1].startswith("You know about the Blind DoS attack, where the adversary sends")
        assert lines[-1] == VERDICT_ONLY

    def test_explanation_variant(self):
        assert build_system_prompt(BLIND_DOS_SHORT, explanation_enabled=True).endswith(VERDICT_WITH_REASON)

    def test_other_attack_name(self):
        prompt = build_system_prompt(AttackDescription(name="Null Cipher", body="A null cipher is selected."))
        assert "You know about the Null Cipher attack" in prompt
        assert "contains a Null Cipher attack or not." in prompt


class TestBuildPrompt:
    """Test role layout per prompt mode"""

    def test_zero_shot_with_previous(self, small_attack_trace):
        window = list(build_windows(small_attack_trace, WindowConfig(w=1)))[4]
        bundle = build_prompt(window, BLIND_DOS_SHORT)
        assert [m.role for m in bundle.messages] == [ChatRole.SYSTEM, ChatRole.USER, ChatRole.USER]
        assert bundle.messages[1].content == "Previous message: RegistrationAccept with RNTI 100, and TMSI 777"
        assert bundle.messages[2].content == "RRCSetupRequest with RNTI 300, and TMSI 777 (New message)"

    def test_previous_turn_omitted_without_previous(self, small_attack_trace):
        window = list(build_windows(small_attack_trace, WindowConfig(w=1)))[0]
        bundle = build_prompt(window, BLIND_DOS_SHORT)
        assert [m.role for m in bundle.messages] == [ChatRole.SYSTEM, ChatRole.USER]

    def test_previous_turn_left_out_on_request(self, small_attack_trace):
        window = list(build_windows(small_attack_trace, WindowConfig(w=1)))[4]
        bundle = build_prompt(window, BLIND_DOS_SHORT, include_previous=False)
        assert [m.role for m in bundle.messages] == [ChatRole.SYSTEM, ChatRole.USER]
        assert bundle.messages[1].content == "RRCSetupRequest with RNTI 300, and TMSI 777 (New message)"
        assert not any(m.content.startswith("Previous message") for m in bundle.messages)

    def test_window_records_in_one_turn(self, small_attack_trace):
        window = list(build_windows(small_attack_trace, WindowConfig(w=3)))[-1]
        records_turn = build_prompt(window, BLIND_DOS_SHORT).turns(ChatRole.USER)[-1].split("\n")
        assert len(records_turn) == 3
        assert records_turn[-1].endswith("(New message)")

    @pytest.mark.parametrize("mode,assistant", [
        (PromptMode.ZERO_SHOT, []),
        (PromptMode.GENERIC_COT, [GENERIC_COT]),
        (PromptMode.CUSTOM_COT, [CUSTOM_COT]),
    ])
    def test_modes(self, reference_window, mode, assistant):
        bundle = build_prompt(reference_window, BLIND_DOS_SHORT, mode)
        assert bundle.turns(ChatRole.ASSISTANT) == assistant
        assert bundle.messages[-1].role == (ChatRole.ASSISTANT if assistant else ChatRole.USER)

    def test_no_ground_truth_leaks(self, small_attack_trace):
        for window in build_windows(small_attack_trace, WindowConfig(w=2)):
            text = "\n".join(m.content for m in build_prompt(window, BLIND_DOS_SHORT).messages)
            assert "blind_dos" not in text
            assert "attacker" not in text
            assert "attacked" not in text.lower()
