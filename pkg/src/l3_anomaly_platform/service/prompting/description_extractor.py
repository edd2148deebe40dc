import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List

from l3_anomaly_platform.core.client.llm_gateway.chat_backend import ChatBackend
from l3_anomaly_platform.core.exceptions import BackendError, ConfigurationError
from l3_anomaly_platform.core.formatter.extract_regex_formatter import ExtractRegexFormatter
from l3_anomaly_platform.core.models.llm_models import BackendConfig, LLMRequest
from l3_anomaly_platform.core.models.prompt_models import (
    AttackDescription,
    ChatMessage,
    ChatRole,
    LintedDescription,
    PromptBundle,
)
from l3_anomaly_platform.service.prompting.description_linter import lint

logger = logging.getLogger(__name__)

SYSTEM_PROMPT: str = """
You are a 5G security analyst. You read attack reports, vulnerability notes and protocol
specifications and distil the underlying idea of an attack for an anomaly detector that
only sees RRC and NAS messages with their RNTI and TMSI values.
"""

USER_PROMPT: str = """
Summarise the {name} attack described below so that it can be recognised from a stream of RRC/NAS messages.

<attack_information>
{source_text}
</attack_information>

Write a concise description of at most three sentences. Output the description in <description> tags:
"<description>...</description>" without additional explanation or commentary.
"""

DESCRIPTION_REGEX = r"<description>(.*?)</description>"


def build_extraction_bundle(source_text: str, name: str) -> PromptBundle:
    return PromptBundle(messages=(
        ChatMessage(role=ChatRole.SYSTEM, content=SYSTEM_PROMPT.strip()),
        ChatMessage(role=ChatRole.USER, content=USER_PROMPT.format(name=name, source_text=source_text.strip()).strip()),
    ))


def extract_description(
    source_text: str,
    backend: ChatBackend,
    samples: int,
    config: BackendConfig,
    name: str = "Blind DoS",
) -> List[LintedDescription]:
    """
    Ask the backend `samples` times (temperature 1) for a short attack description.

    Calls run concurrently, at most `config.max_in_flight` at a time. Results keep
    request order and each comes back linted.
    """
    if not source_text or not source_text.strip():
        raise ConfigurationError("attack source text must be nonempty")
    if samples < 1:
        raise ConfigurationError(f"samples must be at least 1, got {samples}")

    extraction = config.for_extraction()
    request = LLMRequest(
        bundle=build_extraction_bundle(source_text, name),
        model_id=extraction.model,
        hyperparams=extraction.hyperparams(),
    )

    def _sample(index: int) -> LintedDescription:
        try:
            response = backend.chat_invoke(request)
        except BackendError as e:
            raise BackendError(e.message, e.elapsed_ms, request_index=index)

        body = ExtractRegexFormatter.extract_response(response.text, DESCRIPTION_REGEX) or response.text.strip()
        if not body:
            raise BackendError("backend returned an empty description", request_index=index)
        try:
            description = AttackDescription(name=name, body=body)
        except ValueError as e:
            raise BackendError(f"unusable description: {e}", request_index=index)
        return lint(description)

    with ThreadPoolExecutor(max_workers=extraction.max_in_flight) as pool:
        results = list(pool.map(_sample, range(samples)))

    logger.info("Extracted %d %s descriptions", len(results), name)
    return results
