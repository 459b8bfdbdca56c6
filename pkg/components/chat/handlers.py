import logging
import re
import threading
import time
from dataclasses import dataclass

import openai

from components.config import ModelConfig
from components.errors import AuthError, CompletionRejected, EmptyCompletion, TransportError

from .prompts import get_messages, request_body, request_hash
from .responses import Cassette, get_predefined_response

logger = logging.getLogger(__name__)

_FENCE = re.compile(r"```[^\n]*\n(.*?)\n?```", re.DOTALL)
_RETRYABLE = (
    openai.APIConnectionError,
    openai.APITimeoutError,
    openai.RateLimitError,
    openai.InternalServerError,
)

# One semaphore per configured limit, shared by every thread of the process.
_slots_lock = threading.Lock()
_slots: dict[int, threading.BoundedSemaphore] = {}


def in_flight_slots(limit: int) -> threading.BoundedSemaphore:
    with _slots_lock:
        if limit not in _slots:
            _slots[limit] = threading.BoundedSemaphore(limit)
        return _slots[limit]


@dataclass(frozen=True)
class GeneratedCode:
    raw_response: str
    code: str
    model_name: str
    latency: float = 0.0
    sample: int = 0


def extract_code(response: str) -> str:
    """Interior of the first fenced block, else the whole response."""
    match = _FENCE.search(response)
    code = match.group(1) if match else response.strip()
    if not code.strip():
        raise EmptyCompletion()
    return code


def _ask_model(client, body: dict, cfg: ModelConfig) -> str:
    attempts = cfg.retries + 1
    for attempt in range(1, attempts + 1):
        try:
            with in_flight_slots(cfg.max_in_flight):
                api_response = client.chat.completions.create(**body, timeout=cfg.request_timeout)
            return api_response.choices[0].message.content or ""
        except (openai.AuthenticationError, openai.PermissionDeniedError) as e:
            raise AuthError(f"endpoint rejected the credentials: {e}") from e
        except _RETRYABLE as e:
            if attempt == attempts:
                raise TransportError(f"chat request to {cfg.endpoint} failed: {e}", attempts) from e
            delay = cfg.backoff_base * 2 ** (attempt - 1)
            logger.warning("Attempt %d/%d failed (%s), retrying in %.1fs", attempt, attempts, e, delay)
            time.sleep(delay)
        except openai.APIError as e:
            raise CompletionRejected(f"chat request to {cfg.endpoint} rejected: {e}") from e
    raise TransportError(f"chat request to {cfg.endpoint} failed", attempts)


def complete(prompt, cfg: ModelConfig, client=None, sample: int = 0) -> GeneratedCode:
    """Send one chat request for the prompt and extract the generated code.

    ``cfg.provider`` picks the backend: ``openai`` (any compatible endpoint,
    recording to ``cfg.cassette`` when set), ``replay`` (cassette only) or
    ``mock`` (offline template expansion of the prompt). At most
    ``cfg.max_in_flight`` requests to the endpoint are open at once.
    """
    started = time.perf_counter()
    body = request_body(prompt, cfg)

    if cfg.provider == "mock":
        response = get_predefined_response(prompt, cfg.canned_answer)
        latency = 0.0
    elif cfg.provider == "replay":
        if not cfg.cassette:
            raise TransportError("replay provider needs a cassette file", 0)
        response = Cassette(cfg.cassette).replay(request_hash(body))
        latency = 0.0
    else:
        if client is None:
            from .client import init_chat_client

            client = init_chat_client(cfg)
        logger.debug("Sending %d messages to %s", len(get_messages(prompt)), cfg.model_name)
        response = _ask_model(client, body, cfg)
        latency = time.perf_counter() - started
        if cfg.cassette:
            Cassette(cfg.cassette).record(request_hash(body), response)

    if not response or not response.strip():
        raise EmptyCompletion()
    return GeneratedCode(response, extract_code(response), cfg.model_name, latency, sample)


def complete_samples(prompt, cfg: ModelConfig, client=None) -> list[GeneratedCode]:
    return [complete(prompt, cfg, client, sample=k) for k in range(cfg.samples)]
