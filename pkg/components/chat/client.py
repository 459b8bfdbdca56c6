import logging

from openai import OpenAI

from components.config import LLM_KEY_ENV, ModelConfig, api_key
from components.errors import AuthError

logger = logging.getLogger(__name__)


def init_chat_client(cfg: ModelConfig) -> OpenAI:
    """OpenAI-compatible client for the configured endpoint, key from the environment"""
    key = api_key(LLM_KEY_ENV)
    if not key:
        raise AuthError(f"{LLM_KEY_ENV} is not set")
    # Retries are driven by handlers.complete so attempts and backoff stay visible.
    logger.debug("Chat client for %s (%s)", cfg.endpoint, cfg.model_name)
    return OpenAI(api_key=key, base_url=cfg.endpoint, timeout=cfg.request_timeout, max_retries=0)
