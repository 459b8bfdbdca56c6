"""Completer: chat-completion requests for a prompt, with mock and replay providers."""

from components.chat.handlers import GeneratedCode, complete, complete_samples, extract_code
from components.chat.prompts import request_body, request_hash, serialize_body

__all__ = [
    "GeneratedCode",
    "complete",
    "complete_samples",
    "extract_code",
    "request_body",
    "request_hash",
    "serialize_body",
]
