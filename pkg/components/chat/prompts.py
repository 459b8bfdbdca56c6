import hashlib
import json

from components.config import ModelConfig


def get_messages(prompt):
    """Prepare messages for the API call"""
    return [
        {"role": "system", "content": prompt.system_text},
        {"role": "user", "content": prompt.user_text},
    ]


def request_body(prompt, cfg: ModelConfig) -> dict:
    return {
        "model": cfg.model_name,
        "messages": get_messages(prompt),
        "temperature": cfg.temperature,
        "top_p": cfg.top_p,
        "max_tokens": cfg.max_output_tokens,
    }


def serialize_body(body: dict) -> str:
    """Stable JSON text of a request body; equal bodies give equal text."""
    return json.dumps(body, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def request_hash(body: dict) -> str:
    return hashlib.sha256(serialize_body(body).encode("utf-8")).hexdigest()
