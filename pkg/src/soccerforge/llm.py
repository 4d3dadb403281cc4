"""Chat-completion client: retries, backoff, and a process-wide in-flight cap.

Provider-agnostic: any endpoint accepting {model, messages, temperature}
and answering with choices[0].message.content works. The credential is
read from an environment variable named in the config; transient
failures (429, 5xx, timeouts, connection drops) are retried with
exponential backoff, auth failures are not.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass

import requests

from .errors import SoccerForgeError
from .prompts import PromptMessages

logger = logging.getLogger(__name__)


class LlmError(SoccerForgeError):
    """Base for completion-request failures."""


class AuthError(LlmError):
    pass


class RateLimited(LlmError):
    pass


class Timeout(LlmError):
    pass


class TransportError(LlmError):
    pass


class MalformedResponse(LlmError):
    pass


@dataclass
class LlmConfig:
    endpoint_url: str
    model_name: str
    temperature: float = 0.7
    max_retries: int = 3
    request_timeout_s: float = 30.0
    max_inflight: int = 4
    api_key_env: str = "SOCCERFORGE_API_KEY"
    backoff_base_s: float = 0.5
    backoff_cap_s: float = 30.0

    def __post_init__(self):
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.max_inflight < 1:
            raise ValueError("max_inflight must be >= 1")


_semaphores: dict[tuple[str, int], threading.Semaphore] = {}
_semaphores_lock = threading.Lock()


def _inflight_gate(cfg: LlmConfig) -> threading.Semaphore:
    key = (cfg.endpoint_url, cfg.max_inflight)
    with _semaphores_lock:
        if key not in _semaphores:
            _semaphores[key] = threading.Semaphore(cfg.max_inflight)
        return _semaphores[key]


def prompt_hash(prompt: PromptMessages) -> str:
    """Stable hash of the message list, used for scripting and audit logs."""
    payload = json.dumps(prompt.to_payload(), ensure_ascii=False, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def request_completion(prompt: PromptMessages, cfg: LlmConfig) -> str:
    """POST the prompt and return the raw completion text.

    Performs up to max_retries + 1 attempts; while a request is in flight
    it holds one slot of the process-wide cap for its endpoint.
    """
    payload = {
        "model": cfg.model_name,
        "messages": prompt.to_payload(),
        "temperature": cfg.temperature,
    }
    headers = {"Content-Type": "application/json"}
    api_key = os.environ.get(cfg.api_key_env)
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"

    gate = _inflight_gate(cfg)
    attempts = cfg.max_retries + 1
    last_error: LlmError | None = None
    for attempt in range(attempts):
        if attempt:
            delay = min(cfg.backoff_base_s * 2 ** (attempt - 1), cfg.backoff_cap_s)
            time.sleep(delay)
        with gate:
            try:
                resp = requests.post(
                    cfg.endpoint_url,
                    json=payload,
                    headers=headers,
                    timeout=cfg.request_timeout_s,
                )
            except requests.Timeout as exc:
                last_error = Timeout(f"request timed out after {cfg.request_timeout_s}s")
                logger.warning("attempt %d/%d timed out: %s", attempt + 1, attempts, exc)
                continue
            except requests.RequestException as exc:
                last_error = TransportError(f"connection failure: {exc}")
                logger.warning("attempt %d/%d failed: %s", attempt + 1, attempts, exc)
                continue
        if resp.status_code in (401, 403):
            raise AuthError(f"endpoint rejected credentials (HTTP {resp.status_code})")
        if resp.status_code == 429:
            last_error = RateLimited("rate limited (HTTP 429)")
            logger.warning("attempt %d/%d rate limited", attempt + 1, attempts)
            continue
        if resp.status_code >= 500:
            last_error = TransportError(f"server error (HTTP {resp.status_code})")
            logger.warning(
                "attempt %d/%d server error %d", attempt + 1, attempts, resp.status_code
            )
            continue
        if resp.status_code != 200:
            raise TransportError(f"unexpected HTTP {resp.status_code}: {resp.text[:200]}")
        return _extract_content(resp)

    assert last_error is not None
    raise last_error


def _extract_content(resp: requests.Response) -> str:
    try:
        body = resp.json()
        content = body["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise MalformedResponse(
            f"response is not a chat completion: {resp.text[:200]}"
        ) from exc
    if not isinstance(content, str):
        raise MalformedResponse(f"completion content is not text: {content!r}")
    return content
