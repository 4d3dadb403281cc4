"""Loopback chat-completion endpoint for tests and dry runs.

Serves canned completions keyed by prompt hash; unknown prompts fall
back to a configurable reply. The default fallback inspects the prompt
and answers in the shape it asks for (single QA dict, three-QA dict, or
a fenced judge verdict), so a full pipeline dry run works with no
scripting. A list of failure statuses can be injected to exercise the
client's retry path. Runs in a daemon thread; usable from parallel tests.
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable

from .jsonish import find_object_text, parse_object
from .llm import prompt_hash
from .prompts import Message, PromptMessages, Role

FallbackFn = Callable[[list[dict]], str]


def _messages_to_prompt(messages: list[dict]) -> PromptMessages:
    return PromptMessages(
        tuple(Message(Role(m["role"]), m["content"]) for m in messages)
    )


def script_key(prompt: PromptMessages) -> str:
    """Hash used to key scripted replies (same as the client's audit hash)."""
    return prompt_hash(prompt)


def default_fallback(messages: list[dict]) -> str:
    """Answer in whatever shape the prompt requests."""
    text = " ".join(m["content"] for m in messages)
    if "classify the outputs of different models" in text:
        return _judge_reply(text)
    if "Generate THREE different" in text:
        return json.dumps(
            {
                "Q1": "What starts the sequence in the clip?",
                "A1": "The first event opens the passage of play described in the caption.",
                "Q2": "What happens right after the opening event?",
                "A2": "The second event follows within a few seconds, keeping the pressure on.",
                "Q3": "How does the sequence end?",
                "A3": "The passage closes with the second event as the caption describes.",
            }
        )
    return json.dumps(
        {
            "Q": "Can you describe what happens in this clip in detail?",
            "A": "From the first moments the clip shows a lively passage of play, "
            "with one side pressing forward and the described event unfolding in "
            "front of an engaged crowd.",
        }
    )


_LABEL_RE = re.compile(r'Actual Label: "([^"]*)"')


def _judge_reply(text: str) -> str:
    """Score every model named in the prompt's LLM-Answers dict."""
    label_match = _LABEL_RE.search(text)
    label = label_match.group(1) if label_match else ""
    answers: dict = {}
    answers_at = text.find("LLM-Answers:")
    if answers_at >= 0:
        block = find_object_text(text[answers_at:])
        if block is not None:
            try:
                answers = parse_object(block)
            except Exception:
                answers = {}
    scores = {}
    reasons = {}
    predicted = {}
    for i, (model, answer) in enumerate(sorted(answers.items())):
        correct = label and label.lower() in str(answer).lower()
        scores[model] = max(10 - i, 1) if correct else max(3 - i, 0)
        reasons[model] = (
            "answer names the actual label" if correct else "answer misses the label"
        )
        predicted[model] = label if correct else "Wrong Prediction"
    verdict = {"scores": scores, "reason": reasons, "predicted_class": predicted}
    return "```\n" + json.dumps(verdict) + "\n```"


GARBAGE_FALLBACK = "I'd rather talk about the weather."


class MockLlmServer:
    """Minimal chat-completions server bound to a random loopback port."""

    def __init__(
        self,
        script: dict[str, str] | None = None,
        fallback: str | FallbackFn | None = None,
        fail_statuses: list[int] | None = None,
    ):
        self.script = dict(script or {})
        self.fallback = fallback if fallback is not None else default_fallback
        self.fail_statuses = list(fail_statuses or [])
        self.requests_served = 0
        self._lock = threading.Lock()
        self._httpd: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        assert self._httpd is not None, "server not started"
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}/v1/chat/completions"

    def start(self) -> "MockLlmServer":
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):  # noqa: N802 (http.server API)
                length = int(self.headers.get("Content-Length", 0))
                body = json.loads(self.rfile.read(length) or b"{}")
                status, reply = outer._respond(body.get("messages", []))
                payload = (
                    json.dumps({"choices": [{"message": {"content": reply}}]})
                    if status == 200
                    else json.dumps({"error": f"injected {status}"})
                )
                data = payload.encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):
                pass

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def _respond(self, messages: list[dict]) -> tuple[int, str]:
        with self._lock:
            self.requests_served += 1
            if self.fail_statuses:
                return self.fail_statuses.pop(0), ""
        try:
            key = script_key(_messages_to_prompt(messages))
        except (KeyError, ValueError):
            key = ""
        if key in self.script:
            return 200, self.script[key]
        if callable(self.fallback):
            return 200, self.fallback(messages)
        return 200, self.fallback

    def stop(self) -> None:
        if self._httpd is not None:
            self._httpd.shutdown()
            self._httpd.server_close()
            self._httpd = None
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

    def __enter__(self) -> "MockLlmServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
