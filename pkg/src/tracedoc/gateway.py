"""Chat-completion gateway.

All nondeterminism lives behind this interface. The mock backend replays a
scripted response queue; the replay backend re-serves a recorded transcript;
the live backend speaks a chat-completions-style HTTP protocol. Transcripts
are JSONL, one (request, response) record per line.
"""

from __future__ import annotations

import json
import os
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from .errors import GatewayError

ENV_BACKEND = "TRACEDOC_LLM_BACKEND"        # live | mock | replay
ENV_ENDPOINT = "TRACEDOC_LLM_ENDPOINT"
ENV_MODEL = "TRACEDOC_LLM_MODEL"
ENV_API_KEY = "TRACEDOC_LLM_API_KEY"
ENV_MOCK_SCRIPT = "TRACEDOC_MOCK_SCRIPT"    # JSON list of responses
ENV_TRANSCRIPT = "TRACEDOC_TRANSCRIPT"      # JSONL path (record or replay)

DEFAULT_TEMPERATURE = 0.0


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant
    content: str

    def __post_init__(self) -> None:
        assert self.role in ("system", "user", "assistant"), self.role
        if self.role in ("system", "user") and not self.content:
            raise ValueError(f"{self.role} message must not be empty")


@dataclass(frozen=True)
class CompletionRequest:
    messages: tuple[ChatMessage, ...]
    model_name: str = "default"
    temperature: float = DEFAULT_TEMPERATURE
    max_retries_hint: int = 1

    def __post_init__(self) -> None:
        assert self.messages and self.messages[0].role == "system"
        assert 0.0 <= self.temperature <= 2.0

    def to_json(self) -> dict:
        return {
            "messages": [{"role": m.role, "content": m.content} for m in self.messages],
            "model": self.model_name,
            "temperature": self.temperature,
        }


@dataclass
class Transcript:
    """Append-only exchange log."""

    entries: list[dict] = field(default_factory=list)
    path: Path | None = None

    def append(self, request: CompletionRequest, response: str) -> None:
        record = {
            "request": request.to_json(),
            "response": response,
            "timestamp": time.time(),
        }
        self.entries.append(record)
        if self.path is not None:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record) + "\n")

    @staticmethod
    def load(path: str | Path) -> "Transcript":
        entries = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    entries.append(json.loads(line))
        return Transcript(entries)


class Gateway:
    """Base gateway; subclasses implement _complete."""

    def __init__(self, transcript: Transcript | None = None):
        self.transcript = transcript if transcript is not None else Transcript()

    def complete(self, request: CompletionRequest) -> str:
        response = self._complete(request)
        self.transcript.append(request, response)
        return response

    def _complete(self, request: CompletionRequest) -> str:
        raise NotImplementedError


class MockGateway(Gateway):
    """Serves a fixed response queue; raises GatewayError when exhausted."""

    def __init__(self, responses: list[str], transcript: Transcript | None = None):
        super().__init__(transcript)
        self.queue = list(responses)

    def _complete(self, request: CompletionRequest) -> str:
        if not self.queue:
            raise GatewayError("mock response queue exhausted")
        return self.queue.pop(0)


class ReplayGateway(Gateway):
    """Re-serves a recorded transcript's responses in order."""

    def __init__(self, recorded: Transcript, transcript: Transcript | None = None):
        super().__init__(transcript)
        self.responses = [entry["response"] for entry in recorded.entries]
        self.cursor = 0

    def _complete(self, request: CompletionRequest) -> str:
        if self.cursor >= len(self.responses):
            raise GatewayError("replay transcript exhausted")
        response = self.responses[self.cursor]
        self.cursor += 1
        return response


class LiveGateway(Gateway):
    """HTTP chat-completions backend."""

    def __init__(self, endpoint: str, model: str, api_key: str = "",
                 timeout: float = 60.0, transcript: Transcript | None = None):
        super().__init__(transcript)
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.timeout = timeout

    def _complete(self, request: CompletionRequest) -> str:
        body = request.to_json()
        body["model"] = self.model or request.model_name
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        req = urllib.request.Request(
            self.endpoint, data=json.dumps(body).encode("utf-8"),
            headers=headers, method="POST")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, TimeoutError, ValueError) as exc:
            raise GatewayError(f"completion transport failed: {exc}") from exc
        try:
            return payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise GatewayError(f"malformed completion response: {payload!r}") from exc


def gateway_from_env(env: dict[str, str] | None = None) -> Gateway:
    """Build a gateway from configuration (defaults to os.environ)."""
    cfg = os.environ if env is None else env
    backend = cfg.get(ENV_BACKEND, "mock")
    transcript = Transcript(path=Path(cfg[ENV_TRANSCRIPT])) \
        if backend != "replay" and cfg.get(ENV_TRANSCRIPT) else None
    if backend == "mock":
        script_path = cfg.get(ENV_MOCK_SCRIPT)
        responses: list[str] = []
        if script_path:
            with open(script_path, encoding="utf-8") as fh:
                responses = json.load(fh)
            if not isinstance(responses, list):
                raise GatewayError(f"mock script {script_path} must be a JSON list")
        return MockGateway(responses, transcript)
    if backend == "replay":
        path = cfg.get(ENV_TRANSCRIPT)
        if not path:
            raise GatewayError(f"replay backend requires {ENV_TRANSCRIPT}")
        return ReplayGateway(Transcript.load(path))
    if backend == "live":
        endpoint = cfg.get(ENV_ENDPOINT)
        if not endpoint:
            raise GatewayError(f"live backend requires {ENV_ENDPOINT}")
        return LiveGateway(endpoint, cfg.get(ENV_MODEL, ""),
                           cfg.get(ENV_API_KEY, ""), transcript=transcript)
    raise GatewayError(f"unknown gateway backend {backend!r}")


def strip_fences(response: str) -> str:
    """Drop surrounding markdown code fences and whitespace; idempotent."""
    text = response.strip()
    if text.startswith("```"):
        first_newline = text.find("\n")
        if first_newline != -1 and text.endswith("```"):
            inner = text[first_newline + 1:-3]
            return inner.strip()
        if first_newline == -1 and text.endswith("```") and len(text) > 6:
            return text[3:-3].strip()
    return text
