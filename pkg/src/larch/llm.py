"""Completion backends and the readme-generation call.

Two backends share one interface: an OpenAI-compatible HTTP client with
bearer auth and bounded retries, and an offline deterministic stub (endpoint
"stub:") that fabricates a readme skeleton from the prompt itself, so the
full pipeline can run in tests and demos with no network.

The API key is held in a private attribute, excluded from reprs, and never
logged or copied into results.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

import requests

from .errors import BackendRejected, BackendUnreachable, EmptyCompletion
from .prompt import FILES_HEADER, FINAL_INSTRUCTION, GenerationConfig, Prompt, estimate_tokens

API_KEY_ENV_VAR = "LARCH_LLM_API_KEY"
STUB_ENDPOINT_PREFIX = "stub:"

_QUOTED_NAME_RE = re.compile(r'"([^"]+)"')
_DEF_RE = re.compile(r"^\s*(?:async\s+)?def\s+([A-Za-z_]\w*)\s*\(", re.MULTILINE)


@dataclass(frozen=True)
class GenerationResult:
    readme_text: str
    usage: dict = field(default_factory=dict)
    attempts: int = 1


class CompletionBackend(Protocol):
    def complete(self, prompt_text: str, cfg: GenerationConfig) -> GenerationResult: ...


class StubBackend:
    """Offline backend: echoes a readme skeleton derived from the prompt."""

    def complete(self, prompt_text: str, cfg: GenerationConfig) -> GenerationResult:
        lines = prompt_text.splitlines()
        name = "Project"
        if lines:
            m = _QUOTED_NAME_RE.search(lines[0])
            if m:
                name = m.group(1)

        file_names: list[str] = []
        if FILES_HEADER in lines:
            start = lines.index(FILES_HEADER) + 1
            for line in lines[start:]:
                if not line.strip() or line == FINAL_INSTRUCTION:
                    break
                file_names.append(line.strip())

        fn = _DEF_RE.search(prompt_text)
        entry = fn.group(1) if fn else None

        out = [f"# {name}", "", f"{name} is a Python project.", ""]
        if file_names:
            out.append("## Project layout")
            out.append("")
            out.extend(f"- `{p}`" for p in file_names)
            out.append("")
        out.append("## Usage")
        out.append("")
        if entry:
            out.append(f"The entry point defines `{entry}()`. Run it with:")
        else:
            out.append("Run the project with:")
        out.append("")
        out.append("```bash")
        out.append(f"python -m {name}")
        out.append("```")
        readme = "\n".join(out) + "\n"
        usage = {
            "prompt_tokens": estimate_tokens(prompt_text),
            "completion_tokens": estimate_tokens(readme),
        }
        return GenerationResult(readme_text=readme, usage=usage, attempts=1)


def _completions_url(endpoint_url: str) -> str:
    base = endpoint_url.rstrip("/")
    if base.rsplit("/", 1)[-1] == "completions":
        return base
    return base + "/completions"


class HttpCompletionBackend:
    """OpenAI-compatible completions client with retry on transient failures."""

    def __init__(
        self,
        endpoint_url: str,
        model_name: str,
        api_key: str | None = None,
        session: requests.Session | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.url = _completions_url(endpoint_url)
        self.model_name = model_name
        self._api_key = api_key
        self._session = session or requests.Session()
        self._sleep = sleep

    def __repr__(self) -> str:
        return f"HttpCompletionBackend(url={self.url!r}, model={self.model_name!r})"

    def complete(self, prompt_text: str, cfg: GenerationConfig) -> GenerationResult:
        payload = {
            "model": self.model_name,
            "prompt": prompt_text,
            "max_tokens": cfg.max_gen_tokens,
            "temperature": cfg.temperature,
        }
        headers = {"Content-Type": "application/json"}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"

        attempts = max(1, cfg.retry.attempts)
        last_error: Exception | None = None
        for attempt in range(1, attempts + 1):
            if attempt > 1:
                self._sleep(cfg.retry.backoff_seconds * 2 ** (attempt - 2))
            try:
                resp = self._session.post(
                    self.url,
                    json=payload,
                    headers=headers,
                    timeout=cfg.request_timeout_seconds,
                )
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_error = BackendUnreachable(f"cannot reach {self.url}: {exc}")
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = BackendRejected(resp.status_code, resp.text[:2000])
                continue
            if not 200 <= resp.status_code < 300:
                raise BackendRejected(resp.status_code, resp.text[:2000])
            return self._parse_response(resp, prompt_text, attempt)
        assert last_error is not None
        raise last_error

    def _parse_response(
        self, resp: requests.Response, prompt_text: str, attempts: int
    ) -> GenerationResult:
        try:
            body = resp.json()
            choice = body["choices"][0]
        except (json.JSONDecodeError, requests.exceptions.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise BackendRejected(resp.status_code, f"unparseable completion body: {exc}")
        text = choice.get("text")
        if text is None and isinstance(choice.get("message"), dict):
            text = choice["message"].get("content")
        text = (text or "").strip()
        if not text:
            raise EmptyCompletion("backend returned an empty completion")
        usage = body.get("usage") or {}
        if not isinstance(usage, dict):
            usage = {}
        return GenerationResult(readme_text=text, usage=usage, attempts=attempts)


def backend_for(cfg: GenerationConfig, api_key: str | None = None) -> CompletionBackend:
    """Pick the backend from the endpoint value; "stub:" selects the stub."""
    if cfg.endpoint_url.startswith(STUB_ENDPOINT_PREFIX):
        return StubBackend()
    if api_key is None:
        import os

        api_key = os.environ.get(API_KEY_ENV_VAR) or None
    return HttpCompletionBackend(cfg.endpoint_url, cfg.model_name, api_key=api_key)


def generate_readme(
    prompt: Prompt,
    cfg: GenerationConfig,
    backend: CompletionBackend | None = None,
) -> GenerationResult:
    """One completion call for the assembled prompt."""
    backend = backend or backend_for(cfg)
    return backend.complete(prompt.text, cfg)
