"""Prompt assembly under a token budget.

The prompt scaffold is fixed text: an intro line naming the project, the
representative file's code, a sampled list of repository file names, and a
closing instruction.  When the estimate exceeds the budget the code block is
cut from the end, keeping the head (imports and module docstring) intact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .errors import BudgetTooSmall, DegenerateInput
from .repo import SourceFile

INTRO_WITH_NAME = 'Here is the entrypoint of a Python project "{name}":'
INTRO_NO_NAME = "Here is the entrypoint of a Python project:"
FILES_HEADER = "This program has following files:"
FINAL_INSTRUCTION = "Write a detailed readme in markdown:"
MAX_LISTED_FILES = 10


@dataclass(frozen=True)
class RetryPolicy:
    attempts: int = 3
    backoff_seconds: float = 0.5


@dataclass(frozen=True)
class GenerationConfig:
    endpoint_url: str = "stub:"
    model_name: str = "stub-model"
    max_prompt_tokens: int = 3000
    max_gen_tokens: int = 910
    temperature: float = 0.2
    request_timeout_seconds: float = 60.0
    retry: RetryPolicy = field(default_factory=RetryPolicy)

    def __post_init__(self):
        if self.max_prompt_tokens <= 0 or self.max_gen_tokens <= 0:
            raise ValueError("token budgets must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class Prompt:
    text: str
    token_estimate: int
    truncated: bool
    included_file_names: tuple[str, ...]

    def __post_init__(self):
        if self.token_estimate < 0:
            raise ValueError("token_estimate must be non-negative")
        if len(self.included_file_names) > MAX_LISTED_FILES:
            raise ValueError("at most 10 file names may be listed")


def estimate_tokens(text: str) -> int:
    """Default estimator: about four characters per token, rounded up."""
    return (len(text) + 3) // 4


def _assemble(intro: str, code_text: str, names: tuple[str, ...]) -> str:
    parts = [intro, "", code_text, "", FILES_HEADER, *names, "", FINAL_INSTRUCTION]
    return "\n".join(parts)


def build_prompt(
    code: SourceFile,
    project_name: str | None,
    all_paths: list[str],
    seed: int,
    cfg: GenerationConfig,
    estimator: Callable[[str], int] = estimate_tokens,
) -> Prompt:
    """Assemble the prompt, truncating the code tail to fit the budget.

    The file-name list is a uniform sample without replacement of up to 10
    entries from all_paths, deterministic for a given seed.  The estimator
    must be monotone in text length for the tail-truncation search to be
    exact; the default is.
    """
    if not code.content:
        raise DegenerateInput("representative file is empty")
    intro = INTRO_WITH_NAME.format(name=project_name) if project_name else INTRO_NO_NAME
    rng = random.Random(seed)
    k = min(MAX_LISTED_FILES, len(all_paths))
    names = tuple(rng.sample(list(all_paths), k))

    code_text = code.content.rstrip()
    text = _assemble(intro, code_text, names)
    estimate = estimator(text)
    if estimate <= cfg.max_prompt_tokens:
        return Prompt(
            text=text,
            token_estimate=estimate,
            truncated=False,
            included_file_names=names,
        )

    if estimator(_assemble(intro, "", names)) > cfg.max_prompt_tokens:
        raise BudgetTooSmall(
            f"prompt scaffold alone exceeds the {cfg.max_prompt_tokens}-token budget"
        )
    lo, hi = 0, len(code_text)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if estimator(_assemble(intro, code_text[:mid].rstrip(), names)) <= cfg.max_prompt_tokens:
            lo = mid
        else:
            hi = mid - 1
    truncated_code = code_text[:lo].rstrip()
    text = _assemble(intro, truncated_code, names)
    return Prompt(
        text=text,
        token_estimate=estimator(text),
        truncated=True,
        included_file_names=names,
    )
