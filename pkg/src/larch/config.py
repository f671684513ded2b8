"""Environment-driven configuration for the CLI and the HTTP service.

The API key is read only where the backend is constructed and is never
logged, echoed, or serialized into responses.
"""

from __future__ import annotations

import os
from typing import Mapping

from .prompt import GenerationConfig

ENDPOINT_ENV_VAR = "LARCH_LLM_ENDPOINT"
MODEL_ENV_VAR = "LARCH_LLM_MODEL"
MAX_PROMPT_TOKENS_ENV_VAR = "LARCH_MAX_PROMPT_TOKENS"
MAX_GEN_TOKENS_ENV_VAR = "LARCH_MAX_GEN_TOKENS"

DEFAULT_ENDPOINT = "stub:"
DEFAULT_MODEL = "stub-model"


def generation_config_from_env(
    endpoint: str | None = None,
    model: str | None = None,
    environ: Mapping[str, str] | None = None,
) -> GenerationConfig:
    """Build a GenerationConfig from the environment, flags taking priority.

    Without an endpoint anywhere, the offline stub backend is used so the
    tool works out of the box.
    """
    env = os.environ if environ is None else environ
    return GenerationConfig(
        endpoint_url=endpoint or env.get(ENDPOINT_ENV_VAR) or DEFAULT_ENDPOINT,
        model_name=model or env.get(MODEL_ENV_VAR) or DEFAULT_MODEL,
        max_prompt_tokens=int(env.get(MAX_PROMPT_TOKENS_ENV_VAR, "3000")),
        max_gen_tokens=int(env.get(MAX_GEN_TOKENS_ENV_VAR, "910")),
    )
