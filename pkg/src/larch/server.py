"""HTTP service: upload a snapshot, get back a ranking or a readme.

Stateless request handling over an immutable shared model.  Clients send
the whole repository as UTF-8 JSON per request; errors use a uniform
{error, code} body.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import generation_config_from_env
from .errors import GenerationError, LarchError, NoPythonFiles
from .gbrank import RankModel, load_model
from .llm import CompletionBackend, backend_for
from .pipeline import generate_for_snapshot, identify_representative, load_default_model
from .prompt import GenerationConfig
from .repo import RepoSnapshot, snapshot_from_contents

MAX_BODY_BYTES = 64 * 1024 * 1024


@dataclass(frozen=True)
class ServiceConfig:
    model_file: str | None = None
    generation: GenerationConfig = field(default_factory=generation_config_from_env)
    max_body_bytes: int = MAX_BODY_BYTES


class FileItem(BaseModel):
    path: str
    content: str


class IdentifyRequest(BaseModel):
    files: list[FileItem]


class GenerateRequest(BaseModel):
    project_name: str | None = None
    files: list[FileItem]


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, "code": code})


def _snapshot_from_request(files: list[FileItem], name: str | None) -> RepoSnapshot:
    return snapshot_from_contents(
        {f.path: f.content for f in files}, name=name or ""
    )


def create_app(
    config: ServiceConfig | None = None,
    model: RankModel | None = None,
    backend: CompletionBackend | None = None,
) -> FastAPI:
    config = config or ServiceConfig()
    if model is None:
        model = load_model(config.model_file) if config.model_file else load_default_model()
    if backend is None:
        backend = backend_for(config.generation)

    app = FastAPI(title="larch", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def limit_body_size(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None:
            try:
                if int(length) > config.max_body_bytes:
                    return _error(
                        413,
                        "PAYLOAD_TOO_LARGE",
                        f"request body exceeds {config.max_body_bytes} bytes",
                    )
            except ValueError:
                pass
        return await call_next(request)

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return _error(400, "BAD_REQUEST", f"invalid request body: {exc.errors()[:3]}")

    @app.get("/health")
    async def health():
        return {"status": "ok", "model_version": model.version}

    @app.post("/api/v1/identify")
    async def identify(body: IdentifyRequest):
        if not body.files:
            return _error(400, "NO_FILES", "file list is empty")
        try:
            snapshot = _snapshot_from_request(body.files, None)
            ranked = identify_representative(snapshot, model)
        except NoPythonFiles as exc:
            return _error(400, "NO_PYTHON_FILES", str(exc))
        except ValueError as exc:
            return _error(400, "BAD_REQUEST", str(exc))
        return {"candidates": [{"path": r.path, "score": r.score} for r in ranked]}

    @app.post("/api/v1/generate")
    async def generate(body: GenerateRequest):
        if not body.files:
            return _error(400, "NO_FILES", "file list is empty")
        try:
            snapshot = _snapshot_from_request(body.files, body.project_name)
            outcome = generate_for_snapshot(
                snapshot,
                config.generation,
                model=model,
                project_name=body.project_name,
                seed=0,
                backend=backend,
            )
        except NoPythonFiles as exc:
            return _error(400, "NO_PYTHON_FILES", str(exc))
        except ValueError as exc:
            return _error(400, "BAD_REQUEST", str(exc))
        except GenerationError as exc:
            return _error(502, "BACKEND_FAILURE", str(exc))
        except LarchError as exc:
            return _error(400, "BAD_REQUEST", str(exc))
        return {
            "readme": outcome.readme,
            "representative_path": outcome.representative_path,
            "prompt_tokens": outcome.prompt.token_estimate,
            "truncated": outcome.prompt.truncated,
        }

    return app
