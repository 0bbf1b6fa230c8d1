"""HTTP analysis service: snippet in, features + prediction + hints out.

The app is built around one immutable model bundle loaded at startup.
Endpoints:

* ``POST /api/analyze``  {code, question_text?, combine?} -> AnalysisResponse
* ``GET  /api/health``   {status, model_fingerprint}
* ``GET  /api/model``    model spec and training metadata

``combine=true`` treats ``code`` as an HTML question body: code blocks are
extracted and merged before analysis. With ``combine=false`` (default) the
text is analyzed verbatim as one snippet. Errors come back as
``{code, message}`` JSON.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__
from .analyzer import CompilerConfig, CompileStatus, analyze_snippet
from .bundle import ModelBundle, load_bundle
from .dataset import encode
from .errors import EmptySnippet, ReproLensError
from .explain import exact_shapley
from .hints import derive_hints
from .ingest import combine_snippets, extract_code_blocks
from .models.base import predict_proba


class AnalyzeRequest(BaseModel):
    code: str
    question_text: str = ""
    combine: bool = False


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def create_app(
    bundle: ModelBundle | str | Path,
    compiler: CompilerConfig | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    if not isinstance(bundle, ModelBundle):
        bundle = load_bundle(bundle)
    compiler = compiler or CompilerConfig()

    app = FastAPI(title="reprolens", version=__version__)
    # the web client may be served from any static host; the API is public
    # and credential-free, so permissive CORS is fine
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ReproLensError)
    async def _domain_error(request: Request, exc: ReproLensError):
        status = 400 if isinstance(exc, EmptySnippet) else 422
        return _error(status, type(exc).__name__, str(exc))

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "model_fingerprint": bundle.fingerprint}

    @app.get("/api/model")
    def model_info() -> dict:
        spec = bundle.model.spec
        return {
            "family": spec.family,
            "hyperparameters": spec.resolved_hyperparameters(),
            "seed": spec.seed,
            "feature_count": bundle.model.feature_count,
            "training_fingerprint": bundle.fingerprint,
            "background_size": int(bundle.background.shape[0]),
            "keywords": list(bundle.keywords),
            "jdk_index_sha256": bundle.jdk_index_sha256,
            "version": __version__,
        }

    @app.post("/api/analyze")
    def analyze(req: AnalyzeRequest):
        snippet = req.code
        if req.combine:
            blocks = extract_code_blocks(req.code)
            blocks = [b for b in blocks if b.strip()]
            if blocks:
                snippet = combine_snippets(blocks)
        if not snippet.strip():
            return _error(400, "EmptySnippet", "code has no non-blank lines")

        outcome = analyze_snippet(snippet, req.question_text, compiler)
        x = encode(outcome.features)
        probability = float(predict_proba(bundle.model, x))
        explanation = exact_shapley(bundle.model, x, bundle.background)
        hints = derive_hints(outcome.features, outcome.summary, req.question_text)

        compiler_status = outcome.compile_result.status.value
        degraded = outcome.compile_result.status in (
            CompileStatus.UNAVAILABLE,
            CompileStatus.TIMEOUT,
        )
        return {
            "features": outcome.features.as_dict(),
            "probability_reproducible": probability,
            "predicted": "reproducible" if probability >= 0.5 else "irreproducible",
            "shapley": explanation.as_dict(),
            "hints": [h.as_dict() for h in hints],
            "compiler_status": compiler_status,
            "degraded": degraded,
            "notes": outcome.notes,
            "diagnostics": [
                {"line": d.line, "message": d.message}
                for d in outcome.compile_result.diagnostics
            ],
        }

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
