"""HTTP facade: POST a graph plus a base64 PNG sketch, get a layout back.

Stateless; every request owns a full pipeline run.  The built browser UI is
served from the same process when its directory exists.
"""

from __future__ import annotations

import argparse
import base64
import binascii
import io
import json
import os
from dataclasses import fields, replace
from pathlib import Path
from typing import Any, Optional

import uvicorn
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from PIL import Image

from .errors import InputFormatError, InvalidImageError, NumericFailureError, SketchLayoutError
from .layout import LayoutConfig
from .mapping import graph_from_json
from .pipeline import PipelineConfig, run, run_incremental

MAX_BODY_BYTES = 16 * 1024 * 1024
DEFAULT_PORT = 8080
PORT_ENV = "SKETCHLAYOUT_PORT"

_PIPELINE_KEYS = {f.name for f in fields(PipelineConfig)} - {"layout"}
_LAYOUT_KEYS = {f.name for f in fields(LayoutConfig)}


class _BadRequest(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message


def _parse_config(overrides: dict[str, Any]) -> PipelineConfig:
    pipeline_kwargs: dict[str, Any] = {}
    layout_kwargs: dict[str, Any] = {}
    for key, value in overrides.items():
        if key in _PIPELINE_KEYS:
            pipeline_kwargs[key] = value
        elif key in _LAYOUT_KEYS:
            layout_kwargs[key] = value
        else:
            raise _BadRequest(422, f"unknown config key {key!r}")
    try:
        layout = LayoutConfig(**layout_kwargs)
        if "seed" in pipeline_kwargs and "seed" not in layout_kwargs:
            layout = replace(layout, seed=int(pipeline_kwargs["seed"]))
        return PipelineConfig(layout=layout, **pipeline_kwargs)
    except (TypeError, ValueError) as exc:
        raise _BadRequest(422, f"invalid config: {exc}") from exc


def _decode_sketch(data: Any) -> Image.Image:
    if not isinstance(data, str):
        raise _BadRequest(400, "sketch must be a base64 string")
    payload = data.split(",", 1)[-1]  # tolerate data: URLs
    try:
        raw = base64.b64decode(payload, validate=True)
        img = Image.open(io.BytesIO(raw))
        img.load()
    except (binascii.Error, ValueError, OSError) as exc:
        raise _BadRequest(400, f"cannot decode sketch PNG: {exc}") from exc
    return img


def _parse_prior(data: Any) -> dict[str, tuple[float, float]]:
    if not isinstance(data, dict):
        raise _BadRequest(422, "prior must map node ids to [x, y]")
    try:
        return {str(n): (float(xy[0]), float(xy[1])) for n, xy in data.items()}
    except (TypeError, ValueError, IndexError) as exc:
        raise _BadRequest(422, f"invalid prior positions: {exc}") from exc


async def _layout_endpoint(request: Request) -> JSONResponse:
    body = await request.body()
    if len(body) > MAX_BODY_BYTES:
        return JSONResponse({"error": "request body exceeds 16 MiB"}, status_code=413)
    try:
        payload = json.loads(body)
    except json.JSONDecodeError:
        return JSONResponse({"error": "malformed JSON body"}, status_code=400)
    if not isinstance(payload, dict):
        return JSONResponse({"error": "body must be a JSON object"}, status_code=400)

    try:
        try:
            graph = graph_from_json(payload.get("graph") or {})
        except InputFormatError as exc:
            raise _BadRequest(400, str(exc)) from exc
        sketch = _decode_sketch(payload.get("sketch"))
        cfg = _parse_config(payload.get("config") or {})
        mode = payload.get("mode", "full")
        if mode not in ("full", "incremental"):
            raise _BadRequest(422, f"unknown mode {mode!r}")

        if mode == "incremental":
            selection = payload.get("selection")
            prior_raw = payload.get("prior")
            if not selection or prior_raw is None:
                raise _BadRequest(422, "incremental mode requires selection and prior")
            if not isinstance(selection, list):
                raise _BadRequest(422, "selection must be a list of node ids")
            selection = [str(s) for s in selection]
            unknown = set(selection) - graph.nodes
            if unknown:
                raise _BadRequest(422, f"selection not in graph: {sorted(unknown)[:5]}")
            prior = _parse_prior(prior_raw)
            missing = [n for n in graph.nodes if n not in prior]
            if missing:
                raise _BadRequest(422, f"prior missing nodes: {sorted(missing)[:5]}")
            result = run_incremental(graph, sketch, selection, prior, cfg)
        else:
            result = run(graph, sketch, cfg)
    except _BadRequest as exc:
        return JSONResponse({"error": exc.message}, status_code=exc.status)
    except (InvalidImageError, InputFormatError) as exc:
        return JSONResponse({"error": str(exc)}, status_code=400)
    except ValueError as exc:
        return JSONResponse({"error": str(exc)}, status_code=422)
    except NumericFailureError as exc:
        return JSONResponse({"error": str(exc)}, status_code=500)
    except SketchLayoutError as exc:
        return JSONResponse({"error": str(exc)}, status_code=422)

    return JSONResponse(
        {
            "positions": {n: [x, y] for n, (x, y) in result.layout.positions.items()},
            "report": result.layout.report,
            "chain": result.chain.to_json() if result.chain else None,
            "constraints": result.constraints.to_json() if result.constraints else None,
            "strategy": result.strategy,
            "warnings": result.warnings,
        }
    )


def create_app(ui_dir: Optional[str | Path] = None, dev: bool = False) -> FastAPI:
    app = FastAPI(title="sketchlayout", docs_url=None, redoc_url=None)
    if dev:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def health() -> dict:
        return {"status": "ok"}

    app.add_api_route("/api/health", health, methods=["GET", "HEAD"])
    app.add_api_route("/api/layout", _layout_endpoint, methods=["POST"])

    ui_path = Path(ui_dir) if ui_dir else Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if ui_path.is_dir():
        app.mount("/", StaticFiles(directory=str(ui_path), html=True), name="ui")
    return app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="sketchlayout-serve")
    parser.add_argument("--port", type=int, default=int(os.environ.get(PORT_ENV, DEFAULT_PORT)))
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--ui-dir", help="directory with the built browser UI")
    parser.add_argument("--dev", action="store_true", help="enable CORS for UI development")
    args = parser.parse_args(argv)
    uvicorn.run(create_app(args.ui_dir, args.dev), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
