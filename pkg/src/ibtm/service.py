"""HTTP inference service: two JSON endpoints plus the static UI bundle.

The model and codebook are loaded once and never mutated, so concurrent
requests need no locking and identical requests get identical bodies.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .drawing import DEFAULT_BANDWIDTH, Codebook, Drawing, DrawingPoint
from .errors import DataError, NumericError
from .model import ModelParameters
from .predict import MAX_LABELS, predict, view_name


class PointIn(BaseModel):
    side: str
    x: float
    y: float


class PredictRequest(BaseModel):
    points: list[PointIn]
    bandwidth: float | None = None
    max_labels: int | None = None


def model_metadata(model: ModelParameters) -> dict:
    return {
        "n_topics": model.hyper.n_topics,
        "private_topics": list(model.hyper.private_topics),
        "view_names": [view_name(v, model.n_views) for v in range(model.n_views)],
        "vocab_sizes": model.vocab.sizes(),
        "seed": model.seed,
    }


def create_app(
    model: ModelParameters,
    codebook: Codebook,
    bandwidth: float = DEFAULT_BANDWIDTH,
    max_labels: int = MAX_LABELS,
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="discomfort-drawing prediction service")
    metadata = model_metadata(model)

    @app.get("/api/model")
    def get_model() -> dict:
        return metadata

    @app.post("/api/predict")
    def post_predict(request: PredictRequest) -> dict:
        if not request.points:
            raise HTTPException(status_code=422, detail="no painted points")
        try:
            drawing = Drawing(
                points=[DrawingPoint(side=p.side, x=p.x, y=p.y) for p in request.points]
            )
        except (DataError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        bw = bandwidth if request.bandwidth is None else float(request.bandwidth)
        if bw <= 0:
            raise HTTPException(status_code=422, detail="bandwidth must be positive")
        cap = max_labels if request.max_labels is None else int(request.max_labels)
        if cap < 1:
            raise HTTPException(status_code=422, detail="max_labels must be at least 1")
        cap = min(cap, MAX_LABELS)
        try:
            result = predict(drawing, model, codebook, bandwidth=bw, max_labels=cap)
        except DataError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except NumericError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        record = result.to_record()
        record["model"] = metadata
        return record

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
