"""Diagnostic label prediction from a drawing alone.

Encodes painted points against the location codebook, infers the shared
topic posterior from that single view, and ranks each target view's
labels by the shared-topic predictive word distribution. The number of
labels emitted per view follows the drawing's mean-shift region count,
capped at `MAX_LABELS`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import DRAWING_VIEW, VIEW_NAMES, Document
from .drawing import DEFAULT_BANDWIDTH, Codebook, Drawing, count_regions, encode_drawing
from .errors import DataError
from .model import DocumentPosterior, ModelParameters, e_step

MAX_LABELS = 30


def view_name(view: int, n_views: int) -> str:
    if n_views == len(VIEW_NAMES):
        return VIEW_NAMES[view]
    return f"view{view}"


@dataclass
class ViewPrediction:
    view: int
    name: str
    n: int
    labels: list  # ranked (label, score) pairs, length n


@dataclass
class PredictionResult:
    regions: int
    views: list  # ViewPrediction per target view
    theta: np.ndarray  # normalized shared posterior

    def to_record(self) -> dict:
        return {
            "regions": self.regions,
            "views": [
                {
                    "name": vp.name,
                    "n": vp.n,
                    "labels": [
                        {"label": label, "score": float(score)} for label, score in vp.labels
                    ],
                }
                for vp in self.views
            ],
        }


def infer_from_drawing(bag, model: ModelParameters) -> DocumentPosterior:
    """Shared posterior from drawing-view words only.

    `bag` is a multiset of view-0 vocabulary indices. Inference runs on
    the model restricted to that view, so only its tokens, its private
    block, and its switch factor participate.
    """
    bag = np.asarray(bag, dtype=np.int64)
    if bag.size == 0:
        raise DataError("no painted points")
    restricted = model.restrict([DRAWING_VIEW])
    doc = Document(tokens=[bag])
    return e_step(doc, restricted)


def score_labels(
    posterior: DocumentPosterior, model: ModelParameters, target_view: int
) -> list:
    """Ranked (label, score) pairs for one target view.

    Scores are the shared-topic predictive word probabilities, which sum
    to 1 over the view's vocabulary; ties rank lexicographically.
    """
    if target_view == DRAWING_VIEW:
        raise ValueError("target view must differ from the drawing view")
    if not (0 <= target_view < model.n_views):
        raise ValueError(f"model was not trained with view {target_view}")
    theta = posterior.gamma / posterior.gamma.sum()
    scores = theta @ model.beta_bar[target_view]
    words = model.vocab.views[target_view]
    order = sorted(range(len(words)), key=lambda i: (-scores[i], words[i]))
    return [(words[i], float(scores[i])) for i in order]


def predict(
    drawing: Drawing,
    model: ModelParameters,
    codebook: Codebook,
    bandwidth: float = DEFAULT_BANDWIDTH,
    max_labels: int = MAX_LABELS,
    target_views=None,
) -> PredictionResult:
    """Full pipeline: encode, infer, rank, and cut off at the region count."""
    if not drawing.points:
        raise DataError("no painted points")
    max_labels = min(int(max_labels), MAX_LABELS)
    codes = encode_drawing(drawing, codebook)
    names = codebook.word_names()
    index = model.vocab.index(DRAWING_VIEW)
    bag = [index[names[c]] for c in codes if names[c] in index]
    if not bag:
        raise DataError("no painted points map to a known location word")
    posterior = infer_from_drawing(bag, model)
    regions = count_regions(drawing, bandwidth)
    if target_views is None:
        target_views = [v for v in range(model.n_views) if v != DRAWING_VIEW]
    views = []
    for v in target_views:
        ranked = score_labels(posterior, model, v)
        n = min(regions, max_labels, model.vocab.size(v))
        views.append(
            ViewPrediction(view=v, name=view_name(v, model.n_views), n=n, labels=ranked[:n])
        )
    return PredictionResult(
        regions=regions, views=views, theta=posterior.gamma / posterior.gamma.sum()
    )
