"""Synthetic corpora with known ground truth.

Plants peaked topic-word structure on disjoint word blocks, samples
documents through the generative model, and synthesizes drawings whose
painted blobs follow each document's dominant shared topics. Used by the
recovery and end-to-end tests in place of clinical data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .corpus import Corpus, VocabularySet
from .drawing import SIDES, Drawing, DrawingPoint
from .errors import DataError
from .model import Hyperparameters, ModelParameters, sample_document

_VIEW_PREFIXES = ("loc", "sym", "rsn")


def _word_name(view: int, i: int, vocab_size: int) -> str:
    width = max(3, len(str(vocab_size - 1)))
    if view == 0:
        return f"loc{i:0{width}d}"
    prefix = _VIEW_PREFIXES[view] if view < len(_VIEW_PREFIXES) else f"v{view}w"
    side = "L" if i % 2 == 0 else "R"
    return f"{side} {prefix}{i // 2:0{width}d}"


def default_blob_layout(n_topics: int, blobs_per_topic: int) -> tuple:
    """Deterministic well-separated blob centers, topics alternating sides."""
    per_side = (n_topics + 1) // 2
    needed = per_side * blobs_per_topic
    grid = 1
    while grid * grid < needed:
        grid += 1
    if grid == 1:
        xs = ys = np.array([0.5])
    else:
        xs = ys = np.linspace(0.15, 0.85, grid)
    layout = []
    for k in range(n_topics):
        side = SIDES[k % 2]
        blobs = []
        for j in range(blobs_per_topic):
            slot = (k // 2) * blobs_per_topic + j
            blobs.append((side, float(xs[slot % grid]), float(ys[slot // grid])))
        layout.append(tuple(blobs))
    return tuple(layout)


@dataclass(frozen=True)
class PlantedSpec:
    """Ground-truth recipe for a synthetic corpus."""

    n_topics: int = 8
    private_topics: tuple = (2, 2, 2)
    vocab_sizes: tuple = (200, 200, 200)
    n_documents: int = 500
    doc_length_means: tuple = (60.0, 60.0, 60.0)
    peakedness: float = 0.9
    block_words: int | None = None
    alpha_shared: float = 0.6
    alpha_private: float = 0.6
    iota: tuple = (5.0, 5.0)
    blobs_per_topic: int = 2
    blob_std: float = 0.03
    drawing_points_mean: float = 40.0
    blobs: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "private_topics", tuple(int(t) for t in self.private_topics))
        object.__setattr__(self, "vocab_sizes", tuple(int(v) for v in self.vocab_sizes))
        object.__setattr__(
            self, "doc_length_means", tuple(float(x) for x in self.doc_length_means)
        )
        object.__setattr__(self, "iota", (float(self.iota[0]), float(self.iota[1])))
        if self.n_topics < 1:
            raise ValueError("n_topics must be at least 1")
        n_views = len(self.private_topics)
        if not (len(self.vocab_sizes) == len(self.doc_length_means) == n_views):
            raise ValueError("per-view field lengths disagree")
        if self.n_documents < 1:
            raise ValueError("n_documents must be at least 1")
        for v, size in enumerate(self.vocab_sizes):
            if size < self.n_topics:
                raise ValueError(f"view {v} vocabulary smaller than the topic count")
            if not (1.0 / size < self.peakedness <= 1.0):
                raise ValueError("peakedness must lie in (1/V, 1]")
        if self.block_words is not None:
            if self.block_words < 1:
                raise ValueError("block_words must be positive")
            if any(self.block_words * self.n_topics > v for v in self.vocab_sizes):
                raise ValueError("topic word blocks do not fit in the vocabulary")
        if any(m <= 0 for m in self.doc_length_means):
            raise ValueError("document length means must be positive")
        if self.blobs_per_topic < 1 or self.blob_std <= 0 or self.drawing_points_mean <= 0:
            raise ValueError("drawing geometry fields must be positive")
        if self.blobs is None:
            object.__setattr__(
                self, "blobs", default_blob_layout(self.n_topics, self.blobs_per_topic)
            )
        blobs = tuple(
            tuple((str(s), float(x), float(y)) for s, x, y in topic_blobs)
            for topic_blobs in self.blobs
        )
        object.__setattr__(self, "blobs", blobs)
        if len(blobs) != self.n_topics:
            raise ValueError("one blob set per shared topic is required")
        for topic_blobs in blobs:
            if not topic_blobs:
                raise ValueError("every topic needs at least one blob")
            for side, x, y in topic_blobs:
                if side not in SIDES:
                    raise ValueError(f"unknown side {side!r}")
                if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
                    raise ValueError("blob centers must lie in the unit square")

    @property
    def n_views(self) -> int:
        return len(self.private_topics)

    def hyper(self) -> Hyperparameters:
        return Hyperparameters(
            n_topics=self.n_topics,
            private_topics=self.private_topics,
            alpha_shared=self.alpha_shared,
            alpha_private=self.alpha_private,
            iota=self.iota,
        )

    def to_dict(self) -> dict:
        return {
            "n_topics": self.n_topics,
            "private_topics": list(self.private_topics),
            "vocab_sizes": list(self.vocab_sizes),
            "n_documents": self.n_documents,
            "doc_length_means": list(self.doc_length_means),
            "peakedness": self.peakedness,
            "block_words": self.block_words,
            "alpha_shared": self.alpha_shared,
            "alpha_private": self.alpha_private,
            "iota": list(self.iota),
            "blobs_per_topic": self.blobs_per_topic,
            "blob_std": self.blob_std,
            "drawing_points_mean": self.drawing_points_mean,
            "blobs": [[list(b) for b in tb] for tb in self.blobs],
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "PlantedSpec":
        kwargs = dict(rec)
        for key in ("private_topics", "vocab_sizes", "doc_length_means", "iota"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        if kwargs.get("blobs") is not None:
            kwargs["blobs"] = tuple(
                tuple(tuple(b) for b in tb) for tb in kwargs["blobs"]
            )
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise DataError(f"unknown planted-spec field: {exc}") from exc


def save_spec(spec: PlantedSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec.to_dict(), fh, indent=2)
        fh.write("\n")


def load_spec(path) -> PlantedSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            rec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"spec file {path} is not valid JSON: {exc}") from exc
    if not isinstance(rec, dict):
        raise DataError(f"spec file {path} must hold a JSON object")
    return PlantedSpec.from_dict(rec)


def planted_vocabulary(spec: PlantedSpec) -> VocabularySet:
    return VocabularySet(
        views=[
            [_word_name(v, i, spec.vocab_sizes[v]) for i in range(spec.vocab_sizes[v])]
            for v in range(spec.n_views)
        ]
    )


def topic_blocks(spec: PlantedSpec, view: int) -> list:
    """Disjoint word-index blocks, one per shared topic.

    Block width defaults to an even V/K partition; `block_words`
    narrows the blocks so each topic concentrates on fewer words,
    leaving the tail of the vocabulary shared background.
    """
    size = spec.block_words or spec.vocab_sizes[view] // spec.n_topics
    return [list(range(k * size, (k + 1) * size)) for k in range(spec.n_topics)]


def plant_model(spec: PlantedSpec, rng: np.random.Generator | None = None) -> ModelParameters:
    """Clamped ground-truth tables: peaked disjoint blocks, uniform private rows.

    Fully determined by `spec`; the rng argument is accepted for
    signature symmetry with generate_corpus and left unused.
    """
    del rng
    topic_word = []
    private_topic_word = []
    for v in range(spec.n_views):
        size = spec.vocab_sizes[v]
        blocks = topic_blocks(spec, v)
        beta = np.zeros((spec.n_topics, size))
        for k, block in enumerate(blocks):
            rest = size - len(block)
            if rest:
                beta[k, :] = (1.0 - spec.peakedness) / rest
            beta[k, block] = spec.peakedness / len(block)
        topic_word.append(beta)
        tv = spec.private_topics[v]
        private_topic_word.append(np.full((tv, size), 1.0 / size))
    return ModelParameters(
        hyper=spec.hyper(),
        vocab=planted_vocabulary(spec),
        topic_word=topic_word,
        private_topic_word=private_topic_word,
        clamped=True,
    )


def synthesize_drawing(
    spec: PlantedSpec, theta: np.ndarray, rng: np.random.Generator
) -> Drawing:
    """Painted points drawn from the blobs of theta-weighted topics."""
    n_points = max(3, int(rng.poisson(spec.drawing_points_mean)))
    topics = rng.choice(spec.n_topics, size=n_points, p=theta)
    points = []
    for k in topics:
        blobs = spec.blobs[k]
        side, cx, cy = blobs[int(rng.integers(len(blobs)))]
        x, y = rng.normal((cx, cy), spec.blob_std)
        points.append(
            DrawingPoint(side=side, x=float(np.clip(x, 0.0, 1.0)), y=float(np.clip(y, 0.0, 1.0)))
        )
    return Drawing(points=points)


def generate_corpus(
    spec: PlantedSpec,
    rng: np.random.Generator,
    seed: int | None = None,
    name: str = "",
) -> Corpus:
    """Sample a corpus from the planted model, with traces and drawings.

    Each document uses its own child generator spawned from `rng`, so
    regeneration from the same master seed is byte-identical and
    documents could be produced in parallel.
    """
    model = plant_model(spec)
    hyper = spec.hyper()
    documents = []
    for child in rng.spawn(spec.n_documents):
        lengths = [max(1, int(child.poisson(m))) for m in spec.doc_length_means]
        doc, trace = sample_document(hyper, model, lengths, child)
        doc.drawing = synthesize_drawing(spec, trace.theta, child)
        documents.append(doc)
    return Corpus(
        documents=documents,
        vocab=model.vocab,
        name=name or f"planted-k{spec.n_topics}",
        seed=seed,
    )


def shrink(spec: PlantedSpec, **overrides) -> PlantedSpec:
    """Convenience for tests: copy `spec` with some fields replaced."""
    return replace(spec, **overrides)
