"""Multi-view document corpus: vocabularies, label normalization, persistence.

A document is one patient case with one token list per view (view 0 is
the drawing view in the diagnostic pipeline, views 1 and 2 the symptom
and reason label views). Corpora round-trip losslessly through a JSONL
file plus a `<path>.vocab.json` sidecar holding vocabularies and metadata.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .drawing import Drawing
from .errors import CorpusFormatError, DataError

logger = logging.getLogger(__name__)

VIEW_NAMES = ("drawing", "symptom", "reason")

DRAWING_VIEW = 0


def normalize_labels(labels) -> list:
    """Split bilateral labels into left/right pairs.

    A leading "B " prefix expands into "L " and "R " variants; anything
    else passes through. The output is deduplicated keeping first
    occurrences, so the op is idempotent.
    """
    out: list = []
    seen: set = set()
    for label in labels:
        if label.startswith("B "):
            expanded = ("L " + label[2:], "R " + label[2:])
        else:
            expanded = (label,)
        for item in expanded:
            if item not in seen:
                seen.add(item)
                out.append(item)
    return out


@dataclass
class VocabularySet:
    views: list  # per-view list of word strings, unique within a view

    def __post_init__(self):
        for v, words in enumerate(self.views):
            if len(set(words)) != len(words):
                raise DataError(f"view {v} vocabulary contains duplicate words")

    @property
    def n_views(self) -> int:
        return len(self.views)

    def size(self, view: int) -> int:
        return len(self.views[view])

    def sizes(self) -> list:
        return [len(w) for w in self.views]

    def index(self, view: int) -> dict:
        return {w: i for i, w in enumerate(self.views[view])}

    def words(self, view: int, indices) -> list:
        table = self.views[view]
        return [table[i] for i in indices]

    def __eq__(self, other):
        if not isinstance(other, VocabularySet):
            return NotImplemented
        return self.views == other.views


@dataclass
class LatentTrace:
    """Ground-truth latent state recorded when a document is sampled."""

    theta: np.ndarray          # (K,)
    kappa: list                # per view (T_v,) arrays
    rho: list                  # per view float; 1.0 for views without private topics
    assignments: list          # per view (N_v, 2) int arrays: [is_shared, topic]

    def __eq__(self, other):
        if not isinstance(other, LatentTrace):
            return NotImplemented
        return (
            np.array_equal(self.theta, other.theta)
            and len(self.kappa) == len(other.kappa)
            and all(np.array_equal(a, b) for a, b in zip(self.kappa, other.kappa))
            and self.rho == other.rho
            and len(self.assignments) == len(other.assignments)
            and all(np.array_equal(a, b) for a, b in zip(self.assignments, other.assignments))
        )

    def to_record(self) -> dict:
        return {
            "theta": self.theta.tolist(),
            "kappa": [k.tolist() for k in self.kappa],
            "rho": list(self.rho),
            "assignments": [a.tolist() for a in self.assignments],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "LatentTrace":
        return cls(
            theta=np.asarray(rec["theta"], dtype=np.float64),
            kappa=[np.asarray(k, dtype=np.float64) for k in rec["kappa"]],
            rho=[float(r) for r in rec["rho"]],
            assignments=[np.asarray(a, dtype=np.int64).reshape(-1, 2) for a in rec["assignments"]],
        )


@dataclass
class Document:
    tokens: list                       # per-view int64 arrays of vocab indices
    drawing: Drawing | None = None
    latent: LatentTrace | None = None

    def __post_init__(self):
        self.tokens = [np.asarray(t, dtype=np.int64) for t in self.tokens]

    @property
    def n_views(self) -> int:
        return len(self.tokens)

    def length(self, view: int) -> int:
        return int(self.tokens[view].size)

    def total_length(self) -> int:
        return int(sum(t.size for t in self.tokens))

    def restrict(self, views) -> "Document":
        return Document(tokens=[self.tokens[v] for v in views], drawing=self.drawing)

    def __eq__(self, other):
        if not isinstance(other, Document):
            return NotImplemented
        return (
            len(self.tokens) == len(other.tokens)
            and all(np.array_equal(a, b) for a, b in zip(self.tokens, other.tokens))
            and self.drawing == other.drawing
            and self.latent == other.latent
        )


@dataclass
class Corpus:
    documents: list
    vocab: VocabularySet
    name: str = ""
    seed: int | None = None

    @property
    def n_views(self) -> int:
        return self.vocab.n_views

    def __len__(self):
        return len(self.documents)

    def __eq__(self, other):
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            self.documents == other.documents
            and self.vocab == other.vocab
            and self.name == other.name
            and self.seed == other.seed
        )

    def subset(self, indices, name: str = "") -> "Corpus":
        return Corpus(
            documents=[self.documents[i] for i in indices],
            vocab=self.vocab,
            name=name or self.name,
            seed=self.seed,
        )


def encode_tokens(tokens, vocab_index: dict, view: int) -> np.ndarray:
    """Token strings -> vocab indices; unknown tokens are dropped with a warning."""
    out = []
    dropped = 0
    for tok in tokens:
        idx = vocab_index.get(tok)
        if idx is None:
            dropped += 1
        else:
            out.append(idx)
    if dropped:
        logger.warning("dropped %d unknown token(s) in view %d", dropped, view)
    return np.asarray(out, dtype=np.int64)


def build_vocabulary(raw_documents, drawings=None) -> tuple:
    """Build per-view vocabularies from string-token documents.

    Each view's vocabulary is the sorted set of distinct tokens observed
    in that view across all documents; documents are re-encoded as index
    lists. Returns (VocabularySet, Corpus).
    """
    raw_documents = list(raw_documents)
    if not raw_documents:
        raise DataError("empty corpus")
    n_views = len(raw_documents[0])
    for i, doc in enumerate(raw_documents):
        if len(doc) != n_views:
            raise DataError(f"document {i} has {len(doc)} views, expected {n_views}")
    views = []
    for v in range(n_views):
        seen = set()
        for doc in raw_documents:
            seen.update(doc[v])
        views.append(sorted(seen))
    vocab = VocabularySet(views=views)
    indexes = [vocab.index(v) for v in range(n_views)]
    documents = []
    for i, doc in enumerate(raw_documents):
        tokens = [encode_tokens(doc[v], indexes[v], v) for v in range(n_views)]
        if sum(t.size for t in tokens) == 0:
            raise DataError(f"document {i} is empty in every view")
        drawing = drawings[i] if drawings is not None else None
        documents.append(Document(tokens=tokens, drawing=drawing))
    return vocab, Corpus(documents=documents, vocab=vocab)


def _vocab_path(path) -> str:
    return f"{path}.vocab.json"


def save_corpus(corpus: Corpus, path) -> None:
    """One JSON document record per line; vocab and metadata in a sidecar."""
    with open(_vocab_path(path), "w", encoding="utf-8") as fh:
        json.dump(
            {"views": corpus.vocab.views, "name": corpus.name, "seed": corpus.seed},
            fh,
        )
        fh.write("\n")
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            rec = {
                "views": [
                    corpus.vocab.words(v, doc.tokens[v]) for v in range(doc.n_views)
                ]
            }
            if doc.drawing is not None:
                rec["drawing"] = doc.drawing.to_records()
            if doc.latent is not None:
                rec["latent"] = doc.latent.to_record()
            fh.write(json.dumps(rec))
            fh.write("\n")


def load_corpus(path) -> Corpus:
    vocab_file = _vocab_path(path)
    try:
        with open(vocab_file, encoding="utf-8") as fh:
            meta = json.load(fh)
    except FileNotFoundError:
        raise DataError(f"missing vocabulary sidecar {vocab_file}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"vocabulary sidecar {vocab_file} is not valid JSON: {exc}") from exc
    vocab = VocabularySet(views=[list(map(str, ws)) for ws in meta["views"]])
    indexes = [vocab.index(v) for v in range(vocab.n_views)]
    documents = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(lineno, f"invalid JSON ({exc.msg})") from exc
            if "views" not in rec:
                raise CorpusFormatError(lineno, "missing 'views' field")
            if len(rec["views"]) != vocab.n_views:
                raise CorpusFormatError(
                    lineno,
                    f"expected {vocab.n_views} view arrays, found {len(rec['views'])}",
                )
            tokens = [
                encode_tokens(rec["views"][v], indexes[v], v)
                for v in range(vocab.n_views)
            ]
            if sum(t.size for t in tokens) == 0:
                raise CorpusFormatError(lineno, "document is empty in every view")
            drawing = None
            if "drawing" in rec:
                try:
                    drawing = Drawing.from_records(rec["drawing"])
                except (KeyError, TypeError, DataError) as exc:
                    raise CorpusFormatError(lineno, f"malformed drawing ({exc})") from exc
            latent = None
            if "latent" in rec:
                try:
                    latent = LatentTrace.from_record(rec["latent"])
                except (KeyError, TypeError, ValueError) as exc:
                    raise CorpusFormatError(lineno, f"malformed latent trace ({exc})") from exc
            documents.append(Document(tokens=tokens, drawing=drawing, latent=latent))
    if not documents:
        raise DataError("empty corpus")
    return Corpus(
        documents=documents,
        vocab=vocab,
        name=str(meta.get("name", "")),
        seed=meta.get("seed"),
    )
