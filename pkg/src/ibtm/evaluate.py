"""F-measure scoring and the split/seed evaluation protocol.

The protocol mirrors the intended clinical experiment on synthetic data:
repeated 50/50 splits, a location codebook fitted on each training half,
a grid of shared topic counts, several fitting seeds per cell with
best-seed selection per view, and a label-frequency baseline under the
same per-document output counts.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field, replace

import numpy as np

from .corpus import DRAWING_VIEW, Corpus, build_vocabulary
from .drawing import DEFAULT_BANDWIDTH, DEFAULT_CODEBOOK_SIZE, count_regions, encode_drawing, fit_codebook
from .errors import DataError
from .model import DOC_MAX_SWEEPS, DOC_TOL, FIT_MAX_SWEEPS, FIT_TOL, Hyperparameters, fit
from .predict import MAX_LABELS, infer_from_drawing, score_labels

logger = logging.getLogger(__name__)


def f_measure(predicted, truth) -> tuple:
    """(precision, recall, f) for two label sets.

    Precision is 0 for an empty prediction; an empty truth set leaves
    recall undefined and raises.
    """
    predicted = set(predicted)
    truth = set(truth)
    if not truth:
        raise ValueError("truth label set is empty")
    hits = len(predicted & truth)
    p = hits / len(predicted) if predicted else 0.0
    r = hits / len(truth)
    f = 2.0 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f


def _micro_f(pairs) -> float:
    """Micro-averaged F over (predicted, truth) set pairs."""
    hits = pred_total = truth_total = 0
    for predicted, truth in pairs:
        predicted = set(predicted)
        truth = set(truth)
        hits += len(predicted & truth)
        pred_total += len(predicted)
        truth_total += len(truth)
    p = hits / pred_total if pred_total else 0.0
    r = hits / truth_total if truth_total else 0.0
    return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


def _mean_f(pairs, micro: bool) -> float:
    pairs = list(pairs)
    if not pairs:
        return 0.0
    if micro:
        return _micro_f(pairs)
    return float(np.mean([f_measure(pred, truth)[2] for pred, truth in pairs]))


def _top_labels(counts: Counter, n: int) -> list:
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [label for label, _ in ranked[:n]]


def frequency_baseline(train: Corpus, test: Corpus, n_per_doc, view: int, micro: bool = False) -> float:
    """Mean F when every test document gets the n most frequent train labels."""
    if train.vocab != test.vocab:
        raise ValueError("train and test corpora must share a vocabulary")
    n_per_doc = [int(n) for n in n_per_doc]
    if len(n_per_doc) != len(test.documents):
        raise ValueError("one label count per test document is required")
    counts = Counter()
    for doc in train.documents:
        counts.update(train.vocab.words(view, doc.tokens[view]))
    pairs = []
    for doc, n in zip(test.documents, n_per_doc):
        truth = set(test.vocab.words(view, doc.tokens[view]))
        if not truth:
            continue
        pairs.append((set(_top_labels(counts, n)), truth))
    return _mean_f(pairs, micro)


@dataclass(frozen=True)
class EvalConfig:
    """Protocol shape and model settings for run_protocol."""

    n_splits: int = 10
    split_fraction: float = 0.5
    n_seeds: int = 10
    k_grid: tuple = (10, 15, 20, 30, 50)
    private_topics: int = 5
    alpha_shared: float = 0.6
    alpha_private: float = 0.6
    sigma_shared: float = 0.6
    sigma_private: float = 0.6
    iota: tuple = (5.0, 5.0)
    max_labels: int = MAX_LABELS
    bandwidth: float = DEFAULT_BANDWIDTH
    codebook_size: int = DEFAULT_CODEBOOK_SIZE
    master_seed: int = 0
    micro: bool = False
    max_sweeps: int = FIT_MAX_SWEEPS
    tol: float = FIT_TOL
    doc_max_iter: int = DOC_MAX_SWEEPS
    doc_tol: float = DOC_TOL
    backend: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "k_grid", tuple(int(k) for k in self.k_grid))
        object.__setattr__(self, "iota", (float(self.iota[0]), float(self.iota[1])))
        if self.n_splits < 1 or self.n_seeds < 1 or not self.k_grid:
            raise ValueError("protocol dimensions must be positive")
        if not (0.0 < self.split_fraction < 1.0):
            raise ValueError("split fraction must lie in (0, 1)")
        if min(self.k_grid) < 1 or self.private_topics < 0:
            raise ValueError("topic counts must be non-negative (K >= 1)")
        if self.max_labels < 1 or self.bandwidth <= 0 or self.codebook_size < 1:
            raise ValueError("prediction settings must be positive")


@dataclass
class EvalReport:
    """Per (view, K) scores over splits, plus the frequency baseline."""

    view_names: list
    k_grid: list
    split_f: dict          # view name -> {K -> [best-seed F per split]}
    best_seeds: dict       # view name -> {K -> [chosen seed per split]}
    baseline_split_f: dict  # view name -> [baseline F per split]
    config: EvalConfig
    micro: bool = False
    extras: dict = field(default_factory=dict)

    def mean_f(self, view: str, k: int) -> float:
        return float(np.mean(self.split_f[view][k]))

    def std_f(self, view: str, k: int) -> float:
        values = self.split_f[view][k]
        return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0

    def baseline_f(self, view: str) -> float:
        return float(np.mean(self.baseline_split_f[view]))

    def matrix(self) -> list:
        """(mean, std) cells with one row per view, one column per K."""
        return [
            [(self.mean_f(view, k), self.std_f(view, k)) for k in self.k_grid]
            for view in self.view_names
        ]

    def to_rows(self) -> list:
        rows = []
        for view in self.view_names:
            for k in self.k_grid:
                rows.append(
                    {
                        "view": view,
                        "k": k,
                        "mean_f": self.mean_f(view, k),
                        "std_f": self.std_f(view, k),
                        "baseline_f": self.baseline_f(view),
                    }
                )
        return rows

    def to_tsv(self) -> str:
        lines = ["view\tk\tmean_f\tstd_f\tbaseline_f"]
        for row in self.to_rows():
            lines.append(
                "{view}\t{k}\t{mean_f!r}\t{std_f!r}\t{baseline_f!r}".format(**row)
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "view_names": self.view_names,
            "k_grid": self.k_grid,
            "rows": self.to_rows(),
            "split_f": {
                view: {str(k): list(v) for k, v in per_k.items()}
                for view, per_k in self.split_f.items()
            },
            "best_seeds": {
                view: {str(k): list(v) for k, v in per_k.items()}
                for view, per_k in self.best_seeds.items()
            },
            "baseline_split_f": {v: list(x) for v, x in self.baseline_split_f.items()},
            "micro": self.micro,
            "master_seed": self.config.master_seed,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _quiet_corpus_logger():
    corpus_logger = logging.getLogger("ibtm.corpus")
    previous = corpus_logger.level
    corpus_logger.setLevel(logging.ERROR)
    return corpus_logger, previous


def run_protocol(corpus: Corpus, config: EvalConfig) -> EvalReport:
    """Replicates the split/seed experiment on a drawing-bearing corpus.

    For each split: fit a codebook on the training drawings, re-encode
    every drawing as location words, build the training vocabulary, fit a
    model per (K, seed), predict each test document's labels from its
    drawing alone, and keep the best seed per view by mean test F.
    Documents with an empty truth set in a view are skipped for that
    view. Identical config (including master_seed) gives identical
    report bytes.
    """
    if corpus.n_views != 3:
        raise ValueError("protocol needs the three-view corpus layout")
    n_docs = len(corpus.documents)
    if n_docs < 2:
        raise DataError("at least two documents are required")
    for d, doc in enumerate(corpus.documents):
        if doc.drawing is None or not doc.drawing.points:
            raise DataError(f"document {d} has no drawing")
    target_views = [v for v in range(3) if v != DRAWING_VIEW]
    names = {v: ("symptom" if v == 1 else "reason") for v in target_views}

    # Region counts depend only on the bandwidth; compute once.
    regions = [count_regions(doc.drawing, config.bandwidth) for doc in corpus.documents]
    truth = {
        v: [set(corpus.vocab.words(v, doc.tokens[v])) for doc in corpus.documents]
        for v in target_views
    }

    split_f = {names[v]: {k: [] for k in config.k_grid} for v in target_views}
    best_seeds = {names[v]: {k: [] for k in config.k_grid} for v in target_views}
    baseline_split_f = {names[v]: [] for v in target_views}

    for split in range(config.n_splits):
        rng = np.random.default_rng(np.random.SeedSequence((config.master_seed, split)))
        perm = rng.permutation(n_docs)
        n_train = max(1, int(round(n_docs * config.split_fraction)))
        n_train = min(n_train, n_docs - 1)
        train_idx = np.sort(perm[:n_train])
        test_idx = np.sort(perm[n_train:])
        derived = rng.integers(2**31, size=1 + config.n_seeds)
        codebook_seed = int(derived[0])
        fit_seeds = [int(s) for s in derived[1:]]

        train_points = [
            p for i in train_idx for p in corpus.documents[i].drawing.points
        ]
        codebook = fit_codebook(train_points, k=config.codebook_size, seed=codebook_seed)
        code_names = codebook.word_names()
        loc_words = [
            [code_names[c] for c in encode_drawing(doc.drawing, codebook)]
            for doc in corpus.documents
        ]
        raw_train = [
            [
                loc_words[i],
                corpus.vocab.words(1, corpus.documents[i].tokens[1]),
                corpus.vocab.words(2, corpus.documents[i].tokens[2]),
            ]
            for i in train_idx
        ]
        corpus_logger, previous_level = _quiet_corpus_logger()
        try:
            vocab, train_corpus = build_vocabulary(raw_train)
            v0 = vocab.index(0)
            test_bags = {
                int(i): np.asarray(
                    [v0[w] for w in loc_words[i] if w in v0], dtype=np.int64
                )
                for i in test_idx
            }
        finally:
            corpus_logger.setLevel(previous_level)

        n_cap = {
            v: [
                min(regions[i], config.max_labels, vocab.size(v))
                for i in test_idx
            ]
            for v in target_views
        }
        train_label_counts = {
            v: Counter(
                w
                for i in train_idx
                for w in corpus.vocab.words(v, corpus.documents[i].tokens[v])
            )
            for v in target_views
        }
        for v in target_views:
            pairs = []
            for j, i in enumerate(test_idx):
                if not truth[v][i]:
                    continue
                pairs.append(
                    (set(_top_labels(train_label_counts[v], n_cap[v][j])), truth[v][i])
                )
            baseline_split_f[names[v]].append(_mean_f(pairs, config.micro))

        for k_val in config.k_grid:
            hyper = Hyperparameters(
                n_topics=k_val,
                private_topics=(config.private_topics,) * 3,
                alpha_shared=config.alpha_shared,
                alpha_private=config.alpha_private,
                sigma_shared=config.sigma_shared,
                sigma_private=config.sigma_private,
                iota=config.iota,
            )
            best = {v: (-1.0, -1) for v in target_views}
            for seed in fit_seeds:
                model, _, _ = fit(
                    train_corpus,
                    hyper,
                    max_sweeps=config.max_sweeps,
                    tol=config.tol,
                    seed=seed,
                    doc_max_iter=config.doc_max_iter,
                    doc_tol=config.doc_tol,
                    backend=config.backend,
                )
                pairs = {v: [] for v in target_views}
                for j, i in enumerate(test_idx):
                    bag = test_bags[int(i)]
                    posterior = infer_from_drawing(bag, model) if bag.size else None
                    for v in target_views:
                        if not truth[v][i]:
                            continue
                        if posterior is None:
                            predicted = set()
                        else:
                            ranked = score_labels(posterior, model, v)
                            predicted = {label for label, _ in ranked[: n_cap[v][j]]}
                        pairs[v].append((predicted, truth[v][i]))
                for v in target_views:
                    value = _mean_f(pairs[v], config.micro)
                    if value > best[v][0]:
                        best[v] = (value, seed)
            for v in target_views:
                split_f[names[v]][k_val].append(best[v][0])
                best_seeds[names[v]][k_val].append(best[v][1])
        logger.info("split %d/%d done", split + 1, config.n_splits)

    return EvalReport(
        view_names=[names[v] for v in target_views],
        k_grid=list(config.k_grid),
        split_f=split_f,
        best_seeds=best_seeds,
        baseline_split_f=baseline_split_f,
        config=config,
        micro=config.micro,
    )


def shrink(config: EvalConfig, **overrides) -> EvalConfig:
    """Convenience for tests: copy the config with some fields replaced."""
    return replace(config, **overrides)
