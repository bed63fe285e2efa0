"""Three-view shared/private topic model: sampler, inference, fitting.

The generative story per document: a shared topic mixture is drawn once,
each view draws its own private mixture and a shared-vs-private switch
probability, and every token either picks a shared topic (emitting from
that view's shared topic-word table) or a private one. Views with zero
private topics degenerate to multi-view LDA; a single such view is LDA.

Inference is full-batch variational EM. Document factors are updated by
the kernel backends (numpy or numba, see ibtm.backends); the global
topic-word update and the evidence lower bound live here.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .backends import get_backend
from .corpus import Corpus, Document, LatentTrace, VocabularySet
from .errors import DataError, NumericError
from .special import digamma

logger = logging.getLogger(__name__)

DOC_MAX_SWEEPS = 100
DOC_TOL = 1e-6
FIT_MAX_SWEEPS = 200
FIT_TOL = 1e-5
INIT_JITTER = 1.0


def _safe_log(arr: np.ndarray) -> np.ndarray:
    out = np.full_like(arr, -np.inf)
    np.log(arr, out=out, where=arr > 0.0)
    return out


@dataclass(frozen=True)
class Hyperparameters:
    """Fixed model concentrations; never learned."""

    n_topics: int
    private_topics: tuple
    alpha_shared: float = 0.6
    alpha_private: float = 0.6
    sigma_shared: float = 0.6
    sigma_private: float = 0.6
    iota: tuple = (5.0, 5.0)

    def __post_init__(self):
        object.__setattr__(self, "private_topics", tuple(int(t) for t in self.private_topics))
        object.__setattr__(self, "iota", (float(self.iota[0]), float(self.iota[1])))
        if self.n_topics < 1:
            raise ValueError("n_topics must be at least 1")
        if len(self.private_topics) < 1:
            raise ValueError("at least one view is required")
        if any(t < 0 for t in self.private_topics):
            raise ValueError("private topic counts must be non-negative")
        for label, value in (
            ("alpha_shared", self.alpha_shared),
            ("alpha_private", self.alpha_private),
            ("sigma_shared", self.sigma_shared),
            ("sigma_private", self.sigma_private),
            ("iota[0]", self.iota[0]),
            ("iota[1]", self.iota[1]),
        ):
            if not (np.isfinite(value) and value > 0.0):
                raise ValueError(f"{label} must be positive and finite")

    @property
    def n_views(self) -> int:
        return len(self.private_topics)

    def restrict(self, views) -> "Hyperparameters":
        return Hyperparameters(
            n_topics=self.n_topics,
            private_topics=tuple(self.private_topics[v] for v in views),
            alpha_shared=self.alpha_shared,
            alpha_private=self.alpha_private,
            sigma_shared=self.sigma_shared,
            sigma_private=self.sigma_private,
            iota=self.iota,
        )

    def to_dict(self) -> dict:
        return {
            "n_topics": self.n_topics,
            "private_topics": list(self.private_topics),
            "alpha_shared": self.alpha_shared,
            "alpha_private": self.alpha_private,
            "sigma_shared": self.sigma_shared,
            "sigma_private": self.sigma_private,
            "iota": list(self.iota),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "Hyperparameters":
        return cls(
            n_topics=int(rec["n_topics"]),
            private_topics=tuple(rec["private_topics"]),
            alpha_shared=float(rec["alpha_shared"]),
            alpha_private=float(rec["alpha_private"]),
            sigma_shared=float(rec["sigma_shared"]),
            sigma_private=float(rec["sigma_private"]),
            iota=tuple(rec["iota"]),
        )


@dataclass
class ModelParameters:
    """Per-view topic-word tables plus the hyperparameters that shaped them.

    `topic_word[v]` is (K, V_v) and `private_topic_word[v]` is (T_v, V_v).
    In the default variational mode the tables are Dirichlet parameters
    and token expectations use digamma; with `clamped=True` the rows are
    taken as exact distributions (used for planted models and bound
    checks) and expectations are plain logs.
    """

    hyper: Hyperparameters
    vocab: VocabularySet
    topic_word: list
    private_topic_word: list
    clamped: bool = False
    seed: int | None = None
    elbo_history: list = field(default_factory=list)

    def __post_init__(self):
        self.topic_word = [np.asarray(m, dtype=np.float64) for m in self.topic_word]
        self.private_topic_word = [
            np.asarray(m, dtype=np.float64) for m in self.private_topic_word
        ]
        hyper = self.hyper
        if self.vocab.n_views != hyper.n_views:
            raise ValueError("vocabulary and hyperparameters disagree on view count")
        if len(self.topic_word) != hyper.n_views or len(self.private_topic_word) != hyper.n_views:
            raise ValueError("one topic-word table per view is required")
        for v in range(hyper.n_views):
            vv = self.vocab.size(v)
            if self.topic_word[v].shape != (hyper.n_topics, vv):
                raise ValueError(f"view {v} shared table has wrong shape")
            if self.private_topic_word[v].shape != (hyper.private_topics[v], vv):
                raise ValueError(f"view {v} private table has wrong shape")
            for table, label in (
                (self.topic_word[v], "shared"),
                (self.private_topic_word[v], "private"),
            ):
                if table.size == 0:
                    continue
                if self.clamped:
                    # Clamped rows are plain distributions; zeros are fine
                    # as long as every row keeps some mass.
                    if np.any(table < 0.0) or np.any(table.sum(axis=1) <= 0.0):
                        raise ValueError(f"view {v} {label} table has an invalid row")
                elif not np.all(table > 0.0):
                    raise ValueError(f"view {v} {label} table must be strictly positive")

    @property
    def n_views(self) -> int:
        return self.hyper.n_views

    @property
    def beta_bar(self) -> list:
        return [m / m.sum(axis=1, keepdims=True) for m in self.topic_word]

    @property
    def zeta_bar(self) -> list:
        out = []
        for m in self.private_topic_word:
            out.append(m / m.sum(axis=1, keepdims=True) if m.size else m.copy())
        return out

    def expected_log_tables(self) -> tuple:
        """Per-view E[log word prob] matrices, padded for the kernels.

        Returns (elog_shared, elog_private) with shapes (D, K, Vmax) and
        (D, Tmax, Vmax); padding entries are -inf and never read.
        """
        n_views = self.n_views
        n_topics = self.hyper.n_topics
        t_max = max(self.hyper.private_topics)
        v_max = max(self.vocab.sizes())
        elog_shared = np.full((n_views, n_topics, v_max), -np.inf)
        elog_private = np.full((n_views, t_max, v_max), -np.inf)
        for v in range(n_views):
            vv = self.vocab.size(v)
            tv = self.hyper.private_topics[v]
            if vv == 0:
                continue
            if self.clamped:
                row = self.topic_word[v] / self.topic_word[v].sum(axis=1, keepdims=True)
                elog_shared[v, :, :vv] = _safe_log(row)
                if tv:
                    prow = self.private_topic_word[v]
                    prow = prow / prow.sum(axis=1, keepdims=True)
                    elog_private[v, :tv, :vv] = _safe_log(prow)
            else:
                g = self.topic_word[v]
                elog_shared[v, :, :vv] = digamma(g) - digamma(g.sum(axis=1))[:, None]
                if tv:
                    gp = self.private_topic_word[v]
                    elog_private[v, :tv, :vv] = digamma(gp) - digamma(gp.sum(axis=1))[:, None]
        return elog_shared, elog_private

    def restrict(self, views) -> "ModelParameters":
        """Keep only the given views (for partial-observation inference)."""
        views = list(views)
        return ModelParameters(
            hyper=self.hyper.restrict(views),
            vocab=VocabularySet(views=[self.vocab.views[v] for v in views]),
            topic_word=[self.topic_word[v].copy() for v in views],
            private_topic_word=[self.private_topic_word[v].copy() for v in views],
            clamped=self.clamped,
            seed=self.seed,
            elbo_history=list(self.elbo_history),
        )

    def save(self, path) -> None:
        rec = {
            "hyper": self.hyper.to_dict(),
            "vocab_sizes": self.vocab.sizes(),
            "vocab": self.vocab.views,
            "topic_word": [m.tolist() for m in self.topic_word],
            "private_topic_word": [m.tolist() for m in self.private_topic_word],
            "clamped": self.clamped,
            "seed": self.seed,
            "elbo_history": list(self.elbo_history),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(rec, fh)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ModelParameters":
        try:
            with open(path, encoding="utf-8") as fh:
                rec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"model file {path} is not valid JSON: {exc}") from exc
        try:
            hyper = Hyperparameters.from_dict(rec["hyper"])
            model = cls(
                hyper=hyper,
                vocab=VocabularySet(views=[list(map(str, ws)) for ws in rec["vocab"]]),
                topic_word=[np.asarray(m, dtype=np.float64) for m in rec["topic_word"]],
                private_topic_word=[
                    np.asarray(m, dtype=np.float64).reshape(hyper.private_topics[v], -1)
                    if np.asarray(m).size
                    else np.zeros((hyper.private_topics[v], len(rec["vocab"][v])))
                    for v, m in enumerate(rec["private_topic_word"])
                ],
                clamped=bool(rec.get("clamped", False)),
                seed=rec.get("seed"),
                elbo_history=[float(x) for x in rec.get("elbo_history", [])],
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DataError):
                raise
            raise DataError(f"model file {path} is malformed: {exc}") from exc
        return model


@dataclass
class DocumentPosterior:
    """Converged local factors for one document.

    `gamma` parametrizes the shared mixture, `gamma_private[v]` the
    view's private mixture (empty when the view has no private topics),
    `lam[v]` the switch Beta (None when absent), and `phi[v]` is the
    (N_v, K + T_v) per-token assignment table.
    """

    gamma: np.ndarray
    gamma_private: list
    lam: list
    phi: list
    elbo: float
    n_sweeps: int

    @property
    def theta_mean(self) -> np.ndarray:
        return self.gamma / self.gamma.sum()


def initial_topic_matrix(rng: np.random.Generator, base: float, shape) -> np.ndarray:
    """Symmetric concentration with multiplicative jitter to break ties.

    The jitter is relative so weakly-concentrated priors still start
    well separated; batch coordinate ascent stalls in merged-topic
    optima when rows begin nearly identical.
    """
    return base * (1.0 + rng.uniform(0.0, INIT_JITTER, size=shape))


def initial_model(corpus_vocab: VocabularySet, hyper: Hyperparameters, seed: int) -> ModelParameters:
    rng = np.random.default_rng(seed)
    topic_word = []
    private_topic_word = []
    for v in range(hyper.n_views):
        vv = corpus_vocab.size(v)
        topic_word.append(initial_topic_matrix(rng, hyper.sigma_shared, (hyper.n_topics, vv)))
        private_topic_word.append(
            initial_topic_matrix(rng, hyper.sigma_private, (hyper.private_topics[v], vv))
        )
    return ModelParameters(
        hyper=hyper,
        vocab=corpus_vocab,
        topic_word=topic_word,
        private_topic_word=private_topic_word,
        seed=seed,
    )


def _check_encodable(doc: Document, vocab: VocabularySet) -> None:
    if doc.n_views != vocab.n_views:
        raise ValueError("document and model disagree on view count")
    for v in range(doc.n_views):
        t = doc.tokens[v]
        if t.size and (t.min() < 0 or t.max() >= vocab.size(v)):
            raise DataError(f"view {v} token index out of vocabulary range")


def _pack_tokens(doc: Document) -> tuple:
    offsets = np.zeros(doc.n_views + 1, dtype=np.int64)
    for v in range(doc.n_views):
        offsets[v + 1] = offsets[v] + doc.tokens[v].size
    if offsets[-1] == 0:
        words = np.zeros(0, dtype=np.int64)
    else:
        words = np.concatenate([t for t in doc.tokens])
    return words, offsets


def _unpack_posterior(
    hyper: Hyperparameters, offsets, gamma, gammap, lam, phi, bound: float, sweeps: int
) -> DocumentPosterior:
    n_topics = hyper.n_topics
    gamma_private = []
    lam_out = []
    phi_out = []
    for v in range(hyper.n_views):
        tv = hyper.private_topics[v]
        lo, hi = int(offsets[v]), int(offsets[v + 1])
        gamma_private.append(gammap[v, :tv].copy())
        lam_out.append((float(lam[v, 0]), float(lam[v, 1])) if tv > 0 else None)
        phi_out.append(phi[lo:hi, : n_topics + tv].copy())
    return DocumentPosterior(
        gamma=gamma.copy(),
        gamma_private=gamma_private,
        lam=lam_out,
        phi=phi_out,
        elbo=float(bound),
        n_sweeps=int(sweeps),
    )


def sample_document(
    hyper: Hyperparameters,
    model: ModelParameters,
    lengths,
    rng: np.random.Generator,
) -> tuple:
    """Draw one document from the generative process.

    Returns (Document, LatentTrace); the trace is also attached to the
    document. Views with no private topics always take the shared branch.
    """
    lengths = [int(n) for n in lengths]
    if len(lengths) != hyper.n_views:
        raise ValueError("one length per view is required")
    if any(n < 0 for n in lengths):
        raise ValueError("lengths must be non-negative")
    beta_bar = model.beta_bar
    zeta_bar = model.zeta_bar
    theta = rng.dirichlet(np.full(hyper.n_topics, hyper.alpha_shared))
    kappa = []
    rho = []
    tokens = []
    assignments = []
    for v in range(hyper.n_views):
        tv = hyper.private_topics[v]
        nv = lengths[v]
        if tv > 0:
            kappa_v = rng.dirichlet(np.full(tv, hyper.alpha_private))
            rho_v = float(rng.beta(hyper.iota[0], hyper.iota[1]))
        else:
            kappa_v = np.zeros(0)
            rho_v = 1.0
        kappa.append(kappa_v)
        rho.append(rho_v)
        shared = np.ones(nv, dtype=bool) if tv == 0 else rng.random(nv) < rho_v
        topics = np.empty(nv, dtype=np.int64)
        n_shared = int(shared.sum())
        if n_shared:
            topics[shared] = rng.choice(hyper.n_topics, size=n_shared, p=theta)
        if nv - n_shared:
            topics[~shared] = rng.choice(tv, size=nv - n_shared, p=kappa_v)
        words = np.empty(nv, dtype=np.int64)
        for k in range(hyper.n_topics):
            pick = shared & (topics == k)
            cnt = int(pick.sum())
            if cnt:
                words[pick] = rng.choice(model.vocab.size(v), size=cnt, p=beta_bar[v][k])
        for t in range(tv):
            pick = (~shared) & (topics == t)
            cnt = int(pick.sum())
            if cnt:
                words[pick] = rng.choice(model.vocab.size(v), size=cnt, p=zeta_bar[v][t])
        tokens.append(words)
        assignments.append(
            np.stack([shared.astype(np.int64), topics], axis=1)
            if nv
            else np.zeros((0, 2), dtype=np.int64)
        )
    trace = LatentTrace(theta=theta, kappa=kappa, rho=rho, assignments=assignments)
    doc = Document(tokens=tokens, latent=trace)
    return doc, trace


def e_step(
    doc: Document,
    model: ModelParameters,
    hyper: Hyperparameters | None = None,
    max_iter: int = DOC_MAX_SWEEPS,
    tol: float = DOC_TOL,
    backend: str | None = None,
) -> DocumentPosterior:
    """Coordinate ascent on one document's local factors."""
    hyper = hyper or model.hyper
    _check_encodable(doc, model.vocab)
    if doc.total_length() == 0:
        raise DataError("document empty in all views")
    kern = get_backend(backend)
    elog_shared, elog_private = model.expected_log_tables()
    words, offsets = _pack_tokens(doc)
    tcounts = np.asarray(hyper.private_topics, dtype=np.int64)
    t_max = max(hyper.private_topics)
    gamma = np.zeros(hyper.n_topics)
    gammap = np.zeros((hyper.n_views, t_max))
    lam = np.zeros((hyper.n_views, 2))
    phi = np.zeros((words.size, hyper.n_topics + t_max))
    try:
        bound, sweeps = kern.estep_document(
            words, offsets, tcounts, elog_shared, elog_private,
            hyper.alpha_shared, hyper.alpha_private, hyper.iota[0], hyper.iota[1],
            max_iter, tol, True, gamma, gammap, lam, phi,
        )
    except ValueError as exc:
        raise NumericError(str(exc)) from exc
    return _unpack_posterior(hyper, offsets, gamma, gammap, lam, phi, bound, sweeps)


def _repack_posterior(hyper: Hyperparameters, doc: Document, post: DocumentPosterior) -> tuple:
    n_topics = hyper.n_topics
    t_max = max(hyper.private_topics)
    words, offsets = _pack_tokens(doc)
    if post.gamma.shape != (n_topics,):
        raise ValueError("posterior shared mixture has wrong shape")
    phi = np.zeros((words.size, n_topics + t_max))
    gammap = np.zeros((hyper.n_views, t_max))
    lam = np.zeros((hyper.n_views, 2))
    for v in range(hyper.n_views):
        tv = hyper.private_topics[v]
        lo, hi = int(offsets[v]), int(offsets[v + 1])
        if post.phi[v].shape != (hi - lo, n_topics + tv):
            raise ValueError(f"posterior view {v} assignment table has wrong shape")
        if post.gamma_private[v].shape != (tv,):
            raise ValueError(f"posterior view {v} private mixture has wrong shape")
        phi[lo:hi, : n_topics + tv] = post.phi[v]
        gammap[v, :tv] = post.gamma_private[v]
        if tv > 0:
            if post.lam[v] is None:
                raise ValueError(f"posterior view {v} is missing switch parameters")
            lam[v, 0], lam[v, 1] = post.lam[v]
        else:
            lam[v, 0], lam[v, 1] = hyper.iota
    return words, offsets, phi, gammap, lam


def _global_prior_term(model: ModelParameters) -> float:
    """Sum over topic rows of E[log p(row)] - E[log q(row)] (zero if clamped)."""
    if model.clamped:
        return 0.0
    total = 0.0
    for v in range(model.n_views):
        for tables, conc in (
            (model.topic_word[v], model.hyper.sigma_shared),
            (model.private_topic_word[v], model.hyper.sigma_private),
        ):
            if tables.size == 0:
                continue
            width = tables.shape[1]
            elog = digamma(tables) - digamma(tables.sum(axis=1))[:, None]
            prior = (
                gammaln(width * conc)
                - width * gammaln(conc)
                + (conc - 1.0) * elog.sum(axis=1)
            )
            q = (
                gammaln(tables.sum(axis=1))
                - gammaln(tables).sum(axis=1)
                + ((tables - 1.0) * elog).sum(axis=1)
            )
            total += float((prior - q).sum())
    return total


def elbo(
    corpus: Corpus,
    model: ModelParameters,
    posteriors,
    hyper: Hyperparameters | None = None,
    backend: str | None = None,
) -> float:
    """Full-batch evidence lower bound for the given local factors."""
    hyper = hyper or model.hyper
    if len(posteriors) != len(corpus.documents):
        raise ValueError("one posterior per document is required")
    kern = get_backend(backend)
    elog_shared, elog_private = model.expected_log_tables()
    tcounts = np.asarray(hyper.private_topics, dtype=np.int64)
    total = _global_prior_term(model)
    for doc, post in zip(corpus.documents, posteriors):
        _check_encodable(doc, model.vocab)
        words, offsets, phi, gammap, lam = _repack_posterior(hyper, doc, post)
        total += kern.document_elbo(
            words, offsets, tcounts, elog_shared, elog_private,
            hyper.alpha_shared, hyper.alpha_private, hyper.iota[0], hyper.iota[1],
            post.gamma, gammap, lam, phi,
        )
    return float(total)


def fit(
    corpus: Corpus,
    hyper: Hyperparameters,
    max_sweeps: int = FIT_MAX_SWEEPS,
    tol: float = FIT_TOL,
    seed: int = 0,
    doc_max_iter: int = DOC_MAX_SWEEPS,
    doc_tol: float = DOC_TOL,
    backend: str | None = None,
    callback=None,
    n_init: int = 1,
) -> tuple:
    """Full-batch variational EM.

    Alternates per-document coordinate ascent with the closed-form
    topic-word update until the bound's relative change drops below
    `tol` or `max_sweeps` is hit. Document factors are warm-started
    across sweeps, which makes the recorded bound history non-decreasing
    up to round-off. Returns (model, posteriors, elbo_history).

    With `n_init` > 1 the whole procedure restarts from that many
    seeds derived deterministically from `seed`, and the run with the
    best final bound wins; batch coordinate ascent can stall in optima
    where two true topics merge, and restart selection is the standard
    defense.
    """
    if n_init < 1:
        raise ValueError("n_init must be at least 1")
    if n_init > 1:
        root = np.random.SeedSequence().entropy if seed is None else int(seed)
        best = None
        for branch in range(n_init):
            derived = int(np.random.SeedSequence([root, branch]).generate_state(1)[0])
            result = fit(
                corpus, hyper, max_sweeps=max_sweeps, tol=tol, seed=derived,
                doc_max_iter=doc_max_iter, doc_tol=doc_tol, backend=backend,
                callback=callback,
            )
            if best is None or result[2][-1] > best[2][-1]:
                best = result
        return best
    if hyper.n_topics + max(hyper.private_topics) == 0:
        raise ValueError("model needs at least one topic somewhere")
    if corpus.n_views != hyper.n_views:
        raise ValueError("corpus and hyperparameters disagree on view count")
    docs = corpus.documents
    if not docs:
        raise DataError("corpus has no documents")
    for doc in docs:
        _check_encodable(doc, corpus.vocab)
        if doc.total_length() == 0:
            raise DataError("document empty in all views")
    kern = get_backend(backend)
    n_docs = len(docs)
    n_views = hyper.n_views
    n_topics = hyper.n_topics
    t_max = max(hyper.private_topics)
    tcounts = np.asarray(hyper.private_topics, dtype=np.int64)

    packed = [_pack_tokens(doc) for doc in docs]
    doc_starts = np.zeros(n_docs + 1, dtype=np.int64)
    for d, (words, _) in enumerate(packed):
        doc_starts[d + 1] = doc_starts[d] + words.size
    all_words = (
        np.concatenate([w for w, _ in packed])
        if doc_starts[-1]
        else np.zeros(0, dtype=np.int64)
    )
    gamma = np.zeros((n_docs, n_topics))
    gammap = np.zeros((n_docs, n_views, t_max))
    lam = np.zeros((n_docs, n_views, 2))
    phi = np.zeros((int(doc_starts[-1]), n_topics + t_max))
    doc_bounds = np.zeros(n_docs)
    doc_sweeps = np.zeros(n_docs, dtype=np.int64)

    # Constant per-view index arrays for the deterministic global update,
    # concatenated in document order.
    view_words = []
    view_rows = []
    for v in range(n_views):
        wlist = []
        rlist = []
        for d, (words, offsets) in enumerate(packed):
            lo, hi = int(offsets[v]), int(offsets[v + 1])
            wlist.append(words[lo:hi])
            rlist.append(np.arange(doc_starts[d] + lo, doc_starts[d] + hi, dtype=np.int64))
        view_words.append(np.concatenate(wlist) if wlist else np.zeros(0, dtype=np.int64))
        view_rows.append(np.concatenate(rlist) if rlist else np.zeros(0, dtype=np.int64))

    model = initial_model(corpus.vocab, hyper, seed)
    history = []
    for sweep in range(1, max_sweeps + 1):
        elog_shared, elog_private = model.expected_log_tables()
        for d, (words_d, offsets_d) in enumerate(packed):
            lo, hi = int(doc_starts[d]), int(doc_starts[d + 1])
            try:
                doc_bounds[d], doc_sweeps[d] = kern.estep_document(
                    all_words[lo:hi], offsets_d, tcounts, elog_shared, elog_private,
                    hyper.alpha_shared, hyper.alpha_private, hyper.iota[0], hyper.iota[1],
                    doc_max_iter, doc_tol, sweep == 1,
                    gamma[d], gammap[d], lam[d], phi[lo:hi],
                )
            except ValueError as exc:
                raise NumericError(f"document {d}: {exc}") from exc
        topic_word = []
        private_topic_word = []
        for v in range(n_views):
            acc = np.full((corpus.vocab.size(v), n_topics), hyper.sigma_shared)
            np.add.at(acc, view_words[v], phi[view_rows[v], :n_topics])
            topic_word.append(acc.T.copy())
            tv = hyper.private_topics[v]
            accp = np.full((corpus.vocab.size(v), tv), hyper.sigma_private)
            if tv:
                np.add.at(accp, view_words[v], phi[view_rows[v], n_topics : n_topics + tv])
            private_topic_word.append(accp.T.copy())
        model = ModelParameters(
            hyper=hyper,
            vocab=corpus.vocab,
            topic_word=topic_word,
            private_topic_word=private_topic_word,
            seed=seed,
        )
        elog_shared, elog_private = model.expected_log_tables()
        bound = _global_prior_term(model)
        for d, (_, offsets_d) in enumerate(packed):
            lo, hi = int(doc_starts[d]), int(doc_starts[d + 1])
            bound += kern.document_elbo(
                all_words[lo:hi], offsets_d, tcounts, elog_shared, elog_private,
                hyper.alpha_shared, hyper.alpha_private, hyper.iota[0], hyper.iota[1],
                gamma[d], gammap[d], lam[d], phi[lo:hi],
            )
        history.append(float(bound))
        if callback is not None:
            callback(sweep, float(bound))
        if sweep >= 2 and abs(history[-1] - history[-2]) < tol * abs(history[-2]):
            break

    posteriors = []
    for d, (_, offsets_d) in enumerate(packed):
        lo, hi = int(doc_starts[d]), int(doc_starts[d + 1])
        posteriors.append(
            _unpack_posterior(
                hyper, offsets_d, gamma[d], gammap[d], lam[d], phi[lo:hi],
                doc_bounds[d], int(doc_sweeps[d]),
            )
        )
    model.elbo_history = list(history)
    logger.info("fit finished after %d sweep(s), bound %.6f", len(history), history[-1])
    return model, posteriors, history
