"""Shared fixtures and small builders used across the test suite."""
import numpy as np
import pytest
from hypothesis import settings

from ibtm.corpus import Corpus, Document, VocabularySet
from ibtm.model import Hyperparameters, fit

# The numba kernels JIT-compile on first use, which can blow any
# per-example deadline; wall-clock limits add nothing here anyway.
settings.register_profile("ibtm", deadline=None)
settings.load_profile("ibtm")


def make_vocab(sizes) -> VocabularySet:
    """Synthetic vocabulary with distinct words per view."""
    return VocabularySet(
        [[f"v{v}w{i:03d}" for i in range(n)] for v, n in enumerate(sizes)]
    )


def random_document(rng, sizes, lengths) -> Document:
    return Document(
        tokens=[
            rng.integers(0, size, size=length) if size else np.empty(0, dtype=np.int64)
            for size, length in zip(sizes, lengths)
        ]
    )


def random_corpus(rng, sizes, n_docs, mean_length=12) -> Corpus:
    docs = []
    for _ in range(n_docs):
        lengths = [max(1, int(rng.poisson(mean_length))) for _ in sizes]
        docs.append(random_document(rng, sizes, lengths))
    return Corpus(documents=docs, vocab=make_vocab(sizes))


@pytest.fixture(scope="session")
def small_fit():
    """A deterministic three-view fit shared by read-only tests."""
    rng = np.random.default_rng(99)
    corpus = random_corpus(rng, (12, 9, 7), n_docs=8, mean_length=10)
    hyper = Hyperparameters(n_topics=3, private_topics=(1, 1, 1))
    model, posteriors, history = fit(corpus, hyper, seed=5)
    return corpus, hyper, model, posteriors, history
