"""Exact log-evidence for tiny model instances by collapsed enumeration.

Integrates the shared mixture, private mixtures, and switch probabilities
out in closed form for every joint topic-assignment vector, with the
topic-word rows held fixed. Only feasible for a handful of tokens; used
to certify that inference produces a true lower bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .corpus import Document
from .model import Hyperparameters

ENUMERATION_BUDGET = 100_000
MAX_TOPICS = 4
MAX_TOKENS = 6
_ROW_SUM_TOL = 1e-8


@dataclass
class TinyInstance:
    """A model and document small enough to enumerate exactly.

    `beta_bar[v]` rows are (K, V_v) word distributions for the shared
    topics, `zeta_bar[v]` rows (T_v, V_v) for the private ones.
    """

    hyper: Hyperparameters
    beta_bar: list
    zeta_bar: list
    document: Document

    def __post_init__(self):
        self.beta_bar = [np.asarray(m, dtype=np.float64) for m in self.beta_bar]
        self.zeta_bar = [np.asarray(m, dtype=np.float64) for m in self.zeta_bar]
        hyper = self.hyper
        if hyper.n_topics + max(hyper.private_topics) > MAX_TOPICS:
            raise ValueError(f"instance too large: K + max T must be <= {MAX_TOPICS}")
        if self.document.total_length() > MAX_TOKENS:
            raise ValueError(f"instance too large: at most {MAX_TOKENS} tokens")
        if len(self.beta_bar) != hyper.n_views or len(self.zeta_bar) != hyper.n_views:
            raise ValueError("one topic-word table per view is required")
        if self.document.n_views != hyper.n_views:
            raise ValueError("document and hyperparameters disagree on view count")
        combos = 1
        for v in range(hyper.n_views):
            beta = self.beta_bar[v]
            zeta = self.zeta_bar[v]
            tv = hyper.private_topics[v]
            if beta.ndim != 2 or beta.shape[0] != hyper.n_topics:
                raise ValueError(f"view {v} shared table has wrong shape")
            if zeta.shape[0] != tv or (tv > 0 and zeta.shape[1] != beta.shape[1]):
                raise ValueError(f"view {v} private table has wrong shape")
            for rows in (beta, zeta):
                if rows.size == 0:
                    continue
                if np.any(rows < 0.0):
                    raise ValueError("topic-word rows must be non-negative")
                if np.abs(rows.sum(axis=1) - 1.0).max() > _ROW_SUM_TOL:
                    raise ValueError("topic-word rows must sum to 1")
            words = self.document.tokens[v]
            if words.size and (words.min() < 0 or words.max() >= beta.shape[1]):
                raise ValueError(f"view {v} token index out of range")
            combos *= (hyper.n_topics + tv) ** int(words.size)
        if combos > ENUMERATION_BUDGET:
            raise ValueError(
                f"enumeration budget exceeded: {combos} > {ENUMERATION_BUDGET}"
            )


def _log_beta_ratio(i1: float, i2: float, s: int, p: int) -> float:
    """log B(i1+s, i2+p) - log B(i1, i2)."""
    return (
        math.lgamma(i1 + s)
        + math.lgamma(i2 + p)
        - math.lgamma(i1 + i2 + s + p)
        - math.lgamma(i1)
        - math.lgamma(i2)
        + math.lgamma(i1 + i2)
    )


def _log_dirichlet_multinomial(concentration: float, counts) -> float:
    """log of the Polya marginal for the given counts, symmetric prior."""
    dim = len(counts)
    total = int(sum(counts))
    out = math.lgamma(dim * concentration) - math.lgamma(dim * concentration + total)
    for c in counts:
        out += math.lgamma(concentration + int(c)) - math.lgamma(concentration)
    return out


def exact_log_evidence(instance: TinyInstance) -> float:
    """log p(words | topic-word rows, concentrations) by full enumeration.

    Sums, over every joint assignment of tokens to shared or private
    topics, the closed-form weight of the switch counts (Beta-Binomial),
    the pooled shared-topic counts and per-view private counts (Polya),
    and the token emission probabilities.
    """
    hyper = instance.hyper
    n_topics = hyper.n_topics
    per_view = []
    for v in range(hyper.n_views):
        tv = hyper.private_topics[v]
        words = instance.document.tokens[v]
        beta = instance.beta_bar[v]
        zeta = instance.zeta_bar[v]
        entries = []
        for assign in itertools.product(range(n_topics + tv), repeat=int(words.size)):
            shared_counts = [0] * n_topics
            private_counts = [0] * tv
            log_weight = 0.0
            dead = False
            for w, a in zip(words, assign):
                prob = beta[a, w] if a < n_topics else zeta[a - n_topics, w]
                if prob <= 0.0:
                    dead = True
                    break
                log_weight += math.log(prob)
                if a < n_topics:
                    shared_counts[a] += 1
                else:
                    private_counts[a - n_topics] += 1
            if dead:
                continue
            if tv > 0:
                n_shared = sum(shared_counts)
                n_private = sum(private_counts)
                log_weight += _log_beta_ratio(
                    hyper.iota[0], hyper.iota[1], n_shared, n_private
                )
                log_weight += _log_dirichlet_multinomial(
                    hyper.alpha_private, private_counts
                )
            entries.append((tuple(shared_counts), log_weight))
        per_view.append(entries)
    terms = []
    for combo in itertools.product(*per_view):
        pooled = [0] * n_topics
        log_weight = 0.0
        for shared_counts, w in combo:
            log_weight += w
            for k in range(n_topics):
                pooled[k] += shared_counts[k]
        log_weight += _log_dirichlet_multinomial(hyper.alpha_shared, pooled)
        terms.append(log_weight)
    if not terms:
        return float("-inf")
    return float(logsumexp(terms))
