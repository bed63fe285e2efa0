"""Pure-numpy kernels for the per-document variational updates.

Reference implementation of the packed-document e-step; the numba
backend mirrors it loop-for-loop. All token scores are formed in log
space with max-subtraction before exponentiation.

Packed layout: a document's tokens are concatenated across views into
`words` with `offsets[v]:offsets[v+1]` delimiting view v. `phi` has
K + Tmax columns; for view v only the first K + tcounts[v] are live and
the padding stays zero. `gammap` rows are padded the same way.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

from ..special import digamma

NAME = "numpy"


def _view_rho_terms(lam_v):
    total = digamma(lam_v[0] + lam_v[1])
    return digamma(lam_v[0]) - total, digamma(lam_v[1]) - total


def estep_document(
    words,
    offsets,
    tcounts,
    elog_beta,
    elog_zeta,
    alpha_s,
    alpha_p,
    iota1,
    iota2,
    max_iter,
    tol,
    init,
    gamma,
    gammap,
    lam,
    phi,
):
    """Coordinate ascent on one document's local factors.

    Mutates gamma/gammap/lam/phi in place; when `init` is true they are
    first reset to the symmetric starting point. Stops when the relative
    change of the document's bound contribution drops below `tol` or
    after `max_iter` sweeps. Returns (bound, sweeps_run).
    """
    n_views = offsets.shape[0] - 1
    n_topics = elog_beta.shape[1]
    n_total = words.shape[0]
    if n_total == 0:
        raise ValueError("document empty in all views")
    if init:
        gamma[:] = alpha_s + n_total / n_topics
        gammap[:, :] = 0.0
        phi[:, :] = 0.0
        for v in range(n_views):
            tv = int(tcounts[v])
            nv = int(offsets[v + 1] - offsets[v])
            if tv > 0:
                gammap[v, :tv] = alpha_p + nv / tv
            lam[v, 0] = iota1
            lam[v, 1] = iota2
            phi[offsets[v] : offsets[v + 1], : n_topics + tv] = 1.0 / (n_topics + tv)
    prev = -np.inf
    bound = -np.inf
    sweeps = 0
    for sweeps in range(1, max_iter + 1):
        elogtheta = digamma(gamma) - digamma(gamma.sum())
        for v in range(n_views):
            lo, hi = int(offsets[v]), int(offsets[v + 1])
            if hi == lo:
                continue
            tv = int(tcounts[v])
            w = words[lo:hi]
            scores = np.empty((hi - lo, n_topics + tv))
            scores[:, :n_topics] = elogtheta[None, :] + elog_beta[v][:, w].T
            if tv > 0:
                gp = gammap[v, :tv]
                elogkappa = digamma(gp) - digamma(gp.sum())
                elogrho, elog1mrho = _view_rho_terms(lam[v])
                scores[:, :n_topics] += elogrho
                scores[:, n_topics:] = elog1mrho + elogkappa[None, :] + elog_zeta[v][:tv, w].T
            peak = scores.max(axis=1)
            if not np.all(np.isfinite(peak)):
                raise ValueError("token has zero probability under every topic")
            block = np.exp(scores - peak[:, None])
            block /= block.sum(axis=1, keepdims=True)
            phi[lo:hi, : n_topics + tv] = block
        gamma[:] = alpha_s + phi[:, :n_topics].sum(axis=0)
        for v in range(n_views):
            tv = int(tcounts[v])
            if tv == 0:
                continue
            lo, hi = int(offsets[v]), int(offsets[v + 1])
            block = phi[lo:hi]
            shared_mass = block[:, :n_topics].sum()
            private_mass = block[:, n_topics : n_topics + tv].sum(axis=0)
            gammap[v, :tv] = alpha_p + private_mass
            lam[v, 0] = iota1 + shared_mass
            lam[v, 1] = iota2 + private_mass.sum()
        bound = document_elbo(
            words, offsets, tcounts, elog_beta, elog_zeta,
            alpha_s, alpha_p, iota1, iota2, gamma, gammap, lam, phi,
        )
        if np.isfinite(prev) and abs(bound - prev) < tol * abs(prev):
            break
        prev = bound
    return bound, sweeps


def document_elbo(
    words,
    offsets,
    tcounts,
    elog_beta,
    elog_zeta,
    alpha_s,
    alpha_p,
    iota1,
    iota2,
    gamma,
    gammap,
    lam,
    phi,
):
    """One document's contribution to the evidence lower bound.

    Covers the theta/kappa/rho prior-vs-posterior terms, the expected
    token log-joint, and the assignment entropy; global topic-word terms
    live in the model layer.
    """
    n_views = offsets.shape[0] - 1
    n_topics = gamma.shape[0]
    elogtheta = digamma(gamma) - digamma(gamma.sum())
    bound = (
        gammaln(n_topics * alpha_s)
        - n_topics * gammaln(alpha_s)
        + ((alpha_s - 1.0) * elogtheta).sum()
    )
    bound -= (
        gammaln(gamma.sum())
        - gammaln(gamma).sum()
        + ((gamma - 1.0) * elogtheta).sum()
    )
    for v in range(n_views):
        lo, hi = int(offsets[v]), int(offsets[v + 1])
        tv = int(tcounts[v])
        elogrho = 0.0
        elog1mrho = 0.0
        if tv > 0:
            gp = gammap[v, :tv]
            elogkappa = digamma(gp) - digamma(gp.sum())
            bound += (
                gammaln(tv * alpha_p)
                - tv * gammaln(alpha_p)
                + ((alpha_p - 1.0) * elogkappa).sum()
            )
            bound -= (
                gammaln(gp.sum())
                - gammaln(gp).sum()
                + ((gp - 1.0) * elogkappa).sum()
            )
            elogrho, elog1mrho = _view_rho_terms(lam[v])
            bound += (
                gammaln(iota1 + iota2)
                - gammaln(iota1)
                - gammaln(iota2)
                + (iota1 - 1.0) * elogrho
                + (iota2 - 1.0) * elog1mrho
            )
            bound -= (
                gammaln(lam[v, 0] + lam[v, 1])
                - gammaln(lam[v, 0])
                - gammaln(lam[v, 1])
                + (lam[v, 0] - 1.0) * elogrho
                + (lam[v, 1] - 1.0) * elog1mrho
            )
        if hi == lo:
            continue
        w = words[lo:hi]
        block = phi[lo:hi, : n_topics + tv]
        scores = np.empty_like(block)
        scores[:, :n_topics] = elogtheta[None, :] + elog_beta[v][:, w].T
        if tv > 0:
            scores[:, :n_topics] += elogrho
            scores[:, n_topics:] = elog1mrho + elogkappa[None, :] + elog_zeta[v][:tv, w].T
        positive = block > 0.0
        with np.errstate(invalid="ignore", divide="ignore"):
            bound += np.where(positive, block * scores, 0.0).sum()
            bound -= np.where(positive, block * np.log(np.where(positive, block, 1.0)), 0.0).sum()
    return float(bound)
