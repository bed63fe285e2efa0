"""Numba-jitted kernels for the per-document variational updates.

Loop-for-loop mirror of np_kernels (same packed layout, same math); the
backend equivalence tests pin the two together. The digamma body is kept
in sync with ibtm.special so both backends see identical expectations.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

NAME = "numba"


@njit(cache=True)
def _digamma(x):
    # Same algorithm as ibtm.special._digamma_scalar; keep in sync.
    acc = 0.0
    while x < 8.0:
        acc -= 1.0 / x
        x += 1.0
    z = 1.0 / (x * x)
    series = z * (
        1.0 / 12.0
        - z * (
            1.0 / 120.0
            - z * (
                1.0 / 252.0
                - z * (
                    1.0 / 240.0
                    - z * (1.0 / 132.0 - z * (691.0 / 32760.0 - z * (1.0 / 12.0)))
                )
            )
        )
    )
    return acc + math.log(x) - 0.5 / x - series


@njit(cache=True)
def _document_elbo_impl(
    words, offsets, tcounts, elog_beta, elog_zeta,
    alpha_s, alpha_p, iota1, iota2, gamma, gammap, lam, phi,
):
    n_views = offsets.shape[0] - 1
    n_topics = gamma.shape[0]
    gsum = 0.0
    for k in range(n_topics):
        gsum += gamma[k]
    dg_gsum = _digamma(gsum)
    elogtheta = np.empty(n_topics)
    for k in range(n_topics):
        elogtheta[k] = _digamma(gamma[k]) - dg_gsum
    bound = math.lgamma(n_topics * alpha_s) - n_topics * math.lgamma(alpha_s)
    for k in range(n_topics):
        bound += (alpha_s - 1.0) * elogtheta[k]
    bound -= math.lgamma(gsum)
    for k in range(n_topics):
        bound += math.lgamma(gamma[k]) - (gamma[k] - 1.0) * elogtheta[k]
    for v in range(n_views):
        lo = offsets[v]
        hi = offsets[v + 1]
        tv = tcounts[v]
        elogrho = 0.0
        elog1mrho = 0.0
        elogkappa = np.empty(max(tv, 1))
        if tv > 0:
            gpsum = 0.0
            for t in range(tv):
                gpsum += gammap[v, t]
            dg_gpsum = _digamma(gpsum)
            for t in range(tv):
                elogkappa[t] = _digamma(gammap[v, t]) - dg_gpsum
            bound += math.lgamma(tv * alpha_p) - tv * math.lgamma(alpha_p)
            for t in range(tv):
                bound += (alpha_p - 1.0) * elogkappa[t]
            bound -= math.lgamma(gpsum)
            for t in range(tv):
                bound += math.lgamma(gammap[v, t]) - (gammap[v, t] - 1.0) * elogkappa[t]
            lam0 = lam[v, 0]
            lam1 = lam[v, 1]
            dg_lt = _digamma(lam0 + lam1)
            elogrho = _digamma(lam0) - dg_lt
            elog1mrho = _digamma(lam1) - dg_lt
            bound += (
                math.lgamma(iota1 + iota2)
                - math.lgamma(iota1)
                - math.lgamma(iota2)
                + (iota1 - 1.0) * elogrho
                + (iota2 - 1.0) * elog1mrho
            )
            bound -= (
                math.lgamma(lam0 + lam1)
                - math.lgamma(lam0)
                - math.lgamma(lam1)
                + (lam0 - 1.0) * elogrho
                + (lam1 - 1.0) * elog1mrho
            )
        for n in range(lo, hi):
            w = words[n]
            for k in range(n_topics):
                p = phi[n, k]
                if p > 0.0:
                    bound += p * (elogrho + elogtheta[k] + elog_beta[v, k, w])
                    bound -= p * math.log(p)
            for t in range(tv):
                p = phi[n, n_topics + t]
                if p > 0.0:
                    bound += p * (elog1mrho + elogkappa[t] + elog_zeta[v, t, w])
                    bound -= p * math.log(p)
    return bound


@njit(cache=True)
def _estep_document_impl(
    words, offsets, tcounts, elog_beta, elog_zeta,
    alpha_s, alpha_p, iota1, iota2,
    max_iter, tol, init, gamma, gammap, lam, phi,
):
    n_views = offsets.shape[0] - 1
    n_topics = elog_beta.shape[1]
    n_total = words.shape[0]
    t_max = gammap.shape[1]
    if init:
        start = alpha_s + n_total / n_topics
        for k in range(n_topics):
            gamma[k] = start
        for v in range(n_views):
            tv = tcounts[v]
            nv = offsets[v + 1] - offsets[v]
            for t in range(t_max):
                gammap[v, t] = 0.0
            if tv > 0:
                for t in range(tv):
                    gammap[v, t] = alpha_p + nv / tv
            lam[v, 0] = iota1
            lam[v, 1] = iota2
            u = 1.0 / (n_topics + tv)
            for n in range(offsets[v], offsets[v + 1]):
                for c in range(n_topics + t_max):
                    phi[n, c] = 0.0
                for c in range(n_topics + tv):
                    phi[n, c] = u
    prev = -np.inf
    bound = -np.inf
    sweeps = 0
    elogtheta = np.empty(n_topics)
    elogkappa = np.empty(max(t_max, 1))
    scores = np.empty(n_topics + t_max)
    for sweeps in range(1, max_iter + 1):
        gsum = 0.0
        for k in range(n_topics):
            gsum += gamma[k]
        dg_gsum = _digamma(gsum)
        for k in range(n_topics):
            elogtheta[k] = _digamma(gamma[k]) - dg_gsum
        for v in range(n_views):
            lo = offsets[v]
            hi = offsets[v + 1]
            if hi == lo:
                continue
            tv = tcounts[v]
            elogrho = 0.0
            elog1mrho = 0.0
            if tv > 0:
                gpsum = 0.0
                for t in range(tv):
                    gpsum += gammap[v, t]
                dg_gpsum = _digamma(gpsum)
                for t in range(tv):
                    elogkappa[t] = _digamma(gammap[v, t]) - dg_gpsum
                dg_lt = _digamma(lam[v, 0] + lam[v, 1])
                elogrho = _digamma(lam[v, 0]) - dg_lt
                elog1mrho = _digamma(lam[v, 1]) - dg_lt
            for n in range(lo, hi):
                w = words[n]
                for k in range(n_topics):
                    scores[k] = elogrho + elogtheta[k] + elog_beta[v, k, w]
                for t in range(tv):
                    scores[n_topics + t] = elog1mrho + elogkappa[t] + elog_zeta[v, t, w]
                width = n_topics + tv
                peak = scores[0]
                for c in range(1, width):
                    if scores[c] > peak:
                        peak = scores[c]
                if not np.isfinite(peak):
                    raise ValueError("token has zero probability under every topic")
                total = 0.0
                for c in range(width):
                    val = math.exp(scores[c] - peak)
                    phi[n, c] = val
                    total += val
                for c in range(width):
                    phi[n, c] /= total
        for k in range(n_topics):
            acc = 0.0
            for n in range(n_total):
                acc += phi[n, k]
            gamma[k] = alpha_s + acc
        for v in range(n_views):
            tv = tcounts[v]
            if tv == 0:
                continue
            lo = offsets[v]
            hi = offsets[v + 1]
            shared_mass = 0.0
            private_total = 0.0
            for t in range(tv):
                acc = 0.0
                for n in range(lo, hi):
                    acc += phi[n, n_topics + t]
                gammap[v, t] = alpha_p + acc
                private_total += acc
            for n in range(lo, hi):
                for k in range(n_topics):
                    shared_mass += phi[n, k]
            lam[v, 0] = iota1 + shared_mass
            lam[v, 1] = iota2 + private_total
        bound = _document_elbo_impl(
            words, offsets, tcounts, elog_beta, elog_zeta,
            alpha_s, alpha_p, iota1, iota2, gamma, gammap, lam, phi,
        )
        if np.isfinite(prev) and abs(bound - prev) < tol * abs(prev):
            break
        prev = bound
    return bound, sweeps


def estep_document(
    words, offsets, tcounts, elog_beta, elog_zeta,
    alpha_s, alpha_p, iota1, iota2,
    max_iter, tol, init, gamma, gammap, lam, phi,
):
    if words.shape[0] == 0:
        raise ValueError("document empty in all views")
    bound, sweeps = _estep_document_impl(
        words, offsets, tcounts, elog_beta, elog_zeta,
        float(alpha_s), float(alpha_p), float(iota1), float(iota2),
        int(max_iter), float(tol), bool(init), gamma, gammap, lam, phi,
    )
    return float(bound), int(sweeps)


def document_elbo(
    words, offsets, tcounts, elog_beta, elog_zeta,
    alpha_s, alpha_p, iota1, iota2, gamma, gammap, lam, phi,
):
    return float(
        _document_elbo_impl(
            words, offsets, tcounts, elog_beta, elog_zeta,
            float(alpha_s), float(alpha_p), float(iota1), float(iota2),
            gamma, gammap, lam, phi,
        )
    )


def digamma(x: float) -> float:
    return float(_digamma(float(x)))
