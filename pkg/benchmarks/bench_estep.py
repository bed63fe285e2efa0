"""Benchmark the per-document e-step kernel: numba vs plain numpy.

Runs the same full-corpus sweep workload through both backends and
reports wall time per sweep plus the speedup. The first numba call
pays JIT compilation, so one warmup sweep runs before timing.

Usage:
    python benchmarks/bench_estep.py [--docs 200] [--k 20] [--repeats 5]
"""
import argparse
import time

import numpy as np

from ibtm.backends import get_backend
from ibtm.model import Hyperparameters, _pack_tokens, initial_model
from ibtm.synth import PlantedSpec, generate_corpus


def build_workload(n_docs, n_topics, seed):
    spec = PlantedSpec(
        n_topics=min(n_topics, 8),
        private_topics=(2, 2, 2),
        vocab_sizes=(200, 200, 200),
        n_documents=n_docs,
        doc_length_means=(60.0, 60.0, 60.0),
        drawing_points_mean=5.0,
    )
    corpus = generate_corpus(spec, np.random.default_rng(seed))
    hyper = Hyperparameters(n_topics=n_topics, private_topics=(2, 2, 2))
    model = initial_model(corpus.vocab, hyper, seed)
    elog_shared, elog_private = model.expected_log_tables()
    packed = [_pack_tokens(doc) for doc in corpus.documents]
    return hyper, packed, elog_shared, elog_private


def run_sweep(kern, hyper, packed, elog_shared, elog_private, max_iter, tol):
    tcounts = np.asarray(hyper.private_topics, dtype=np.int64)
    t_max = max(hyper.private_topics)
    total = 0.0
    for words, offsets in packed:
        gamma = np.zeros(hyper.n_topics)
        gammap = np.zeros((hyper.n_views, t_max))
        lam = np.zeros((hyper.n_views, 2))
        phi = np.zeros((words.size, hyper.n_topics + t_max))
        bound, _ = kern.estep_document(
            words, offsets, tcounts, elog_shared, elog_private,
            hyper.alpha_shared, hyper.alpha_private, hyper.iota[0], hyper.iota[1],
            max_iter, tol, True, gamma, gammap, lam, phi,
        )
        total += bound
    return total


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--docs", type=int, default=200)
    parser.add_argument("--k", type=int, default=20, help="shared topic count")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--max-iter", type=int, default=100)
    parser.add_argument("--tol", type=float, default=1e-6)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    hyper, packed, elog_shared, elog_private = build_workload(
        args.docs, args.k, args.seed
    )
    n_tokens = sum(words.size for words, _ in packed)
    print(
        f"workload: {args.docs} docs, {n_tokens} tokens, "
        f"K={args.k}, T={hyper.private_topics}, "
        f"doc iters<={args.max_iter} @ tol={args.tol:g}"
    )

    results = {}
    for name in ("numpy", "numba"):
        kern = get_backend(name)
        # warmup: triggers JIT for numba, touches caches for numpy
        run_sweep(kern, hyper, packed, elog_shared, elog_private, args.max_iter, args.tol)
        times = []
        check = None
        for _ in range(args.repeats):
            start = time.perf_counter()
            total = run_sweep(
                kern, hyper, packed, elog_shared, elog_private, args.max_iter, args.tol
            )
            times.append(time.perf_counter() - start)
            check = total
        best = min(times)
        results[name] = best
        print(f"{name:>6}: best of {args.repeats} sweeps {best * 1e3:9.2f} ms   "
              f"(sum of bounds {check:.6f})")

    speedup = results["numpy"] / results["numba"]
    print(f"numba speedup over numpy: {speedup:.2f}x")


if __name__ == "__main__":
    main()
