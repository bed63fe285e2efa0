"""Command-line entry point: generate, train, predict, eval, serve.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from .corpus import load_corpus, save_corpus
from .drawing import DEFAULT_BANDWIDTH, DEFAULT_CODEBOOK_SIZE, Codebook, fit_codebook, load_drawing
from .errors import DataError, NumericError
from .evaluate import EvalConfig, run_protocol
from .model import FIT_MAX_SWEEPS, FIT_TOL, Hyperparameters, ModelParameters, fit
from .predict import MAX_LABELS, predict
from .synth import PlantedSpec, generate_corpus, load_spec, plant_model

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_tuple(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _float_pair(text: str) -> tuple:
    parts = [p for p in text.split(",") if p.strip() != ""]
    if len(parts) != 2:
        raise UsageError(f"expected two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise UsageError(f"expected two comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ibtm", description="Shared/private multi-view topic model pipeline.")
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("generate", help="sample a synthetic corpus with known structure")
    p.add_argument("--spec", help="JSON file naming planted-structure fields (default: built-in spec)")
    p.add_argument("--out", required=True, help="corpus output path (JSON lines)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model-out", help="planted model output path (default: OUT.model.json)")

    p = sub.add_parser("train", help="fit the model and the location codebook")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="model output path (JSON)")
    p.add_argument("--codebook-out", help="codebook output path (default: OUT.codebook.json)")
    p.add_argument("--elbo-log", help="bound-per-sweep log path (default: OUT.elbo.log)")
    p.add_argument("--k", type=int, default=10, help="shared topic count (default: 10)")
    p.add_argument(
        "--private-topics", default="5",
        help="per-view private topic counts, one int or comma list (default: 5)",
    )
    p.add_argument("--alpha-shared", type=float, default=0.6)
    p.add_argument("--alpha-private", type=float, default=0.6)
    p.add_argument("--sigma-shared", type=float, default=0.6)
    p.add_argument("--sigma-private", type=float, default=0.6)
    p.add_argument("--iota", default="5,5", help="switch prior pair (default: 5,5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=1,
                   help="independent fits from seeds derived off --seed; best bound wins")
    p.add_argument("--max-sweeps", type=int, default=FIT_MAX_SWEEPS)
    p.add_argument("--tol", type=float, default=FIT_TOL)
    p.add_argument("--codebook-size", type=int, default=DEFAULT_CODEBOOK_SIZE)
    p.add_argument("--backend", choices=["numpy", "numba", "auto"], default=None,
                   help="kernel backend (default: IBTM_BACKEND or auto)")
    p.add_argument("--workers", type=int, default=1,
                   help="reserved for parallel updates; any value gives identical results")

    p = sub.add_parser("predict", help="rank labels for a drawing")
    p.add_argument("--model", required=True)
    p.add_argument("--codebook", required=True)
    p.add_argument("--drawing", required=True, help="JSON array of painted points")
    p.add_argument("--bandwidth", type=float, default=DEFAULT_BANDWIDTH)
    p.add_argument("--max-labels", type=int, default=MAX_LABELS)

    p = sub.add_parser("eval", help="run the split/seed evaluation protocol")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--splits", type=int, default=10)
    p.add_argument("--split-fraction", type=float, default=0.5)
    p.add_argument("--seeds", type=int, default=10, help="fitting seeds per cell (default: 10)")
    p.add_argument("--k-grid", default="10,15,20,30,50")
    p.add_argument("--private-topics", type=int, default=5)
    p.add_argument("--alpha-shared", type=float, default=0.6)
    p.add_argument("--alpha-private", type=float, default=0.6)
    p.add_argument("--sigma-shared", type=float, default=0.6)
    p.add_argument("--sigma-private", type=float, default=0.6)
    p.add_argument("--iota", default="5,5")
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--micro", action="store_true", help="micro-average F instead of per-document")
    p.add_argument("--bandwidth", type=float, default=DEFAULT_BANDWIDTH)
    p.add_argument("--codebook-size", type=int, default=DEFAULT_CODEBOOK_SIZE)
    p.add_argument("--max-labels", type=int, default=MAX_LABELS)
    p.add_argument("--max-sweeps", type=int, default=FIT_MAX_SWEEPS)
    p.add_argument("--tol", type=float, default=FIT_TOL)
    p.add_argument("--backend", choices=["numpy", "numba", "auto"], default=None)
    p.add_argument("--workers", type=int, default=1,
                   help="reserved for parallel cells; any value gives identical results")

    p = sub.add_parser("serve", help="run the HTTP prediction service")
    p.add_argument("--model", required=True)
    p.add_argument("--codebook", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static-dir", help="built UI bundle to serve under /")
    p.add_argument("--bandwidth", type=float, default=DEFAULT_BANDWIDTH)
    p.add_argument("--max-labels", type=int, default=MAX_LABELS)
    return parser


def cmd_generate(args) -> int:
    spec = load_spec(args.spec) if args.spec else PlantedSpec()
    rng = np.random.default_rng(args.seed)
    corpus = generate_corpus(spec, rng, seed=args.seed)
    save_corpus(corpus, args.out)
    model_out = args.model_out or f"{args.out}.model.json"
    plant_model(spec).save(model_out)
    print(
        f"wrote {len(corpus)} documents to {args.out} "
        f"(vocab sizes {corpus.vocab.sizes()}), planted model to {model_out}"
    )
    return EXIT_OK


def _parse_private_topics(text: str, n_views: int) -> tuple:
    values = _int_tuple(text)
    if len(values) == 1:
        return values * n_views
    if len(values) != n_views:
        raise UsageError(
            f"--private-topics needs 1 or {n_views} values, got {len(values)}"
        )
    return values


def cmd_train(args) -> int:
    if args.restarts < 1:
        raise UsageError("--restarts must be at least 1")
    corpus = load_corpus(args.corpus)
    hyper = Hyperparameters(
        n_topics=args.k,
        private_topics=_parse_private_topics(args.private_topics, corpus.n_views),
        alpha_shared=args.alpha_shared,
        alpha_private=args.alpha_private,
        sigma_shared=args.sigma_shared,
        sigma_private=args.sigma_private,
        iota=_float_pair(args.iota),
    )
    callback = None
    if args.verbose:
        callback = lambda sweep, bound: print(f"sweep {sweep}: bound {bound:.6f}", file=sys.stderr)
    model, _, history = fit(
        corpus, hyper,
        max_sweeps=args.max_sweeps, tol=args.tol, seed=args.seed,
        backend=args.backend, callback=callback, n_init=args.restarts,
    )
    model.save(args.out)
    elbo_log = args.elbo_log or f"{args.out}.elbo.log"
    with open(elbo_log, "w", encoding="utf-8") as fh:
        for value in history:
            fh.write(f"{value!r}\n")
    codebook_out = args.codebook_out or f"{args.out}.codebook.json"
    points = []
    missing = 0
    for doc in corpus.documents:
        if doc.drawing is None or not doc.drawing.points:
            missing += 1
        else:
            points.extend(doc.drawing.points)
    if missing:
        logger.warning("%d document(s) lack drawings; codebook not written", missing)
        codebook_out = None
    else:
        fit_codebook(points, k=args.codebook_size, seed=args.seed).save(codebook_out)
    print(
        f"fit finished after {len(history)} sweep(s), final bound {history[-1]:.6f}; "
        f"model -> {args.out}" + (f", codebook -> {codebook_out}" if codebook_out else "")
    )
    return EXIT_OK


def cmd_predict(args) -> int:
    model = ModelParameters.load(args.model)
    codebook = Codebook.load(args.codebook)
    drawing = load_drawing(args.drawing)
    result = predict(
        drawing, model, codebook,
        bandwidth=args.bandwidth, max_labels=args.max_labels,
    )
    print(json.dumps(result.to_record(), indent=2))
    return EXIT_OK


def cmd_eval(args) -> int:
    corpus = load_corpus(args.corpus)
    config = EvalConfig(
        n_splits=args.splits,
        split_fraction=args.split_fraction,
        n_seeds=args.seeds,
        k_grid=_int_tuple(args.k_grid),
        private_topics=args.private_topics,
        alpha_shared=args.alpha_shared,
        alpha_private=args.alpha_private,
        sigma_shared=args.sigma_shared,
        sigma_private=args.sigma_private,
        iota=_float_pair(args.iota),
        max_labels=args.max_labels,
        bandwidth=args.bandwidth,
        codebook_size=args.codebook_size,
        master_seed=args.master_seed,
        micro=args.micro,
        max_sweeps=args.max_sweeps,
        tol=args.tol,
        backend=args.backend,
    )
    report = run_protocol(corpus, config)
    os.makedirs(args.out_dir, exist_ok=True)
    tsv_path = os.path.join(args.out_dir, "report.tsv")
    json_path = os.path.join(args.out_dir, "report.json")
    with open(tsv_path, "w", encoding="utf-8") as fh:
        fh.write(report.to_tsv())
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    sys.stdout.write(report.to_tsv())
    print(f"report -> {tsv_path}, {json_path}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    model = ModelParameters.load(args.model)
    codebook = Codebook.load(args.codebook)
    app = create_app(
        model, codebook,
        bandwidth=args.bandwidth, max_labels=args.max_labels,
        static_dir=args.static_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "train": cmd_train,
    "predict": cmd_predict,
    "eval": cmd_eval,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required (see --help)")
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be at least 1")
        logging.basicConfig(
            level=logging.INFO if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
