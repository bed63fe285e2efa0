"""Multi-view topic modeling of discomfort drawings and diagnostic labels.

A three-view shared/private topic model with variational inference,
drawing featurization (location codebook plus mean-shift region counts),
diagnostic label prediction, and an evaluation protocol on synthetic
corpora with known ground truth.
"""

from .corpus import (
    DRAWING_VIEW,
    VIEW_NAMES,
    Corpus,
    Document,
    LatentTrace,
    VocabularySet,
    build_vocabulary,
    load_corpus,
    normalize_labels,
    save_corpus,
)
from .drawing import (
    DEFAULT_BANDWIDTH,
    DEFAULT_CODEBOOK_SIZE,
    SIDE_OFFSET,
    Codebook,
    Drawing,
    DrawingPoint,
    count_regions,
    embed,
    embed_points,
    encode_drawing,
    fit_codebook,
    load_drawing,
    save_drawing,
)
from .errors import CorpusFormatError, DataError, NumericError
from .evaluate import EvalConfig, EvalReport, f_measure, frequency_baseline, run_protocol
from .model import (
    DocumentPosterior,
    Hyperparameters,
    ModelParameters,
    e_step,
    elbo,
    fit,
    sample_document,
)
from .oracle import TinyInstance, exact_log_evidence
from .predict import (
    MAX_LABELS,
    PredictionResult,
    infer_from_drawing,
    predict,
    score_labels,
)
from .special import digamma, expected_log_dirichlet
from .synth import PlantedSpec, generate_corpus, plant_model

__version__ = "0.1.0"

__all__ = [
    "DRAWING_VIEW",
    "VIEW_NAMES",
    "Corpus",
    "Document",
    "LatentTrace",
    "VocabularySet",
    "build_vocabulary",
    "load_corpus",
    "normalize_labels",
    "save_corpus",
    "DEFAULT_BANDWIDTH",
    "DEFAULT_CODEBOOK_SIZE",
    "SIDE_OFFSET",
    "Codebook",
    "Drawing",
    "DrawingPoint",
    "count_regions",
    "embed",
    "embed_points",
    "encode_drawing",
    "fit_codebook",
    "load_drawing",
    "save_drawing",
    "CorpusFormatError",
    "DataError",
    "NumericError",
    "EvalConfig",
    "EvalReport",
    "f_measure",
    "frequency_baseline",
    "run_protocol",
    "DocumentPosterior",
    "Hyperparameters",
    "ModelParameters",
    "e_step",
    "elbo",
    "fit",
    "sample_document",
    "TinyInstance",
    "exact_log_evidence",
    "MAX_LABELS",
    "PredictionResult",
    "infer_from_drawing",
    "predict",
    "score_labels",
    "digamma",
    "expected_log_dirichlet",
    "PlantedSpec",
    "generate_corpus",
    "plant_model",
    "__version__",
]
