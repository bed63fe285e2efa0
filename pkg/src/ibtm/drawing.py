"""Discomfort-drawing featurization.

Painted body points live on a front or back silhouette in normalized
[0,1]^2 coordinates (y grows downward). Both sides are embedded into one
2-D plane by shifting back-side points right by SIDE_OFFSET, which keeps
every cross-side distance larger than any within-side distance, so a
single codebook and a single mean-shift run cover both sides.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

logger = logging.getLogger(__name__)

SIDES = ("front", "back")

# Within one unit square the largest distance is sqrt(2) ~ 1.414; with an
# offset of 3.0 the closest front/back pair is 2.0 apart, so the two
# sides can never share a cluster or a mode.
SIDE_OFFSET = 3.0

DEFAULT_CODEBOOK_SIZE = 256
DEFAULT_BANDWIDTH = 0.08

_KMEANS_MAX_ITER = 100
_MEANSHIFT_MAX_ITER = 300
_MEANSHIFT_SHIFT_TOL = 1e-4  # times the bandwidth


@dataclass(frozen=True)
class DrawingPoint:
    side: str
    x: float
    y: float

    def __post_init__(self):
        if self.side not in SIDES:
            raise DataError(f"unknown side {self.side!r}, expected one of {SIDES}")
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise DataError(f"point ({self.x}, {self.y}) outside the unit square")


@dataclass
class Drawing:
    points: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, Drawing):
            return NotImplemented
        return self.points == other.points

    def to_records(self) -> list:
        return [{"side": p.side, "x": p.x, "y": p.y} for p in self.points]

    @classmethod
    def from_records(cls, records) -> "Drawing":
        return cls([DrawingPoint(r["side"], float(r["x"]), float(r["y"])) for r in records])


def embed(point: DrawingPoint) -> np.ndarray:
    """Map a painted point into the shared 2-D plane."""
    dx = 0.0 if point.side == "front" else SIDE_OFFSET
    return np.array([point.x + dx, point.y], dtype=np.float64)


def embed_points(points) -> np.ndarray:
    """(n, 2) embedded coordinates for a sequence of DrawingPoints."""
    if not points:
        return np.empty((0, 2), dtype=np.float64)
    out = np.empty((len(points), 2), dtype=np.float64)
    for i, p in enumerate(points):
        out[i, 0] = p.x + (0.0 if p.side == "front" else SIDE_OFFSET)
        out[i, 1] = p.y
    return out


@dataclass
class Codebook:
    centroids: np.ndarray  # (k, 2) embedded coordinates
    delta: float = SIDE_OFFSET
    seed: int | None = None

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Codebook):
            return NotImplemented
        return (
            np.array_equal(self.centroids, other.centroids)
            and self.delta == other.delta
            and self.seed == other.seed
        )

    def word_names(self) -> list:
        width = max(3, len(str(self.k - 1)))
        return [f"loc{i:0{width}d}" for i in range(self.k)]

    def save(self, path):
        payload = {
            "k": self.k,
            "delta": self.delta,
            "seed": self.seed,
            "centroids": self.centroids.tolist(),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Codebook":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        centroids = np.asarray(payload["centroids"], dtype=np.float64)
        if centroids.ndim != 2 or centroids.shape[0] != payload["k"]:
            raise DataError(f"codebook file {path}: centroid array does not match k")
        return cls(centroids=centroids, delta=float(payload["delta"]), seed=payload["seed"])


def _assign(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # Squared Euclidean; argmin takes the lowest index on exact ties.
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)


def _kmeans_pp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centroids = np.empty((k, 2), dtype=np.float64)
    first = rng.integers(n)
    centroids[0] = points[first]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # All remaining mass is on already-chosen locations.
            centroids[j] = points[rng.integers(n)]
            continue
        idx = rng.choice(n, p=d2 / total)
        centroids[j] = points[idx]
        d2 = np.minimum(d2, ((points - centroids[j]) ** 2).sum(axis=1))
    return centroids


def fit_codebook(points, k: int = DEFAULT_CODEBOOK_SIZE, seed: int = 0) -> Codebook:
    """Lloyd's algorithm with k-means++ seeding on embedded points.

    Stops when assignments stabilize or after 100 iterations. If there are
    fewer distinct embedded points than k, k is reduced to that count.
    """
    if not len(points):
        raise DataError("cannot fit a codebook on zero points")
    if k < 1:
        raise ValueError("k must be >= 1")
    emb = points if isinstance(points, np.ndarray) else embed_points(points)
    distinct = np.unique(emb, axis=0)
    if distinct.shape[0] < k:
        logger.warning(
            "only %d distinct embedded points; reducing codebook size from %d",
            distinct.shape[0], k,
        )
        k = distinct.shape[0]
    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(emb, k, rng)
    assign = _assign(emb, centroids)
    for _ in range(_KMEANS_MAX_ITER):
        sums = np.zeros((k, 2), dtype=np.float64)
        np.add.at(sums, assign, emb)
        counts = np.bincount(assign, minlength=k).astype(np.float64)
        occupied = counts > 0
        centroids = centroids.copy()
        centroids[occupied] = sums[occupied] / counts[occupied, None]
        new_assign = _assign(emb, centroids)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
    return Codebook(centroids=centroids, delta=SIDE_OFFSET, seed=seed)


def kmeans_inertia(points, codebook: Codebook) -> float:
    emb = points if isinstance(points, np.ndarray) else embed_points(points)
    d2 = ((emb[:, None, :] - codebook.centroids[None, :, :]) ** 2).sum(axis=2)
    return float(d2.min(axis=1).sum())


def encode_drawing(drawing: Drawing, codebook: Codebook) -> np.ndarray:
    """Bag of location words: nearest-centroid index per painted point.

    Ties go to the lowest centroid index. An empty drawing encodes to an
    empty bag; rejecting that is the prediction layer's job.
    """
    if not drawing.points:
        return np.empty(0, dtype=np.int64)
    emb = embed_points(drawing.points)
    return _assign(emb, codebook.centroids).astype(np.int64)


def count_regions(drawing: Drawing, bandwidth: float = DEFAULT_BANDWIDTH) -> int:
    """Number of discomfort regions via Gaussian-kernel mean shift.

    Every point is shifted until its step norm falls below 1e-4 * bandwidth
    (at most 300 iterations); converged modes within bandwidth/2 of each
    other are merged. Result is at least 1 for a non-empty drawing.
    """
    if not drawing.points:
        raise DataError("no painted points")
    if bandwidth <= 0.0:
        raise ValueError("bandwidth must be positive")
    pts = embed_points(drawing.points)
    modes = pts.copy()
    tol = _MEANSHIFT_SHIFT_TOL * bandwidth
    inv2h2 = 0.5 / (bandwidth * bandwidth)
    for _ in range(_MEANSHIFT_MAX_ITER):
        d2 = ((modes[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
        w = np.exp(-inv2h2 * d2)
        new = (w @ pts) / w.sum(axis=1, keepdims=True)
        shift = np.sqrt(((new - modes) ** 2).sum(axis=1))
        modes = new
        if shift.max() < tol:
            break
    # Canonical merge: sort modes so the result is independent of point order.
    order = np.lexsort((modes[:, 1], modes[:, 0]))
    merged: list = []
    merge_r2 = (bandwidth / 2.0) ** 2
    for i in order:
        m = modes[i]
        for c in merged:
            if ((m - c) ** 2).sum() < merge_r2:
                break
        else:
            merged.append(m)
    return max(1, len(merged))


def save_drawing(drawing: Drawing, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(drawing.to_records(), fh)
        fh.write("\n")


def load_drawing(path) -> Drawing:
    with open(path, encoding="utf-8") as fh:
        records = json.load(fh)
    if not isinstance(records, list):
        raise DataError(f"drawing file {path}: expected a JSON array of points")
    try:
        return Drawing.from_records(records)
    except (KeyError, TypeError) as exc:
        raise DataError(f"drawing file {path}: malformed point record ({exc})") from exc
