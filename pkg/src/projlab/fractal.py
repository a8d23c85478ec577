"""Generators for the compactly supported measures used in the bound and
sharpness experiments: four-corner Cantor iterates, two-map line Cantor
measures of a prescribed dimension, uniform balls, and orthogonal product
embeddings into R^n.

Measures are weighted point clouds.  Cantor types are deterministic IFS
iterates; Lebesgue types are seeded uniform samples, so every generator is
reproducible from (spec, seed).
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from .grassmann import Frame

MAX_LEVEL = 12


@dataclass(frozen=True)
class SampledMeasure:
    """Weighted point cloud approximating a probability measure on R^n."""

    points: np.ndarray  # (N, n)
    weights: np.ndarray  # (N,)
    nominal_dim: float  # the generator's theoretical dimension
    spec: dict  # provenance

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        w = np.asarray(self.weights, dtype=float)
        if pts.shape[0] != w.shape[0]:
            raise ValueError("points and weights disagree in length")
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def ambient_dim(self):
        return self.points.shape[1]

    @property
    def count(self):
        return self.points.shape[0]


def _ifs_iterate(maps, level):
    """Points of the level-th iterate of an IFS acting on the origin,
    equal weights.  maps: list of (ratio, offset) affine contractions."""
    pts = np.zeros((1, len(maps[0][1])))
    for _ in range(level):
        pts = np.concatenate([ratio * pts + off for ratio, off in maps])
    w = np.full(len(pts), 1.0 / len(pts))
    return pts, w


def four_corner_cantor(level) -> SampledMeasure:
    """Level-th iterate of the four-corner Cantor construction in R^2:
    four maps of ratio 1/4 at the corners of the unit square.  Dimension
    log 4 / log 4 = 1."""
    if not 1 <= level <= MAX_LEVEL:
        raise ValueError(f"level must be in 1..{MAX_LEVEL}")
    offs = [np.array(c) for c in
            [(0.0, 0.0), (0.75, 0.0), (0.0, 0.75), (0.75, 0.75)]]
    pts, w = _ifs_iterate([(0.25, off) for off in offs], level)
    return SampledMeasure(pts, w, 1.0,
                          {"variant": "four_corner_cantor", "level": level})


def line_cantor(s, level) -> SampledMeasure:
    """Two-map Cantor measure on [0, 1] with dimension s in (0, 1]:
    contraction ratio rho = 2^(-1/s), translations {0, 1 - rho}."""
    if not 0 < s <= 1:
        raise ValueError("target dimension s must lie in (0, 1]")
    if not 1 <= level <= 24:
        raise ValueError("level must be in 1..24")
    rho = 2.0 ** (-1.0 / s)
    pts, w = _ifs_iterate(
        [(rho, np.array([0.0])), (rho, np.array([1.0 - rho]))], level
    )
    return SampledMeasure(pts, w, float(s),
                          {"variant": "line_cantor", "s": float(s),
                           "level": level})


def lebesgue_ball(dim, N, seed) -> SampledMeasure:
    """N uniform samples from the unit ball of R^dim, equal weights."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((N, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    radii = rng.random(N) ** (1.0 / dim)
    pts = g * radii[:, None]
    w = np.full(N, 1.0 / N)
    return SampledMeasure(pts, w, float(dim),
                          {"variant": "lebesgue_ball", "dim": dim,
                           "N": N, "seed": seed})


def _center_and_scale(pts):
    """Translate to the centroid and scale into the unit ball."""
    pts = pts - pts.mean(axis=0)
    r = np.max(np.linalg.norm(pts, axis=1))
    if r > 0:
        pts = pts / r
    return pts


def embed(measure: SampledMeasure, frame: Frame, offset=None,
          normalize=True) -> SampledMeasure:
    """Map a measure into R^n along an orthonormal frame: point p goes to
    offset + sum_i p_i * basis_i.  Requires plane_dim = measure dim."""
    if frame.plane_dim != measure.ambient_dim:
        raise ValueError("frame plane dimension must match measure dimension")
    pts = measure.points
    if normalize:
        pts = _center_and_scale(pts)
    out = pts @ frame.basis
    if offset is not None:
        out = out + np.asarray(offset, dtype=float)
    return SampledMeasure(out, measure.weights, measure.nominal_dim,
                          {"variant": "embedded", "inner": measure.spec})


def product_embed(parts, N, seed) -> SampledMeasure:
    """Product measure of factors embedded along pairwise orthogonal
    frames in a common R^n: draws N independent product samples, each
    factor resampled by its weights.  Dimension adds across factors."""
    if not parts:
        raise ValueError("need at least one factor")
    frames = [frame for (_, frame, _) in parts]
    n = frames[0].ambient_dim
    for a in range(len(frames)):
        if frames[a].ambient_dim != n:
            raise ValueError("factors embed into different ambient spaces")
        for b in range(a + 1, len(frames)):
            if np.max(np.abs(frames[a].basis @ frames[b].basis.T)) > 1e-9:
                raise ValueError("embedding subspaces overlap")
    rng = np.random.default_rng(seed)
    out = np.zeros((N, n))
    dim = 0.0
    specs = []
    for measure, frame, offset in parts:
        idx = rng.choice(measure.count, size=N, p=measure.weights)
        pts = _center_and_scale(measure.points)[idx]
        out += pts @ frame.basis
        if offset is not None:
            out += np.asarray(offset, dtype=float)
        dim += measure.nominal_dim
        specs.append(measure.spec)
    w = np.full(N, 1.0 / N)
    return SampledMeasure(out, w, dim,
                          {"variant": "product", "factors": specs,
                           "N": N, "seed": seed})


# ---------------------------------------------------------------------------
# Interchange formats
# ---------------------------------------------------------------------------

def save_csv(measure: SampledMeasure, path):
    """Canonical interchange format: header x_1..x_n, weight; repr-exact
    floats so a round trip preserves values."""
    n = measure.ambient_dim
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x_{i + 1}" for i in range(n)] + ["weight"])
        for p, w in zip(measure.points, measure.weights):
            writer.writerow([repr(float(v)) for v in p] + [repr(float(w))])


def load_csv(path, nominal_dim=float("nan"), spec=None) -> SampledMeasure:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        n = len(header) - 1
        rows = [list(map(float, row)) for row in reader]
    arr = np.asarray(rows, dtype=float)
    return SampledMeasure(arr[:, :n], arr[:, n], nominal_dim,
                          spec or {"variant": "csv", "path": str(path)})


def save_binary(measure: SampledMeasure, path):
    """Raw float64 block (points then weights) plus a JSON sidecar."""
    path = str(path)
    block = np.concatenate(
        [measure.points.ravel(), measure.weights]
    ).astype(np.float64)
    block.tofile(path)
    sidecar = {
        "N": measure.count,
        "n": measure.ambient_dim,
        "nominal_dim": measure.nominal_dim,
        "spec": measure.spec,
    }
    with open(path + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_binary(path) -> SampledMeasure:
    path = str(path)
    with open(path + ".json") as fh:
        sidecar = json.load(fh)
    N, n = sidecar["N"], sidecar["n"]
    block = np.fromfile(path, dtype=np.float64)
    pts = block[: N * n].reshape(N, n)
    w = block[N * n:]
    return SampledMeasure(pts, w, sidecar["nominal_dim"], sidecar["spec"])
