"""Constructive recovery of the Hopf fibration from kernel data.

The first nontrivial eigenspace of the sub-Laplacian is spanned by the
functions x -> cos theta(x, x_j) cos r(x, x_j).  Pinning four
well-conditioned base points x_1..x_4 and Cholesky-factoring their Gram
matrix A (a_ij = cos theta cos r) turns those kernel values into Euclidean
coordinates: the embedding x -> M^{-T} c(x) lands on the unit sphere of R^4
and pulls the round distance back to delta.  The quotient story is the same
with three base fibers and b_ij = cos 2r, landing on S^2 with distance 2r.

check_submersion and check_fiber_geodesic verify the bundle structure of
the recovered projection: horizontal lengths are preserved (up to the
factor 1/2 from the radius-1/2 target) and great-circle arcs in the fiber
direction stay inside their fiber.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from . import su2
from .su2 import GroupElement, HaarSample

__all__ = [
    "EmbeddingModel",
    "EmbeddingReport",
    "VolumeGrowthFit",
    "select_base_points",
    "embed_S3",
    "embed_S2",
    "check_submersion",
    "check_fiber_geodesic",
    "volume_growth_fit",
]

_MIN_EIG = 1e-6


@dataclass
class EmbeddingModel:
    """Base points, Gram matrix and its Cholesky factor for one embedding.

    dim = 4: base points on SU(2), gram a_ij = cos theta(x_i,x_j) cos r(x_i,x_j).
    dim = 3: base fiber representatives, gram b_ij = cos 2r(x_i,x_j).
    factor is upper-triangular M with gram = M^T M.
    """

    dim: int
    base_points: np.ndarray  # (dim, 4)
    base_ids: list
    gram: np.ndarray  # (dim, dim)
    factor: np.ndarray  # (dim, dim), upper triangular
    min_eigenvalue: float


@dataclass
class EmbeddingReport:
    """Summary of one rigidity run, serializable as JSON."""

    min_gram_eigenvalue: float
    max_isometry_residual: float
    base_point_ids: list
    pairs_checked: int
    seed: int
    per_pair_residuals: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "min_gram_eigenvalue": float(self.min_gram_eigenvalue),
            "max_isometry_residual": float(self.max_isometry_residual),
            "base_point_ids": [int(i) for i in self.base_point_ids],
            "pairs_checked": int(self.pairs_checked),
            "seed": int(self.seed),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _kernel_matrix(points: np.ndarray, dim: int) -> np.ndarray:
    """Pairwise kernel values: cos theta cos r (dim 4) or cos 2r (dim 3)."""
    r, theta, _ = su2.pair_coords_array(points[:, None, :], points[None, :, :])
    if dim == 4:
        return np.cos(theta) * np.cos(r)
    return np.cos(2 * r)


def _kernel_vector(points: np.ndarray, x: np.ndarray, dim: int) -> np.ndarray:
    r, theta, _ = su2.pair_coords_array(x[..., None, :], points)
    if dim == 4:
        return np.cos(theta) * np.cos(r)
    return np.cos(2 * r)


def select_base_points(sample: HaarSample, dim: int) -> EmbeddingModel:
    """Greedy max-determinant choice of dim base points from the sample.

    Equivalent to pivoted Cholesky on the sample kernel matrix: each pick
    maximizes the determinant of the running Gram matrix.  Raises if the
    selected Gram matrix has smallest eigenvalue below 1e-6.
    """
    if dim not in (3, 4):
        raise ValueError("select_base_points: dim must be 3 or 4")
    if len(sample) < 50:
        raise ValueError("select_base_points: need a sample of size >= 50")
    pts = sample.points
    K = _kernel_matrix(pts, dim)
    n = len(pts)
    residual_diag = np.diag(K).copy()
    rows = np.zeros((dim, n))
    ids: list = []
    for j in range(dim):
        i = int(np.argmax(residual_diag))
        if residual_diag[i] <= 0:
            raise RuntimeError("select_base_points: degenerate sample (no positive pivot)")
        ids.append(i)
        row = (K[i] - rows[:j].T @ rows[:j, i]) / math.sqrt(residual_diag[i])
        rows[j] = row
        residual_diag = residual_diag - row ** 2
        residual_diag[ids] = -np.inf
    gram = K[np.ix_(ids, ids)]
    min_eig = float(np.linalg.eigvalsh(gram)[0])
    if min_eig < _MIN_EIG:
        raise RuntimeError(
            f"select_base_points: Gram matrix ill-conditioned (min eig {min_eig:.3e})"
        )
    factor = cholesky(gram, lower=False)  # gram = factor^T factor
    return EmbeddingModel(
        dim=dim,
        base_points=pts[ids].copy(),
        base_ids=ids,
        gram=gram,
        factor=factor,
        min_eigenvalue=min_eig,
    )


def _embed(model: EmbeddingModel, x: np.ndarray) -> np.ndarray:
    c = _kernel_vector(model.base_points, x, model.dim)
    # M^{-T} c: forward solve with the lower-triangular M^T
    return solve_triangular(model.factor, c.reshape(-1, model.dim).T, trans="T").T.reshape(
        x.shape[:-1] + (model.dim,)
    )


def embed_S3(model: EmbeddingModel, x) -> np.ndarray:
    """Embed into the unit sphere of R^4; arccos of dot products gives delta.

    Accepts a GroupElement or an ndarray of quaternions (..., 4).
    """
    if model.dim != 4:
        raise ValueError("embed_S3: model must have dim 4")
    xa = x.as_array() if isinstance(x, GroupElement) else np.asarray(x, dtype=float)
    return _embed(model, xa)


def embed_S2(model: EmbeddingModel, x) -> np.ndarray:
    """Embed a point (through its fiber) into the unit sphere of R^3.

    arccos of dot products gives 2r; points of one fiber share an image.
    """
    if model.dim != 3:
        raise ValueError("embed_S2: model must have dim 3")
    xa = x.as_array() if isinstance(x, GroupElement) else np.asarray(x, dtype=float)
    return _embed(model, xa)


@dataclass
class SubmersionReport:
    s3_length: float
    s2_length: float
    ratio: float
    residual: float


def check_submersion(
    model4: EmbeddingModel,
    model3: EmbeddingModel,
    x: GroupElement,
    directions,
    h: float,
) -> SubmersionReport:
    """Horizontal polyline length upstairs vs half the projected length.

    Walks len(directions) horizontal steps of size h from x, embeds the
    polyline with both models, and compares the accumulated S^3 arc length
    with (1/2) times the accumulated S^2 arc length of the projection.
    """
    pts = [x]
    for d in directions:
        pts.append(su2.horizontal_step(pts[-1], float(d), h))
    arr = np.stack([p.as_array() for p in pts])
    e3 = embed_S3(model4, arr)
    e2 = embed_S2(model3, arr)
    dots3 = np.clip(np.sum(e3[:-1] * e3[1:], axis=1), -1.0, 1.0)
    dots2 = np.clip(np.sum(e2[:-1] * e2[1:], axis=1), -1.0, 1.0)
    len3 = float(np.sum(np.arccos(dots3)))
    len2 = float(np.sum(np.arccos(dots2)))
    ratio = 0.5 * len2 / len3 if len3 > 0 else float("nan")
    return SubmersionReport(
        s3_length=len3, s2_length=len2, ratio=ratio, residual=abs(len3 - 0.5 * len2)
    )


def check_fiber_geodesic(x: GroupElement, z: float, n_samples: int = 100) -> float:
    """Max r-distance from x along the S^3 great-circle arc x -> x exp(zZ).

    The arc is the constant-speed geodesic of the round sphere between the
    two fiber points; the returned residual measures how far it leaves the
    fiber (it should not, to rounding).
    """
    if not 0.0 < z < math.pi:
        raise ValueError("check_fiber_geodesic: z must be in (0, pi)")
    a = x.as_array()
    b = su2.mul(x, su2.exp_z(z)).as_array()
    s = np.linspace(0.0, 1.0, n_samples + 2)[1:-1]
    # slerp between the endpoints
    arc = (np.sin((1 - s) * z)[:, None] * a + np.sin(s * z)[:, None] * b) / math.sin(z)
    arc /= np.linalg.norm(arc, axis=1, keepdims=True)
    r, _, _ = su2.pair_coords_array(a, arc)
    return float(np.max(r))


@dataclass
class VolumeGrowthFit:
    slope_delta: float
    slope_r: float
    radii: np.ndarray
    mass_delta: np.ndarray
    mass_r: np.ndarray


def volume_growth_fit(sample: HaarSample, center: GroupElement, radii) -> VolumeGrowthFit:
    """Least-squares log-log slopes of empirical ball mass vs radius.

    slope_delta uses metric balls of the round distance delta (expected
    slope 3, the sphere is 3-dimensional); slope_r uses r-balls, which are
    fiber tubes and see only the 2-dimensional quotient.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size < 2:
        raise ValueError("volume_growth_fit: need at least two radii")
    r, _, delta = su2.pair_coords_array(center.as_array(), sample.points)
    w = sample.weights
    mass_d = np.array([w[delta <= rho].sum() for rho in radii])
    mass_r = np.array([w[r <= rho].sum() for rho in radii])
    if (mass_d == 0).any() or (mass_r == 0).any():
        raise RuntimeError("volume_growth_fit: empty ball at the smallest radius")
    lx = np.log(radii)
    slope_d = float(np.polyfit(lx, np.log(mass_d), 1)[0])
    slope_r = float(np.polyfit(lx, np.log(mass_r), 1)[0])
    return VolumeGrowthFit(
        slope_delta=slope_d, slope_r=slope_r, radii=radii, mass_delta=mass_d, mass_r=mass_r
    )
