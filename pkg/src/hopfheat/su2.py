"""Geometry of SU(2) as the unit quaternion sphere.

A group element q0 + q1*i + q2*j + q3*k is identified with the SU(2) matrix
whose entries are alpha = q0 + i*q3 and beta = q2 + i*q1.  With this
identification the one-parameter subgroups generated by the left-invariant
fields X, Y, Z are

    exp(a X) = (cos a, 0, sin a, 0)
    exp(a Y) = (cos a, sin a, 0, 0)
    exp(a Z) = (cos a, 0, 0, sin a)

and the cylindrical chart g = exp(r cos(phi) X + r sin(phi) Y) exp(z Z)
gives alpha = cos(r) e^{iz}, beta = sin(r) e^{i(phi - z)}.  The coordinates
of a pair (x, y) are read off g = x^{-1} y:

    r     = arccos |alpha(g)|          horizontal pseudo-distance, [0, pi/2]
    theta = |arg alpha(g)|             vertical pseudo-distance, [0, pi]
    delta = arccos Re alpha(g)         round great-circle distance, [0, pi]

delta = arccos(cos r * cos theta) and equals the ordinary R^4 angle between
the two unit quaternions.  Fibers of the Hopf map are right cosets of
exp(s Z); r vanishes exactly on them.

Scalar operations work on GroupElement values; the *_array functions operate
on ndarrays of shape (..., 4) and are what the verification suites use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GroupElement",
    "PairCoords",
    "HaarSample",
    "Fiber",
    "identity",
    "exp_x",
    "exp_y",
    "exp_z",
    "mul",
    "inverse",
    "pair_coords",
    "triangle_check",
    "haar_sample",
    "haar_quadrature",
    "hopf_project",
    "horizontal_step",
    "mul_array",
    "conjugate_array",
    "pair_coords_array",
    "hopf_project_array",
]

_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class GroupElement:
    """A point of SU(2) stored as a unit quaternion (renormalized on creation)."""

    q0: float
    q1: float
    q2: float
    q3: float

    def __post_init__(self):
        norm = math.sqrt(self.q0 ** 2 + self.q1 ** 2 + self.q2 ** 2 + self.q3 ** 2)
        if norm == 0.0:
            raise ValueError("GroupElement: zero quaternion")
        if abs(norm - 1.0) > _UNIT_TOL:
            object.__setattr__(self, "q0", self.q0 / norm)
            object.__setattr__(self, "q1", self.q1 / norm)
            object.__setattr__(self, "q2", self.q2 / norm)
            object.__setattr__(self, "q3", self.q3 / norm)

    def as_array(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3])

    @staticmethod
    def from_array(q) -> "GroupElement":
        q = np.asarray(q, dtype=float)
        return GroupElement(float(q[0]), float(q[1]), float(q[2]), float(q[3]))


@dataclass(frozen=True)
class PairCoords:
    """The coordinate triple (r, theta, delta) of a pair of group elements."""

    r: float
    theta: float
    delta: float


@dataclass
class HaarSample:
    """Weighted point set approximating the normalized Haar measure."""

    points: np.ndarray  # shape (n, 4), unit rows
    weights: np.ndarray  # shape (n,), nonnegative, sums to 1
    seed: int

    def __len__(self) -> int:
        return len(self.points)

    def element(self, i: int) -> GroupElement:
        return GroupElement.from_array(self.points[i])


@dataclass
class Fiber:
    """The Hopf fiber through a base point: s in [-pi, pi) -> base * exp(s Z)."""

    base: GroupElement

    def point(self, s: float) -> GroupElement:
        return mul(self.base, exp_z(s))

    def points_array(self, m: int) -> np.ndarray:
        """m equispaced points of the fiber circle, shape (m, 4)."""
        s = np.arange(m) * (2.0 * math.pi / m)
        return mul_array(self.base.as_array()[None, :], _exp_z_array(s))


def identity() -> GroupElement:
    return GroupElement(1.0, 0.0, 0.0, 0.0)


def exp_x(a: float) -> GroupElement:
    return GroupElement(math.cos(a), 0.0, math.sin(a), 0.0)


def exp_y(a: float) -> GroupElement:
    return GroupElement(math.cos(a), math.sin(a), 0.0, 0.0)


def exp_z(a: float) -> GroupElement:
    return GroupElement(math.cos(a), 0.0, 0.0, math.sin(a))


def _exp_z_array(s: np.ndarray) -> np.ndarray:
    out = np.zeros(s.shape + (4,))
    out[..., 0] = np.cos(s)
    out[..., 3] = np.sin(s)
    return out


def mul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quaternion product of arrays of shape (..., 4), broadcasting."""
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def conjugate_array(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def mul(a: GroupElement, b: GroupElement) -> GroupElement:
    """Group product (quaternion product, renormalized)."""
    return GroupElement.from_array(mul_array(a.as_array(), b.as_array()))


def inverse(a: GroupElement) -> GroupElement:
    return GroupElement(a.q0, -a.q1, -a.q2, -a.q3)


def pair_coords_array(x: np.ndarray, y: np.ndarray):
    """(r, theta, delta) for arrays of unit quaternions, broadcasting.

    Only the alpha entry of g = x^{-1} y is needed: Re alpha and Im alpha are
    the 0- and 3-components of the product.
    """
    g = mul_array(conjugate_array(x), y)
    re, im = g[..., 0], g[..., 3]
    # r through arctan2 of |beta| against |alpha|: arccos(|alpha|) loses half
    # the significant digits near the fiber where |alpha| is 1 - O(eps)
    r = np.arctan2(np.hypot(g[..., 1], g[..., 2]), np.hypot(re, im))
    theta = np.abs(np.arctan2(im, re))
    delta = np.arccos(np.clip(re, -1.0, 1.0))
    return r, theta, delta


def pair_coords(x: GroupElement, y: GroupElement) -> PairCoords:
    """Coordinates (r, theta, delta) of the pair (x, y)."""
    r, theta, delta = pair_coords_array(x.as_array(), y.as_array())
    return PairCoords(float(r), float(theta), float(delta))


def triangle_check(x: GroupElement, y: GroupElement, z: GroupElement, tol: float = 1e-12) -> bool:
    """True iff the triangle inequality holds for delta, r and theta separately."""
    xy = pair_coords(x, y)
    yz = pair_coords(y, z)
    xz = pair_coords(x, z)
    return (
        xz.delta <= xy.delta + yz.delta + tol
        and xz.r <= xy.r + yz.r + tol
        and xz.theta <= xy.theta + yz.theta + tol
    )


def haar_sample(n: int, seed: int) -> HaarSample:
    """n i.i.d. Haar-uniform points: four standard Gaussians, normalized."""
    if n < 1:
        raise ValueError("haar_sample: n must be >= 1")
    g = np.random.default_rng(seed).normal(size=(n, 4))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return HaarSample(points=g, weights=np.full(n, 1.0 / n), seed=seed)


def haar_quadrature(policy) -> HaarSample:
    """Deterministic product quadrature for the normalized Haar measure.

    Chart (r, phi1, phi2) with density proportional to sin(r) cos(r);
    Gauss-Legendre in r over [0, pi/2], trapezoid (equispaced, exact for
    trigonometric polynomials) in both angles over [0, 2pi).  Weights are
    normalized to total mass 1.  Grid sizes come from policy.haar_grid.
    """
    n_r, n_p1, n_p2 = policy.haar_grid
    if min(n_r, n_p1, n_p2) < 2:
        raise ValueError("haar_quadrature: grid sizes must be >= 2 per axis")
    nodes, wts = np.polynomial.legendre.leggauss(n_r)
    r = (nodes + 1.0) * (math.pi / 4.0)
    wr = wts * (math.pi / 4.0) * np.sin(r) * np.cos(r)
    phi1 = np.arange(n_p1) * (2.0 * math.pi / n_p1)
    phi2 = np.arange(n_p2) * (2.0 * math.pi / n_p2)
    R, P1, P2 = np.meshgrid(r, phi1, phi2, indexing="ij")
    W = np.einsum("i,j,k->ijk", wr, np.full(n_p1, 1.0 / n_p1), np.full(n_p2, 1.0 / n_p2))
    rr, ph, z = R.ravel(), P1.ravel(), P2.ravel()
    # chart point exp(r cos(phi) X + r sin(phi) Y) exp(z Z):
    # alpha = cos r e^{iz}, beta = sin r e^{i(phi - z)}
    pts = np.stack(
        [
            np.cos(rr) * np.cos(z),
            np.sin(rr) * np.sin(ph - z),
            np.sin(rr) * np.cos(ph - z),
            np.cos(rr) * np.sin(z),
        ],
        axis=-1,
    )
    w = W.ravel()
    w = w / w.sum()
    return HaarSample(points=pts, weights=w, seed=-1)


def hopf_project_array(x: np.ndarray) -> np.ndarray:
    """Hopf projection to the sphere of radius 1/2, for arrays (..., 4)."""
    a = x[..., 0] + 1j * x[..., 3]
    b = x[..., 2] + 1j * x[..., 1]
    w = 2.0 * np.conj(a) * b
    return np.stack(
        [(np.abs(a) ** 2 - np.abs(b) ** 2) / 2.0, w.real / 2.0, w.imag / 2.0],
        axis=-1,
    )


def hopf_project(x: GroupElement) -> np.ndarray:
    """Hopf projection of a group element; a point of S^2(1/2) in R^3."""
    return hopf_project_array(x.as_array())


def horizontal_step(x: GroupElement, direction: float, step: float) -> GroupElement:
    """One step along a horizontal curve: x * exp(step*(cos(d) X + sin(d) Y))."""
    if step <= 0:
        raise ValueError("horizontal_step: step must be positive")
    g = GroupElement(
        math.cos(step),
        math.sin(step) * math.sin(direction),
        math.sin(step) * math.cos(direction),
        0.0,
    )
    return mul(x, g)
