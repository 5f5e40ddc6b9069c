"""Points, frames and tangent coordinates on the real Stiefel manifold St(p, n).

The metric family is ``<w1, w2> = Tr(w1^T w2) + (alpha - 1) Tr(w1^T Y Y^T w2)``
(``alpha_0`` normalized to one). A tangent vector at ``Y`` is written
``Y A + Y_perp B`` with ``A`` antisymmetric ``p x p`` and ``B`` of shape
``(n-p) x p``.
"""

from dataclasses import dataclass

import numpy as np

from .matlin import as_matrix, skew_part

__all__ = [
    "StiefelFrame",
    "TangentCoords",
    "check_alpha",
    "complete_frame",
    "canonical_frame",
    "random_frame",
    "random_tangent",
    "to_coords",
    "from_coords",
    "project_tangent",
    "tangency_residual",
    "metric_inner",
    "ambient_metric_inner",
    "metric_operator",
    "christoffel",
    "connection",
    "retract_polar",
]

FRAME_TOL = 1e-10


def check_alpha(alpha):
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha <= 0:
        raise ValueError(f"alpha must be a positive finite number, got {alpha}")
    return alpha


@dataclass(frozen=True)
class StiefelFrame:
    """A point ``Y`` of St(p, n) with an orthonormal complement ``Yperp``."""

    Y: np.ndarray
    Yperp: np.ndarray

    @property
    def n(self):
        return self.Y.shape[0]

    @property
    def p(self):
        return self.Y.shape[1]

    @property
    def U(self):
        """The orthogonal ``n x n`` matrix ``(Y | Yperp)``."""
        return np.hstack([self.Y, self.Yperp])


@dataclass(frozen=True)
class TangentCoords:
    """Block coordinates ``(A, B)`` of a tangent vector relative to a frame.

    ``A`` must be exactly antisymmetric; use :meth:`from_lower` or
    :func:`project_tangent` to build one from arbitrary data.
    """

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.float64)
        B = np.asarray(self.B, dtype=np.float64)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got shape {A.shape}")
        if B.ndim != 2 or B.shape[1] != A.shape[0]:
            raise ValueError(f"B must have {A.shape[0]} columns, got shape {B.shape}")
        if not np.array_equal(A, -A.T):
            raise ValueError("A block is not antisymmetric")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def p(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[0] + self.B.shape[0]

    @classmethod
    def from_lower(cls, lower, B):
        from .matlin import skew_from_lower

        B = np.asarray(B, dtype=np.float64)
        return cls(skew_from_lower(B.shape[1], lower), B)

    @classmethod
    def zeros(cls, n, p):
        return cls(np.zeros((p, p)), np.zeros((n - p, p)))

    def __add__(self, other):
        return TangentCoords(self.A + other.A, self.B + other.B)

    def __sub__(self, other):
        return TangentCoords(self.A - other.A, self.B - other.B)

    def __mul__(self, c):
        return TangentCoords(c * self.A, c * self.B)

    __rmul__ = __mul__

    def __neg__(self):
        return TangentCoords(-self.A, -self.B)

    def to_vector(self):
        """Flatten to ``(lower(A), B.ravel())``."""
        rows, cols = np.tril_indices(self.p, k=-1)
        return np.concatenate([self.A[rows, cols], self.B.ravel()])

    @classmethod
    def from_vector(cls, vec, n, p):
        k = p * (p - 1) // 2
        vec = np.asarray(vec, dtype=np.float64)
        return cls.from_lower(vec[:k], vec[k:].reshape(n - p, p))


def _check_coords_match(*coords):
    shapes = {(c.n, c.p) for c in coords}
    if len(shapes) != 1:
        raise ValueError(f"tangent coordinates disagree on (n, p): {sorted(shapes)}")


def complete_frame(Y):
    """Complete an orthonormal ``n x p`` matrix to a frame ``(Y | Yperp)``.

    ``Yperp`` comes from the Householder QR of ``Y`` with the sign convention
    that makes ``diag(R)`` positive; its last column is then flipped if needed
    so that ``det(Y | Yperp) = +1``.
    """
    Y = as_matrix(Y, "Y")
    n, p = Y.shape
    if p >= n:
        raise ValueError(f"need p < n, got Y of shape {Y.shape}")
    err = np.linalg.norm(Y.T @ Y - np.eye(p))
    if err > FRAME_TOL:
        raise ValueError(f"Y is not orthonormal: ||Y^T Y - I||_F = {err:.3e}")
    Q, R = np.linalg.qr(Y, mode="complete")
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    Q[:, :p] *= signs
    Yperp = Q[:, p:].copy()
    if np.linalg.det(np.hstack([Y, Yperp])) < 0:
        Yperp[:, -1] *= -1
    return StiefelFrame(Y, Yperp)


def canonical_frame(n, p):
    """The frame with ``Y`` the first ``p`` columns of ``I_n``."""
    if not 0 < p < n:
        raise ValueError(f"need 0 < p < n, got n={n}, p={p}")
    eye = np.eye(n)
    return StiefelFrame(eye[:, :p].copy(), eye[:, p:].copy())


def random_frame(n, p, rng):
    Q, R = np.linalg.qr(rng.standard_normal((n, p)))
    return complete_frame(Q * np.sign(np.diag(R)))


def random_tangent(n, p, rng):
    k = p * (p - 1) // 2
    return TangentCoords.from_lower(rng.standard_normal(k), rng.standard_normal((n - p, p)))


def to_coords(frame, w):
    """Raw block coordinates ``(Y^T W, Yperp^T W)``; no symmetry is imposed on the first block."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != frame.Y.shape:
        raise ValueError(f"ambient vector shape {w.shape} does not match frame {frame.Y.shape}")
    return frame.Y.T @ w, frame.Yperp.T @ w


def from_coords(frame, coords):
    if (coords.n, coords.p) != (frame.n, frame.p):
        raise ValueError(f"coords for St({coords.p},{coords.n}) used with frame for St({frame.p},{frame.n})")
    return frame.Y @ coords.A + frame.Yperp @ coords.B


def project_tangent(frame, w):
    """Tangent coordinates of the projection of ``w``: skew part of ``Y^T W`` and ``Yperp^T W``."""
    A, B = to_coords(frame, w)
    return TangentCoords(skew_part(A), B)


def tangency_residual(Y, w):
    """``||Y^T w + w^T Y||_F``, zero for tangent vectors."""
    s = Y.T @ w
    return float(np.linalg.norm(s + s.T))


def metric_inner(alpha, xi, eta):
    """``alpha Tr(A1^T A2) + Tr(B1^T B2)``."""
    _check_coords_match(xi, eta)
    return float(alpha * np.sum(xi.A * eta.A) + np.sum(xi.B * eta.B))


def metric_operator(alpha, Y, w):
    """``g_Y w = w + (alpha - 1) Y Y^T w``."""
    return w + (alpha - 1.0) * (Y @ (Y.T @ w))


def ambient_metric_inner(alpha, Y, w1, w2):
    return float(np.sum(w1 * metric_operator(alpha, Y, w2)))


def _check_ambient(Y, *ws):
    for w in ws:
        if np.shape(w) != Y.shape:
            raise ValueError(f"ambient vector shape {np.shape(w)} does not match Y {Y.shape}")


def christoffel(alpha, Y, w1, w2):
    """Christoffel function ``Gamma(w1, w2)`` of the metric at ``Y``.

    ``1/2 Y (w1^T w2 + w2^T w1) + (1 - alpha)(I - Y Y^T)(w1 w2^T + w2 w1^T) Y``.
    Defined for arbitrary ambient ``n x p`` matrices and exactly symmetric in
    its two arguments.
    """
    _check_ambient(Y, w1, w2)
    S = w1.T @ w2 + w2.T @ w1
    MY = w1 @ (w2.T @ Y) + w2 @ (w1.T @ Y)
    return 0.5 * (Y @ S) + (1.0 - alpha) * (MY - Y @ (Y.T @ MY))


def connection(alpha, Y, v, z, dz):
    """Levi-Civita connection ``nabla_V Z`` at ``Y``.

    ``dz`` is the directional derivative ``D_V Z`` supplied by the caller. Uses
    the Cheeger parametrization ``t = 2 alpha``.
    """
    _check_ambient(Y, v, z, dz)
    t = 2.0 * alpha
    M = v @ z.T + z @ v.T
    MY = M @ Y
    return dz + 0.5 * (Y @ (v.T @ z + z.T @ v)) + (2.0 - t) / 2.0 * (MY - Y @ (Y.T @ MY))


def retract_polar(frame, xi, s):
    """Polar retraction ``(Y + s xi)(I + s^2 xi^T xi)^(-1/2)``, re-completed to a frame.

    ``xi`` is an ambient tangent vector or :class:`TangentCoords`.
    """
    if isinstance(xi, TangentCoords):
        xi = from_coords(frame, xi)
    _check_ambient(frame.Y, xi)
    if s == 0:
        return frame
    vals, vecs = np.linalg.eigh(np.eye(frame.p) + s * s * (xi.T @ xi))
    inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.T
    Ys = (frame.Y + s * xi) @ inv_sqrt
    return complete_frame(Ys)
