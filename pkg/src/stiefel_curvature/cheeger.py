"""Cheeger-deformed left-invariant metrics on SO(n) and the quotient St(p, n) = SO(n)/SO(n-p).

Elements of o(n) are stored as block triples ``[[A, B, H]]`` standing for the
antisymmetric matrix ``[[A, -B^T], [B, H]]`` with ``A`` in o(p) (the ``a``
block), ``B`` of shape ``(n-p) x p`` (the ``b`` block) and ``H`` in o(n-p)
(the ``h`` block). The isotropy algebra is ``k = h`` and the horizontal space
is ``m = a + b``; ``n = b + h``.

The bi-invariant form is ``1/2 Tr(w1^T w2)``. The deformed inner product
scales the ``a`` block by ``t``: ``<w1, w2>_P = <w1, P_t w2>`` with
``P_t w = t w_a + w_n``. Under ``alpha = t/2`` the quotient metric is the
alpha-metric on St(p, n).
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .matlin import skew_part
from .stiefel import TangentCoords, tangency_residual

__all__ = [
    "SkewTriple",
    "Projections",
    "check_t",
    "decompose_abh",
    "biinvariant_inner",
    "apply_P",
    "apply_P_inv",
    "pt_inner",
    "bracket",
    "bracket_P",
    "ad_dagger",
    "oneil_term",
    "group_curvature",
    "hom_curvature",
    "curvature_Pt_decomposed",
    "combine_decomposition",
    "gz_sectional",
    "horizontal_lift",
    "lift_triple",
    "triple_from_coords",
    "coords_from_triple",
    "random_triple",
]

_SKEW_TOL = 1e-9


def check_t(t):
    t = float(t)
    if not np.isfinite(t) or t <= 0:
        raise ValueError(f"deformation parameter t must be positive, got {t}")
    return t


@dataclass(frozen=True)
class SkewTriple:
    """Block triple ``[[A, B, H]]`` of an element of o(n)."""

    A: np.ndarray
    B: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=np.float64)
        B = np.asarray(self.B, dtype=np.float64)
        H = np.asarray(self.H, dtype=np.float64)
        p, q = A.shape[0], H.shape[0]
        if A.shape != (p, p) or H.shape != (q, q) or B.shape != (q, p):
            raise ValueError(f"inconsistent block shapes A{A.shape} B{B.shape} H{H.shape}")
        for name, block in (("A", A), ("H", H)):
            if block.size and np.max(np.abs(block + block.T)) > _SKEW_TOL * (1.0 + np.max(np.abs(block))):
                raise ValueError(f"{name} block is not antisymmetric")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "H", H)

    @property
    def p(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[0] + self.H.shape[0]

    @classmethod
    def zeros(cls, n, p):
        return cls(np.zeros((p, p)), np.zeros((n - p, p)), np.zeros((n - p, n - p)))

    @classmethod
    def from_matrix(cls, M, p):
        """Split an antisymmetric ``n x n`` matrix into its blocks."""
        M = np.asarray(M, dtype=np.float64)
        return cls(skew_part(M[:p, :p]), M[p:, :p].copy(), skew_part(M[p:, p:]))

    def assemble(self):
        """The full ``n x n`` antisymmetric matrix."""
        return np.block([[self.A, -self.B.T], [self.B, self.H]])

    def _same(self, other):
        if (self.n, self.p) != (other.n, other.p):
            raise ValueError(f"triples for (n, p) = {(self.n, self.p)} and {(other.n, other.p)}")

    def __add__(self, other):
        self._same(other)
        return SkewTriple(self.A + other.A, self.B + other.B, self.H + other.H)

    def __sub__(self, other):
        self._same(other)
        return SkewTriple(self.A - other.A, self.B - other.B, self.H - other.H)

    def __mul__(self, c):
        return SkewTriple(c * self.A, c * self.B, c * self.H)

    __rmul__ = __mul__

    def __neg__(self):
        return SkewTriple(-self.A, -self.B, -self.H)

    def max_abs(self):
        return float(max(np.max(np.abs(self.A), initial=0.0), np.max(np.abs(self.B)), np.max(np.abs(self.H), initial=0.0)))


class Projections(NamedTuple):
    """Orthogonal projections of an element onto the named subspaces."""

    a: SkewTriple
    b: SkewTriple
    h: SkewTriple
    k: SkewTriple
    m: SkewTriple
    n: SkewTriple


def _a(w):
    return SkewTriple(w.A, np.zeros_like(w.B), np.zeros_like(w.H))


def _b(w):
    return SkewTriple(np.zeros_like(w.A), w.B, np.zeros_like(w.H))


def _h(w):
    return SkewTriple(np.zeros_like(w.A), np.zeros_like(w.B), w.H)


def _m(w):
    return SkewTriple(w.A, w.B, np.zeros_like(w.H))


def _n(w):
    return SkewTriple(np.zeros_like(w.A), w.B, w.H)


def decompose_abh(w):
    """Block projections onto ``a, b, h`` and the derived ``k = h``, ``m = a + b``, ``n = b + h``."""
    h = _h(w)
    return Projections(a=_a(w), b=_b(w), h=h, k=h, m=_m(w), n=_n(w))


def _require_m(*ws):
    for w in ws:
        if np.any(w.H):
            raise ValueError("input must lie in m (zero H block)")


def biinvariant_inner(w1, w2):
    """``1/2 Tr(w1^T w2)`` of the assembled matrices, computed blockwise."""
    w1._same(w2)
    return float(0.5 * np.sum(w1.A * w2.A) + np.sum(w1.B * w2.B) + 0.5 * np.sum(w1.H * w2.H))


def apply_P(t, w):
    """``P_t w = t w_a + w_n``."""
    return SkewTriple(t * w.A, w.B, w.H)


def apply_P_inv(t, w):
    return SkewTriple(w.A / t, w.B, w.H)


def pt_inner(t, w1, w2):
    """Deformed inner product ``<w1, P_t w2>``."""
    return biinvariant_inner(w1, apply_P(check_t(t), w2))


def bracket(w1, w2):
    """Lie bracket of o(n) in block form."""
    w1._same(w2)
    A1, B1, H1 = w1.A, w1.B, w1.H
    A2, B2, H2 = w2.A, w2.B, w2.H
    return SkewTriple(
        skew_part(A1 @ A2 - A2 @ A1 + B2.T @ B1 - B1.T @ B2),
        B1 @ A2 + H1 @ B2 - B2 @ A1 - H2 @ B1,
        skew_part(H1 @ H2 - H2 @ H1 + B2 @ B1.T - B1 @ B2.T),
    )


def bracket_P(t, w1, w2):
    """``[w1, w2]_P = [w1, w2] - ad^dagger_{w1} w2 - ad^dagger_{w2} w1`` in block form.

    Only the ``b`` block differs from the Lie bracket:
    ``t B1 A2 + H1 B2 + (t - 2) B2 A1 - H2 B1``. Not antisymmetric;
    ``[w1, w2]_P - [w2, w1]_P = 2 [w1, w2]``.
    """
    t = check_t(t)
    plain = bracket(w1, w2)
    B = t * (w1.B @ w2.A) + w1.H @ w2.B + (t - 2) * (w2.B @ w1.A) - w2.H @ w1.B
    return SkewTriple(plain.A, B, plain.H)


def ad_dagger(t, w1, w2):
    """Adjoint of ``ad_{w1}`` under the deformed inner product, applied to ``w2``.

    ``a`` part: ``-[w1_a, w2_a] - (1/t)[w1_n, w2_n]_a``;
    ``n`` part: ``-[w1_a, w2_b] + t [w2_a, w1_b] - [w1_n, w2_n]_n``.
    """
    t = check_t(t)
    nn = bracket(_n(w1), _n(w2))
    a_part = -bracket(_a(w1), _a(w2)) - (1.0 / t) * _a(nn)
    n_part = -bracket(_a(w1), _b(w2)) + t * bracket(_a(w2), _b(w1)) - _n(nn)
    return _a(a_part) + _n(n_part)


def oneil_term(w3, w12_k):
    """``(ad^dagger_{w3} K)_m = -[w3_m, K]`` for ``K`` in ``k``; independent of ``t``."""
    return -bracket(_m(w3), w12_k)


def group_curvature(t, w1, w2, w3):
    """Curvature of SO(n) with the deformed left-invariant metric at the identity."""
    t = check_t(t)
    return (
        0.5 * bracket_P(t, bracket(w1, w2), w3)
        - 0.25 * bracket_P(t, w1, bracket_P(t, w2, w3))
        + 0.25 * bracket_P(t, w2, bracket_P(t, w1, w3))
    )


def hom_curvature(t, w1, w2, w3):
    """Horizontal lift of the curvature of SO(n)/SO(n-p) at the base coset.

    Inputs must lie in ``m``. The group curvature is corrected by the O'Neil
    terms ``1/2 ad^dagger_{w3}[w1,w2]_k - 1/4 ad^dagger_{w1}[w2,w3]_k
    + 1/4 ad^dagger_{w2}[w1,w3]_k`` and projected to ``m``.
    """
    _require_m(w1, w2, w3)
    total = (
        group_curvature(t, w1, w2, w3)
        + 0.5 * oneil_term(w3, _h(bracket(w1, w2)))
        - 0.25 * oneil_term(w1, _h(bracket(w2, w3)))
        + 0.25 * oneil_term(w2, _h(bracket(w1, w3)))
    )
    return _m(total)


def curvature_Pt_decomposed(w1, w2, w3):
    """Split the quotient curvature as ``R0 + (1-t) R1 + (1-t)^2 R2``.

    ``R0`` is the curvature of the normal homogeneous (``t = 1``) metric.
    """
    _require_m(w1, w2, w3)
    a1, a2, a3 = _a(w1), _a(w2), _a(w3)
    b1, b2, b3 = _b(w1), _b(w2), _b(w3)
    br12, br13, br23 = bracket(w1, w2), bracket(w1, w3), bracket(w2, w3)

    R0 = 0.25 * (
        _m(bracket(br12, w3))
        + 2.0 * bracket(_h(br12), w3)
        - bracket(_h(br23), w1)
        + bracket(_h(br13), w2)
    )
    mix23 = bracket(a2, b3) + bracket(a3, b2)
    mix13 = bracket(a1, b3) + bracket(a3, b1)
    R1 = (
        0.5 * (bracket(_a(br12), b3) + bracket(a3, _b(br12)))
        - 0.25 * _m(bracket(w1, mix23) + bracket(a1, _b(br23)) + bracket(_a(br23), b1))
        + 0.25 * _m(bracket(w2, mix13) + bracket(a2, _b(br13)) + bracket(_a(br13), b2))
    )
    R2 = 0.25 * (-bracket(a1, mix23) + bracket(a2, mix13))
    return _m(R0), _m(R1), _m(R2)


def combine_decomposition(t, parts):
    R0, R1, R2 = parts
    s = 1.0 - t
    return R0 + s * R1 + (s * s) * R2


def _sq(w):
    return biinvariant_inner(w, w)


def gz_sectional(t, w1, w2):
    """Sectional numerator ``<R_{w1,w2} w1, P_t w2>`` as a weighted sum of squares."""
    t = check_t(t)
    _require_m(w1, w2)
    a1, a2, n1, n2 = _a(w1), _a(w2), _n(w1), _n(w2)
    nn = bracket(n1, n2)
    aa = bracket(a1, a2)
    return (
        0.25 * _sq(_n(nn) + t * bracket(a1, n2) + t * bracket(n1, a2))
        + 0.25 * _sq(_a(nn) + (t * t) * aa)
        + 0.25 * t * (1 - t) ** 3 * _sq(aa)
        + 0.75 * (1 - t) * _sq(_a(nn) + t * aa)
        + 0.75 * _sq(_h(bracket(w1, w2)))
    )


def horizontal_lift(frame, eta):
    """Horizontal lift ``(eta | -Y eta^T Yperp)`` of a tangent vector at ``U = (Y | Yperp)``."""
    eta = np.asarray(eta, dtype=np.float64)
    if eta.shape != frame.Y.shape:
        raise ValueError(f"eta shape {eta.shape} does not match Y {frame.Y.shape}")
    if tangency_residual(frame.Y, eta) > 1e-8 * max(1.0, float(np.linalg.norm(eta))):
        raise ValueError("eta is not tangent at Y")
    return np.hstack([eta, -frame.Y @ (eta.T @ frame.Yperp)])


def lift_triple(frame, eta):
    """``U^T`` times the horizontal lift, as a triple (``H`` block zero)."""
    return SkewTriple.from_matrix(frame.U.T @ horizontal_lift(frame, eta), frame.p)


def triple_from_coords(x):
    return SkewTriple(x.A, x.B, np.zeros((x.n - x.p, x.n - x.p)))


def coords_from_triple(w):
    _require_m(w)
    return TangentCoords(skew_part(w.A), w.B)


def random_triple(n, p, rng, in_m=False):
    A = rng.standard_normal((p, p))
    H = rng.standard_normal((n - p, n - p))
    H = np.zeros_like(H) if in_m else H - H.T
    return SkewTriple(A - A.T, rng.standard_normal((n - p, p)), H)


def stiefel_projection(frame, w):
    """Ambient tangent vector ``Y A + Yperp B`` pushed forward from ``U w``."""
    _require_m(w)
    return frame.Y @ w.A + frame.Yperp @ w.B
