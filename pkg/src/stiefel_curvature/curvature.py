"""Riemannian, Ricci, scalar and sectional curvature of St(p, n) under the alpha-metric.

Sign convention: ``R_{XY}Z = nabla_{[X,Y]}Z - nabla_X nabla_Y Z + nabla_Y nabla_X Z``,
so the sectional numerator is ``<R_{xi,eta} xi, eta>`` and the round sphere
has positive curvature.

Two independent routes are provided:

* :func:`curvature_coords` evaluates the closed-form block expressions for
  ``(A_R, B_R)``.
* :func:`curvature_ambient_analytic` / :func:`curvature_ambient_fd` evaluate
  the global formula ``-D_xi Gamma(eta, phi) + D_eta Gamma(xi, phi)
  - Gamma(xi, Gamma(eta, phi)) + Gamma(eta, Gamma(xi, phi))`` from the
  Christoffel function, with the derivative of ``Gamma`` in closed form or by
  central differences along a retraction curve.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .matlin import skew_part
from .stiefel import (
    TangentCoords,
    _check_coords_match,
    check_alpha,
    christoffel,
    metric_inner,
    retract_polar,
    tangency_residual,
)

__all__ = [
    "SectionEval",
    "NUMERATOR_FORMS",
    "curvature_coords",
    "dchristoffel",
    "curvature_ambient_analytic",
    "curvature_ambient_fd",
    "ricci",
    "ricci_trace",
    "ricci_eigenvalues",
    "scalar_curvature",
    "scalar_curvature_trace",
    "coordinate_basis",
    "orthonormal_basis",
    "sectional_numerator",
    "wedge_norm2",
    "sectional",
]

NUMERATOR_FORMS = ("sumsq", "traceform", "sumsq2")
DEGENERATE_WEDGE = 1e-10
TANGENCY_TOL = 1e-8


def curvature_coords(alpha, x1, x2, x3):
    """Block coordinates of ``R_{x1,x2} x3``.

    Parameters
    ----------
    alpha : float
        Metric parameter.
    x1, x2, x3 : TangentCoords
        Tangent vectors in a common frame.

    Returns
    -------
    TangentCoords
        ``(A_R, B_R)``; ``A_R`` is re-antisymmetrized so it is exactly skew.
    """
    _check_coords_match(x1, x2, x3)
    a = check_alpha(alpha)
    A1, B1 = x1.A, x1.B
    A2, B2 = x2.A, x2.B
    A3, B3 = x3.A, x3.B
    B1t, B2t, B3t = B1.T, B2.T, B3.T
    A12 = A1 @ A2 - A2 @ A1

    A_R = (
        (1 - 2 * a) / 4 * (A1 @ B3t @ B2 - A2 @ B3t @ B1 - B1t @ B3 @ A2 + B2t @ B3 @ A1)
        + (1 - a) / 2 * (A3 @ B1t @ B2 - A3 @ B2t @ B1 - B1t @ B2 @ A3 + B2t @ B1 @ A3)
        + 0.25 * (A12 @ A3 - A3 @ A12 - A1 @ B2t @ B3 + A2 @ B1t @ B3 + B3t @ B1 @ A2 - B3t @ B2 @ A1)
    )
    B_R = (
        (2 * a * a - a) / 2 * (B1 @ A3 @ A2 - B2 @ A3 @ A1)
        + (a * a - a) * (B3 @ A1 @ A2 - B3 @ A2 @ A1)
        + (1 - a) * (B3 @ B1t @ B2 - B3 @ B2t @ B1)
        + (a - 2) / 2 * (B1 @ B2t @ B3 - B2 @ B1t @ B3)
        + a / 2 * (B1 @ A2 @ A3 - B1 @ B3t @ B2 - B2 @ A1 @ A3 + B2 @ B3t @ B1)
    )
    return TangentCoords(skew_part(A_R), B_R)


def dchristoffel(alpha, Y, xi, eta, phi):
    """Directional derivative ``(D_xi Gamma)(eta, phi)`` of the Christoffel function in ``Y``."""
    S = eta.T @ phi + phi.T @ eta
    M = eta @ phi.T + phi @ eta.T
    MY = M @ Y
    proj_Mxi = M @ xi - Y @ (Y.T @ (M @ xi))
    return 0.5 * (xi @ S) + (1.0 - alpha) * (proj_Mxi - xi @ (Y.T @ MY) - Y @ (xi.T @ MY))


def _check_tangent(Y, *ws):
    for w in ws:
        w = np.asarray(w, dtype=np.float64)
        if w.shape != Y.shape:
            raise ValueError(f"vector shape {w.shape} does not match Y {Y.shape}")
        res = tangency_residual(Y, w)
        if res > TANGENCY_TOL * max(1.0, float(np.linalg.norm(w))):
            raise ValueError(f"vector is not tangent at Y (residual {res:.3e})")


def _assemble(alpha, Y, xi, eta, phi, d_xi, d_eta, ordering):
    if ordering == "first":
        quad = -christoffel(alpha, Y, xi, christoffel(alpha, Y, eta, phi)) + christoffel(
            alpha, Y, eta, christoffel(alpha, Y, xi, phi)
        )
    elif ordering == "second":
        quad = -christoffel(alpha, Y, christoffel(alpha, Y, phi, eta), xi) + christoffel(
            alpha, Y, christoffel(alpha, Y, phi, xi), eta
        )
    else:
        raise ValueError(f"unknown ordering {ordering!r}")
    return -d_xi + d_eta + quad


def curvature_ambient_analytic(alpha, Y, xi, eta, phi, ordering="first"):
    """``R_{xi,eta} phi`` as an ambient ``n x p`` matrix from the Christoffel function.

    ``ordering`` selects which of the two equivalent arrangements of the
    quadratic ``Gamma`` terms is used.
    """
    alpha = check_alpha(alpha)
    Y = np.asarray(Y, dtype=np.float64)
    _check_tangent(Y, xi, eta, phi)
    d_xi = dchristoffel(alpha, Y, xi, eta, phi)
    d_eta = dchristoffel(alpha, Y, eta, xi, phi)
    return _assemble(alpha, Y, xi, eta, phi, d_xi, d_eta, ordering)


def _fd_dgamma(alpha, frame, direction, u, v, step):
    norm = float(np.linalg.norm(direction))
    if norm == 0.0:
        return np.zeros_like(frame.Y)
    s = step / norm
    plus = retract_polar(frame, direction, s).Y
    minus = retract_polar(frame, direction, -s).Y
    return (christoffel(alpha, plus, u, v) - christoffel(alpha, minus, u, v)) / (2 * s)


def curvature_ambient_fd(alpha, frame, xi, eta, phi, step=1e-4):
    """Same as :func:`curvature_ambient_analytic` with ``D Gamma`` by central differences.

    The derivative of ``Gamma`` along ``xi`` is taken along the polar
    retraction curve through ``Y`` with velocity ``xi``; ``step`` is relative to
    ``||xi||_F``. Agreement with the analytic route is ``O(step^2)``.
    """
    alpha = check_alpha(alpha)
    if not 1e-6 <= step <= 1e-2:
        raise ValueError(f"step must lie in [1e-6, 1e-2], got {step}")
    Y = frame.Y
    _check_tangent(Y, xi, eta, phi)
    d_xi = _fd_dgamma(alpha, frame, xi, eta, phi, step)
    d_eta = _fd_dgamma(alpha, frame, eta, xi, phi, step)
    return _assemble(alpha, Y, xi, eta, phi, d_xi, d_eta, "first")


def ricci(alpha, n, p, x1, x2):
    """Closed-form Ricci curvature ``Ric(x1, x2)``.

    ``((2-p)/4 + (p-n) alpha^2) Tr(A1 A2) + ((1-p) alpha + n - 2) Tr(B1^T B2)``,
    with the plain product trace in the first term.
    """
    if p <= 1:
        raise ValueError("Ricci formula needs p > 1")
    _check_coords_match(x1, x2)
    if (x1.n, x1.p) != (n, p):
        raise ValueError(f"coords are for St({x1.p},{x1.n}), not St({p},{n})")
    a = check_alpha(alpha)
    return float(
        ((2 - p) / 4 + (p - n) * a * a) * np.trace(x1.A @ x2.A)
        + ((1 - p) * a + (n - 2)) * np.sum(x1.B * x2.B)
    )


def ricci_eigenvalues(alpha, n, p):
    """Eigenvalues of the Ricci map on the A-block and on the B-block."""
    a = check_alpha(alpha)
    return (p - 2) / (4 * a) + (n - p) * a, (1 - p) * a + (n - 2)


def coordinate_basis(n, p):
    """Raw coordinate basis: ``(E_ij - E_ji, 0)`` for ``i < j`` then ``(0, e_ij)``."""
    basis = []
    for i in range(p):
        for j in range(i + 1, p):
            A = np.zeros((p, p))
            A[i, j], A[j, i] = 1.0, -1.0
            basis.append(TangentCoords(A, np.zeros((n - p, p))))
    for i in range(n - p):
        for j in range(p):
            B = np.zeros((n - p, p))
            B[i, j] = 1.0
            basis.append(TangentCoords(np.zeros((p, p)), B))
    return basis


def orthonormal_basis(alpha, n, p):
    """Basis orthonormal for the alpha-metric: A-blocks scaled by ``1/sqrt(2 alpha)``."""
    scale = 1.0 / np.sqrt(2.0 * check_alpha(alpha))
    return [TangentCoords(scale * b.A, b.B) if b.A.any() else b for b in coordinate_basis(n, p)]


def ricci_trace(alpha, x1, x3):
    """Ricci curvature as the trace of ``x2 -> R_{x1,x2} x3`` in the raw coordinate basis."""
    _check_coords_match(x1, x3)
    total = 0.0
    # the basis is Frobenius-orthogonal, so coefficients are normalized projections
    for b in coordinate_basis(x1.n, x1.p):
        r = curvature_coords(alpha, x1, b, x3)
        total += (np.sum(r.A * b.A) + np.sum(r.B * b.B)) / (np.sum(b.A * b.A) + np.sum(b.B * b.B))
    return float(total)


def scalar_curvature(alpha, n, p):
    """Closed-form scalar curvature (constant over the manifold)."""
    if p <= 1:
        raise ValueError("scalar curvature formula needs p > 1")
    a = check_alpha(alpha)
    return ((1 - p) * a + n - 2) * (n - p) * p + ((n - p) * a + (p - 2) / (4 * a)) * p * (p - 1) / 2


def scalar_curvature_trace(alpha, n, p):
    """Scalar curvature as ``sum_i Ric(e_i, e_i)`` over a metric-orthonormal basis, Ricci by trace."""
    return float(sum(ricci_trace(alpha, e, e) for e in orthonormal_basis(alpha, n, p)))


def sectional_numerator(alpha, x1, x2, form="sumsq"):
    """Sectional curvature numerator ``<R_{x1,x2} x1, x2>``.

    ``form`` is one of ``"sumsq"`` (weighted sum of squares, default),
    ``"traceform"`` (trace polynomial) or ``"sumsq2"`` (the expanded sum of
    squares with the cross term written out). All three agree identically.
    """
    _check_coords_match(x1, x2)
    a = check_alpha(alpha)
    A1, B1, A2, B2 = x1.A, x1.B, x2.A, x2.B
    C = A1 @ A2 - A2 @ A1
    D = B2.T @ B1 - B1.T @ B2
    if form == "sumsq":
        return float(
            a / 4 * np.sum(np.square(C + (3 - 4 * a) * D))
            + a * a * np.sum(np.square(B1 @ A2 - B2 @ A1))
            + 0.5 * np.sum(np.square(B1 @ B2.T - B2 @ B1.T))
            + (1 - 2 * a) ** 3 / 2 * np.sum(np.square(D))
        )
    if form == "sumsq2":
        return float(
            a / 4 * np.sum(np.square(C))
            + a * (3 - 4 * a) / 2 * np.sum(C * D)
            + (2 - 3 * a) / 4 * np.sum(np.square(D))
            + a * a * np.sum(np.square(B1 @ A2 - B2 @ A1))
            + 0.5 * np.sum(np.square(B1 @ B2.T - B2 @ B1.T))
        )
    if form == "traceform":
        B21 = B2.T @ B1
        B12 = B1.T @ B2
        first = np.trace(
            (2 - 3 * a) / 2 * B21 @ B12
            + (3 * a - 4) / 2 * B21 @ B21
            + (B2.T @ B2) @ (B1.T @ B1)
            - a / 4 * C @ C
        )
        A12 = A1 @ A2
        second = a * np.trace(
            (4 * a - 3) * A12 @ B21
            + (3 - 2 * a) * A12 @ B12
            - a * (A2 @ A2) @ (B1.T @ B1)
            - a * (A1 @ A1) @ (B2.T @ B2)
        )
        return float(first + second)
    raise ValueError(f"unknown numerator form {form!r}, expected one of {NUMERATOR_FORMS}")


def wedge_norm2(alpha, x1, x2):
    """``||x1||^2 ||x2||^2 - <x1, x2>^2`` in the alpha-metric."""
    return metric_inner(alpha, x1, x1) * metric_inner(alpha, x2, x2) - metric_inner(alpha, x1, x2) ** 2


@dataclass(frozen=True)
class SectionEval:
    """A 2-plane with its curvature numerator, wedge and sectional curvature.

    ``kappa`` is ``None`` when the plane is degenerate.
    """

    xi: TangentCoords
    eta: TangentCoords
    numerator: float
    wedge: float
    kappa: Optional[float]

    @property
    def defined(self):
        return self.kappa is not None


def sectional(alpha, x1, x2, form="sumsq"):
    """Sectional curvature of the plane spanned by ``x1, x2``.

    The plane counts as degenerate when the wedge is at most ``1e-10`` times
    ``||x1||^2 ||x2||^2``; the numerator and wedge are still reported.
    """
    num = sectional_numerator(alpha, x1, x2, form)
    n1 = metric_inner(alpha, x1, x1)
    n2 = metric_inner(alpha, x2, x2)
    wedge = n1 * n2 - metric_inner(alpha, x1, x2) ** 2
    kappa = num / wedge if wedge > DEGENERATE_WEDGE * n1 * n2 and wedge > 0 else None
    return SectionEval(x1, x2, num, wedge, kappa)
