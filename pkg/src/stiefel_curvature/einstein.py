"""Einstein parameters of the alpha-metric on St(p, n).

The Ricci map acts on the A-block by ``(p-2)/(4 alpha) + (n-p) alpha`` and on
the B-block by ``(1-p) alpha + n - 2``. The metric is Einstein exactly when
the two agree, i.e. when ``(n-1) alpha^2 - (n-2) alpha + (p-2)/4 = 0``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .curvature import ricci, ricci_eigenvalues, ricci_trace
from .stiefel import check_alpha, metric_inner, random_tangent

__all__ = ["EinsteinSolution", "einstein_alphas", "einstein_residual", "einstein_lambda", "verify_einstein"]


@dataclass(frozen=True)
class EinsteinSolution:
    n: int
    p: int
    roots: tuple
    discriminant: float


def _check_np(n, p):
    if not (isinstance(n, (int, np.integer)) and isinstance(p, (int, np.integer))):
        raise TypeError("n and p must be integers")
    if p < 2:
        raise ValueError(f"Einstein condition needs p >= 2, got p={p}")
    if p >= n:
        raise ValueError(f"need p < n, got n={n}, p={p}")


def einstein_residual(alpha, n, p):
    """``(n-1) alpha^2 - (n-2) alpha + (p-2)/4``."""
    return (n - 1) * alpha * alpha - (n - 2) * alpha + (p - 2) / 4


def einstein_alphas(n, p):
    """Positive roots of the Einstein quadratic, ascending.

    The larger root comes from ``q = ((n-2) + sqrt(disc)) / 2`` as ``q/(n-1)``
    and the smaller from the product of roots as ``c/q``, which avoids
    cancellation when ``(p-2)/4`` is small. For ``p = 2`` the zero root is
    dropped, leaving ``(n-2)/(n-1)``.
    """
    _check_np(n, p)
    a, b, c = n - 1, -(n - 2), (p - 2) / 4
    disc = float(b * b - 4 * a * c)
    if disc < 0:
        raise ValueError(f"no real Einstein parameter for n={n}, p={p}")
    q = -(b + math.copysign(math.sqrt(disc), b)) / 2
    big = q / a
    roots = (big,) if c == 0 else (c / q, big)
    return EinsteinSolution(int(n), int(p), tuple(float(r) for r in roots), disc)


def einstein_lambda(alpha, n, p):
    """Einstein constant, taken from the B-block eigenvalue of the Ricci map."""
    return ricci_eigenvalues(alpha, n, p)[1]


def verify_einstein(alpha, n, p, trials=1000, seed=0, method="trace"):
    """Max of ``|Ric(xi, eta) - lambda <xi, eta>|`` over random tangent pairs.

    ``method="trace"`` computes Ricci as a trace of the curvature tensor,
    independently of the closed form; ``"closed"`` uses the closed form.
    Small at an Einstein parameter, order one elsewhere.
    """
    _check_np(n, p)
    alpha = check_alpha(alpha)
    if method not in ("trace", "closed"):
        raise ValueError(f"unknown method {method!r}")
    lam = einstein_lambda(alpha, n, p)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        xi = random_tangent(n, p, rng)
        eta = random_tangent(n, p, rng)
        ric = ricci_trace(alpha, xi, eta) if method == "trace" else ricci(alpha, n, p, xi, eta)
        worst = max(worst, abs(ric - lam * metric_inner(alpha, xi, eta)))
    return worst
