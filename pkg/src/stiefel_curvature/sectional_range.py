"""Sectional curvature range of St(p, n): representative sections, interval tables, optimizer.

Corner sections are explicit planes ``(A1, B1, A2, B2)`` whose sectional
curvature has a closed form in ``alpha``. Their extreme values give an interval
that is always contained in the curvature range; for ``p = 2`` the interval is
the exact range. :func:`optimize_range` searches the space of planes
numerically with Nelder-Mead, warm-started from every applicable corner.
"""

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .curvature import SectionEval, sectional
from .stiefel import TangentCoords, check_alpha

__all__ = [
    "CornerSection",
    "RangeReport",
    "corner_sections",
    "all_corner_labels",
    "frak_c",
    "gamma_min",
    "frak_l",
    "interval_table",
    "p2_range",
    "optimize_range",
    "sweep",
    "sweep_rows_to_csv",
    "SWEEP_COLUMNS",
    "worker_count",
]

ALPHA_L_MAX = 0.7
PENALTY = 1e6
WEDGE_FLOOR = 1e-8
CONTAINMENT_SLACK = 1e-3


def frak_c(alpha, gamma):
    """Sectional curvature of the one-parameter family of planes used to define ``l(alpha)``."""
    a = check_alpha(alpha)
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")
    return (a / 2 + a * (4 * a - 3) * gamma + (2 - 3 * a) * gamma * gamma / 2) / (2 * a + gamma) ** 2


def gamma_min(alpha):
    """Stationary point ``(1 + 6a - 8a^2)/(7 - 10a)`` of ``frak_c``, or ``None`` when it is not a valid ``gamma``.

    ``None`` is returned at ``alpha = 7/10`` (pole) and where the value is negative.
    """
    a = check_alpha(alpha)
    den = 7 - 10 * a
    if den == 0:
        return None
    g = (1 + 6 * a - 8 * a * a) / den
    return g if g >= 0 else None


def frak_l(alpha):
    """``frak_c(gamma_min(alpha))`` for ``0 < alpha <= 7/10``, extended to ``-1/20`` at ``7/10``.

    Evaluated in the variable ``s = 1/gamma`` so that the approach to the
    removable singularity at ``7/10`` is smooth.
    """
    a = check_alpha(alpha)
    if a > ALPHA_L_MAX:
        raise ValueError(f"l(alpha) is defined for alpha <= 7/10, got {a}")
    if a == ALPHA_L_MAX:
        return -1.0 / 20
    s = (7 - 10 * a) / (1 + 6 * a - 8 * a * a)
    return (a / 2 * s * s + a * (4 * a - 3) * s + (2 - 3 * a) / 2) / (2 * a * s + 1) ** 2


@dataclass(frozen=True)
class CornerSection:
    """A representative plane with closed-form sectional curvature.

    ``builder(n, p, alpha)`` returns the two tangent vectors, ``applies(n, p,
    alpha)`` the table condition, and ``kappa(alpha)`` the curvature.
    """

    label: str
    formula: str
    builder: Callable
    applies: Callable
    kappa: Callable

    def build(self, n, p, alpha):
        if not self.applies(n, p, alpha):
            raise ValueError(f"corner {self.label} does not apply to n={n}, p={p}, alpha={alpha}")
        return self.builder(n, p, alpha)


def _E(p, *terms):
    """Sum of ``c * (E_ij - E_ji)`` for 1-based ``(c, i, j)`` terms."""
    out = np.zeros((p, p))
    for c, i, j in terms:
        out[i - 1, j - 1] += c
        out[j - 1, i - 1] -= c
    return out


def _e(n, p, *terms):
    """Sum of ``c * e_ij`` in the ``(n-p) x p`` block for 1-based ``(c, i, j)`` terms."""
    out = np.zeros((n - p, p))
    for c, i, j in terms:
        out[i - 1, j - 1] += c
    return out


def _pair(n, p, A1, B1, A2, B2):
    zA = np.zeros((p, p))
    zB = np.zeros((n - p, p))
    return (
        TangentCoords(zA if A1 is None else A1, zB if B1 is None else B1),
        TangentCoords(zA if A2 is None else A2, zB if B2 is None else B2),
    )


def _zero_shared_a(n, p, a):
    A = _E(p, (1, 1, 2))
    return _pair(n, p, A, _e(n, p, (2, 1, 3)), A, _e(n, p, (-a, 1, 3)))


def _l_section(n, p, a):
    r = math.sqrt(gamma_min(a))
    return _pair(n, p, _E(p, (1, 1, 2)), _e(n, p, (r, 1, 1)), _E(p, (1, 2, 3)), _e(n, p, (r, 1, 3)))


def _always(n, p, a):
    return True


def _p3_n4(n, p, a):
    return n >= 4 and p >= 3


def _two_b_rows(n, p, a):
    return n >= 4 and p <= n - 2


def _p3(n, p, a):
    return p >= 3


def _p4(n, p, a):
    return p >= 4


def _l_applies(n, p, a):
    return p >= 3 and a < ALPHA_L_MAX


_CORNERS = (
    CornerSection("k0_shared_a", "0", _zero_shared_a, _p3_n4, lambda a: 0.0),
    CornerSection(
        "k0_b",
        "0",
        lambda n, p, a: _pair(n, p, None, _e(n, p, (1, 1, 1)), None, _e(n, p, (1, 2, 2))),
        _two_b_rows,
        lambda a: 0.0,
    ),
    CornerSection(
        "k1",
        "1",
        lambda n, p, a: _pair(n, p, None, _e(n, p, (1, 1, 1)), None, _e(n, p, (1, 2, 1))),
        _two_b_rows,
        lambda a: 1.0,
    ),
    CornerSection(
        "k_inv_1p2a",
        "1/(2a+1)",
        lambda n, p, a: _pair(n, p, _E(p, (1, 1, 2)), _e(n, p, (-1, 1, p)), _E(p, (1, 1, p)), _e(n, p, (1, 1, 2))),
        _p3,
        lambda a: 1 / (2 * a + 1),
    ),
    CornerSection(
        "k_inv_8a",
        "1/(8a)",
        lambda n, p, a: _pair(n, p, _E(p, (1, 1, 2)), None, _E(p, (1, 2, 3)), None),
        _p3,
        lambda a: 1 / (8 * a),
    ),
    CornerSection(
        "k_inv_4a",
        "1/(4a)",
        lambda n, p, a: _pair(
            n,
            p,
            _E(p, (1, 1, 2), (1, p - 1, p)),
            None,
            _E(p, (1, 1, p - 1), (-1, 2, p)),
            None,
        ),
        _p4,
        lambda a: 1 / (4 * a),
    ),
    CornerSection(
        "k_a_half",
        "a/2",
        lambda n, p, a: _pair(n, p, _E(p, (1, 1, 2)), None, None, _e(n, p, (1, 1, 1))),
        _always,
        lambda a: a / 2,
    ),
    CornerSection(
        "k_2m3a_half",
        "(2-3a)/2",
        lambda n, p, a: _pair(n, p, None, _e(n, p, (1, 1, 1)), None, _e(n, p, (1, 1, 2))),
        _always,
        lambda a: (2 - 3 * a) / 2,
    ),
    CornerSection(
        "k_4m3a_half",
        "(4-3a)/2",
        lambda n, p, a: _pair(n, p, None, _e(n, p, (1, 1, 1), (1, 2, 2)), None, _e(n, p, (1, 1, 2), (-1, 2, 1))),
        _two_b_rows,
        lambda a: (4 - 3 * a) / 2,
    ),
    CornerSection("k_frak_l", "l(a)", _l_section, _l_applies, frak_l),
)


def all_corner_labels():
    return [c.label for c in _CORNERS]


def corner_sections(n, p, alpha=None):
    """Corner sections whose table condition holds for ``(n, p)``.

    With ``alpha`` given, conditions on ``alpha`` are applied too; otherwise
    only the ``(n, p)`` part is checked (``alpha`` conditions evaluated at a
    small value where they are all satisfied).
    """
    if p < 2 or n <= p:
        raise ValueError(f"need 2 <= p < n, got n={n}, p={p}")
    probe = 0.25 if alpha is None else check_alpha(alpha)
    return [c for c in _CORNERS if c.applies(n, p, probe)]


def p2_range(n, alpha):
    """Exact sectional curvature range of St(2, n)."""
    a = check_alpha(alpha)
    if n < 3:
        raise ValueError(f"need n >= 3 for p = 2, got n={n}")
    if n == 3:
        x, y = a / 2, (2 - 3 * a) / 2
        return (min(x, y), max(x, y))
    if a <= 2 / 3:
        return (0.0, (4 - 3 * a) / 2)
    if a <= 2:
        return ((2 - 3 * a) / 2, 1.0)
    return ((2 - 3 * a) / 2, a / 2)


def _lo_l(a):
    return frak_l(a)


def _lo_2m3a(a):
    return (2 - 3 * a) / 2


def _zero(a):
    return 0.0


_MID_ROWS = (
    (0.5, _zero, lambda a: (4 - 3 * a) / 2),
    (2 / 3, _lo_l, lambda a: (4 - 3 * a) / 2),
    (0.7, _lo_l, lambda a: 1.0),
    (2.0, _lo_2m3a, lambda a: 1.0),
    (math.inf, _lo_2m3a, lambda a: a / 2),
)

_TABLE = {
    "4,3": (
        (1 / 6, _zero, lambda a: 1 / (8 * a)),
        (0.5, _zero, lambda a: 1 / (1 + 2 * a)),
        (0.7, _lo_l, lambda a: 1 / (1 + 2 * a)),
        ((math.sqrt(17) - 1) / 4, _lo_2m3a, lambda a: 1 / (1 + 2 * a)),
        (math.inf, _lo_2m3a, lambda a: a / 2),
    ),
    "n,3": ((((4 - math.sqrt(13)) / 6), _zero, lambda a: 1 / (8 * a)),) + _MID_ROWS,
    "n,p": ((((4 - math.sqrt(10)) / 6), _zero, lambda a: 1 / (4 * a)),) + _MID_ROWS,
    "n,n-1": (
        (0.5, _zero, lambda a: 1 / (4 * a)),
        (0.7, _lo_l, lambda a: 1 / (1 + 2 * a)),
        ((math.sqrt(17) - 1) / 4, _lo_2m3a, lambda a: 1 / (1 + 2 * a)),
        (math.inf, _lo_2m3a, lambda a: a / 2),
    ),
}


def _table_column(n, p):
    if (n, p) == (4, 3):
        return "4,3"
    if p == 3 and n >= 5:
        return "n,3"
    if p >= 4 and n - 2 >= p:
        return "n,p"
    if p >= 4 and p == n - 1:
        return "n,n-1"
    raise ValueError(f"no interval table entry for n={n}, p={p}")


def interval_table(n, p, alpha):
    """Interval known to lie inside the sectional curvature range.

    Rows are selected by ``alpha`` against upper-inclusive breakpoints. For
    ``p = 2`` the exact range from :func:`p2_range` is returned.
    """
    a = check_alpha(alpha)
    if p == 2 and n >= 3:
        return p2_range(n, a)
    if p < 2 or n <= p:
        raise ValueError(f"need 2 <= p < n, got n={n}, p={p}")
    for upper, lo, hi in _TABLE[_table_column(n, p)]:
        if a <= upper:
            return (float(lo(a)), float(hi(a)))
    raise AssertionError("unreachable: last breakpoint is infinite")


# optimizer


def _layout(n, p):
    rows, cols = np.tril_indices(p, k=-1)
    k = rows.size + (n - p) * p
    return rows, cols, k


def _unpack(vec, n, p, rows, cols, k):
    def one(v):
        A = np.zeros((p, p))
        A[rows, cols] = v[: rows.size]
        A[cols, rows] = -v[: rows.size]
        return A, v[rows.size:].reshape(n - p, p)

    return one(vec[:k]) + one(vec[k:])


def _pack(x1, x2):
    return np.concatenate([x1.to_vector(), x2.to_vector()])


def _kappa_fast(alpha, A1, B1, A2, B2):
    """Sectional curvature of the plane, or ``None`` if degenerate after normalization."""
    n1 = alpha * np.sum(A1 * A1) + np.sum(B1 * B1)
    n2 = alpha * np.sum(A2 * A2) + np.sum(B2 * B2)
    if n1 <= 0 or n2 <= 0 or not (np.isfinite(n1) and np.isfinite(n2)):
        return None
    c = (alpha * np.sum(A1 * A2) + np.sum(B1 * B2)) / math.sqrt(n1 * n2)
    wedge = 1.0 - c * c
    if wedge < WEDGE_FLOOR:
        return None
    C = A1 @ A2 - A2 @ A1
    D = B2.T @ B1 - B1.T @ B2
    num = (
        alpha / 4 * np.sum(np.square(C + (3 - 4 * alpha) * D))
        + alpha * alpha * np.sum(np.square(B1 @ A2 - B2 @ A1))
        + 0.5 * np.sum(np.square(B1 @ B2.T - B2 @ B1.T))
        + (1 - 2 * alpha) ** 3 / 2 * np.sum(np.square(D))
    )
    return float(num / (n1 * n2 * wedge))


@dataclass(frozen=True)
class RangeReport:
    n: int
    p: int
    alpha: float
    kappa_min: float
    kappa_max: float
    argmin: SectionEval
    argmax: SectionEval
    restarts_used: int
    seed: int
    corner_values: dict = field(default_factory=dict)


def _local_search(fun, x0, maxiter):
    res = minimize(
        fun,
        x0,
        method="Nelder-Mead",
        options={"maxiter": maxiter, "xatol": 1e-10, "fatol": 1e-10, "adaptive": False},
    )
    return res.x, res.fun


def optimize_range(n, p, alpha, restarts=50, seed=0, maxiter=2000, warm_start=True):
    """Numerical min and max of the sectional curvature over all planes.

    Each start is searched twice with Nelder-Mead over the raw coordinate
    vector of the two spanning vectors, once for the minimum and once for the
    maximum. Starts are every applicable corner section followed by
    ``restarts`` random vectors; random start ``i`` uses a Philox generator
    keyed by ``seed + i``. ``warm_start=False`` drops the corner starts.
    """
    a = check_alpha(alpha)
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    rows, cols, k = _layout(n, p)

    def kappa(vec):
        return _kappa_fast(a, *_unpack(vec, n, p, rows, cols, k))

    def f_min(vec):
        v = kappa(vec)
        return PENALTY if v is None else v

    def f_max(vec):
        v = kappa(vec)
        return PENALTY if v is None else -v

    corners = corner_sections(n, p, a)
    starts = [_pack(*c.build(n, p, a)) for c in corners] if warm_start else []
    for i in range(restarts):
        rng = np.random.Generator(np.random.Philox(seed + i))
        starts.append(rng.standard_normal(2 * k))

    best_min, best_max = (math.inf, None), (-math.inf, None)
    for x0 in starts:
        x, fx = _local_search(f_min, x0, maxiter)
        if fx < PENALTY and fx < best_min[0]:
            best_min = (fx, x)
        x, fx = _local_search(f_max, x0, maxiter)
        if fx < PENALTY and -fx > best_max[0]:
            best_max = (-fx, x)
    if best_min[1] is None or best_max[1] is None:
        raise RuntimeError("every start converged to a degenerate plane")

    def evaluate(vec):
        x1 = TangentCoords.from_vector(vec[:k], n, p)
        x2 = TangentCoords.from_vector(vec[k:], n, p)
        return sectional(a, x1, x2)

    argmin, argmax = evaluate(best_min[1]), evaluate(best_max[1])
    return RangeReport(
        n=n,
        p=p,
        alpha=a,
        kappa_min=argmin.kappa,
        kappa_max=argmax.kappa,
        argmin=argmin,
        argmax=argmax,
        restarts_used=restarts,
        seed=seed,
        corner_values={c.label: float(c.kappa(a)) for c in corners},
    )


# sweep

SWEEP_COLUMNS = ("alpha", "kappa_min", "kappa_max", "interval_lo", "interval_hi", "contained", "status")


def worker_count(jobs):
    """Worker pool size: ``STIEFEL_THREADS`` if set, else the CPU count, never more than ``jobs``."""
    env = os.environ.get("STIEFEL_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    if cap < 1:
        raise ValueError(f"STIEFEL_THREADS must be >= 1, got {env}")
    return max(1, min(cap, jobs))


def _sweep_row(args):
    n, p, a, restarts, seed, labels = args
    row = {"alpha": a}
    try:
        rep = optimize_range(n, p, a, restarts=restarts, seed=seed)
        lo, hi = interval_table(n, p, a)
        row.update(
            kappa_min=rep.kappa_min,
            kappa_max=rep.kappa_max,
            interval_lo=lo,
            interval_hi=hi,
            contained=bool(lo >= rep.kappa_min - CONTAINMENT_SLACK and hi <= rep.kappa_max + CONTAINMENT_SLACK),
            status="ok",
        )
        for label in labels:
            row[label] = rep.corner_values.get(label)
    except (ValueError, RuntimeError) as exc:
        row["status"] = f"error: {exc}"
    return row


def sweep(n, p, alpha_grid, restarts=50, seed=0, workers=None):
    """One optimized range per ``alpha`` with the interval table and corner values overlaid.

    Every grid point uses the same ``seed``, so a single-point grid reproduces
    :func:`optimize_range`. Rows come back in grid order.
    """
    grid = [check_alpha(a) for a in alpha_grid]
    if not grid:
        raise ValueError("alpha grid is empty")
    labels = [c.label for c in corner_sections(n, p)]
    jobs = [(n, p, a, restarts, seed, labels) for a in grid]
    workers = worker_count(len(jobs)) if workers is None else workers
    if workers == 1:
        rows = [_sweep_row(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    return rows, list(SWEEP_COLUMNS) + labels


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def sweep_rows_to_csv(rows, columns, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
