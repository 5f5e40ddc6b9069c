"""Small dense real-matrix helpers and trace identities for linear operators on matrix spaces.

Matrices are plain ``numpy.ndarray`` objects of dtype float64. The helpers add
shape checking with readable errors; the heavy lifting is numpy.
"""

import itertools

import numpy as np

__all__ = [
    "as_matrix",
    "skew_from_lower",
    "skew_part",
    "is_skew",
    "matmul",
    "transpose",
    "commutator",
    "frobenius",
    "inner_frob",
    "trace_op_axb",
    "trace_op_axtb",
    "trace_op_double_commutator",
    "trace_op_rank_one",
    "matrix_space_basis",
    "operator_trace",
]

SPACES = ("full", "symmetric", "skew")


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-d float64 array, raising ``ValueError`` otherwise."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def skew_from_lower(dim, lower):
    """Build an exactly antisymmetric ``dim x dim`` matrix.

    Parameters
    ----------
    dim : int
        Matrix size.
    lower : array_like
        The ``dim*(dim-1)/2`` strictly-lower-triangular entries, in row-major
        order (``(1,0), (2,0), (2,1), (3,0), ...``).
    """
    lower = np.asarray(lower, dtype=np.float64).ravel()
    rows, cols = np.tril_indices(dim, k=-1)
    if lower.size != rows.size:
        raise ValueError(f"expected {rows.size} lower-triangular entries for dim={dim}, got {lower.size}")
    out = np.zeros((dim, dim))
    out[rows, cols] = lower
    out[cols, rows] = -lower
    return out


def skew_part(a):
    """Return ``(a - a.T) / 2``."""
    return 0.5 * (a - a.T)


def is_skew(a, tol=0.0):
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a + a.T), initial=0.0) <= tol


def _check_square(a, name):
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")


def matmul(a, b):
    """Matrix product with an explicit shape check."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def transpose(a):
    return as_matrix(a).T.copy()


def commutator(a, b):
    """``[a, b] = ab - ba`` for square matrices of equal size."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def frobenius(a):
    return float(np.sqrt(np.sum(np.square(a))))


def inner_frob(a, b):
    """``Tr(a b^T)``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.sum(a * b))


def trace_op_axb(a, b, space="full"):
    """Closed-form trace of ``X -> AXB`` style operators.

    ``space="full"``: ``X -> AXB`` on ``m x n`` matrices, trace ``Tr(A)Tr(B)``.
    ``space="symmetric"``: ``X -> AXB + B^T X A^T`` on symmetric ``p x p``
    matrices, trace ``Tr(A)Tr(B) + Tr(AB^T)``.
    ``space="skew"``: same operator on antisymmetric matrices, trace
    ``Tr(A)Tr(B) - Tr(AB^T)``.
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    _check_square(a, "a")
    _check_square(b, "b")
    base = float(np.trace(a) * np.trace(b))
    if space == "full":
        return base
    if space not in SPACES:
        raise ValueError(f"unknown space {space!r}, expected one of {SPACES}")
    if a.shape != b.shape:
        raise ValueError(f"{space} space needs equal p x p shapes, got {a.shape} and {b.shape}")
    cross = inner_frob(a, b)
    return base + cross if space == "symmetric" else base - cross


def trace_op_axtb(a, b):
    """Trace of ``X -> A X^T B`` on ``m x n`` matrices (``A, B`` both ``m x n``): ``Tr(AB^T)``."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return inner_frob(a, b)


def trace_op_double_commutator(a, b):
    """Trace of ``X -> [[A, X], B]`` on antisymmetric matrices, ``A, B`` antisymmetric: ``(2-p) Tr(AB)``."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    _check_square(a, "a")
    p = a.shape[0]
    return float((2 - p) * np.trace(a @ b))


def trace_op_rank_one(a, b):
    """Trace of ``X -> Tr(AX) B`` on symmetric ``p x p`` matrices, ``B`` symmetric: ``Tr((A + A^T) B / 2)``."""
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    _check_square(a, "a")
    return float(np.trace(0.5 * (a + a.T) @ b))


def matrix_space_basis(shape, space="full"):
    """Standard basis of a matrix space as a list of arrays.

    ``E_ij`` for the full space, ``E_ii`` and ``E_ij + E_ji`` (``i < j``) for
    symmetric matrices, ``E_ij - E_ji`` (``i < j``) for antisymmetric ones.
    """
    rows, cols = shape
    basis = []
    if space == "full":
        for i, j in itertools.product(range(rows), range(cols)):
            e = np.zeros(shape)
            e[i, j] = 1.0
            basis.append(e)
        return basis
    if rows != cols:
        raise ValueError(f"{space} space needs a square shape, got {shape}")
    if space == "symmetric":
        for i in range(rows):
            e = np.zeros(shape)
            e[i, i] = 1.0
            basis.append(e)
    elif space != "skew":
        raise ValueError(f"unknown space {space!r}, expected one of {SPACES}")
    for i in range(rows):
        for j in range(i + 1, rows):
            e = np.zeros(shape)
            e[i, j] = 1.0
            e[j, i] = 1.0 if space == "symmetric" else -1.0
            basis.append(e)
    return basis


def operator_trace(op, basis):
    """Trace of a linear operator by brute force over a basis.

    Each image ``op(E_k)`` is expanded in ``basis`` by least squares and the
    ``k``-th coefficient is accumulated. Independent of any closed form.
    """
    dual = np.linalg.pinv(np.stack([e.ravel() for e in basis], axis=1))
    total = 0.0
    for k, e in enumerate(basis):
        total += dual[k] @ np.asarray(op(e), dtype=np.float64).ravel()
    return float(total)
