"""Dense complex matrix primitives.

Everything here is a pure function of its inputs. The Pfaffian is computed
with a skew-symmetric Parlett-Reid (LTL^T) reduction with partial pivoting;
the matrix exponential and logarithm are thin wrappers around SciPy with the
branch checks the rest of the package relies on.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import BranchError, ValidationError

#: Default absolute antisymmetry tolerance, scaled by ``max|A|``.
ANTISYM_TOL = 1e-10

#: Eigenvalues of the log argument closer than this (relative) to the closed
#: negative real axis are rejected.
BRANCH_TOL = 1e-8


def antisymmetry_violation(A: np.ndarray) -> float:
    """Return ``max|A + A^T|`` (0 for an empty matrix)."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(A + A.T)))


def _check_square(A: np.ndarray, name: str = "matrix") -> None:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {A.shape}")


def pfaffian(A: np.ndarray, tol: float = ANTISYM_TOL) -> complex:
    """Pfaffian of a complex antisymmetric matrix.

    Parameters
    ----------
    A : (n, n) array_like
        Antisymmetric matrix. Antisymmetry is checked against
        ``tol * max(1, max|A|)``.
    tol : float
        Relative antisymmetry tolerance.

    Returns
    -------
    complex
        ``pf(A)``. The empty matrix has Pfaffian 1, odd dimensions give 0.

    Notes
    -----
    Parlett-Reid tridiagonalization: at step ``k`` the largest entry of
    column ``k`` below the diagonal is swapped into position ``k+1`` (each
    swap flips the sign), then a Gauss transform eliminates the rest of the
    column pair. ``pf(A)`` is the signed product of the pivots ``A[k, k+1]``.
    """
    A = np.array(A, dtype=complex)
    _check_square(A)
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    scale = max(1.0, float(np.max(np.abs(A))))
    viol = antisymmetry_violation(A)
    if viol > tol * scale:
        raise ValidationError(f"matrix is not antisymmetric (max|A+A^T| = {viol:.3e})")
    if n % 2:
        return 0.0j

    result = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], k:] = A[[kp, k + 1], k:]
            A[k:, [k + 1, kp]] = A[k:, [kp, k + 1]]
            result = -result
        pivot = A[k, k + 1]
        if pivot == 0:
            return 0.0j
        result *= pivot
        if k + 2 < n:
            tau = A[k, k + 2:] / pivot
            col = A[k + 2:, k + 1]
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return complex(result)


def pfaffian_matchings(A: np.ndarray) -> complex:
    """Pfaffian by explicit summation over perfect matchings.

    Exponential cost; meant as an independent reference for small ``n``.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if n % 2:
        return 0.0j

    def rec(idx: tuple[int, ...]) -> complex:
        if not idx:
            return 1.0 + 0.0j
        first, rest = idx[0], idx[1:]
        total = 0.0j
        for pos, j in enumerate(rest):
            # pairing `first` with the pos-th remaining index costs pos transpositions
            sign = -1.0 if pos % 2 else 1.0
            total += sign * A[first, j] * rec(rest[:pos] + rest[pos + 1:])
        return total

    return rec(tuple(range(n)))


def perfect_matchings(indices: Sequence[int]) -> Iterable[list[tuple[int, int]]]:
    """Yield every perfect matching of ``indices`` as a list of ordered pairs."""
    indices = list(indices)
    if not indices:
        yield []
        return
    first, rest = indices[0], indices[1:]
    for pos, j in enumerate(rest):
        for tail in perfect_matchings(rest[:pos] + rest[pos + 1:]):
            yield [(first, j)] + tail


def matrix_exp(A: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a Pade approximant.

    Raises
    ------
    OverflowError
        If the result contains non-finite entries.
    """
    A = np.asarray(A)
    _check_square(A)
    if A.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        E = scipy.linalg.expm(A.astype(complex))
    if not np.all(np.isfinite(E)):
        raise OverflowError("matrix exponential overflowed")
    return E


def branch_distance(A: np.ndarray) -> float:
    """Smallest relative distance of an eigenvalue of ``A`` to the cut (-inf, 0]."""
    ev = np.linalg.eigvals(np.asarray(A, dtype=complex))
    if ev.size == 0:
        return np.inf
    mag = np.abs(ev)
    # points with Re >= 0 are at least |Im| away; otherwise the distance is |Im|
    dist = np.where(ev.real >= 0, mag, np.abs(ev.imag))
    return float(np.min(dist / np.maximum(mag, 1.0)))


def matrix_log_principal(A: np.ndarray, branch_tol: float = BRANCH_TOL) -> np.ndarray:
    """Principal matrix logarithm.

    Raises
    ------
    BranchError
        If an eigenvalue of ``A`` lies within ``branch_tol`` (relative) of the
        closed negative real axis, where the principal branch is undefined or
        numerically ambiguous.
    """
    A = np.asarray(A, dtype=complex)
    _check_square(A)
    if A.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    if branch_distance(A) <= branch_tol:
        raise BranchError("eigenvalue on or near the negative real axis; principal log undefined")
    L = scipy.linalg.logm(A)
    return np.asarray(L, dtype=complex)


def submatrix_keep(A: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Restrict rows and columns of ``A`` to the strictly ascending index list ``keep``."""
    A = np.asarray(A)
    keep = [int(k) for k in keep]
    n = A.shape[0]
    if any(k < 0 or k >= n for k in keep):
        raise ValidationError(f"index out of range for size {n}: {keep}")
    if any(b <= a for a, b in zip(keep, keep[1:])):
        raise ValidationError(f"indices must be strictly ascending: {keep}")
    return A[np.ix_(keep, keep)]


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``AB - BA``."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"shape mismatch: {A.shape} vs {B.shape}")
    return A @ B - B @ A
