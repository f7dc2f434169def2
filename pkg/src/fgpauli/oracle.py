"""Brute-force dense reference on the 2^L-dimensional Fock space.

Index convention: bit ``l-1`` of a basis index is the occupation of site
``l`` (site 1 is the least significant bit). An occupied site is spin up.
Single-site matrices are written in the ordered basis ``(|0>, |1>)``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ValidationError
from .gaussian import MIXED, GaussianSpec, normalization
from .linalg import matrix_exp

MAX_SITES = 10
MAX_EXP_SITES = 8

_ANNIHILATE = np.array([[0, 1], [0, 0]], dtype=np.int64)
_STRING = np.array([[1, 0], [0, -1]], dtype=np.int64)  # -sigma^z


def _kron_sites(ops: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product with site 1 as the least significant factor."""
    out = np.ones((1, 1), dtype=ops[0].dtype)
    for op in reversed(ops):
        out = np.kron(out, op)
    return out


def jw_operators(L: int) -> list[np.ndarray]:
    """Annihilation operators ``c_1 .. c_L`` as integer matrices."""
    if not 0 <= L <= MAX_SITES:
        raise ValidationError(f"oracle supports 0 <= L <= {MAX_SITES}, got {L}")
    eye = np.eye(2, dtype=np.int64)
    return [_kron_sites([_STRING] * l + [_ANNIHILATE] + [eye] * (L - l - 1)) for l in range(L)]


def quadratic_form(spec: GaussianSpec) -> np.ndarray:
    """Dense ``1/2 (c^dag, c) M (c, c^dag)^T``."""
    L = spec.L
    c = jw_operators(L)
    cd = [op.T for op in c]
    left = cd + c
    right = c + cd
    H = np.zeros((2**L, 2**L), dtype=complex)
    for a in range(2 * L):
        for b in range(2 * L):
            if spec.M[a, b] != 0:
                H += 0.5 * spec.M[a, b] * (left[a] @ right[b])
    return H


def build_gaussian(spec: GaussianSpec) -> np.ndarray:
    """Dense matrix of the Gaussian operator described by ``spec``."""
    if spec.L > MAX_EXP_SITES:
        raise ValidationError(f"dense exponential limited to L <= {MAX_EXP_SITES}")
    H = quadratic_form(spec) + spec.offset * np.eye(2**spec.L)
    return matrix_exp(H)


def local_rotation(phi: float, theta: float, alpha: float) -> np.ndarray:
    """Single-site rotation in the ``(up, down)`` ordering."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([
        [c, s * np.exp(-1j * phi)],
        [s * np.exp(-1j * alpha), -c * np.exp(-1j * (alpha + phi))],
    ])


def rotation(angles: Sequence[Sequence[float]]) -> np.ndarray:
    """Product rotation ``U = U_1 (x) ... (x) U_L`` in the Fock index convention."""
    if len(angles) > MAX_SITES:
        raise ValidationError(f"oracle supports L <= {MAX_SITES}")
    if not angles:
        return np.ones((1, 1), dtype=complex)
    swap = np.array([[0, 1], [1, 0]])
    # (up, down) = (|1>, |0>) -> reorder to (|0>, |1>)
    return _kron_sites([swap @ local_rotation(*a) @ swap for a in angles])


def spins_to_index(spins: Sequence[int]) -> int:
    """Fock index of a spin configuration (``+1`` up/occupied, site 1 first)."""
    idx = 0
    for l, s in enumerate(spins):
        if s not in (1, -1):
            raise ValidationError(f"spins must be +1 or -1, got {s!r}")
        if s == 1:
            idx |= 1 << l
    return idx


def rotated_operator(spec: GaussianSpec, angles: Sequence[Sequence[float]] | None = None,
                     dense: np.ndarray | None = None) -> np.ndarray:
    """``U_bra G U_ket^dag`` (or just ``G`` when ``angles`` is None).

    ``angles`` holds ``L`` shared triples or ``2L`` triples (bra, then ket).
    """
    G = build_gaussian(spec) if dense is None else dense
    if angles is None:
        return G
    L = spec.L
    if len(angles) not in (L, 2 * L):
        raise ValidationError(f"need {L} or {2 * L} angle triples, got {len(angles)}")
    Ub = rotation(angles[:L])
    Uk = rotation(angles[L:]) if len(angles) == 2 * L else Ub
    return Ub @ G @ Uk.conj().T


def element_oracle(spec: GaussianSpec, angles: Sequence[Sequence[float]] | None,
                   bra_spins: Sequence[int], ket_spins: Sequence[int],
                   dense: np.ndarray | None = None) -> complex:
    """``<S| U_bra G U_ket^dag |S'>`` read off the dense matrices."""
    R = rotated_operator(spec, angles, dense)
    return complex(R[spins_to_index(bra_spins), spins_to_index(ket_spins)])


def correlation_oracle(spec: GaussianSpec) -> np.ndarray:
    """``G_jk = tr[rho (c_j^dag - c_j)(c_k^dag + c_k)]`` with ``rho`` normalized."""
    if spec.kind != MIXED:
        raise ValidationError("correlation matrix needs a mixed_hermitian spec")
    rho = build_gaussian(spec) / normalization(spec)
    c = jw_operators(spec.L)
    minus = [op.T - op for op in c]
    plus = [op.T + op for op in c]
    L = spec.L
    G = np.empty((L, L), dtype=complex)
    for j in range(L):
        left = rho @ minus[j]
        for k in range(L):
            G[j, k] = np.trace(left @ plus[k])
    return G
