"""so(2L) structure of the sign matrices.

Covers commutator closure of ``span{Sigma, Sigma'}``, the orthogonal frame
that block-diagonalizes the all-ones sign matrix, its centralizer, the
simple-root overlaps of the rotated ``Sigma'`` and the closed L=2 table.

Generator and frame formulas use 1-based indices; arrays are 0-based.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ValidationError
from .gaussian import Diagnostics
from .linalg import antisymmetry_violation, commutator

CLOSURE_RTOL = 1e-9
MAX_CLOSURE_L = 8
MAX_FRAME_L = 16


def generator(a: int, b: int, n: int) -> np.ndarray:
    """``X_ab`` with ``(X_ab)_ts = delta_at delta_bs - delta_as delta_bt`` (1-based)."""
    if not (1 <= a <= n and 1 <= b <= n) or a == b:
        raise ValidationError(f"bad generator indices ({a}, {b}) for n={n}")
    X = np.zeros((n, n))
    X[a - 1, b - 1] = 1.0
    X[b - 1, a - 1] = -1.0
    return X


def generator_basis(L: int) -> dict[tuple[int, int], np.ndarray]:
    """All ``L(2L-1)`` generators ``X_ij``, ``i < j``, keyed by 1-based pair."""
    n = 2 * L
    return {(i, j): generator(i, j, n) for i in range(1, n + 1) for j in range(i + 1, n + 1)}


def _upper(A: np.ndarray) -> np.ndarray:
    return A[np.triu_indices(A.shape[0], 1)]


def closure_dimension(seeds: Sequence[np.ndarray], rtol: float = CLOSURE_RTOL,
                      max_dim: int | None = None) -> int:
    """Dimension of the smallest commutator-closed span containing ``seeds``.

    Matrices are tracked by their upper triangles. New commutators are
    orthogonalized (twice, Gram-Schmidt) against the current orthonormal
    basis and kept when the residual exceeds ``rtol`` times the largest
    candidate norm seen so far.
    """
    seeds = [np.asarray(s, dtype=float) for s in seeds]
    if not seeds:
        return 0
    n = seeds[0].shape[0]
    for s in seeds:
        if s.shape != (n, n):
            raise ValidationError("seeds must share one square shape")
        if antisymmetry_violation(s) > 1e-12 * max(1.0, float(np.max(np.abs(s)))):
            raise ValidationError("closure seeds must be antisymmetric")
    cap = n * (n - 1) // 2 if max_dim is None else max_dim
    basis_vecs: list[np.ndarray] = []
    mats: list[np.ndarray] = []
    ref = [0.0]

    def add(M: np.ndarray) -> bool:
        v = _upper(M)
        norm = float(np.linalg.norm(v))
        ref[0] = max(ref[0], norm)
        if norm == 0.0:
            return False
        for _ in range(2):
            for q in basis_vecs:
                v = v - (q @ v) * q
        r = float(np.linalg.norm(v))
        if r <= rtol * ref[0]:
            return False
        basis_vecs.append(v / r)
        mats.append(M / r)
        return True

    for s in seeds:
        add(s)
    done = 0
    # each new element is bracketed once against every earlier one
    while done < len(mats) and len(mats) < cap:
        new = mats[done]
        for other in mats[:done]:
            add(commutator(other, new))
            if len(mats) >= cap:
                break
        done += 1
    return len(mats)


def frame_g0(L: int) -> np.ndarray:
    """Orthogonal frame with columns ``phi^(1), psi^(1), ..., phi^(L), psi^(L)``.

    ``phi^(k)_j = sin((j-1)(2k-1)pi/2L)/sqrt(L)`` and ``psi`` uses cosine.
    """
    if not 1 <= L <= MAX_FRAME_L:
        raise ValidationError(f"frame supports 1 <= L <= {MAX_FRAME_L}")
    j = np.arange(1, 2 * L + 1)[:, None]
    k = np.arange(1, L + 1)[None, :]
    arg = (j - 1) * (2 * k - 1) * np.pi / (2 * L)
    g = np.empty((2 * L, 2 * L))
    g[:, 0::2] = np.sin(arg) / np.sqrt(L)
    g[:, 1::2] = np.cos(arg) / np.sqrt(L)
    return g


def frame(L: int, p: Sequence[int] | None = None) -> np.ndarray:
    """``g = P g0`` with ``P = diag(p)`` (identity when ``p`` is None)."""
    g0 = frame_g0(L)
    if p is None:
        return g0
    p = np.asarray(p, dtype=float)
    if p.shape != (2 * L,) or np.any(np.abs(p) != 1):
        raise ValidationError(f"p must be a +-1 vector of length {2 * L}")
    return p[:, None] * g0


def omegas(L: int) -> np.ndarray:
    """``omega_k = -cot((2k-1)pi/4L)``, ``k = 1..L``."""
    k = np.arange(1, L + 1)
    return -1.0 / np.tan((2 * k - 1) * np.pi / (4 * L))


def block_form(w: Sequence[float]) -> np.ndarray:
    """Direct sum of ``[[0, w_k], [-w_k, 0]]``."""
    w = np.asarray(w, dtype=float)
    B = np.zeros((2 * len(w), 2 * len(w)))
    for k, x in enumerate(w):
        B[2 * k, 2 * k + 1] = x
        B[2 * k + 1, 2 * k] = -x
    return B


def spectrum_check(sigma: np.ndarray, L: int, p: Sequence[int] | None = None,
                   sign: int = 1, tol: float = 1e-10) -> Diagnostics:
    """Eigenvalues ``+-i omega_k`` and block form of ``g^T Sigma g``.

    ``sigma`` must equal ``sign * p_i p_j`` above the diagonal. Then
    ``g^T Sigma g`` with ``g = P g0`` is ``sign`` times the block form, so
    the blocks are compared against ``sign * omega_k``.
    """
    S = np.asarray(sigma, dtype=float)
    if S.shape != (2 * L, 2 * L):
        raise ValidationError(f"sigma must be {2 * L}x{2 * L}")
    w = omegas(L)
    ev = np.sort(np.linalg.eigvals(S).imag)
    expected = np.sort(np.r_[w, -w])
    eig_dev = float(np.max(np.abs(ev - expected)))
    distinct = bool(np.min(np.diff(expected)) > tol) if L > 0 else True
    g = frame(L, p)
    block_dev = float(np.max(np.abs(g.T @ S @ g - sign * block_form(w))))
    worst = max(eig_dev, block_dev)
    return Diagnostics(worst <= tol and distinct, worst,
                       {"eigenvalue_dev": eig_dev, "block_dev": block_dev, "distinct": distinct,
                        "omegas": w.tolist()})


def centralizer_dimension(A: np.ndarray, rtol: float = 1e-10) -> int:
    """Dimension of ``{X in so(n) : [A, X] = 0}`` from the null space of ``ad_A``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    gens = [generator(i, j, n) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if not gens:
        return 0
    ad = np.array([commutator(A, X).ravel() for X in gens]).T
    sv = np.linalg.svd(ad, compute_uv=False)
    cut = rtol * max(1.0, float(sv[0]) if sv.size else 0.0)
    return int(len(gens) - np.count_nonzero(sv > cut))


def centralizer_check(sigma_tilde: np.ndarray, L: int, tol: float = 1e-12) -> Diagnostics:
    """Check that ``Sigma~`` is centralized exactly by the Cartan generators.

    ``[Sigma~, X_{2i-1,2i}] = 0`` for every ``i``, the bracket is nonzero
    for every other generator, and the full centralizer has dimension ``L``.
    """
    St = np.asarray(sigma_tilde, dtype=float)
    scale = max(1.0, float(np.max(np.abs(St))))
    cartan_dev = 0.0
    smallest_other = np.inf
    commuting_others = []
    for (i, j), X in generator_basis(L).items():
        r = float(np.max(np.abs(commutator(St, X))))
        if j == i + 1 and i % 2 == 1:
            cartan_dev = max(cartan_dev, r)
        else:
            smallest_other = min(smallest_other, r)
            if r <= tol * scale:
                commuting_others.append((i, j))
    if not np.isfinite(smallest_other):
        smallest_other = 0.0
    dim = centralizer_dimension(St)
    ok = cartan_dev <= tol * scale and not commuting_others and dim == L
    return Diagnostics(ok, cartan_dev, {"cartan_dev": cartan_dev,
                                        "min_other_norm": smallest_other,
                                        "commuting_others": commuting_others,
                                        "centralizer_dim": dim})


def sign_function(i: int, j: int, L: int) -> int:
    """Exponent ``f(i, j)`` (1-based, ``i < j``) of the rotated sign matrix."""
    if L % 2 == 1:
        return i + j + 1 if i <= L else i + j + 2
    return i + j + 1 if (i <= L and j <= L) else i + j + 2


def sign_matrix_s(L: int) -> np.ndarray:
    """Antisymmetric ``S`` with ``S_ij = (-1)^f(i,j)`` for ``i < j``."""
    n = 2 * L
    S = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            S[i - 1, j - 1] = (-1) ** sign_function(i, j, L)
            S[j - 1, i - 1] = -S[i - 1, j - 1]
    return S


def hs_inner(A: np.ndarray, B: np.ndarray) -> complex:
    """Hilbert-Schmidt product ``sum_{p<q} conj(A_pq) B_pq`` on antisymmetric matrices."""
    iu = np.triu_indices(np.asarray(A).shape[0], 1)
    return complex(np.sum(np.conj(np.asarray(A)[iu]) * np.asarray(B)[iu]))


def simple_roots(L: int) -> list[np.ndarray]:
    """Simple-root generators ``E_alpha_1 .. E_alpha_L`` (complex matrices)."""
    if L < 2:
        raise ValidationError("simple roots need L >= 2")
    n = 2 * L
    X = lambda a, b: generator(a, b, n)  # noqa: E731
    roots = []
    for i in range(1, L):
        roots.append(0.5 * (X(2 * i - 1, 2 * i + 1) + X(2 * i, 2 * i + 2)
                            - 1j * X(2 * i - 1, 2 * i + 2) + 1j * X(2 * i, 2 * i + 1)))
    roots.append(0.5 * (-X(n - 3, n - 1) + X(n - 2, n)
                        - 1j * X(n - 3, n) - 1j * X(n - 2, n - 1)))
    return roots


def _overlap_entries(St: np.ndarray, l: int, L: int) -> complex:
    # entries of Sigma~' picked out by the l-th simple root (1-based l)
    e = lambda a, b: St[a - 1, b - 1]  # noqa: E731
    if l < L:
        a, b = 2 * l - 1, 2 * l
        return 0.5 * (e(a, a + 2) + e(b, b + 2) + 1j * e(a, b + 2) - 1j * e(b, a + 2))
    n = 2 * L
    return 0.5 * (-e(n - 3, n - 1) + e(n - 2, n) + 1j * e(n - 3, n) + 1j * e(n - 2, n - 1))


def _overlap_fourier(S: np.ndarray, l: int, L: int) -> complex:
    r = np.arange(2 * L)
    if l < L:
        u = np.exp(1j * r * (2 * l - 1) * np.pi / (2 * L))
        v = np.exp(-1j * r * (2 * l + 1) * np.pi / (2 * L))
    else:
        u = np.exp(1j * r * (2 * L - 3) * np.pi / (2 * L))
        v = np.exp(1j * r * (2 * L - 1) * np.pi / (2 * L))
    return complex(u @ S @ v / (2 * L))


def _overlap_closed(l: int, L: int) -> complex:
    if l < L:
        num = -np.exp(-1j * (l - 1) * np.pi / L) * (-1 + np.exp(2j * l * np.pi / L))
        den = (-1 + np.exp(1j * np.pi / L)) * L * (np.cos(np.pi / (2 * L)) + np.cos(l * np.pi / L))
        return complex(num / den)
    return complex(1j * (-1) ** L * np.exp(1j * np.pi / L) / np.sin(np.pi / (4 * L)) ** 2
                   / (2 * L * (2 * np.cos(np.pi / (2 * L)) + 1)))


def root_overlaps(L: int) -> dict[str, np.ndarray]:
    """Overlaps ``<E_alpha_l, Sigma~'>`` by three routes.

    ``hs``: Hilbert-Schmidt product with the explicit root matrices;
    ``direct``: the four picked entries of ``Sigma~' = g0^T S g0``;
    ``fourier``: the exponential double sum over ``S``;
    ``closed``: the closed-form expressions.
    """
    if not 2 <= L <= MAX_FRAME_L:
        raise ValidationError(f"root overlaps need 2 <= L <= {MAX_FRAME_L}")
    S = sign_matrix_s(L)
    g0 = frame_g0(L)
    St = g0.T @ S @ g0
    out = {
        "hs": np.array([hs_inner(E, St) for E in simple_roots(L)]),
        "direct": np.array([_overlap_entries(St, l, L) for l in range(1, L + 1)]),
        "fourier": np.array([_overlap_fourier(S, l, L) for l in range(1, L + 1)]),
        "closed": np.array([_overlap_closed(l, L) for l in range(1, L + 1)]),
    }
    return out


def overlap_check(L: int, tol: float = 1e-10, floor: float = 1e-8) -> Diagnostics:
    """All overlap routes agree within ``tol`` and every ``|overlap| > floor``."""
    ov = root_overlaps(L)
    ref = ov["direct"]
    devs = {k: float(np.max(np.abs(v - ref))) for k, v in ov.items() if k != "direct"}
    worst = max(devs.values())
    min_abs = float(np.min(np.abs(ref)))
    return Diagnostics(worst <= tol and min_abs > floor, worst,
                       {"route_dev": devs, "min_abs": min_abs, "overlaps": ref})


def so4_expansion() -> tuple[np.ndarray, np.ndarray]:
    """``Sigma`` and ``Sigma'`` for L=2 written through the generators ``X_ij``."""
    X = lambda a, b: generator(a, b, 4)  # noqa: E731
    S = X(1, 2) + X(1, 3) + X(1, 4) - X(2, 3) - X(2, 4) - X(3, 4)
    Sp = X(1, 2) + X(1, 3) - X(1, 4) + X(2, 3) - X(2, 4) + X(3, 4)
    return S, Sp


def l2_commutator_table_check(sigma: np.ndarray, sigma_prime: np.ndarray,
                              tol: float = 1e-10) -> Diagnostics:
    """Check the closed L=2 commutator table.

    ``Sigma_3 .. Sigma_6`` are defined by the first four brackets; the
    remaining eleven relations are then checked entrywise.
    """
    S1 = np.asarray(sigma, dtype=float)
    S2 = np.asarray(sigma_prime, dtype=float)
    if S1.shape != (4, 4) or S2.shape != (4, 4):
        raise ValidationError("the commutator table is for L=2 (4x4 matrices)")
    C = commutator
    S3 = C(S1, S2)
    S4 = C(S1, S3)
    S5 = C(S2, S3)
    S6 = C(S1, S4)
    f = 1 / 5
    relations = {
        "[S',S4]": (C(S2, S4), -12 * S3 - 2 * S6),
        "[S3,S4]": (C(S3, S4), 16 * S1),
        "[S,S5]": (C(S1, S5), -12 * S3 - 2 * S6),
        "[S',S5]": (C(S2, S5), -12 * S3 - S6),
        "[S3,S5]": (C(S3, S5), 16 * S2),
        "[S4,S5]": (C(S4, S5), 16 * S3),
        "[S,S6]": (C(S1, S6), f * (-32 * S1 - 16 * S2 - 36 * S4 + 12 * S5)),
        "[S',S6]": (C(S2, S6), f * (-16 * S1 + 32 * S2 + 12 * S4 - 24 * S5)),
        "[S3,S6]": (C(S3, S6), np.zeros((4, 4))),
        "[S4,S6]": (C(S4, S6), f * (576 * S1 - 192 * S2 - 32 * S4 - 16 * S5)),
        "[S5,S6]": (C(S5, S6), f * (-192 * S1 + 384 * S2 - 16 * S4 + 32 * S5)),
    }
    devs = {k: float(np.max(np.abs(a - b))) for k, (a, b) in relations.items()}
    worst = max(devs.values())
    rank = int(np.linalg.matrix_rank(np.array([M.ravel() for M in (S1, S2, S3, S4, S5, S6)])))
    return Diagnostics(worst <= tol and rank == 6, worst, {"relations": devs, "rank": rank})
