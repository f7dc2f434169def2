"""Gaussian operators, their validation and the Balian-Brezin block data.

A Gaussian operator on ``L`` modes is stored through its ``2L x 2L``
generator ``M``::

    G = exp( 1/2 (c^dag, c) M (c, c^dag)^T + offset )

The scalar ``offset`` is zero for generic and mixed specs. For the
number-conserving form ``exp(c^dag A c)`` the quadratic form equals
``c^dag A c - tr(A)/2`` with ``M = [[A, 0], [0, -A^T]]``, so the spec
carries ``offset = tr(A)/2`` to represent ``exp(c^dag A c)`` exactly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DecompositionError, ValidationError
from .linalg import antisymmetry_violation, matrix_exp, matrix_log_principal

GENERIC = "generic"
MIXED = "mixed_hermitian"
CONSERVING = "particle_conserving"
KINDS = (GENERIC, MIXED, CONSERVING)

DEFAULT_TOL = 1e-10
MAX_COND = 1e12


def xi_matrix(L: int) -> np.ndarray:
    """The block swap ``[[0, I], [I, 0]]``."""
    Z = np.zeros((L, L))
    I = np.eye(L)
    return np.block([[Z, I], [I, Z]])


@dataclass(frozen=True)
class GaussianSpec:
    """Defining data of a Gaussian operator.

    Attributes
    ----------
    L : int
        Number of fermionic modes.
    M : ndarray, shape (2L, 2L)
        Generator of the quadratic form.
    kind : str
        One of ``"generic"``, ``"mixed_hermitian"``, ``"particle_conserving"``.
    A_small : ndarray, shape (L, L), optional
        Present iff ``kind == "particle_conserving"``.
    offset : complex
        Scalar added to the exponent (``tr(A)/2`` for the conserving kind).
    """

    L: int
    M: np.ndarray
    kind: str = GENERIC
    A_small: np.ndarray | None = None
    offset: complex = 0.0

    def __post_init__(self) -> None:
        M = np.array(self.M, dtype=complex)
        M.setflags(write=False)
        object.__setattr__(self, "M", M)
        if self.A_small is not None:
            A = np.array(self.A_small, dtype=complex)
            A.setflags(write=False)
            object.__setattr__(self, "A_small", A)
        if self.kind not in KINDS:
            raise ValidationError(f"unknown kind {self.kind!r}")
        if M.shape != (2 * self.L, 2 * self.L):
            raise ValidationError(f"M must be {2 * self.L}x{2 * self.L}, got {M.shape}")
        if (self.kind == CONSERVING) != (self.A_small is not None):
            raise ValidationError("A_small is required for, and only for, particle_conserving specs")

    @classmethod
    def from_matrix(cls, M: np.ndarray, kind: str = GENERIC) -> "GaussianSpec":
        M = np.asarray(M, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise ValidationError(f"M must be square of even size, got {M.shape}")
        return cls(L=M.shape[0] // 2, M=M, kind=kind)

    @classmethod
    def particle_conserving(cls, A: np.ndarray) -> "GaussianSpec":
        """Spec for ``exp(c^dag A c)`` with arbitrary ``L x L`` matrix ``A``."""
        A = np.asarray(A, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValidationError(f"A must be square, got {A.shape}")
        L = A.shape[0]
        Z = np.zeros((L, L))
        M = np.block([[A, Z], [Z, -A.T]])
        return cls(L=L, M=M, kind=CONSERVING, A_small=A, offset=complex(np.trace(A)) / 2)

    def digest(self) -> str:
        """Short content hash, stable across runs."""
        h = hashlib.sha256()
        h.update(f"{self.L}:{self.kind}:{self.offset!r}".encode())
        h.update(np.ascontiguousarray(self.M).tobytes())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class Diagnostics:
    """Outcome of a numerical check."""

    passed: bool
    max_violation: float
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class BlockDecomposition:
    """Blocks of ``e^M`` and the derived Balian-Brezin matrices.

    ``prefactor`` is ``det(T22)^(1/2) = exp(-tr(Y)/2)``; ``scale`` is
    ``exp(offset)`` and multiplies every matrix element.
    """

    L: int
    T11: np.ndarray
    T12: np.ndarray
    T21: np.ndarray
    T22: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    prefactor: complex
    kernelA: np.ndarray
    scale: complex = 1.0

    @property
    def amplitude(self) -> complex:
        """Overall factor multiplying every Pfaffian: ``scale * prefactor``."""
        return self.scale * self.prefactor

    def assemble(self) -> np.ndarray:
        """Reassemble ``e^M`` from the four blocks."""
        return np.block([[self.T11, self.T12], [self.T21, self.T22]])


def validate(spec: GaussianSpec, tol: float = DEFAULT_TOL) -> Diagnostics:
    """Check ``Xi M + (Xi M)^T = 0`` and, for mixed specs, ``M^dag = M``."""
    M = spec.M
    if M.shape != (2 * spec.L, 2 * spec.L):
        raise ValidationError(f"M must be {2 * spec.L}x{2 * spec.L}, got {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    details: dict[str, Any] = {"xi_antisymmetry": antisymmetry_violation(xi_matrix(spec.L) @ M)}
    if spec.kind == MIXED:
        details["hermiticity"] = float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0
    worst = max(details.values())
    return Diagnostics(worst <= tol * scale, worst, details)


def decompose(spec: GaussianSpec, max_cond: float = MAX_COND) -> BlockDecomposition:
    """Balian-Brezin data of ``spec``.

    Raises
    ------
    DecompositionError
        If ``T22`` is singular or its condition number exceeds ``max_cond``.
    BranchError
        If ``T22^T`` has an eigenvalue near the negative real axis.
    """
    L = spec.L
    E = matrix_exp(spec.M)
    T11, T12, T21, T22 = E[:L, :L], E[:L, L:], E[L:, :L], E[L:, L:]
    if L == 0:
        empty = np.zeros((0, 0), dtype=complex)
        return BlockDecomposition(0, empty, empty, empty, empty, empty, empty, empty,
                                  1.0 + 0.0j, empty, complex(np.exp(spec.offset)))
    cond = np.linalg.cond(T22)
    if not np.isfinite(cond) or cond > max_cond:
        raise DecompositionError(f"T22 is singular or ill-conditioned (cond = {cond:.3e})")
    T22_inv = np.linalg.inv(T22)
    X = T12 @ T22_inv
    Z = T22_inv @ T21
    Y = -matrix_log_principal(T22.T)
    eY = matrix_exp(Y)
    kernelA = np.block([[X, eY], [-eY.T, Z]])
    prefactor = complex(np.exp(-np.trace(Y) / 2))
    return BlockDecomposition(
        L=L, T11=T11, T12=T12, T21=T21, T22=T22, X=X, Y=Y, Z=Z,
        prefactor=prefactor, kernelA=kernelA, scale=complex(np.exp(spec.offset)),
    )


def normalization(spec: GaussianSpec) -> complex:
    """Trace of the operator, ``exp(offset) * det(I + e^M)^(1/2)``.

    The square root uses the principal logarithm of ``I + e^M``.
    """
    n = 2 * spec.L
    S = np.eye(n) + matrix_exp(spec.M)
    if n and np.linalg.cond(S) > 1 / np.finfo(float).eps:
        raise DecompositionError("I + e^M is singular")
    half_log_det = np.trace(matrix_log_principal(S)) / 2 if n else 0.0
    return complex(np.exp(spec.offset + half_log_det))


def mixed_state_checks(bd: BlockDecomposition, tol: float = 1e-9) -> Diagnostics:
    """Residuals of ``X = Z^dag`` and ``Y = Y^dag`` expected for mixed states."""
    if bd.L == 0:
        return Diagnostics(True, 0.0, {"x_vs_zdag": 0.0, "y_hermiticity": 0.0})
    details = {
        "x_vs_zdag": float(np.max(np.abs(bd.X - bd.Z.conj().T))),
        "y_hermiticity": float(np.max(np.abs(bd.Y - bd.Y.conj().T))),
    }
    worst = max(details.values())
    return Diagnostics(worst <= tol, worst, details)


def kernel_real_case(G: np.ndarray) -> np.ndarray:
    """Kernel ``[[F_a, F_s], [-F_s, -F_a]]`` built from a real correlation matrix.

    ``F = (I + G)(I - G)^{-1}``, ``F_s``/``F_a`` its symmetric and
    antisymmetric parts. For a real mixed spec this coincides with
    ``decompose(spec).kernelA`` when ``G`` is taken from
    :func:`fgpauli.oracle.correlation_oracle`.
    """
    G = np.asarray(G)
    L = G.shape[0]
    I = np.eye(L)
    if L and np.linalg.cond(I - G) > 1 / np.finfo(float).eps:
        raise DecompositionError("I - G is singular")
    F = (I + G) @ np.linalg.inv(I - G) if L else np.zeros((0, 0))
    Fs = (F + F.T) / 2
    Fa = (F - F.T) / 2
    return np.block([[Fa, Fs], [-Fs, -Fa]])


# -- random specs -----------------------------------------------------------

def random_spec(L: int, kind: str = GENERIC, rng: np.random.Generator | int | None = None,
                scale: float = 0.5, real: bool = False) -> GaussianSpec:
    """Random spec on the constraint surface.

    Generic: ``M = Xi W`` with complex antisymmetric ``W``. Mixed:
    ``M = [[A, B], [B^dag, -A^T]]`` with Hermitian ``A`` and antisymmetric
    ``B``. Conserving: complex ``A``. ``scale`` is the entry standard
    deviation divided by ``sqrt(L)``; the default keeps ``T22`` well inside
    the principal branch.
    """
    rng = np.random.default_rng(rng)
    s = scale / np.sqrt(max(L, 1))

    def draw(shape):
        x = rng.normal(size=shape)
        if not real:
            x = x + 1j * rng.normal(size=shape)
        return s * x

    if kind == GENERIC:
        W = draw((2 * L, 2 * L))
        W = (W - W.T) / 2
        return GaussianSpec(L=L, M=xi_matrix(L) @ W, kind=GENERIC)
    if kind == MIXED:
        A = draw((L, L))
        A = (A + A.conj().T) / 2
        B = draw((L, L))
        B = (B - B.T) / 2
        return GaussianSpec(L=L, M=np.block([[A, B], [B.conj().T, -A.T]]), kind=MIXED)
    if kind == CONSERVING:
        return GaussianSpec.particle_conserving(draw((L, L)))
    raise ValidationError(f"unknown kind {kind!r}")


# -- JSON -------------------------------------------------------------------

def _encode_matrix(A: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(A, dtype=complex)]


def _decode_matrix(rows: list) -> np.ndarray:
    def entry(x):
        if isinstance(x, (list, tuple)):
            if len(x) != 2:
                raise ValidationError(f"complex entries must be [re, im], got {x!r}")
            return complex(x[0], x[1])
        return complex(x)

    try:
        return np.array([[entry(x) for x in row] for row in rows], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix: {exc}") from exc


def spec_to_json(spec: GaussianSpec) -> dict:
    if spec.kind == CONSERVING:
        return {"L": spec.L, "kind": spec.kind, "A": _encode_matrix(spec.A_small)}
    return {"L": spec.L, "kind": spec.kind, "M": _encode_matrix(spec.M)}


def spec_from_json(data: dict | str) -> GaussianSpec:
    """Parse the JSON spec format (a dict or a JSON string)."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        L = int(data["L"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("spec needs an integer 'L'") from exc
    if "A" in data:
        spec = GaussianSpec.particle_conserving(_decode_matrix(data["A"]))
    elif "M" in data:
        spec = GaussianSpec(L=L, M=_decode_matrix(data["M"]), kind=data.get("kind", GENERIC))
    else:
        raise ValidationError("spec needs 'M' or 'A'")
    if spec.L != L:
        raise ValidationError(f"declared L={L} does not match matrix size")
    return spec
