"""Matrix elements of Gaussian operators between product basis states.

Kernel index dictionary (0-based arrays, 1-based in prose): kernel index
``m <= L`` is the bra at site ``m``; ``m > L`` is the ket at site ``m - L``.
A spin ``+1`` (up) is an occupied mode.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .gaussian import BlockDecomposition
from .linalg import matrix_exp, pfaffian, submatrix_keep
from .signs import SignPair

#: Angle triples ``(phi, theta, alpha)`` of the named Pauli bases.
BASIS_ANGLES = {
    "z": (0.0, 0.0, 0.0),
    "x": (0.0, np.pi / 2, 0.0),
    "y": (np.pi / 2, np.pi / 2, 0.0),
}


@dataclass(frozen=True)
class OccupationSets:
    """Occupied ket modes ``I1`` and bra modes ``J1`` (1-based, ascending)."""

    L: int
    I1: tuple[int, ...]
    J1: tuple[int, ...]

    def __post_init__(self) -> None:
        for name in ("I1", "J1"):
            s = tuple(sorted(int(x) for x in getattr(self, name)))
            if len(set(s)) != len(s) or any(x < 1 or x > self.L for x in s):
                raise ValidationError(f"{name} must be distinct sites in 1..{self.L}: {s}")
            object.__setattr__(self, name, s)

    @property
    def I0(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.L + 1) if i not in self.I1)

    @property
    def J0(self) -> tuple[int, ...]:
        return tuple(j for j in range(1, self.L + 1) if j not in self.J1)

    @classmethod
    def from_spins(cls, bra: Sequence[int], ket: Sequence[int]) -> "OccupationSets":
        if len(bra) != len(ket):
            raise ValidationError("bra and ket must have the same length")
        return cls(len(bra), tuple(i + 1 for i, s in enumerate(ket) if s == 1),
                   tuple(j + 1 for j, s in enumerate(bra) if s == 1))


@dataclass(frozen=True)
class SpinConfiguration:
    """Bra/ket spins (``+-1`` per site) and basis angles ``(phi, theta, alpha)``.

    ``angles`` holds either ``L`` triples, one per site and shared by bra
    and ket, or ``2L`` triples (bra sites, then ket sites) for a bra and a
    ket expressed in different local bases. ``None`` means sigma^z.
    """

    bra: tuple[int, ...]
    ket: tuple[int, ...]
    angles: tuple[tuple[float, float, float], ...] | None = None

    def __post_init__(self) -> None:
        bra = tuple(int(s) for s in self.bra)
        ket = tuple(int(s) for s in self.ket)
        if len(bra) != len(ket):
            raise ValidationError("bra and ket must have the same length")
        if any(s not in (1, -1) for s in bra + ket):
            raise ValidationError("spins must be +1 or -1")
        object.__setattr__(self, "bra", bra)
        object.__setattr__(self, "ket", ket)
        L = len(bra)
        angles = self.angles
        if angles is None:
            angles = ((0.0, 0.0, 0.0),) * L
        angles = tuple(tuple(float(x) for x in a) for a in angles)
        if len(angles) not in (L, 2 * L) or any(len(a) != 3 for a in angles):
            raise ValidationError(f"need {L} or {2 * L} angle triples, got {len(angles)}")
        if angles and not np.all(np.isfinite(angles)):
            raise ValidationError("angles must be finite")
        object.__setattr__(self, "angles", angles)

    @property
    def L(self) -> int:
        return len(self.bra)

    @property
    def spins(self) -> np.ndarray:
        """Kernel-ordered spins: bra sites then ket sites."""
        return np.array(self.bra + self.ket, dtype=np.int64)

    @property
    def index_angles(self) -> np.ndarray:
        """``(2L, 3)`` angles per kernel index (shared angles repeat cyclically)."""
        a = self.angles if len(self.angles) == 2 * self.L else self.angles * 2
        return np.array(a, dtype=float).reshape(2 * self.L, 3)


def _check_bd(bd: BlockDecomposition, L: int) -> None:
    if bd.L != L:
        raise ValidationError(f"decomposition is for L={bd.L}, configuration has L={L}")


def _antisym(upper: np.ndarray) -> np.ndarray:
    U = np.triu(upper, 1)
    return U - U.T


def element_computational(bd: BlockDecomposition, occ: OccupationSets) -> complex:
    """``<J|G|I>`` from the Pfaffian of the kernel restricted to ``J1 u (L + I1)``."""
    _check_bd(bd, occ.L)
    nI, nJ = len(occ.I1), len(occ.J1)
    if (nI + nJ) % 2:
        return 0j
    keep = [j - 1 for j in occ.J1] + [bd.L + i - 1 for i in occ.I1]
    sign = -1 if (nI * (nI + 2 * nJ + 1) // 2) % 2 else 1
    return complex(sign * bd.amplitude * pfaffian(submatrix_keep(bd.kernelA, keep)))


def element_computational_spins(bd: BlockDecomposition, bra: Sequence[int],
                                ket: Sequence[int]) -> complex:
    """:func:`element_computational` addressed by sigma^z spins."""
    return element_computational(bd, OccupationSets.from_spins(bra, ket))


def element_particle_conserving(A_small: np.ndarray, occ: OccupationSets) -> complex:
    """``<J| exp(c^dag A c) |I>`` as a minor of ``e^A``.

    The minor keeps rows ``J1`` and columns ``I1``; it is zero unless the
    particle numbers agree.
    """
    A_small = np.asarray(A_small)
    if A_small.shape != (occ.L, occ.L):
        raise ValidationError(f"A must be {occ.L}x{occ.L}")
    if len(occ.I0) != len(occ.J0):
        return 0j
    eA = matrix_exp(A_small)
    rows = [j - 1 for j in occ.J1]
    cols = [i - 1 for i in occ.I1]
    if not rows:
        return 1.0 + 0.0j
    return complex(np.linalg.det(eA[np.ix_(rows, cols)]))


def kernel_sigma_z(bd: BlockDecomposition, pair: SignPair, spins: Sequence[int]) -> np.ndarray:
    """Kernel of the sigma^z formula for kernel-ordered ``spins``."""
    s = np.asarray(spins)
    up = (s == 1).astype(float)
    down = 1.0 - up
    K = np.outer(up, up) * pair.sigma * bd.kernelA + np.outer(down, down) * pair.sigma_prime
    return _antisym(K)


def _parity_forbidden_z(spins: np.ndarray) -> bool:
    return int(np.count_nonzero(spins == -1)) % 2 == 1


def element_sigma_z(bd: BlockDecomposition, pair: SignPair, bra: Sequence[int],
                    ket: Sequence[int]) -> complex:
    """``<S|G|S'>`` in the sigma^z basis via the sign pair ``(Sigma, Sigma')``."""
    cfg = SpinConfiguration(tuple(bra), tuple(ket))
    _check_bd(bd, cfg.L)
    s = cfg.spins
    if _parity_forbidden_z(s):
        return 0j
    return complex(bd.amplitude * pfaffian(kernel_sigma_z(bd, pair, s)))


def kernel_pauli(bd: BlockDecomposition, pair: SignPair, cfg: SpinConfiguration) -> np.ndarray:
    """Kernel of the arbitrary-Pauli-basis formula.

    Shared per-site angles repeat cyclically over the ``2L`` kernel indices;
    ``phi`` enters with a plus sign on bra indices and a minus sign on ket
    indices. Exponents ``(1 +- s)/2`` are exact 0/1 selections.
    """
    _check_bd(bd, cfg.L)
    L = cfg.L
    s = cfg.spins
    ang = cfg.index_angles
    phi_bar = ang[:, 0] * np.r_[np.ones(L), -np.ones(L)]
    c = np.cos(ang[:, 1] / 2)
    sn = np.sin(ang[:, 1] / 2)
    up = s == 1
    # per-index weight for the Sigma*A term and for the Sigma' term
    w_a = np.where(up, c, sn) * np.exp(1j * phi_bar)
    w_p = np.where(up, sn, c)
    flip = np.where(np.not_equal.outer(s, s), -1.0, 1.0)
    K = pair.sigma * bd.kernelA * np.outer(w_a, w_a) + flip * pair.sigma_prime * np.outer(w_p, w_p)
    return _antisym(K)


def _z_like_occupations(cfg: SpinConfiguration) -> np.ndarray | None:
    """Effective sigma^z spins when every site is a z-type basis, else None.

    A site with ``theta = 0 (mod 2 pi)`` keeps its label, ``theta = pi``
    flips it; the remaining angles only contribute phases.
    """
    occ = []
    for spin, theta in zip(cfg.spins, cfg.index_angles[:, 1]):
        theta = theta % (2 * np.pi)
        if theta == 0.0:
            occ.append(spin)
        elif theta == np.pi:
            occ.append(-spin)
        else:
            return None
    return np.array(occ)


def element_pauli(bd: BlockDecomposition, pair: SignPair, cfg: SpinConfiguration) -> complex:
    """``<S|U G U^dag|S'>`` for per-site bases ``(phi, theta, alpha)``.

    Includes the ``det(T22)^(1/2)`` prefactor. When every site is z-type and
    the flipped-spin parity is odd the element is returned as exact zero.
    With separate bra and ket angles an extra global phase
    ``exp(-i (sum phi_bra - sum phi_ket))`` appears; it is 1 for shared angles.
    """
    _check_bd(bd, cfg.L)
    zocc = _z_like_occupations(cfg)
    if zocc is not None and _parity_forbidden_z(zocc):
        return 0j
    L = cfg.L
    ang = cfg.index_angles
    s = cfg.spins
    down = s == -1
    alpha = ang[:, 2]
    sign = np.r_[np.ones(L), -np.ones(L)]
    phase_arg = np.sum(sign * alpha * down) + np.sum(sign * ang[:, 0])
    phase = np.exp(-1j * phase_arg)
    return complex(phase * bd.amplitude * pfaffian(kernel_pauli(bd, pair, cfg)))


def _table_entry(mu: str, nu: str, SA: complex, Sp: float, sm: int, sn: int) -> complex:
    """One kernel entry for index ``m`` in basis ``mu`` and ``n > m`` in ``nu`` (bra side)."""
    um, un = (1 + sm) // 2, (1 + sn) // 2
    dm, dn = (1 - sm) // 2, (1 - sn) // 2
    r2 = np.sqrt(2.0)
    if (mu, nu) == ("z", "z"):
        return um * un * SA + dm * dn * Sp
    if (mu, nu) == ("x", "x"):
        return (SA + sm * sn * Sp) / 2
    if (mu, nu) == ("y", "y"):
        return (-SA + sm * sn * Sp) / 2
    if (mu, nu) == ("z", "x"):
        return (um * SA - sn * dm * Sp) / r2
    if (mu, nu) == ("x", "z"):
        return (un * SA - sm * dn * Sp) / r2
    if (mu, nu) == ("z", "y"):
        return (um * 1j * SA - sn * dm * Sp) / r2
    if (mu, nu) == ("y", "z"):
        return (un * 1j * SA - sm * dn * Sp) / r2
    return (1j * SA + sm * sn * Sp) / 2  # (x, y) and (y, x)


def kernel_special(basis_pair: tuple[str, str], bd: BlockDecomposition, pair: SignPair,
                   bra: Sequence[int], ket: Sequence[int]) -> np.ndarray:
    """Closed-form kernel with every bra site in basis ``mu`` and every ket site in ``nu``.

    Each entry ``(m, n)`` uses the table formula for the bases of indices
    ``m`` and ``n``. Those formulas carry the bra-side phase ``+i`` per
    y-index; a y-index on the ket side has ``phi_bar = -pi/2``, so the
    ``Sigma*A`` term is negated once per ket-side y-index.
    """
    mu, nu = basis_pair
    if mu not in BASIS_ANGLES or nu not in BASIS_ANGLES:
        raise ValidationError(f"unsupported basis pair {basis_pair!r}")
    cfg = SpinConfiguration(tuple(bra), tuple(ket))
    _check_bd(bd, cfg.L)
    L = cfg.L
    s = cfg.spins
    bases = [mu] * L + [nu] * L
    K = np.zeros((2 * L, 2 * L), dtype=complex)
    for m in range(2 * L):
        for n in range(m + 1, 2 * L):
            SA = pair.sigma[m, n] * bd.kernelA[m, n]
            flips = (m >= L and nu == "y") + (n >= L and nu == "y")
            K[m, n] = _table_entry(bases[m], bases[n], SA * (-1) ** flips,
                                   float(pair.sigma_prime[m, n]), int(s[m]), int(s[n]))
    return K - K.T


def special_angles(basis_pair: tuple[str, str], L: int) -> tuple[tuple[float, float, float], ...]:
    """Per-index angle list (bra sites in ``mu``, ket sites in ``nu``)."""
    mu, nu = basis_pair
    return (BASIS_ANGLES[mu],) * L + (BASIS_ANGLES[nu],) * L


def homogeneous_angles(L: int, basis: str) -> tuple[tuple[float, float, float], ...]:
    """The same named basis on every site."""
    return (BASIS_ANGLES[basis],) * L


def generating_function(bd: BlockDecomposition, pair: SignPair, lam: Sequence[complex]) -> complex:
    """``sum_{J,I} <J|G|I> prod_{j in J0 u I0} lambda_j`` as one Pfaffian.

    ``lam[m]`` for ``m < L`` weights bra mode ``m + 1``, ``lam[L + i]`` ket
    mode ``i + 1``. Includes the ``det(T22)^(1/2)`` prefactor.
    """
    lam = np.asarray(lam, dtype=complex)
    if lam.shape != (2 * bd.L,):
        raise ValidationError(f"lambda must have length {2 * bd.L}")
    K = pair.sigma * bd.kernelA + pair.sigma_prime * np.outer(lam, lam)
    return complex(bd.amplitude * pfaffian(_antisym(K)))


def generating_function_sum(bd: BlockDecomposition, lam: Sequence[complex]) -> complex:
    """Explicit ``4^L``-term sum defining the generating function."""
    lam = np.asarray(lam, dtype=complex)
    L = bd.L
    total = 0j
    for bra in itertools.product((1, -1), repeat=L):
        for ket in itertools.product((1, -1), repeat=L):
            weight = np.prod([lam[j] for j in range(L) if bra[j] == -1]) * \
                np.prod([lam[L + i] for i in range(L) if ket[i] == -1])
            total += element_computational_spins(bd, bra, ket) * weight
    return complex(total)


def diagonal_probability(G: np.ndarray, config: Sequence[int]) -> float:
    """``det[(I - I_occ G) / 2]`` with ``I_occ = diag(-1 occupied, +1 empty)``.

    ``config`` holds ``+1`` for an occupied site and ``-1`` for an empty one.
    """
    G = np.asarray(G)
    cfg = np.asarray(config)
    L = G.shape[0]
    if G.shape != (L, L) or cfg.shape != (L,):
        raise ValidationError("G must be LxL and config of length L")
    if np.any((cfg != 1) & (cfg != -1)):
        raise ValidationError("config entries must be +1 (occupied) or -1 (empty)")
    signs = np.where(cfg == 1, -1.0, 1.0)
    if L == 0:
        return 1.0
    return float(np.real(np.linalg.det((np.eye(L) - signs[:, None] * G) / 2)))
