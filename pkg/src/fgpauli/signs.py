"""Sign-encoding matrix pairs ``(Sigma, Sigma')``.

Both matrices are ``2L x 2L`` antisymmetric with off-diagonal entries
``+-1``. ``Sigma`` must give the same sign on every perfect matching,
``+1`` when ``L mod 4`` is 0 or 1 and ``-1`` otherwise; every such matrix has
the form ``Sigma_ij = sign * p_i * p_j`` (``i < j``). ``Sigma'`` then follows
entrywise from ``Sigma`` (see :func:`sigma_prime_from_sigma`).

Indices in docstrings are 1-based; arrays are 0-based.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .gaussian import BlockDecomposition, Diagnostics, GaussianSpec, decompose, random_spec
from .linalg import perfect_matchings

MAX_ENUM_L = 6


def required_matching_sign(L: int) -> int:
    """Product of ``Sigma`` over any perfect matching."""
    return 1 if L % 4 in (0, 1) else -1


def _antisym_from_upper(U: np.ndarray) -> np.ndarray:
    U = np.triu(U, 1)
    return (U - U.T).astype(np.int8)


def sigma_prime_from_sigma(sigma: np.ndarray, L: int) -> np.ndarray:
    """``Sigma'`` determined by ``Sigma`` entrywise for ``n < m``::

        (-1)^(n+m+1)          Sigma_nm    if m <= L
        (-1)^(L+1)(-1)^(n+m+1) Sigma_nm   if n <= L < m
        -(-1)^(n+m+1)         Sigma_nm    if L < n
    """
    n2 = 2 * L
    idx = np.arange(1, n2 + 1)
    n, m = np.meshgrid(idx, idx, indexing="ij")
    base = np.where((n + m + 1) % 2, -1, 1)
    factor = np.where(m <= L, base, np.where(n <= L, (-1) ** (L + 1) * base, -base))
    return _antisym_from_upper(factor * np.asarray(sigma))


@dataclass(frozen=True)
class SignPair:
    """A pair ``(Sigma, Sigma')`` with optional generating sign vector.

    When ``p`` is set, ``Sigma_ij = sign * p_i * p_j`` for ``i < j``.
    """

    L: int
    sigma: np.ndarray
    sigma_prime: np.ndarray
    p: tuple[int, ...] | None = None
    sign: int = 1
    label: str = ""

    def __post_init__(self) -> None:
        for name in ("sigma", "sigma_prime"):
            a = np.array(getattr(self, name), dtype=np.int8)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        if self.sigma.shape != (2 * self.L, 2 * self.L) or self.sigma_prime.shape != self.sigma.shape:
            raise ValidationError(f"sign matrices must be {2 * self.L}x{2 * self.L}")

    def key(self) -> bytes:
        return self.sigma.tobytes() + self.sigma_prime.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignPair):
            return NotImplemented
        return self.L == other.L and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.L, self.key()))

    def __neg__(self) -> "SignPair":
        return SignPair(self.L, -self.sigma, -self.sigma_prime, self.p, -self.sign, self.label)

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "p": None if self.p is None else list(self.p),
            "sign": self.sign,
            "sigma": self.sigma.astype(int).tolist(),
            "sigma_prime": self.sigma_prime.astype(int).tolist(),
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "SignPair":
        if isinstance(data, str):
            data = json.loads(data)
        L = int(data["L"])
        p = data.get("p")
        return cls(L, np.array(data["sigma"]), np.array(data["sigma_prime"]),
                   None if p is None else tuple(int(x) for x in p), int(data.get("sign", 1)))


def _pair_from_vector(p: Sequence[int], sign: int, L: int, label: str = "") -> SignPair:
    p = np.asarray(p, dtype=np.int64)
    if p[0] < 0:
        p = -p
    sigma = _antisym_from_upper(sign * np.outer(p, p))
    return SignPair(L, sigma, sigma_prime_from_sigma(sigma, L), tuple(int(x) for x in p), sign, label)


def from_p_vector(p: Sequence[int], L: int, sign: int = 1) -> SignPair:
    """Pair with ``Sigma_ij = sign * p_i p_j`` and ``Sigma'`` from the relations.

    Raises
    ------
    ValidationError
        If the matching product ``sign^L * prod(p)`` differs from
        :func:`required_matching_sign`.
    """
    p = [int(x) for x in p]
    if len(p) != 2 * L or any(x not in (1, -1) for x in p):
        raise ValidationError(f"p must be a +-1 vector of length {2 * L}")
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    if sign**L * int(np.prod(p)) != required_matching_sign(L):
        raise ValidationError(
            f"prod(p) = {int(np.prod(p))} has the wrong parity for L = {L} (L mod 4 = {L % 4})")
    return _pair_from_vector(p, sign, L)


def canonical_pair(L: int) -> SignPair:
    """The pair given by the ``L mod 4`` sign rules.

    ``Sigma`` (``m < n``): all ``+1`` for ``L mod 4`` in {0, 1}; ``+1`` in
    row 1 and ``-1`` elsewhere for 2; all ``-1`` for 3. ``Sigma'`` is built
    from its first superdiagonal and the row/column recursion of each case.
    """
    if L < 1:
        raise ValidationError("L must be >= 1")
    n = 2 * L
    r = L % 4
    S = np.zeros((n, n), dtype=np.int64)
    for m in range(1, n + 1):
        for k in range(m + 1, n + 1):
            if r in (0, 1):
                S[m - 1, k - 1] = 1
            elif r == 3:
                S[m - 1, k - 1] = -1
            else:
                S[m - 1, k - 1] = 1 if m == 1 else -1

    P = np.zeros((n, n), dtype=np.int64)
    for m in range(1, n):
        if r == 0:
            v = 1 if m < L else -1
        elif r == 1:
            v = 1 if m <= L else -1
        elif r == 2:
            v = 1 if (m == 1 or m >= L) else -1
        else:
            v = -1 if m <= L else 1
        P[m - 1, m] = v
    # higher superdiagonals, P[m-1, m+i-1] holds Sigma'_{m, m+i}
    for i in range(2, n):
        for m in range(n - i, 0, -1):
            k = m + i
            if r == 0:
                v = -P[m, k - 1]
            elif r in (1, 3):
                v = -P[m - 1, k - 2]
            else:
                v = P[m, k - 1] if m == 1 else -P[m, k - 1]
            P[m - 1, k - 1] = v

    if r in (0, 1):
        p, sign = (1,) * n, 1
    elif r == 3:
        p, sign = (1,) * n, -1
    else:
        p, sign = (1,) + (-1,) * (n - 1), -1
    return SignPair(L, _antisym_from_upper(S), _antisym_from_upper(P), p, sign, "canonical")


def conjugate(pair: SignPair, p: Sequence[int]) -> SignPair:
    """Conjugate both matrices by ``diag(p)`` and fix the Pfaffian sign if needed.

    When ``prod(p) = -1`` the conjugation flips every Pfaffian; it is undone by
    negating the whole pair (odd ``L``) or by negating everything outside the
    first row and column (even ``L``).
    """
    p = np.asarray(p, dtype=np.int64)
    L = pair.L
    S = p[:, None] * pair.sigma * p[None, :]
    Sp = p[:, None] * pair.sigma_prime * p[None, :]
    new_p = None if pair.p is None else p * np.asarray(pair.p)
    sign = pair.sign
    if int(np.prod(p)) == -1:
        if L % 2:
            S, Sp, sign = -S, -Sp, -sign
        else:
            d = np.ones(2 * L, dtype=np.int64)
            d[0] = -1
            S = -(d[:, None] * S * d[None, :])
            Sp = -(d[:, None] * Sp * d[None, :])
            sign = -sign
            if new_p is not None:
                new_p = d * new_p
    if new_p is not None and new_p[0] < 0:
        new_p = -new_p
    return SignPair(L, S, Sp, None if new_p is None else tuple(int(x) for x in new_p), sign)


def enumerate_pairs(L: int) -> list[SignPair]:
    """All distinct pairs reachable from :func:`canonical_pair` by conjugation.

    Sign vectors are taken with ``p_1 = +1`` (global flips act trivially)
    in lexicographic order. Duplicates are dropped, keeping the first.
    """
    if L < 1 or L > MAX_ENUM_L:
        raise ValidationError(f"enumeration supports 1 <= L <= {MAX_ENUM_L}")
    base = canonical_pair(L)
    seen: set[bytes] = set()
    out: list[SignPair] = []
    for tail in itertools.product((1, -1), repeat=2 * L - 1):
        pair = conjugate(base, (1,) + tail)
        k = pair.key()
        if k in seen:
            continue
        seen.add(k)
        out.append(SignPair(L, pair.sigma, pair.sigma_prime, pair.p, pair.sign, f"#{len(out)}"))
    return out


def matching_products(sigma: np.ndarray) -> set[int]:
    """Set of values of ``prod Sigma_ij`` over all perfect matchings (exhaustive)."""
    n = sigma.shape[0]
    return {int(np.prod([sigma[i, j] for i, j in m])) for m in perfect_matchings(range(n))}


def structural_check(pair: SignPair) -> Diagnostics:
    """Entries, antisymmetry, matching-product sign and ``Sigma'`` relations."""
    S, Sp, L = pair.sigma.astype(int), pair.sigma_prime.astype(int), pair.L
    off = ~np.eye(2 * L, dtype=bool)
    details: dict = {
        "entries": bool(np.all(np.abs(S[off]) == 1) and np.all(np.abs(Sp[off]) == 1)
                        and not S.diagonal().any() and not Sp.diagonal().any()),
        "antisymmetric": bool(np.array_equal(S, -S.T) and np.array_equal(Sp, -Sp.T)),
        "relations": bool(np.array_equal(Sp, sigma_prime_from_sigma(S, L))),
    }
    if L <= MAX_ENUM_L:
        prods = matching_products(S)
        details["matching_products"] = sorted(prods)
        details["matching"] = prods == {required_matching_sign(L)}
    else:
        # closed form: every matching product equals sign^L * prod(p)
        details["matching"] = pair.p is not None and \
            pair.sign**L * int(np.prod(pair.p)) == required_matching_sign(L)
    ok = all(details[k] for k in ("entries", "antisymmetric", "relations", "matching"))
    return Diagnostics(ok, 0.0 if ok else 1.0, details)


def _spin_configs(L: int, trials: int | None, rng: np.random.Generator):
    if trials is None:
        for bra in itertools.product((1, -1), repeat=L):
            for ket in itertools.product((1, -1), repeat=L):
                yield bra, ket
        return
    for _ in range(trials):
        while True:
            bra = tuple(int(x) for x in rng.choice((1, -1), size=L))
            ket = tuple(int(x) for x in rng.choice((1, -1), size=L))
            # odd total parity is zero on both sides; skip it
            if (bra.count(-1) + ket.count(-1)) % 2 == 0:
                break
        yield bra, ket


def validate_pair(pair: SignPair, spec: GaussianSpec | None = None, trials: int | None = None,
                  rng: np.random.Generator | int | None = 0, tol: float = 1e-9) -> Diagnostics:
    """Structural check plus a functional comparison of sigma^z elements.

    The functional part evaluates the sigma^z formula with ``pair`` and the
    computational-basis formula on the same random spec, over every
    configuration (``trials=None``) or ``trials`` random parity-even ones.
    """
    from .elements import element_computational_spins, element_sigma_z

    rng = np.random.default_rng(rng)
    struct = structural_check(pair)
    if spec is None:
        spec = random_spec(pair.L, rng=rng)
    if spec.L != pair.L:
        raise ValidationError(f"pair is for L={pair.L}, spec has L={spec.L}")
    bd: BlockDecomposition = decompose(spec)
    worst = 0.0
    counterexample = None
    scale = max(1.0, float(np.max(np.abs(bd.kernelA)))) if bd.L else 1.0
    for bra, ket in _spin_configs(pair.L, trials, rng):
        a = element_sigma_z(bd, pair, bra, ket)
        b = element_computational_spins(bd, bra, ket)
        dev = abs(a - b) / (scale * max(1.0, abs(bd.amplitude)))
        if dev > worst:
            worst = dev
            counterexample = {"bra": bra, "ket": ket, "sigma_z": a, "computational": b}
    details = dict(struct.details)
    details["functional_max_dev"] = worst
    details["functional"] = worst <= tol
    if counterexample is not None and worst > tol:
        details["counterexample"] = counterexample
    return Diagnostics(struct.passed and worst <= tol, worst, details)
