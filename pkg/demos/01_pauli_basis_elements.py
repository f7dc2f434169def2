"""Matrix elements of a random Gaussian operator in a rotated product basis.

We build a random two-site operator, pick a spin basis per site, and compare
every Pfaffian-based element with the dense Fock-space construction.
"""

import itertools

import numpy as np

from fgpauli import SpinConfiguration, canonical_pair, decompose, element_pauli, random_spec
from fgpauli.oracle import rotated_operator, spins_to_index

rng = np.random.default_rng(7)
L = 2
spec = random_spec(L, rng=rng)
bd = decompose(spec)
pair = canonical_pair(L)

# one (phi, theta, alpha) triple per site: site 1 along x, site 2 tilted
angles = [(0.0, np.pi / 2, 0.0), (0.3, 1.1, 0.0)]
R = rotated_operator(spec, angles)

print("bra ket   Pfaffian formula                dense oracle")
for bra, ket in itertools.product(itertools.product((1, -1), repeat=L), repeat=2):
    v = element_pauli(bd, pair, SpinConfiguration(bra, ket, angles))
    ref = R[spins_to_index(bra), spins_to_index(ket)]
    fmt = lambda s: "".join("+" if x == 1 else "-" for x in s)  # noqa: E731
    print(f"{fmt(bra)}  {fmt(ket)}  {v:.10f}  {ref:.10f}")
