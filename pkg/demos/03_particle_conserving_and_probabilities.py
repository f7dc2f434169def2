"""Two special cases with cheaper formulas.

A particle-conserving operator needs only a determinant, and the diagonal of
a real mixed state follows from its correlation matrix alone.
"""

import itertools

import numpy as np

from fgpauli import (OccupationSets, decompose, diagonal_probability, element_computational,
                     element_particle_conserving, random_spec)
from fgpauli.gaussian import CONSERVING, MIXED
from fgpauli.oracle import correlation_oracle

rng = np.random.default_rng(11)
L = 3

spec = random_spec(L, CONSERVING, rng=rng)
bd = decompose(spec)
occ = OccupationSets(L, (1, 3), (2, 3))
print("determinant route:", element_particle_conserving(spec.A_small, occ))
print("Pfaffian route:   ", element_computational(bd, occ))
print("number-changing element:", element_particle_conserving(spec.A_small,
                                                            OccupationSets(L, (1,), (1, 2))))

mixed = random_spec(L, MIXED, rng=rng, real=True)
G = correlation_oracle(mixed).real
probs = {cfg: diagonal_probability(G, cfg) for cfg in itertools.product((1, -1), repeat=L)}
for cfg, p in probs.items():
    print("".join("+" if s == 1 else "-" for s in cfg), f"{p:.6f}")
print("total:", sum(probs.values()))
