"""Sign-matrix pairs: enumeration, the matching condition and so(2L) structure.

Each valid pair turns the signed sum over spin flips into one Pfaffian.
Here we count pairs, check the product over every perfect matching, and look
at the Lie algebra the two sign matrices generate.
"""

from fgpauli import canonical_pair, enumerate_pairs
from fgpauli import lie
from fgpauli.signs import matching_products, required_matching_sign

for L in range(1, 5):
    pairs = enumerate_pairs(L)
    ok = all(matching_products(p.sigma) == {required_matching_sign(L)} for p in pairs)
    print(f"L={L}: {len(pairs):4d} pairs, matching condition holds for all: {ok}")

print()
for L in range(2, 6):
    p = canonical_pair(L)
    dim = lie.closure_dimension([p.sigma, p.sigma_prime])
    print(f"L={L}: commutator closure dimension {dim} (so({2 * L}) has {L * (2 * L - 1)})")

print("\ncanonical L=3 sigma:\n", canonical_pair(3).sigma)
