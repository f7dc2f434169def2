"""Matrix elements of fermionic Gaussian operators in product Pauli bases.

Every element is a single Pfaffian of a ``2L x 2L`` kernel built from the
Balian-Brezin decomposition of the operator and a pair of sign matrices.
A dense Fock-space oracle is included for cross-checks.
"""

from .elements import (BASIS_ANGLES, OccupationSets, SpinConfiguration, diagonal_probability,
                       element_computational, element_computational_spins,
                       element_particle_conserving, element_pauli, element_sigma_z,
                       generating_function, generating_function_sum, kernel_pauli,
                       kernel_sigma_z, kernel_special, special_angles)
from .errors import (BranchError, DecompositionError, FGPauliError, ValidationError,
                     VerificationError)
from .gaussian import (BlockDecomposition, Diagnostics, GaussianSpec, decompose,
                       kernel_real_case, mixed_state_checks, normalization, random_spec,
                       spec_from_json, spec_to_json, validate)
from .linalg import commutator, matrix_exp, matrix_log_principal, pfaffian, submatrix_keep
from .signs import (SignPair, canonical_pair, enumerate_pairs, from_p_vector, structural_check,
                    validate_pair)

__version__ = "0.1.0"

__all__ = [
    "BASIS_ANGLES", "BlockDecomposition", "BranchError", "DecompositionError", "Diagnostics",
    "FGPauliError", "GaussianSpec", "OccupationSets", "SignPair", "SpinConfiguration",
    "ValidationError", "VerificationError", "canonical_pair", "commutator", "decompose",
    "diagonal_probability", "element_computational", "element_computational_spins",
    "element_particle_conserving", "element_pauli", "element_sigma_z", "enumerate_pairs",
    "from_p_vector", "generating_function", "generating_function_sum", "kernel_pauli",
    "kernel_real_case", "kernel_sigma_z", "kernel_special", "matrix_exp",
    "matrix_log_principal", "mixed_state_checks", "normalization", "pfaffian", "random_spec",
    "spec_from_json", "spec_to_json", "special_angles", "structural_check", "submatrix_keep",
    "validate", "validate_pair",
]
