"""heisenlab: exact computation with Heisenberg groups H(K).

Fields (prime, extension, rational), the group law and its center,
cocycle extensions, the automorphism parametrization with brute-force
oracles, quadratic-additive extension, monomorphism decomposition as
automorphism-after-functor, the in-group field interpretation, and a
first-order formula evaluator.  Hot scans run on a compiled kernel when
available (see heisenlab.kernels.BACKEND).
"""

from .errors import HeisenlabError
from .fields import (
    Field,
    FieldElement,
    FieldHom,
    LinearRetraction,
    canonical_embedding,
    complement_basis,
    field_make,
    frobenius,
    retraction_for,
)
from .heisenberg import HElement, HGroup, h_comm, h_inv, h_mul, hgroup
from .tables import FnTable

__version__ = "0.1.0"

__all__ = [
    "Field",
    "FieldElement",
    "FieldHom",
    "FnTable",
    "HElement",
    "HGroup",
    "HeisenlabError",
    "LinearRetraction",
    "canonical_embedding",
    "complement_basis",
    "field_make",
    "frobenius",
    "h_comm",
    "h_inv",
    "h_mul",
    "hgroup",
    "retraction_for",
    "__version__",
]
