"""Exact computations with pointed modules over string algebras."""

__version__ = "0.1.0"

from .algebra import BoundQuiverAlgebra, is_string_algebra
from .files import load_algebra, load_pair
from .functor import TensorFunctor, apply_to_module, load_functor, verify_embedding_transfer
from .linalg import Field
from .pointed import PointedModule, classify, generate_fragment, pointed_hom_exists, pointed_pushout
from .rep import Representation, hom_space, is_indecomposable, is_isomorphic, string_module
from .strings import BandWord, QGenPair, StringWord, compare, enumerate_chain, is_qgen_pair, is_string
from .verify import verify_canonical_instance, verify_dense_chain, verify_independent_pair

__all__ = [
    "BandWord", "BoundQuiverAlgebra", "Field", "PointedModule", "QGenPair", "Representation",
    "StringWord", "TensorFunctor", "apply_to_module", "classify", "compare", "enumerate_chain",
    "generate_fragment", "hom_space", "is_indecomposable", "is_isomorphic", "is_qgen_pair",
    "is_string", "is_string_algebra", "load_algebra", "load_functor", "load_pair",
    "pointed_hom_exists", "pointed_pushout", "string_module", "verify_canonical_instance",
    "verify_dense_chain", "verify_embedding_transfer", "verify_independent_pair",
]
