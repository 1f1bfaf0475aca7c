"""Rational parametrizations of the components of semisimple three-string
braid group representations, with exact verification tools."""

from .braidrep import BraidRep, burnside_dimension, jacobian_rank, lift, verify_relations
from .dimvectors import (SigmaVector, TauVector, enumerate_components, n_sigma, parse_sigma,
                         tau_for, validate_sigma)
from .parametrize import count_parameters, instantiate, plan_component
from .scalars import EisensteinField, make_prime_field, parse_field

__version__ = "0.1.0"

__all__ = [
    "BraidRep", "burnside_dimension", "jacobian_rank", "lift", "verify_relations",
    "SigmaVector", "TauVector", "enumerate_components", "n_sigma", "parse_sigma", "tau_for",
    "validate_sigma", "count_parameters", "instantiate", "plan_component",
    "EisensteinField", "make_prime_field", "parse_field",
]
