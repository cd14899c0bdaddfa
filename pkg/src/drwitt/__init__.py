"""Deligne-Ribet monoids, Siegel theta functions and modular vectors over imaginary quadratic fields."""

from .drmonoid import (AdelicModel, DRMonoidTable, MonoidCongruence, build_dr_monoid,
                       dr_congruent, sim_N_congruence, vector_congruence)
from .mvector import ModularVectorSpec, WittVector, build_modular_vector
from .quadfield import QuadElem, QuadField, QuadIdeal, class_group, parse_ideal, ray_class_group
from .recognize import AlgebraicValue, RecognitionConfig, recognize
from .symplectic import SiegelPoint, TypeDelta, frobenius_reduce, gsp_act
from .theta import BigComplex, ThetaChar, TorsionIndex, theta

__version__ = "0.1.0"
