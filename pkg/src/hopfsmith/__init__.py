"""Exact twisted Hopf structures on enveloping algebras of Cartan type S algebras."""

from .cartan_algebras import (
    MatrixLieAlgebra,
    ShiftedSpecialAlgebra,
    enumerate_S_basis,
    s_dimension,
    s_prime_dimension,
    special_algebra,
    witt_algebra,
)
from .coefficients import Fp, PolyPRing, SeriesRing, TruncatedPolyP, TruncatedSeries
from .combinatorics import check_identity_suite, stirling_c, stirling_s
from .errors import ConfigError, HopfsmithError, UnknownGenerator, UnsupportedPrime
from .pbw import Element, EnvelopingAlgebra
from .quantized_hopf import (
    ClosedForm,
    HopfStructure,
    conjugation_structure,
    hopf_axiom_suite,
    hopf_ideal_check,
    modular_setup,
    oracle_report,
)
from .twist_engine import TwistSpec, build_F, build_Finv, check_twist_axiom, zeta_chain

__version__ = "0.1.0"
