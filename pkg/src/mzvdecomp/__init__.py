"""Write multiple zeta values as exact polynomials in a basis.

Typical use::

    from mzvdecomp import build, default10, parse_expression
    table = build(default10(), 10)
    print(table.decompose(parse_expression("zeta(4,3,3)")))
"""

from .bases import Basis, BasisElement, basis_from_json, default10, hoffman, load_basis
from .decomposer import (
    Certificate,
    Decomposition,
    LinearBasisTable,
    PhiTable,
    Poly,
    build,
    decompose,
    hoffman_coefficient,
    phi,
    verify_identity,
)
from .errors import (
    AmbiguousReconstruction,
    CapExceeded,
    DimensionMismatch,
    InvalidBasis,
    MZVError,
    NotABasis,
    NotConvergent,
    ParseError,
    PrecisionUnreachable,
)
from .exact_numbers import BigReal, bernoulli, binomial, euler_b, reconstruct_rational
from .falgebra import FPoly, FWord
from .numeric import PrecisionPolicy, eval_generator_combination, eval_zeta
from .parsing import parse_expression
from .words import ISymbol, ZetaComb, dual, normalize, rho, word_to_index

__all__ = [name for name in dir() if not name.startswith("_")]
