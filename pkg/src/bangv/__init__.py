"""Exact symbolic engine for the cofree cocommutative coalgebra on a based space.

Elements are rational combinations of kets (a point plus a multiset of
creation labels); the package provides the coproduct, counit, dereliction,
creation and polynomial actions, residue pairing, conversion to generalised
fractions, and the explicit set-partition lifting of linear maps to coalgebra
morphisms.  All arithmetic is exact over Q.
"""

__version__ = "0.1.0"

from .errors import (
    ContextError,
    EngineError,
    EvaluationError,
    ParseError,
    SizeLimitError,
)
from .scalar_poly import (
    Basis,
    Polynomial,
    Rational,
    Vector,
    apply_diff_op,
    as_rational,
    directional_derivative,
    format_rational,
)
from .bang_core import (
    BangElement,
    CanonicalKet,
    GeneralizedFraction,
    TensorElement,
    coproduct,
    counit,
    creation,
    dereliction,
    from_fractions,
    ket,
    poly_action,
    residue_pair,
    to_fractions,
    vacuum,
)
from .lifting import (
    DEFAULT_PARTITION_CAP,
    LinearMapSpec,
    MatrixMapSpec,
    SetPartition,
    bang_map,
    bell_number,
    compose,
    eval_map,
    pair_with_coproduct,
    pair_with_partitions,
    promote,
    promote_ket_terms,
    set_partitions,
)
from .parser import parse, command_source
from .session import Result, Session, execute

__all__ = [
    "__version__",
    "EngineError",
    "ContextError",
    "SizeLimitError",
    "ParseError",
    "EvaluationError",
    "Basis",
    "Vector",
    "Polynomial",
    "Rational",
    "as_rational",
    "format_rational",
    "apply_diff_op",
    "directional_derivative",
    "BangElement",
    "CanonicalKet",
    "TensorElement",
    "GeneralizedFraction",
    "vacuum",
    "ket",
    "creation",
    "coproduct",
    "counit",
    "dereliction",
    "poly_action",
    "residue_pair",
    "to_fractions",
    "from_fractions",
    "SetPartition",
    "set_partitions",
    "bell_number",
    "LinearMapSpec",
    "MatrixMapSpec",
    "compose",
    "eval_map",
    "promote",
    "promote_ket_terms",
    "bang_map",
    "pair_with_coproduct",
    "pair_with_partitions",
    "DEFAULT_PARTITION_CAP",
    "parse",
    "command_source",
    "Session",
    "Result",
    "execute",
]
