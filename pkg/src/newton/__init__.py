"""Newton: dimensionally-annotated sensor invariants.

Compile a specification with :func:`compile_source`, inspect invariants with
:mod:`newton.pi_analysis`, check samples with :mod:`newton.runtime` and hand the
result to other tools with :mod:`newton.interchange`.
"""

from newton.compiler import compile_file, compile_source, compile_sources
from newton.diagnostics import (
    CompileError,
    Diagnostic,
    DomainError,
    LexError,
    LoadError,
    NewtonError,
    ParseError,
    SemanticError,
    SourceSpan,
    UnboundIdentifier,
    UnknownInvariant,
)
from newton.dimensions import DimensionSignature, dim_is_dimensionless, dim_mul, dim_pow
from newton.ir import ConstantDef, InvariantDef, NewtonIR, SignalDef
from newton.pi_analysis import PiGroup, dimension_matrix, pi_groups, rank
from newton.runtime import (
    CheckResult,
    SampleRecord,
    ToleranceConfig,
    check_invariant,
    check_stream,
    eval_expr,
    query_invariant,
)
from newton.semantics import analyze, check_expr

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "CompileError",
    "ConstantDef",
    "Diagnostic",
    "DimensionSignature",
    "DomainError",
    "InvariantDef",
    "LexError",
    "LoadError",
    "NewtonError",
    "NewtonIR",
    "ParseError",
    "PiGroup",
    "SampleRecord",
    "SemanticError",
    "SignalDef",
    "SourceSpan",
    "ToleranceConfig",
    "UnboundIdentifier",
    "UnknownInvariant",
    "analyze",
    "check_expr",
    "check_invariant",
    "check_stream",
    "compile_file",
    "compile_source",
    "compile_sources",
    "dim_is_dimensionless",
    "dim_mul",
    "dim_pow",
    "dimension_matrix",
    "eval_expr",
    "pi_groups",
    "query_invariant",
    "rank",
]
