"""Desk-scale fault-tolerance laboratory for QLDPC codes under circuit noise."""

from .codes import (
    CssCode,
    LdpcProfile,
    hgp5_code,
    hgp13_code,
    hypergraph_product,
    ldpc_profile,
    new_css,
    operator_reduced_weight,
    reduced_weight,
    steane_code,
    syndrome,
)
from .pauli import LinearOperatorExpr, PauliOp

__all__ = [
    "CssCode",
    "LdpcProfile",
    "LinearOperatorExpr",
    "PauliOp",
    "hgp5_code",
    "hgp13_code",
    "hypergraph_product",
    "ldpc_profile",
    "new_css",
    "operator_reduced_weight",
    "reduced_weight",
    "steane_code",
    "syndrome",
]

__version__ = "0.1.0"
