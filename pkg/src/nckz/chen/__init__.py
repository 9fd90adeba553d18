"""Numeric iterated integrals, Chen series, polylogarithms and KZ checks."""

from .quadrature import PathSpec, QuadratureConfig
from .connections import AffineArg, LetterForm, OneFormConnection
from .iterated import (
    LinearRepresentation,
    chen_series,
    iterated_integral,
    rational_pairing,
    star_eval,
)
from .polylog import hyperlog_eval, l_series, phi_kz, polylog_eval
from .volterra import chen_braids_h, volterra_iterate
from .kz import kz3_verify, kz4_connection_check

__all__ = [
    "PathSpec",
    "QuadratureConfig",
    "AffineArg",
    "LetterForm",
    "OneFormConnection",
    "LinearRepresentation",
    "chen_series",
    "iterated_integral",
    "rational_pairing",
    "star_eval",
    "polylog_eval",
    "hyperlog_eval",
    "l_series",
    "phi_kz",
    "volterra_iterate",
    "chen_braids_h",
    "kz3_verify",
    "kz4_connection_check",
]
