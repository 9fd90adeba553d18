"""nckz: Lyndon/PBW dual bases, shuffle and half-shuffle products, diagonal
series factorizations, infinitesimal-braid ideals, and numeric engines for
iterated path integrals, polylogarithms and KZ-type equations."""

from .alphabet import (
    Alphabet,
    Letter,
    Word,
    braid_letter,
    compare_letters,
    enumerate_lyndon,
    free_letter,
    is_lyndon,
    lyndon_factorization,
    parse_word,
    standard_factorization,
)
from .domains import COMPLEX, RATIONAL
from .errors import AccuracyError, DomainError, NckzError, ResourceError
from .series import NcPoly, TensorPoly, TruncatedSeries, max_abs_diff
from .lie_bases import (
    LyndonBasis,
    is_grouplike,
    is_primitive,
    mrs_assemble,
    mrs_factorize,
    pbw_decompose,
    pi1_project,
)

__version__ = "0.1.0"
