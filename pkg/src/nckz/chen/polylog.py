"""Multiple polylogarithms, hyperlogarithms, and their generating series.

Conventions (fixed so that the shuffle-character property and the linear
differential equation of the generating series both hold):

    Li_{x0}(z) = log z,      Li_{x1}(z) = -log(1 - z),

with x0 carrying ds/s and x1 carrying ds/(1-s), integrated from 0.  Words
with a trailing x0 block have divergent integrals from the basepoint; they
are evaluated through the shuffle decomposition that peels trailing x0's
off, each block contributing a power of log z.  Words not ending in x0 are
evaluated as convergent power series on the open unit disc, with a rigorous
geometric tail bound; at z = 1 the evaluation is pushed to two series at
1/2 through the path-splitting (Hoelder) convolution.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..alphabet import Alphabet, Letter, Word, parse_word
from ..domains import COMPLEX
from ..errors import AccuracyError, DomainError
from ..lie_bases import LyndonBasis, mrs_assemble
from ..series import TruncatedSeries, shuffle_words
from .connections import OneFormConnection
from .iterated import iterated_integral
from .quadrature import PathSpec, QuadratureConfig

__all__ = [
    "X_ALPHABET",
    "X0",
    "X1",
    "polylog_eval",
    "hyperlog_eval",
    "l_series",
    "phi_kz",
    "regularize_trailing",
]

X_ALPHABET = Alphabet.free(["x0", "x1"])
X0, X1 = X_ALPHABET.letters


def _as_word(w, alpha: Alphabet) -> Word:
    if isinstance(w, str):
        return parse_word(w, alpha)
    return tuple(w)


@lru_cache(maxsize=None)
def _regularize_cached(w: Word, x0: Letter) -> tuple[tuple[int, Word, Fraction], ...]:
    if not w or w[-1] != x0:
        return ((0, w, Fraction(1)),)
    m = 0
    while m < len(w) and w[-1 - m] == x0:
        m += 1
    u = w[:-m]
    # (x0^{sh m} / m!) sh u  =  u . x0^m  +  words with shorter trailing block
    out: dict[tuple[int, Word], Fraction] = {(m, u): Fraction(1)}
    for v, mult in shuffle_words((x0,) * m, u).items():
        if v == w:
            continue
        for j, piece, c in _regularize_cached(v, x0):
            key = (j, piece)
            out[key] = out.get(key, Fraction(0)) - Fraction(mult) * c
    return tuple((j, piece, c) for (j, piece), c in out.items() if c)


def regularize_trailing(w: Word, x0: Letter = X0):
    """Decompose w so that Li_w = sum_j c_j log^j(z)/j! Li_{w_j}.

    Returns triples (j, w_j, c_j) with w_j never ending in x0; the empty
    piece stands for the constant 1.
    """
    return list(_regularize_cached(tuple(w), x0))


# -- convergent series ------------------------------------------------------------


def _series_coeffs(w: Word, n_terms: int) -> np.ndarray:
    """Power-series coefficients of Li_w on the unit disc (w not ending in x0).

    Built from the innermost letter outwards: prepending x0 divides by n,
    prepending x1 integrates the geometric-kernel convolution.
    """
    c = np.zeros(n_terms + 1, dtype=complex)
    n = np.arange(n_terms + 1, dtype=float)
    n[0] = 1.0  # avoid 0/0; index 0 always stays zero
    for a in reversed(w):
        if a == X0 or a.name == "x0":
            c = c / n
        else:
            if not c.any():  # innermost x1: -log(1-z) = sum z^n / n
                c = 1.0 / n
                c[0] = 0.0
            else:
                c = np.concatenate(([0.0], np.cumsum(c)[:-1])) / n
        c[0] = 0.0
    return c


def _disc_eval(w: Word, z: complex, tol: float) -> complex:
    """Evaluate a word not ending in x0 at |z| < 1 with a tail bound."""
    if not w:
        return complex(1.0)
    r = abs(z)
    if r >= 1.0:
        raise DomainError(f"|z| = {r} is outside the open unit disc")
    depth = len(w)
    n_terms = 64
    while True:
        # decreasing tail envelope: |c_n| <= (1 + ln n)^{k-1} / ((k-1)! n)
        env = (1 + math.log(n_terms + 1)) ** (depth - 1) / (
            math.factorial(depth - 1) * (n_terms + 1)
        )
        bound = env * r ** (n_terms + 1) / (1 - r)
        if bound < tol or n_terms > 2 ** 22:
            break
        n_terms *= 2
    if n_terms > 2 ** 22:
        raise AccuracyError(f"series evaluation at |z| = {r} cannot reach {tol}")
    coeffs = _series_coeffs(w, n_terms)
    powers = z ** np.arange(n_terms + 1)
    return complex(coeffs @ powers)


def _tau(w: Word) -> Word:
    """Reverse the word and swap x0 <-> x1 (the path-reversal substitution)."""
    swap = {X0: X1, X1: X0}
    return tuple(swap[a] for a in reversed(w))


def _eval_at_one(w: Word, tol: float) -> complex:
    """Li_w(1) for convergent words via the splitting at 1/2.

    Li_w(1) = sum over deconcatenations w = u v of Li_{tau(u)}(1/2) Li_v(1/2),
    all pieces regularized at 1/2 where the series converge geometrically.
    """
    if not w:
        return complex(1.0)
    if w[0] != X0 or w[-1] != X1:
        raise DomainError(
            "divergent value: Li at 1 needs a word starting with x0 and ending with x1"
        )
    half = complex(0.5)
    total = complex(0.0)
    for k in range(len(w) + 1):
        u, v = w[:k], w[k:]
        total += _regularized_disc(_tau(u), half, tol) * _regularized_disc(v, half, tol)
    return total


def _regularized_disc(w: Word, z: complex, tol: float) -> complex:
    pieces = regularize_trailing(w)
    logz = complex(np.log(z))
    total = complex(0.0)
    for j, piece, c in pieces:
        total += complex(c) * logz ** j / math.factorial(j) * _disc_eval(piece, z, tol)
    return total


def polylog_eval(w, z, tol: float = 1e-12) -> complex:
    """Li_w(z) over the two-letter alphabet, |z| < 1 or z = 1.

    Words ending in x0 are shuffle-regularized (log z powers); at z = 1 only
    convergent words (leading x0, trailing x1) are admitted.
    """
    w = _as_word(w, X_ALPHABET)
    z = complex(z)
    if z == 1:
        return _eval_at_one(w, tol)
    if z.imag == 0 and z.real >= 1:
        raise DomainError("z lies on the cut [1, oo)")
    if z == 0:
        if not w:
            return complex(1.0)
        if w[-1] == X0:
            raise DomainError("divergent value: trailing x0 at z = 0")
        return complex(0.0)
    if abs(z) >= 1:
        raise DomainError("evaluation is supported for |z| < 1 or z = 1")
    return _regularized_disc(w, z, tol)


# -- hyperlogarithms ---------------------------------------------------------------


def hyperlog_eval(w, z, singularities, cfg: QuadratureConfig | None = None,
                  path: PathSpec | None = None) -> complex:
    """Iterated-integral evaluation over letters x0..xN with poles at the
    given singularities (0, a1, ..., aN); x0 carries ds/s, xk carries
    ds/(a_k - s).

    Trailing x0 blocks are regularized exactly as for polylogarithms; the
    convergent pieces are integrated by quadrature along a straight path
    from 0 (or a caller-supplied path).
    """
    cfg = cfg or QuadratureConfig()
    conn = OneFormConnection.hyperlog(singularities)
    alpha = conn.alphabet
    w = _as_word(w, alpha)
    z = complex(z)
    x0 = alpha.letters[0]
    if not w:
        return complex(1.0)
    path = path or PathSpec.line((0.0,), (z,))
    # the basepoint itself sits on the x0 pole; convergent pieces vanish there
    check_path = PathSpec.line((z * 1e-9,), (z,)) if path.start == (0,) else path
    total = complex(0.0)
    logz = complex(np.log(z))
    for j, piece, c in regularize_trailing(w, x0):
        if piece:
            conn.validate_path(check_path, cfg.singularity_margin,
                               [a for a in alpha.letters if a != x0])
            value = iterated_integral(piece, conn, path, cfg)
        else:
            value = complex(1.0)
        total += complex(c) * logz ** j / math.factorial(j) * value
    return total


# -- generating series ---------------------------------------------------------------


def l_series(z, cap: int, tol: float = 1e-12) -> TruncatedSeries:
    """The polylogarithm generating series, assembled as the decreasing
    product of exp(Li_{S_l}(z) P_l) over Lyndon words of length <= cap."""
    z = complex(z)
    basis = LyndonBasis(X_ALPHABET, cap)
    exponents = []
    for l in basis.lyndon_words(decreasing=True):
        c = sum(complex(coeff) * polylog_eval(word, z, tol)
                for word, coeff in basis.s(l).terms.items())
        exponents.append((l, c))
    return mrs_assemble(exponents, basis, cap, COMPLEX)


def phi_kz(cap: int, tol: float = 1e-12) -> TruncatedSeries:
    """The constant grouplike series with exponents Li_{S_l}(1) over
    non-letter Lyndon words (all convergent)."""
    basis = LyndonBasis(X_ALPHABET, cap)
    exponents = []
    for l in basis.lyndon_words(decreasing=True):
        if len(l) == 1:
            continue
        c = sum(complex(coeff) * polylog_eval(word, 1.0, tol)
                for word, coeff in basis.s(l).terms.items())
        exponents.append((l, c))
    return mrs_assemble(exponents, basis, cap, COMPLEX)
