"""Diagonal series and its factorization identities.

The diagonal series of an alphabet is sum_w w (x) w, truncated per leg.  Its
factorization into a decreasing product of exp(S_l (x) P_l) over Lyndon
words (shuffle on the left leg, concatenation on the right) and the
logarithm identity log D = sum_w w (x) pi1(w) (concatenation on both legs)
are implemented as residual checks: they return the difference polynomial so
failures stay diagnosable term by term.

The Lazard-elimination block is built from the generators r(v t) with v over
the base block T_n and t over the complement, dual to the reversal
polynomials a(v t) up to a global sign.  The sign eps is determined
empirically at build time from the Gram matrix (it comes out -1: already
<a(t), r(t)> = <-t, t> = -1) and is applied uniformly, once per factor, in
every tower.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .alphabet import EMPTY_WORD, Alphabet, Letter, Word, is_lyndon, word_name
from .domains import RATIONAL
from .errors import DomainError
from .lie_bases import LyndonBasis, pi1_project
from .series import NcPoly, TensorPoly, right_bracketing

__all__ = [
    "DiagonalSeries",
    "diagonal_series",
    "mrs_tensor_product",
    "mrs_identity_check",
    "log_diagonal_check",
    "diagonal_fixed_point_residuals",
    "LazardDualFamily",
    "lazard_dual_family",
    "lambda_map",
    "middle_lyndon_words",
    "theorem_diagonal_check",
    "DiagonalTheoremReport",
]


@dataclass(frozen=True)
class DiagonalSeries:
    alphabet: Alphabet
    cap: int
    tensor: TensorPoly


def diagonal_series(alpha: Alphabet, cap: int) -> DiagonalSeries:
    """sum of w (x) w over all words of length <= cap."""
    if cap < 0:
        raise DomainError("cap must be nonnegative")
    terms = {(w, w): 1 for w in alpha.words(cap)}
    return DiagonalSeries(alpha, cap, TensorPoly(RATIONAL, terms, cap, cap))


def _pair_tensor(left: NcPoly, right: NcPoly, cap: int) -> TensorPoly:
    terms = {
        (u, v): cu * cv
        for u, cu in left.terms.items()
        for v, cv in right.terms.items()
        if len(u) <= cap and len(v) <= cap
    }
    return TensorPoly(RATIONAL, terms, cap, cap)


def mrs_tensor_product(basis: LyndonBasis, cap: int, lyndon_words) -> TensorPoly:
    """Ordered product of exp(S_l (x) P_l), shuffle left / conc right.

    ``lyndon_words`` must be supplied in the intended order, left to right
    (decreasing for the factorization of the diagonal series).
    """
    acc = TensorPoly.unit(RATIONAL, cap, cap)
    for l in lyndon_words:
        factor = _pair_tensor(basis.s(l), basis.p(l), cap).exp(left="shuffle", right="conc")
        acc = acc.mul(factor, left="shuffle", right="conc")
    return acc


def mrs_identity_check(alpha: Alphabet, cap: int, basis: LyndonBasis | None = None) -> TensorPoly:
    """Residual of the full decreasing product against the diagonal series."""
    basis = basis or LyndonBasis(alpha, cap)
    product = mrs_tensor_product(basis, cap, basis.lyndon_words(max_len=cap, decreasing=True))
    return product - diagonal_series(alpha, cap).tensor


def log_diagonal_check(alpha: Alphabet, cap: int) -> TensorPoly:
    """Residual of log D against sum_w w (x) pi1(w).

    The logarithm is taken in the same tensor algebra as the factorization
    product (shuffle on the left leg, concatenation on the right); taking
    conc on both legs makes the identity false already in degree 2.
    """
    log = diagonal_series(alpha, cap).tensor.log(left="shuffle", right="conc")
    expected_terms: dict[tuple[Word, Word], Fraction] = {}
    for w in alpha.words(cap, min_len=1):
        for v, c in pi1_project(w).terms.items():
            key = (w, v)
            expected_terms[key] = expected_terms.get(key, Fraction(0)) + c
    return log - TensorPoly(RATIONAL, expected_terms, cap, cap)


def diagonal_fixed_point_residuals(alpha: Alphabet, cap: int) -> tuple[TensorPoly, TensorPoly]:
    """Residuals of nabla D = M D and nabla D = D M with M = sum_t t (x) t."""
    D = diagonal_series(alpha, cap).tensor
    M = TensorPoly(RATIONAL, {((a,), (a,)): 1 for a in alpha.letters}, cap, cap)
    nabla = D - TensorPoly.unit(RATIONAL, cap, cap)
    return nabla - M.mul(D, left="conc", right="conc"), nabla - D.mul(M, left="conc", right="conc")


# -- Lazard elimination block ---------------------------------------------------


def _a_poly(word: Word) -> NcPoly:
    """a(w) = (-1)^|w| reversed(w) as a polynomial."""
    return NcPoly.from_word(RATIONAL, word[::-1], (-1) ** len(word))


@dataclass
class LazardDualFamily:
    """Generators r(v t) of the eliminated ideal with their duals a(v t).

    ``generators`` holds the index words v t (v over the base block, t in the
    complement) with |v t| <= cap; ``epsilon`` is the sign making
    <eps * a(g), r(g')> = delta_{g,g'}.
    """

    n: int
    cap: int
    alphabet: Alphabet
    base: tuple[Letter, ...]
    complement: tuple[Letter, ...]
    generators: list[Word]
    epsilon: int

    def r(self, g: Word) -> NcPoly:
        return right_bracketing(g)

    def a(self, g: Word) -> NcPoly:
        return _a_poly(g)

    def r_product(self, gens) -> NcPoly:
        poly = NcPoly.unit(RATIONAL)
        for g in gens:
            poly = poly.conc(right_bracketing(g))
        return poly

    def a_tower(self, gens, hat: bool = False, signed: bool = False) -> NcPoly:
        """Right-nested half-shuffle tower a(g1) < (a(g2) < (...)).

        With ``signed`` the normalization eps^p is applied; with ``hat`` each
        index word v t is replaced by the polynomial vhat . t before reversal,
        where vhat shuffles the letter powers of v.
        """
        polys = [self._a_of(g, hat) for g in gens]
        tower = polys[-1]
        for p in reversed(polys[:-1]):
            tower = p.half_shuffle(tower)
        if signed:
            tower = tower.scale(self.epsilon ** len(polys))
        return tower

    def _a_of(self, g: Word, hat: bool) -> NcPoly:
        if not hat:
            return _a_poly(g)
        from .series import content_shuffle

        v, t = g[:-1], g[-1]
        arg = content_shuffle(v).conc(NcPoly.from_letter(RATIONAL, t))
        return arg.antipode()

    def generator_tuples(self, total_cap: int, max_factors: int | None = None):
        """All tuples of generators with total degree <= total_cap."""
        by_any = [g for g in self.generators if len(g) <= total_cap]

        def rec(prefix, deg):
            if prefix:
                yield prefix
            if max_factors is not None and len(prefix) >= max_factors:
                return
            for g in by_any:
                if deg + len(g) <= total_cap:
                    yield from rec(prefix + (g,), deg + len(g))

        yield from rec((), 0)

    def gram_residual(self) -> list[tuple[Word, Word, Fraction]]:
        """Entries where <eps a(g1), r(g2)> differs from delta_{g1,g2}."""
        bad = []
        for g1 in self.generators:
            lhs = _a_poly(g1).scale(self.epsilon)
            for g2 in self.generators:
                if len(g1) != len(g2):
                    continue
                val = lhs.pair(right_bracketing(g2))
                want = 1 if g1 == g2 else 0
                if val != want:
                    bad.append((g1, g2, val - want))
        return bad


def lazard_dual_family(n: int, cap: int) -> LazardDualFamily:
    """Build the dual family for the split of the n-strand braid alphabet.

    eps is found from the degree-1 pairing <a(t), r(t)> = -1 and then
    validated against the whole Gram matrix.
    """
    if n < 3:
        raise DomainError("the split needs n >= 3")
    if cap < 1:
        raise DomainError("cap must be >= 1")
    alpha = Alphabet.braid(n)
    base = alpha.base_block()
    complement = tuple(a for a in alpha.letters if a not in base)
    generators = []
    for d in range(0, cap):
        for v in itertools.product(base, repeat=d):
            for t in complement:
                generators.append(v + (t,))
    t0 = complement[0]
    first = _a_poly((t0,)).pair(right_bracketing((t0,)))
    epsilon = 1 if first == 1 else -1
    family = LazardDualFamily(n, cap, alpha, base, complement, generators, epsilon)
    if family.gram_residual():
        raise DomainError("no global sign makes the Gram matrix the identity")
    return family


def lambda_map(n: int, cap: int, hat: bool = False, epsilon: int = 1,
               family: LazardDualFamily | None = None) -> TensorPoly:
    """The tensor sum over generator tuples of (tower) (x) (bracket product).

    With epsilon = 1 this is the literal expansion
    sum_{k>=1} sum a(v1 t1) < (... < a(vk tk)) (x) r(v1 t1)...r(vk tk);
    passing epsilon = -1 weights each tuple by eps^k, which is what makes the
    block a two-sided inverse against the diagonal series.
    """
    family = family or lazard_dual_family(n, cap)
    terms: dict[tuple[Word, Word], Fraction] = {}
    for gens in family.generator_tuples(cap):
        tower = family.a_tower(gens, hat=hat)
        rprod = family.r_product(gens)
        sign = epsilon ** len(gens)
        for u, cu in tower.terms.items():
            if len(u) > cap:
                continue
            for v, cv in rprod.terms.items():
                key = (u, v)
                terms[key] = terms.get(key, 0) + sign * cu * cv
    return TensorPoly(RATIONAL, terms, cap, cap)


# -- the factorization theorem ----------------------------------------------------


def middle_lyndon_words(alpha: Alphabet, basis: LyndonBasis, cap: int, reading: str) -> list[Word]:
    """Candidate middle factors, in globally decreasing order.

    ``mixed_content``: Lyndon words using letters of both the base block T_n
    and its complement.  ``concatenation``: Lyndon words of the literal shape
    l1 l2 with l1 a Lyndon word over T_n and l2 a Lyndon word over the
    complement.
    """
    base = set(alpha.base_block())
    out = []
    for l in basis.lyndon_words(max_len=cap, decreasing=True):
        letters = set(l)
        in_base = letters & base
        in_rest = letters - base
        if not in_base or not in_rest:
            continue
        if reading == "mixed_content":
            out.append(l)
        elif reading == "concatenation":
            k = 0
            while k < len(l) and l[k] in base:
                k += 1
            if 0 < k < len(l) and all(a not in base for a in l[k:]) \
                    and is_lyndon(l[:k], alpha) and is_lyndon(l[k:], alpha):
                out.append(l)
        else:
            raise DomainError(f"unknown reading {reading!r}")
    return out


@dataclass
class DiagonalTheoremReport:
    n: int
    cap: int
    epsilon: int
    form1_residuals: dict[str, TensorPoly]
    form2_residual: TensorPoly
    chosen_reading: str | None
    middle_words: dict[str, list[Word]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "cap": self.cap,
            "epsilon": self.epsilon,
            "chosen_reading": self.chosen_reading,
            "form2_residual_terms": len(self.form2_residual.terms),
            "form1_residual_terms": {
                k: len(v.terms) for k, v in self.form1_residuals.items()
            },
            "middle_words": {
                k: [word_name(w) for w in v] for k, v in self.middle_words.items()
            },
        }


def theorem_diagonal_check(n: int, cap: int) -> DiagonalTheoremReport:
    """Residuals of both factorized forms of the diagonal series.

    Form 1 splits the decreasing product into three blocks (complement
    diagonal, middle, base diagonal); both candidate readings of the middle
    are evaluated and the report records which one, if any, gives a zero
    residual.  Form 2 multiplies the base diagonal by the Lazard block with
    the eps normalization applied.
    """
    alpha = Alphabet.braid(n)
    basis = LyndonBasis(alpha, cap)
    D = diagonal_series(alpha, cap).tensor
    base = set(alpha.base_block())

    decreasing = basis.lyndon_words(max_len=cap, decreasing=True)
    rest_lyndon = [l for l in decreasing if not (set(l) & base)]
    base_lyndon = [l for l in decreasing if set(l) <= base]
    d_rest = mrs_tensor_product(basis, cap, rest_lyndon)
    d_base = mrs_tensor_product(basis, cap, base_lyndon)

    form1_residuals: dict[str, TensorPoly] = {}
    middles: dict[str, list[Word]] = {}
    for reading in ("mixed_content", "concatenation"):
        middle = middle_lyndon_words(alpha, basis, cap, reading)
        middles[reading] = middle
        prod = d_rest.mul(mrs_tensor_product(basis, cap, middle), left="shuffle", right="conc")
        prod = prod.mul(d_base, left="shuffle", right="conc")
        form1_residuals[reading] = prod - D

    family = lazard_dual_family(n, cap)
    block = TensorPoly.unit(RATIONAL, cap, cap) + lambda_map(
        n, cap, epsilon=family.epsilon, family=family
    )
    form2 = d_base.mul(block, left="shuffle", right="conc")
    form2_residual = form2 - D

    chosen = next((r for r in ("mixed_content", "concatenation")
                   if form1_residuals[r].is_zero()), None)
    return DiagonalTheoremReport(
        n=n, cap=cap, epsilon=family.epsilon,
        form1_residuals=form1_residuals, form2_residual=form2_residual,
        chosen_reading=chosen, middle_words=middles,
    )
