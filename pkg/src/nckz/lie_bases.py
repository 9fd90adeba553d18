"""Dual PBW families on Lyndon words, the primitive projector, and the
factorization of grouplike series into an ordered product of exponentials.

For a fixed ordered alphabet the Lie basis {P_l} is built by the recursive
bracketing of standard factorizations, the linear basis {P_w} by products
along nonincreasing Lyndon factorizations, and the dual family {S_w} by

    S_t = t,   S_l = t S_{l'} for Lyndon l = t l',
    S_w = (S_{l1}^{sh i1} sh ... sh S_{lk}^{sh ik}) / (i1! ... ik!)

for w = l1^{i1} ... lk^{ik} with l1 > ... > lk.  S of a general word is
needed by the recursion itself, so both families are built bottom-up by
length and cached.  The defining duality <P_u, S_v> = delta_{u,v} is a test
obligation, not an assumption.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .alphabet import (
    EMPTY_WORD,
    Alphabet,
    Word,
    enumerate_lyndon,
    lyndon_factorization,
    standard_factorization,
    word_name,
)
from .domains import RATIONAL, CoeffDomain
from .errors import DomainError, ResourceError
from .series import NcPoly, TruncatedSeries

__all__ = [
    "LyndonBasis",
    "pi1_project",
    "is_grouplike",
    "is_primitive",
    "mrs_factorize",
    "mrs_assemble",
    "pbw_decompose",
]


class LyndonBasis:
    """Cache of Lyndon words, standard factorizations and the families P/S.

    Built once for (alphabet, cap), then immutable and shareable; queries
    above the cap raise ResourceError rather than growing the cache.
    """

    def __init__(self, alpha: Alphabet, cap: int, lyndon_cap: int = 10**6):
        if cap < 1:
            raise DomainError("cap must be >= 1")
        self.alphabet = alpha
        self.cap = cap
        self.lyndon = enumerate_lyndon(alpha, cap, cap=lyndon_cap)
        self._lyndon_set = set(self.lyndon)
        self._st = {
            l: standard_factorization(l, alpha) for l in self.lyndon if len(l) > 1
        }
        self._p: dict[Word, NcPoly] = {EMPTY_WORD: NcPoly.unit(RATIONAL)}
        self._s: dict[Word, NcPoly] = {EMPTY_WORD: NcPoly.unit(RATIONAL)}

    # -- the Lyndon index ---------------------------------------------------

    def lyndon_words(self, max_len: int | None = None, decreasing: bool = False):
        words = self.lyndon if max_len is None else [l for l in self.lyndon if len(l) <= max_len]
        return list(reversed(words)) if decreasing else list(words)

    def is_lyndon(self, w: Word) -> bool:
        self._check_len(w)
        return w in self._lyndon_set

    def st(self, l: Word) -> tuple[Word, Word]:
        return self._st[l]

    def _check_len(self, w: Word) -> None:
        if len(w) > self.cap:
            raise ResourceError(
                f"word {word_name(w)} exceeds the basis cap {self.cap}"
            )

    # -- the dual families ----------------------------------------------------

    def p(self, w: Word) -> NcPoly:
        """The PBW basis element P_w (a Lie element when w is Lyndon)."""
        self._check_len(w)
        cached = self._p.get(w)
        if cached is not None:
            return cached
        if w in self._lyndon_set:
            if len(w) == 1:
                poly = NcPoly.from_word(RATIONAL, w)
            else:
                l1, l2 = self._st[w]
                a, b = self.p(l1), self.p(l2)
                poly = a.conc(b) - b.conc(a)
        else:
            poly = NcPoly.unit(RATIONAL)
            for factor in lyndon_factorization(w, self.alphabet):
                poly = poly.conc(self.p(factor))
        self._p[w] = poly
        return poly

    def s(self, w: Word) -> NcPoly:
        """The dual basis element S_w."""
        self._check_len(w)
        cached = self._s.get(w)
        if cached is not None:
            return cached
        if len(w) == 1:
            poly = NcPoly.from_word(RATIONAL, w)
        elif w in self._lyndon_set:
            head = NcPoly.from_word(RATIONAL, w[:1])
            poly = head.conc(self.s(w[1:]))
        else:
            factors = lyndon_factorization(w, self.alphabet)
            groups = [(l, len(list(g))) for l, g in itertools.groupby(factors)]
            poly = NcPoly.unit(RATIONAL)
            denom = 1
            for l, mult in groups:
                sl = self.s(l)
                for _ in range(mult):
                    poly = poly.shuffle(sl)
                denom *= math.factorial(mult)
            poly = poly.scale(Fraction(1, denom))
        self._s[w] = poly
        return poly


# -- primitive projector -------------------------------------------------------


def _ordered_set_partitions(n: int, m: int):
    """Ordered partitions of range(n) into m nonempty blocks (position sets)."""
    if m == 1:
        yield [tuple(range(n))]
        return
    for assignment in itertools.product(range(m), repeat=n):
        blocks = [[] for _ in range(m)]
        for pos, b in enumerate(assignment):
            blocks[b].append(pos)
        if all(blocks):
            yield [tuple(b) for b in blocks]


def pi1_project(w: Word) -> NcPoly:
    """Projection of a word onto shuffle-primitive elements.

    pi1(w) = sum_{m>=1} ((-1)^{m-1}/m) sum <w | u1 sh ... sh um> u1...um,
    evaluated by running over ordered set partitions of the positions of w
    (each block contributes the subword it selects).
    """
    if not w:
        return NcPoly.zero(RATIONAL)
    out: dict[Word, Fraction] = {}
    n = len(w)
    for m in range(1, n + 1):
        coeff = Fraction((-1) ** (m - 1), m)
        for blocks in _ordered_set_partitions(n, m):
            word = tuple(w[i] for b in blocks for i in b)
            out[word] = out.get(word, Fraction(0)) + coeff
    return NcPoly(RATIONAL, out)


# -- characters and infinitesimal characters -------------------------------------


def _coproduct_pairs(alpha: Alphabet, cap: int):
    for total in range(2, cap + 1):
        for du in range(1, total):
            for u in alpha.words(du, du):
                for v in alpha.words(total - du, total - du):
                    yield u, v


def is_grouplike(s: TruncatedSeries, alpha: Alphabet, coproduct: str = "shuffle",
                 tol: float | None = None) -> tuple[bool, tuple[Word, Word] | None]:
    """Friedrichs criterion: <s, u*v> = <s,u><s,v> for the chosen product.

    Returns (ok, witness); the witness is the first failing pair (u, v).
    """
    if not s.domain.eq(s.constant_term(), s.domain.one, tol):
        raise DomainError("grouplike test needs constant term 1")
    for u, v in _coproduct_pairs(alpha, s.cap):
        if coproduct == "shuffle":
            lhs = sum(
                (mult * s.coeff(w) for w, mult in _shuffle_items(u, v) if w in s.terms),
                s.domain.zero,
            )
        elif coproduct == "conc":
            lhs = s.coeff(u + v)
        else:
            raise DomainError(f"unknown coproduct {coproduct!r}")
        if not s.domain.eq(lhs, s.coeff(u) * s.coeff(v), tol):
            return False, (u, v)
    return True, None


def _shuffle_items(u: Word, v: Word):
    from .series import shuffle_words

    return shuffle_words(u, v).items()


def is_primitive(s: NcPoly, alpha: Alphabet, coproduct: str = "shuffle",
                 cap: int | None = None,
                 tol: float | None = None) -> tuple[bool, tuple[Word, Word] | None]:
    """Infinitesimal-character test; conc mode just checks support in letters."""
    if coproduct == "conc":
        for w in s.terms:
            if len(w) != 1:
                return False, (w[: len(w) // 2], w[len(w) // 2:])
        return True, None
    if coproduct != "shuffle":
        raise DomainError(f"unknown coproduct {coproduct!r}")
    cap = cap if cap is not None else (s.cap if s.cap is not None else s.degree())
    for u, v in _coproduct_pairs(alpha, cap):
        lhs = sum(
            (mult * s.coeff(w) for w, mult in _shuffle_items(u, v) if w in s.terms),
            s.domain.zero,
        )
        if not s.domain.eq(lhs, s.domain.zero, tol):
            return False, (u, v)
    return True, None


# -- factorization of grouplike series --------------------------------------------


def pbw_decompose(s: TruncatedSeries, basis: LyndonBasis) -> dict[Word, object]:
    """Coordinates {w -> <s, S_w>} of s in the PBW basis, up to the cap."""
    out = {}
    for w in basis.alphabet.words(min(s.cap, basis.cap)):
        c = s.pair(basis.s(w).to_domain(s.domain))
        if not s.domain.is_zero(c):
            out[w] = c
    return out


def mrs_factorize(s: TruncatedSeries, basis: LyndonBasis,
                  tol: float | None = None) -> list[tuple[Word, object]]:
    """Exponents of the decreasing product of exp(<s,S_l> P_l) over Lyndon l.

    The input must be a shuffle character; otherwise a DomainError carrying
    the offending pair is raised.  Exponents are returned in decreasing
    Lyndon order, zero entries included so the order is explicit.
    """
    ok, witness = is_grouplike(s, basis.alphabet, "shuffle", tol)
    if not ok:
        u, v = witness
        raise DomainError(
            f"series is not grouplike: character fails at ({word_name(u)}, {word_name(v)})"
        )
    return [
        (l, s.pair(basis.s(l).to_domain(s.domain)))
        for l in basis.lyndon_words(max_len=s.cap, decreasing=True)
    ]


def mrs_assemble(exponents, basis: LyndonBasis, cap: int,
                 domain: CoeffDomain | None = None) -> TruncatedSeries:
    """Rebuild the ordered product prod exp(c_l P_l) from (lyndon, c_l) pairs.

    Pairs must be supplied in the intended product order (left to right).
    """
    first = next((c for _, c in exponents), None)
    if domain is None:
        domain = RATIONAL if first is None or isinstance(first, (int, Fraction)) else None
        if domain is None:
            from .domains import COMPLEX

            domain = COMPLEX
    acc = TruncatedSeries.unit(domain, cap)
    for l, c in exponents:
        if domain.is_zero(domain.coerce(c)):
            continue
        term = basis.p(l).to_domain(domain).scale(c).truncate(cap)
        acc = acc.conc(term.exp())
    return acc
