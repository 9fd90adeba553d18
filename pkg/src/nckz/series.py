"""Sparse noncommutative polynomials, truncated series and tensor polynomials.

Terms are hash-keyed maps from words (tuples of Letter) to coefficients in a
pluggable domain; zero coefficients are never stored.  Degree-truncated
series carry a cap and all arithmetic silently discards words longer than
the cap, which is the computable stand-in for working with formal series
modulo high-degree terms.

Products follow the usual conventions: ``conc`` is concatenation, ``shuffle``
the commutative interleaving product, and ``half_shuffle`` the left-anchored
Zinbiel half of the shuffle, defined termwise by

    1 < (tH) = 0,   (tH) < 1 = tH,   (tH) < R = t(H sh R)   for R != 1.

All values are immutable after construction; every operation is pure.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .alphabet import EMPTY_WORD, Letter, Word, word_name
from .domains import COMPLEX, RATIONAL, CoeffDomain, domain_by_name
from .errors import DomainError

__all__ = [
    "NcPoly",
    "TruncatedSeries",
    "TensorPoly",
    "shuffle_words",
    "half_shuffle_words",
    "right_bracketing",
    "right_bracketing_adjoint",
    "letters_shuffle",
    "content_shuffle",
    "map_letters",
    "max_abs_diff",
]


def _canonical_key(w: Word) -> tuple:
    return (len(w), tuple(a.name for a in w))


@lru_cache(maxsize=None)
def _shuffle_cached(u: Word, v: Word) -> Mapping[Word, int]:
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out: dict[Word, int] = {}
    for w, c in _shuffle_cached(u[1:], v).items():
        key = (u[0],) + w
        out[key] = out.get(key, 0) + c
    for w, c in _shuffle_cached(u, v[1:]).items():
        key = (v[0],) + w
        out[key] = out.get(key, 0) + c
    return out


def shuffle_words(u: Word, v: Word) -> Mapping[Word, int]:
    """Shuffle product of two words as a word -> multiplicity map."""
    if _canonical_key(u) > _canonical_key(v):
        u, v = v, u  # the product is commutative; halve the cache
    return _shuffle_cached(u, v)


def half_shuffle_words(u: Word, v: Word) -> Mapping[Word, int]:
    """Half-shuffle u < v of two words (left argument keeps its first letter)."""
    if not u:
        return {}
    if not v:
        return {u: 1}
    return {(u[0],) + w: c for w, c in shuffle_words(u[1:], v).items()}


class NcPoly:
    """A finitely supported word -> coefficient map over a coefficient domain."""

    __slots__ = ("domain", "terms")

    cap: int | None = None

    def __init__(self, domain: CoeffDomain, terms: Mapping[Word, object] | None = None):
        self.domain = domain
        clean: dict[Word, object] = {}
        if terms:
            for w, c in terms.items():
                c = domain.coerce(c)
                if not domain.is_zero(c):
                    clean[w] = c
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, domain: CoeffDomain) -> "NcPoly":
        return cls(domain, {})

    @classmethod
    def unit(cls, domain: CoeffDomain) -> "NcPoly":
        return cls(domain, {EMPTY_WORD: domain.one})

    @classmethod
    def from_word(cls, domain: CoeffDomain, w: Word, coeff=1) -> "NcPoly":
        return cls(domain, {w: coeff})

    @classmethod
    def from_letter(cls, domain: CoeffDomain, a: Letter, coeff=1) -> "NcPoly":
        return cls(domain, {(a,): coeff})

    def _make(self, terms: Mapping[Word, object], cap: int | None) -> "NcPoly":
        if cap is None:
            return NcPoly(self.domain, terms)
        return TruncatedSeries(self.domain, terms, cap)

    def _join_cap(self, other: "NcPoly") -> int | None:
        caps = [c for c in (self.cap, other.cap) if c is not None]
        return min(caps) if caps else None

    def _check_domain(self, other: "NcPoly") -> None:
        if self.domain is not other.domain and self.domain.name != other.domain.name:
            raise DomainError(
                f"mixed coefficient domains: {self.domain.name} vs {other.domain.name}"
            )

    # -- inspection --------------------------------------------------------

    def coeff(self, w: Word):
        return self.terms.get(w, self.domain.zero)

    def constant_term(self):
        return self.terms.get(EMPTY_WORD, self.domain.zero)

    def support(self) -> list[Word]:
        return sorted(self.terms, key=_canonical_key)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def min_degree(self) -> int:
        return min((len(w) for w in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def homogeneous_part(self, d: int) -> "NcPoly":
        return self._make({w: c for w, c in self.terms.items() if len(w) == d}, self.cap)

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "NcPoly") -> "NcPoly":
        self._check_domain(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, self.domain.zero) + c
        return self._make(out, self._join_cap(other))

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + other.scale(-1)

    def __neg__(self) -> "NcPoly":
        return self.scale(-1)

    def scale(self, c) -> "NcPoly":
        c = self.domain.coerce(c)
        return self._make({w: c * x for w, x in self.terms.items()}, self.cap)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.domain.name == other.domain.name and self.terms == other.terms

    def __hash__(self):
        return hash((self.domain.name, frozenset(self.terms.items())))

    # -- products ------------------------------------------------------------

    def conc(self, other: "NcPoly") -> "NcPoly":
        self._check_domain(other)
        cap = self._join_cap(other)
        out: dict[Word, object] = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                if cap is not None and len(u) + len(v) > cap:
                    continue
                w = u + v
                out[w] = out.get(w, self.domain.zero) + cu * cv
        return self._make(out, cap)

    def _word_product(self, other: "NcPoly", word_rule) -> "NcPoly":
        self._check_domain(other)
        cap = self._join_cap(other)
        out: dict[Word, object] = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                if cap is not None and len(u) + len(v) > cap:
                    continue
                c = cu * cv
                for w, mult in word_rule(u, v).items():
                    out[w] = out.get(w, self.domain.zero) + c * mult
        return self._make(out, cap)

    def shuffle(self, other: "NcPoly") -> "NcPoly":
        return self._word_product(other, shuffle_words)

    def half_shuffle(self, other: "NcPoly") -> "NcPoly":
        return self._word_product(other, half_shuffle_words)

    def pair(self, other: "NcPoly"):
        """The coefficient pairing  sum_w <self|w> <other|w>."""
        self._check_domain(other)
        small, big = (self.terms, other.terms)
        if len(big) < len(small):
            small, big = big, small
        total = self.domain.zero
        for w, c in small.items():
            if w in big:
                total = total + c * big[w]
        return total

    # -- word-level linear maps ----------------------------------------------

    def antipode(self) -> "NcPoly":
        """w -> (-1)^|w| reversed(w), extended linearly; an involution."""
        out = {
            w[::-1]: (c if len(w) % 2 == 0 else -c) for w, c in self.terms.items()
        }
        return self._make(out, self.cap)

    def truncate(self, cap: int) -> "TruncatedSeries":
        return TruncatedSeries(self.domain, self.terms, cap)

    def as_poly(self) -> "NcPoly":
        return NcPoly(self.domain, self.terms)

    def to_domain(self, domain: CoeffDomain) -> "NcPoly":
        terms = {w: domain.coerce(c) for w, c in self.terms.items()}
        if self.cap is None:
            return NcPoly(domain, terms)
        return TruncatedSeries(domain, terms, self.cap)

    # -- serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "domain": self.domain.name,
            "terms": [
                {"word": [a.name for a in w], "coeff": self.domain.coeff_to_json(c)}
                for w, c in sorted(self.terms.items(), key=lambda kv: _canonical_key(kv[0]))
            ],
        }

    @classmethod
    def from_json(cls, obj: dict, alpha) -> "NcPoly":
        domain = domain_by_name(obj["domain"])
        terms: dict[Word, object] = {}
        for t in obj["terms"]:
            w = tuple(alpha.letter(nm) for nm in t["word"])
            c = domain.coeff_from_json(t["coeff"])
            terms[w] = terms.get(w, domain.zero) + c
        return cls(domain, terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w in self.support():
            bits.append(f"{self.terms[w]}*{word_name(w)}")
        s = " + ".join(bits)
        return s if self.cap is None else f"({s} | cap {self.cap})"


class TruncatedSeries(NcPoly):
    """An NcPoly together with a degree cap enforced by all arithmetic."""

    __slots__ = ("cap",)

    def __init__(self, domain: CoeffDomain, terms: Mapping[Word, object] | None, cap: int):
        if cap < 0:
            raise DomainError("degree cap must be nonnegative")
        self.cap = cap
        if terms:
            terms = {w: c for w, c in terms.items() if len(w) <= cap}
        super().__init__(domain, terms)

    @classmethod
    def unit(cls, domain: CoeffDomain, cap: int) -> "TruncatedSeries":
        return cls(domain, {EMPTY_WORD: domain.one}, cap)

    # -- conc exponentials and friends ----------------------------------------

    def star(self) -> "TruncatedSeries":
        """Truncated Kleene star 1 + S + S^2 + ...; needs <S|1> = 0."""
        if not self.domain.is_zero(self.constant_term()):
            raise DomainError("star needs zero constant term")
        acc = TruncatedSeries.unit(self.domain, self.cap)
        power = acc
        for _ in range(self.cap):
            power = power.conc(self)
            if power.is_zero():
                break
            acc = acc + power
        return acc

    def exp(self) -> "TruncatedSeries":
        """Truncated exponential for conc; needs <S|1> = 0."""
        if not self.domain.is_zero(self.constant_term()):
            raise DomainError("exp needs zero constant term")
        acc = TruncatedSeries.unit(self.domain, self.cap)
        power = acc
        for k in range(1, self.cap + 1):
            power = power.conc(self)
            if power.is_zero():
                break
            acc = acc + power.scale(Fraction(1, math.factorial(k)))
        return acc

    def log(self) -> "TruncatedSeries":
        """Truncated logarithm for conc; needs <S|1> = 1."""
        if not self.domain.eq(self.constant_term(), self.domain.one):
            raise DomainError("log needs constant term 1")
        x = self - TruncatedSeries.unit(self.domain, self.cap)
        acc = TruncatedSeries(self.domain, {}, self.cap)
        power = TruncatedSeries.unit(self.domain, self.cap)
        for k in range(1, self.cap + 1):
            power = power.conc(x)
            if power.is_zero():
                break
            acc = acc + power.scale(Fraction(-1 if k % 2 == 0 else 1, k))
        return acc

    def inverse(self) -> "TruncatedSeries":
        """Conc inverse of a series with constant term 1 (geometric series)."""
        if not self.domain.eq(self.constant_term(), self.domain.one):
            raise DomainError("inverse needs constant term 1")
        x = TruncatedSeries.unit(self.domain, self.cap) - self
        return x.star()


# -- word-level maps ------------------------------------------------------------


def right_bracketing(w: Word, domain: CoeffDomain = RATIONAL) -> NcPoly:
    """r(t1...tm) = ad_{t1} ... ad_{t_{m-1}} t_m expanded into words; r(1) = 0."""
    if not w:
        return NcPoly.zero(domain)
    poly = NcPoly.from_letter(domain, w[-1])
    for a in reversed(w[:-1]):
        letter = NcPoly.from_letter(domain, a)
        poly = letter.conc(poly) - poly.conc(letter)
    return poly


@lru_cache(maxsize=None)
def _adjoint_bracketing_terms(w: Word) -> Mapping[Word, int]:
    if not w:
        return {}
    if len(w) == 1:
        return {w: 1}
    head, tail = w[0], w[-1]
    out: dict[Word, int] = {}
    for u, c in _adjoint_bracketing_terms(w[1:]).items():
        key = (head,) + u
        out[key] = out.get(key, 0) + c
    for u, c in _adjoint_bracketing_terms(w[:-1]).items():
        key = (tail,) + u
        out[key] = out.get(key, 0) - c
    return out


def right_bracketing_adjoint(w: Word, domain: CoeffDomain = RATIONAL) -> NcPoly:
    """The map adjoint to right_bracketing under the pairing.

    Defined by rcheck(1) = 0, rcheck(t) = t and
    rcheck(t1 w t2) = t1 rcheck(w t2) - t2 rcheck(t1 w).
    """
    return NcPoly(domain, dict(_adjoint_bracketing_terms(w)))


def letters_shuffle(w: Word, domain: CoeffDomain = RATIONAL) -> NcPoly:
    """The shuffle product of the individual letters of w (t1 sh ... sh tm)."""
    poly = NcPoly.unit(domain)
    for a in w:
        poly = poly.shuffle(NcPoly.from_letter(domain, a))
    return poly


def content_shuffle(w: Word, domain: CoeffDomain = RATIONAL) -> NcPoly:
    """The shuffle, over distinct letters t of w, of the words t^{|w|_t}.

    Equal to letters_shuffle(w) divided by the product of the content
    factorials (not by |w|! in general).
    """
    poly = NcPoly.unit(domain)
    seen: dict[Letter, int] = {}
    for a in w:
        seen[a] = seen.get(a, 0) + 1
    for a, k in seen.items():
        poly = poly.shuffle(NcPoly.from_word(domain, (a,) * k))
    return poly


def map_letters(poly: NcPoly, mapping: Mapping[Letter, tuple[object, Word]],
                domain: CoeffDomain | None = None,
                cap: int | None = None) -> NcPoly:
    """Substitute each letter by (scalar, word) multiplicatively, term by term.

    Letters absent from the mapping are kept as themselves with scalar 1.
    """
    domain = domain or poly.domain
    out: dict[Word, object] = {}
    for w, c in poly.terms.items():
        scalar = domain.one
        parts: list[Letter] = []
        for a in w:
            if a in mapping:
                s, target = mapping[a]
                scalar = scalar * domain.coerce(s)
                parts.extend(target)
            else:
                parts.append(a)
        new = tuple(parts)
        if cap is not None and len(new) > cap:
            continue
        out[new] = out.get(new, domain.zero) + domain.coerce(c) * scalar
    if cap is None and poly.cap is None:
        return NcPoly(domain, out)
    return TruncatedSeries(domain, out, cap if cap is not None else poly.cap)


def max_abs_diff(a: NcPoly, b: NcPoly) -> float:
    """Largest absolute coefficient difference between two polynomials."""
    diff = 0.0
    for w in set(a.terms) | set(b.terms):
        diff = max(diff, abs(complex(a.coeff(w)) - complex(b.coeff(w))))
    return diff


# -- tensor polynomials -----------------------------------------------------------


_LEG_RULES = {
    "conc": None,
    "shuffle": shuffle_words,
    "half_shuffle": half_shuffle_words,
}


def _leg_product(u: Word, v: Word, kind: str) -> Mapping[Word, int]:
    if kind == "conc":
        return {u + v: 1}
    return _LEG_RULES[kind](u, v)


class TensorPoly:
    """Finitely supported (word, word) -> coefficient maps with per-leg caps."""

    __slots__ = ("domain", "terms", "left_cap", "right_cap")

    def __init__(self, domain: CoeffDomain, terms=None,
                 left_cap: int | None = None, right_cap: int | None = None):
        self.domain = domain
        self.left_cap = left_cap
        self.right_cap = right_cap
        clean: dict[tuple[Word, Word], object] = {}
        if terms:
            for (u, v), c in terms.items():
                if left_cap is not None and len(u) > left_cap:
                    continue
                if right_cap is not None and len(v) > right_cap:
                    continue
                c = domain.coerce(c)
                if not domain.is_zero(c):
                    clean[(u, v)] = c
        self.terms = clean

    @classmethod
    def unit(cls, domain: CoeffDomain, left_cap=None, right_cap=None) -> "TensorPoly":
        return cls(domain, {(EMPTY_WORD, EMPTY_WORD): domain.one}, left_cap, right_cap)

    def _join_caps(self, other: "TensorPoly") -> tuple[int | None, int | None]:
        def join(a, b):
            vals = [c for c in (a, b) if c is not None]
            return min(vals) if vals else None
        return join(self.left_cap, other.left_cap), join(self.right_cap, other.right_cap)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, u: Word, v: Word):
        return self.terms.get((u, v), self.domain.zero)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, self.domain.zero) + c
        lc, rc = self._join_caps(other)
        return TensorPoly(self.domain, out, lc, rc)

    def __sub__(self, other: "TensorPoly") -> "TensorPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "TensorPoly":
        c = self.domain.coerce(c)
        return TensorPoly(self.domain, {k: c * x for k, x in self.terms.items()},
                          self.left_cap, self.right_cap)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self.domain.name == other.domain.name and self.terms == other.terms

    def __hash__(self):
        return hash((self.domain.name, frozenset(self.terms.items())))

    def mul(self, other: "TensorPoly", left: str = "shuffle", right: str = "conc") -> "TensorPoly":
        """Componentwise product with the declared product on each leg."""
        if left not in _LEG_RULES or right not in ("conc", "shuffle"):
            raise DomainError(f"unsupported tensor leg products ({left}, {right})")
        lc, rc = self._join_caps(other)
        out: dict[tuple[Word, Word], object] = {}
        zero = self.domain.zero
        for (u1, v1), c1 in self.terms.items():
            for (u2, v2), c2 in other.terms.items():
                if lc is not None and len(u1) + len(u2) > lc:
                    continue
                if rc is not None and len(v1) + len(v2) > rc:
                    continue
                c = c1 * c2
                for u, mu in _leg_product(u1, u2, left).items():
                    cu = c * mu if mu != 1 else c
                    for v, mv in _leg_product(v1, v2, right).items():
                        key = (u, v)
                        out[key] = out.get(key, zero) + (cu * mv if mv != 1 else cu)
        return TensorPoly(self.domain, out, lc, rc)

    def exp(self, left: str = "shuffle", right: str = "conc") -> "TensorPoly":
        """Exponential for the chosen leg products; needs zero unit coefficient."""
        if self.left_cap is None or self.right_cap is None:
            raise DomainError("tensor exp needs finite caps")
        if not self.domain.is_zero(self.coeff(EMPTY_WORD, EMPTY_WORD)):
            raise DomainError("tensor exp needs zero coefficient on 1 (x) 1")
        acc = TensorPoly.unit(self.domain, self.left_cap, self.right_cap)
        power = acc
        for k in range(1, self.left_cap + self.right_cap + 2):
            power = power.mul(self, left, right)
            if power.is_zero():
                break
            acc = acc + power.scale(Fraction(1, math.factorial(k)))
        return acc

    def log(self, left: str = "conc", right: str = "conc") -> "TensorPoly":
        """Logarithm for the chosen leg products; needs unit coefficient 1."""
        if self.left_cap is None or self.right_cap is None:
            raise DomainError("tensor log needs finite caps")
        if not self.domain.eq(self.coeff(EMPTY_WORD, EMPTY_WORD), self.domain.one):
            raise DomainError("tensor log needs coefficient 1 on 1 (x) 1")
        x = self - TensorPoly.unit(self.domain, self.left_cap, self.right_cap)
        acc = TensorPoly(self.domain, {}, self.left_cap, self.right_cap)
        power = TensorPoly.unit(self.domain, self.left_cap, self.right_cap)
        for k in range(1, self.left_cap + self.right_cap + 2):
            power = power.mul(x, left, right)
            if power.is_zero():
                break
            acc = acc + power.scale(Fraction(-1 if k % 2 == 0 else 1, k))
        return acc

    def to_json(self) -> dict:
        def key(kv):
            (u, v), _ = kv
            return (_canonical_key(u), _canonical_key(v))
        return {
            "terms": [
                {"left": [a.name for a in u], "right": [a.name for a in v],
                 "coeff": self.domain.coeff_to_json(c)}
                for (u, v), c in sorted(self.terms.items(), key=key)
            ]
        }

    def __repr__(self) -> str:
        if not self.terms:
            return "0(x)0"
        bits = [
            f"{c}*{word_name(u)}(x){word_name(v)}"
            for (u, v), c in sorted(
                self.terms.items(),
                key=lambda kv: (_canonical_key(kv[0][0]), _canonical_key(kv[0][1])),
            )
        ]
        return " + ".join(bits)
