"""Letters, ordered alphabets, words and Lyndon-word machinery.

Two kinds of letters exist: braid letters t_{i,j} (normalized to i < j at
construction) and free symbols such as x0, x1.  An Alphabet fixes a strict
total order on its letters; all lexicographic notions (Lyndon words,
standard factorization, the dual bases built on top) refer to that order.

The canonical braid order lists the blocks T_n, T_{n-1}, ..., T_2 from
smallest to largest, and inside T_k the letters t_{k-1,k}, ..., t_{1,k}
ascending.  Equivalently: t_{i,j} < t_{k,l} iff j > l, or j == l and i > k.
For n = 4 the ascending chain is t34 < t24 < t14 < t23 < t13 < t12.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import DomainError, ResourceError

__all__ = [
    "Letter",
    "Word",
    "Alphabet",
    "braid_letter",
    "free_letter",
    "parse_word",
    "word_name",
    "compare_letters",
    "is_lyndon",
    "enumerate_lyndon",
    "standard_factorization",
    "lyndon_factorization",
    "lyndon_count",
    "word_content",
    "EMPTY_WORD",
]


@dataclass(frozen=True)
class Letter:
    """An immutable alphabet symbol.

    ``pair`` is set for braid letters only and always satisfies i < j.
    Order between letters is not intrinsic; it comes from an Alphabet.
    """

    name: str
    pair: tuple[int, int] | None = None

    def __repr__(self) -> str:
        return self.name


#: A word is a tuple of letters; the empty tuple is the monoid unit.
Word = tuple[Letter, ...]

EMPTY_WORD: Word = ()


def braid_letter(i: int, j: int) -> Letter:
    """The letter t_{i,j}; arguments in either order, stored with i < j."""
    if i == j or i < 1 or j < 1:
        raise DomainError(f"braid letter needs distinct positive indices, got ({i}, {j})")
    if i > j:
        i, j = j, i
    name = f"t{i}{j}" if j <= 9 else f"t_{i}_{j}"
    return Letter(name, (i, j))


def free_letter(name: str) -> Letter:
    return Letter(name, None)


_LETTER_TOKEN = re.compile(r"t_\d+_\d+|t\d\d|[a-su-z]\d*|t\d?$")


def _letter_from_name(name: str) -> Letter:
    m = re.fullmatch(r"t(\d)(\d)", name) or re.fullmatch(r"t_(\d+)_(\d+)", name)
    if m:
        return braid_letter(int(m.group(1)), int(m.group(2)))
    return free_letter(name)


class Alphabet:
    """An ordered, duplicate-free collection of letters.

    ``letters`` are stored ascending: letters[0] is the smallest.  For braid
    alphabets ``n`` records the strand count and the T_k block structure is
    derivable from the letter pairs.
    """

    def __init__(self, letters: Sequence[Letter], n: int | None = None):
        letters = tuple(letters)
        if len(set(letters)) != len(letters):
            raise DomainError("duplicate letters in alphabet")
        if not letters:
            raise DomainError("alphabet must be nonempty")
        self.letters: tuple[Letter, ...] = letters
        self.n = n
        self._index = {a: k for k, a in enumerate(letters)}

    # -- construction ---------------------------------------------------

    @classmethod
    def braid(cls, n: int) -> "Alphabet":
        """The alphabet {t_{i,j}}_{1<=i<j<=n} in the canonical order."""
        if n < 2:
            raise DomainError("braid alphabet needs n >= 2")
        letters = []
        for k in range(n, 1, -1):  # blocks T_n, ..., T_2 ascending
            for i in range(k - 1, 0, -1):
                letters.append(braid_letter(i, k))
        return cls(letters, n=n)

    @classmethod
    def free(cls, names: Sequence[str]) -> "Alphabet":
        """A free alphabet ordered by the given rank order (first = smallest)."""
        return cls([free_letter(nm) for nm in names])

    def sub_alphabet(self, letters: Sequence[Letter]) -> "Alphabet":
        """Restriction to ``letters``, keeping the induced order."""
        keep = set(letters)
        for a in keep:
            self.index(a)
        return Alphabet([a for a in self.letters if a in keep], n=self.n)

    # -- braid block structure ------------------------------------------

    def t_block(self, k: int) -> tuple[Letter, ...]:
        """The block T_k = {t_{j,k}}_{j<k} in ascending order."""
        if self.n is None:
            raise DomainError("not a braid alphabet")
        return tuple(a for a in self.letters if a.pair and a.pair[1] == k)

    def base_block(self) -> tuple[Letter, ...]:
        """T_n, the smallest block of a braid alphabet."""
        if self.n is None:
            raise DomainError("not a braid alphabet")
        return self.t_block(self.n)

    def sub_braid(self) -> "Alphabet":
        """The braid alphabet on n-1 strands, with its canonical order."""
        if self.n is None or self.n < 3:
            raise DomainError("sub_braid needs a braid alphabet with n >= 3")
        rest = [a for a in self.letters if a.pair and a.pair[1] != self.n]
        return Alphabet(rest, n=self.n - 1)

    # -- order ------------------------------------------------------------

    def index(self, a: Letter) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise DomainError(f"letter {a!r} is not in the alphabet") from None

    def letter(self, name: str) -> Letter:
        a = _letter_from_name(name)
        self.index(a)
        return a

    def word_key(self, w: Word) -> tuple[int, ...]:
        return tuple(self._index[a] for a in w)

    def compare_words(self, u: Word, v: Word) -> int:
        """Lexicographic comparison (prefix < extension), -1/0/+1."""
        ku, kv = self.word_key(u), self.word_key(v)
        return -1 if ku < kv else (0 if ku == kv else 1)

    # -- enumeration ------------------------------------------------------

    def words(self, max_len: int, min_len: int = 0) -> Iterator[Word]:
        """All words with min_len <= length <= max_len, by length then lex."""
        for d in range(min_len, max_len + 1):
            for tup in itertools.product(self.letters, repeat=d):
                yield tup

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, a: Letter) -> bool:
        return a in self._index

    def __repr__(self) -> str:
        return f"Alphabet[{', '.join(a.name for a in self.letters)}]"


def compare_letters(a: Letter, b: Letter, alpha: Alphabet) -> int:
    """-1 if a < b, 0 if equal, +1 if a > b, in alpha's order."""
    ia, ib = alpha.index(a), alpha.index(b)
    return -1 if ia < ib else (0 if ia == ib else 1)


def word_name(w: Word) -> str:
    return ".".join(a.name for a in w) if w else "1"


def word_content(w: Word) -> dict[Letter, int]:
    counts: dict[Letter, int] = {}
    for a in w:
        counts[a] = counts.get(a, 0) + 1
    return counts


def parse_word(text: str, alpha: Alphabet) -> Word:
    """Parse ``x0.x1`` or contiguous ``x0x1`` / ``t12t13`` into a word."""
    text = text.strip()
    if text in ("", "1"):
        return EMPTY_WORD
    if "." in text:
        names = text.split(".")
    else:
        names = _LETTER_TOKEN.findall(text)
        if "".join(names) != text:
            raise DomainError(f"cannot tokenize word {text!r}; use dot-separated letter names")
    return tuple(alpha.letter(nm) for nm in names)


# -- Lyndon words ---------------------------------------------------------


def is_lyndon(w: Word, alpha: Alphabet) -> bool:
    """True iff w is strictly smaller than all of its proper rotations."""
    if not w:
        raise DomainError("the empty word is not eligible")
    key = alpha.word_key(w)
    return all(key < key[r:] + key[:r] for r in range(1, len(w)))


def _mobius(m: int) -> int:
    result, d, rest = 1, 2, m
    while d * d <= rest:
        if rest % d == 0:
            rest //= d
            if rest % d == 0:
                return 0
            result = -result
        d += 1
    if rest > 1:
        result = -result
    return result


def lyndon_count(k: int, d: int) -> int:
    """Number of Lyndon words of length d over k letters (necklace formula)."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * k ** (d // e)
    return total // d


def enumerate_lyndon(alpha: Alphabet, max_len: int, cap: int = 10**6) -> list[Word]:
    """All Lyndon words of length <= max_len, in lexicographic order.

    Generation is Duval's successor construction; the rotation test above is
    kept as an independent oracle for the test suite.  Refuses to build more
    than ``cap`` words.
    """
    if max_len < 1:
        raise DomainError("max_len must be >= 1")
    k = len(alpha)
    total = sum(lyndon_count(k, d) for d in range(1, max_len + 1))
    if total > cap:
        raise ResourceError(f"{total} Lyndon words exceed the cap of {cap}")
    letters = alpha.letters
    out: list[Word] = []
    w = [0]
    out.append((letters[0],))
    while True:
        base = list(w)
        w = [base[i % len(base)] for i in range(max_len)]
        while w and w[-1] == k - 1:
            w.pop()
        if not w:
            return out
        w[-1] += 1
        out.append(tuple(letters[i] for i in w))


def standard_factorization(l: Word, alpha: Alphabet) -> tuple[Word, Word]:
    """Split a Lyndon word as l = l1.l2 with l2 its longest Lyndon proper suffix."""
    if len(l) < 2:
        raise DomainError("standard factorization needs length >= 2")
    if not is_lyndon(l, alpha):
        raise DomainError(f"{word_name(l)} is not a Lyndon word")
    for start in range(1, len(l)):
        suffix = l[start:]
        if is_lyndon(suffix, alpha):
            return l[:start], suffix
    raise AssertionError("unreachable: every single letter is Lyndon")


def lyndon_factorization(w: Word, alpha: Alphabet) -> list[Word]:
    """The unique nonincreasing factorization of w into Lyndon words.

    Duval's linear-time algorithm.
    """
    key = alpha.word_key(w)
    out: list[Word] = []
    i, n = 0, len(w)
    while i < n:
        j, k = i + 1, i
        while j < n and key[k] <= key[j]:
            k = i if key[k] < key[j] else k + 1
            j += 1
        while i <= k:
            out.append(w[i : i + j - k])
            i += j - k
    return out
