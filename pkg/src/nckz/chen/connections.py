"""Connections with one logarithmic 1-form per letter.

A letter form is scale * dlog(arg) where arg is an affine function of the
ambient point; this covers dz/z, dz/(a - z) and all the pair differences
d log(z_i - z_j).  Along a straight segment an affine argument stays affine
in the path parameter, so integrands are rational with explicit pole
locations and path admissibility is a segment/pole distance bound.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..alphabet import Alphabet, Letter, braid_letter, free_letter
from ..errors import DomainError
from .quadrature import PathSpec, min_distance_to_zero

__all__ = ["AffineArg", "LetterForm", "OneFormConnection", "TWO_PI_I"]

TWO_PI_I = complex(0.0, 2.0) * 3.141592653589793


@dataclass(frozen=True)
class AffineArg:
    """const + sum_i coeffs[i] * z_i as a function of z in C^n."""

    const: complex
    coeffs: tuple[complex, ...]

    def value(self, z) -> complex:
        return self.const + sum(c * w for c, w in zip(self.coeffs, z))


@dataclass(frozen=True)
class LetterForm:
    """The 1-form scale * dlog(arg) attached to a letter."""

    letter: Letter
    arg: AffineArg
    scale: complex


class OneFormConnection:
    """An ordered alphabet with one logarithmic form per letter."""

    def __init__(self, alphabet: Alphabet, forms: dict[Letter, LetterForm]):
        for a in alphabet.letters:
            if a not in forms:
                raise DomainError(f"no form attached to letter {a!r}")
        self.alphabet = alphabet
        self.forms = dict(forms)

    @property
    def letters(self) -> tuple[Letter, ...]:
        return self.alphabet.letters

    # -- constructors -----------------------------------------------------

    @classmethod
    def kz(cls, n: int, normalized: bool = True) -> "OneFormConnection":
        """d log(z_i - z_j) on each t_{i,j}; normalized divides by 2 pi i."""
        alpha = Alphabet.braid(n)
        scale = 1.0 / TWO_PI_I if normalized else 1.0
        forms = {}
        for a in alpha.letters:
            i, j = a.pair
            coeffs = [0.0] * n
            coeffs[i - 1] = 1.0
            coeffs[j - 1] = -1.0
            forms[a] = LetterForm(a, AffineArg(0.0, tuple(coeffs)), scale)
        return cls(alpha, forms)

    @classmethod
    def hyperlog(cls, singularities) -> "OneFormConnection":
        """Letters x0..xN with x0 -> ds/s and xk -> ds/(a_k - s).

        ``singularities`` is (0, a1, ..., aN); the leading entry must be 0.
        The xk convention matches ds/(1-s) at a_k = 1, so the polylogarithm
        engine is the two-letter special case.
        """
        sing = [complex(s) for s in singularities]
        if not sing or sing[0] != 0:
            raise DomainError("singularity list must start with 0")
        alpha = Alphabet.free([f"x{k}" for k in range(len(sing))])
        forms = {}
        for k, a in enumerate(alpha.letters):
            if k == 0:
                forms[a] = LetterForm(a, AffineArg(0.0, (1.0,)), 1.0)
            else:
                # ds/(a_k - s) = -dlog(a_k - s)
                forms[a] = LetterForm(a, AffineArg(sing[k], (-1.0,)), -1.0)
        return cls(alpha, forms)

    @classmethod
    def unit_interval_pair(cls) -> "OneFormConnection":
        """x0 -> ds/s, x1 -> ds/(1-s); the classical polylogarithm forms."""
        return cls.hyperlog([0.0, 1.0])

    # -- evaluation --------------------------------------------------------

    def segment_data(self, a_point, b_point, letters=None):
        """Per-letter (value-at-start, slope, scale) along the segment a->b.

        The argument of the form restricted to the segment is
        start + slope * t for t in [0, 1].
        """
        letters = letters if letters is not None else self.letters
        data = {}
        for letter in letters:
            form = self.forms[letter]
            start = form.arg.value(a_point)
            slope = form.arg.value(b_point) - start
            data[letter] = (start, slope, form.scale)
        return data

    def validate_path(self, path: PathSpec, margin: float, letters=None) -> None:
        """Fail if any segment comes within ``margin`` of a form's zero set."""
        letters = letters if letters is not None else self.letters
        for a_point, b_point in path.segments():
            for letter in letters:
                form = self.forms[letter]
                start = form.arg.value(a_point)
                slope = form.arg.value(b_point) - start
                if min_distance_to_zero(start, slope) < margin:
                    raise DomainError(
                        f"path passes within {margin} of the singular set of "
                        f"the form on {letter!r}"
                    )
