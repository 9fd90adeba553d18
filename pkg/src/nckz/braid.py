"""The graded Lie ideal generated by the infinitesimal-braid relators,
normal forms modulo the ideal, and numeric flatness checks.

Relator set R_n: for 1 <= i < j < k <= n the brackets [t_ik + t_jk, t_ij]
and [t_ij + t_ik, t_jk], plus [t_ij, t_kl] for disjoint index pairs.  The
variant R'_n states the bracket family for all distinct (i, j, k) with the
symmetric extension t_ji = t_ij; letters are normalized to i < j at
construction, so the variant only adds the third rotation of each triple.

The ideal is built degree by degree in coordinates over the Lie basis
indexed by Lyndon words: J_2 is the relator span and J_{d+1} is spanned by
[t, J_d] over letters t together with [relator, degree d-1 basis].  Ideal
bases are kept row reduced over the rationals; the complement of the pivots
(lexicographically first coordinates kept free) defines the normal form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .alphabet import Alphabet, Letter, Word, braid_letter, word_name
from .domains import COMPLEX, RATIONAL
from .errors import DomainError, ResourceError
from .lie_bases import LyndonBasis
from .series import NcPoly

__all__ = [
    "relators",
    "bracket",
    "BraidQuotient",
    "build_quotient",
    "flatness_check",
    "FlatnessReport",
]


def bracket(p: NcPoly, q: NcPoly) -> NcPoly:
    return p.conc(q) - q.conc(p)


def relators(n: int, variant: str = "R", domain=RATIONAL) -> list[NcPoly]:
    """The degree-2 Lie relators for n strands, duplicates removed."""
    if n < 3:
        raise DomainError("braid relators need n >= 3")

    def letter(i: int, j: int) -> NcPoly:
        return NcPoly.from_letter(domain, braid_letter(i, j))

    out: list[NcPoly] = []
    seen: set = set()

    def push(p: NcPoly) -> None:
        if not p.is_zero():
            key = frozenset(p.terms.items())
            if key not in seen and frozenset((-p).terms.items()) not in seen:
                seen.add(key)
                out.append(p)

    if variant == "R":
        for i, j, k in itertools.combinations(range(1, n + 1), 3):
            push(bracket(letter(i, k) + letter(j, k), letter(i, j)))
            push(bracket(letter(i, j) + letter(i, k), letter(j, k)))
    elif variant == "Rprime":
        for i, j, k in itertools.permutations(range(1, n + 1), 3):
            if i < j:  # the bracket is symmetric in (i, j); k ranges freely
                push(bracket(letter(i, k) + letter(j, k), letter(i, j)))
    else:
        raise DomainError(f"unknown relator variant {variant!r}")
    for (i, j), (k, l) in itertools.combinations(itertools.combinations(range(1, n + 1), 2), 2):
        if len({i, j, k, l}) == 4:
            push(bracket(letter(i, j), letter(k, l)))
    return out


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Row-reduce over the rationals; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    width = len(rows[0]) if rows else 0
    for c in range(width):
        pivot_row = next((k for k in range(r, len(rows)) if rows[k][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


class BraidQuotient:
    """Per-degree ideal bases and the induced normal-form projector."""

    def __init__(self, n: int, variant: str, cap: int, basis: LyndonBasis,
                 ideal_rows: dict[int, list[list[Fraction]]],
                 pivots: dict[int, list[int]]):
        self.n = n
        self.variant = variant
        self.cap = cap
        self.basis = basis
        self.alphabet = basis.alphabet
        self._rows = ideal_rows
        self._pivots = pivots
        self._lyndon_by_degree = {
            d: [l for l in basis.lyndon_words(max_len=d) if len(l) == d]
            for d in range(1, cap + 1)
        }

    # -- dimensions ----------------------------------------------------------

    def free_dim(self, d: int) -> int:
        return len(self._lyndon_by_degree[d])

    def ideal_dim(self, d: int) -> int:
        return len(self._rows.get(d, []))

    def quotient_dim(self, d: int) -> int:
        return self.free_dim(d) - self.ideal_dim(d)

    def dims(self) -> dict[int, dict[str, int]]:
        return {
            d: {"free_lie": self.free_dim(d), "ideal": self.ideal_dim(d),
                "quotient": self.quotient_dim(d)}
            for d in range(1, self.cap + 1)
        }

    # -- coordinates ---------------------------------------------------------

    def lie_coordinates(self, p: NcPoly, degree: int, strict: bool = True) -> list:
        """Coordinates of a degree-homogeneous Lie element over {P_l}.

        With ``strict`` the reconstruction is verified, so non-Lie input is
        rejected (exactly in the rational domain, within domain tolerance in
        the complex one).
        """
        if degree > self.cap:
            raise ResourceError(f"degree {degree} above the quotient cap {self.cap}")
        coords = [p.pair(self.basis.s(l).to_domain(p.domain))
                  for l in self._lyndon_by_degree[degree]]
        if strict:
            recon = NcPoly.zero(p.domain)
            for c, l in zip(coords, self._lyndon_by_degree[degree]):
                recon = recon + self.basis.p(l).to_domain(p.domain).scale(c)
            diff = recon - p.homogeneous_part(degree).as_poly()
            if not all(p.domain.eq(c, p.domain.zero) for c in diff.terms.values()):
                raise DomainError(f"degree-{degree} component is not a Lie element")
        return coords

    def reduce_coordinates(self, coords: list, degree: int) -> list:
        """Eliminate the ideal's pivot coordinates from a coefficient vector."""
        return self._reduce_vector(coords, degree)

    def _reduce_vector(self, coords: list, degree: int) -> list:
        rows = self._rows.get(degree, [])
        pivots = self._pivots.get(degree, [])
        coords = list(coords)
        for row, piv in zip(rows, pivots):
            f = coords[piv]
            if f == 0:
                continue
            coords = [a - f * b for a, b in zip(coords, row)]
        return coords

    def normal_form(self, p: NcPoly) -> NcPoly:
        """Projection onto the stored complement, degree by degree.

        Idempotent and linear; the difference p - normal_form(p) lies in the
        ideal span by construction.
        """
        out = NcPoly.zero(p.domain)
        for d in sorted({len(w) for w in p.terms}):
            comp = p.homogeneous_part(d).as_poly()
            if d == 0 or d > self.cap:
                if d > self.cap:
                    raise ResourceError(f"degree {d} above the quotient cap {self.cap}")
                out = out + comp
                continue
            coords = self._reduce_vector(self.lie_coordinates(comp, d), d)
            for c, l in zip(coords, self._lyndon_by_degree[d]):
                if not p.domain.is_zero(p.domain.coerce(c)):
                    out = out + self.basis.p(l).to_domain(p.domain).scale(c)
        return out

    def contains(self, p: NcPoly) -> bool:
        return self.normal_form(p).is_zero()

    def membership_residual(self, p: NcPoly, degree: int) -> float:
        """Least-squares distance of a complex Lie element from the ideal span."""
        coords = np.array(
            [complex(c) for c in self.lie_coordinates(p.to_domain(COMPLEX), degree,
                                                      strict=False)]
        )
        rows = self._rows.get(degree, [])
        if not rows:
            return float(np.max(np.abs(coords))) if coords.size else 0.0
        A = np.array([[float(x) for x in row] for row in rows]).T
        fit = A @ np.linalg.lstsq(A, coords, rcond=None)[0]
        return float(np.max(np.abs(coords - fit)))


def build_quotient(n: int, variant: str = "R", cap: int = 2) -> BraidQuotient:
    if n < 3:
        raise DomainError("braid quotient needs n >= 3")
    if cap < 2:
        raise DomainError("cap must be >= 2 to hold the relators")
    if cap > 4 or n > 5:
        raise ResourceError(f"quotient build refused for n={n}, cap={cap}")
    alpha = Alphabet.braid(n)
    basis = LyndonBasis(alpha, cap)
    quotient = BraidQuotient(n, variant, cap, basis, {}, {})

    rels = relators(n, variant)
    degree_basis = {
        d: [l for l in basis.lyndon_words(max_len=d) if len(l) == d]
        for d in range(1, cap + 1)
    }

    def coords(p: NcPoly, d: int) -> list[Fraction]:
        return [p.pair(basis.s(l)) for l in degree_basis[d]]

    span: dict[int, list[NcPoly]] = {2: list(rels)}
    for d in range(2, cap):
        nxt: list[NcPoly] = [
            bracket(NcPoly.from_letter(RATIONAL, t), x)
            for t in alpha.letters
            for x in span[d]
        ]
        if d - 1 >= 1:
            nxt.extend(
                bracket(r, basis.p(l))
                for r in rels
                for l in degree_basis[d - 1]
            )
        span[d + 1] = nxt

    rows_by_degree: dict[int, list[list[Fraction]]] = {}
    pivots_by_degree: dict[int, list[int]] = {}
    for d, elems in span.items():
        rows = [coords(x, d) for x in elems]
        rows, pivots = _rref(rows)
        rows_by_degree[d] = rows
        pivots_by_degree[d] = pivots
    quotient._rows = rows_by_degree
    quotient._pivots = pivots_by_degree
    return quotient


# -- numeric flatness -------------------------------------------------------------


@dataclass
class FlatnessReport:
    n: int
    samples: list[tuple[complex, ...]]
    sum_residual: float
    euler_residual: float
    bracket_residual: float
    tol: float

    @property
    def ok(self) -> bool:
        return max(self.sum_residual, self.euler_residual, self.bracket_residual) < self.tol

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "samples": [[ [z.real, z.imag] for z in s ] for s in self.samples],
            "sum_residual": self.sum_residual,
            "euler_residual": self.euler_residual,
            "bracket_residual": self.bracket_residual,
            "tol": self.tol,
            "ok": self.ok,
        }


def _vector_field(n: int, i: int, z: tuple[complex, ...]) -> NcPoly:
    """U_i = sum_{j != i} t_{ij} / (z_i - z_j) with letters normalized."""
    terms: dict[Word, complex] = {}
    for j in range(1, n + 1):
        if j == i:
            continue
        w = (braid_letter(i, j),)
        terms[w] = terms.get(w, 0) + 1.0 / (z[i - 1] - z[j - 1])
    return NcPoly(COMPLEX, terms)


def flatness_check(n: int, samples, tol: float = 1e-10,
                   quotient: BraidQuotient | None = None) -> FlatnessReport:
    """Numeric residuals of the three flatness identities at sample points.

    (a) sum_i U_i reduces to zero, (b) sum_i z_i U_i equals sum t_{ij}, and
    (c) every [U_i, U_j] lies in the degree-2 ideal span.
    """
    quotient = quotient or build_quotient(n, "R", 2)
    samples = [tuple(complex(z) for z in s) for s in samples]
    for s in samples:
        if len(s) != n:
            raise DomainError(f"sample {s} does not have {n} coordinates")
        for i, j in itertools.combinations(range(n), 2):
            if abs(s[i] - s[j]) < 1e-12:
                raise DomainError(f"coincident coordinates z_{i+1} = z_{j+1} in sample {s}")

    sum_res = euler_res = bracket_res = 0.0
    letter_sum = NcPoly(COMPLEX, {(braid_letter(i, j),): 1.0
                                  for i, j in itertools.combinations(range(1, n + 1), 2)})
    for s in samples:
        fields = {i: _vector_field(n, i, s) for i in range(1, n + 1)}
        total = NcPoly.zero(COMPLEX)
        euler = NcPoly.zero(COMPLEX)
        for i, u in fields.items():
            total = total + u
            euler = euler + u.scale(s[i - 1])
        sum_res = max(sum_res, quotient.normal_form(total).max_abs())
        euler_res = max(euler_res, quotient.normal_form(euler - letter_sum).max_abs())
        for i, j in itertools.combinations(range(1, n + 1), 2):
            br = bracket(fields[i], fields[j])
            bracket_res = max(bracket_res, quotient.membership_residual(br, 2))
    return FlatnessReport(n, samples, sum_res, euler_res, bracket_res, tol)
