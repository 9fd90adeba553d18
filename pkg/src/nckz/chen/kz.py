"""Desk-scale verification of the three- and four-strand equations.

Three strands: the candidate solution is assembled from the polylogarithm
generating series at the cross ratio (z3 - z2)/(z1 - z2), letters
substituted by x0 -> t13/(2 pi i), x1 -> -t23/(2 pi i), times the central
power factor exp(log(z1 - z2)(t12 + t13 + t23)/(2 pi i)).  The defining
equation is checked by central finite differences with Richardson
extrapolation; since the assembled series is grouplike, the residual
dF . F^{-1} - A_k is a Lie element and is reduced modulo the quadratic
relator ideal degree by degree.

Four strands: the reduced connection in the cubic coordinates z = (xy, y,
1, 0) is expanded over the atomic logarithmic differentials of x, y, 1-x,
1-y, 1-xy through the multiplicative registry (products of arguments split
into sums of dlogs) and compared, exactly over the rationals, with the
regrouped five-term display; a negative control drops the product relation
for z1 - z2 and must break the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..alphabet import Alphabet, Word, braid_letter, word_name
from ..braid import BraidQuotient, build_quotient
from ..domains import COMPLEX
from ..errors import DomainError
from ..series import TruncatedSeries, map_letters
from .connections import TWO_PI_I
from .polylog import X0, X1, l_series
from .quadrature import QuadratureConfig

__all__ = ["kz3_solution", "kz3_verify", "KZ3Report", "kz4_connection_check", "KZ4Report"]

T12 = braid_letter(1, 2)
T13 = braid_letter(1, 3)
T23 = braid_letter(2, 3)


def kz3_solution(z, cap: int, tol: float = 1e-12, central_left: bool = False) -> TruncatedSeries:
    """The candidate three-strand solution at a point z = (z1, z2, z3).

    The cross ratio g = (z3 - z2)/(z1 - z2) sends z3 = z2 to 0 and z3 = z1
    to 1, so the letter carrying ds/s must be the one attached to the pair
    (2, 3) and the letter carrying ds/(1-s) the one attached to (1, 3):
    x0 -> t23/(2 pi i), x1 -> -t13/(2 pi i).  (Requiring the degree-1 part
    of the defining equation, where the relator ideal cannot assist, forces
    this assignment.)
    """
    z1, z2, z3 = (complex(v) for v in z)
    if z1 == z2:
        raise DomainError("z1 = z2 is singular")
    ratio = (z3 - z2) / (z1 - z2)
    if abs(ratio) >= 1 or (ratio.imag == 0 and ratio.real >= 1):
        raise DomainError(
            f"cross ratio {ratio} outside the supported disc; pick other samples"
        )
    mapping = {
        X0: (1.0 / TWO_PI_I, (T23,)),
        X1: (-1.0 / TWO_PI_I, (T13,)),
    }
    lf = map_letters(l_series(ratio, cap, tol), mapping, COMPLEX, cap)
    exponent = TruncatedSeries(
        COMPLEX,
        {(a,): np.log(z1 - z2) / TWO_PI_I for a in (T12, T13, T23)},
        cap,
    )
    central = exponent.exp()
    return central.conc(lf) if central_left else lf.conc(central)


@dataclass
class KZ3Report:
    cap: int
    samples: list[tuple[complex, complex, complex]]
    max_residual: float
    max_residual_left: float
    lie_defect: float
    variant_gap: float

    def to_json(self) -> dict:
        return {
            "cap": self.cap,
            "samples": [[[v.real, v.imag] for v in s] for s in self.samples],
            "max_residual": self.max_residual,
            "max_residual_left": self.max_residual_left,
            "lie_defect": self.lie_defect,
            "variant_gap": self.variant_gap,
        }


def _connection_coefficient(k: int, z) -> TruncatedSeries:
    """A_k = sum_{i<j} t_ij (delta_ki - delta_kj) / (2 pi i (z_i - z_j))."""
    terms = {}
    for i, j in itertools.combinations(range(3), 2):
        d = (1 if k == i else 0) - (1 if k == j else 0)
        if d:
            terms[(braid_letter(i + 1, j + 1),)] = d / (TWO_PI_I * (z[i] - z[j]))
    return TruncatedSeries(COMPLEX, terms, 1)


def _log_derivative_residuals(z, cap, tol, h, central_left, quotient):
    """Per-coordinate reduced residual of dF F^{-1} - A_k at one sample."""
    f0 = kz3_solution(z, cap, tol, central_left)
    f0_inv = f0.antipode()
    max_red = 0.0
    defect = 0.0
    for k in range(3):
        def shifted(step):
            zz = list(z)
            zz[k] = zz[k] + step
            return kz3_solution(tuple(zz), cap, tol, central_left)

        d_coarse = (shifted(h) - shifted(-h)).scale(1.0 / (2 * h))
        d_fine = (shifted(h / 2) - shifted(-h / 2)).scale(1.0 / h)
        deriv = (d_fine.scale(4) - d_coarse).scale(Fraction(1, 3))
        residual = deriv.conc(f0_inv) - _connection_coefficient(k, z).truncate(cap)
        defect = max(defect, abs(residual.constant_term()))
        for d in range(1, cap + 1):
            comp = residual.homogeneous_part(d).as_poly()
            coords = quotient.lie_coordinates(comp, d, strict=False)
            reduced = quotient.reduce_coordinates(coords, d)
            max_red = max(max_red, max((abs(complex(c)) for c in reduced), default=0.0))
            recon = comp
            for c, l in zip(coords, quotient._lyndon_by_degree[d]):
                recon = recon - quotient.basis.p(l).to_domain(COMPLEX).scale(c)
            defect = max(defect, recon.max_abs())
    return max_red, defect


def kz3_verify(samples, cap: int = 2, tol: float = 1e-12, h: float = 1e-3,
               quotient: BraidQuotient | None = None) -> KZ3Report:
    """Finite-difference check of the defining equation modulo the relator
    ideal, for both orders of the central factor."""
    if cap < 1:
        raise DomainError("cap must be >= 1")
    quotient = quotient or build_quotient(3, "R", max(cap, 2))
    samples = [tuple(complex(v) for v in s) for s in samples]
    worst = worst_left = defect = gap = 0.0
    for z in samples:
        right, d_right = _log_derivative_residuals(z, cap, tol, h, False, quotient)
        left, d_left = _log_derivative_residuals(z, cap, tol, h, True, quotient)
        worst = max(worst, right)
        worst_left = max(worst_left, left)
        defect = max(defect, d_right, d_left)
        gap = max(gap, abs(right - left))
    return KZ3Report(cap, samples, worst, worst_left, defect, gap)


# -- four strands, cubic coordinates ------------------------------------------------


@dataclass
class KZ4Report:
    residual: dict[str, dict[str, Fraction]]
    control_residual: dict[str, dict[str, Fraction]]
    centrality_max: Fraction

    @property
    def ok(self) -> bool:
        return (not any(self.residual.values())
                and any(self.control_residual.values())
                and self.centrality_max == 0)

    def to_json(self) -> dict:
        def enc(d):
            return {
                letter: {atom: str(c) for atom, c in vec.items()}
                for letter, vec in d.items() if vec
            }
        return {
            "residual": enc(self.residual),
            "control_residual": enc(self.control_residual),
            "centrality_max": str(self.centrality_max),
            "ok": self.ok,
        }


def _dlog_registry(split_products: bool) -> dict[tuple[int, int], dict[str, Fraction]]:
    """dlog(z_i - z_j) over the atom basis after z = (xy, y, 1, 0).

    Constant factors drop; with ``split_products`` the relations
    dlog(ab) = dlog a + dlog b are applied, otherwise the product for
    z1 - z2 is kept opaque (the negative control).
    """
    one = Fraction(1)
    reg: dict[tuple[int, int], dict[str, Fraction]] = {
        (1, 2): {"y": one, "1-x": one} if split_products else {"y(1-x)": one},
        (1, 3): {"1-xy": one},
        (1, 4): {"x": one, "y": one} if split_products else {"xy": one},
        (2, 3): {"1-y": one},
        (2, 4): {"y": one},
        (3, 4): {},  # z3 - z4 = 1
    }
    return reg


def _vec_sub(a: dict[str, Fraction], b: dict[str, Fraction]) -> dict[str, Fraction]:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) - v
    return {k: v for k, v in out.items() if v}


def kz4_connection_check() -> KZ4Report:
    """Exact check of the reduced four-strand connection in cubic coordinates.

    The reduced connection sums t_ij dlog(z_i - z_j) over the five pairs
    (1,2), (1,3), (2,3), (1,4), (2,4); after substitution it must regroup as

        t12 dlog(1-x) + t13 dlog(1-xy) + t23 dlog(1-y) + t14 dlog x
        + (t12 + t14 + t24) dlog y.
    """
    pairs = [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4)]
    one = Fraction(1)
    expected = {
        "t12": {"1-x": one, "y": one},
        "t13": {"1-xy": one},
        "t23": {"1-y": one},
        "t14": {"x": one, "y": one},
        "t24": {"y": one},
    }

    def computed(split: bool) -> dict[str, dict[str, Fraction]]:
        reg = _dlog_registry(split)
        return {braid_letter(i, j).name: dict(reg[(i, j)]) for i, j in pairs}

    residual = {
        name: _vec_sub(vec, expected[name]) for name, vec in computed(True).items()
    }
    control = {
        name: _vec_sub(vec, expected[name]) for name, vec in computed(False).items()
    }

    quotient = build_quotient(4, "R", 2)
    alpha = Alphabet.braid(4)
    from ..series import NcPoly
    from ..domains import RATIONAL

    letter_sum = NcPoly(RATIONAL, {(a,): 1 for a in alpha.letters})
    central_max = Fraction(0)
    for a in alpha.letters:
        t = NcPoly.from_letter(RATIONAL, a)
        br = letter_sum.conc(t) - t.conc(letter_sum)
        nf = quotient.normal_form(br)
        for c in nf.terms.values():
            central_max = max(central_max, abs(c))
    return KZ4Report(residual, control, central_max)
