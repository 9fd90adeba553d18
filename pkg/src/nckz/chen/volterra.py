"""Iterative reconstruction of a Chen series from a base-alphabet factor.

The split fixes a base sub-alphabet B.  The seed V_0 is the Chen series of
the B-forms (assembled as the decreasing product of exp(alpha(S_l) P_l)
over Lyndon words of B), or its abelianized variant exp(sum alpha(t) t).
Successive terms insert one complement letter per step:

    V_k(z) = V_0(z) * sum_{t not in B} int omega_t(s) V_0(s)^{-1} t V_{k-1}(s),

so V_k collects exactly the words with k complement letters and the partial
sums reproduce the full Chen series degree by degree.

The closed form of the accumulated right factor H = V_0^{-1} C is also
provided: a sum over tuples of generator words v t (v over B, t in the
complement) of iterated integrals of half-shuffle towers of reversals
times right-normed brackets.  The literal tower pairing carries a global
sign per factor (already <a(t), r(t)> = -1), so each tuple of length k is
weighted by eps^k with eps fixed from that degree-1 pairing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..alphabet import Letter, Word
from ..domains import COMPLEX, RATIONAL
from ..errors import DomainError
from ..lie_bases import LyndonBasis, mrs_assemble
from ..series import NcPoly, TruncatedSeries, content_shuffle, right_bracketing
from .connections import OneFormConnection
from .iterated import PathGrid, chen_series, chen_series_on_grid
from .quadrature import PathSpec, QuadratureConfig

__all__ = ["VolterraFlow", "volterra_iterate", "chen_braids_h"]


@dataclass
class VolterraFlow:
    """The seed, the iteration terms at the endpoint, and node data."""

    base_letters: tuple[Letter, ...]
    complement: tuple[Letter, ...]
    cap: int
    hat: bool
    v0: TruncatedSeries
    terms: list[TruncatedSeries]
    grid: PathGrid = field(repr=False)
    v0_nodes: list[list[TruncatedSeries]] = field(repr=False)

    @property
    def total(self) -> TruncatedSeries:
        acc = self.terms[0]
        for t in self.terms[1:]:
            acc = acc + t
        return acc

    def phi(self, letter: Letter, panel: int, node: int) -> TruncatedSeries:
        """The conjugated letter V_0(s)^{-1} t V_0(s) at a grid node."""
        v0 = self.v0_nodes[panel][node]
        t = TruncatedSeries(COMPLEX, {(letter,): 1.0}, self.cap)
        return v0.antipode().conc(t).conc(v0)

    def kernel(self, word: Word, nodes: list[tuple[int, int]]) -> TruncatedSeries:
        """V_0(z) phi_{s1}(t1) ... phi_{sk}(tk) for word = t1...tk."""
        if len(word) != len(nodes):
            raise DomainError("one grid node per letter is required")
        acc = self.v0
        for letter, (p, k) in zip(word, nodes):
            acc = acc.conc(self.phi(letter, p, k))
        return acc


def _seed_at(series: TruncatedSeries, base_alpha, basis: LyndonBasis | None,
             hat: bool, cap: int) -> TruncatedSeries:
    """Seed factor from the base-restricted Chen series at one point."""
    if hat:
        exponent = TruncatedSeries(
            COMPLEX,
            {(a,): series.coeff((a,)) for a in base_alpha.letters},
            cap,
        )
        return exponent.exp()
    exponents = [
        (l, series.pair(basis.s(l).to_domain(COMPLEX)))
        for l in basis.lyndon_words(decreasing=True)
    ]
    return mrs_assemble(exponents, basis, cap, COMPLEX)


def volterra_iterate(conn: OneFormConnection, base_letters, path: PathSpec,
                     cfg: QuadratureConfig, cap: int, iterations: int,
                     hat: bool = False) -> VolterraFlow:
    """Run the iteration on a fixed collocation grid.

    Returns the seed and the terms V_0..V_K evaluated at the endpoint; the
    sum of all terms agrees with the Chen series on every word whose number
    of complement letters is at most K.
    """
    base_letters = tuple(base_letters)
    for a in base_letters:
        if a not in conn.forms:
            raise DomainError(f"base letter {a!r} is not part of the connection")
    complement = tuple(a for a in conn.letters if a not in base_letters)
    if iterations < 0 or cap < iterations:
        raise DomainError("need 0 <= iterations <= cap")

    grid = PathGrid(conn, path, cfg.panels, cfg.gauss_order,
                    margin=cfg.singularity_margin)
    base_alpha = conn.alphabet.sub_alphabet(base_letters)
    basis = None if hat else LyndonBasis(base_alpha, cap)

    base_nodes, base_end = chen_series_on_grid(grid, cap, base_letters)
    v0_nodes = [
        [_seed_at(s, base_alpha, basis, hat, cap) for s in panel]
        for panel in base_nodes
    ]
    v0_end = _seed_at(base_end, base_alpha, basis, hat, cap)

    letter_polys = {
        a: TruncatedSeries(COMPLEX, {(a,): 1.0}, cap) for a in complement
    }
    w_nodes = [[v.antipode() for v in panel] for panel in v0_nodes]

    words = [w for d in range(cap + 1) for w in itertools.product(conn.letters, repeat=d)]
    terms = [v0_end]
    prev_nodes = v0_nodes
    prev_end = v0_end
    for _ in range(iterations):
        integrand_nodes = []
        for p, panel in enumerate(prev_nodes):
            row = []
            for k, v_prev in enumerate(panel):
                g = TruncatedSeries(COMPLEX, {}, cap)
                for a in complement:
                    f = grid.fvals[p][a][k]
                    if f != 0:
                        g = g + w_nodes[p][k].conc(letter_polys[a]).conc(v_prev).scale(f)
                row.append(g)
            integrand_nodes.append(row)
        cum_nodes = [[dict() for _ in panel] for panel in integrand_nodes]
        cum_end: dict[Word, complex] = {}
        for w in words:
            panels_vals = [
                np.array([g.coeff(w) for g in panel], dtype=complex)
                for panel in integrand_nodes
            ]
            node_vals, end_val = grid.cumulative(panels_vals)
            for p, arr in enumerate(node_vals):
                for k, val in enumerate(arr):
                    if val != 0:
                        cum_nodes[p][k][w] = val
            if end_val != 0:
                cum_end[w] = end_val
        new_nodes = [
            [v0_nodes[p][k].conc(TruncatedSeries(COMPLEX, cum_nodes[p][k], cap))
             for k in range(len(panel))]
            for p, panel in enumerate(integrand_nodes)
        ]
        new_end = v0_end.conc(TruncatedSeries(COMPLEX, cum_end, cap))
        terms.append(new_end)
        prev_nodes, prev_end = new_nodes, new_end

    return VolterraFlow(base_letters, complement, cap, hat,
                        v0_end, terms, grid, v0_nodes)


def chen_braids_h(conn: OneFormConnection, base_letters, path: PathSpec,
                  cfg: QuadratureConfig, cap: int,
                  chen: TruncatedSeries | None = None,
                  hat: bool = False) -> TruncatedSeries:
    """Closed form of H = V_0^{-1} C from half-shuffle towers.

    H = 1 + sum_k eps^k sum alpha(a(v1 t1) < (... < a(vk tk))) r(v1 t1)...r(vk tk)
    over tuples of generator words with total degree <= cap.
    """
    base_letters = tuple(base_letters)
    complement = tuple(a for a in conn.letters if a not in base_letters)
    if chen is None:
        chen = chen_series(conn, path, cfg, cap)

    def a_of(g: Word) -> NcPoly:
        if hat:
            arg = content_shuffle(g[:-1]).conc(NcPoly.from_letter(RATIONAL, g[-1]))
            return arg.antipode()
        return NcPoly.from_word(RATIONAL, g[::-1], (-1) ** len(g))

    t0 = complement[0]
    eps = 1 if a_of((t0,)).pair(right_bracketing((t0,))) == 1 else -1

    gens = []
    for d in range(cap):
        for v in itertools.product(base_letters, repeat=d):
            for t in complement:
                gens.append(v + (t,))

    def tuples(prefix, deg):
        if prefix:
            yield prefix
        for g in gens:
            if deg + len(g) <= cap:
                yield from tuples(prefix + (g,), deg + len(g))

    total = TruncatedSeries.unit(COMPLEX, cap)
    for tup in tuples((), 0):
        tower = a_of(tup[-1])
        for g in reversed(tup[:-1]):
            tower = a_of(g).half_shuffle(tower)
        coeff = chen.pair(tower.to_domain(COMPLEX)) * eps ** len(tup)
        if coeff == 0:
            continue
        rprod = NcPoly.unit(COMPLEX)
        for g in tup:
            rprod = rprod.conc(right_bracketing(g, COMPLEX))
        total = total + rprod.truncate(cap).scale(coeff)
    return total
