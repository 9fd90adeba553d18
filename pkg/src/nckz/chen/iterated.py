"""Iterated path integrals, truncated Chen series, and the pairing of a
Chen series against a rational series given by a linear representation.

The word engine works panel by panel: inside a panel every suffix chain of
iterated integrals is advanced with the collocation rule (the inner
integral's node values multiply the outer form's node values), and the
panel series are concatenated right-to-left, so that the series over a
composite path is the product of the later piece by the earlier one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..alphabet import Letter, Word
from ..domains import COMPLEX
from ..errors import AccuracyError, DomainError
from ..series import TruncatedSeries, max_abs_diff
from .connections import OneFormConnection
from .quadrature import PathSpec, QuadratureConfig, collocation_rule, panel_endpoints

__all__ = [
    "chen_series",
    "iterated_integral",
    "star_eval",
    "LinearRepresentation",
    "rational_pairing",
    "rational_pairing_with_tail",
    "PathGrid",
    "chen_series_on_grid",
]


def _suffix_closure(words) -> list[Word]:
    seen = set()
    for w in words:
        for k in range(len(w) + 1):
            seen.add(w[k:])
    return sorted(seen, key=len)


def _panel_form_values(conn, a_point, b_point, nodes, letters):
    """Node values of each letter's form in the rule coordinate x in [-1, 1]."""
    out = {}
    for letter, (start, slope, scale) in conn.segment_data(a_point, b_point, letters).items():
        half = slope / 2.0
        mid = start + half
        out[letter] = scale * half / (mid + half * nodes)
    return out


def _chen_fixed(conn: OneFormConnection, path: PathSpec, panels: int, order: int,
                cap: int, letters, words) -> TruncatedSeries:
    rule = collocation_rule(order)
    total = TruncatedSeries.unit(COMPLEX, cap)
    for a_point, b_point in panel_endpoints(path, panels):
        fvals = _panel_form_values(conn, a_point, b_point, rule.nodes, letters)
        node_vals: dict[Word, np.ndarray] = {(): np.ones(order, dtype=complex)}
        end_vals: dict[Word, complex] = {}
        for w in words:
            if not w:
                continue
            integrand = fvals[w[0]] * node_vals[w[1:]]
            node_vals[w] = rule.cum @ integrand
            end_vals[w] = rule.total @ integrand
        piece = TruncatedSeries(COMPLEX, end_vals, cap) + TruncatedSeries.unit(COMPLEX, cap)
        total = piece.conc(total)
    return total


def _adaptive(conn, path, cfg, cap, letters, words) -> TruncatedSeries:
    conn.validate_path(path, cfg.singularity_margin, letters)
    prev = _chen_fixed(conn, path, cfg.panels, cfg.gauss_order, cap, letters, words)
    for r in range(1, cfg.max_refinements + 1):
        cur = _chen_fixed(conn, path, cfg.panels * 2 ** r, cfg.gauss_order, cap,
                          letters, words)
        if max_abs_diff(prev, cur) < cfg.tol:
            return cur
        prev = cur
    raise AccuracyError(
        f"panel doubling did not converge below {cfg.tol} "
        f"after {cfg.max_refinements} refinements"
    )


def chen_series(conn: OneFormConnection, path: PathSpec, cfg: QuadratureConfig,
                cap: int, letters=None) -> TruncatedSeries:
    """The truncated Chen series of the connection's forms along the path.

    ``letters`` restricts to a sub-alphabet (the remaining coefficients are
    those of words over that subset, which agree with the Chen series of the
    restricted connection).
    """
    letters = tuple(letters) if letters is not None else conn.letters
    words = [w for d in range(cap + 1) for w in itertools.product(letters, repeat=d)]
    return _adaptive(conn, path, cfg, cap, letters, words)


def iterated_integral(w: Word, conn: OneFormConnection, path: PathSpec,
                      cfg: QuadratureConfig) -> complex:
    """alpha(w) along the path: the innermost integral uses the last letter."""
    if not w:
        return complex(1.0)
    letters = tuple(dict.fromkeys(w))
    series = _adaptive(conn, path, cfg, len(w), letters, _suffix_closure([w]))
    return complex(series.coeff(w))


def star_eval(letter: Letter, conn: OneFormConnection, path: PathSpec,
              cfg: QuadratureConfig, partial_terms: int = 12) -> complex:
    """alpha(t*) = exp(alpha(t)), cross-checked against the partial sums.

    The partial sum of alpha(t^k) = alpha(t)^k / k! must agree with the
    exponential within the truncation tail bound, else the quadrature is
    suspect and an AccuracyError is raised.
    """
    a = iterated_integral((letter,), conn, path, cfg)
    value = complex(np.exp(a))
    partial = sum(a ** k / math.factorial(k) for k in range(partial_terms + 1))
    tail = abs(a) ** (partial_terms + 1) / math.factorial(partial_terms + 1) * np.exp(abs(a))
    if abs(value - partial) > tail + 1e3 * cfg.tol:
        raise AccuracyError("exp(alpha) and the partial sums disagree beyond the tail bound")
    return value


# -- rational series pairing ---------------------------------------------------


@dataclass(frozen=True)
class LinearRepresentation:
    """A rational series given by beta, mu, eta with <S|w> = beta mu(w) eta."""

    beta: np.ndarray
    mu: dict[Letter, np.ndarray]
    eta: np.ndarray

    def __post_init__(self):
        beta = np.atleast_1d(np.asarray(self.beta, dtype=complex))
        eta = np.atleast_1d(np.asarray(self.eta, dtype=complex))
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "eta", eta)
        dim = beta.shape[0]
        mu = {a: np.asarray(m, dtype=complex) for a, m in self.mu.items()}
        object.__setattr__(self, "mu", mu)
        for a, m in mu.items():
            if m.shape != (dim, dim):
                raise DomainError(f"mu({a!r}) is not {dim} x {dim}")
        if eta.shape != (dim,):
            raise DomainError("eta dimension mismatch")

    @property
    def dim(self) -> int:
        return self.beta.shape[0]


def _form_l1_norms(conn, path, cfg, letters) -> dict[Letter, float]:
    """Numerical L1 norm of each letter form along the path."""
    rule = collocation_rule(max(cfg.gauss_order, 16))
    out = {a: 0.0 for a in letters}
    for a_point, b_point in panel_endpoints(path, cfg.panels):
        fvals = _panel_form_values(conn, a_point, b_point, rule.nodes, letters)
        for a in letters:
            out[a] += float(rule.total @ np.abs(fvals[a]))
    return out


def rational_pairing_with_tail(rep: LinearRepresentation, conn: OneFormConnection,
                               path: PathSpec, cfg: QuadratureConfig,
                               length_cap: int | None = None) -> tuple[complex, float]:
    """sum over |w| <= cap of (beta mu(w) eta) alpha(w), with a tail estimate.

    Without an explicit cap the growth guard sum_t ||mu(t)|| L1(form_t) < 1
    must hold and the cap is chosen so the factorial tail falls below the
    quadrature tolerance.
    """
    letters = conn.letters
    norms = _form_l1_norms(conn, path, cfg, letters)
    growth = sum(np.linalg.norm(rep.mu[a], 2) * norms[a] for a in letters if a in rep.mu)
    if length_cap is None:
        if growth >= 1:
            raise DomainError(
                f"growth bound {growth:.3f} >= 1; pass an explicit length_cap"
            )
        length_cap = 1
        while growth ** (length_cap + 1) / math.factorial(length_cap + 1) > cfg.tol:
            length_cap += 1
    conn.validate_path(path, cfg.singularity_margin, letters)

    rule = collocation_rule(cfg.gauss_order)
    panels = panel_endpoints(path, cfg.panels)
    dim = rep.dim
    eye = np.eye(dim, dtype=complex)
    a_nodes = []
    for a_point, b_point in panels:
        fvals = _panel_form_values(conn, a_point, b_point, rule.nodes, letters)
        mats = np.zeros((cfg.gauss_order, dim, dim), dtype=complex)
        for a in letters:
            if a in rep.mu:
                mats += fvals[a][:, None, None] * rep.mu[a][None, :, :]
        a_nodes.append(mats)

    prev_nodes = [np.broadcast_to(eye, (cfg.gauss_order, dim, dim)).copy() for _ in panels]
    total = eye.copy()
    last_norm = 1.0
    for _ in range(1, length_cap + 1):
        carry = np.zeros((dim, dim), dtype=complex)
        new_nodes = []
        for p, mats in enumerate(a_nodes):
            integrand = mats @ prev_nodes[p]
            new_nodes.append(np.einsum("ij,jkl->ikl", rule.cum, integrand) + carry)
            carry = carry + np.einsum("j,jkl->kl", rule.total, integrand)
        prev_nodes = new_nodes
        total += carry
        last_norm = float(np.linalg.norm(carry, 2))
    value = complex(rep.beta @ total @ rep.eta)
    scale = float(np.linalg.norm(rep.beta) * np.linalg.norm(rep.eta))
    tail = scale * growth ** (length_cap + 1) / math.factorial(length_cap + 1)
    return value, max(tail, last_norm * growth / (length_cap + 1) * scale)


def rational_pairing(rep: LinearRepresentation, conn: OneFormConnection,
                     path: PathSpec, cfg: QuadratureConfig,
                     length_cap: int | None = None) -> complex:
    value, _ = rational_pairing_with_tail(rep, conn, path, cfg, length_cap)
    return value


# -- node-resolved evaluation (used by the iterative solver) ----------------------


class PathGrid:
    """A fixed panelization with per-node form values and cumulative integrals."""

    def __init__(self, conn: OneFormConnection, path: PathSpec, panels: int,
                 order: int, margin: float = 1e-8):
        conn.validate_path(path, margin)
        self.conn = conn
        self.path = path
        self.rule = collocation_rule(order)
        self.panels = panel_endpoints(path, panels)
        self.order = order
        self.fvals = [
            _panel_form_values(conn, a_point, b_point, self.rule.nodes, conn.letters)
            for a_point, b_point in self.panels
        ]

    def cumulative(self, integrand_panels: list[np.ndarray]) -> tuple[list[np.ndarray], complex]:
        """Running integral from the path start: node values and the endpoint."""
        carry = 0.0 + 0.0j
        nodes_out = []
        for vals in integrand_panels:
            nodes_out.append(self.rule.cum @ vals + carry)
            carry = carry + self.rule.total @ vals
        return nodes_out, carry


def chen_series_on_grid(grid: PathGrid, cap: int, letters=None):
    """Chen series values at every grid node and at the endpoint.

    Returns (node_series, end_series) where node_series[p][k] is the series
    along the path truncated at panel p's k-th node.
    """
    letters = tuple(letters) if letters is not None else grid.conn.letters
    words = [w for d in range(cap + 1) for w in itertools.product(letters, repeat=d)]
    prefix = TruncatedSeries.unit(COMPLEX, cap)
    node_series: list[list[TruncatedSeries]] = []
    for p in range(len(grid.panels)):
        fvals = grid.fvals[p]
        node_vals: dict[Word, np.ndarray] = {(): np.ones(grid.order, dtype=complex)}
        end_vals: dict[Word, complex] = {}
        for w in words:
            if not w:
                continue
            integrand = fvals[w[0]] * node_vals[w[1:]]
            node_vals[w] = grid.rule.cum @ integrand
            end_vals[w] = grid.rule.total @ integrand
        here = []
        for k in range(grid.order):
            partial = TruncatedSeries(
                COMPLEX, {w: node_vals[w][k] for w in words if w}, cap
            ) + TruncatedSeries.unit(COMPLEX, cap)
            here.append(partial.conc(prefix))
        node_series.append(here)
        piece = TruncatedSeries(COMPLEX, end_vals, cap) + TruncatedSeries.unit(COMPLEX, cap)
        prefix = piece.conc(prefix)
    return node_series, prefix
