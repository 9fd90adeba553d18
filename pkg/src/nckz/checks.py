"""The acceptance suite: every criterion as a callable returning a result.

Used both by the test module (one test per criterion) and by the command
line ``checkall`` subcommand.  The ``fast`` profile lowers every degree cap
by one; tolerances are fixed and never profile-dependent.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .alphabet import Alphabet, braid_letter, word_name
from .braid import build_quotient, flatness_check
from .chen.connections import OneFormConnection
from .chen.iterated import LinearRepresentation, chen_series, rational_pairing
from .chen.kz import kz3_verify, kz4_connection_check
from .chen.polylog import X0, X1, phi_kz, polylog_eval
from .chen.quadrature import PathSpec, QuadratureConfig
from .chen.volterra import volterra_iterate
from .domains import RATIONAL
from .errors import DomainError
from .lie_bases import LyndonBasis, is_grouplike, is_primitive
from .series import NcPoly, TruncatedSeries, max_abs_diff, right_bracketing, \
    right_bracketing_adjoint, shuffle_words
from .diagonal import lazard_dual_family, log_diagonal_check, mrs_identity_check, \
    theorem_diagonal_check

__all__ = ["CheckResult", "run_all", "ALL_CHECKS"]


@dataclass
class CheckResult:
    name: str
    ok: bool
    elapsed: float
    budget: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status}  {self.name}  ({self.elapsed:.2f}s / budget {self.budget:.0f}s)"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "elapsed": self.elapsed,
            "budget": self.budget,
            "details": self.details,
        }


def _timed(name, budget, fn):
    t0 = time.perf_counter()
    ok, details = fn()
    elapsed = time.perf_counter() - t0
    if elapsed > budget:
        ok = False
        details["budget_exceeded"] = elapsed
    return CheckResult(name, ok, elapsed, budget, details)


# -- 1: PBW duality ---------------------------------------------------------------


def check_pbw_duality(profile: str = "full") -> CheckResult:
    def body():
        plans = [(Alphabet.free(["x0", "x1"]), 5), (Alphabet.braid(3), 4)]
        if profile == "fast":
            plans = [(a, c - 1) for a, c in plans]
        bad = []
        for alpha, cap in plans:
            basis = LyndonBasis(alpha, cap)
            words = list(alpha.words(cap))
            s_polys = {w: basis.s(w) for w in words}
            for u in words:
                pu = basis.p(u)
                for v in words:
                    if len(u) != len(v):
                        continue
                    val = pu.pair(s_polys[v])
                    if val != (1 if u == v else 0):
                        bad.append((word_name(u), word_name(v), str(val)))
        return not bad, {"mismatches": bad[:10]}

    return _timed("1 pbw-duality", 10, body)


# -- 2: MRS and log-diagonal identities ---------------------------------------------


def check_mrs_identities(profile: str = "full") -> CheckResult:
    def body():
        drop = 1 if profile == "fast" else 0
        x = Alphabet.free(["x0", "x1"])
        t3 = Alphabet.braid(3)
        residuals = {
            "mrs_x_cap4": len(mrs_identity_check(x, 4 - drop).terms),
            "mrs_t3_cap3": len(mrs_identity_check(t3, 3 - drop).terms),
            "log_x_cap3": len(log_diagonal_check(x, 3 - drop).terms),
            "log_t3_cap3": len(log_diagonal_check(t3, 3 - drop).terms),
        }
        return all(v == 0 for v in residuals.values()), residuals

    return _timed("2 mrs-and-log-diagonal", 30, body)


# -- 3: the factorization theorem ----------------------------------------------------


def check_theorem_diagonal(profile: str = "full") -> CheckResult:
    def body():
        cap = 2 if profile == "fast" else 3
        details = {}
        ok = True
        for n in (3, 4):
            rep = theorem_diagonal_check(n, cap)
            details[f"n{n}"] = rep.to_json()
            ok = ok and rep.form2_residual.is_zero() and rep.chosen_reading is not None
        return ok, details

    return _timed("3 theorem-diagonal-both-forms", 60, body)


# -- 4: Lazard dual family ------------------------------------------------------------


def check_lazard_family(profile: str = "full") -> CheckResult:
    def body():
        drop = 1 if profile == "fast" else 0
        details = {}
        ok = True
        for n in (3, 4):
            family = lazard_dual_family(n, 3 - drop)
            gram_bad = family.gram_residual()
            details[f"n{n}_epsilon"] = family.epsilon
            details[f"n{n}_gram_bad"] = len(gram_bad)
            ok = ok and not gram_bad and family.epsilon == -1
            tower_bad = 0
            tuples = [t for t in family.generator_tuples(4 - drop, max_factors=2)]
            rprods = {t: family.r_product(t) for t in tuples}
            for t1 in tuples:
                tower = family.a_tower(t1, signed=True)
                deg1 = sum(len(g) for g in t1)
                for t2 in tuples:
                    if sum(len(g) for g in t2) != deg1:
                        continue
                    val = tower.pair(rprods[t2])
                    if val != (1 if t1 == t2 else 0):
                        tower_bad += 1
            details[f"n{n}_tower_bad"] = tower_bad
            ok = ok and tower_bad == 0
        return ok, details

    return _timed("4 lazard-dual-family", 30, body)


# -- 5: randomized algebraic property suites ------------------------------------------


def _random_poly(rng, letters, max_deg, max_terms, zero_constant=True) -> NcPoly:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(1 if zero_constant else 0, max_deg)
        w = tuple(rng.choice(letters) for _ in range(d))
        terms[w] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return NcPoly(RATIONAL, terms)


def check_random_suites(profile: str = "full") -> CheckResult:
    trials = 100 if profile == "fast" else 200

    def body():
        rng = random.Random(20250810)
        alpha = Alphabet.free(["x0", "x1"])
        letters = alpha.letters
        failures = {}

        def run(name, fn):
            bad = sum(0 if fn() else 1 for _ in range(trials))
            failures[name] = bad

        def zinbiel():
            r = _random_poly(rng, letters, 2, 2)
            s = _random_poly(rng, letters, 2, 2)
            t = _random_poly(rng, letters, 1, 2)
            return r.half_shuffle(s).half_shuffle(t) == \
                r.half_shuffle(s.half_shuffle(t)) + r.half_shuffle(t.half_shuffle(s))

        def symmetrization():
            r = _random_poly(rng, letters, 3, 3)
            s = _random_poly(rng, letters, 2, 3)
            return r.shuffle(s) == r.half_shuffle(s) + s.half_shuffle(r)

        def antipode_laws():
            cap = 5
            s = _random_poly(rng, letters, 2, 3).truncate(cap)
            r = _random_poly(rng, letters, 2, 3).truncate(cap)
            if s.conc(r).antipode() != r.antipode().conc(s.antipode()):
                return False
            if s.shuffle(r).antipode() != s.antipode().shuffle(r.antipode()):
                return False
            one = TruncatedSeries.unit(RATIONAL, cap)
            g = one + s
            return g.conc(g.antipode()) == one and g.antipode().conc(g) == one

        basis = LyndonBasis(alpha, 4)

        def _random_lie(cap):
            acc = NcPoly.zero(RATIONAL)
            for l in basis.lyndon_words(max_len=cap):
                if rng.random() < 0.4:
                    acc = acc + basis.p(l).scale(Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
            return acc.truncate(cap)

        def ree_roundtrip():
            lie = _random_lie(4)
            g = lie.exp()
            ok1, _ = is_grouplike(g, alpha, "shuffle")
            ok2, _ = is_primitive(g.log().as_poly(), alpha, "shuffle", cap=4)
            exp_neg = (-lie).exp()
            return ok1 and ok2 and g.antipode() == exp_neg

        def adjointness():
            dv = rng.randint(1, 5)
            v = tuple(rng.choice(letters) for _ in range(dv))
            w = tuple(rng.choice(letters) for _ in range(dv))
            lhs = right_bracketing(v).pair(NcPoly.from_word(RATIONAL, w))
            rhs = NcPoly.from_word(RATIONAL, v).pair(right_bracketing_adjoint(w))
            return lhs == rhs

        run("zinbiel", zinbiel)
        run("symmetrization", symmetrization)
        run("antipode", antipode_laws)
        run("ree", ree_roundtrip)
        run("adjointness", adjointness)
        return all(v == 0 for v in failures.values()), failures

    return _timed("5 randomized-property-suites", 60, body)


# -- 6: braid module -------------------------------------------------------------------


def check_braid(profile: str = "full") -> CheckResult:
    def body():
        details = {}
        q3 = build_quotient(3, "R", 2)
        details["n3_degree2"] = q3.dims()[2]
        ok = q3.dims()[2] == {"free_lie": 3, "ideal": 2, "quotient": 1}
        rng = random.Random(42)
        for n in (3, 4):
            quotient = build_quotient(n, "R", 2)
            alpha = Alphabet.braid(n)
            letter_sum = NcPoly(RATIONAL, {(a,): 1 for a in alpha.letters})
            central = all(
                quotient.normal_form(
                    letter_sum.conc(NcPoly.from_letter(RATIONAL, a))
                    - NcPoly.from_letter(RATIONAL, a).conc(letter_sum)
                ).is_zero()
                for a in alpha.letters
            )
            details[f"n{n}_central"] = central
            ok = ok and central
            samples = []
            while len(samples) < 5:
                pt = tuple(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(n))
                if min(abs(a - b) for a, b in itertools.combinations(pt, 2)) > 0.4:
                    samples.append(pt)
            rep = flatness_check(n, samples, tol=1e-10, quotient=quotient)
            details[f"n{n}_flatness"] = {
                "sum": rep.sum_residual, "euler": rep.euler_residual,
                "bracket": rep.bracket_residual,
            }
            ok = ok and rep.ok
        return ok, details

    return _timed("6 braid-quotient-and-flatness", 30, body)


# -- 7: Chen numerics --------------------------------------------------------------------


def _kz3_path() -> PathSpec:
    return PathSpec.line((1.3, 0.1, 0.4 + 0.2j), (1.5, -0.1, 0.55 + 0.1j))


def check_chen_numerics(profile: str = "full") -> CheckResult:
    def body():
        cap = 2 if profile == "fast" else 3
        cfg = QuadratureConfig(panels=4)
        conn = OneFormConnection.kz(3)
        path = _kz3_path()
        big = chen_series(conn, path, cfg, 2 * cap)
        words = [w for d in range(1, cap + 1)
                 for w in itertools.product(conn.letters, repeat=d)]
        char_res = 0.0
        for u in words:
            au = big.coeff(u)
            for v in words:
                lhs = sum(m * big.coeff(w) for w, m in shuffle_words(u, v).items())
                char_res = max(char_res, abs(lhs - au * big.coeff(v)))

        mid = (1.45, 0.02, 0.5 + 0.16j)
        c_full = chen_series(conn, path, cfg, cap)
        c_first = chen_series(conn, PathSpec.line(path.start, mid), cfg, cap)
        c_second = chen_series(conn, PathSpec.line(mid, path.end), cfg, cap)
        concat_res = max_abs_diff(c_full, c_second.conc(c_first))

        detour = PathSpec.through(path.start, (1.6, 0.3, 0.7 + 0.4j), path.end)
        homotopy_res = max_abs_diff(c_full, chen_series(conn, detour, cfg, cap))

        details = {"character": char_res, "concatenation": concat_res,
                   "homotopy": homotopy_res}
        return (char_res < 1e-8 and concat_res < 1e-8 and homotopy_res < 1e-7), details

    return _timed("7 chen-character-concat-homotopy", 120, body)


# -- 8: zeta constants --------------------------------------------------------------------


def zeta_oracle(s: int, n_terms: int = 4000) -> float:
    """sum n^-s by direct summation plus an Euler-Maclaurin tail."""
    n = n_terms
    partial = sum(1.0 / k ** s for k in range(1, n + 1))
    tail = n ** (1 - s) / (s - 1) - 0.5 * n ** (-s) + s / 12.0 * n ** (-s - 1)
    return partial + tail


def check_zeta_constants(profile: str = "full") -> CheckResult:
    def body():
        z2, z3 = zeta_oracle(2), zeta_oracle(3)
        li2 = polylog_eval("x0x1", 1.0)
        li3 = polylog_eval("x0x0x1", 1.0)
        phi = phi_kz(2)
        details = {
            "li_x0x1_err": abs(li2 - z2),
            "li_x0x0x1_err": abs(li3 - z3),
            "phi_x0x1_err": abs(phi.coeff((X0, X1)) - z2),
            "phi_x1x0_err": abs(phi.coeff((X1, X0)) + z2),
        }
        return all(v < 1e-8 for v in details.values()), details

    return _timed("8 zeta-constants", 30, body)


# -- 9: hypergeometric pairing ---------------------------------------------------------------


def hypergeometric_representation(t0: float, t1: float, t2: float) -> LinearRepresentation:
    conn = OneFormConnection.unit_interval_pair()
    x0, x1 = conn.letters
    mu = {
        x0: -np.array([[0.0, 0.0], [t0 * t1, t2]]),
        x1: -np.array([[0.0, 1.0], [0.0, t2 - t0 - t1]]),
    }
    return LinearRepresentation(np.array([1.0, 0.0]), mu, np.array([1.0, 0.0]))


def check_hypergeometric(profile: str = "full") -> CheckResult:
    def body():
        from scipy.integrate import solve_ivp

        t0, t1, t2 = 0.3, 0.4, 0.9
        rep = hypergeometric_representation(t0, t1, t2)
        conn = OneFormConnection.unit_interval_pair()
        path = PathSpec.line((0.1,), (0.5,))
        value = rational_pairing(rep, conn, path, QuadratureConfig(), length_cap=20)

        m0 = np.array([[0.0, 0.0], [t0 * t1, t2]])
        m1 = np.array([[0.0, 1.0], [0.0, t2 - t0 - t1]])

        def rhs(s, q):
            return (-m0 / s - m1 / (1 - s)) @ q

        sol = solve_ivp(rhs, (0.1, 0.5), [1.0, 0.0], method="DOP853",
                        rtol=1e-12, atol=1e-14)
        oracle = sol.y[0, -1]
        details = {"pairing": [value.real, value.imag], "oracle": oracle,
                   "error": abs(value - oracle)}
        return abs(value - oracle) < 1e-6, details

    return _timed("9 hypergeometric-pairing", 30, body)


# -- 10: iterative reconstruction of the Chen series --------------------------------------------


def check_volterra(profile: str = "full") -> CheckResult:
    def body():
        cap = 2 if profile == "fast" else 3
        cfg = QuadratureConfig(panels=4)
        conn = OneFormConnection.kz(3)
        path = _kz3_path()
        chen = chen_series(conn, path, cfg, cap)
        details = {}
        ok = True
        for label, base in (
            ("base_T3", [braid_letter(1, 3), braid_letter(2, 3)]),
            ("base_t12", [braid_letter(1, 2)]),
        ):
            flow = volterra_iterate(conn, base, path, cfg, cap, cap)
            err = max_abs_diff(flow.total, chen)
            details[label] = err
            ok = ok and err < 1e-6
        return ok, details

    return _timed("10 volterra-chen-equivalence", 120, body)


# -- 11: three-strand verification -----------------------------------------------------------------


def check_kz3(profile: str = "full") -> CheckResult:
    def body():
        cap = 1 if profile == "fast" else 2
        samples = [
            (1.3, 0.1, 0.4 + 0.2j),
            (2.0, -0.3, 0.5 + 0.4j),
            (1.1 + 0.2j, 0.0, 0.3),
        ]
        rep = kz3_verify(samples, cap=cap)
        details = rep.to_json()
        ok = (rep.max_residual < 1e-5 and rep.max_residual_left < 1e-5
              and rep.variant_gap < 1e-6)
        return ok, details

    return _timed("11 kz3-finite-difference", 120, body)


# -- 12: four-strand connection identity --------------------------------------------------------------


def check_kz4(profile: str = "full") -> CheckResult:
    def body():
        rep = kz4_connection_check()
        return rep.ok, rep.to_json()

    return _timed("12 kz4-connection-identity", 5, body)


ALL_CHECKS = [
    check_pbw_duality,
    check_mrs_identities,
    check_theorem_diagonal,
    check_lazard_family,
    check_random_suites,
    check_braid,
    check_chen_numerics,
    check_zeta_constants,
    check_hypergeometric,
    check_volterra,
    check_kz3,
    check_kz4,
]


def run_all(profile: str = "full") -> list[CheckResult]:
    if profile not in ("fast", "full"):
        raise DomainError(f"unknown profile {profile!r}")
    return [fn(profile) for fn in ALL_CHECKS]
