"""Randomized identity suites and independent oracles.

These back the ``verify`` command and the acceptance tests.  Each suite
draws seeded random inputs, checks an exact identity or an inequality, and
stops at the first failure with a serialized counterexample.  The suites
that exercise G accept the operator as a parameter so a deliberately
corrupted implementation can be shown to fail (mutation testing of the
harness itself).

Two oracles live here because the ``verify`` command runs them at runtime:
a bisection solver for the distance bound's defining equation, independent
of the closed form in :mod:`gossez_lab.probe`, and a brute-force
vertex-enumeration minimizer, independent of the simplex code.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import duality, operators, probe
from .sequences import (
    EvConstSeq,
    SparseSeq,
    e_m,
    e_star,
    l1_norm,
    limit,
    pair0,
    sup_norm,
)
from .simplex import EQ, INFEASIBLE, LEQ, OPTIMAL, LPProblem, lp_solve

GApply = Callable[[SparseSeq], EvConstSeq]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: int
    counterexample: Optional[dict] = None


# ---------------------------------------------------------------------------
# seeded random generators


def random_fraction(rng: random.Random, bound: int = 10, max_den: int = 4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(-bound * den, bound * den), den)


def random_sparse(
    rng: random.Random, max_support: int = 20, max_index: int = 24, bound: int = 10
) -> SparseSeq:
    size = rng.randint(0, min(max_support, max_index))
    indices = rng.sample(range(1, max_index + 1), size)
    return SparseSeq({i: random_fraction(rng, bound) for i in indices})


def random_evconst(
    rng: random.Random, max_prefix: int = 6, bound: int = 10
) -> EvConstSeq:
    prefix = tuple(random_fraction(rng, bound) for _ in range(rng.randint(0, max_prefix)))
    return EvConstSeq(prefix, random_fraction(rng, bound))


def random_bidual(rng: random.Random) -> operators.BidualElem:
    return operators.BidualElem(random_sparse(rng, max_support=10), random_fraction(rng))


def bounded_fraction(rng: random.Random, bound: Fraction) -> Fraction:
    """Uniform-ish rational in [-bound, bound], exact."""
    q = rng.randint(1, 8)
    return bound * Fraction(rng.randint(-q, q), q)


# ---------------------------------------------------------------------------
# independent oracles


def bisect_distance_bound(lam: float, iterations: int = 200) -> float:
    """Solve (lambda/4)*(1 + d/lambda)**2 + d = 1 for d in [0, 1] by
    bisection.  The left side is increasing in d, below 1 at d = 0 for
    lambda <= 4, and above 1 at d = 1."""
    if not 0 < lam <= 4:
        raise ValueError(f"lambda must lie in (0, 4], got {lam}")

    def excess(d: float) -> float:
        return 0.25 * lam * (1.0 + d / lam) ** 2 + d - 1.0

    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if excess(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def brute_force_lp_minimum(problem: LPProblem, tol: float = 1e-7) -> Optional[float]:
    """Minimum objective over the feasible vertices, by enumerating every
    choice of n_vars active constraints (equalities always active).  Returns
    None when no feasible vertex exists.  Valid as an LP oracle whenever the
    feasible set is a polytope, e.g. under box constraints."""
    d = problem.n_vars
    obj = np.array([float(c) for c in problem.objective])
    eq_rows = [(r, b) for r, rel, b in problem.constraints if rel == EQ]
    le_rows = [(r, b) for r, rel, b in problem.constraints if rel == LEQ]
    n_free = d - len(eq_rows)
    if n_free < 0:
        n_free = 0
    best: Optional[float] = None
    for chosen in itertools.combinations(range(len(le_rows)), n_free):
        rows = eq_rows + [le_rows[i] for i in chosen]
        if len(rows) != d:
            continue
        A = np.array([[float(c) for c in r] for r, _ in rows])
        b = np.array([float(bb) for _, bb in rows])
        try:
            x = np.linalg.solve(A, b)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(x)):
            continue
        feasible = all(
            float(np.dot(np.asarray(r, dtype=float), x)) <= bb + tol
            for r, bb in le_rows
        ) and all(
            abs(float(np.dot(np.asarray(r, dtype=float), x)) - bb) <= tol
            for r, bb in eq_rows
        )
        if feasible:
            value = float(obj @ x)
            if best is None or value < best:
                best = value
    return best


def random_lp(rng: random.Random) -> LPProblem:
    """Random bounded LP in up to 4 variables and up to 8 rows: a box on
    every variable plus a few random inequality rows."""
    d = rng.randint(1, 4)
    box = 5.0
    rows = []
    extra = rng.randint(0, 8 - 2 * d)
    for _ in range(extra):
        coefs = tuple(float(rng.randint(-3, 3)) for _ in range(d))
        rows.append((coefs, LEQ, float(rng.randint(-5, 8))))
    for j in range(d):
        unit = [0.0] * d
        unit[j] = 1.0
        rows.append((tuple(unit), LEQ, box))
        unit2 = [0.0] * d
        unit2[j] = -1.0
        rows.append((tuple(unit2), LEQ, box))
    objective = tuple(float(rng.randint(-3, 3)) for _ in range(d))
    return LPProblem(objective=objective, constraints=tuple(rows), n_vars=d)


# ---------------------------------------------------------------------------
# suites


def _gstar_from(g: GApply) -> Callable[[operators.BidualElem], EvConstSeq]:
    def gstar(xss: operators.BidualElem) -> EvConstSeq:
        return -g(xss.w) - xss.alpha * e_star()

    return gstar


def suite_skewness(rng: random.Random, cases: int, g: GApply) -> SuiteResult:
    for i in range(cases):
        w = random_sparse(rng)
        x = random_sparse(rng)
        if pair0(w, g(x)) + pair0(x, g(w)) != 0 or pair0(x, g(x)) != 0:
            return SuiteResult(
                "skewness", False, i + 1,
                {"w": w.to_json_dict(), "x": x.to_json_dict()},
            )
    return SuiteResult("skewness", True, cases)


def suite_tail_law(rng: random.Random, cases: int, g: GApply) -> SuiteResult:
    for i in range(cases):
        x = random_sparse(rng)
        if limit(g(x)) != -pair0(x, e_star()):
            return SuiteResult("tail-law", False, i + 1, {"x": x.to_json_dict()})
    return SuiteResult("tail-law", True, cases)


def suite_operator_bound(rng: random.Random, cases: int, g: GApply) -> SuiteResult:
    for i in range(cases):
        x = random_sparse(rng)
        if sup_norm(g(x)) > l1_norm(x):
            return SuiteResult("operator-bound", False, i + 1, {"x": x.to_json_dict()})
    return SuiteResult("operator-bound", True, cases)


def suite_adjoint(rng: random.Random, cases: int, g: GApply) -> SuiteResult:
    gstar = _gstar_from(g)
    for i in range(cases):
        x = random_sparse(rng)
        xss = random_bidual(rng)
        if pair0(x, gstar(xss)) != operators.pair1(g(x), xss):
            return SuiteResult(
                "adjoint", False, i + 1,
                {"x": x.to_json_dict(), "xss": xss.to_json_dict()},
            )
    return SuiteResult("adjoint", True, cases)


def suite_quadratic_form(rng: random.Random, cases: int, g: GApply) -> SuiteResult:
    gstar = _gstar_from(g)
    lim = operators.BidualElem.limit_functional()
    if gstar(lim) != probe.neg_e_star() or operators.pair1(gstar(lim), lim) != -1:
        return SuiteResult("quadratic-form", False, 1, {"xss": lim.to_json_dict()})
    for i in range(cases):
        xss = random_bidual(rng)
        if operators.pair1(gstar(xss), xss) != -xss.alpha * xss.alpha:
            return SuiteResult(
                "quadratic-form", False, i + 1, {"xss": xss.to_json_dict()}
            )
    return SuiteResult("quadratic-form", True, cases)


def suite_w_identities(rng: random.Random, cases: int) -> SuiteResult:
    for i in range(cases):
        x = random_sparse(rng)
        xss = random_bidual(rng)
        ok = (
            operators.w_apply(operators.BidualElem.embed(x)) == x
            and operators.wstar_pair(xss) == xss.alpha
            and operators.wstar_pair(operators.BidualElem.embed(x)) == 0
            and l1_norm(operators.w_apply(xss)) <= operators.bidual_norm(xss)
            and operators.bidual_norm(xss)
            == l1_norm(xss.w) + abs(xss.alpha)
        )
        if not ok:
            return SuiteResult(
                "w-identities", False, i + 1,
                {"x": x.to_json_dict(), "xss": xss.to_json_dict()},
            )
    return SuiteResult("w-identities", True, cases)


def suite_t_identity(max_n: int = 64) -> SuiteResult:
    for n in range(1, max_n + 1):
        y = operators.y_seq(n)
        if operators.t_apply(y) != e_m(n):
            return SuiteResult("t-identity", False, n, {"n": n, "y": y.to_json_dict()})
    return SuiteResult("t-identity", True, max_n)


def suite_prop3(rng: random.Random, cases: int) -> SuiteResult:
    for i in range(cases):
        k = Fraction(rng.randint(1, 5))
        lam = Fraction(rng.randint(1, 8), rng.randint(1, 2))
        bound = 2 * lam * k
        prefix = tuple(
            bounded_fraction(rng, bound) for _ in range(rng.randint(0, 6))
        )
        u = EvConstSeq(prefix, bounded_fraction(rng, bound))
        point, member = duality.prop3_witness(k, lam, u)
        if not member:
            return SuiteResult(
                "prop3", False, i + 1,
                {"k": str(k), "lambda": str(lam), "u": u.to_json_dict(),
                 "point": point.to_json_dict()},
            )
    return SuiteResult("prop3", True, cases)


def _random_selection(rng: random.Random, x: SparseSeq) -> EvConstSeq:
    """A random member of J x: forced on the support, arbitrary within the
    radius elsewhere."""
    spec = duality.selection_spec(x)
    top = x.max_index() + rng.randint(0, 3)
    forced = dict(spec.forced)
    prefix = tuple(
        forced.get(m, bounded_fraction(rng, spec.free_bound))
        for m in range(1, top + 1)
    )
    return EvConstSeq(prefix, bounded_fraction(rng, spec.free_bound))


def suite_duality_map(rng: random.Random, cases: int) -> SuiteResult:
    for i in range(cases):
        x = random_sparse(rng, max_support=8)
        s = duality.canonical_selection(x)
        t = abs(random_fraction(rng, bound=5)) + Fraction(1, 3)
        lam = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        target = random_evconst(rng)
        s_rand = _random_selection(rng, x)
        residual = duality.clamped_residual(x, lam, target)
        attained = duality.clamp_selection(x, lam, target)
        g = operators.gossez_apply(x)
        ok = (
            duality.duality_map_contains(x, s)
            and duality.duality_map_contains(t * x, t * s)
            and duality.duality_map_contains(-x, -s)
            and duality.duality_map_contains(x, s_rand)
            and sup_norm(g + lam * s_rand - target) >= residual
            and duality.duality_map_contains(x, attained)
            and sup_norm(g + lam * attained - target) == residual
        )
        if not ok:
            return SuiteResult(
                "duality-map", False, i + 1,
                {"x": x.to_json_dict(), "lambda": str(lam),
                 "target": target.to_json_dict()},
            )
    return SuiteResult("duality-map", True, cases)


def suite_lp_oracle(rng: random.Random, cases: int) -> SuiteResult:
    for i in range(cases):
        problem = random_lp(rng)
        solution = lp_solve(problem)
        oracle = brute_force_lp_minimum(problem)
        if solution.status == OPTIMAL:
            ok = oracle is not None and abs(solution.objective - oracle) <= 1e-6
        elif solution.status == INFEASIBLE:
            ok = oracle is None
        else:
            ok = False  # bounded by construction, must not report unbounded
        if not ok:
            return SuiteResult(
                "lp-oracle", False, i + 1,
                {"objective": list(problem.objective),
                 "constraints": [[list(r), rel, b] for r, rel, b in problem.constraints],
                 "status": solution.status,
                 "simplex": None if solution.status != OPTIMAL else solution.objective,
                 "oracle": oracle},
            )
    return SuiteResult("lp-oracle", True, cases)


def suite_bound_formula(rng: random.Random, cases: int) -> SuiteResult:
    for i in range(cases):
        lam = rng.uniform(0.001, 3.999)
        closed = probe.distance_lower_bound(lam)
        if abs(closed - bisect_distance_bound(lam)) > 1e-12 or closed <= 0:
            return SuiteResult("bound-formula", False, i + 1, {"lambda": lam})
        a = rng.uniform(0.0, 10.0)
        z = rng.uniform(0.0, 10.0)
        if -a * a + z * a > 0.25 * z * z + 1e-12:
            return SuiteResult("bound-formula", False, i + 1, {"a": a, "z": z})
    if probe.distance_lower_bound(4.0) != 0.0:
        return SuiteResult("bound-formula", False, cases, {"lambda": 4.0})
    return SuiteResult("bound-formula", True, cases)


def run_verification(
    seed: int = 42, cases: int = 500, g_apply: Optional[GApply] = None
) -> list[SuiteResult]:
    """Run every suite with one shared seeded generator; deterministic."""
    if cases < 1:
        raise ValueError(f"cases must be >= 1, got {cases}")
    g = g_apply if g_apply is not None else operators.gossez_apply
    rng = random.Random(seed)
    return [
        suite_skewness(rng, cases, g),
        suite_tail_law(rng, cases, g),
        suite_operator_bound(rng, cases, g),
        suite_adjoint(rng, cases, g),
        suite_quadratic_form(rng, cases, g),
        suite_w_identities(rng, cases),
        suite_t_identity(),
        suite_prop3(rng, min(cases, 400)),
        suite_duality_map(rng, min(cases, 200)),
        suite_lp_oracle(rng, min(cases, 50)),
        suite_bound_formula(rng, min(cases, 100)),
    ]
