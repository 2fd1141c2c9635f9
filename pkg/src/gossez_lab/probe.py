"""Numerical probe of the range geometry of G + lambda*J.

The skew quadratic form obstruction gives, for every point Gx + lambda*s of
the range (s in Jx) at sup distance eps from -e*, the inequality

    1 <= (lambda/4) * (1 + eps/lambda)**2 + eps,

so the sup distance from -e* to the range is at least the nonnegative root
d(lambda) of d**2 + 6*lambda*d + lambda**2 - 4*lambda = 0, which is positive
exactly for lambda < 4.  A nonconvexity certificate, because -e* is a limit
of midpoints of explicit range points.

The probe computes the complementary upper estimates: over x supported on
1..n, the best sup-norm residual min ||Gx + lambda*s - target||.  Fixing a
sign pattern sigma in {-1,0,+1}^n for x linearizes both ||x||_1 and the
forced selection values, so each pattern is one small LP and the exact
probe is a sweep over all 3**n patterns.  The heuristic probe hill-climbs
over patterns under an LP budget.  Estimates are re-evaluated exactly
(rational arithmetic) at the LP's solution, so every reported value is an
achieved residual, not just an LP objective.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .duality import clamp_selection, clamped_residual
from .sequences import EvConstSeq, SparseSeq, e_star
from .simplex import EQ, LEQ, OPTIMAL, LPProblem, lp_solve

SignPattern = Tuple[int, ...]

# patterns within this of the minimum count as ties; ties go to the
# lexicographically smallest pattern
_TIE_TOL = 1e-12
_IMPROVE_TOL = 1e-12
_CONSISTENCY_TOL = 1e-9

_EXACT_MAX_DIM = 12
_HEURISTIC_MAX_DIM = 64


def theorem_a_bound(lam: float, norm_xss: float) -> float:
    """Upper bound (lambda/4) * ||xss||**2 for minus the quadratic form of
    the adjoint of G + lambda*J evaluated along xss."""
    lam = float(lam)
    norm_xss = float(norm_xss)
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if norm_xss < 0:
        raise ValueError(f"norm must be nonnegative, got {norm_xss}")
    return 0.25 * lam * norm_xss * norm_xss


def distance_lower_bound(lam: float) -> float:
    """d(lambda) = sqrt(8*lambda**2 + 4*lambda) - 3*lambda, the nonnegative
    root of (lambda/4)*(1 + d/lambda)**2 + d = 1; valid for 0 < lambda <= 4
    and a lower bound for the sup distance from -e* to the range of
    G + lambda*J."""
    lam = float(lam)
    if not 0 < lam <= 4:
        raise ValueError(f"lambda must lie in (0, 4], got {lam}")
    return math.sqrt(8.0 * lam * lam + 4.0 * lam) - 3.0 * lam


class PatternCertificate(NamedTuple):
    x: SparseSeq
    selection: EvConstSeq


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of one probe run.

    ``estimate`` is an achieved residual: re-evaluating
    ``clamped_residual(certificate_x, lam, target)`` reproduces it.
    ``lower_bound`` is d(lambda) when the target is -e* and lambda <= 4,
    else the trivial 0.
    """

    lam: float
    dim: int
    estimate: float
    certificate_x: SparseSeq
    certificate_selection: EvConstSeq
    lower_bound: float
    method: str
    patterns_explored: int
    seed: int
    runtime_ms: int
    target: EvConstSeq

    def to_json_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "dim": self.dim,
            "estimate": self.estimate,
            "lower_bound": self.lower_bound,
            "method": self.method,
            "patterns_explored": self.patterns_explored,
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
            "certificate_x": self.certificate_x.to_json_dict(),
            "certificate_selection": self.certificate_selection.to_json_dict(),
            "target": self.target.to_json_dict(),
        }


def neg_e_star() -> EvConstSeq:
    """The target of interest: constant -1."""
    return -e_star()


def _validate_pattern(sigma: Sequence[int], n: int) -> SignPattern:
    sigma = tuple(sigma)
    if len(sigma) != n:
        raise ValueError(f"pattern length {len(sigma)} does not match n = {n}")
    if any(s not in (-1, 0, 1) for s in sigma):
        raise ValueError("pattern entries must be -1, 0, or +1")
    return sigma


def _pattern_problem(
    sigma: SignPattern, lam: float, target: EvConstSeq, n: int
) -> LPProblem:
    """LP for one sign pattern: minimize t over (x, r, t) with
    sign-consistent x, r = ||x||_1, and every coordinate residual <= t.

    Free coordinates (sigma_m = 0, indices past n, and the tail) use the
    clamped form |(Gx)_m - target_m| - lambda*r <= t; forced coordinates use
    |(Gx)_m + lambda*r*sigma_m - target_m| <= t.
    """
    r_col = n
    t_col = n + 1
    width = n + 2
    rows: List[Tuple[Tuple[float, ...], str, float]] = []

    def row(coefs: dict[int, float], rel: str, bound: float) -> None:
        dense = [0.0] * width
        for j, c in coefs.items():
            dense[j] = c
        rows.append((tuple(dense), rel, bound))

    for m0, s in enumerate(sigma):
        if s == 0:
            row({m0: 1.0}, EQ, 0.0)
        else:
            row({m0: -float(s)}, LEQ, 0.0)
    row({**{m0: float(s) for m0, s in enumerate(sigma)}, r_col: -1.0}, EQ, 0.0)
    row({t_col: -1.0}, LEQ, 0.0)

    top = max(n, target.prefix_len)
    for m in range(1, top + 1):
        g_row = {k - 1: (1.0 if k > m else -1.0) for k in range(1, n + 1) if k != m}
        tgt = float(target.value_at(m))
        forced = m <= n and sigma[m - 1] != 0
        r_coef = lam * sigma[m - 1] if forced else -lam
        row({**g_row, r_col: r_coef, t_col: -1.0}, LEQ, tgt)
        row(
            {**{j: -c for j, c in g_row.items()}, r_col: -r_coef if forced else -lam,
             t_col: -1.0},
            LEQ,
            -tgt,
        )
    tail_row = {k: -1.0 for k in range(n)}
    tgt = float(target.tail)
    row({**tail_row, r_col: -lam, t_col: -1.0}, LEQ, tgt)
    row({**{k: 1.0 for k in range(n)}, r_col: -lam, t_col: -1.0}, LEQ, -tgt)

    objective = (0.0,) * (width - 1) + (1.0,)
    return LPProblem(objective=objective, constraints=tuple(rows), n_vars=width)


def pattern_lp(
    sigma: Sequence[int], lam: float, target: EvConstSeq, n: Optional[int] = None
) -> Tuple[float, PatternCertificate]:
    """Best residual for one sign pattern.

    Solves the pattern LP, snaps the solution onto the pattern (clipping
    feasibility-tolerance violations), then re-evaluates the residual
    exactly at the snapped point.  The returned value is therefore an
    achieved residual for a concrete finitely supported x.
    """
    lam = float(lam)
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if n is None:
        n = len(sigma)
    sigma = _validate_pattern(sigma, n)
    solution = lp_solve(_pattern_problem(sigma, lam, target, n))
    if solution.status != OPTIMAL:
        raise ArithmeticError(f"pattern LP came back {solution.status}")
    entries: dict[int, Fraction] = {}
    for m, s in enumerate(sigma, start=1):
        if s == 0:
            continue
        v = s * max(0.0, s * solution.values[m - 1])
        if v != 0.0:
            entries[m] = Fraction(v)
    x = SparseSeq(entries)
    lam_exact = Fraction(lam)
    value = float(clamped_residual(x, lam_exact, target))
    return value, PatternCertificate(x, clamp_selection(x, lam_exact, target))


def _select_best(
    scored: Iterable[Tuple[float, SignPattern, PatternCertificate]]
) -> Tuple[float, SignPattern, PatternCertificate]:
    """Order-independent aggregation: the minimum value, with the
    lexicographically smallest pattern among ties within _TIE_TOL."""
    scored = list(scored)
    best = min(v for v, _, _ in scored)
    sigma, cert = min(
        ((sig, cert) for v, sig, cert in scored if v <= best + _TIE_TOL),
        key=lambda item: item[0],
    )
    return best, sigma, cert


def _lower_bound_for(lam: float, target: EvConstSeq) -> float:
    if target == neg_e_star() and lam <= 4:
        return distance_lower_bound(lam)
    return 0.0


def _result(
    lam: float,
    n: int,
    target: EvConstSeq,
    estimate: float,
    cert: PatternCertificate,
    method: str,
    explored: int,
    seed: int,
    started: float,
) -> ProbeResult:
    return ProbeResult(
        lam=lam,
        dim=n,
        estimate=estimate,
        certificate_x=cert.x,
        certificate_selection=cert.selection,
        lower_bound=_lower_bound_for(lam, target),
        method=method,
        patterns_explored=explored,
        seed=seed,
        runtime_ms=int((time.perf_counter() - started) * 1000),
        target=target,
    )


def probe_exact(
    lam: float, n: int, target: EvConstSeq, seed: int = 42, threads: int = 1
) -> ProbeResult:
    """Sweep all 3**n sign patterns; exact minimum of the per-pattern LPs.

    The aggregation is order independent, so pattern evaluation may run on
    several threads without changing the result.
    """
    lam = float(lam)
    if not 1 <= n <= _EXACT_MAX_DIM:
        raise ValueError(f"exact probe supports 1 <= n <= {_EXACT_MAX_DIM}, got {n}")
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    started = time.perf_counter()
    patterns = list(itertools.product((-1, 0, 1), repeat=n))

    def evaluate(sig: SignPattern):
        value, cert = pattern_lp(sig, lam, target, n)
        return value, sig, cert

    threads = max(1, int(threads))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scored = list(pool.map(evaluate, patterns))
    else:
        scored = [evaluate(sig) for sig in patterns]
    estimate, _, cert = _select_best(scored)
    return _result(
        lam, n, target, estimate, cert, "exact", len(patterns), seed, started
    )


def _random_pattern(rng: random.Random, n: int) -> SignPattern:
    return tuple(rng.choice((-1, 0, 1)) for _ in range(n))


def _fresh_pattern(rng, n: int, seen) -> Optional[SignPattern]:
    for _ in range(64):
        sig = _random_pattern(rng, n)
        if sig not in seen:
            return sig
    for sig in itertools.product((-1, 0, 1), repeat=n):
        if sig not in seen:
            return sig
    return None


def probe_heuristic(
    lam: float, n: int, target: EvConstSeq, budget: int = 2000, seed: int = 42
) -> ProbeResult:
    """Seeded hill-climb over sign patterns under an LP budget.

    Starts from a random pattern, moves to the first neighbor (one
    coordinate's sign class changed) that improves, restarts from a fresh
    random pattern on stall, and stops when ``budget`` LPs have been solved
    or every pattern has been evaluated.  Repeat visits are served from a
    memo and do not consume budget.  Deterministic given the seed, and
    never below the exact sweep for the same inputs.
    """
    lam = float(lam)
    if not 1 <= n <= _HEURISTIC_MAX_DIM:
        raise ValueError(f"heuristic probe supports 1 <= n <= {_HEURISTIC_MAX_DIM}")
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    started = time.perf_counter()
    rng = random.Random(seed)
    memo: dict[SignPattern, Tuple[float, PatternCertificate]] = {}
    evals = 0
    total = 3**n

    def evaluate(sig: SignPattern):
        nonlocal evals
        if sig in memo:
            return memo[sig]
        if evals >= budget:
            return None
        evals += 1
        value, cert = pattern_lp(sig, lam, target, n)
        memo[sig] = (value, cert)
        return memo[sig]

    while evals < budget and len(memo) < total:
        sig = _fresh_pattern(rng, n, memo)
        if sig is None:
            break
        current = evaluate(sig)
        if current is None:
            break
        climbing = True
        while climbing and evals < budget:
            climbing = False
            for m in range(n):
                for s in (-1, 0, 1):
                    if s == sig[m]:
                        continue
                    cand = sig[:m] + (s,) + sig[m + 1 :]
                    outcome = evaluate(cand)
                    if outcome is None:
                        climbing = False
                        break
                    if outcome[0] < current[0] - _IMPROVE_TOL:
                        sig, current = cand, outcome
                        climbing = True
                        break
                if climbing or evals >= budget:
                    break

    scored = [(v, sig, cert) for sig, (v, cert) in memo.items()]
    estimate, _, cert = _select_best(scored)
    return _result(lam, n, target, estimate, cert, "heuristic", evals, seed, started)


def theorem_consistency_check(result: ProbeResult) -> bool:
    """For the target -e*: every achieved residual eps must satisfy
    1 <= (lambda/4)*(1 + eps/lambda)**2 + eps, up to 1e-9 of slack.

    A violation would contradict the quadratic-form obstruction, i.e. expose
    a bug in the probe or the exact layer; the check is the bridge between
    the two routes.
    """
    if result.target != neg_e_star():
        raise ValueError("consistency check applies to the target -e* only")
    lam = result.lam
    eps = result.estimate
    return 1.0 <= 0.25 * lam * (1.0 + eps / lam) ** 2 + eps + _CONSISTENCY_TOL
