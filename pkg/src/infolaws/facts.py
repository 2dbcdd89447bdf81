"""Fact inference and the count of inferable facts |U_delta(n)|.

A fact k is inferable from an n-window at level delta when the chance
that the window reveals the true bit Z_k is at least delta.  For the
original process (no flipping) the window reveals Z_k exactly when k
occurs at least once, so the success probability has the closed form
1 - (1 - p_k)^n; ``exact_u_count`` scans it, ``u_lower_bound`` evaluates
the closed-form analytic lower bound, and ``monte_carlo_u_count`` checks both
by simulation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.special import ndtr, zeta

from .santafe import FactWorld, SantaFeConfig, rank_pmf_vector

UNDECIDED = 2


@dataclass(frozen=True)
class UCountReport:
    """Inferable-fact count at one (n, delta) setting."""

    n: int
    delta: float
    exact_count: int
    lower_bound: float
    monte_carlo_count: Optional[float] = None
    monte_carlo_se: Optional[float] = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "delta": self.delta,
                "exact": self.exact_count,
                "bound": self.lower_bound,
                "mc": self.monte_carlo_count,
                "mc_se": self.monte_carlo_se,
            }
        )


def infer_fact(k: int, window: Iterable[tuple[int, int]]) -> int:
    """Decide fact k from a window of (k, z) pairs.

    Returns 0 if (k,0) occurs and (k,1) does not, 1 in the converse
    case, and 2 (undecided) otherwise.
    """
    seen0 = False
    seen1 = False
    for kk, zz in window:
        if kk == k:
            if zz == 0:
                seen0 = True
            else:
                seen1 = True
    if seen0 and not seen1:
        return 0
    if seen1 and not seen0:
        return 1
    return UNDECIDED


def success_probabilities(config: SantaFeConfig, n: int) -> np.ndarray:
    """P(window of length n decides fact k) for all k <= k_max, flip = 0.

    Equals 1 - (1 - p_k)^n because with constant bits the window decides
    k exactly when k occurs at least once.
    """
    p = rank_pmf_vector(config)
    # log1p route keeps precision for tiny p_k and huge n
    return -np.expm1(n * np.log1p(-p))


def u_lower_bound(beta: float, n: int, delta: float) -> float:
    """Analytic lower bound [n / (-zeta(1/beta) * log2(1-delta))]^beta.

    The log base is not fixed by the source material; this package adopts
    base 2 throughout (see the decisions ledger).
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0,1)")
    if not 0.5 < delta < 1.0:
        raise ValueError("delta must lie in (1/2, 1)")
    if n <= 0:
        return 0.0
    denom = -float(zeta(1.0 / beta)) * np.log2(1.0 - delta)
    return float((n / denom) ** beta)


def exact_u_count(config: SantaFeConfig, n: int, delta: float) -> UCountReport:
    """Exact |U_delta(n)| for the original (flip = 0) process.

    Counts ranks whose closed-form success probability reaches delta.
    """
    if config.flip_scale != 0.0:
        raise ValueError("exact count requires the original process (flip_scale = 0)")
    if not 0.5 < delta < 1.0:
        raise ValueError("delta must lie in (1/2, 1)")
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        count = 0
    else:
        count = int(np.count_nonzero(success_probabilities(config, n) >= delta))
    return UCountReport(
        n=n,
        delta=delta,
        exact_count=count,
        lower_bound=u_lower_bound(config.beta, n, delta),
    )


def default_k_probe(config: SantaFeConfig, n: int, delta: float) -> int:
    """Smallest rank beyond which the success probability drops below delta/2."""
    q = success_probabilities(config, n)
    below = np.nonzero(q < delta / 2.0)[0]
    return int(below[0]) + 1 if below.size else config.k_max


def monte_carlo_u_count(
    config: SantaFeConfig,
    n: int,
    delta: float,
    realizations: int,
    k_probe: int | None = None,
    seed: int | None = None,
) -> UCountReport:
    """Estimate |U_delta(n)| from independent realizations.

    For each probed rank k the estimate is the fraction of realizations
    whose window decides k correctly (against the fact value at the end
    of the window).  The count totals ranks with estimate >= delta; its
    standard error propagates each rank's binomial uncertainty through
    the threshold via a normal tail weight.
    """
    if realizations < 1:
        raise ValueError("need at least one realization")
    if not 0.5 < delta < 1.0:
        raise ValueError("delta must lie in (1/2, 1)")
    if k_probe is None:
        k_probe = default_k_probe(config, n, delta)
    k_probe = min(k_probe, config.k_max)
    rng = np.random.default_rng(config.seed if seed is None else seed)
    hits = np.zeros(k_probe, dtype=np.int64)
    if config.flip_scale == 0.0:
        # correctness reduces to presence; vectorize over realizations
        cdf = np.cumsum(rank_pmf_vector(config))
        batch = max(1, min(realizations, 10**7 // max(n, 1)))
        done = 0
        while done < realizations:
            b = min(batch, realizations - done)
            ks = np.searchsorted(cdf, rng.random((b, n)), side="right") + 1
            for row in ks:
                present = np.unique(row)
                present = present[present <= k_probe]
                hits[present - 1] += 1
            done += b
    else:
        cdf = np.cumsum(rank_pmf_vector(config))
        for _ in range(realizations):
            sub = np.random.default_rng(rng.integers(0, 2**63 - 1))
            ks = np.searchsorted(cdf, sub.random(n), side="right") + 1
            ks = np.minimum(ks, config.k_max)
            world = FactWorld(config, sub)
            window = []
            for i in range(n):
                k = int(ks[i])
                window.append((k, world.bit(k)))
                world.advance()
            for k in range(1, k_probe + 1):
                decision = infer_fact(k, window)
                if decision != UNDECIDED and decision == world.bit(k):
                    hits[k - 1] += 1
    est = hits / realizations
    count = int(np.count_nonzero(est >= delta))
    se_k = np.sqrt(est * (1.0 - est) / realizations)
    with np.errstate(divide="ignore", invalid="ignore"):
        zscore = np.where(se_k > 0, (est - delta) / se_k, np.inf * np.sign(est - delta))
    inclusion = ndtr(zscore)
    se = float(np.sqrt(np.sum(inclusion * (1.0 - inclusion))))
    exact = exact_u_count(config, n, delta) if config.flip_scale == 0.0 else None
    return UCountReport(
        n=n,
        delta=delta,
        exact_count=exact.exact_count if exact else count,
        lower_bound=u_lower_bound(config.beta, n, delta),
        monte_carlo_count=count,
        monte_carlo_se=se,
    )


def u_count_curve(
    config: SantaFeConfig, ns: Iterable[int], delta: float
) -> list[tuple[int, int]]:
    """Exact (n, |U_delta(n)|) points for power-law fitting."""
    return [(n, exact_u_count(config, n, delta).exact_count) for n in ns]
