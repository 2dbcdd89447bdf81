"""Universal sequential coding with a Bayesian mixture over Markov orders.

The coder mixes Krichevsky-Trofimov (add-one-half) predictors of orders
0..M with prior weights proportional to 2^-m.  Its pointwise entropy
H^P(x) = -log2 sum_m w_m P_m(x) serves as a computable stand-in for
algorithmic information, and code-length differences give a pointwise
mutual information between sequences.

Two routes compute H^P: an explicit left-to-right pass emitting a
per-symbol :class:`CodeLengthTrace`, and a closed-form per-order count
evaluation (:func:`hp`) used for long inputs.  They agree to floating
precision; the test suite asserts it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from .infotheory import ExcessCurve

LN2 = math.log(2.0)


def _prior_log_weights(max_order: int) -> np.ndarray:
    """log of weights w_m proportional to 2^-m, m = 0..M, normalized."""
    w = 0.5 ** np.arange(max_order + 1, dtype=float)
    return np.log(w / w.sum())


def _coerce(x: Sequence, alphabet_size: int) -> np.ndarray:
    arr = np.asarray(x, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("sample must be one-dimensional")
    if arr.size and (arr.min() < 0 or arr.max() >= alphabet_size):
        raise ValueError(f"symbols must lie in [0, {alphabet_size})")
    return arr


@dataclass(frozen=True)
class CodeLengthTrace:
    """Per-symbol code lengths of the mixture coder, in bits."""

    bits: np.ndarray
    alphabet_size: int
    max_order: int

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.bits)

    @property
    def total(self) -> float:
        return float(self.bits.sum())


class MarkovMixtureModel:
    """Sequential mixture of KT predictors of orders 0..max_order.

    Context tables key on the last min(m, t) symbols, so an order backs
    off to the longest available context near the start of the pass.
    """

    def __init__(self, alphabet_size: int, max_order: int = 8, log_weights: np.ndarray | None = None):
        if alphabet_size < 2:
            raise ValueError("alphabet_size must be at least 2")
        if max_order < 0:
            raise ValueError("max_order must be nonnegative")
        self.alphabet_size = alphabet_size
        self.max_order = max_order
        self.log_post = _prior_log_weights(max_order) if log_weights is None else np.asarray(log_weights, dtype=float)
        if self.log_post.shape != (max_order + 1,):
            raise ValueError("need one weight per order 0..max_order")
        self.tables: list[dict[tuple, np.ndarray]] = [{} for _ in range(max_order + 1)]
        self.history: list[int] = []

    def _contexts(self) -> list[tuple]:
        h = self.history
        return [tuple(h[len(h) - min(m, len(h)) :]) for m in range(self.max_order + 1)]

    def predictive(self) -> np.ndarray:
        """Mixture predictive distribution over the alphabet; sums to 1."""
        a = self.alphabet_size
        post = np.exp(self.log_post - logsumexp(self.log_post))
        probs = np.zeros(a)
        for m, ctx in enumerate(self._contexts()):
            counts = self.tables[m].get(ctx)
            if counts is None:
                probs += post[m] / a
            else:
                probs += post[m] * (counts + 0.5) / (counts.sum() + a / 2.0)
        return probs

    def update(self, symbol: int) -> float:
        """Advance by one symbol; return its code length in bits."""
        if not 0 <= symbol < self.alphabet_size:
            raise ValueError(f"symbol {symbol} outside [0, {self.alphabet_size})")
        a = self.alphabet_size
        before = logsumexp(self.log_post)
        for m, ctx in enumerate(self._contexts()):
            table = self.tables[m]
            counts = table.get(ctx)
            if counts is None:
                counts = np.zeros(a)
                table[ctx] = counts
            self.log_post[m] += math.log((counts[symbol] + 0.5) / (counts.sum() + a / 2.0))
            counts[symbol] += 1.0
        self.history.append(symbol)
        if len(self.history) > self.max_order:
            del self.history[: len(self.history) - self.max_order]
        return (before - logsumexp(self.log_post)) / LN2


def code_length(x: Sequence, alphabet_size: int, max_order: int = 8) -> CodeLengthTrace:
    """Per-symbol mixture code lengths from one left-to-right pass."""
    arr = _coerce(x, alphabet_size)
    model = MarkovMixtureModel(alphabet_size, max_order)
    bits = np.fromiter((model.update(int(s)) for s in arr), dtype=float, count=arr.size)
    return CodeLengthTrace(bits=bits, alphabet_size=alphabet_size, max_order=max_order)


def _kt_order_bits(arr: np.ndarray, alphabet_size: int, m: int) -> float:
    """Total KT code length (bits) of the order-m predictor.

    Positions before the first full-length context each cost exactly
    log2(A): their backoff contexts (the whole available prefix) are
    visited once, and a KT predictor's first symbol in any fresh context
    costs log2(A).  The remaining positions group by (m+1)-gram counts.
    """
    n = arr.size
    a = alphabet_size
    startup = min(m, n) * math.log2(a)
    if n <= m:
        return startup
    if (m + 1) * math.log2(a) < 62:
        code = np.zeros(n - m, dtype=np.int64)
        for j in range(m + 1):
            code = code * a + arr[j : n - m + j]
        counts = np.bincount(code, minlength=a ** (m + 1)).reshape(-1, a)
    else:
        windows = np.lib.stride_tricks.sliding_window_view(arr, m + 1)
        ctx, inv = np.unique(windows[:, :-1], axis=0, return_inverse=True)
        counts = np.zeros((len(ctx), a), dtype=np.int64)
        np.add.at(counts, (inv, windows[:, -1]), 1)
    totals = counts.sum(axis=1)
    mask = totals > 0
    counts = counts[mask]
    totals = totals[mask]
    loglik = (
        (gammaln(counts + 0.5) - gammaln(0.5)).sum()
        + len(totals) * gammaln(a / 2.0)
        - gammaln(totals + a / 2.0).sum()
    )
    return startup - loglik / LN2


def hp(x: Sequence, alphabet_size: int, max_order: int = 8) -> float:
    """Pointwise entropy H^P(x) in bits, via per-order closed forms."""
    arr = _coerce(x, alphabet_size)
    if arr.size == 0:
        return 0.0
    logw = _prior_log_weights(max_order)
    order_bits = np.array([_kt_order_bits(arr, alphabet_size, m) for m in range(max_order + 1)])
    return float(-logsumexp(logw - order_bits * LN2) / LN2)


def pointwise_mi(x: Sequence, y: Sequence, alphabet_size: int, max_order: int = 8) -> float:
    """I^P(x, y) = H^P(x) + H^P(y) - H^P(xy), xy the concatenation.

    Each term uses an independently initialized model.
    """
    ax = _coerce(x, alphabet_size)
    ay = _coerce(y, alphabet_size)
    both = np.concatenate([ax, ay])
    return (
        hp(ax, alphabet_size, max_order)
        + hp(ay, alphabet_size, max_order)
        - hp(both, alphabet_size, max_order)
    )


def mi_curve(sample: Sequence, ns: Sequence[int], alphabet_size: int, max_order: int = 8) -> ExcessCurve:
    """Pointwise MI between the first two length-n blocks, per n."""
    arr = _coerce(sample, alphabet_size)
    ns = sorted(int(n) for n in ns)
    if ns and 2 * ns[-1] > arr.size:
        raise ValueError("sample must cover two blocks of the largest n")
    points = [
        (n, pointwise_mi(arr[:n], arr[n : 2 * n], alphabet_size, max_order)) for n in ns
    ]
    return ExcessCurve(points=points, source="model-coder")


def empirical_markov_entropy(x: Sequence, alphabet_size: int, m: int) -> float:
    """Plug-in conditional entropy (bits/symbol) of order m."""
    arr = _coerce(x, alphabet_size)
    n = arr.size
    if n <= m:
        return 0.0
    a = alphabet_size
    code = np.zeros(n - m, dtype=np.int64)
    for j in range(m + 1):
        code = code * a + arr[j : n - m + j]
    joint = np.bincount(code)
    joint = joint[joint > 0]
    total = joint.sum()
    h_joint = math.log2(total) - float((joint * np.log2(joint)).sum()) / total
    if m == 0:
        return h_joint
    ctx = np.zeros(n - m, dtype=np.int64)
    for j in range(m):
        ctx = ctx * a + arr[j : n - m + j]
    cc = np.bincount(ctx)
    cc = cc[cc > 0]
    h_ctx = math.log2(total) - float((cc * np.log2(cc)).sum()) / total
    return h_joint - h_ctx


def mixture_redundancy_bound(n: int, alphabet_size: int, max_order: int = 8) -> float:
    """min over orders of the KT redundancy plus prior and startup cost."""
    a = alphabet_size
    logw = _prior_log_weights(max_order)
    best = math.inf
    for m in range(max_order + 1):
        r = (
            a**m * (a - 1) / 2.0 * math.log2(max(n, 2))
            - logw[m] / LN2
            + a**m * 2.0
            + m * math.log2(a)
        )
        best = min(best, r)
    return best
