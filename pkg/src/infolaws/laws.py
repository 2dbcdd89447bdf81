"""Corpus statistics: rank-frequency tables, Zipf and Herdan fits, and
an exact-population verifier for the vocabulary-vs-length power law.

Fits are ordinary least squares in natural-log coordinates.  The
libraries' shared :class:`PowerLawFit` reports the slope as fitted for
generic curves and the (positive) decay exponent for Zipf fits.
"""

from __future__ import annotations

import math
import re
import unicodedata
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import zeta

from .grammar import minimal_transform, vocab_size

_WORD_RE = re.compile(r"[^\W\d_]+")

WORD_TOKENS = "word-tokens"
GRAMMAR_VOCAB = "grammar-vocab"


def tokenize(text: str) -> list[str]:
    """Lowercased maximal runs of alphabetic characters.

    Digits, punctuation, and whitespace all act as separators.
    """
    return _WORD_RE.findall(text.lower())


@dataclass(frozen=True)
class RankFrequencyTable:
    """Words ranked by decreasing frequency, ties broken lexically."""

    entries: tuple
    total: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(e) for e in self.entries))
        freqs = [f for _, _, f in self.entries]
        if any(b > a for a, b in zip(freqs, freqs[1:])):
            raise ValueError("frequencies must be nonincreasing")
        if [r for r, _, _ in self.entries] != list(range(1, len(self.entries) + 1)):
            raise ValueError("ranks must run 1..V")
        if sum(freqs) != self.total:
            raise ValueError("frequencies must sum to the token total")


def rank_frequency(tokens: Sequence[str]) -> RankFrequencyTable:
    """Rank-frequency table of a token list."""
    from collections import Counter

    counts = Counter(tokens)
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = tuple((r + 1, w, f) for r, (w, f) in enumerate(ordered))
    return RankFrequencyTable(entries=entries, total=len(tokens))


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares power-law fit in log-log coordinates."""

    exponent: float
    intercept: float
    r_squared: float
    fit_range: tuple
    b: float = 0.0

    def __post_init__(self):
        if not self.fit_range or not self.fit_range[0] <= self.fit_range[1]:
            raise ValueError("fit range must be a nonempty interval")
        if not -1e-9 <= self.r_squared <= 1 + 1e-9:
            raise ValueError("r_squared must lie in [0, 1]")


def _ols_loglog(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - float((resid**2).sum()) / ss_tot)
    return float(slope), float(intercept), min(1.0, r2)


def fit_power_law(points: Sequence[tuple]) -> PowerLawFit:
    """OLS log-log fit of (x, y) points; natural-log intercept."""
    if len(points) < 3:
        raise ValueError("need at least 3 points to fit")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if (x <= 0).any() or (y <= 0).any():
        raise ValueError("all coordinates must be positive")
    slope, intercept, r2 = _ols_loglog(x, y)
    return PowerLawFit(
        exponent=slope, intercept=intercept, r_squared=r2, fit_range=(float(x.min()), float(x.max()))
    )


def fit_zipf(
    table: RankFrequencyTable,
    r_min: int = 1,
    r_max: int | None = None,
    b: float = 0.0,
    fit_b: bool = False,
) -> PowerLawFit:
    """Fit log f = c - exponent*log(b + r) over ranks [r_min, r_max].

    With ``fit_b`` a 1-D grid over b >= 0 picks the offset minimizing
    the residual.  The reported exponent is positive (the decay rate).
    """
    if r_max is None:
        r_max = len(table.entries)
    rows = [(r, f) for r, _, f in table.entries if r_min <= r <= r_max]
    if len(rows) < 3:
        raise ValueError("need at least 3 ranks in the fit range")
    r = np.array([row[0] for row in rows], dtype=float)
    f = np.array([row[1] for row in rows], dtype=float)

    def sse(offset: float) -> tuple[float, tuple[float, float, float]]:
        slope, intercept, r2 = _ols_loglog(offset + r, f)
        lx, ly = np.log(offset + r), np.log(f)
        resid = ly - (slope * lx + intercept)
        return float((resid**2).sum()), (slope, intercept, r2)

    candidates = [float(b)]
    if fit_b:
        candidates = [0.25 * j for j in range(0, 81)]
    best = min(candidates, key=lambda off: sse(off)[0])
    _, (slope, intercept, r2) = sse(best)
    return PowerLawFit(
        exponent=-slope, intercept=intercept, r_squared=r2, fit_range=(float(r_min), float(r_max)), b=best
    )


def herdan_curve(
    sample: Sequence,
    checkpoints: Sequence[int],
    counter: str = WORD_TOKENS,
    budget: int = 2,
) -> list[tuple[int, int]]:
    """Vocabulary growth points (n, V) over sample prefixes.

    Word mode counts distinct tokens in the first n characters; grammar
    mode counts ``vocab_size(minimal_transform(prefix))``.
    """
    ns = sorted(int(n) for n in checkpoints)
    if not ns:
        raise ValueError("at least one checkpoint is required")
    if ns[-1] > len(sample):
        raise ValueError("checkpoints must not exceed the sample length")
    if ns[0] < 1:
        raise ValueError("checkpoints must be positive")
    out = []
    if counter == WORD_TOKENS:
        for n in ns:
            out.append((n, len(set(tokenize("".join(sample[:n]) if not isinstance(sample, str) else sample[:n])))))
    elif counter == GRAMMAR_VOCAB:
        for n in ns:
            out.append((n, vocab_size(minimal_transform(sample[:n], budget=budget))))
    else:
        raise ValueError(f"unknown counter {counter!r}")
    return out


@dataclass(frozen=True)
class Proposition1Report:
    """Exact-Zipf-population check that V grows like N^beta."""

    beta: float
    points: tuple  # (V, N) pairs
    fit: PowerLawFit | None
    tolerance: float
    within_tolerance: bool | None

    def to_json(self) -> str:
        import json

        return json.dumps(
            {
                "beta": self.beta,
                "points": [[float(v), float(n)] for v, n in self.points],
                "slope": None if self.fit is None else self.fit.exponent,
                "r_squared": None if self.fit is None else self.fit.r_squared,
                "tolerance": self.tolerance,
                "within_tolerance": self.within_tolerance,
            },
            sort_keys=True,
        )


def _population_size(beta: float, v: float) -> float:
    """Total token count N of the exact Zipf population with V words.

    Word r gets frequency V^{1/beta} r^{-1/beta}, rounded to an integer
    of at least 1 when V is small enough to sum literally; above 10^6
    words the unrounded tail sum via the Hurwitz zeta difference is
    used, where rounding noise is negligible.
    """
    a = 1.0 / beta
    if v <= 10**6:
        r = np.arange(1, int(v) + 1, dtype=float)
        f = np.maximum(1.0, np.rint(v**a * r**-a))
        return float(f.sum())
    return float(v**a * (zeta(a) - zeta(a, v + 1)))


def proposition1_verify(
    beta: float,
    v_targets: Sequence[float] | None = None,
    tolerance: float = 0.02,
) -> Proposition1Report:
    """Construct exact Zipf populations and fit V against N.

    The least frequent word has frequency 1 by construction, and the
    fitted slope of log V vs log N is asserted against beta.  Fewer
    than 3 targets produce a report that declines to fit.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    if v_targets is None:
        v_targets = [10.0**e for e in (8, 10, 12, 14, 16)]
    points = tuple((float(v), _population_size(beta, float(v))) for v in sorted(v_targets))
    if len(points) < 3:
        return Proposition1Report(
            beta=beta, points=points, fit=None, tolerance=tolerance, within_tolerance=None
        )
    fit = fit_power_law([(n, v) for v, n in points])
    return Proposition1Report(
        beta=beta,
        points=points,
        fit=fit,
        tolerance=tolerance,
        within_tolerance=bool(abs(fit.exponent - beta) <= tolerance),
    )


def load_corpus(path) -> str:
    """Plain-text corpus as one NFKC-normalized line.

    Whitespace runs collapse to single spaces; the result is stripped.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return re.sub(r"\s+", " ", unicodedata.normalize("NFKC", text)).strip()


def bundled_corpus() -> str:
    """The packaged public-domain English corpus."""
    from importlib import resources

    text = resources.files("infolaws").joinpath("_data/corpus.txt").read_text(encoding="utf-8")
    return re.sub(r"\s+", " ", unicodedata.normalize("NFKC", text)).strip()
