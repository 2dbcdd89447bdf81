"""Santa Fe process synthesis and ternary transcoding.

The Santa Fe process emits pairs (k, z): a rank k drawn from a zeta law
and the current value z of a persistent binary fact Z_k.  With flip
probabilities all zero the facts never change within a realization; the
mixing variant lets each fact follow a symmetric two-state Markov chain.
Pairs transcode to the ternary alphabet {0,1,2} by f(k, z) = b(k) z 2,
where b(k) is the binary expansion of k stripped of its leading digit.

All randomness flows through ``numpy.random.default_rng`` (PCG64), the
single seedable generator used across the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.special import zeta


class SymbolPair(NamedTuple):
    """One emission (k, z) of a Santa Fe process."""

    k: int
    z: int


class DecodeError(ValueError):
    """Base class for ternary decoding failures."""


class TrailingResidueError(DecodeError):
    """Input ended inside a codeword; carries the residue length."""

    def __init__(self, residue: int):
        self.residue = residue
        super().__init__(f"trailing partial codeword of length {residue}")


class MalformedCodewordError(DecodeError):
    """A codeword lacked the mandatory z symbol, or held a non-ternary symbol."""

    def __init__(self, position: int, reason: str = "empty codeword"):
        self.position = position
        super().__init__(f"{reason} at symbol {position}")


@dataclass(frozen=True)
class SantaFeConfig:
    """Full description of a Santa Fe source.

    Parameters
    ----------
    beta : float
        Rank-law exponent, 0 < beta < 1; ranks follow k^(-1/beta).
    k_max : int
        Alphabet truncation; the zeta law is renormalized over k <= k_max.
    flip_scale : float
        Per-fact flip probability scale c in [0, 1]; p_k = c * P(K = k).
        Zero recovers the original (strongly nonergodic) process.
    seed : int
        Default seed for ``generate`` when no explicit seed is given.
    """

    beta: float
    k_max: int
    flip_scale: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0,1), got {self.beta}")
        if self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")
        if not 0.0 <= self.flip_scale <= 1.0:
            raise ValueError(f"flip_scale must lie in [0,1], got {self.flip_scale}")

    @property
    def normalizer(self) -> float:
        """Z(beta, k_max) = sum of k^(-1/beta) over k <= k_max."""
        a = 1.0 / self.beta
        if self.k_max <= 4096:
            # direct summation; the zeta difference loses an ulp here
            return float(math.fsum(k ** -a for k in range(1, self.k_max + 1)))
        return float(zeta(a) - zeta(a, self.k_max + 1))

    def flip_probability(self, k: int) -> float:
        """Per-step flip probability p_k = flip_scale * P(K = k)."""
        return self.flip_scale * rank_pmf(self, k)

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "k_max": self.k_max,
            "flip_scale": self.flip_scale,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SantaFeConfig":
        return cls(
            beta=float(d["beta"]),
            k_max=int(d["k_max"]),
            flip_scale=float(d.get("flip_scale", 0.0)),
            seed=int(d.get("seed", 0)),
        )


def rank_pmf(config: SantaFeConfig, k) -> float | np.ndarray:
    """Zeta-law rank probability P(K = k) = k^(-1/beta) / Z(beta, k_max).

    Accepts a scalar rank or an array of ranks; ranks must lie in
    [1, k_max].
    """
    karr = np.asarray(k)
    if np.any(karr < 1) or np.any(karr > config.k_max):
        raise ValueError(f"rank out of range [1, {config.k_max}]")
    p = karr.astype(float) ** (-1.0 / config.beta) / config.normalizer
    return float(p) if np.isscalar(k) else p


def rank_pmf_vector(config: SantaFeConfig) -> np.ndarray:
    """Full probability vector over ranks 1..k_max (index 0 is rank 1)."""
    k = np.arange(1, config.k_max + 1, dtype=float)
    return k ** (-1.0 / config.beta) / config.normalizer


class FactWorld:
    """Lazily materialized fact bits Z_k with optional Markov flipping.

    Bits are drawn fair on first request, in request order.  A bit with
    flip probability p advances through the elapsed emission steps in one
    draw using the closed-form m-step flip chance (1 - (1-2p)^m) / 2,
    which is distributionally identical to stepping the two-state chain.
    """

    def __init__(self, config: SantaFeConfig, rng: np.random.Generator):
        self._config = config
        self._rng = rng
        self._bits: dict[int, int] = {}
        self._born: dict[int, int] = {}
        self.step = 0

    def bit(self, k: int) -> int:
        cfg = self._config
        if k not in self._bits:
            self._bits[k] = int(self._rng.integers(0, 2))
            self._born[k] = self.step
            return self._bits[k]
        if cfg.flip_scale > 0.0:
            m = self.step - self._born[k]
            if m > 0:
                p = cfg.flip_probability(k)
                q = 0.5 * (1.0 - (1.0 - 2.0 * p) ** m)
                if self._rng.random() < q:
                    self._bits[k] ^= 1
                self._born[k] = self.step
        return self._bits[k]

    def advance(self):
        """Move every tracked chain forward by one emission step."""
        self.step += 1


def generate_arrays(
    config: SantaFeConfig, n: int, seed: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Generate n emissions as parallel arrays (ks, zs).

    Ranks are drawn by inverse CDF over the precomputed cumulative rank
    distribution; fact bits come from a :class:`FactWorld` sharing the
    same generator.  Deterministic given (config, n, seed).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = np.random.default_rng(config.seed if seed is None else seed)
    if n == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    cdf = np.cumsum(rank_pmf_vector(config))
    ks = np.searchsorted(cdf, rng.random(n), side="right") + 1
    ks = np.minimum(ks, config.k_max).astype(np.int64)
    zs = np.empty(n, dtype=np.int64)
    if config.flip_scale == 0.0:
        # constant bits: materialize in first-appearance order
        _, first = np.unique(ks, return_index=True)
        order = ks[np.sort(first)]
        fresh = rng.integers(0, 2, len(order))
        table = {int(k): int(b) for k, b in zip(order, fresh)}
        zs[:] = [table[int(k)] for k in ks]
    else:
        world = FactWorld(config, rng)
        for i in range(n):
            zs[i] = world.bit(int(ks[i]))
            world.advance()
    return ks, zs


def generate(config: SantaFeConfig, n: int, seed: int | None = None) -> list[SymbolPair]:
    """Generate n Santa Fe pairs; see :func:`generate_arrays`."""
    ks, zs = generate_arrays(config, n, seed)
    return [SymbolPair(int(k), int(z)) for k, z in zip(ks, zs)]


def codeword(k: int, z: int) -> str:
    """Ternary codeword f(k, z) = b(k) z 2 with b(1) empty."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return bin(k)[3:] + str(int(z)) + "2"


def encode_ternary(pairs: Iterable[tuple[int, int]]) -> str:
    """Concatenate codewords of a pair sequence into a ternary string."""
    return "".join(codeword(k, z) for k, z in pairs)


def decode_ternary(t: str) -> list[SymbolPair]:
    """Exact left inverse of :func:`encode_ternary`.

    Splits at each '2'; within a codeword the last symbol before the
    terminator is z and the remaining prefix, with a '1' prepended, is
    the binary expansion of k.

    Raises
    ------
    MalformedCodewordError
        If a codeword has no symbol before its terminator, or a symbol
        outside {0,1,2} appears.
    TrailingResidueError
        If the input ends inside a codeword; carries the residue length.
    """
    pairs: list[SymbolPair] = []
    start = 0
    for pos, ch in enumerate(t):
        if ch not in "012":
            raise MalformedCodewordError(pos, "non-ternary symbol")
        if ch == "2":
            seg = t[start:pos]
            if not seg:
                raise MalformedCodewordError(pos)
            z = int(seg[-1])
            k = int("1" + seg[:-1], 2)
            pairs.append(SymbolPair(k, z))
            start = pos + 1
    if start != len(t):
        raise TrailingResidueError(len(t) - start)
    return pairs


def pairs_to_csv(pairs: Iterable[tuple[int, int]]) -> str:
    """Serialize pairs as one "k,z" line each."""
    return "\n".join(f"{k},{z}" for k, z in pairs) + "\n"


def pairs_from_csv(text: str) -> list[SymbolPair]:
    """Parse the "k,z" line format produced by :func:`pairs_to_csv`."""
    pairs = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        k, z = line.split(",")
        pairs.append(SymbolPair(int(k), int(z)))
    return pairs


def ternary_to_ints(t: str | Sequence[int]) -> np.ndarray:
    """Ternary characters (or ints) as an int64 array over {0,1,2}."""
    if isinstance(t, str):
        arr = np.frombuffer(t.encode("ascii"), dtype=np.uint8) - ord("0")
        arr = arr.astype(np.int64)
    else:
        arr = np.asarray(t, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() > 2):
        raise ValueError("ternary input must lie in {0,1,2}")
    return arr
