"""Source generation, rank law, fact persistence, and the ternary codec."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from infolaws import (
    FactWorld,
    MalformedCodewordError,
    SantaFeConfig,
    SymbolPair,
    TrailingResidueError,
    codeword,
    decode_ternary,
    encode_ternary,
    generate,
    generate_arrays,
    pairs_from_csv,
    pairs_to_csv,
    rank_pmf,
    rank_pmf_vector,
    ternary_to_ints,
)


def test_config_validation():
    with pytest.raises(ValueError):
        SantaFeConfig(beta=0.0, k_max=10)
    with pytest.raises(ValueError):
        SantaFeConfig(beta=1.0, k_max=10)
    with pytest.raises(ValueError):
        SantaFeConfig(beta=0.5, k_max=0)
    with pytest.raises(ValueError):
        SantaFeConfig(beta=0.5, k_max=10, flip_scale=1.5)


def test_config_roundtrip():
    cfg = SantaFeConfig(beta=0.7, k_max=1000, flip_scale=0.25, seed=9)
    assert SantaFeConfig.from_dict(cfg.to_dict()) == cfg


def test_rank_pmf_zeta_limit():
    # k_max=1e7 approximates the untruncated law: P(1) = 1/zeta(2)
    cfg = SantaFeConfig(beta=0.5, k_max=10**7)
    p1 = rank_pmf(cfg, 1)
    assert p1 == pytest.approx(6.0 / np.pi**2, abs=1e-4)
    assert p1 == pytest.approx(0.6079271388115631, rel=1e-12)


def test_rank_pmf_degenerate():
    assert rank_pmf(SantaFeConfig(beta=0.5, k_max=1), 1) == 1.0
    assert rank_pmf(SantaFeConfig(beta=0.5, k_max=2), 2) == pytest.approx(0.2, abs=1e-15)


def test_rank_pmf_out_of_range():
    cfg = SantaFeConfig(beta=0.5, k_max=10)
    with pytest.raises(ValueError):
        rank_pmf(cfg, 0)
    with pytest.raises(ValueError):
        rank_pmf(cfg, 11)


@pytest.mark.parametrize("beta,k_max", [(0.3, 100), (0.5, 10**4), (0.9, 17)])
def test_rank_pmf_sums_to_one(beta, k_max):
    cfg = SantaFeConfig(beta=beta, k_max=k_max)
    assert abs(rank_pmf_vector(cfg).sum() - 1.0) < 1e-12


def test_generate_single_fact():
    cfg = SantaFeConfig(beta=0.5, k_max=1, seed=0)
    pairs = generate(cfg, 3)
    assert len(pairs) == 3
    assert len({p.k for p in pairs}) == 1
    assert len({p.z for p in pairs}) == 1


def test_generate_consistency():
    # flip=0: within one realization equal ranks carry equal bits
    cfg = SantaFeConfig(beta=0.5, k_max=10**4, seed=1)
    ks, zs = generate_arrays(cfg, 10**5)
    seen: dict[int, int] = {}
    for k, z in zip(ks.tolist(), zs.tolist()):
        assert seen.setdefault(k, z) == z


def test_generate_rank_frequency_binomial():
    cfg = SantaFeConfig(beta=0.5, k_max=10**4, seed=2)
    n = 10**5
    ks, _ = generate_arrays(cfg, n)
    p1 = rank_pmf(cfg, 1)
    sigma = np.sqrt(n * p1 * (1 - p1))
    assert abs((ks == 1).sum() - n * p1) <= 3 * sigma


def test_generate_rank_law_chisquare():
    """Goodness of fit of empirical ranks at significance 0.001."""
    cfg = SantaFeConfig(beta=0.5, k_max=10**4, seed=123)
    n = 10**5
    ks, _ = generate_arrays(cfg, n)
    expected = rank_pmf_vector(cfg) * n
    cut = max(1, int(np.searchsorted(-expected, -5.0)))  # group tail cells below 5
    obs = np.bincount(ks, minlength=cfg.k_max + 1)[1:]
    obs_g = np.append(obs[:cut], obs[cut:].sum())
    exp_g = np.append(expected[:cut], expected[cut:].sum())
    _, pval = stats.chisquare(obs_g, exp_g)
    assert pval > 0.001


def test_generate_determinism():
    cfg = SantaFeConfig(beta=0.5, k_max=100, seed=7)
    assert generate(cfg, 500) == generate(cfg, 500)
    ks1, zs1 = generate_arrays(cfg, 500, seed=11)
    ks2, zs2 = generate_arrays(cfg, 500, seed=11)
    assert ks1.tobytes() == ks2.tobytes() and zs1.tobytes() == zs2.tobytes()


def test_generate_empty_and_negative():
    cfg = SantaFeConfig(beta=0.5, k_max=10)
    assert generate(cfg, 0) == []
    with pytest.raises(ValueError):
        generate(cfg, -1)


def test_marginal_fairness():
    # over many realizations the first fact bit is fair
    cfg = SantaFeConfig(beta=0.5, k_max=10)
    reps = 10**4
    ones = sum(FactWorld(cfg, np.random.default_rng(s)).bit(1) for s in range(reps))
    assert abs(ones - reps / 2) <= 3 * np.sqrt(reps * 0.25)


def test_mixing_flips_a_bit():
    cfg = SantaFeConfig(beta=0.5, k_max=10, flip_scale=1.0, seed=3)
    ks, zs = generate_arrays(cfg, 5000)
    flips = 0
    for k in range(1, 11):
        vals = set(zs[ks == k].tolist())
        flips += len(vals) == 2
    assert flips > 0


def test_codeword_examples():
    assert codeword(1, 0) == "02"
    assert codeword(2, 1) == "012"
    assert codeword(5, 1) == "0112"
    with pytest.raises(ValueError):
        codeword(0, 0)


def test_encode_examples():
    assert encode_ternary([(1, 0)]) == "02"
    assert encode_ternary([(2, 1)]) == "012"
    assert encode_ternary([(5, 1), (1, 1)]) == "011212"


def test_decode_examples():
    assert decode_ternary("02") == [SymbolPair(1, 0)]
    assert decode_ternary("011212") == [SymbolPair(5, 1), SymbolPair(1, 1)]
    assert decode_ternary("") == []


def test_decode_trailing_residue():
    with pytest.raises(TrailingResidueError) as exc:
        decode_ternary("021")
    assert exc.value.residue == 1
    with pytest.raises(TrailingResidueError) as exc:
        decode_ternary("0201")
    assert exc.value.residue == 2


def test_decode_malformed():
    with pytest.raises(MalformedCodewordError) as exc:
        decode_ternary("2")
    assert exc.value.position == 0
    with pytest.raises(MalformedCodewordError):
        decode_ternary("0222")
    with pytest.raises(MalformedCodewordError) as exc:
        decode_ternary("032")
    assert exc.value.position == 1


@given(
    st.lists(
        st.tuples(st.integers(min_value=1, max_value=10**6), st.integers(0, 1)),
        max_size=60,
    )
)
@settings(max_examples=200, deadline=None)
def test_codec_roundtrip_property(pairs):
    assert decode_ternary(encode_ternary(pairs)) == [SymbolPair(*p) for p in pairs]


def test_codec_roundtrip_generated():
    cfg = SantaFeConfig(beta=0.5, k_max=10**5, seed=42)
    pairs = generate(cfg, 2000)
    assert decode_ternary(encode_ternary(pairs)) == pairs


def test_pairs_csv_roundtrip():
    cfg = SantaFeConfig(beta=0.5, k_max=1000, seed=6)
    pairs = generate(cfg, 100)
    assert pairs_from_csv(pairs_to_csv(pairs)) == pairs


def test_ternary_to_ints():
    assert ternary_to_ints("0212").tolist() == [0, 2, 1, 2]
    with pytest.raises(ValueError):
        ternary_to_ints("013")
