"""Power laws that link fact counts, excess entropy, and grammar vocabulary.

The package synthesizes a seeded stochastic source whose texts describe
an infinite random world, then measures three quantities on it: how many
world facts an n-window predicts, how much mutual information adjacent
n-blocks share, and how many rules a grammar-based compressor needs.
Closed forms, Monte Carlo estimates, and corpus statistics share one
toolkit so the three power laws can be compared like for like.
"""

from .facts import (
    UNDECIDED,
    UCountReport,
    exact_u_count,
    infer_fact,
    monte_carlo_u_count,
    u_count_curve,
    u_lower_bound,
)
from .grammar import (
    Grammar,
    Ref,
    deserialize_bits,
    encoded_length,
    expand,
    expand_text,
    extract_words,
    format_grammar,
    irreducible_transform,
    is_irreducible,
    minimal_transform,
    parse_grammar,
    serialize_bits,
    validate_grammar,
    vocab_size,
    yk_length,
)
from .infotheory import (
    EntropyEstimate,
    ExcessCurve,
    empirical_excess,
    exact_excess_curve,
    exact_excess_santafe,
    hilberg_asymptote,
    plugin_block_entropy,
)
from .laws import (
    PowerLawFit,
    Proposition1Report,
    RankFrequencyTable,
    bundled_corpus,
    fit_power_law,
    fit_zipf,
    herdan_curve,
    load_corpus,
    proposition1_verify,
    rank_frequency,
    tokenize,
)
from .miest import (
    CodeLengthTrace,
    MarkovMixtureModel,
    code_length,
    empirical_markov_entropy,
    hp,
    mi_curve,
    mixture_redundancy_bound,
    pointwise_mi,
)
from .santafe import (
    DecodeError,
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

__version__ = "1.0.0"
