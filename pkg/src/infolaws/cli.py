"""Command-line harness for seeded, reproducible experiments.

Each subcommand assembles an :class:`ExperimentReport` whose serialized
form depends only on the subcommand, configuration, and seed; wall-clock
timings go to stderr so reports stay byte-identical across runs.  Exit
codes: 0 when every requested check passes, 1 when a check fails, 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import facts, grammar, infotheory, laws, miest, santafe


@dataclass
class ExperimentReport:
    """Deterministic experiment summary with optional curve payloads."""

    subcommand: str
    config: dict
    results: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> str:
        payload = {
            "subcommand": self.subcommand,
            "config": self.config,
            "results": self.results,
            "checks": self.checks,
            "curves": self.curves,
            "passed": self.passed,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        rows = ["section,name,value"]
        rows += [f"config,{k},{self.config[k]}" for k in sorted(self.config)]
        rows += [f"results,{k},{self.results[k]}" for k in sorted(self.results)]
        rows += [f"checks,{k},{self.checks[k]}" for k in sorted(self.checks)]
        for name in sorted(self.curves):
            for x, y in self.curves[name]:
                rows.append(f"curve:{name},{x},{y}")
        rows.append(f"status,passed,{self.passed}")
        return "\n".join(rows) + "\n"


@contextlib.contextmanager
def _stage(label: str):
    t0 = time.perf_counter()
    yield
    print(f"[time] {label}: {time.perf_counter() - t0:.2f}s", file=sys.stderr)


def _round(x: float, digits: int = 10) -> float:
    return float(f"{float(x):.{digits}g}")


def _parse_config_file(path: str) -> dict:
    """Flat key-value config: 'key = value' lines, '#' comments."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, value = line.partition("=")
        else:
            key, _, value = line.partition(" ")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not key or not value:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        out[key] = value
    return out


_CONFIG_TYPES = {
    "beta": float,
    "k_max": int,
    "flip_scale": float,
    "n": int,
    "n_max": int,
    "delta": float,
    "seed": int,
    "order": int,
    "budget": int,
    "mc_reps": int,
    "corpus": str,
    "out": str,
    "format": str,
    "zipf": str,
    "exact": lambda s: s.lower() in ("1", "true", "yes"),
    "iid": lambda s: s.lower() in ("1", "true", "yes"),
    "minimal": lambda s: s.lower() in ("1", "true", "yes"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infolaws",
        description="Seeded experiments linking fact counts, excess entropy, and grammar vocabulary.",
    )
    parser.add_argument("--config", help="flat key-value config file; flags override it")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--beta", type=float, default=0.5, help="rank-law exponent in (0,1)")
    common.add_argument("--k-max", type=int, default=10**6, dest="k_max", help="rank truncation")
    common.add_argument("--flip-scale", type=float, default=0.0, dest="flip_scale", help="mixing flip scale")
    common.add_argument("--n", type=int, default=None, help="single window/sample size")
    common.add_argument("--n-max", type=int, default=65536, dest="n_max", help="largest window/sample size")
    common.add_argument("--delta", type=float, default=0.9, help="predictability threshold")
    common.add_argument("--seed", type=int, default=0, help="master random seed")
    common.add_argument("--order", type=int, default=8, help="max Markov order of the mixture coder")
    common.add_argument("--corpus", default=None, help="path to a plain-text corpus")
    common.add_argument("--out", default=None, help="directory for report and curve artifacts")
    common.add_argument("--format", choices=("csv", "json"), default="json", help="report format")

    sub = parser.add_subparsers(dest="subcommand", required=True)
    parser._infolaws_subparsers = sub  # so config defaults reach each subparser
    p = sub.add_parser("generate", parents=[common], help="sample the stochastic source")
    p = sub.add_parser("facts", parents=[common], help="inferable-fact counts and bounds")
    p.add_argument("--mc-reps", type=int, default=0, dest="mc_reps", help="Monte Carlo repetitions (0 = skip)")
    p = sub.add_parser("grammar", parents=[common], help="grammar transforms and statistics")
    p.add_argument("--minimal", action="store_true", help="use the encoded-length search transform")
    p.add_argument("--budget", type=int, default=2, help="search effort knob")
    p = sub.add_parser("entropy", parents=[common], help="excess-entropy curves")
    p.add_argument("--exact", action="store_true", help="closed-form curve instead of plug-in estimates")
    p = sub.add_parser("mi", parents=[common], help="pointwise mutual information curve")
    p.add_argument("--iid", action="store_true", help="IID uniform ternary control instead of the source")
    p = sub.add_parser("laws", parents=[common], help="rank-frequency and vocabulary laws on a corpus")
    p.add_argument("--zipf", default="10:1000", help="rank fit range as MIN:MAX")
    p = sub.add_parser("hilberg", parents=[common], help="end-to-end power-law report")
    p.add_argument("--budget", type=int, default=3, help="grammar search effort knob")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    known, _ = probe.parse_known_args(argv)
    if known.config:
        raw = _parse_config_file(known.config)
        defaults = {}
        for key, value in raw.items():
            if key not in _CONFIG_TYPES:
                raise ValueError(f"unknown config key {key!r}")
            defaults[key] = _CONFIG_TYPES[key](value)
        parser.set_defaults(**defaults)
        # subparsers re-apply their own defaults, so propagate there too
        for sub in parser._infolaws_subparsers.choices.values():
            known_dests = {a.dest for a in sub._actions}
            sub.set_defaults(**{k: v for k, v in defaults.items() if k in known_dests})
    return parser.parse_args(argv)


def _config_echo(args: argparse.Namespace, keys: tuple[str, ...]) -> dict:
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _ternary_sample(config: santafe.SantaFeConfig, n_chars: int, seed: int) -> str:
    """Ternary-encoded source text of exactly n_chars characters."""
    pairs: list[str] = []
    total = 0
    chunk_seed = seed
    while total < n_chars:
        need = max(1, math.ceil((n_chars - total) / 2))
        text = santafe.encode_ternary(santafe.generate(config, need, seed=chunk_seed))
        pairs.append(text)
        total += len(text)
        chunk_seed += 1
    return "".join(pairs)[:n_chars]


def _pow2_grid(lo_exp: int, hi: int) -> list[int]:
    return [2**j for j in range(lo_exp, int(math.log2(hi)) + 1) if 2**j <= hi]


def _fit_or_none(points) -> laws.PowerLawFit | None:
    pos = [(x, y) for x, y in points if x > 0 and y > 0]
    if len(pos) < 3:
        return None
    return laws.fit_power_law(pos)


def _cmd_generate(args) -> ExperimentReport:
    config = santafe.SantaFeConfig(beta=args.beta, k_max=args.k_max, flip_scale=args.flip_scale, seed=args.seed)
    n = args.n or 1000
    with _stage("generate"):
        pairs = santafe.generate(config, n)
        text = santafe.encode_ternary(pairs)
    report = ExperimentReport(
        subcommand="generate",
        config=_config_echo(args, ("beta", "k_max", "flip_scale", "seed")) | {"n": n},
        results={
            "n_pairs": n,
            "ternary_length": len(text),
            "mean_codeword_length": _round(len(text) / n),
            "distinct_ranks": len({p.k for p in pairs}),
        },
    )
    report.curves["pairs"] = [(p.k, int(p.z)) for p in pairs[: min(n, 50)]]
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "pairs.csv").write_text(santafe.pairs_to_csv(pairs), encoding="utf-8")
        (outdir / "ternary.txt").write_text(text + "\n", encoding="utf-8")
    return report


def _cmd_facts(args) -> ExperimentReport:
    config = santafe.SantaFeConfig(beta=args.beta, k_max=args.k_max, flip_scale=args.flip_scale, seed=args.seed)
    ns = [args.n] if args.n else [10**e for e in range(3, 7) if 10**e <= max(args.n_max, 1000)]
    exact_points, bound_points, rows = [], [], []
    with _stage("facts"):
        for n in ns:
            if args.mc_reps:
                row = facts.monte_carlo_u_count(
                    config, n, args.delta, realizations=args.mc_reps, seed=args.seed + n
                )
            else:
                row = facts.exact_u_count(config, n, args.delta)
            rows.append(row)
            exact_points.append((n, row.exact_count))
            bound_points.append((n, _round(row.lower_bound)))
    fit = _fit_or_none(exact_points)
    report = ExperimentReport(
        subcommand="facts",
        config=_config_echo(args, ("beta", "k_max", "flip_scale", "delta", "seed", "mc_reps")),
        results={"reports": [json.loads(r.to_json()) for r in rows]},
        checks={"bound_below_exact": all(e >= b for (_, e), (_, b) in zip(exact_points, bound_points))},
        curves={"exact_u_count": exact_points, "u_lower_bound": bound_points},
    )
    if fit is not None:
        report.results["exact_slope"] = _round(fit.exponent)
        report.results["exact_slope_r2"] = _round(fit.r_squared)
        report.results["fit_range"] = list(fit.fit_range)
        report.checks["slope_matches_beta"] = bool(abs(fit.exponent - args.beta) <= 0.02)
    return report


def _cmd_grammar(args) -> ExperimentReport:
    if args.corpus:
        text = laws.load_corpus(args.corpus)
        source = "corpus"
        alphabet = None
    else:
        config = santafe.SantaFeConfig(beta=args.beta, k_max=args.k_max, flip_scale=args.flip_scale, seed=args.seed)
        text = _ternary_sample(config, args.n or 4096, args.seed)
        source = "santafe-ternary"
        alphabet = "012"
    with _stage("transform"):
        if args.minimal:
            g = grammar.minimal_transform(text, budget=args.budget, alphabet=alphabet)
        else:
            g = grammar.irreducible_transform(text, alphabet=alphabet)
    v = grammar.vocab_size(g)
    size = grammar.yk_length(g)
    report = ExperimentReport(
        subcommand="grammar",
        config=_config_echo(args, ("beta", "k_max", "seed", "minimal", "budget", "corpus")),
        results={
            "source": source,
            "input_length": len(text),
            "vocab_size": v,
            "yk_length": size,
            "encoded_length_bits": grammar.encoded_length(g),
            "words_sample": grammar.extract_words(g)[:10],
        },
        checks={"expansion_roundtrip": grammar.expand_text(g) == text},
    )
    if not args.minimal:
        # the digram bound is a theorem about irreducible grammars only
        report.checks["digram_inequality"] = size - v <= (v + len(g.alphabet)) ** 2
        report.checks["irreducible"] = grammar.is_irreducible(g)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "grammar.txt").write_text(grammar.format_grammar(g), encoding="utf-8")
    return report


def _cmd_entropy(args) -> ExperimentReport:
    config = santafe.SantaFeConfig(beta=args.beta, k_max=args.k_max, flip_scale=args.flip_scale, seed=args.seed)
    report = ExperimentReport(
        subcommand="entropy",
        config=_config_echo(args, ("beta", "k_max", "flip_scale", "seed", "exact")),
    )
    if args.exact:
        ns = [args.n] if args.n else _pow2_grid(0, args.n_max)
        with _stage("exact-curve"):
            curve = infotheory.exact_excess_curve(args.beta, ns, k_max=args.k_max)
        report.results["asymptote"] = _round(infotheory.hilberg_asymptote(args.beta))
    else:
        ns = [args.n] if args.n else _pow2_grid(0, min(args.n_max, 64))
        with _stage("empirical-curve"):
            sample = _ternary_sample(config, 200 * max(ns) + 4096, args.seed)
            points = [(n, infotheory.empirical_excess(sample, n)) for n in ns]
            curve = infotheory.ExcessCurve(points=points, source="empirical")
    report.curves["excess"] = [(n, _round(b)) for n, b in curve.points]
    report.checks["nonnegative"] = all(b >= -1e-9 for _, b in curve.points)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "excess.csv").write_text(curve.to_csv(), encoding="utf-8")
    return report


def _cmd_mi(args) -> ExperimentReport:
    ns = _pow2_grid(8, max(args.n_max, 512))
    length = 2 * max(ns)
    with _stage("sample"):
        if args.iid:
            rng = np.random.default_rng(args.seed)
            sample = rng.integers(0, 3, size=length)
            source = "iid-ternary"
        else:
            config = santafe.SantaFeConfig(beta=args.beta, k_max=args.k_max, flip_scale=args.flip_scale, seed=args.seed)
            sample = santafe.ternary_to_ints(_ternary_sample(config, length, args.seed))
            source = "santafe-ternary"
    with _stage("mi-curve"):
        curve = miest.mi_curve(sample, ns, alphabet_size=3, max_order=args.order)
    fit = _fit_or_none(curve.points)
    report = ExperimentReport(
        subcommand="mi",
        config=_config_echo(args, ("beta", "k_max", "flip_scale", "seed", "order", "iid")),
        results={"source": source},
        curves={"mi": [(n, _round(b)) for n, b in curve.points]},
    )
    if fit is not None:
        report.results["slope"] = _round(fit.exponent)
        report.results["slope_r2"] = _round(fit.r_squared)
        report.results["fit_range"] = list(fit.fit_range)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "mi.csv").write_text(curve.to_csv(), encoding="utf-8")
    return report


def _cmd_laws(args) -> ExperimentReport:
    with _stage("corpus"):
        text = laws.load_corpus(args.corpus) if args.corpus else laws.bundled_corpus()
    try:
        r_min, r_max = (int(p) for p in args.zipf.split(":"))
    except ValueError as exc:
        raise ValueError(f"--zipf expects MIN:MAX, got {args.zipf!r}") from exc
    with _stage("zipf"):
        table = laws.rank_frequency(laws.tokenize(text))
        zf = laws.fit_zipf(table, r_min, r_max)
    hi = int(math.log2(len(text)))
    checkpoints = [2**j for j in range(12, hi + 1)]
    with _stage("herdan"):
        herdan = laws.herdan_curve(text, checkpoints, counter=laws.WORD_TOKENS)
    hfit = _fit_or_none(herdan)
    report = ExperimentReport(
        subcommand="laws",
        config=_config_echo(args, ("corpus", "seed")) | {"zipf_range": [r_min, r_max]},
        results={
            "corpus_chars": len(text),
            "tokens": table.total,
            "distinct_words": len(table.entries),
            "zipf_exponent": _round(zf.exponent),
            "zipf_r2": _round(zf.r_squared),
        },
        curves={
            "rank_frequency_head": [(r, f) for r, _, f in table.entries[:50]],
            "herdan_words": herdan,
        },
    )
    if hfit is not None:
        report.results["herdan_exponent"] = _round(hfit.exponent)
        report.results["herdan_r2"] = _round(hfit.r_squared)
    return report


def _cmd_hilberg(args) -> ExperimentReport:
    beta, seed = args.beta, args.seed
    config = santafe.SantaFeConfig(beta=beta, k_max=args.k_max, flip_scale=args.flip_scale, seed=seed)
    report = ExperimentReport(
        subcommand="hilberg",
        config=_config_echo(args, ("beta", "k_max", "flip_scale", "delta", "seed", "order", "budget"))
        | {"n_max": args.n_max},
    )
    with _stage("facts-bound"):
        ns = [10**e for e in range(3, 7)]
        exact_points = [(n, facts.exact_u_count(config, n, args.delta).exact_count) for n in ns]
        bounds = [facts.u_lower_bound(beta, n, args.delta) for n in ns]
        ufit = _fit_or_none(exact_points)
    report.curves["exact_u_count"] = exact_points
    report.checks["u_bound_holds"] = all(e >= b for (_, e), b in zip(exact_points, bounds))
    if ufit is not None:
        report.results["u_slope"] = _round(ufit.exponent)
        report.checks["u_slope_near_beta"] = bool(abs(ufit.exponent - beta) <= 0.02)
    with _stage("asymptote"):
        n_ref = 10**6
        ratio = infotheory.exact_excess_santafe(beta, n_ref, k_max=10**7) / (
            n_ref**beta * infotheory.hilberg_asymptote(beta)
        )
    report.results["asymptote_ratio"] = _round(ratio)
    report.checks["asymptote_within_10pct"] = bool(abs(ratio - 1.0) <= 0.10)
    mi_ns = _pow2_grid(8, args.n_max)
    with _stage("mi-slope"):
        sample = santafe.ternary_to_ints(_ternary_sample(config, 2 * max(mi_ns), seed))
        curve = miest.mi_curve(sample, mi_ns, alphabet_size=3, max_order=args.order)
        mfit = _fit_or_none(curve.points)
    report.curves["mi"] = [(n, _round(b)) for n, b in curve.points]
    if mfit is not None:
        report.results["mi_slope"] = _round(mfit.exponent)
        report.checks["mi_slope_in_window"] = bool(0.4 <= mfit.exponent <= 0.7)
    lo = 10 if args.n_max >= 2**13 else 8
    vocab_ns = _pow2_grid(lo, args.n_max)
    with _stage("vocab-slope"):
        text = "".join(str(s) for s in sample[: max(vocab_ns)])
        herdan = laws.herdan_curve(text, vocab_ns, counter=laws.GRAMMAR_VOCAB, budget=args.budget)
        vfit = _fit_or_none(herdan)
    report.curves["grammar_vocab"] = herdan
    if vfit is not None:
        report.results["vocab_slope"] = _round(vfit.exponent)
        report.checks["vocab_slope_in_window"] = bool(0.35 <= vfit.exponent <= 0.65)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "mi.csv").write_text(curve.to_csv(), encoding="utf-8")
    return report


_COMMANDS = {
    "generate": _cmd_generate,
    "facts": _cmd_facts,
    "grammar": _cmd_grammar,
    "entropy": _cmd_entropy,
    "mi": _cmd_mi,
    "laws": _cmd_laws,
    "hilberg": _cmd_hilberg,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, sys.argv[1:] if argv is None else list(argv))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        report = _COMMANDS[args.subcommand](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = report.to_csv() if args.format == "csv" else report.to_json()
    sys.stdout.write(text)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / f"report.{args.format}").write_text(text, encoding="utf-8")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
