"""Command-line interface: one subcommand per stage plus the full pipeline.

Exit codes: 0 success, 1 invalid input or configuration, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .candidates import CandidateError, heuristic_candidates, load_candidates, write_candidates
from .embeddings import DEFAULT_PLAN, EmbeddingFormatError, ZeroNormError, load_embeddings
from .evaluation import EvaluationError
from .lexicon import (
    LexiconError, extract_identical, filter_pairs_by_wordlist, merge, oov_report, pivot_join,
    read_lexicon, read_wordlist, subset_by_frequency, write_lexicon,
)
from .mapping import MappingConfig, MappingError
from .matcher import MatchConfig, match
from .parallel import default_threads
from .pipeline import (
    ConfigError, PipelineConfig, StageError, load_test_lexicon, run_evaluation, run_mapping,
    run_pipeline, target_vocab,
)
from .romanizer import TableError, resolve_tables, romanize

log = logging.getLogger("seedalign")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2
_RUNTIME = (MappingError, EvaluationError, ZeroNormError, MemoryError)
_INVALID = (ConfigError, EmbeddingFormatError, LexiconError, TableError, CandidateError, OSError,
            KeyError, ValueError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, StageError):
        if exc.stage == "validate":
            return EXIT_INVALID
        exc = exc.cause
    if isinstance(exc, _RUNTIME):
        return EXIT_RUNTIME
    if isinstance(exc, _INVALID):
        return EXIT_INVALID
    return EXIT_RUNTIME


# --- helpers ----------------------------------------------------------------

def _config(args) -> PipelineConfig | None:
    path = getattr(args, "config", None)
    return PipelineConfig.load(path) if path else None


def _pick(value, cfg, attr, default):
    if value is not None:
        return value
    if cfg is not None:
        return getattr(cfg, attr)
    return default


def _mapping_config(args, cfg: PipelineConfig | None) -> MappingConfig:
    base = cfg.mapping if cfg else MappingConfig()
    updates = {
        "csls_k": args.csls_k, "vocab_cutoff": args.vocab_cutoff,
        "convergence_threshold": args.convergence_threshold, "max_iterations": args.max_iterations,
        "stochastic_keep_initial": args.keep_initial, "stochastic_multiplier": args.keep_multiplier,
        "direction": args.direction, "seed": args.seed, "advanced": args.advanced or None,
    }
    return dataclasses.replace(base, **{k: v for k, v in updates.items() if v is not None})


def _match_config(args, cfg: PipelineConfig | None) -> MatchConfig:
    base = cfg.match if cfg else MatchConfig()
    updates = {"k": args.k, "sim_threshold": args.threshold, "min_len": args.min_len}
    return dataclasses.replace(base, **{k: v for k, v in updates.items() if v is not None})


def _load(path, args, cfg=None, lang=""):
    return load_embeddings(path, _pick(args.max_vocab, cfg, "max_vocab", 200000), lang)


def _print(text: str):
    sys.stdout.write(text)
    sys.stdout.flush()


# --- subcommands ------------------------------------------------------------

def cmd_extract_identical(args):
    lex = extract_identical(_load(args.src, args, lang=args.src_lang), _load(args.trg, args, lang=args.trg_lang))
    write_lexicon(lex, args.out)
    log.info("%d identical pairs", len(lex))


def cmd_romanize(args):
    table = resolve_tables(args.table or [])
    if args.words:
        words = args.words
    else:
        src = open(args.input, encoding="utf-8") if args.input else sys.stdin
        with src:
            words = [line.strip() for line in src if line.strip()]
    out = []
    for w in words:
        r = romanize(w, table)
        out.append(f"{w}\t{r.text}\t{r.uncovered}\n" if args.show_uncovered else f"{w}\t{r.text}\n")
    _print("".join(out))


def cmd_candidates(args):
    if args.input:
        cands = load_candidates(args.input)
    else:
        with open(args.corpus, encoding="utf-8") as f:
            cands = heuristic_candidates(f, args.min_ratio, args.min_count, args.min_len)
    write_candidates(cands, args.out)
    log.info("%d candidates (%s)", len(cands), cands.source)


def cmd_match(args):
    cfg = _config(args)
    specs = args.table if args.table else (cfg._table_specs() if cfg else [])
    table = resolve_tables(specs)
    cands = load_candidates(args.candidates)
    trg = _load(args.trg, args, cfg)
    exact = args.exact_match or (cfg.exact_match if cfg else False)
    lex = match(cands.ranked(), target_vocab(trg), table, _match_config(args, cfg), exact,
                args.src_lang, args.trg_lang)
    write_lexicon(lex, args.out)
    log.info("%d romanization pairs", len(lex))


def cmd_merge(args):
    write_lexicon(merge(read_lexicon(args.a), read_lexicon(args.b)), args.out)


def cmd_pivot_join(args):
    write_lexicon(pivot_join(read_lexicon(args.a), read_lexicon(args.b)), args.out)


def cmd_subset(args):
    lex = read_lexicon(args.lexicon)
    space = _load(args.src, args)
    write_lexicon(subset_by_frequency(lex, space, args.n, args.which), args.out)


def cmd_filter_names(args):
    lex = read_lexicon(args.lexicon)
    kept = filter_pairs_by_wordlist(lex, read_wordlist(args.names), args.side)
    write_lexicon(kept, args.out)
    log.info("kept %d of %d pairs", len(kept), len(lex))


def cmd_oov_report(args):
    rep = oov_report(read_lexicon(args.lexicon), _load(args.src, args), _load(args.trg, args))
    text = json.dumps(rep.as_dict(), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        _print(text)


def cmd_map(args):
    cfg = _config(args)
    mapping_cfg = _mapping_config(args, cfg)
    plan = args.normalize or (list(cfg.normalization) if cfg else list(DEFAULT_PLAN))
    src = _load(args.src, args, cfg, args.src_lang)
    trg = _load(args.trg, args, cfg, args.trg_lang)
    seed = read_lexicon(args.seed_lexicon)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result, _ = run_mapping(src, trg, seed, plan, mapping_cfg, out, {"seed": mapping_cfg.seed}, args.threads)
    log.info("best objective %.6f at iteration %d (%d induced pairs)",
             result.objective, result.best_iteration, len(result.induced_dict))


def cmd_evaluate(args):
    cfg = _config(args)
    csls_k = _pick(args.csls_k, cfg, "eval_csls_k", 10)
    oov_as_error = args.oov_as_error or (cfg.oov_as_error if cfg else False)
    test = load_test_lexicon(args.test, args.exclude_names)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report, _ = run_evaluation(args.src, args.trg, test, csls_k, oov_as_error, out, {}, args.threads)
    _print(report.table())


def cmd_pipeline(args):
    overrides = {}
    for item in args.set or []:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        try:
            overrides[key] = json.loads(raw)
        except json.JSONDecodeError:
            overrides[key] = raw
    for key in ("mode", "seed", "output_dir"):
        v = getattr(args, key)
        if v is not None:
            overrides[key] = v
    cfg = PipelineConfig.load(args.config, overrides)
    paths = run_pipeline(cfg, args.threads)
    manifest = json.loads(paths["manifest"].read_text(encoding="utf-8"))
    if manifest.get("evaluation"):
        _print(f"acc@1 {manifest['evaluation']['acc_at_1']:.2f}  "
               f"({manifest['evaluation']['evaluated_queries']} queries)\n")
    _print(f"artifacts in {cfg.path('output_dir')} (config {manifest['config_hash']})\n")


def cmd_make_fixture(args):
    from .fixtures import make_synthetic
    make_synthetic(args.out_dir, n=args.n, dim=args.dim, noise=args.noise, seed=args.seed)


# --- parser -----------------------------------------------------------------

def _emb_opts(p, pair=True):
    p.add_argument("--max-vocab", type=int, default=None, help="keep the N most frequent words (default 200000)")
    if pair:
        p.add_argument("--src-lang", default="")
        p.add_argument("--trg-lang", default="")


def _threads(p):
    p.add_argument("--threads", type=int, default=default_threads(),
                   help="worker threads; outputs do not depend on it")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seedalign", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract-identical", help="pairs of strings shared by both vocabularies")
    p.add_argument("--src", required=True)
    p.add_argument("--trg", required=True)
    p.add_argument("--out", required=True)
    _emb_opts(p)
    p.set_defaults(func=cmd_extract_identical)

    p = sub.add_parser("romanize", help="romanize words (arguments, --input file or stdin)")
    p.add_argument("words", nargs="*")
    p.add_argument("--input")
    p.add_argument("--table", action="append", help="bundled table name or table file (repeatable)")
    p.add_argument("--show-uncovered", action="store_true")
    p.set_defaults(func=cmd_romanize)

    p = sub.add_parser("candidates", help="source candidate list from a file or a corpus")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input", help="external word list, one per line")
    g.add_argument("--corpus", help="tokenized text for the capitalization heuristic")
    p.add_argument("--min-ratio", type=float, default=0.8)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--min-len", type=int, default=2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("match", help="romanization-based transliteration pairs")
    p.add_argument("--candidates", required=True)
    p.add_argument("--trg", required=True, help="target embeddings (vocabulary source)")
    p.add_argument("--table", action="append")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--min-len", type=int, default=None)
    p.add_argument("--exact-match", action="store_true", help="compare all pairs without the delete index")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    _emb_opts(p)
    p.set_defaults(func=cmd_match)

    for name, fn, hlp in (("merge", cmd_merge, "union of two lexicons"),
                          ("pivot-join", cmd_pivot_join, "join pivot-L1 and pivot-L2 lexicons")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("a")
        p.add_argument("b")
        p.add_argument("--out", required=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("subset", help="most or least frequent pairs of a lexicon")
    p.add_argument("lexicon")
    p.add_argument("--src", required=True)
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--highest", dest="which", action="store_const", const="highest")
    g.add_argument("--lowest", dest="which", action="store_const", const="lowest")
    p.set_defaults(which="highest")
    p.add_argument("--out", required=True)
    _emb_opts(p, pair=False)
    p.set_defaults(func=cmd_subset)

    p = sub.add_parser("filter-names", help="drop pairs containing listed words")
    p.add_argument("lexicon")
    p.add_argument("--names", required=True)
    p.add_argument("--side", choices=("src", "trg", "either"), default="src")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_filter_names)

    p = sub.add_parser("oov-report", help="usable and out-of-vocabulary pair counts")
    p.add_argument("lexicon")
    p.add_argument("--src", required=True)
    p.add_argument("--trg", required=True)
    p.add_argument("--out")
    _emb_opts(p, pair=False)
    p.set_defaults(func=cmd_oov_report)

    p = sub.add_parser("map", help="self-learning alignment from a seed lexicon")
    p.add_argument("--src", required=True)
    p.add_argument("--trg", required=True)
    p.add_argument("--seed-lexicon", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--config")
    p.add_argument("--normalize", nargs="+", choices=("unit", "center"))
    p.add_argument("--csls-k", type=int)
    p.add_argument("--vocab-cutoff", type=int)
    p.add_argument("--convergence-threshold", type=float)
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--keep-initial", type=float)
    p.add_argument("--keep-multiplier", type=float)
    p.add_argument("--direction", choices=("forward", "backward", "union"))
    p.add_argument("--seed", type=int)
    p.add_argument("--advanced", action="store_true", help="whitening/re-weighting/de-whitening transform")
    _emb_opts(p)
    _threads(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("evaluate", help="acc@1 with CSLS retrieval")
    p.add_argument("--src", required=True, help="mapped source embeddings")
    p.add_argument("--trg", required=True, help="mapped target embeddings")
    p.add_argument("--test", required=True)
    p.add_argument("--exclude-names")
    p.add_argument("--csls-k", type=int)
    p.add_argument("--oov-as-error", action="store_true")
    p.add_argument("--config")
    p.add_argument("--out-dir", required=True)
    _threads(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pipeline", help="run every stage from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--mode", choices=("id", "rom", "idpp", "external", "pivot"))
    p.add_argument("--seed", type=int)
    p.add_argument("--output-dir")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a config field, e.g. mapping.csls_k=5 (value parsed as JSON)")
    _threads(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("make-fixture", help="write a small synthetic bilingual fixture")
    p.add_argument("out_dir")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--dim", type=int, default=50)
    p.add_argument("--noise", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_make_fixture)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        args.func(args)
    except Exception as e:  # noqa: BLE001 - mapped to exit codes
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
