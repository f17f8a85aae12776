"""End-to-end run: load, normalize, build a seed lexicon, self-learn, evaluate.

Every stage is also reachable on its own through the command line; the
functions here are shared so both routes produce the same files.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .candidates import heuristic_candidates, load_candidates
from .embeddings import DEFAULT_PLAN, EmbeddingSpace, load_embeddings, normalize, write_embeddings
from .evaluation import EvalReport, evaluate_bdi
from .lexicon import (
    SeedLexicon, extract_identical, filter_pairs_by_wordlist, lexicon_from_index_pairs, merge,
    oov_report, pivot_join, read_lexicon, read_wordlist, subset_by_frequency, write_lexicon,
)
from .mapping import MappingConfig, MappingResult, self_learn, write_trace
from .matcher import MatchConfig, match
from .romanizer import resolve_tables

log = logging.getLogger(__name__)

MODES = ("id", "rom", "idpp", "external", "pivot")
_PATH_FIELDS = ("src_embeddings", "trg_embeddings", "candidates", "candidate_corpus", "seed_lexicon",
                "pivot_src_lexicon", "pivot_trg_lexicon", "test_lexicon", "exclude_names")


class ConfigError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class PipelineConfig:
    src_embeddings: str
    trg_embeddings: str
    output_dir: str = "out"
    src_lang: str = ""
    trg_lang: str = ""
    mode: str = "id"
    max_vocab: int = 200000
    normalization: tuple[str, ...] = DEFAULT_PLAN
    tables: tuple[str, ...] = ()
    candidates: str | None = None
    candidate_corpus: str | None = None
    exact_match: bool = False
    seed_lexicon: str | None = None
    pivot_src_lexicon: str | None = None
    pivot_trg_lexicon: str | None = None
    seed_subset: int | None = None
    seed_subset_which: str = "highest"
    test_lexicon: str | None = None
    exclude_names: str | None = None
    exclude_side: str = "src"
    eval_csls_k: int = 10
    oov_as_error: bool = False
    seed: int = 0
    match: MatchConfig = field(default_factory=MatchConfig)
    mapping: MappingConfig = field(default_factory=MappingConfig)
    base_dir: str = field(default=".", compare=False)

    @classmethod
    def from_dict(cls, data: dict, base_dir=".") -> "PipelineConfig":
        data = dict(data)
        names = {f.name for f in dataclasses.fields(cls)} - {"base_dir"}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
        for req in ("src_embeddings", "trg_embeddings"):
            if not data.get(req):
                raise ConfigError(f"missing required field '{req}'")
        try:
            match_cfg = MatchConfig(**data.pop("match", {}))
            mapping = dict(data.pop("mapping", {}))
            if "seed" in mapping:
                raise ConfigError("set the RNG seed with the top-level 'seed' field")
            mapping_cfg = MappingConfig(seed=int(data.get("seed", 0)), **mapping)
        except TypeError as e:
            raise ConfigError(str(e)) from None
        except ValueError as e:
            raise ConfigError(str(e)) from None
        for key in ("normalization", "tables"):
            if key in data:
                data[key] = tuple(data[key])
        cfg = cls(match=match_cfg, mapping=mapping_cfg, base_dir=str(base_dir), **data)
        cfg.check_values()
        return cfg

    @classmethod
    def load(cls, path, overrides: dict | None = None) -> "PipelineConfig":
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON: {e}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be an object")
        for key, value in (overrides or {}).items():
            apply_override(data, key, value)
        return cls.from_dict(data, Path(path).resolve().parent)

    def check_values(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.max_vocab < 1:
            raise ConfigError("max_vocab must be >= 1")
        if not self.normalization or any(s not in ("unit", "center") for s in self.normalization):
            raise ConfigError("normalization must be a non-empty list of 'unit'/'center'")
        if self.seed_subset is not None and self.seed_subset < 1:
            raise ConfigError("seed_subset must be >= 1")
        if self.seed_subset_which not in ("highest", "lowest"):
            raise ConfigError("seed_subset_which must be 'highest' or 'lowest'")
        if self.exclude_side not in ("src", "trg", "either"):
            raise ConfigError("exclude_side must be 'src', 'trg' or 'either'")
        if self.eval_csls_k < 0:
            raise ConfigError("eval_csls_k must be >= 0")
        if self.mapping.seed != self.seed:
            raise ConfigError("mapping seed differs from the top-level seed")

    def path(self, name: str) -> Path | None:
        value = getattr(self, name)
        if value is None:
            return None
        p = Path(value)
        return p if p.is_absolute() else Path(self.base_dir) / p

    def uses_romanization(self) -> bool:
        return self.mode in ("rom", "idpp")

    def validate(self) -> None:
        """Check that mode-required inputs are set and every referenced file exists."""
        self.check_values()
        if self.uses_romanization():
            if not (self.candidates or self.candidate_corpus):
                raise ConfigError(f"mode {self.mode} needs 'candidates' or 'candidate_corpus'")
            try:
                resolve_tables(self._table_specs())
            except (OSError, ValueError, KeyError) as e:
                raise ConfigError(f"romanization tables: {e}") from None
        if self.mode == "external" and not self.seed_lexicon:
            raise ConfigError("mode external needs 'seed_lexicon'")
        if self.mode == "pivot" and not (self.pivot_src_lexicon and self.pivot_trg_lexicon):
            raise ConfigError("mode pivot needs 'pivot_src_lexicon' and 'pivot_trg_lexicon'")
        for name in _PATH_FIELDS:
            p = self.path(name)
            if p is not None and name in self.relevant_fields() and not p.is_file():
                raise ConfigError(f"{name}: file not found: {p}")

    def _table_specs(self) -> list[str]:
        out = []
        for t in self.tables:
            p = Path(t)
            rel = p if p.is_absolute() else Path(self.base_dir) / p
            out.append(str(rel) if (os.sep in t or t.endswith(".tsv")) else t)
        return out

    def relevant_fields(self) -> set[str]:
        """Fields that influence the outputs for this mode."""
        names = {f.name for f in dataclasses.fields(self)} - {"base_dir", "output_dir"}
        if not self.uses_romanization():
            names -= {"tables", "candidates", "candidate_corpus", "exact_match", "match"}
        elif self.candidates:
            names -= {"candidate_corpus"}
        if self.mode != "external":
            names -= {"seed_lexicon"}
        if self.mode != "pivot":
            names -= {"pivot_src_lexicon", "pivot_trg_lexicon"}
        if self.seed_subset is None:
            names -= {"seed_subset_which"}
        if self.exclude_names is None:
            names -= {"exclude_side"}
        if self.test_lexicon is None:
            names -= {"exclude_names", "exclude_side", "eval_csls_k", "oov_as_error"}
        return names

    def to_dict(self) -> dict:
        """Every field with its effective value (defaults included)."""
        out = {}
        for f in dataclasses.fields(self):
            if f.name == "base_dir":
                continue
            v = getattr(self, f.name)
            if f.name in ("match", "mapping"):
                v = dataclasses.asdict(v)
                v.pop("seed", None)
            elif isinstance(v, tuple):
                v = list(v)
            out[f.name] = v
        return out

    def config_hash(self) -> str:
        d = self.to_dict()
        semantic = {k: d[k] for k in sorted(self.relevant_fields())}
        blob = json.dumps(semantic, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def apply_override(data: dict, dotted: str, value) -> None:
    """Set ``data[a][b]`` for key ``a.b``, creating nested objects as needed."""
    parts = dotted.split(".")
    cur = data
    for p in parts[:-1]:
        cur = cur.setdefault(p, {})
        if not isinstance(cur, dict):
            raise ConfigError(f"cannot override {dotted}: {p} is not an object")
    cur[parts[-1]] = value


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(obj, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")


# --- shared stages ----------------------------------------------------------

def load_pair(cfg: PipelineConfig) -> tuple[EmbeddingSpace, EmbeddingSpace]:
    return (load_embeddings(cfg.path("src_embeddings"), cfg.max_vocab, cfg.src_lang),
            load_embeddings(cfg.path("trg_embeddings"), cfg.max_vocab, cfg.trg_lang))


def target_vocab(space: EmbeddingSpace) -> list[tuple[str, int]]:
    return [(w, i) for i, w in enumerate(space.words)]


def romanized_lexicon(cfg: PipelineConfig, space_trg: EmbeddingSpace) -> SeedLexicon:
    if cfg.candidates:
        cands = load_candidates(cfg.path("candidates"))
    else:
        with open(cfg.path("candidate_corpus"), encoding="utf-8") as f:
            cands = heuristic_candidates(f)
    table = resolve_tables(cfg._table_specs())
    return match(cands.ranked(), target_vocab(space_trg), table, cfg.match, cfg.exact_match,
                 cfg.src_lang, cfg.trg_lang)


def build_seed_lexicon(cfg: PipelineConfig, space_src: EmbeddingSpace,
                       space_trg: EmbeddingSpace) -> dict[str, SeedLexicon]:
    """The seed lexicon for ``cfg.mode`` under key ``seed``, plus its parts."""
    parts: dict[str, SeedLexicon] = {}
    if cfg.mode in ("id", "idpp"):
        parts["identical"] = extract_identical(space_src, space_trg)
    if cfg.mode in ("rom", "idpp"):
        parts["romanized"] = romanized_lexicon(cfg, space_trg)
    if cfg.mode == "id":
        seed = parts["identical"]
    elif cfg.mode == "rom":
        seed = parts["romanized"]
    elif cfg.mode == "idpp":
        seed = merge(parts["identical"], parts["romanized"])
    elif cfg.mode == "external":
        seed = read_lexicon(cfg.path("seed_lexicon"), cfg.src_lang, cfg.trg_lang)
    else:
        seed = pivot_join(read_lexicon(cfg.path("pivot_src_lexicon")),
                          read_lexicon(cfg.path("pivot_trg_lexicon")))
    if cfg.seed_subset is not None:
        seed = subset_by_frequency(seed, space_src, cfg.seed_subset, cfg.seed_subset_which)
    parts["seed"] = seed
    return parts


def write_mapping(result: MappingResult, space_src: EmbeddingSpace, space_trg: EmbeddingSpace,
                  out_dir: Path, stamp: dict) -> dict[str, Path]:
    mapped_src, mapped_trg = result.apply(space_src, space_trg)
    paths = {
        "mapped_src": out_dir / "mapped_src.vec",
        "mapped_trg": out_dir / "mapped_trg.vec",
        "trace": out_dir / "trace.jsonl",
        "induced_dict": out_dir / "induced_dict.tsv",
    }
    write_embeddings(mapped_src, paths["mapped_src"])
    write_embeddings(mapped_trg, paths["mapped_trg"])
    write_trace(result.trace, paths["trace"], stamp)
    write_lexicon(lexicon_from_index_pairs(result.induced_dict, space_src, space_trg), paths["induced_dict"])
    return paths


def run_mapping(space_src: EmbeddingSpace, space_trg: EmbeddingSpace, seed: SeedLexicon,
                plan, mapping_cfg: MappingConfig, out_dir: Path, stamp: dict, threads: int = 1):
    src_n, trg_n = normalize(space_src, plan), normalize(space_trg, plan)
    result = self_learn(src_n, trg_n, seed, mapping_cfg, threads)
    return result, write_mapping(result, src_n, trg_n, out_dir, stamp)


def load_test_lexicon(path, exclude_names=None, exclude_side="src") -> SeedLexicon:
    lex = read_lexicon(path)
    if exclude_names:
        lex = filter_pairs_by_wordlist(lex, read_wordlist(exclude_names), exclude_side)
    return lex


def run_evaluation(mapped_src_path, mapped_trg_path, test: SeedLexicon, csls_k: int, oov_as_error: bool,
                   out_dir: Path, stamp: dict, threads: int = 1) -> tuple[EvalReport, dict[str, Path]]:
    mapped_src = load_embeddings(mapped_src_path)
    mapped_trg = load_embeddings(mapped_trg_path)
    report = evaluate_bdi(mapped_src, mapped_trg, test, csls_k, oov_as_error, threads)
    paths = {"eval": out_dir / "eval.jsonl", "eval_table": out_dir / "eval.txt",
             "per_query": out_dir / "per_query.jsonl"}
    report.write(paths["eval"], paths["per_query"], stamp)
    paths["eval_table"].write_text(report.table(), encoding="utf-8")
    return report, paths


# --- pipeline ---------------------------------------------------------------

class _Stage:
    def __init__(self, name):
        self.name = name

    def __enter__(self):
        log.info("stage %s", self.name)
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and not isinstance(exc, StageError):
            raise StageError(self.name, exc) from exc
        return False


def run_pipeline(cfg: PipelineConfig, threads: int = 1) -> dict[str, Path]:
    """Run every stage and move the artifacts into ``cfg.output_dir``.

    Artifacts are written to a staging directory first, so a failed stage
    leaves no partial output behind.
    """
    with _Stage("validate"):
        cfg.validate()
    out_dir = cfg.path("output_dir")
    out_dir.mkdir(parents=True, exist_ok=True)
    stage_dir = Path(tempfile.mkdtemp(prefix=".staging-", dir=out_dir))
    stamp = {"config_hash": cfg.config_hash(), "seed": cfg.seed}
    try:
        paths = _run_stages(cfg, stage_dir, stamp, threads)
        final = {}
        for name, p in paths.items():
            dest = out_dir / p.name
            os.replace(p, dest)
            final[name] = dest
        return final
    finally:
        shutil.rmtree(stage_dir, ignore_errors=True)


def _run_stages(cfg: PipelineConfig, out: Path, stamp: dict, threads: int) -> dict[str, Path]:
    paths: dict[str, Path] = {}
    with _Stage("load"):
        space_src, space_trg = load_pair(cfg)
    with _Stage("lexicon"):
        lexicons = build_seed_lexicon(cfg, space_src, space_trg)
        for name, lex in lexicons.items():
            p = out / ("lexicon.tsv" if name == "seed" else f"lexicon_{name}.tsv")
            write_lexicon(lex, p)
            paths[f"lexicon_{name}"] = p
    seed = lexicons["seed"]
    with _Stage("oov"):
        rep = oov_report(seed, space_src, space_trg)
        paths["oov_report"] = out / "oov_report.json"
        write_json({**stamp, **rep.as_dict()}, paths["oov_report"])
    with _Stage("map"):
        result, mpaths = run_mapping(space_src, space_trg, seed, cfg.normalization, cfg.mapping,
                                     out, stamp, threads)
        paths.update(mpaths)
    report = None
    if cfg.test_lexicon:
        with _Stage("evaluate"):
            test = load_test_lexicon(cfg.path("test_lexicon"), cfg.path("exclude_names"), cfg.exclude_side)
            report, epaths = run_evaluation(paths["mapped_src"], paths["mapped_trg"], test,
                                            cfg.eval_csls_k, cfg.oov_as_error, out, stamp, threads)
            paths.update(epaths)
    with _Stage("manifest"):
        manifest = {
            **stamp,
            "version": __version__,
            "config": {k: v for k, v in cfg.to_dict().items() if k != "output_dir"},
            "inputs": {name: sha256_file(cfg.path(name)) for name in _PATH_FIELDS
                       if getattr(cfg, name) and name in cfg.relevant_fields()},
            "load": {
                "src_words": len(space_src), "trg_words": len(space_trg),
                "src_duplicates": space_src.stats.duplicates, "trg_duplicates": space_trg.stats.duplicates,
                "src_zero_norm": space_src.stats.zero_norm, "trg_zero_norm": space_trg.stats.zero_norm,
            },
            "lexicon_sizes": {name: len(lex) for name, lex in lexicons.items()},
            "mapping": {"iterations": len(result.trace), "best_iteration": result.best_iteration,
                        "objective": result.objective, "induced_pairs": len(result.induced_dict)},
            "evaluation": report.summary() if report else None,
            "artifacts": {p.name: sha256_file(p) for p in sorted(paths.values())},
        }
        paths["manifest"] = out / "manifest.json"
        write_json(manifest, paths["manifest"])
    return paths
