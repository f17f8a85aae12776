"""Bilingual dictionary induction: CSLS retrieval and acc@1 against a gold lexicon."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .embeddings import EmbeddingSpace, unit_rows
from .lexicon import SeedLexicon
from .parallel import map_blocks

BLOCK = 256


class EvaluationError(ValueError):
    pass


def topk_mean(sims: np.ndarray, k: int) -> np.ndarray:
    """Row-wise mean of the ``k`` largest entries (k is clipped to the row length)."""
    if k <= 0:
        return np.zeros(sims.shape[0])
    k = min(k, sims.shape[1])
    top = np.partition(sims, sims.shape[1] - k, axis=1)[:, sims.shape[1] - k:]
    return np.sort(top, axis=1).sum(axis=1) / k


def neighborhood_means(a: np.ndarray, b: np.ndarray, k: int, threads: int = 1) -> np.ndarray:
    """For every row of ``a``, the mean cosine of its ``k`` nearest rows of ``b``."""
    if k <= 0:
        return np.zeros(a.shape[0])

    def work(i, j):
        return topk_mean(a[i:j] @ b.T, k)

    parts = map_blocks(work, a.shape[0], BLOCK, threads)
    return np.concatenate(parts) if parts else np.zeros(0)


def csls_score(query: np.ndarray, targets: np.ndarray, r_src: float, r_trg_vec: np.ndarray) -> np.ndarray:
    """2 cos(query, target_j) - r_src - r_trg[j] for unit-normalized rows."""
    return 2.0 * (targets @ query) - r_src - r_trg_vec


def csls_retrieve(queries: np.ndarray, targets: np.ndarray, r_src: np.ndarray, r_trg: np.ndarray,
                  threads: int = 1) -> np.ndarray:
    """Index of the CSLS-best target for every query row (first index on ties)."""
    def work(i, j):
        scores = 2.0 * (queries[i:j] @ targets.T) - r_src[i:j, None] - r_trg
        return scores.argmax(axis=1)

    parts = map_blocks(work, queries.shape[0], BLOCK, threads)
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


@dataclass(frozen=True)
class QueryResult:
    src: str
    predicted: str
    gold: tuple[str, ...]
    hit: bool


@dataclass(frozen=True)
class EvalReport:
    acc_at_1: float
    evaluated_queries: int
    skipped_oov: int
    hits: int
    csls_k: int
    oov_as_error: bool = False
    per_query: tuple[QueryResult, ...] = field(default=(), repr=False)

    @property
    def percent(self) -> str:
        return f"{100.0 * self.acc_at_1:.2f}"

    def summary(self) -> dict:
        return {
            "acc_at_1": round(100.0 * self.acc_at_1, 2),
            "hits": self.hits,
            "evaluated_queries": self.evaluated_queries,
            "skipped_oov": self.skipped_oov,
            "csls_k": self.csls_k,
            "oov_as_error": self.oov_as_error,
        }

    def table(self) -> str:
        rows = [
            ("acc@1 (%)", self.percent),
            ("hits", str(self.hits)),
            ("evaluated queries", str(self.evaluated_queries)),
            ("skipped (OOV)", str(self.skipped_oov)),
            ("CSLS k", str(self.csls_k)),
        ]
        width = max(len(r[0]) for r in rows)
        return "\n".join(f"{a.ljust(width)}  {b}" for a, b in rows) + "\n"

    def write(self, path, per_query_path=None, stamp: dict | None = None) -> None:
        rec = dict(stamp or {})
        rec.update(self.summary())
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
        if per_query_path:
            with open(per_query_path, "w", encoding="utf-8", newline="\n") as f:
                for q in self.per_query:
                    f.write(json.dumps({"src": q.src, "predicted": q.predicted, "gold": list(q.gold),
                                        "hit": q.hit}, ensure_ascii=False) + "\n")


def evaluate_bdi(mapped_src: EmbeddingSpace, mapped_trg: EmbeddingSpace, test_lex: SeedLexicon,
                 csls_k: int = 10, oov_as_error: bool = False, threads: int = 1) -> EvalReport:
    """acc@1 of CSLS retrieval over ``mapped_trg`` for every gold source word.

    Source words with several gold translations count as a hit when any of
    them is retrieved. Queries whose source word or every gold target is out
    of vocabulary are skipped (or counted as misses with ``oov_as_error``).
    """
    if len(test_lex) == 0:
        raise EvaluationError("empty test lexicon")
    gold: dict[str, set[str]] = defaultdict(set)
    for s, t in test_lex.pairs:
        gold[s].add(t)

    queries, query_gold = [], []
    skipped = 0
    for s in sorted(gold):
        reachable = {t for t in gold[s] if t in mapped_trg}
        if s in mapped_src and reachable:
            queries.append(s)
            query_gold.append(reachable)
        else:
            skipped += 1
    if not queries:
        raise EvaluationError("no evaluable queries: every gold pair is out of vocabulary")

    x = unit_rows(mapped_src.vectors)
    z = unit_rows(mapped_trg.vectors)
    r_trg = neighborhood_means(z, x, csls_k, threads)
    qx = x[[mapped_src.index(s) for s in queries]]
    r_src = neighborhood_means(qx, z, csls_k, threads)
    best = csls_retrieve(qx, z, r_src, r_trg, threads)

    results = []
    hits = 0
    for s, g, b in zip(queries, query_gold, best):
        pred = mapped_trg.words[int(b)]
        hit = pred in g
        hits += hit
        results.append(QueryResult(s, pred, tuple(sorted(g)), hit))
    denom = len(queries) + (skipped if oov_as_error else 0)
    return EvalReport(hits / denom, len(queries), skipped, hits, csls_k, oov_as_error, tuple(results))
