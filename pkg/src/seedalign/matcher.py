"""Approximate transliteration matching with a Symmetric-Delete index.

Source candidates (Latin) are paired with romanized target words when the
normalized Levenshtein similarity of the two strings reaches a threshold.
The delete index restricts the comparisons to pairs that become identical
after at most ``k`` deletions on each side.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .lexicon import Provenance, SeedLexicon
from .romanizer import RomanizationTable, romanize_counts

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatchConfig:
    k: int = 2
    sim_threshold: float = 0.8
    min_len: int = 1
    min_freq: int = 1

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if not 0 < self.sim_threshold <= 1:
            raise ValueError("sim_threshold must be in (0, 1]")
        if self.min_len < 1 or self.min_freq < 1:
            raise ValueError("min_len and min_freq must be >= 1")


def levenshtein(a: str, b: str) -> int:
    """Unit-cost insert/delete/substitute distance over codepoints."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cost = 0 if ca == cb else 1
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost))
        prev = cur
    return prev[-1]


def normalized_similarity(w1: str, w2: str) -> float:
    """1 - Levenshtein(w1, w2) / max(len(w1), len(w2))."""
    if not w1 or not w2:
        raise ValueError("normalized_similarity needs two non-empty strings")
    return 1.0 - levenshtein(w1, w2) / max(len(w1), len(w2))


def deletion_variants(word: str, k: int) -> set[str]:
    """All distinct strings reachable from ``word`` by 0..k deletions."""
    variants = {word}
    frontier = {word}
    for _ in range(k):
        nxt = set()
        for w in frontier:
            for i in range(len(w)):
                nxt.add(w[:i] + w[i + 1:])
        nxt -= variants
        if not nxt:
            break
        variants |= nxt
        frontier = nxt
    return variants


class DeleteIndex:
    """Maps every deletion variant to the ids of the words producing it.

    ``originals[i]`` is the (word, rank) pair with id ``i``; ids within a
    bucket are in increasing order.
    """

    def __init__(self, words: Sequence[tuple[str, int]], k: int):
        if k < 0:
            raise ValueError("k must be >= 0")
        self.k = k
        self.originals = [(w, r) for w, r in words]
        buckets: dict[str, list[int]] = defaultdict(list)
        for i, (w, _) in enumerate(self.originals):
            for v in deletion_variants(w, k):
                buckets[v].append(i)
        self.buckets = dict(buckets)

    def __len__(self):
        return len(self.originals)

    def variant_count(self) -> int:
        return sum(len(ids) for ids in self.buckets.values())


def build_delete_index(words: Sequence[tuple[str, int]], k: int) -> DeleteIndex:
    return DeleteIndex(words, k)


def candidate_pairs(index_src: DeleteIndex, index_trg: DeleteIndex, keep=None) -> set[tuple[int, int]]:
    """All (source id, target id) pairs sharing at least one bucket key.

    ``keep(s, t)``, if given, is a cheap predicate applied before a pair is
    stored; the matcher uses it to skip pairs whose lengths already rule out
    the similarity threshold.
    """
    if index_src.k != index_trg.k:
        raise ValueError(f"indexes built with different k ({index_src.k} vs {index_trg.k})")
    src_b, trg_b = index_src.buckets, index_trg.buckets
    if len(src_b) <= len(trg_b):
        shared = ((ids, trg_b[key]) for key, ids in src_b.items() if key in trg_b)
    else:
        shared = ((src_b[key], ids) for key, ids in trg_b.items() if key in src_b)
    out: set[tuple[int, int]] = set()
    for s_ids, t_ids in shared:
        if keep is None:
            out.update((s, t) for s in s_ids for t in t_ids)
        else:
            out.update((s, t) for s in s_ids for t in t_ids if keep(s, t))
    return out


@dataclass(frozen=True)
class ScoredPair:
    src: str
    trg: str
    src_rank: int
    trg_rank: int
    src_form: str
    trg_form: str
    similarity: float


def _filter(entries, cfg: MatchConfig):
    for e in entries:
        word, rank = e[0], e[1]
        count = e[2] if len(e) > 2 else None
        if len(word) < cfg.min_len:
            continue
        if count is not None and count < cfg.min_freq:
            continue
        yield word, rank


def _group_forms(entries: Iterable[tuple[str, str, int]]):
    """Collapse (form, original, rank) triples to unique forms.

    Returns ``forms`` as (form, best rank) and ``members[form_id]`` as the
    list of (original, rank) sharing that form.
    """
    form_id: dict[str, int] = {}
    forms: list[tuple[str, int]] = []
    members: list[list[tuple[str, int]]] = []
    for form, orig, rank in entries:
        i = form_id.get(form)
        if i is None:
            i = form_id[form] = len(forms)
            forms.append((form, rank))
            members.append([])
        elif rank < forms[i][1]:
            forms[i] = (form, rank)
        members[i].append((orig, rank))
    return forms, members


def _exact_candidates(src_forms, trg_forms, threshold):
    """Every form pair that can reach the threshold, without an index."""
    by_len: dict[int, list[int]] = defaultdict(list)
    for j, (f, _) in enumerate(trg_forms):
        by_len[len(f)].append(j)
    out = set()
    for i, (f, _) in enumerate(src_forms):
        n = len(f)
        for m, ids in by_len.items():
            # Levenshtein >= |n - m| bounds the reachable similarity
            if 1.0 - abs(n - m) / max(n, m, 1) < threshold:
                continue
            out.update((i, j) for j in ids)
    return out


def match_scored(source_candidates: Sequence, target_vocab: Sequence, table: RomanizationTable,
                 config: MatchConfig = MatchConfig(), exact: bool = False) -> list[ScoredPair]:
    """Scored transliteration pairs, sorted by (source rank, target rank)."""
    src_entries = list(_filter(source_candidates, config))
    if not src_entries:
        raise ValueError("empty source candidate list")
    trg_entries = list(_filter(target_vocab, config))
    if not trg_entries:
        raise ValueError("empty target vocabulary")

    hits = 0
    romanized = []
    for word, rank in trg_entries:
        form, _, h = romanize_counts(word, table)
        hits += h
        if form:
            romanized.append((form, word, rank))
    if hits == 0:
        log.warning("romanization table covers none of the target vocabulary; no pairs produced")
        return []

    src_forms, src_members = _group_forms((w.lower(), w.lower(), r) for w, r in src_entries)
    # one source original per lowercase form: the most frequent spelling
    src_members = [[min(m, key=lambda x: x[1])] for m in src_members]
    trg_forms, trg_members = _group_forms(romanized)

    if exact:
        cands = _exact_candidates(src_forms, trg_forms, config.sim_threshold)
    else:
        src_len = [len(f) for f, _ in src_forms]
        trg_len = [len(f) for f, _ in trg_forms]
        thr = config.sim_threshold

        def keep(i, j):
            n, m = src_len[i], trg_len[j]
            return abs(n - m) <= (1.0 - thr) * max(n, m) + 1e-12

        cands = candidate_pairs(build_delete_index(src_forms, config.k),
                                build_delete_index(trg_forms, config.k), keep)

    best: dict[tuple[str, str], ScoredPair] = {}
    for i, j in cands:
        sf, tf = src_forms[i][0], trg_forms[j][0]
        if not sf or not tf:
            continue
        sim = normalized_similarity(sf, tf)
        if sim < config.sim_threshold:
            continue
        for s, sr in src_members[i]:
            for t, tr in trg_members[j]:
                p = ScoredPair(s, t, sr, tr, sf, tf, sim)
                old = best.get((s, t))
                if old is None or (sr, tr) < (old.src_rank, old.trg_rank):
                    best[(s, t)] = p
    return sorted(best.values(), key=lambda p: (p.src_rank, p.trg_rank, p.src, p.trg))


def match(source_candidates: Sequence, target_vocab: Sequence, table: RomanizationTable,
          config: MatchConfig = MatchConfig(), exact: bool = False,
          src_lang: str = "", trg_lang: str = "") -> SeedLexicon:
    """Romanization-based seed lexicon (provenance ``romanized``).

    ``source_candidates`` and ``target_vocab`` hold (word, rank) tuples, an
    optional third element being an occurrence count checked against
    ``config.min_freq``.
    """
    scored = match_scored(source_candidates, target_vocab, table, config, exact)
    return SeedLexicon.from_pairs(((p.src, p.trg) for p in scored), Provenance.ROMANIZED,
                                  src_lang, trg_lang)
