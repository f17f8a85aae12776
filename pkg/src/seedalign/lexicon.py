"""Seed lexicons: identical pairs, unions, pivot joins, subsets and OOV accounting."""

from __future__ import annotations

import enum
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .embeddings import EmbeddingSpace

log = logging.getLogger(__name__)


class Provenance(str, enum.Enum):
    IDENTICAL = "identical"
    ROMANIZED = "romanized"
    MERGED = "merged"
    PIVOT = "pivot"
    EXTERNAL = "external"


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class SeedLexicon:
    pairs: tuple[tuple[str, str], ...]
    provenance: Provenance = Provenance.EXTERNAL
    src_lang: str = ""
    trg_lang: str = ""

    def __post_init__(self):
        pairs = tuple((s, t) for s, t in self.pairs)
        if len(set(pairs)) != len(pairs):
            raise LexiconError("duplicate (src, trg) pairs in lexicon")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], provenance=Provenance.EXTERNAL,
                   src_lang="", trg_lang="") -> "SeedLexicon":
        """Build a lexicon keeping the first occurrence of each pair."""
        return cls(tuple(_dedup(pairs)), provenance, src_lang, trg_lang)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def pairset(self) -> set[tuple[str, str]]:
        return set(self.pairs)

    def sources(self) -> list[str]:
        return list(dict.fromkeys(s for s, _ in self.pairs))


@dataclass(frozen=True)
class OovReport:
    total_pairs: int
    usable_pairs: int
    oov_src: int
    oov_trg: int

    @property
    def oov_pairs(self) -> int:
        return self.total_pairs - self.usable_pairs

    def as_dict(self) -> dict:
        return {
            "total_pairs": self.total_pairs,
            "usable_pairs": self.usable_pairs,
            "oov_pairs": self.oov_pairs,
            "oov_src": self.oov_src,
            "oov_trg": self.oov_trg,
        }


def _dedup(pairs):
    seen = set()
    for p in pairs:
        p = (p[0], p[1])
        if p not in seen:
            seen.add(p)
            yield p


# --- file I/O ---------------------------------------------------------------

def read_lexicon(path, src_lang="", trg_lang="", provenance=Provenance.EXTERNAL) -> SeedLexicon:
    """Read a TAB-separated (or single-space separated) pair file.

    Order is preserved; repeated pairs are dropped with a warning.
    """
    pairs = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            if "\t" in line:
                parts = line.split("\t")
            else:
                parts = line.split(" ")
            parts = [p for p in parts if p != ""] if len(parts) > 2 else parts
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise LexiconError(f"{path}:{lineno}: expected '<src>\\t<trg>', got {line!r}")
            pairs.append((parts[0], parts[1]))
    lex = SeedLexicon.from_pairs(pairs, provenance, src_lang, trg_lang)
    if len(lex) < len(pairs):
        log.warning("%s: dropped %d repeated pair(s)", path, len(pairs) - len(lex))
    return lex


def write_lexicon(lex: SeedLexicon, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for s, t in lex.pairs:
            if "\t" in s or "\t" in t:
                raise LexiconError(f"pair {(s, t)!r} contains a TAB")
            f.write(f"{s}\t{t}\n")


# --- operations -------------------------------------------------------------

def extract_identical(space_a: EmbeddingSpace, space_b: EmbeddingSpace) -> SeedLexicon:
    """Pairs (w, w) for every exact string shared by both vocabularies, in source rank order."""
    pairs = tuple((w, w) for w in space_a.words if w in space_b)
    if not pairs:
        log.warning("no identical strings between %s and %s vocabularies",
                    space_a.lang or "source", space_b.lang or "target")
    return SeedLexicon(pairs, Provenance.IDENTICAL, space_a.lang, space_b.lang)


def _check_langs(a: SeedLexicon, b: SeedLexicon, what: str):
    for x, y in ((a.src_lang, b.src_lang), (a.trg_lang, b.trg_lang)):
        if x and y and x != y:
            raise LexiconError(f"cannot {what} lexicons for {a.src_lang}-{a.trg_lang} "
                               f"and {b.src_lang}-{b.trg_lang}")


def merge(a: SeedLexicon, b: SeedLexicon) -> SeedLexicon:
    """Union of two lexicons; pairs of ``a`` first, then new pairs of ``b``."""
    _check_langs(a, b, "merge")
    return SeedLexicon.from_pairs(list(a.pairs) + list(b.pairs), Provenance.MERGED,
                                  a.src_lang or b.src_lang, a.trg_lang or b.trg_lang)


def pivot_join(a: SeedLexicon, b: SeedLexicon) -> SeedLexicon:
    """Join pivot->L1 and pivot->L2 lexicons into L1->L2 via shared pivot words.

    Every combination of translations of a shared pivot word is kept.
    """
    if a.src_lang and b.src_lang and a.src_lang != b.src_lang:
        raise LexiconError(f"pivot language mismatch: {a.src_lang} vs {b.src_lang}")
    by_pivot: dict[str, list[str]] = defaultdict(list)
    for e, t2 in b.pairs:
        by_pivot[e].append(t2)
    out = []
    for e, t1 in a.pairs:
        for t2 in by_pivot.get(e, ()):
            out.append((t1, t2))
    return SeedLexicon.from_pairs(out, Provenance.PIVOT, a.trg_lang, b.trg_lang)


def subset_by_frequency(lex: SeedLexicon, space_src: EmbeddingSpace, n: int,
                        which: str = "highest") -> SeedLexicon:
    """The ``n`` pairs whose source words are most (``highest``) or least
    (``lowest``) frequent in ``space_src``. Pairs with an OOV source are ignored."""
    if which not in ("highest", "lowest"):
        raise ValueError("which must be 'highest' or 'lowest'")
    if n < 1:
        raise ValueError("n must be >= 1")
    usable = [(space_src.index(s), pos, (s, t)) for pos, (s, t) in enumerate(lex.pairs) if s in space_src]
    if n > len(usable):
        raise LexiconError(f"requested {n} pairs but only {len(usable)} usable pairs are available")
    if which == "highest":
        usable.sort(key=lambda x: (x[0], x[1]))
    else:
        usable.sort(key=lambda x: (-x[0], x[1]))
    chosen = usable[:n]
    return SeedLexicon(tuple(p for _, _, p in chosen), lex.provenance, lex.src_lang, lex.trg_lang)


def filter_pairs_by_wordlist(lex: SeedLexicon, names: Iterable[str], side: str = "src") -> SeedLexicon:
    """Drop pairs whose ``side`` word (src, trg or either) is in ``names``, case-insensitively."""
    if side not in ("src", "trg", "either"):
        raise ValueError("side must be 'src', 'trg' or 'either'")
    names = {n.lower() for n in names}
    if not names:
        return lex

    def hit(s, t):
        if side == "src":
            return s.lower() in names
        if side == "trg":
            return t.lower() in names
        return s.lower() in names or t.lower() in names

    kept = tuple(p for p in lex.pairs if not hit(*p))
    return SeedLexicon(kept, lex.provenance, lex.src_lang, lex.trg_lang)


def oov_report(lex: SeedLexicon, space_src: EmbeddingSpace, space_trg: EmbeddingSpace) -> OovReport:
    usable = oov_src = oov_trg = 0
    for s, t in lex.pairs:
        s_in, t_in = s in space_src, t in space_trg
        oov_src += not s_in
        oov_trg += not t_in
        usable += s_in and t_in
    return OovReport(len(lex), usable, oov_src, oov_trg)


def to_index_pairs(lex: SeedLexicon, space_src: EmbeddingSpace,
                   space_trg: EmbeddingSpace) -> list[tuple[int, int]]:
    """Pairs as (source rank, target rank), OOV pairs dropped."""
    out = []
    for s, t in lex.pairs:
        i, j = space_src.index(s), space_trg.index(t)
        if i is not None and j is not None:
            out.append((i, j))
    return out


def read_wordlist(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip()]


def lexicon_from_index_pairs(pairs: Sequence[tuple[int, int]], space_src: EmbeddingSpace,
                             space_trg: EmbeddingSpace, provenance=Provenance.EXTERNAL) -> SeedLexicon:
    return SeedLexicon.from_pairs(((space_src.words[i], space_trg.words[j]) for i, j in pairs),
                                  provenance, space_src.lang, space_trg.lang)
