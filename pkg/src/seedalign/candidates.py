"""Source-side candidate words for transliteration matching.

Either read from an external list (e.g. proper nouns from a POS tagger) or
approximated from raw text with a capitalization heuristic.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

log = logging.getLogger(__name__)

SENTENCE_END = (".", "!", "?")


class CandidateError(ValueError):
    pass


@dataclass(frozen=True)
class CandidateList:
    words: tuple[str, ...]
    source: str = "external_file"

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def ranked(self) -> list[tuple[str, int]]:
        """(word, rank) pairs in list order, as expected by the matcher."""
        return [(w, i) for i, w in enumerate(self.words)]


def load_candidates(path) -> CandidateList:
    """One word per line, most frequent first; lowercased, first occurrence wins."""
    words: dict[str, None] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            w = line.strip()
            if not w:
                continue
            if any(c.isspace() for c in w):
                raise CandidateError(f"{path}:{lineno}: candidate contains whitespace: {w!r}")
            words.setdefault(w.lower(), None)
    if not words:
        raise CandidateError(f"{path}: no candidates")
    return CandidateList(tuple(words), "external_file")


def write_candidates(cands: CandidateList, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for w in cands.words:
            f.write(w + "\n")


def heuristic_candidates(lines: Iterable[str], min_ratio: float = 0.8, min_count: int = 2,
                         min_len: int = 2) -> CandidateList:
    """Words that look like names in whitespace-tokenized text.

    A lowercased token qualifies when it is alphabetic, at least ``min_len``
    long, occurs at least ``min_count`` times, and is capitalized in at least
    ``min_ratio`` of its occurrences that are not sentence-initial. A token is
    sentence-initial at the start of a line or after a token ending in . ! ?
    """
    total: Counter[str] = Counter()
    mid: Counter[str] = Counter()
    mid_cap: Counter[str] = Counter()
    first_seen: dict[str, int] = {}
    pos = 0
    for line in lines:
        initial = True
        for tok in line.split():
            key = tok.lower()
            if tok.isalpha():
                total[key] += 1
                first_seen.setdefault(key, pos)
                pos += 1
                if not initial:
                    mid[key] += 1
                    if tok[0].isupper():
                        mid_cap[key] += 1
            initial = tok.endswith(SENTENCE_END)
    if not total:
        log.warning("empty corpus: no candidates")
    chosen = [
        w for w, n in total.items()
        if n >= min_count and len(w) >= min_len and mid_cap[w] > 0
        and mid_cap[w] >= min_ratio * mid[w]
    ]
    chosen.sort(key=lambda w: (-total[w], first_seen[w]))
    return CandidateList(tuple(chosen), "heuristic")
