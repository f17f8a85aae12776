"""Monolingual embedding spaces: loading, truncation, normalization, writing."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

NORMALIZATION_STEPS = ("unit", "center")
DEFAULT_PLAN = ("unit", "center", "unit")
MIN_NORM = 1e-12


class EmbeddingFormatError(ValueError):
    """Malformed word-vector text file."""

    def __init__(self, path, lineno, msg):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path = path
        self.lineno = lineno


class ZeroNormError(ValueError):
    pass


@dataclass(frozen=True)
class LoadStats:
    rows_read: int = 0
    duplicates: int = 0
    zero_norm: int = 0
    zero_norm_words: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class EmbeddingSpace:
    """Frequency-ordered vocabulary with one vector per word.

    Position in ``words`` is the frequency rank (0 = most frequent).
    """

    words: tuple[str, ...]
    vectors: np.ndarray
    lang: str = ""
    stats: LoadStats = field(default_factory=LoadStats, repr=False)

    def __post_init__(self):
        words = tuple(self.words)
        vectors = np.asarray(self.vectors)
        if vectors.ndim != 2:
            raise ValueError("vectors must be a 2-d matrix")
        if len(words) != vectors.shape[0]:
            raise ValueError(f"{len(words)} words but {vectors.shape[0]} vectors")
        if len(set(words)) != len(words):
            raise ValueError("duplicate words in vocabulary")
        vectors = vectors.copy() if vectors.flags.writeable else vectors
        vectors.setflags(write=False)
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(words)})

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self._index

    def index(self, word: str) -> int | None:
        return self._index.get(word)

    def rank_map(self) -> dict[str, int]:
        return dict(self._index)

    def with_vectors(self, vectors: np.ndarray) -> "EmbeddingSpace":
        return EmbeddingSpace(self.words, vectors, self.lang, self.stats)

    def head(self, n: int) -> "EmbeddingSpace":
        return EmbeddingSpace(self.words[:n], self.vectors[:n], self.lang, self.stats)


def _parse_header(line, path):
    parts = line.split()
    if len(parts) != 2:
        raise EmbeddingFormatError(path, 1, f"expected '<count> <dim>' header, got {line.strip()!r}")
    try:
        count, dim = int(parts[0]), int(parts[1])
    except ValueError:
        raise EmbeddingFormatError(path, 1, f"non-integer header {line.strip()!r}") from None
    if count < 0 or dim < 1:
        raise EmbeddingFormatError(path, 1, f"invalid header values {count} {dim}")
    return count, dim


def load_embeddings(path, max_vocab: int | None = None, lang: str = "") -> EmbeddingSpace:
    """Read the first ``max_vocab`` usable rows of a word-vector text file.

    Duplicate words after their first occurrence and zero-norm rows are
    skipped and counted in ``space.stats``.
    """
    if max_vocab is not None and max_vocab < 1:
        raise ValueError("max_vocab must be >= 1")
    path = Path(path)
    words: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    duplicates = 0
    zero_words: list[str] = []
    rows_read = 0
    with open(path, encoding="utf-8", newline="\n") as f:
        header = f.readline()
        if not header:
            raise EmbeddingFormatError(path, 1, "empty file")
        _, dim = _parse_header(header, path)
        for lineno, line in enumerate(f, 2):
            if max_vocab is not None and len(words) >= max_vocab:
                break
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split()
            word, values = parts[0], parts[1:]
            if len(values) != dim:
                raise EmbeddingFormatError(path, lineno, f"expected {dim} values, got {len(values)}")
            try:
                vec = np.array(values, dtype=np.float32)
            except ValueError:
                raise EmbeddingFormatError(path, lineno, "non-numeric vector component") from None
            rows_read += 1
            if word in seen:
                duplicates += 1
                continue
            seen.add(word)
            if np.linalg.norm(vec.astype(np.float64)) < MIN_NORM:
                zero_words.append(word)
                continue
            words.append(word)
            rows.append(vec)
    if duplicates:
        log.warning("%s: skipped %d duplicate word(s)", path, duplicates)
    if zero_words:
        log.warning("%s: rejected %d zero-norm row(s), e.g. %r", path, len(zero_words), zero_words[0])
    matrix = np.vstack(rows) if rows else np.zeros((0, dim), dtype=np.float32)
    stats = LoadStats(rows_read, duplicates, len(zero_words), tuple(zero_words))
    return EmbeddingSpace(tuple(words), matrix, lang, stats)


def read_vocabulary(path, max_vocab: int | None = None) -> list[str]:
    """Words of a word-vector file in order, without parsing the vectors."""
    out, seen = [], set()
    with open(path, encoding="utf-8") as f:
        _parse_header(f.readline(), path)
        for line in f:
            if max_vocab is not None and len(out) >= max_vocab:
                break
            word = line.split(maxsplit=1)[0] if line.strip() else None
            if word and word not in seen:
                seen.add(word)
                out.append(word)
    return out


def unit_rows(m: np.ndarray, words: Sequence[str] | None = None) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    norms = np.sqrt(np.einsum("ij,ij->i", m, m))
    bad = np.flatnonzero(norms < MIN_NORM)
    if bad.size:
        who = words[bad[0]] if words is not None else f"row {bad[0]}"
        raise ZeroNormError(f"cannot unit-normalize zero vector for {who!r}")
    return m / norms[:, None]


def center_columns(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    return m - m.mean(axis=0, dtype=np.float64)


def normalize(space: EmbeddingSpace, plan: Sequence[str] = DEFAULT_PLAN) -> EmbeddingSpace:
    """Apply normalization steps in order; returns a new float64 space."""
    plan = tuple(plan)
    if not plan:
        raise ValueError("normalization plan must not be empty")
    if len(space) == 0:
        raise ValueError("cannot normalize an empty space")
    m = np.array(space.vectors, dtype=np.float64)
    for step in plan:
        if step == "unit":
            m = unit_rows(m, space.words)
        elif step == "center":
            m = center_columns(m)
        else:
            raise ValueError(f"unknown normalization step {step!r}; expected one of {NORMALIZATION_STEPS}")
    return space.with_vectors(m)


def write_embeddings(space: EmbeddingSpace, path, vectors: np.ndarray | None = None) -> None:
    m = space.vectors if vectors is None else vectors
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{m.shape[0]} {m.shape[1]}\n")
        for word, row in zip(space.words, m):
            f.write(word + " " + " ".join("%.6g" % x for x in row) + "\n")
