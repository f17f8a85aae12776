"""Table-driven romanization of non-Latin words.

Tables map short codepoint sequences (1 to 4 codepoints, NFD form) to Latin
strings. Lookup is greedy longest-match from left to right. Bundled tables
live in ``seedalign/data/tables`` and can be regenerated with
``tools/build_tables.py``.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

EMPTY_TOKEN = "∅"
MAX_KEY_LEN = 4

_REPLACEMENT_CHARS = frozenset("abcdefghijklmnopqrstuvwxyz0123456789'")
_LATIN_PASSTHROUGH = frozenset("abcdefghijklmnopqrstuvwxyz0123456789")

BUNDLED = (
    "cyrillic", "greek", "hebrew", "arabic", "devanagari", "bengali",
    "tamil", "kannada", "thai", "hangul", "kana",
)


class TableError(ValueError):
    """Raised for malformed romanization table files."""


class Romanization(NamedTuple):
    text: str
    uncovered: int


@dataclass(frozen=True)
class RomanizationTable:
    entries: Mapping[str, str]
    scripts: tuple[str, ...] = ()
    coverage: tuple[tuple[int, int], ...] = ()
    max_key_len: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))
        longest = max((len(k) for k in self.entries), default=1)
        object.__setattr__(self, "max_key_len", longest)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, key):
        return key in self.entries


def _check_replacement(rep: str, where: str) -> None:
    bad = [c for c in rep if c not in _REPLACEMENT_CHARS]
    if bad:
        raise TableError(f"{where}: replacement {rep!r} has characters outside [a-z0-9'] "
                         f"(uppercase or non-ASCII): {''.join(bad)!r}")


def _parse_ranges(text: str, where: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, _, hi = part.partition("-")
        try:
            out.append((int(lo, 16), int(hi or lo, 16)))
        except ValueError:
            raise TableError(f"{where}: bad coverage range {part!r}") from None
    return out


def parse_table(lines: Iterable[str], name: str = "<table>") -> RomanizationTable:
    entries: dict[str, str] = {}
    scripts: list[str] = []
    coverage: list[tuple[int, int]] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        where = f"{name}:{lineno}"
        if not line.strip():
            continue
        if line.startswith("#"):
            meta = line[1:].strip()
            if meta.startswith("script:"):
                scripts.append(meta[len("script:"):].strip())
            elif meta.startswith("coverage:"):
                coverage.extend(_parse_ranges(meta[len("coverage:"):], where))
            continue
        if "\t" not in line:
            raise TableError(f"{where}: expected '<codepoints>\\t<replacement>'")
        key, rep = line.split("\t", 1)
        if rep == EMPTY_TOKEN:
            rep = ""
        _check_replacement(rep, where)
        key = unicodedata.normalize("NFD", key)
        if not 1 <= len(key) <= MAX_KEY_LEN:
            raise TableError(f"{where}: key {key!r} must be 1..{MAX_KEY_LEN} codepoints")
        if key in entries:
            raise TableError(f"{where}: duplicate key {key!r}")
        entries[key] = rep
    return RomanizationTable(entries, tuple(scripts), tuple(coverage))


def load_table(path) -> RomanizationTable:
    path = Path(path)
    with open(path, encoding="utf-8") as f:
        return parse_table(f, str(path))


def combine_tables(*tables: RomanizationTable) -> RomanizationTable:
    """Union of several tables; a key defined twice is an error."""
    entries: dict[str, str] = {}
    scripts, coverage = [], []
    for t in tables:
        for k, v in t.entries.items():
            if k in entries:
                raise TableError(f"duplicate key {k!r} across tables")
            entries[k] = v
        scripts.extend(t.scripts)
        coverage.extend(t.coverage)
    return RomanizationTable(entries, tuple(scripts), tuple(coverage))


def bundled_table(name: str) -> RomanizationTable:
    if name not in BUNDLED:
        raise KeyError(f"no bundled table {name!r}; available: {', '.join(BUNDLED)}")
    res = resources.files("seedalign") / "data" / "tables" / f"{name}.tsv"
    with res.open(encoding="utf-8") as f:
        return parse_table(f, f"{name}.tsv")


def default_table() -> RomanizationTable:
    """All bundled tables merged."""
    return combine_tables(*(bundled_table(n) for n in BUNDLED))


def resolve_tables(specs: Iterable[str]) -> RomanizationTable:
    """Load tables given as bundled names or file paths, merged. Empty -> all bundled."""
    specs = list(specs)
    if not specs:
        return default_table()
    tables = [bundled_table(s) if s in BUNDLED else load_table(s) for s in specs]
    return combine_tables(*tables)


def prepare(word: str) -> str:
    """Per-codepoint lowercase followed by canonical decomposition."""
    return unicodedata.normalize("NFD", "".join(ch.lower() for ch in word))


def romanize_counts(word: str, table: RomanizationTable) -> tuple[str, int, int]:
    """Romanized text, uncovered codepoint count, and number of table matches."""
    text = prepare(word)
    entries = table.entries
    maxk = table.max_key_len
    out = []
    uncovered = hits = 0
    i, n = 0, len(text)
    while i < n:
        for size in range(min(maxk, n - i), 0, -1):
            rep = entries.get(text[i:i + size])
            if rep is not None:
                out.append(rep)
                hits += 1
                i += size
                break
        else:
            ch = text[i]
            if ch in _LATIN_PASSTHROUGH:
                out.append(ch)
            elif unicodedata.category(ch)[0] != "M":
                # uncovered codepoints pass through unchanged
                out.append(ch)
                uncovered += 1
            i += 1
    return "".join(out), uncovered, hits


def romanize(word: str, table: RomanizationTable) -> Romanization:
    text, uncovered, _ = romanize_counts(word, table)
    return Romanization(text, uncovered)


def table_hits(word: str, table: RomanizationTable) -> int:
    """Number of table matches used when romanizing ``word``."""
    return romanize_counts(word, table)[2]


def is_romanized(text: str) -> bool:
    return all(c in _REPLACEMENT_CHARS for c in text)
