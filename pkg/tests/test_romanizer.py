import unicodedata

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seedalign.romanizer import (
    BUNDLED, RomanizationTable, TableError, bundled_table, combine_tables, default_table, is_romanized,
    load_table, parse_table, resolve_tables, romanize, table_hits,
)

REQUIRED = ("cyrillic", "greek", "hebrew", "arabic", "devanagari", "bengali", "tamil", "kannada",
            "thai", "hangul")


def uncovered_oracle(word: str, table: RomanizationTable) -> int:
    """Count codepoints that are neither marks, lowercase ASCII letters/digits, nor table keys."""
    n = 0
    for ch in unicodedata.normalize("NFD", "".join(c.lower() for c in word)):
        if unicodedata.category(ch).startswith("M"):
            continue
        if ch in "abcdefghijklmnopqrstuvwxyz0123456789":
            continue
        if ch not in table.entries:
            n += 1
    return n


def assigned_letters(table: RomanizationTable):
    for lo, hi in table.coverage:
        for cp in range(lo, hi + 1):
            ch = chr(cp)
            if unicodedata.category(ch)[0] == "L" or unicodedata.category(ch) == "Nd":
                yield ch


def test_load_two_entries(tmp_path):
    p = tmp_path / "t.tsv"
    p.write_text("# script: Cyrillic\nк\tk\nж\tzh\n", encoding="utf-8")
    t = load_table(p)
    assert len(t) == 2 and t.entries["ж"] == "zh" and t.scripts == ("Cyrillic",)


def test_duplicate_key_is_named(tmp_path):
    p = tmp_path / "t.tsv"
    p.write_text("к\tk\nк\tq\n", encoding="utf-8")
    with pytest.raises(TableError, match="duplicate key 'к'"):
        load_table(p)


@pytest.mark.parametrize("rep", ["K", "é", "a-b", "ж"])
def test_bad_replacement_rejected(rep):
    with pytest.raises(TableError):
        parse_table([f"к\t{rep}"])


def test_empty_token_and_key_length():
    t = parse_table(["́\t∅", "# comment", "", "абвг\tx"])
    assert t.entries["́"] == ""
    with pytest.raises(TableError):
        parse_table(["абвгд\tx"])
    with pytest.raises(TableError):
        parse_table(["no-tab-here"])


def test_keys_are_nfd_normalized():
    t = parse_table(["й\ty"])
    assert "й" in t.entries


def test_cyrillic_covers_basic_block():
    t = bundled_table("cyrillic")
    for cp in range(0x0410, 0x0450):
        assert romanize(chr(cp), t).uncovered == 0, hex(cp)


@pytest.mark.parametrize("word,expected", [
    ("карл", "carl"),
    ("βαβυλών", "babylon"),
    ("Москва", "moskva"),
    ("हिन्दी", "hindi"),
    ("தமிழ்", "tamil"),
    ("ಕನ್ನಡ", "kannada"),
    ("トウキョウ", "toukyou"),
])
def test_golden_words(word, expected):
    assert romanize(word, default_table()) == (expected, 0)


def test_latin_passthrough():
    for name in BUNDLED:
        assert romanize("carl", bundled_table(name)) == ("carl", 0)
    assert romanize("Carl2", parse_table([])) == ("carl2", 0)


def test_han_passes_through_uncovered():
    assert romanize("東京", default_table()) == ("東京", 2)


def test_hangul_is_decomposed():
    t = bundled_table("hangul")
    r = romanize("한국", t)
    assert r.uncovered == 0 and is_romanized(r.text) and r.text.startswith("han")


def test_no_vocalization_for_abjads():
    assert romanize("שלום", bundled_table("hebrew")).uncovered == 0
    plain = romanize("كتب", bundled_table("arabic"))
    voweled = romanize("كَتَبَ", bundled_table("arabic"))
    assert plain == voweled


def test_unknown_marks_are_dropped():
    assert romanize("ка́рл", bundled_table("cyrillic")) == ("carl", 0)


@pytest.mark.parametrize("name", REQUIRED)
def test_required_table_coverage(name):
    t = bundled_table(name)
    assert t.coverage and t.scripts
    missing = [f"U+{ord(c):04X}" for c in assigned_letters(t) if romanize(c, t).uncovered]
    assert not missing


@pytest.mark.parametrize("name", BUNDLED)
def test_multi_codepoint_keys_have_single_codepoint_parts(name):
    # makes the per-codepoint uncovered oracle exact
    t = bundled_table(name)
    for key in t.entries:
        for ch in key:
            if not unicodedata.category(ch).startswith("M"):
                assert ch in t.entries, (key, ch)


def test_bundled_tables_do_not_clash():
    assert len(default_table()) == sum(len(bundled_table(n)) for n in BUNDLED)
    with pytest.raises(TableError):
        combine_tables(bundled_table("greek"), bundled_table("greek"))


def test_resolve_tables(tmp_path):
    p = tmp_path / "x.tsv"
    p.write_text("ж\tzh\n", encoding="utf-8")
    assert len(resolve_tables([])) == len(default_table())
    assert len(resolve_tables(["greek", str(p)])) == len(bundled_table("greek")) + 1
    with pytest.raises(KeyError):
        bundled_table("klingon")


def test_uncovered_counter_matches_scan_on_russian_batch():
    t = bundled_table("cyrillic")
    rng = np.random.default_rng(7)
    alphabet = [chr(c) for c in range(0x0430, 0x0450)] + list("ЁёАБВ") + list("-.1x東ß́")
    words = ["".join(rng.choice(alphabet, size=int(rng.integers(1, 12)))) for _ in range(1000)]
    for w in words:
        assert romanize(w, t).uncovered == uncovered_oracle(w, t), w


def _script_chars():
    chars = []
    for name in REQUIRED + ("kana",):
        chars.extend(sorted(bundled_table(name).entries))
    return chars


_CHARS = _script_chars()


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(_CHARS), min_size=1, max_size=8).map("".join))
def test_idempotence_on_output_alphabet(word):
    t = default_table()
    once = romanize(word, t).text
    if is_romanized(once):
        assert romanize(once, t).text == once


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(sorted(bundled_table("cyrillic").entries)), min_size=1, max_size=8).map("".join))
def test_monotone_coverage(word):
    base = bundled_table("cyrillic")
    bigger = combine_tables(base, bundled_table("hangul"), bundled_table("thai"))
    assert romanize(word, bigger) == romanize(word, base)


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=10))
def test_total_and_deterministic(word):
    t = default_table()
    a, b = romanize(word, t), romanize(word, t)
    assert a == b and a.uncovered >= 0


def test_table_hits_counts_matches():
    t = bundled_table("cyrillic")
    assert table_hits("карл", t) == 3  # "ка" is one key
    assert table_hits("abc", t) == 0
