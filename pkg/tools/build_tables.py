#!/usr/bin/env python3
"""Regenerate the bundled romanization tables under src/seedalign/data/tables.

Each table is built from a small hand-written core plus heuristics over the
Unicode character names (letter names in Indic blocks are already close to a
transliteration).  Output keys are written in NFD, which is the form the
romanizer looks them up in.

    python tools/build_tables.py
"""

import re
import sys
import unicodedata
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "seedalign" / "data" / "tables"

VOWEL_SET = set("aeiou")


def nfd(s):
    return unicodedata.normalize("NFD", s)


def cps(lo, hi):
    for cp in range(lo, hi + 1):
        ch = chr(cp)
        if unicodedata.name(ch, None) is not None:
            yield ch


def needs_entry(ch):
    """Letters and decimal digits must romanize without leftovers."""
    cat = unicodedata.category(ch)
    return cat[0] == "L" or cat == "Nd"


def clean(s):
    s = s.lower()
    return re.sub(r"[^a-z0-9']", "", s)


def latinize_word(word):
    """Rough Latin value of a letter name such as KOPPA, EL or SHEI."""
    w = clean(word)
    if not w:
        return ""
    if len(w) <= 2 and not (w[0] in VOWEL_SET and len(w) == 2 and w[1] not in VOWEL_SET):
        return w
    if w[0] in VOWEL_SET:
        if len(w) == 2:
            return w[1]
        return w[0]
    m = re.match(r"[^aeiou]+", w)
    lead = m.group(0)
    if lead.endswith("y") and len(lead) > 1:
        lead = lead[:-1]
    return lead[:2]


DROP_WORDS = {
    "SMALL", "CAPITAL", "LETTER", "SIGN", "SYMBOL", "ARCHAIC", "FINAL", "CHOSEONG",
    "JUNGSEONG", "JONGSEONG", "LIGATURE", "REVERSED", "DOTTED", "BARRED", "CLOSED",
    "OPEN", "ROUND", "STRAIGHT", "TURNED", "HIGH", "LOW", "MIDDLE", "HALF",
    "MODIFIER", "COMBINING", "SUBSCRIPT", "SUPERSCRIPT", "DOTLESS", "INVERTED",
    "WIDE", "TALL", "SHORT", "LONG", "HOOKED", "VOICED", "IOTIFIED", "HARD",
    "SOFT", "OLD", "KOMI", "ABKHASIAN", "ALEUT", "BASHKIR", "ENG", "LUNATE",
    "PAMPHYLIAN", "GREEK", "CYRILLIC", "COPTIC", "HEBREW", "ARABIC", "FARSI",
    "KASHMIRI", "KIRGHIZ", "UIGHUR", "ROHINGYA", "YIDDISH", "POINT", "MARK",
}


def name_guess(ch, table=None):
    name = unicodedata.name(ch)
    words = name.split()
    if "WITH" in words:
        words = words[: words.index("WITH")]
    if table:
        for n in range(len(words), 0, -1):
            for i in range(0, len(words) - n + 1):
                key = " ".join(words[i:i + n])
                if key in table:
                    return table[key]
    core = [w for w in words[1:] if w not in DROP_WORDS]
    if not core:
        return ""
    return latinize_word(core[-1])


def digit_entries(lo, hi):
    out = {}
    for ch in cps(lo, hi):
        if unicodedata.category(ch) == "Nd":
            out[ch] = str(unicodedata.digit(ch))
    return out


def fill_block(entries, ranges, table=None):
    """Add a name-derived entry for every uncovered letter or digit."""
    for lo, hi in ranges:
        for ch in cps(lo, hi):
            if not needs_entry(ch):
                continue
            if unicodedata.category(ch) == "Nd":
                entries.setdefault(nfd(ch), str(unicodedata.digit(ch)))
                continue
            low = ch.lower()
            key = nfd(low)
            if key in entries:
                continue
            if len(key) > 1 and all(c in entries or unicodedata.category(c)[0] == "M" for c in key):
                continue  # decomposes into covered base + marks
            entries[key] = name_guess(low, table)


def write_table(fname, script, ranges, entries, note):
    lines = [
        f"# {note}",
        f"# script: {script}",
        "# coverage: " + ", ".join(f"{lo:04X}-{hi:04X}" for lo, hi in ranges),
        "# format: <source codepoints> TAB <replacement>; ∅ means empty",
    ]
    seen = {}
    for key in sorted(entries, key=lambda k: (len(k), k)):
        rep = entries[key]
        k = nfd(key)
        assert re.fullmatch(r"[a-z0-9']*", rep), (script, key, rep)
        assert 1 <= len(k) <= 4, (script, key)
        if k in seen:
            if seen[k] != rep:
                raise SystemExit(f"{script}: conflicting values for {k!r}")
            continue
        seen[k] = rep
        lines.append(f"{k}\t{rep if rep else '∅'}")
    (OUT / fname).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"{fname}: {len(seen)} entries", file=sys.stderr)


# --- Cyrillic ---------------------------------------------------------------

CYRILLIC = {
    "а": "a", "б": "b", "в": "v", "г": "g", "д": "d", "е": "e", "ж": "zh",
    "з": "z", "и": "i", "й": "y", "к": "k", "л": "l", "м": "m", "н": "n",
    "о": "o", "п": "p", "р": "r", "с": "s", "т": "t", "у": "u", "ф": "f",
    "х": "kh", "ц": "ts", "ч": "ch", "ш": "sh", "щ": "shch", "ъ": "", "ы": "y",
    "ь": "", "э": "e", "ю": "yu", "я": "ya", "ё": "yo",
    "є": "ye", "і": "i", "ї": "yi", "ґ": "g", "ў": "u", "ђ": "dj", "ј": "j",
    "љ": "lj", "њ": "nj", "ћ": "c", "џ": "dzh", "ѓ": "gj", "ќ": "kj", "ѕ": "dz",
    "ѐ": "e", "ѝ": "i", "ғ": "gh", "қ": "q", "ң": "ng", "ү": "u", "ұ": "u",
    "һ": "h", "ә": "a", "ө": "o", "ҳ": "h", "ҷ": "j", "ӣ": "i", "ӯ": "u",
    # English spelling of k before back vowels (карл -> carl, канада -> canada)
    "ка": "ca", "ко": "co", "ку": "cu",
}

CYRILLIC_NAMES = {
    "OMEGA": "o", "YAT": "e", "YUS": "yu", "KSI": "ks", "PSI": "ps", "FITA": "f",
    "IZHITSA": "i", "UK": "u", "SHHA": "h", "SCHWA": "a", "ZE": "z", "DZE": "dz",
    "DZZE": "dz", "ZHE": "zh", "TE TSE": "ts", "CHE": "ch", "GHE": "g", "HA": "h",
    "KA": "k", "EN": "n", "EM": "m", "EL": "l", "ER": "r", "ES": "s", "PE": "p",
    "DE": "d", "TE": "t", "BE": "b", "VE": "v", "YERU": "y", "YERI": "", "YER": "",
    "E": "e", "A": "a", "I": "i", "O": "o", "U": "u", "IE": "ye", "IO": "yo",
    "YU": "yu", "YA": "ya", "YAE": "ya", "SHA": "sh", "SHCHA": "shch", "ZEMLYA": "z",
    "DZELO": "dz", "DWE": "dv", "DZWE": "dz", "ZHWE": "zh", "CCHE": "ch", "DZZHE": "dzh",
    "TSWE": "ts", "TWE": "t", "TSSE": "ts", "TCHE": "ch", "QA": "q", "WE": "w",
    "LHA": "lh", "RHA": "rh", "YAE": "ya", "DJERV": "dj", "SEMISOFT": "",
    "PALOCHKA": "", "OT": "ot", "ROUND OMEGA": "o", "BROAD OMEGA": "o",
    "MONOGRAPH UK": "u", "BLENDED YUS": "yu", "LITTLE YUS": "ya", "BIG YUS": "yu",
    "HWE": "hw", "NJE": "nj", "LJE": "lj", "JE": "j", "DJE": "dj", "TSHE": "c",
    "KJE": "kj", "GJE": "gj", "DZHE": "dzh", "SHORT I": "y", "SHORT U": "u",
    "GHE WITH UPTURN": "g", "KOPPA": "k", "ABKHASIAN HA": "h", "EF": "f",
}


def build_cyrillic():
    entries = {nfd(k): v for k, v in CYRILLIC.items()}
    ranges = [(0x0400, 0x04FF)]
    fill_block(entries, ranges, CYRILLIC_NAMES)
    write_table("cyrillic.tsv", "Cyrillic", ranges, entries,
                "Cyrillic romanization (Russian-centred, common Slavic/Turkic extras)")


# --- Greek ------------------------------------------------------------------

GREEK_NAMES = {
    "ALPHA": "a", "BETA": "b", "GAMMA": "g", "DELTA": "d", "EPSILON": "e",
    "ZETA": "z", "ETA": "i", "THETA": "th", "IOTA": "i", "KAPPA": "k",
    "LAMDA": "l", "MU": "m", "NU": "n", "XI": "x", "OMICRON": "o", "PI": "p",
    "RHO": "r", "SIGMA": "s", "TAU": "t", "UPSILON": "y", "PHI": "f",
    "CHI": "ch", "PSI": "ps", "OMEGA": "o", "DIGAMMA": "w", "KOPPA": "k",
    "STIGMA": "st", "SAMPI": "ss", "HETA": "h", "YOT": "j", "SHO": "sh",
    "SAN": "s", "SHEI": "sh", "FEI": "f", "KHEI": "kh", "HORI": "h",
    "GANGIA": "g", "SHIMA": "sh", "DEI": "ti", "KAI": "k", "TSADI": "ts",
}


def build_greek():
    entries = {}
    for ch in cps(0x03B1, 0x03C9):
        entries[ch] = name_guess(ch, GREEK_NAMES)
    entries["ʹ"] = ""  # numeral sign
    entries["ͺ"] = ""  # ypogegrammeni
    ranges = [(0x0370, 0x03FF), (0x1F00, 0x1FFF)]
    fill_block(entries, ranges, GREEK_NAMES)
    write_table("greek.tsv", "Greek", ranges, entries, "Greek romanization (monotonic and polytonic)")


# --- Hebrew -----------------------------------------------------------------

HEBREW = {
    "א": "a", "ב": "b", "ג": "g", "ד": "d", "ה": "h", "ו": "v", "ז": "z",
    "ח": "kh", "ט": "t", "י": "y", "ך": "k", "כ": "k", "ל": "l", "ם": "m",
    "מ": "m", "ן": "n", "נ": "n", "ס": "s", "ע": "", "ף": "p", "פ": "p",
    "ץ": "ts", "צ": "ts", "ק": "k", "ר": "r", "ש": "sh", "ת": "t",
    "װ": "v", "ױ": "oy", "ײ": "ey", "ׯ": "y",
}


def build_hebrew():
    entries = dict(HEBREW)
    ranges = [(0x0590, 0x05FF)]
    fill_block(entries, ranges)
    write_table("hebrew.tsv", "Hebrew", ranges, entries, "Hebrew romanization, consonantal (points are dropped)")


# --- Arabic -----------------------------------------------------------------

ARABIC_NAMES = {
    "HAMZA": "'", "ALEF": "a", "BEH": "b", "TEH MARBUTA": "a", "TEH": "t",
    "THEH": "th", "JEEM": "j", "HAH": "h", "KHAH": "kh", "DAL": "d",
    "THAL": "dh", "REH": "r", "ZAIN": "z", "SEEN": "s", "SHEEN": "sh",
    "SAD": "s", "DAD": "d", "TAH": "t", "ZAH": "z", "AIN": "'", "GHAIN": "gh",
    "FEH": "f", "QAF": "q", "KAF": "k", "LAM": "l", "MEEM": "m", "NOON": "n",
    "HEH": "h", "WAW": "w", "ALEF MAKSURA": "a", "YEH": "y", "PEH": "p",
    "TCHEH": "ch", "JEH": "zh", "KEHEH": "k", "GAF": "g", "NG": "ng", "VEH": "v",
    "TTEH": "t", "DDAL": "d", "RREH": "r", "NYEH": "ny", "DYEH": "d",
    "TEHEH": "t", "BEEH": "b", "TTEHEH": "t", "DAHAL": "d", "DUL": "d",
    "DDAHAL": "d", "RNOON": "n", "HEH GOAL": "h", "HEH DOACHASHMEE": "h",
    "YEH BARREE": "e", "AE": "e", "OE": "o", "U": "u", "YU": "yu", "VE": "v",
    "KIRGHIZ OE": "o", "KIRGHIZ YU": "yu", "HIGH HAMZA": "'", "TATWEEL": "",
    "SUPERSCRIPT ALEF": "", "SMALL WAW": "", "SMALL YEH": "", "E": "e",
    "GUEH": "g", "NGOEH": "ng", "GUEH": "g", "KEHEH WITH": "k", "ALEF WASLA": "a",
    "HAMZA ON HEH GOAL": "h", "TCHEHEH": "ch", "REH WITH": "r", "NOON GHUNNA": "n",
    "DOTLESS BEH": "b", "DOTLESS FEH": "f", "DOTLESS QAF": "q", "HEH WITH": "h",
    "YEH WITH": "y", "FARSI YEH": "y", "KASHMIRI YEH": "y", "HEH DOACHASHMEE": "h",
    "AIN WITH": "'", "ZAIN WITH": "z", "QAF WITH": "q", "LAM WITH": "l",
}

ARABIC = {
    "ء": "'", "آ": "a", "أ": "a", "ؤ": "w", "إ": "i", "ئ": "y", "ا": "a",
    "ب": "b", "ة": "a", "ت": "t", "ث": "th", "ج": "j", "ح": "h", "خ": "kh",
    "د": "d", "ذ": "dh", "ر": "r", "ز": "z", "س": "s", "ش": "sh", "ص": "s",
    "ض": "d", "ط": "t", "ظ": "z", "ع": "'", "غ": "gh", "ـ": "", "ف": "f",
    "ق": "q", "ك": "k", "ل": "l", "م": "m", "ن": "n", "ه": "h", "و": "w",
    "ى": "a", "ي": "y", "پ": "p", "چ": "ch", "ژ": "zh", "ک": "k", "گ": "g",
    "ی": "y", "ٹ": "t", "ڈ": "d", "ڑ": "r", "ں": "n", "ہ": "h", "ھ": "h",
    "ے": "e", "ۓ": "e", "ە": "e", "ٱ": "a",
}


def build_arabic():
    entries = {nfd(k): v for k, v in ARABIC.items()}
    # harakat and other vowel points: no vocalization
    for ch in cps(0x064B, 0x065F):
        entries[ch] = ""
    entries["ٰ"] = ""
    entries.update(digit_entries(0x0660, 0x0669))
    entries.update(digit_entries(0x06F0, 0x06F9))
    ranges = [(0x0600, 0x06FF)]
    fill_block(entries, ranges, ARABIC_NAMES)
    write_table("arabic.tsv", "Arabic", ranges, entries,
                "Arabic-script romanization (Arabic, Persian, Urdu letters), unvocalized")


# --- Indic abugidas ---------------------------------------------------------

VOWEL_BASES = {
    "A", "AA", "I", "II", "U", "UU", "E", "EE", "AI", "O", "OO", "AU", "AW",
    "UE", "UUE", "OE", "OOE", "VOCALIC R", "VOCALIC RR", "VOCALIC L", "VOCALIC LL",
}
VOWEL_MODIFIERS = {"CANDRA", "SHORT", "PRISHTHAMATRA", "LONG", "TWO", "PART", "LENGTH", "MARK", "AI"}


def vowel_value(base):
    if base.startswith("VOCALIC "):
        v = "r" if base.endswith("R") else "l"
        return v + "i"
    v = base.lower()
    v = re.sub(r"(.)\1+", r"\1", v)
    return v


def vowel_base(rest):
    """'CANDRA E' -> 'E', 'VOCALIC RR' -> 'VOCALIC RR', 'KA' -> None."""
    if rest in VOWEL_BASES:
        return rest
    words = rest.split()
    while words and words[0] in VOWEL_MODIFIERS - {"AI"}:
        words = words[1:]
    cand = " ".join(words)
    return cand if cand in VOWEL_BASES else None


def consonant_value(rest):
    word = rest.split()[-1]
    if not word.endswith("A") or len(word) < 2:
        return None
    skel = word[:-1]
    if skel == "SS":
        return "sh"
    skel = re.sub(r"(.)\1+", r"\1", skel.lower())
    skel = skel.replace("yy", "y")
    return skel


INDIC_OVERRIDES = {
    "ऽ": "", "ॱ": "", "ॽ": "'", "ঽ": "", "ಽ": "", "ঀ": "", "ৼ": "n", "ಀ": "n",
    "ৎ": "t", "ৱ": "wa",
}


def build_indic(fname, script, lo, hi, note):
    prefix = script.upper() + " "
    letters, signs = {}, {}
    virama = nukta = None
    entries = {}
    for ch in cps(lo, hi):
        name = unicodedata.name(ch)
        if not name.startswith(prefix):
            continue
        rest = name[len(prefix):]
        cat = unicodedata.category(ch)
        if rest == "SIGN VIRAMA":
            virama = ch
            entries[ch] = ""
        elif rest == "SIGN NUKTA":
            nukta = ch
            entries[ch] = ""
        elif rest.startswith("VOWEL SIGN "):
            vb = vowel_base(rest[len("VOWEL SIGN "):])
            val = vowel_value(vb) if vb else latinize_word(rest.split()[-1])
            signs[ch] = val
            entries[nfd(ch)] = val
        elif rest.startswith("LETTER "):
            body = rest[len("LETTER "):]
            vb = vowel_base(body)
            if vb:
                entries[nfd(ch)] = vowel_value(vb)
            else:
                cv = consonant_value(body)
                if cv is None:
                    entries[nfd(ch)] = name_guess(ch)
                else:
                    letters[ch] = cv
        elif rest in ("SIGN ANUSVARA", "SIGN CANDRABINDU", "SIGN INVERTED CANDRABINDU"):
            entries[ch] = "n"
        elif rest in ("SIGN VISARGA", "SIGN JIHVAMULIYA", "SIGN UPADHMANIYA"):
            entries[ch] = "h"
        elif rest in ("OM",):
            entries[ch] = "om"
        elif cat == "Nd":
            entries[ch] = str(unicodedata.digit(ch))
    for ch, cv in letters.items():
        forms = [(nfd(ch), cv)]
        if nukta and len(nfd(ch)) == 1:
            composed = nfd(ch + nukta)
            if not any(nfd(o) == composed for o in letters if o != ch):
                forms.append((composed, cv))
        for form, val in forms:
            entries.setdefault(form, val + "a")
            if virama:
                entries.setdefault(nfd(form + virama), val)
            for sign, sv in signs.items():
                key = nfd(form + sign)
                if len(key) <= 4:
                    entries.setdefault(key, val + sv)
    for ch, val in INDIC_OVERRIDES.items():
        if lo <= ord(ch) <= hi:
            entries[ch] = val
    ranges = [(lo, hi)]
    fill_block(entries, ranges)
    write_table(fname, script, ranges, entries, note)


# --- Thai -------------------------------------------------------------------

THAI_CONSONANTS = {
    "ก": "k", "ข": "kh", "ฃ": "kh", "ค": "kh", "ฅ": "kh", "ฆ": "kh", "ง": "ng",
    "จ": "ch", "ฉ": "ch", "ช": "ch", "ซ": "s", "ฌ": "ch", "ญ": "y", "ฎ": "d",
    "ฏ": "t", "ฐ": "th", "ฑ": "th", "ฒ": "th", "ณ": "n", "ด": "d", "ต": "t",
    "ถ": "th", "ท": "th", "ธ": "th", "น": "n", "บ": "b", "ป": "p", "ผ": "ph",
    "ฝ": "f", "พ": "ph", "ฟ": "f", "ภ": "ph", "ม": "m", "ย": "y", "ร": "r",
    "ล": "l", "ว": "w", "ศ": "s", "ษ": "s", "ส": "s", "ห": "h", "ฬ": "l",
    "อ": "o", "ฮ": "h",
}
THAI_OTHER = {
    "ฤ": "rue", "ฦ": "lue", "ะ": "a", "ั": "a", "า": "a", "ำ": "am", "ิ": "i",
    "ี": "i", "ึ": "ue", "ื": "ue", "ุ": "u", "ู": "u", "ฺ": "", "ๅ": "",
    "ๆ": "", "็": "", "่": "", "้": "", "๊": "", "๋": "", "์": "", "ํ": "",
    "๎": "", "ฯ": "",
}
THAI_LEADING = {"เ": "e", "แ": "ae", "โ": "o", "ใ": "ai", "ไ": "ai"}


def build_thai():
    entries = dict(THAI_CONSONANTS)
    entries.update(THAI_OTHER)
    entries.update(THAI_LEADING)
    entries.update(digit_entries(0x0E50, 0x0E59))
    # leading vowels are written before the consonant they follow in speech
    for lv, lval in THAI_LEADING.items():
        for c, cval in THAI_CONSONANTS.items():
            if c == "อ":
                entries[lv + c] = lval
            else:
                entries[lv + c] = cval + lval
    ranges = [(0x0E00, 0x0E7F)]
    fill_block(entries, ranges)
    write_table("thai.tsv", "Thai", ranges, entries, "Thai romanization (RTGS-like initials, leading vowels reordered)")


# --- Hangul -----------------------------------------------------------------

HANGUL_L = ["g", "kk", "n", "d", "tt", "r", "m", "b", "pp", "s", "ss", "", "j", "jj", "ch", "k", "t", "p", "h"]
HANGUL_V = ["a", "ae", "ya", "yae", "eo", "e", "yeo", "ye", "o", "wa", "wae", "oe", "yo", "u", "wo", "we",
            "wi", "yu", "eu", "ui", "i"]
HANGUL_T = ["k", "k", "k", "n", "n", "n", "t", "l", "k", "m", "l", "l", "l", "p", "l", "m", "p", "p", "t",
            "t", "ng", "t", "t", "k", "t", "p", "t"]
# compatibility jamo U+3131..U+3163 as standalone letters
HANGUL_COMPAT = ["g", "kk", "k", "n", "n", "n", "d", "tt", "r", "k", "m", "l", "l", "l", "p", "l", "m", "b",
                 "pp", "p", "s", "ss", "", "j", "jj", "ch", "k", "t", "p", "h"] + HANGUL_V


def build_hangul():
    entries = {}
    for i, v in enumerate(HANGUL_L):
        entries[chr(0x1100 + i)] = v
    for i, v in enumerate(HANGUL_V):
        entries[chr(0x1161 + i)] = v
    for i, v in enumerate(HANGUL_T):
        entries[chr(0x11A8 + i)] = v
    for i, v in enumerate(HANGUL_COMPAT):
        entries[chr(0x3131 + i)] = v
    entries["ᅟ"] = ""
    entries["ᅠ"] = ""
    entries["ㅤ"] = ""
    ranges = [(0x1100, 0x1112), (0x1161, 0x1175), (0x11A8, 0x11C2), (0x3131, 0x3163), (0xAC00, 0xD7A3)]
    write_table("hangul.tsv", "Hangul", ranges, entries,
                "Hangul romanization (Revised Romanization over conjoining jamo; syllables decompose)")


# --- Japanese kana ----------------------------------------------------------

KANA_ROWS = [
    ("あいうえお", ["a", "i", "u", "e", "o"]),
    ("かきくけこ", ["ka", "ki", "ku", "ke", "ko"]),
    ("さしすせそ", ["sa", "shi", "su", "se", "so"]),
    ("たちつてと", ["ta", "chi", "tsu", "te", "to"]),
    ("なにぬねの", ["na", "ni", "nu", "ne", "no"]),
    ("はひふへほ", ["ha", "hi", "fu", "he", "ho"]),
    ("まみむめも", ["ma", "mi", "mu", "me", "mo"]),
    ("やゆよ", ["ya", "yu", "yo"]),
    ("らりるれろ", ["ra", "ri", "ru", "re", "ro"]),
    ("わゐゑを", ["wa", "i", "e", "o"]),
    ("がぎぐげご", ["ga", "gi", "gu", "ge", "go"]),
    ("ざじずぜぞ", ["za", "ji", "zu", "ze", "zo"]),
    ("だぢづでど", ["da", "ji", "zu", "de", "do"]),
    ("ばびぶべぼ", ["ba", "bi", "bu", "be", "bo"]),
    ("ぱぴぷぺぽ", ["pa", "pi", "pu", "pe", "po"]),
    ("ぁぃぅぇぉ", ["a", "i", "u", "e", "o"]),
    ("ゃゅょゎ", ["ya", "yu", "yo", "wa"]),
    ("んっゔゕゖ", ["n", "", "vu", "ka", "ke"]),
]
KANA_YOON = {"ゃ": "a", "ゅ": "u", "ょ": "o"}


def build_kana():
    hira = {}
    for chars, vals in KANA_ROWS:
        for c, v in zip(chars, vals):
            hira[c] = v
    # palatalized syllables: き + ゃ -> kya, し + ゃ -> sha
    for c in "きしちにひみりぎじぢびぴ":
        base = hira[c]
        stem = base[:-1] if base.endswith("i") else base
        for small, v in KANA_YOON.items():
            if stem in ("sh", "ch", "j"):
                hira[c + small] = stem + v
            else:
                hira[c + small] = stem + "y" + v
    entries = {}
    for k, v in hira.items():
        entries[nfd(k)] = v
        kata = "".join(chr(ord(c) + 0x60) for c in k)
        entries[nfd(kata)] = v
    entries["ー"] = ""
    entries["ヷ"] = "va"
    entries["ヸ"] = "vi"
    entries["ヹ"] = "ve"
    entries["ヺ"] = "vo"
    entries["ゝ"] = ""
    entries["ゞ"] = ""
    entries["ヽ"] = ""
    entries["ヾ"] = ""
    entries["ゟ"] = "yori"
    entries["ヿ"] = "koto"
    entries["・"] = ""
    ranges = [(0x3041, 0x3096), (0x30A1, 0x30FA)]
    fill_block(entries, ranges)
    write_table("kana.tsv", "Japanese kana", ranges, entries, "Hiragana and katakana (Hepburn); Han is not covered")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    build_cyrillic()
    build_greek()
    build_hebrew()
    build_arabic()
    build_indic("devanagari.tsv", "Devanagari", 0x0900, 0x097F, "Devanagari romanization (inherent a, virama, matras)")
    build_indic("bengali.tsv", "Bengali", 0x0980, 0x09FF, "Bengali romanization (inherent a, virama, matras)")
    build_indic("tamil.tsv", "Tamil", 0x0B80, 0x0BFF, "Tamil romanization (inherent a, pulli, matras)")
    build_indic("kannada.tsv", "Kannada", 0x0C80, 0x0CFF, "Kannada romanization (inherent a, virama, matras)")
    build_thai()
    build_hangul()
    build_kana()


if __name__ == "__main__":
    main()
