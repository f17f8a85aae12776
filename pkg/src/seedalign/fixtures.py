"""Small synthetic bilingual fixture with a known ground-truth alignment.

Source words are Latin pseudo-words; target word ``i`` is the Cyrillic
spelling of source word ``i`` (or the same Latin string for every
``identical_every``-th word). Target vectors are a rotated, noisy copy of the
source vectors, so word ``i`` translates to word ``i``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingSpace, write_embeddings

_CONSONANTS = "bdfglmnprstvz"
_VOWELS = "aeiou"
_TO_CYRILLIC = dict(zip("bdfglmnprstvzaeiou", "бдфглмнпрствзаэиоу"))


def pseudo_words(n: int, rng: np.random.Generator) -> list[str]:
    out, seen = [], set()
    while len(out) < n:
        syl = int(rng.integers(2, 4))
        w = "".join(_CONSONANTS[rng.integers(len(_CONSONANTS))] + _VOWELS[rng.integers(len(_VOWELS))]
                    for _ in range(syl))
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def to_cyrillic(word: str) -> str:
    return "".join(_TO_CYRILLIC[c] for c in word)


def make_synthetic(out_dir, n: int = 2000, dim: int = 50, noise: float = 0.01, seed: int = 0,
                   identical_every: int = 10, test_size: int = 400, n_candidates: int = 600) -> dict:
    """Write embeddings, lexicons, candidates and a pipeline config to ``out_dir``.

    Returns the config dictionary (paths relative to ``out_dir``).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    src_words = pseudo_words(n, rng)
    trg_words = [w if i % identical_every == 0 else to_cyrillic(w) for i, w in enumerate(src_words)]

    x = rng.standard_normal((n, dim))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    z = x @ q + noise * rng.standard_normal((n, dim))
    z /= np.linalg.norm(z, axis=1, keepdims=True)

    write_embeddings(EmbeddingSpace(tuple(src_words), x.astype(np.float32), "xx"), out / "src.vec")
    write_embeddings(EmbeddingSpace(tuple(trg_words), z.astype(np.float32), "yy"), out / "trg.vec")

    test_ids = sorted(rng.choice(n, size=min(test_size, n), replace=False).tolist())
    with open(out / "test.tsv", "w", encoding="utf-8", newline="\n") as f:
        for i in test_ids:
            f.write(f"{src_words[i]}\t{trg_words[i]}\n")
    cand_ids = [i for i in range(n) if i % identical_every][:n_candidates]
    with open(out / "candidates.txt", "w", encoding="utf-8", newline="\n") as f:
        for i in cand_ids:
            f.write(src_words[i].capitalize() + "\n")
    # pivot lexicons: pivot word "pv<i>" translates to word i on both sides
    pivot_ids = sorted(rng.choice(n, size=min(100, n), replace=False).tolist())
    for name, words in (("pivot_src.tsv", src_words), ("pivot_trg.tsv", trg_words)):
        with open(out / name, "w", encoding="utf-8", newline="\n") as f:
            for i in pivot_ids:
                f.write(f"pv{i}\t{words[i]}\n")

    config = {
        "src_embeddings": "src.vec",
        "trg_embeddings": "trg.vec",
        "src_lang": "xx",
        "trg_lang": "yy",
        "candidates": "candidates.txt",
        "test_lexicon": "test.tsv",
        "pivot_src_lexicon": "pivot_src.tsv",
        "pivot_trg_lexicon": "pivot_trg.tsv",
        "tables": ["cyrillic"],
        "mode": "id",
        "output_dir": "out",
        "seed": seed,
        "mapping": {"vocab_cutoff": n},
    }
    with open(out / "config.json", "w", encoding="utf-8", newline="\n") as f:
        json.dump(config, f, indent=2, sort_keys=True)
        f.write("\n")
    return config
