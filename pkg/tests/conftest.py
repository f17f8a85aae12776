import functools
import itertools

import numpy as np
import pytest

from seedalign.embeddings import EmbeddingSpace, write_embeddings
from seedalign.fixtures import make_synthetic


def write_vec(path, words, matrix):
    write_embeddings(EmbeddingSpace(tuple(words), np.asarray(matrix, dtype=np.float32)), path)
    return path


def space(words, matrix=None, lang="", dim=3, seed=0):
    if matrix is None:
        rng = np.random.default_rng(seed)
        matrix = rng.standard_normal((len(words), dim)) + 0.1
    return EmbeddingSpace(tuple(words), np.asarray(matrix, dtype=np.float32), lang)


def lev_oracle(a: str, b: str) -> int:
    """Textbook recursive definition, memoized."""
    @functools.lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))
    return d(len(a), len(b))


def variants_oracle(word: str, k: int) -> set:
    """Deletion variants by choosing which positions to drop."""
    out = set()
    n = len(word)
    for r in range(min(k, n) + 1):
        for drop in itertools.combinations(range(n), r):
            out.add("".join(c for i, c in enumerate(word) if i not in drop))
    return out


def dot_loop(u, v) -> float:
    acc = 0.0
    for a, b in zip(u, v):
        acc += float(a) * float(b)
    return acc


def knn_mean_loop(rows, others, k) -> list:
    """Mean of the k largest similarities of every row to ``others``, by explicit loops."""
    out = []
    for u in rows:
        sims = sorted((dot_loop(u, v) for v in others), reverse=True)
        kk = min(k, len(sims))
        out.append(sum(sims[:kk]) / kk if kk else 0.0)
    return out


def csls_loop(src, trg, k):
    """Dense CSLS matrix 2 cos - r_src - r_trg computed entry by entry."""
    r_src = knn_mean_loop(src, trg, k)
    r_trg = knn_mean_loop(trg, src, k)
    return [[2.0 * dot_loop(x, y) - r_src[i] - r_trg[j] for j, y in enumerate(trg)]
            for i, x in enumerate(src)], r_src, r_trg


def argmax_loop(row) -> int:
    best = 0
    for j in range(1, len(row)):
        if row[j] > row[best]:
            best = j
    return best


@pytest.fixture(scope="session")
def synthetic_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("synthetic")
    make_synthetic(d)
    return d


# --- acceptance summary -----------------------------------------------------

_ACCEPTANCE: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _ACCEPTANCE[name] = status


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    # one line per criterion; parametrized cases fail the criterion if any case fails
    grouped: dict = {}
    for name, status in _ACCEPTANCE.items():
        grouped.setdefault(name.split("[")[0], []).append(status)
    terminalreporter.section("acceptance criteria")
    for name in sorted(grouped):
        statuses = grouped[name]
        status = "FAIL" if "FAIL" in statuses else "SKIP" if "SKIP" in statuses else "PASS"
        terminalreporter.write_line(f"{status}  {name}")
