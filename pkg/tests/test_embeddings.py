import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from seedalign.embeddings import (
    DEFAULT_PLAN, EmbeddingFormatError, EmbeddingSpace, ZeroNormError, load_embeddings, normalize,
    read_vocabulary, write_embeddings,
)

from conftest import space


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_truncation(tmp_path):
    p = _write(tmp_path / "e.vec", "3 4\na 1 0 0 0\nb 0 1 0 0\nc 0 0 1 0\n")
    s = load_embeddings(p, max_vocab=2)
    assert s.words == ("a", "b") and s.dim == 4 and s.vectors.shape == (2, 4)


def test_large_vocabulary_cap(tmp_path):
    n = 200_001
    p = tmp_path / "big.vec"
    with open(p, "w") as f:
        f.write(f"{n} 1\n")
        f.writelines(f"w{i} 1\n" for i in range(n))
    s = load_embeddings(p, max_vocab=200_000)
    assert len(s) == 200_000
    assert s.words[-1] == "w199999"


def test_duplicate_skipped_and_counted(tmp_path):
    p = _write(tmp_path / "e.vec", "3 2\nx 1 0\ny 0 1\nx 5 5\n")
    s = load_embeddings(p)
    assert s.words == ("x", "y")
    assert s.stats.duplicates == 1
    np.testing.assert_array_equal(s.vectors[0], [1, 0])


def test_zero_norm_row_rejected(tmp_path):
    p = _write(tmp_path / "e.vec", "3 2\nx 1 0\nz 0 0\ny 0 1\n")
    s = load_embeddings(p)
    assert s.words == ("x", "y")
    assert s.stats.zero_norm == 1 and s.stats.zero_norm_words == ("z",)


@pytest.mark.parametrize("text,line", [
    ("3\na 1\n", 1),
    ("x y\na 1\n", 1),
    ("2 3\na 1 2 3\nb 1 2\n", 3),
    ("2 2\na 1 2\nb 1 q\n", 3),
])
def test_parse_errors_name_the_line(tmp_path, text, line):
    p = _write(tmp_path / "bad.vec", text)
    with pytest.raises(EmbeddingFormatError) as e:
        load_embeddings(p)
    assert e.value.lineno == line
    assert f":{line}:" in str(e.value)


def test_tokens_keep_any_non_whitespace(tmp_path):
    p = _write(tmp_path / "e.vec", "3 1\n, 1\n的 2\nNaïve 3\n")
    assert load_embeddings(p).words == (",", "的", "Naïve")
    assert read_vocabulary(p, 2) == [",", "的"]


def test_write_roundtrip(tmp_path):
    s = space(["a", "b", "c"], dim=4)
    write_embeddings(s, tmp_path / "o.vec")
    back = load_embeddings(tmp_path / "o.vec")
    assert back.words == s.words
    np.testing.assert_allclose(back.vectors, s.vectors, rtol=1e-5)


def test_vocabulary_order_and_immutability():
    s = space(["b", "a", "c"])
    assert s.index("a") == 1 and s.rank_map() == {"b": 0, "a": 1, "c": 2}
    with pytest.raises(ValueError):
        s.vectors[0, 0] = 1.0
    with pytest.raises(ValueError):
        EmbeddingSpace(("a", "a"), np.ones((2, 2), dtype=np.float32))


def test_unit_on_unit_rows_is_identity():
    rng = np.random.default_rng(1)
    m = rng.standard_normal((20, 6))
    m /= np.linalg.norm(m, axis=1, keepdims=True)
    s = space([f"w{i}" for i in range(20)], m)
    out = normalize(s, ["unit"])
    np.testing.assert_allclose(out.vectors, s.vectors.astype(np.float64), atol=1e-7)
    again = normalize(out, ["unit"])
    np.testing.assert_allclose(again.vectors, out.vectors, atol=1e-12, rtol=0)


def test_center_two_rows():
    s = space(["a", "b"], [[1, 0], [3, 0]])
    np.testing.assert_allclose(normalize(s, ["center"]).vectors, [[-1, 0], [1, 0]])


def test_default_plan_norms():
    rng = np.random.default_rng(2)
    s = space([f"w{i}" for i in range(50)], rng.standard_normal((50, 10)))
    assert tuple(DEFAULT_PLAN) == ("unit", "center", "unit")
    out = normalize(s)
    np.testing.assert_allclose(np.linalg.norm(out.vectors, axis=1), 1.0, atol=1e-9)
    np.testing.assert_allclose(normalize(out, ["unit"]).vectors, out.vectors, atol=1e-12, rtol=0)


def test_center_means_zero():
    rng = np.random.default_rng(3)
    s = space([f"w{i}" for i in range(30)], rng.standard_normal((30, 5)) + 4)
    out = normalize(s, ["unit", "center"])
    np.testing.assert_allclose(out.vectors.mean(axis=0), 0, atol=1e-6)


def test_normalize_does_not_mutate_input():
    s = space(["a", "b"], [[3, 4], [1, 0]])
    before = s.vectors.copy()
    normalize(s)
    np.testing.assert_array_equal(s.vectors, before)


def test_normalize_errors():
    s = space(["a", "b"], [[1, 1], [1, 1]])
    with pytest.raises(ZeroNormError, match="'a'"):
        normalize(s, ["center", "unit"])
    with pytest.raises(ValueError):
        normalize(s, [])
    with pytest.raises(ValueError):
        normalize(s, ["scale"])


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(2, 12), st.integers(1, 6)),
              elements=st.floats(-100, 100, allow_nan=False).filter(lambda v: abs(v) > 1e-3)))
def test_unit_idempotence_property(m):
    s = space([f"w{i}" for i in range(len(m))], m)
    once = normalize(s, ["unit"])
    twice = normalize(once, ["unit"])
    np.testing.assert_allclose(twice.vectors, once.vectors, atol=1e-12, rtol=0)
    assert twice.words == s.words
