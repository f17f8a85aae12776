import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seedalign.embeddings import EmbeddingSpace
from seedalign.lexicon import SeedLexicon
from seedalign.mapping import (
    MappingConfig, MappingError, MaskRng, advanced_transform, dewhitening_transform, dictionary_objective,
    induce_dictionary, procrustes, procrustes_info, read_trace, self_learn, whitening_transform, write_trace,
)

from conftest import argmax_loop, csls_loop

P1 = MappingConfig(stochastic_keep_initial=1.0)


def rand_unit(rng, n, d):
    m = rng.standard_normal((n, d))
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def rand_orth(rng, d):
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    return q


def ortho_err(w):
    return np.abs(w.T @ w - np.eye(w.shape[1])).max()


def synthetic(n=2000, d=50, noise=0.01, seed=0):
    rng = np.random.default_rng(seed)
    x = rand_unit(rng, n, d)
    q = rand_orth(rng, d)
    z = x @ q + noise * rng.standard_normal((n, d))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    seed_pairs = [(int(i), int(i)) for i in rng.choice(n, 50, replace=False)]
    return x, z, q, seed_pairs


def identity_recovery(result, n):
    d = set(result.induced_dict)
    return sum((i, i) in d for i in range(n)) / n


# --- procrustes -------------------------------------------------------------

def test_procrustes_identity():
    x = rand_unit(np.random.default_rng(0), 100, 10)
    w = procrustes(x, x, [(i, i) for i in range(100)])
    np.testing.assert_allclose(w, np.eye(10), atol=1e-6)


@pytest.mark.parametrize("d", [10, 50])
def test_procrustes_recovers_rotation(d):
    rng = np.random.default_rng(d)
    x = rand_unit(rng, 500, d)
    q = rand_orth(rng, d)
    w = procrustes(x, x @ q, [(i, i) for i in range(500)])
    assert np.abs(w - q).max() <= 1e-5
    assert ortho_err(w) <= 1e-5


def test_procrustes_orthogonal_on_noisy_pairs():
    rng = np.random.default_rng(1)
    x, z = rng.standard_normal((1000, 50)), rng.standard_normal((1000, 50))
    pairs = [(int(a), int(b)) for a, b in zip(rng.integers(1000, size=1000), rng.integers(1000, size=1000))]
    assert ortho_err(procrustes(x, z, pairs)) <= 1e-5


def test_procrustes_accepts_spaces():
    rng = np.random.default_rng(2)
    m = rand_unit(rng, 5, 3)
    s = EmbeddingSpace(tuple("abcde"), m.astype(np.float32))
    assert procrustes(s, s, [(0, 0), (1, 1), (2, 2)]).shape == (3, 3)


def test_procrustes_errors():
    x = np.eye(3)
    with pytest.raises(MappingError):
        procrustes(x, x, [])
    with pytest.raises(MappingError):
        procrustes(x, x, [(0, 3)])


def test_rank_deficient_is_flagged_and_stable():
    rng = np.random.default_rng(3)
    x, z = rand_unit(rng, 20, 10), rand_unit(rng, 20, 10)
    pairs = [(0, 0), (1, 1), (2, 2)]
    w, flag = procrustes_info(x, z, pairs)
    assert flag
    assert ortho_err(w) <= 1e-5
    w2, _ = procrustes_info(x.copy(), z.copy(), list(pairs))
    assert np.array_equal(w, w2)
    assert not procrustes_info(x, z, [(i, i) for i in range(20)])[1]


def test_sign_rule_on_left_vectors():
    from seedalign.mapping import _signed_svd
    rng = np.random.default_rng(4)
    u, _, _ = _signed_svd(rng.standard_normal((6, 6)))
    idx = np.abs(u).argmax(axis=0)
    assert (u[idx, np.arange(6)] > 0).all()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 12), st.integers(1, 30))
def test_procrustes_always_orthogonal(seed, d, n):
    rng = np.random.default_rng(seed)
    x, z = rng.standard_normal((n, d)), rng.standard_normal((n, d))
    assert ortho_err(procrustes(x, z, [(i, i) for i in range(n)])) <= 1e-5


# --- whitening --------------------------------------------------------------

def test_whitening_gives_identity_covariance():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((300, 8)) @ rng.standard_normal((8, 8))
    w = whitening_transform(m)
    mw = m @ w
    np.testing.assert_allclose(mw.T @ mw, np.eye(8), atol=1e-4)


def test_dewhitening_inverts_whitening():
    rng = np.random.default_rng(6)
    m = rng.standard_normal((300, 8)) @ rng.standard_normal((8, 8))
    w = whitening_transform(m)
    r = rand_orth(rng, 8)
    # in the rotated basis r, whiten then de-whiten is the identity
    np.testing.assert_allclose((r.T @ w @ r) @ dewhitening_transform(w, r), np.eye(8), atol=1e-6)
    np.testing.assert_allclose(w @ dewhitening_transform(w, np.eye(8)), np.eye(8), atol=1e-6)


def test_whitening_rejects_singular():
    with pytest.raises(MappingError):
        whitening_transform(np.ones((5, 3)))


def test_advanced_transform_aligns_rotation():
    x, z, q, _ = synthetic(n=500, d=20, noise=0.0)
    pairs = [(i, i) for i in range(500)]
    wx, wz = advanced_transform(x, z, pairs, MappingConfig(advanced=True))
    xm, zm = x @ wx, z @ wz
    xm /= np.linalg.norm(xm, axis=1, keepdims=True)
    zm /= np.linalg.norm(zm, axis=1, keepdims=True)
    assert (np.argmax(xm @ zm.T, axis=1) == np.arange(500)).mean() >= 0.99


# --- induction --------------------------------------------------------------

def test_induction_exact_match():
    x = np.eye(3)
    assert induce_dictionary(x, x.copy(), P1) == [(0, 0), (1, 1), (2, 2)]


@pytest.mark.parametrize("direction", ["forward", "backward", "union"])
@pytest.mark.parametrize("k", [0, 1, 5, 10])
def test_induction_matches_dense_oracle(direction, k):
    rng = np.random.default_rng(k + 17)
    x, z = rand_unit(rng, 20, 5), rand_unit(rng, 20, 5)
    cfg = MappingConfig(stochastic_keep_initial=1.0, csls_k=k, direction=direction)
    scores, _, _ = csls_loop(x.tolist(), z.tolist(), k)
    fwd = {(i, argmax_loop(scores[i])) for i in range(20)}
    bwd = {(argmax_loop([scores[i][j] for i in range(20)]), j) for j in range(20)}
    want = {"forward": fwd, "backward": bwd, "union": fwd | bwd}[direction]
    assert induce_dictionary(x, z, cfg) == sorted(want)


def test_induction_respects_cutoff():
    rng = np.random.default_rng(8)
    x, z = rand_unit(rng, 50, 5), rand_unit(rng, 50, 5)
    got = induce_dictionary(x, z, MappingConfig(vocab_cutoff=10))
    assert got == induce_dictionary(x[:10], z[:10], MappingConfig(vocab_cutoff=10))
    assert all(s < 10 and t < 10 for s, t in got)


def test_stochastic_induction_is_seeded_and_thread_invariant():
    rng = np.random.default_rng(9)
    x, z = rand_unit(rng, 1200, 8), rand_unit(rng, 1200, 8)
    cfg = MappingConfig()
    a = induce_dictionary(x, z, cfg, MaskRng(3, 1), keep_prob=0.3, threads=1)
    b = induce_dictionary(x, z, cfg, MaskRng(3, 1), keep_prob=0.3, threads=4)
    c = induce_dictionary(x, z, cfg, MaskRng(3, 2), keep_prob=0.3, threads=1)
    full = induce_dictionary(x, z, cfg)
    assert a == b
    assert a != c and a != full
    with pytest.raises(ValueError):
        induce_dictionary(x, z, cfg, None, keep_prob=0.5)


def test_mask_rng_rows():
    r = MaskRng(5, 2)
    assert np.array_equal(r.row(0, 7, 100), r.row(0, 7, 100))
    assert not np.array_equal(r.row(0, 7, 100), r.row(1, 7, 100))
    assert not np.array_equal(r.row(0, 7, 100), r.row(0, 8, 100))
    assert abs(r.row(0, 1, 20_000).mean() - 0.5) < 0.02


# --- self-learning ----------------------------------------------------------

@pytest.fixture(scope="module")
def synth():
    return synthetic()


@pytest.mark.parametrize("cfg", [MappingConfig(), P1], ids=["stochastic", "deterministic"])
def test_self_learning_recovers_identity(synth, cfg):
    x, z, _, seed = synth
    ws = []
    res = self_learn(x, z, seed, cfg, callback=lambda rec, w: ws.append(w))
    assert identity_recovery(res, 2000) >= 0.95
    assert len(ws) == len(res.trace)
    assert max(ortho_err(w) for w in ws) <= 1e-5
    assert ortho_err(res.w_src) <= 1e-5 and np.array_equal(res.w_trg, np.eye(50))
    assert res.objective == max(r.objective for r in res.trace)


def test_deterministic_trace_non_decreasing(synth):
    x, z, _, seed = synth
    res = self_learn(x, z, seed, P1)
    objs = [r.objective for r in res.trace]
    assert all(b >= a - 1e-9 for a, b in zip(objs, objs[1:]))
    assert all(r.keep_prob == 1.0 for r in res.trace)


def test_keep_probability_schedule(synth):
    x, z, _, seed = synth
    res = self_learn(x, z, seed, MappingConfig())
    keeps = [r.keep_prob for r in res.trace]
    assert keeps[0] == 0.1 and keeps[-1] == 1.0
    assert all(b in (a, min(1.0, 2 * a)) for a, b in zip(keeps, keeps[1:]))


def test_full_dictionary_converges_fast():
    x, z, _, _ = synthetic(n=1000, d=30, noise=0.0, seed=4)
    res = self_learn(x, z, [(i, i) for i in range(1000)], P1)
    assert len(res.trace) <= 3
    assert res.objective >= 0.999


def test_identity_seed_objective_is_one():
    x, z, q, _ = synthetic(n=500, d=20, noise=0.0, seed=5)
    pairs = [(i, i) for i in range(500)]
    w = procrustes(x, z, pairs)
    assert abs(dictionary_objective(x @ w, z, pairs) - 1.0) <= 1e-9


def test_mapping_invariance_under_common_rotation(synth):
    x, z, _, seed = synth
    r = rand_orth(np.random.default_rng(99), 50)
    a = self_learn(x, z, seed, P1)
    b = self_learn(x @ r, z @ r, seed, P1)
    assert a.induced_dict == b.induced_dict


def test_thread_count_does_not_change_result(synth):
    x, z, _, seed = synth
    cfg = MappingConfig(vocab_cutoff=1500)
    a = self_learn(x, z, seed, cfg, threads=1)
    b = self_learn(x, z, seed, cfg, threads=3)
    assert a.induced_dict == b.induced_dict and a.trace == b.trace
    assert np.array_equal(a.w_src, b.w_src)


def test_max_iterations_bound(synth):
    x, z, _, seed = synth
    res = self_learn(x, z, seed, MappingConfig(max_iterations=2))
    assert len(res.trace) == 2


def test_advanced_mode(synth):
    x, z, _, seed = synth
    res = self_learn(x, z, seed, MappingConfig(stochastic_keep_initial=1.0, advanced=True))
    xm, zm = x @ res.w_src, z @ res.w_trg
    xm /= np.linalg.norm(xm, axis=1, keepdims=True)
    zm /= np.linalg.norm(zm, axis=1, keepdims=True)
    assert (np.argmax(xm @ zm.T, axis=1) == np.arange(2000)).mean() >= 0.95


def test_lexicon_seed_and_oov_error():
    x, z, _, _ = synthetic(n=100, d=10)
    words = tuple(f"w{i}" for i in range(100))
    sx = EmbeddingSpace(words, x.astype(np.float32))
    sz = EmbeddingSpace(words, z.astype(np.float32))
    res = self_learn(sx, sz, SeedLexicon(tuple((w, w) for w in words[:30])), P1)
    assert res.seed_pairs == 30 and res.oov["usable_pairs"] == 30
    with pytest.raises(MappingError, match="usable_pairs"):
        self_learn(sx, sz, SeedLexicon((("nope", "w1"),)), P1)
    with pytest.raises(MappingError):
        self_learn(x, z, [], P1)


def test_trace_roundtrip(tmp_path, synth):
    x, z, _, seed = synth
    res = self_learn(x[:300], z[:300], [p for p in seed if p[0] < 300], P1)
    write_trace(res.trace, tmp_path / "t.jsonl", {"seed": 0})
    assert tuple(read_trace(tmp_path / "t.jsonl")) == res.trace


@pytest.mark.parametrize("kwargs", [
    {"csls_k": -1}, {"vocab_cutoff": 0}, {"convergence_threshold": -1}, {"max_iterations": 0},
    {"stochastic_keep_initial": 0}, {"stochastic_keep_initial": 1.5}, {"stochastic_multiplier": 1.0},
    {"direction": "both"}, {"seed": -1}, {"src_dewhiten": "x"},
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        MappingConfig(**kwargs)
