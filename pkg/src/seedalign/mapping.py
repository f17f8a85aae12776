"""Semi-supervised self-learning alignment of two embedding spaces.

Each iteration fits an orthogonal map on the current dictionary (Procrustes)
and induces a new dictionary by CSLS retrieval inside a frequency cutoff.
Retrieval is stochastic early on: every similarity entry survives with the
current keep probability, which grows whenever the objective stagnates.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .embeddings import EmbeddingSpace
from .evaluation import neighborhood_means
from .lexicon import SeedLexicon, oov_report, to_index_pairs
from .parallel import map_blocks, single_threaded_blas

log = logging.getLogger(__name__)

DIRECTIONS = ("forward", "backward", "union")
BLOCK = 512
_FORWARD, _BACKWARD = 0, 1


class MappingError(ValueError):
    pass


@dataclass(frozen=True)
class MappingConfig:
    csls_k: int = 10
    vocab_cutoff: int = 20000
    convergence_threshold: float = 1e-6
    max_iterations: int = 500
    stochastic_keep_initial: float = 0.1
    stochastic_multiplier: float = 2.0
    direction: str = "union"
    seed: int = 0
    advanced: bool = False
    src_reweight: float = 0.5
    trg_reweight: float = 0.5
    src_dewhiten: str = "src"
    trg_dewhiten: str = "trg"

    def __post_init__(self):
        if self.csls_k < 0:
            raise ValueError("csls_k must be >= 0")
        if self.vocab_cutoff < 1:
            raise ValueError("vocab_cutoff must be >= 1")
        if self.convergence_threshold < 0:
            raise ValueError("convergence_threshold must be >= 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 < self.stochastic_keep_initial <= 1:
            raise ValueError("stochastic_keep_initial must be in (0, 1]")
        if not self.stochastic_multiplier > 1:
            raise ValueError("stochastic_multiplier must be > 1")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        for side in (self.src_dewhiten, self.trg_dewhiten):
            if side not in ("src", "trg", "none"):
                raise ValueError("dewhiten must be 'src', 'trg' or 'none'")


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    objective: float
    dict_size: int
    keep_prob: float
    rank_deficient: bool = False


@dataclass(frozen=True)
class MappingResult:
    w_src: np.ndarray
    w_trg: np.ndarray
    induced_dict: tuple[tuple[int, int], ...]
    trace: tuple[TraceRecord, ...]
    best_iteration: int
    seed_pairs: int = 0
    oov: dict = field(default_factory=dict)

    @property
    def objective(self) -> float:
        return self.trace[self.best_iteration - 1].objective

    def apply(self, space_src: EmbeddingSpace, space_trg: EmbeddingSpace):
        """Mapped copies of both spaces."""
        return (space_src.with_vectors(np.asarray(space_src.vectors, dtype=np.float64) @ self.w_src),
                space_trg.with_vectors(np.asarray(space_trg.vectors, dtype=np.float64) @ self.w_trg))


def _matrix(x) -> np.ndarray:
    if isinstance(x, EmbeddingSpace):
        x = x.vectors
    return np.asarray(x, dtype=np.float64)


def _pairs_array(pairs, n_src: int, n_trg: int) -> tuple[np.ndarray, np.ndarray]:
    arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    if len(arr) == 0:
        raise MappingError("empty dictionary")
    s, t = arr[:, 0], arr[:, 1]
    if s.min() < 0 or s.max() >= n_src or t.min() < 0 or t.max() >= n_trg:
        raise MappingError("dictionary id out of range")
    return s, t


# --- mapping step -----------------------------------------------------------

def _signed_svd(m: np.ndarray):
    u, s, vt = np.linalg.svd(m)
    # largest-magnitude entry of every left singular vector made positive
    idx = np.abs(u).argmax(axis=0)
    signs = np.where(u[idx, np.arange(u.shape[1])] < 0, -1.0, 1.0)
    return u * signs, s, vt * signs[:, None]


def procrustes_info(space_src, space_trg, pairs) -> tuple[np.ndarray, bool]:
    """Orthogonal W maximizing sum <x_s W, z_t> over ``pairs``, plus a rank-deficiency flag."""
    x, z = _matrix(space_src), _matrix(space_trg)
    s_idx, t_idx = _pairs_array(pairs, len(x), len(z))
    with single_threaded_blas():
        m = x[s_idx].T @ z[t_idx]
        u, sv, vt = _signed_svd(m)
        w = u @ vt
    deficient = bool(sv[-1] <= sv[0] * max(m.shape) * np.finfo(np.float64).eps) if sv[0] > 0 else True
    return w, deficient


def procrustes(space_src, space_trg, pairs) -> np.ndarray:
    """W = U V^T from the SVD of X_D^T Z_D over dictionary rows."""
    return procrustes_info(space_src, space_trg, pairs)[0]


# --- advanced transform -----------------------------------------------------

def whitening_transform(m: np.ndarray) -> np.ndarray:
    """(M^T M)^(-1/2), so that (M W)^T (M W) = I for full-rank M."""
    m = _matrix(m)
    with single_threaded_blas():
        _, s, vt = np.linalg.svd(m, full_matrices=False)
    if s[-1] <= s[0] * max(m.shape) * np.finfo(np.float64).eps:
        raise MappingError("whitening needs a full-rank dictionary matrix")
    return vt.T @ np.diag(1.0 / s) @ vt


def dewhitening_transform(whiten: np.ndarray, rotation: np.ndarray) -> np.ndarray:
    """R^T W^(-1) R: undoes ``whiten`` expressed in the rotated basis ``rotation``."""
    return rotation.T @ np.linalg.inv(whiten) @ rotation


def advanced_transform(space_src, space_trg, pairs, config: MappingConfig) -> tuple[np.ndarray, np.ndarray]:
    """Whitening, orthogonal mapping, re-weighting and de-whitening, as one linear map per side."""
    x, z = _matrix(space_src), _matrix(space_trg)
    s_idx, t_idx = _pairs_array(pairs, len(x), len(z))
    xd, zd = x[s_idx], z[t_idx]
    wx1, wz1 = whitening_transform(xd), whitening_transform(zd)
    with single_threaded_blas():
        u, s, vt = _signed_svd((xd @ wx1).T @ (zd @ wz1))
    wx2, wz2 = u, vt.T
    wx = wx1 @ wx2 @ np.diag(s ** config.src_reweight)
    wz = wz1 @ wz2 @ np.diag(s ** config.trg_reweight)
    dewhite = {"src": (wx1, wx2), "trg": (wz1, wz2)}
    if config.src_dewhiten != "none":
        wx = wx @ dewhitening_transform(*dewhite[config.src_dewhiten])
    if config.trg_dewhiten != "none":
        wz = wz @ dewhitening_transform(*dewhite[config.trg_dewhiten])
    return wx, wz


# --- dictionary induction ---------------------------------------------------

@dataclass(frozen=True)
class MaskRng:
    """Counter-based randomness keyed by (seed, iteration, direction, row)."""
    seed: int
    iteration: int

    def row(self, direction: int, row: int, n: int) -> np.ndarray:
        bits = np.random.Philox(key=self.seed, counter=[0, row, self.iteration, direction])
        return np.random.Generator(bits).random(n)


def _retrieve(queries, targets, r_src, r_trg, keep_prob, rng: MaskRng | None, direction, threads):
    def work(i, j):
        scores = 2.0 * (queries[i:j] @ targets.T) - r_src[i:j, None] - r_trg
        if keep_prob < 1.0:
            mask = np.stack([rng.row(direction, r, targets.shape[0]) for r in range(i, j)]) >= keep_prob
            scores[mask] = -np.inf
        return scores.argmax(axis=1)

    return np.concatenate(map_blocks(work, queries.shape[0], BLOCK, threads))


def induce_dictionary(mapped_src, mapped_trg, config: MappingConfig, rng: MaskRng | None = None,
                      keep_prob: float = 1.0, threads: int = 1) -> list[tuple[int, int]]:
    """CSLS dictionary over the first ``config.vocab_cutoff`` rows of each side.

    Rows must be unit-normalized. With ``keep_prob < 1`` every similarity
    entry is dropped with probability ``1 - keep_prob`` before the argmax.
    Returns sorted (src id, trg id) pairs.
    """
    if keep_prob < 1.0 and rng is None:
        raise ValueError("stochastic induction needs an rng")
    x = _matrix(mapped_src)[: config.vocab_cutoff]
    z = _matrix(mapped_trg)[: config.vocab_cutoff]
    pairs: set[tuple[int, int]] = set()
    r_src = neighborhood_means(x, z, config.csls_k, threads)
    r_trg = neighborhood_means(z, x, config.csls_k, threads)
    if config.direction in ("forward", "union"):
        best = _retrieve(x, z, r_src, r_trg, keep_prob, rng, _FORWARD, threads)
        pairs.update(zip(range(len(x)), best.tolist()))
    if config.direction in ("backward", "union"):
        best = _retrieve(z, x, r_trg, r_src, keep_prob, rng, _BACKWARD, threads)
        pairs.update(zip(best.tolist(), range(len(z))))
    return sorted(pairs)


def dictionary_objective(mapped_src, mapped_trg, pairs) -> float:
    """Mean dot product of mapped source and target over ``pairs``."""
    x, z = _matrix(mapped_src), _matrix(mapped_trg)
    s, t = _pairs_array(pairs, len(x), len(z))
    return float(np.einsum("ij,ij->i", x[s], z[t]).mean())


# --- self-learning ----------------------------------------------------------

def self_learn(space_src: EmbeddingSpace, space_trg: EmbeddingSpace, seed_lex: SeedLexicon | Sequence,
               config: MappingConfig = MappingConfig(), threads: int = 1,
               callback=None) -> MappingResult:
    """Alternate Procrustes and induction from a seed dictionary.

    ``seed_lex`` is a lexicon of words or a list of (src id, trg id) pairs.
    The loop stops when the objective fails to improve by
    ``convergence_threshold`` at keep probability 1, or after
    ``max_iterations``; the best-objective state is returned.
    ``callback(record, w)`` is called after every iteration.
    """
    x, z = _matrix(space_src), _matrix(space_trg)
    oov = {}
    if isinstance(seed_lex, SeedLexicon):
        rep = oov_report(seed_lex, space_src, space_trg)
        oov = rep.as_dict()
        pairs = to_index_pairs(seed_lex, space_src, space_trg)
        if not pairs:
            raise MappingError(f"no usable seed pairs: {json.dumps(oov, sort_keys=True)}")
    else:
        pairs = [(int(s), int(t)) for s, t in seed_lex]
        if not pairs:
            raise MappingError("no usable seed pairs: empty seed dictionary")
    n_seed = len(pairs)
    cut = config.vocab_cutoff
    xc, zc = x[:cut], z[:cut]

    keep = config.stochastic_keep_initial
    trace: list[TraceRecord] = []
    best_obj, best_w, best_dict, best_it = -np.inf, None, None, 0
    for it in range(1, config.max_iterations + 1):
        w, deficient = procrustes_info(x, z, pairs)
        with single_threaded_blas():
            xw = xc @ w
        induced = induce_dictionary(xw, zc, config, MaskRng(config.seed, it), keep, threads)
        obj = dictionary_objective(xw, zc, induced)
        trace.append(TraceRecord(it, obj, len(induced), keep, deficient))
        if callback is not None:
            callback(trace[-1], w)
        log.info("iteration %d: objective %.6f, dictionary %d, keep %.3f", it, obj, len(induced), keep)
        if obj - best_obj >= config.convergence_threshold:
            best_obj, best_w, best_dict, best_it = obj, w, induced, it
        elif keep >= 1.0:
            break
        else:
            keep = min(1.0, keep * config.stochastic_multiplier)
        pairs = induced

    d = x.shape[1]
    if config.advanced:
        w_src, w_trg = advanced_transform(x, z, best_dict, config)
    else:
        w_src, w_trg = best_w, np.eye(d)
    return MappingResult(w_src, w_trg, tuple(best_dict), tuple(trace), best_it, n_seed, oov)


def write_trace(trace: Sequence[TraceRecord], path, stamp: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for rec in trace:
            row = dict(stamp or {})
            row.update(asdict(rec))
            f.write(json.dumps(row, sort_keys=True) + "\n")


def read_trace(path) -> list[TraceRecord]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            row = json.loads(line)
            out.append(TraceRecord(row["iteration"], row["objective"], row["dict_size"],
                                   row["keep_prob"], row.get("rank_deficient", False)))
    return out
