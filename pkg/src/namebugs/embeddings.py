"""CBOW token embeddings, a random-vector baseline, and similarity queries.

The model predicts each name token from the mean of its window context and
keeps the input-side matrix as the embedding. Full softmax is the default
objective (tractable at the vocabulary sizes this toolkit targets and easy
to reproduce exactly); negative sampling is available through the config.
"""

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CollisionExhaustion,
    EmptyDataset,
    InputContractError,
    UnknownToken,
)
from .kernels import get_backend
from .naming import NONE, NONE_INDEX, UNK, UNK_INDEX

_OBJECTIVE_RE = re.compile(r"^negative-sampling(?:\((?:k=)?(\d+)\))?$")


@dataclass
class CbowConfig:
    window: int = 20
    dim: int = 200
    epochs: int = 5
    learningRate: float = 0.05
    seed: int = 0
    objective: str = "full-softmax"

    def __post_init__(self):
        if self.window <= 0 or self.window % 2 != 0:
            raise InputContractError("window must be an even positive integer")
        if self.dim < 2:
            raise InputContractError("embedding dimension must be >= 2")
        if self.learningRate <= 0:
            raise InputContractError("learningRate must be positive")
        if self.epochs < 0:
            raise InputContractError("epochs must be non-negative")
        self.objective_kind()  # validate

    def objective_kind(self):
        """Return ("full-softmax", 0) or ("negative-sampling", k)."""
        if self.objective == "full-softmax":
            return "full-softmax", 0
        m = _OBJECTIVE_RE.match(self.objective)
        if m is None:
            raise InputContractError(
                f"unknown objective {self.objective!r}"
            )
        return "negative-sampling", int(m.group(1) or 5)


@dataclass(eq=False)
class EmbeddingMatrix:
    vectors: np.ndarray  # |V| x e, float64
    tokens: tuple
    vocabChecksum: str
    lossHistory: tuple = ()
    _index: dict = field(default=None, repr=False)

    def __post_init__(self):
        if self._index is None:
            self._index = {tok: i for i, tok in enumerate(self.tokens)}

    @property
    def e(self):
        return self.vectors.shape[1]

    def __len__(self):
        return self.vectors.shape[0]

    def __contains__(self, token):
        return token in self._index

    def index_of(self, token):
        return self._index.get(token, UNK_INDEX)

    def row(self, token):
        return self.vectors[self.index_of(token)]


@dataclass
class CbowDataset:
    """Padded context windows: row i holds lengths[i] valid indices."""
    contexts: np.ndarray  # N x w, int64, zero-padded past lengths[i]
    lengths: np.ndarray   # N, int64
    targets: np.ndarray   # N, int64
    window: int

    def __len__(self):
        return self.targets.shape[0]

    def pairs(self):
        for i in range(len(self)):
            yield (
                tuple(self.contexts[i, :self.lengths[i]]),
                int(self.targets[i]),
            )


def build_cbow_dataset(streams, vocab, w):
    """One (context, target) pair per in-vocabulary name occurrence.

    Contexts take up to w/2 predecessors and w/2 successors (all token
    kinds, out-of-vocabulary ones as UNK) and truncate at stream ends;
    pairs with empty contexts or UNK targets are dropped.
    """
    if w <= 0 or w % 2 != 0:
        raise InputContractError("window must be an even positive integer")
    half = w // 2
    ctx_rows = []
    lengths = []
    targets = []
    for stream in streams:
        idx = [vocab.index_of(tok) for tok in stream]
        for i, tok in enumerate(stream):
            if not (tok.startswith("ID:") or tok.startswith("LIT:")):
                continue
            t = idx[i]
            if t == UNK_INDEX:
                continue
            ctx = idx[max(0, i - half):i] + idx[i + 1:i + 1 + half]
            if not ctx:
                continue
            ctx_rows.append(ctx + [0] * (w - len(ctx)))
            lengths.append(len(ctx))
            targets.append(t)
    n = len(targets)
    return CbowDataset(
        contexts=np.array(ctx_rows, dtype=np.int64).reshape(n, w),
        lengths=np.array(lengths, dtype=np.int64),
        targets=np.array(targets, dtype=np.int64),
        window=w,
    )


def _noise_distribution(vocab):
    """Unigram^0.75 over vocabulary counts; reserved rows get zero mass."""
    counts = np.array([count for _, count in vocab.entries], dtype=np.float64)
    counts[UNK_INDEX] = 0.0
    counts[NONE_INDEX] = 0.0
    weights = counts ** 0.75
    total = weights.sum()
    if total <= 0:
        weights = np.ones(len(vocab))
        weights[UNK_INDEX] = 0.0
        weights[NONE_INDEX] = 0.0
        total = weights.sum()
    return weights / total


def train_cbow(dataset, config, vocab):
    """SGD over the dataset in order; deterministic per (seed, dataset)."""
    n = len(dataset)
    if n == 0:
        raise EmptyDataset("CBOW dataset is empty")
    V = len(vocab)
    e = config.dim
    rng = np.random.default_rng(config.seed)
    win = rng.uniform(-0.5 / e, 0.5 / e, size=(V, e))
    win[NONE_INDEX] = 0.0
    wout = np.zeros((V, e))
    kind, k = config.objective_kind()
    backend = get_backend()
    lr = config.learningRate
    noise = _noise_distribution(vocab) if kind == "negative-sampling" else None

    losses = []
    for _ in range(config.epochs):
        if kind == "full-softmax":
            total = backend.softmax_epoch(
                win, wout, dataset.contexts, dataset.lengths,
                dataset.targets, lr,
            )
        else:
            negatives = rng.choice(V, size=(n, k), p=noise).astype(np.int64)
            total = backend.negsamp_epoch(
                win, wout, dataset.contexts, dataset.lengths,
                dataset.targets, negatives, lr,
            )
        losses.append(total / n)

    win[NONE_INDEX] = 0.0
    return EmbeddingMatrix(
        vectors=win,
        tokens=vocab.tokens,
        vocabChecksum=vocab.checksum,
        lossHistory=tuple(losses),
    )


def random_embedding(vocab, e, seed):
    """Unique random binary vector per token; the no-learning baseline."""
    if e < 1:
        raise InputContractError("embedding dimension must be >= 1")
    V = len(vocab)
    if 2 ** e < V:
        raise CollisionExhaustion(
            f"cannot draw {V} unique binary vectors of length {e}"
        )
    rng = np.random.default_rng(seed)
    vectors = np.zeros((V, e))
    seen = {(0,) * e}  # the zero vector stays reserved for NONE
    for i in range(V):
        if i == NONE_INDEX:
            continue
        for _ in range(100000):
            row = rng.integers(0, 2, size=e)
            key = tuple(int(b) for b in row)
            if key not in seen:
                seen.add(key)
                vectors[i] = row
                break
        else:
            raise CollisionExhaustion(
                f"rejection sampling exhausted at vector {i} of {V}"
            )
    return EmbeddingMatrix(
        vectors=vectors, tokens=vocab.tokens, vocabChecksum=vocab.checksum
    )


def cosine(a, b):
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def nearest(matrix, token, k):
    """k most-similar tokens by cosine, excluding the query, UNK, and NONE."""
    if k < 1:
        raise InputContractError("k must be >= 1")
    if token in (UNK, NONE):
        raise UnknownToken(f"reserved token {token!r} has no neighbors")
    if token not in matrix:
        raise UnknownToken(f"token {token!r} is not in the vocabulary")
    qi = matrix.index_of(token)
    q = matrix.vectors[qi]
    qn = np.linalg.norm(q)
    sims = np.zeros(len(matrix))
    if qn > 0:
        norms = np.linalg.norm(matrix.vectors, axis=1)
        nz = norms > 0
        sims[nz] = (matrix.vectors[nz] @ q) / (norms[nz] * qn)
    order = sorted(
        (i for i in range(len(matrix))
         if i not in (qi, UNK_INDEX, NONE_INDEX)),
        key=lambda i: (-sims[i], i),
    )
    return [(matrix.tokens[i], float(sims[i])) for i in order[:k]]
