"""Benchmark the CBOW training kernels: numpy backend vs numba backend.

Both backends run the same seeded training on the same synthetic corpus,
so besides wall time the script reports the largest element difference
between the two resulting embedding matrices.

Run from a file (not python -c): the jit cache needs a real module path.
"""

import argparse
import os
import time

import numpy as np

from namebugs.embeddings import CbowConfig, CbowDataset, build_cbow_dataset, train_cbow
from namebugs.kernels import BACKEND_ENV, backend_name, get_backend
from namebugs.naming import build_vocabulary


def synthetic_streams(n_tokens, n_occurrences, seed):
    """Zipf-weighted random name streams, 200 tokens per stream."""
    rng = np.random.default_rng(seed)
    weights = 1.0 / np.arange(1, n_tokens + 1) ** 0.9
    p = weights / weights.sum()
    names = [f"ID:tok{i:05d}" for i in range(n_tokens)]
    streams = []
    remaining = n_occurrences
    while remaining > 0:
        length = min(200, remaining)
        draw = rng.choice(n_tokens, size=length, p=p)
        streams.append([names[j] for j in draw])
        remaining -= length
    return streams


def timed_train(backend, dataset, config, vocab):
    os.environ[BACKEND_ENV] = backend
    # warm up outside the timed region (jit compile, allocator)
    warm = CbowDataset(
        contexts=dataset.contexts[:64],
        lengths=dataset.lengths[:64],
        targets=dataset.targets[:64],
        window=dataset.window,
    )
    train_cbow(warm, config, vocab)
    start = time.perf_counter()
    matrix = train_cbow(dataset, config, vocab)
    elapsed = time.perf_counter() - start
    return matrix, elapsed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tokens", type=int, default=1500)
    ap.add_argument("--occurrences", type=int, default=20000)
    ap.add_argument("--dim", type=int, default=64)
    ap.add_argument("--window", type=int, default=10)
    ap.add_argument("--epochs", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    saved = os.environ.get(BACKEND_ENV)
    streams = synthetic_streams(args.tokens, args.occurrences, args.seed)
    vocab = build_vocabulary(streams, args.tokens + 2)
    dataset = build_cbow_dataset(streams, vocab, args.window)
    print(f"cbow benchmark: V={len(vocab)} pairs={len(dataset)} "
          f"dim={args.dim} window={args.window} epochs={args.epochs}")
    default = backend_name(get_backend())
    print(f"default backend on this machine: {default}")

    try:
        for objective in ("full-softmax", "negative-sampling(5)"):
            config = CbowConfig(
                window=args.window, dim=args.dim, epochs=args.epochs,
                learningRate=0.05, seed=args.seed, objective=objective)
            print(f"objective={objective}")
            results = {}
            for backend in ("numpy", "numba"):
                try:
                    matrix, elapsed = timed_train(
                        backend, dataset, config, vocab)
                except Exception as exc:
                    print(f"  {backend:<6} unavailable ({exc})")
                    continue
                rate = args.epochs * len(dataset) / elapsed
                results[backend] = (matrix, elapsed)
                print(f"  {backend:<6} {elapsed:8.3f} s  "
                      f"({rate:,.0f} pairs/s)")
            if len(results) == 2:
                speedup = results["numpy"][1] / results["numba"][1]
                delta = float(np.max(np.abs(
                    results["numpy"][0].vectors
                    - results["numba"][0].vectors)))
                print(f"  speedup {speedup:.1f}x  max |delta| {delta:.3g}")
    finally:
        if saved is None:
            os.environ.pop(BACKEND_ENV, None)
        else:
            os.environ[BACKEND_ENV] = saved


if __name__ == "__main__":
    main()
