"""Plain-numpy training loops; the reference for the numba backend.

Updates are applied pair by pair in dataset order (order-dependent SGD), so
results are deterministic for a fixed input. The numba backend mirrors this
code statement for statement.
"""

import numpy as np


def softmax_epoch(win, wout, contexts, lengths, targets, lr):
    """One full-softmax epoch over all pairs; returns summed loss."""
    total = 0.0
    for i in range(targets.shape[0]):
        L = lengths[i]
        t = targets[i]
        idx = contexts[i, :L]
        h = win[idx].sum(axis=0) / L
        z = wout @ h
        z = z - z.max()
        p = np.exp(z)
        p /= p.sum()
        total += -np.log(p[t] + 1e-12)
        g = p
        g[t] -= 1.0
        dh = g @ wout
        wout -= lr * np.outer(g, h)
        upd = (lr / L) * dh
        for j in range(L):
            win[idx[j]] -= upd
    return total


def negsamp_epoch(win, wout, contexts, lengths, targets, negatives, lr):
    """One negative-sampling epoch; negatives are pre-drawn per pair."""
    total = 0.0
    for i in range(targets.shape[0]):
        L = lengths[i]
        t = targets[i]
        idx = contexts[i, :L]
        h = win[idx].sum(axis=0) / L
        dh = np.zeros(win.shape[1])

        z = wout[t] @ h
        p = 1.0 / (1.0 + np.exp(-z))
        total += -np.log(p + 1e-12)
        g = p - 1.0
        dh += g * wout[t]
        wout[t] = wout[t] - lr * (g * h)

        for k in range(negatives.shape[1]):
            v = negatives[i, k]
            if v == t:
                continue
            z = wout[v] @ h
            p = 1.0 / (1.0 + np.exp(-z))
            total += -np.log(1.0 - p + 1e-12)
            dh += p * wout[v]
            wout[v] = wout[v] - lr * (p * h)

        upd = (lr / L) * dh
        for j in range(L):
            win[idx[j]] -= upd
    return total
