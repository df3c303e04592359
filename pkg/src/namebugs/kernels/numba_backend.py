"""Numba-compiled training loops; mirrors numpy_backend statement for
statement (same update order and the same per-element arithmetic shape) so
the two backends agree to floating-point noise."""

import numpy as np
from numba import njit


@njit(cache=True)
def softmax_epoch(win, wout, contexts, lengths, targets, lr):
    n = targets.shape[0]
    V = wout.shape[0]
    e = wout.shape[1]
    total = 0.0
    for i in range(n):
        L = lengths[i]
        t = targets[i]
        h = np.zeros(e)
        for j in range(L):
            h += win[contexts[i, j]]
        h /= L
        z = wout @ h
        z = z - z.max()
        p = np.exp(z)
        p /= p.sum()
        total += -np.log(p[t] + 1e-12)
        g = p
        g[t] -= 1.0
        dh = g @ wout
        for v in range(V):
            gv = g[v]
            for d in range(e):
                wout[v, d] -= lr * (gv * h[d])
        upd = (lr / L) * dh
        for j in range(L):
            win[contexts[i, j]] -= upd
    return total


@njit(cache=True)
def negsamp_epoch(win, wout, contexts, lengths, targets, negatives, lr):
    n = targets.shape[0]
    e = wout.shape[1]
    total = 0.0
    for i in range(n):
        L = lengths[i]
        t = targets[i]
        h = np.zeros(e)
        for j in range(L):
            h += win[contexts[i, j]]
        h /= L
        dh = np.zeros(e)

        z = wout[t] @ h
        p = 1.0 / (1.0 + np.exp(-z))
        total += -np.log(p + 1e-12)
        g = p - 1.0
        for d in range(e):
            dh[d] += g * wout[t, d]
        for d in range(e):
            wout[t, d] = wout[t, d] - lr * (g * h[d])

        for k in range(negatives.shape[1]):
            v = negatives[i, k]
            if v == t:
                continue
            z = wout[v] @ h
            p = 1.0 / (1.0 + np.exp(-z))
            total += -np.log(1.0 - p + 1e-12)
            for d in range(e):
                dh[d] += p * wout[v, d]
            for d in range(e):
                wout[v, d] = wout[v, d] - lr * (p * h[d])

        upd = (lr / L) * dh
        for j in range(L):
            win[contexts[i, j]] -= upd
    return total
