"""Pure-Python (numpy) implementations of the numeric hot loops.

This is the fallback backend used when the compiled extension is not
available; see `nomadj.kernels` for the selection logic. Both backends take
the same array arguments and must agree up to last-bit summation noise.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def viterbi_kernel(emit, start, trans, stop):
    """Best-scoring state path through a bigram lattice.

    emit: (n, T) per-position log emission scores; start: (T,) log scores of
    entering each state first; trans: (T, T) log transition scores
    prev -> next; stop: (T,) log scores of ending in each state.
    Returns (path, score) where path is a list of state indices. Score ties
    resolve to the lowest state index at every decision.
    """
    n, n_states = emit.shape
    delta = start + emit[0]
    backs = np.empty((n, n_states), dtype=np.intp)
    cols = np.arange(n_states)
    for i in range(1, n):
        scores = delta[:, None] + trans
        best_prev = np.argmax(scores, axis=0)  # first max = lowest index
        backs[i] = best_prev
        delta = scores[best_prev, cols] + emit[i]
    final = delta + stop
    state = int(np.argmax(final))
    score = float(final[state])
    path = [0] * n
    path[n - 1] = state
    for i in range(n - 1, 0, -1):
        state = int(backs[i, state])
        path[i - 1] = state
    return path, score


def maxent_obj_grad_kernel(indptr, indices, gold, weights, want_grad=True):
    """Conditional log-likelihood (and gradient) of a softmax classifier.

    Examples are rows of a binary CSR matrix (indptr/indices) over predicate
    ids; ``weights`` is (P, K) with one weight per (predicate, label) pair.
    Returns (loglik, grad) with grad = observed - expected feature counts,
    or (loglik, None) when want_grad is false. No regularization here.
    """
    n_examples = gold.shape[0]
    n_predicates, n_labels = weights.shape
    if n_examples == 0:
        return 0.0, (np.zeros_like(weights) if want_grad else None)
    data = np.ones(indices.shape[0])
    x = sp.csr_matrix((data, indices, indptr), shape=(n_examples, n_predicates))
    scores = x @ weights
    high = scores.max(axis=1, keepdims=True)
    expd = np.exp(scores - high)
    z = expd.sum(axis=1)
    log_z = high[:, 0] + np.log(z)
    rows = np.arange(n_examples)
    loglik = float(scores[rows, gold].sum() - log_z.sum())
    if not want_grad:
        return loglik, None
    delta = -(expd / z[:, None])
    delta[rows, gold] += 1.0
    grad = np.asarray(x.T @ delta)
    return loglik, grad
