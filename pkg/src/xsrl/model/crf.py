"""Linear-chain CRF scoring, partition function, gradients and decoding.

Emissions ``o`` are (n, K) for K real labels.  The transition matrix is
(K+2, K+2): index K is the begin state entered before position 1, index
K+1 the end state left after position n.  Rows into BOS and out of EOS
are never used.  A sequence scores sum_i o[i, y_i] plus the chained
transitions including the boundary ones; probabilities normalize by the
partition sum over all K^n label sequences.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "gold_score",
    "log_partition",
    "neg_log_likelihood",
    "nll_gradients",
    "viterbi",
]


def _lse(x: np.ndarray, axis: int) -> np.ndarray:
    m = np.max(x, axis=axis)
    return m + np.log(np.sum(np.exp(x - np.expand_dims(m, axis)), axis=axis))


def gold_score(o: np.ndarray, trans: np.ndarray, labels) -> float:
    n, k = o.shape
    bos, eos = k, k + 1
    score = trans[bos, labels[0]] + o[0, labels[0]]
    for t in range(1, n):
        score += trans[labels[t - 1], labels[t]] + o[t, labels[t]]
    return float(score + trans[labels[n - 1], eos])


def forward_alphas(o: np.ndarray, trans: np.ndarray) -> np.ndarray:
    """Forward-algorithm log scores; alphas[t, j] sums paths ending in j at t."""
    n, k = o.shape
    alphas = np.empty_like(o)
    alphas[0] = o[0] + trans[k, :k]
    for t in range(1, n):
        alphas[t] = o[t] + _lse(alphas[t - 1][:, None] + trans[:k, :k], axis=0)
    return alphas


def log_partition(o: np.ndarray, trans: np.ndarray) -> float:
    k = o.shape[1]
    alphas = forward_alphas(o, trans)
    return float(_lse(alphas[-1] + trans[:k, k + 1], axis=0))


def neg_log_likelihood(o: np.ndarray, trans: np.ndarray, labels) -> float:
    """log Z minus the gold path score; always >= 0."""
    return log_partition(o, trans) - gold_score(o, trans, labels)


def nll_gradients(o: np.ndarray, trans: np.ndarray, labels):
    """Loss and its gradients w.r.t. emissions and transitions.

    The partition gradient is obtained by backpropagating through the
    forward recursion, which reproduces the marginal path statistics; the
    gold path then subtracts its indicator counts.
    """
    n, k = o.shape
    bos, eos = k, k + 1
    alphas = forward_alphas(o, trans)
    loss = float(_lse(alphas[-1] + trans[:k, eos], axis=0)) - gold_score(o, trans, labels)

    d_o = np.zeros_like(o)
    d_trans = np.zeros_like(trans)
    final = alphas[-1] + trans[:k, eos]
    d_alpha = np.exp(final - _lse(final, axis=0))
    d_trans[:k, eos] += d_alpha
    for t in range(n - 1, 0, -1):
        d_o[t] += d_alpha
        scores = alphas[t - 1][:, None] + trans[:k, :k]
        posterior = np.exp(scores - _lse(scores, axis=0)[None, :])
        d_trans[:k, :k] += posterior * d_alpha[None, :]
        d_alpha = posterior @ d_alpha
    d_o[0] += d_alpha
    d_trans[bos, :k] += d_alpha

    d_o[0, labels[0]] -= 1.0
    d_trans[bos, labels[0]] -= 1.0
    for t in range(1, n):
        d_o[t, labels[t]] -= 1.0
        d_trans[labels[t - 1], labels[t]] -= 1.0
    d_trans[labels[n - 1], eos] -= 1.0
    return loss, d_o, d_trans


def viterbi(o: np.ndarray, trans: np.ndarray) -> list[int]:
    """Highest-scoring label sequence; ties pick the lower label index."""
    n, k = o.shape
    delta = o[0] + trans[k, :k]
    back = np.empty((n, k), dtype=np.int64)
    for t in range(1, n):
        scores = delta[:, None] + trans[:k, :k]
        back[t] = np.argmax(scores, axis=0)
        delta = o[t] + np.max(scores, axis=0)
    last = int(np.argmax(delta + trans[:k, k + 1]))
    path = [last]
    for t in range(n - 1, 0, -1):
        last = int(back[t, last])
        path.append(last)
    path.reverse()
    return path
