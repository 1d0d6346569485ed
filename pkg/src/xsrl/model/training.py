"""Deterministic seeded training and finite-difference gradient validation."""

from __future__ import annotations

import math

import numpy as np

from ..corpus import Corpus
from .network import (
    ModelConfig,
    ModelError,
    SrlModel,
    TrainingExample,
    Vocabulary,
    examples_from_corpus,
    init_model,
    loss_and_gradients,
)

__all__ = ["train", "gradient_check"]


class _Adam:
    def __init__(self, params: dict[str, np.ndarray], learning_rate: float,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = learning_rate
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.step = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def update(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray],
               skip: set[str]) -> None:
        self.step += 1
        bias1 = 1.0 - self.beta1 ** self.step
        bias2 = 1.0 - self.beta2 ** self.step
        for name in sorted(params):
            if name in skip:
                continue
            g = grads[name]
            m = self.m[name]
            v = self.v[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            params[name] -= self.lr * (m / bias1) / (np.sqrt(v / bias2) + self.eps)


def _clip_global_norm(grads: dict[str, np.ndarray], max_norm: float) -> None:
    total = math.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if max_norm > 0 and total > max_norm:
        scale = max_norm / total
        for g in grads.values():
            g *= scale


def train(corpus: Corpus, config: ModelConfig, seed: int = 42,
          word_table: np.ndarray | None = None,
          vocab: Vocabulary | None = None,
          ) -> tuple[SrlModel, list[float]]:
    """Train a model on a (possibly mixed-language) corpus.

    One example per (sentence, predicate).  Epoch order is shuffled by a
    generator seeded with ``seed``; losses are averaged per batch and the
    returned log holds the mean loss of every epoch.  Identical corpus,
    config and seed give bit-identical models.
    """
    examples = examples_from_corpus(corpus)
    if not examples:
        raise ModelError("corpus has no predicate frames to train on")
    if vocab is None:
        vocab = Vocabulary.from_corpus(corpus)
    model = init_model(config, vocab, seed=seed, word_table=word_table)
    config = model.config
    frozen = set() if config.train_word_table else {"word_table"}
    optimizer = _Adam(model.params, config.learning_rate)
    rng = np.random.default_rng(seed + 1)

    losses: list[float] = []
    for _ in range(config.epochs):
        order = rng.permutation(len(examples))
        epoch_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = order[start:start + config.batch_size]
            total: dict[str, np.ndarray] = {
                name: np.zeros_like(p) for name, p in model.params.items()}
            for idx in batch:
                loss, grads = loss_and_gradients(model, examples[int(idx)])
                epoch_loss += loss
                for name, g in grads.items():
                    total[name] += g
            for g in total.values():
                g /= len(batch)
            _clip_global_norm(total, config.clip_norm)
            optimizer.update(model.params, total, frozen)
        losses.append(epoch_loss / len(examples))
    return model, losses


def gradient_check(model: SrlModel, example: TrainingExample,
                   epsilon: float = 1e-5, samples: int = 200,
                   seed: int = 0) -> float:
    """Compare analytic gradients against central finite differences.

    Samples at least ``samples`` coordinates spread over every parameter
    tensor and returns the maximum relative error
    |g_a - g_n| / max(|g_a|, |g_n|, 1e-4).  Requires 64-bit parameters.
    """
    if any(p.dtype != np.float64 for p in model.params.values()):
        raise ModelError("gradient_check needs float64 parameters")
    _, analytic = loss_and_gradients(model, example)

    def loss_only() -> float:
        loss, _ = loss_and_gradients(model, example)
        return loss

    rng = np.random.default_rng(seed)
    total_size = sum(p.size for p in model.params.values())
    worst = 0.0
    for name in sorted(model.params):
        tensor = model.params[name]
        count = min(tensor.size, max(5, round(samples * tensor.size / total_size)))
        coords = rng.choice(tensor.size, size=count, replace=False)
        flat = tensor.reshape(-1)
        grad_flat = analytic[name].reshape(-1)
        for c in coords:
            original = flat[c]
            flat[c] = original + epsilon
            upper = loss_only()
            flat[c] = original - epsilon
            lower = loss_only()
            flat[c] = original
            numeric = (upper - lower) / (2.0 * epsilon)
            ga = float(grad_flat[c])
            rel = abs(ga - numeric) / max(abs(ga), abs(numeric), 1e-4)
            worst = max(worst, rel)
    return worst
