"""The role labeler: feature embedding, language-conditioned BiLSTM, CRF.

Two variants share all code paths.  BASIC owns its recurrent parameters
as one flat trainable vector.  PGN derives that vector per sentence from
the sentence's language: a parameter-generation matrix maps the language
embedding to the full flattened BiLSTM weight block, so each language
gets its own encoder while sharing the generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..corpus import UNIVERSAL_TAGS, Corpus, PredicateFrame, Sentence
from . import crf
from .lstm import LstmSpec, bilstm_backward, bilstm_forward

__all__ = [
    "ModelError",
    "ModelConfig",
    "Vocabulary",
    "TrainingExample",
    "SrlModel",
    "examples_from_corpus",
    "init_model",
    "build_features",
    "pgn_params",
    "encode",
    "crf_neg_log_likelihood",
    "viterbi_decode",
    "loss_and_gradients",
    "predict",
]

UNK = "<unk>"
OUTSIDE = "O"
BASIC = "basic"
PGN = "pgn"


class ModelError(ValueError):
    """Raised for invalid model configuration or inputs."""


@dataclass
class ModelConfig:
    word_dim: int = 300
    pos_dim: int = 100
    pred_dim: int = 100
    lang_dim: int = 32
    hidden: int = 650
    layers: int = 3
    label_count: int = 0
    language_count: int = 0
    variant: str = PGN
    learning_rate: float = 0.0005
    batch_size: int = 50
    epochs: int = 80
    clip_norm: float = 5.0
    train_word_table: bool = True
    dtype: str = "float64"

    def __post_init__(self):
        if self.variant not in (BASIC, PGN):
            raise ModelError(f"unknown variant {self.variant!r}")
        for name in ("word_dim", "pos_dim", "pred_dim", "hidden", "layers"):
            if getattr(self, name) < 1:
                raise ModelError(f"{name} must be >= 1")
        if self.variant == PGN and self.lang_dim < 1:
            raise ModelError("lang_dim must be >= 1")

    @property
    def feature_dim(self) -> int:
        return self.word_dim + self.pos_dim + self.pred_dim

    def lstm_spec(self) -> LstmSpec:
        return LstmSpec(input_dim=self.feature_dim, hidden=self.hidden, layers=self.layers)


@dataclass(frozen=True)
class Vocabulary:
    """String-to-index maps shared by training, decoding and checkpoints."""

    words: tuple[str, ...]
    pos_tags: tuple[str, ...]
    labels: tuple[str, ...]
    languages: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "_word_id", {w: i for i, w in enumerate(self.words)})
        object.__setattr__(self, "_pos_id", {p: i for i, p in enumerate(self.pos_tags)})
        object.__setattr__(self, "_label_id", {l: i for i, l in enumerate(self.labels)})
        object.__setattr__(self, "_lang_id", {l: i for i, l in enumerate(self.languages)})

    @classmethod
    def from_corpus(cls, corpus: Corpus) -> "Vocabulary":
        forms = sorted({t.form for s in corpus.sentences for t in s.tokens})
        labels = sorted(set(corpus.role_inventory) | {OUTSIDE})
        langs = sorted({s.lang for s in corpus.sentences})
        return cls(
            words=(UNK, *forms),
            pos_tags=(*sorted(UNIVERSAL_TAGS), "_"),
            labels=tuple(labels),
            languages=tuple(langs),
        )

    def word_id(self, form: str) -> int:
        return self._word_id.get(form, 0)

    def pos_id(self, upos: str) -> int:
        return self._pos_id.get(upos, self._pos_id["_"])

    def label_id(self, label: str) -> int:
        try:
            return self._label_id[label]
        except KeyError:
            raise ModelError(f"unknown role label {label!r}") from None

    def lang_id(self, lang: str) -> int:
        try:
            return self._lang_id[lang]
        except KeyError:
            raise ModelError(f"unknown language ID {lang!r}") from None


@dataclass(frozen=True)
class TrainingExample:
    """One (sentence, predicate) pair with its per-token gold role sequence."""

    sentence: Sentence
    frame: PredicateFrame
    labels: tuple[str, ...]


def examples_from_corpus(corpus: Corpus) -> list[TrainingExample]:
    out = []
    for sent in corpus.sentences:
        for frame in sent.frames:
            roles = dict(frame.args)
            labels = tuple(roles.get(t.index, OUTSIDE) for t in sent.tokens)
            out.append(TrainingExample(sentence=sent, frame=frame, labels=labels))
    return out


@dataclass
class SrlModel:
    """Trainable parameters plus the configuration and vocab that shaped them.

    ``params`` maps tensor names to arrays: word_table, pos_table,
    pred_table, crf_emission, crf_transition, and either bilstm (BASIC)
    or lang_table + w_pgn (PGN).
    """

    config: ModelConfig
    vocab: Vocabulary
    params: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def word_table(self) -> np.ndarray:
        return self.params["word_table"]

    @property
    def lang_table(self) -> np.ndarray:
        return self.params["lang_table"]

    @property
    def w_pgn(self) -> np.ndarray:
        return self.params["w_pgn"]


def init_model(config: ModelConfig, vocab: Vocabulary, seed: int = 42,
               word_table: np.ndarray | None = None) -> SrlModel:
    """Seeded initialization: uniform +-0.1, forget-gate biases at 1.0.

    For PGN the recurrent parameters are generated, so the forget-bias
    rule applies only to the BASIC variant's stored vector.  Passing
    ``word_table`` installs pretrained vectors instead of random ones.
    """
    rng = np.random.default_rng(seed)
    dtype = np.dtype(config.dtype)
    config = replace(config,
                     label_count=len(vocab.labels),
                     language_count=len(vocab.languages))
    spec = config.lstm_spec()

    def uniform(*shape):
        return rng.uniform(-0.1, 0.1, shape).astype(dtype, copy=False)

    params: dict[str, np.ndarray] = {}
    if word_table is not None:
        if word_table.shape != (len(vocab.words), config.word_dim):
            raise ModelError(
                f"word table shape {word_table.shape} does not match vocab "
                f"({len(vocab.words)}, {config.word_dim})")
        params["word_table"] = word_table.astype(dtype, copy=True)
    else:
        params["word_table"] = uniform(len(vocab.words), config.word_dim)
    params["pos_table"] = uniform(len(vocab.pos_tags), config.pos_dim)
    params["pred_table"] = uniform(2, config.pred_dim)
    if config.variant == BASIC:
        flat = uniform(spec.total_params)
        for start, end in spec.forget_bias_offsets():
            flat[start:end] = 1.0
        params["bilstm"] = flat
    else:
        if not vocab.languages:
            raise ModelError("PGN variant needs at least one language")
        params["lang_table"] = uniform(len(vocab.languages), config.lang_dim)
        params["w_pgn"] = uniform(spec.total_params, config.lang_dim)
    params["crf_emission"] = uniform(len(vocab.labels), 2 * config.hidden)
    params["crf_transition"] = uniform(len(vocab.labels) + 2, len(vocab.labels) + 2)
    return SrlModel(config=config, vocab=vocab, params=params)


def _feature_ids(model: SrlModel, sentence: Sentence, pred_index: int):
    if not 1 <= pred_index <= len(sentence.tokens):
        raise ModelError(
            f"predicate index {pred_index} outside 1..{len(sentence.tokens)}")
    vocab = model.vocab
    word_ids = np.array([vocab.word_id(t.form) for t in sentence.tokens])
    pos_ids = np.array([vocab.pos_id(t.upos) for t in sentence.tokens])
    pred_ids = np.array([1 if t.index == pred_index else 0 for t in sentence.tokens])
    return word_ids, pos_ids, pred_ids


def build_features(model: SrlModel, example: TrainingExample) -> np.ndarray:
    """Concatenated word/POS/predicate-indicator embeddings, one row per token."""
    word_ids, pos_ids, pred_ids = _feature_ids(
        model, example.sentence, example.frame.pred_index)
    return np.concatenate([
        model.params["word_table"][word_ids],
        model.params["pos_table"][pos_ids],
        model.params["pred_table"][pred_ids],
    ], axis=1)


def pgn_params(w_pgn: np.ndarray, lang_embedding: np.ndarray) -> np.ndarray:
    """Generate the flattened recurrent parameters for one language."""
    if w_pgn.ndim != 2 or lang_embedding.shape != (w_pgn.shape[1],):
        raise ModelError(
            f"cannot generate parameters: {w_pgn.shape} x {lang_embedding.shape}")
    return w_pgn @ lang_embedding


def _recurrent_vector(model: SrlModel, lang: str) -> tuple[np.ndarray, int]:
    if model.config.variant == BASIC:
        return model.params["bilstm"], -1
    lid = model.vocab.lang_id(lang)
    return pgn_params(model.params["w_pgn"], model.params["lang_table"][lid]), lid


def encode(model: SrlModel, features: np.ndarray, lang: str = "") -> np.ndarray:
    """Run the (possibly language-generated) BiLSTM stack over feature rows."""
    flat, _ = _recurrent_vector(model, lang)
    states, _ = bilstm_forward(model.config.lstm_spec(), flat, features)
    return states


def crf_neg_log_likelihood(model: SrlModel, states: np.ndarray, labels) -> float:
    """CRF loss for one encoded sentence and its gold role sequence."""
    label_ids = [model.vocab.label_id(l) for l in labels]
    emissions = states @ model.params["crf_emission"].T
    return crf.neg_log_likelihood(emissions, model.params["crf_transition"], label_ids)


def viterbi_decode(model: SrlModel, states: np.ndarray) -> list[str]:
    emissions = states @ model.params["crf_emission"].T
    path = crf.viterbi(emissions, model.params["crf_transition"])
    return [model.vocab.labels[i] for i in path]


def loss_and_gradients(model: SrlModel, example: TrainingExample,
                       ) -> tuple[float, dict[str, np.ndarray]]:
    """Loss plus gradients for every parameter tensor, one example."""
    config = model.config
    spec = config.lstm_spec()
    word_ids, pos_ids, pred_ids = _feature_ids(
        model, example.sentence, example.frame.pred_index)
    features = np.concatenate([
        model.params["word_table"][word_ids],
        model.params["pos_table"][pos_ids],
        model.params["pred_table"][pred_ids],
    ], axis=1)
    flat, lid = _recurrent_vector(model, example.sentence.lang)
    states, caches = bilstm_forward(spec, flat, features)
    emission_w = model.params["crf_emission"]
    emissions = states @ emission_w.T
    label_ids = [model.vocab.label_id(l) for l in example.labels]
    loss, d_emissions, d_trans = crf.nll_gradients(
        emissions, model.params["crf_transition"], label_ids)

    grads = {name: np.zeros_like(p) for name, p in model.params.items()}
    grads["crf_transition"] += d_trans
    grads["crf_emission"] += d_emissions.T @ states
    d_states = d_emissions @ emission_w
    d_features, d_flat = bilstm_backward(spec, flat, caches, d_states)
    if config.variant == BASIC:
        grads["bilstm"] += d_flat
    else:
        grads["w_pgn"] += np.outer(d_flat, model.params["lang_table"][lid])
        grads["lang_table"][lid] += model.params["w_pgn"].T @ d_flat
    w, p = config.word_dim, config.pos_dim
    np.add.at(grads["word_table"], word_ids, d_features[:, :w])
    np.add.at(grads["pos_table"], pos_ids, d_features[:, w:w + p])
    np.add.at(grads["pred_table"], pred_ids, d_features[:, w + p:])
    return loss, grads


def predict(model: SrlModel, sentence: Sentence, pred_index: int,
            lang: str = "") -> PredicateFrame:
    """Label one predicate's arguments; the predicate position itself never
    becomes an argument."""
    example = TrainingExample(
        sentence=sentence,
        frame=PredicateFrame(pred_index=pred_index),
        labels=(),
    )
    states = encode(model, build_features(model, example), lang)
    labels = viterbi_decode(model, states)
    args = tuple(
        (i + 1, label) for i, label in enumerate(labels)
        if label != OUTSIDE and i + 1 != pred_index)
    sense = "_"
    for frame in sentence.frames:
        if frame.pred_index == pred_index:
            sense = frame.sense
            break
    return PredicateFrame(pred_index=pred_index, sense=sense, args=args)
