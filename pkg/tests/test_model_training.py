import numpy as np
import pytest

from xsrl.corpus import Corpus, PredicateFrame, Sentence, Token
from xsrl.model import (
    BASIC,
    OUTSIDE,
    PGN,
    ModelConfig,
    ModelError,
    Vocabulary,
    build_features,
    encode,
    gradient_check,
    init_model,
    loss_and_gradients,
    train,
    viterbi_decode,
)
from xsrl.model.network import TrainingExample, examples_from_corpus


def sentence(forms, pred, roles, lang="EN"):
    tokens = tuple(Token(i + 1, f, f, "NOUN") for i, f in enumerate(forms))
    return Sentence(tokens=tokens, lang=lang,
                    frames=(PredicateFrame(pred, "x.01", tuple(roles)),))


@pytest.fixture
def mixed_corpus():
    return Corpus.from_sentences([
        sentence(["a", "b", "c"], 2, [(1, "A0"), (3, "A1")]),
        sentence(["c", "a", "b"], 2, [(1, "A1")], lang="DE"),
    ])


def grad_config(variant, layers):
    return ModelConfig(word_dim=8, pos_dim=4, pred_dim=4, lang_dim=4, hidden=8,
                       layers=layers, variant=variant)


@pytest.mark.parametrize("variant", [BASIC, PGN])
@pytest.mark.parametrize("layers", [1, 3])
def test_gradient_check_all_tensors(mixed_corpus, variant, layers):
    model = init_model(grad_config(variant, layers),
                       Vocabulary.from_corpus(mixed_corpus), seed=11)
    example = examples_from_corpus(mixed_corpus)[0]
    assert len(example.labels) == 3
    error = gradient_check(model, example, epsilon=1e-5, samples=220)
    assert error < 1e-4


def test_gradient_check_requires_float64(mixed_corpus):
    config = grad_config(BASIC, 1)
    config.dtype = "float32"
    model = init_model(config, Vocabulary.from_corpus(mixed_corpus), seed=1)
    example = examples_from_corpus(mixed_corpus)[0]
    with pytest.raises(ModelError, match="float64"):
        gradient_check(model, example)


def test_saturated_example_has_zero_gradients(mixed_corpus):
    """With a single label every path is the gold path: loss and grads vanish."""
    single = Corpus.from_sentences([sentence(["a", "b"], 1, [(2, "A0")])])
    vocab = Vocabulary(words=("<unk>", "a", "b"), pos_tags=("NOUN", "_"),
                       labels=("A0",), languages=("EN",))
    model = init_model(grad_config(BASIC, 1), vocab, seed=2)
    example = TrainingExample(single.sentences[0], single.sentences[0].frames[0],
                              ("A0", "A0"))
    loss, grads = loss_and_gradients(model, example)
    assert abs(loss) < 1e-12
    for g in grads.values():
        assert np.max(np.abs(g)) < 1e-8
    assert gradient_check(model, example, samples=50) < 1e-4


def overfit_f1(model, corpus):
    tp = fp = fn = 0
    for ex in examples_from_corpus(corpus):
        states = encode(model, build_features(model, ex), ex.sentence.lang)
        predicted = viterbi_decode(model, states)
        for gold, hyp in zip(ex.labels, predicted):
            if gold != OUTSIDE and hyp == gold:
                tp += 1
            elif gold == OUTSIDE and hyp != OUTSIDE:
                fp += 1
            elif gold != OUTSIDE:
                fn += 1
                if hyp != OUTSIDE:
                    fp += 1
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    return 2 * p * r / (p + r) if p + r else 0.0


def test_overfit_small_corpus():
    rng = np.random.default_rng(0)
    sentences = []
    for i in range(12):
        forms = [f"w{rng.integers(6)}" for _ in range(4)]
        sentences.append(sentence(forms, 2, [(1, "A0"), (4, "A1")]))
    corpus = Corpus.from_sentences(sentences)
    config = ModelConfig(word_dim=12, pos_dim=4, pred_dim=4, hidden=24, layers=1,
                         variant=BASIC, learning_rate=0.01, batch_size=6, epochs=60)
    model, losses = train(corpus, config, seed=5)
    assert losses[-1] < losses[0]
    assert overfit_f1(model, corpus) >= 0.99


def test_training_determinism(mixed_corpus):
    config = grad_config(PGN, 1)
    config.epochs, config.batch_size, config.learning_rate = 4, 2, 0.01
    m1, losses1 = train(mixed_corpus, config, seed=9)
    m2, losses2 = train(mixed_corpus, config, seed=9)
    assert losses1 == losses2
    for name in m1.params:
        assert np.array_equal(m1.params[name], m2.params[name])
    _, losses3 = train(mixed_corpus, config, seed=10)
    assert losses1 != losses3


def test_zero_frame_corpus_errors():
    empty = Corpus.from_sentences([Sentence(tokens=(Token(1, "a"),), lang="EN")])
    with pytest.raises(ModelError, match="no predicate frames"):
        train(empty, grad_config(BASIC, 1))


def test_overfit_all_outside_frame_predicts_empty_args():
    from xsrl.model import predict

    sentences = [
        sentence(["p", "q", "r"], 1, [(2, "A0")]),
        sentence(["p", "s", "r"], 1, []),  # gold roles all outside
    ]
    corpus = Corpus.from_sentences(sentences)
    config = ModelConfig(word_dim=8, pos_dim=4, pred_dim=4, hidden=16, layers=1,
                         variant=BASIC, learning_rate=0.02, batch_size=2, epochs=80)
    model, _ = train(corpus, config, seed=3)
    frame = predict(model, sentences[1], 1, "EN")
    assert frame.args == ()
    frame = predict(model, sentences[0], 1, "EN")
    assert frame.args == ((2, "A0"),)


def test_float32_mode_trains():
    corpus = Corpus.from_sentences([sentence(["a", "b"], 1, [(2, "A0")])])
    config = grad_config(BASIC, 1)
    config.dtype, config.epochs, config.batch_size = "float32", 2, 1
    model, losses = train(corpus, config, seed=1)
    assert model.params["bilstm"].dtype == np.float32
    assert all(np.isfinite(loss) for loss in losses)


def test_frozen_word_table_stays_put(mixed_corpus):
    config = grad_config(BASIC, 1)
    config.epochs, config.batch_size, config.train_word_table = 2, 2, False
    vocab = Vocabulary.from_corpus(mixed_corpus)
    table = np.arange(len(vocab.words) * config.word_dim,
                      dtype=np.float64).reshape(len(vocab.words), -1)
    model, _ = train(mixed_corpus, config, seed=1, word_table=table, vocab=vocab)
    assert np.array_equal(model.params["word_table"], table)
