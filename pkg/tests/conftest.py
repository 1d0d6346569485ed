from pathlib import Path

import numpy as np
import pytest

from xsrl.corpus import Corpus, PredicateFrame, Sentence, Token, UNIVERSAL_TAGS

DATA = Path(__file__).resolve().parent.parent / "data" / "toy"

ROLES = ("A0", "A1", "A2", "AM-TMP", "AM-LOC")
FORMS = ("alpha", "beta", "gamma", "delta", "kappa", "sigma", "tau", "omega")


@pytest.fixture(scope="session")
def toy_dir() -> Path:
    return DATA


def read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def random_sentence(rng: np.random.Generator, max_len: int = 8,
                    max_frames: int = 2, lang: str = "EN") -> Sentence:
    n = int(rng.integers(1, max_len + 1))
    tokens = tuple(
        Token(index=i + 1,
              form=FORMS[rng.integers(len(FORMS))],
              lemma=FORMS[rng.integers(len(FORMS))],
              upos=UNIVERSAL_TAGS[rng.integers(len(UNIVERSAL_TAGS))],
              head=int(rng.integers(0, n + 1)),
              deprel="dep",
              misc="_")
        for i in range(n))
    n_frames = int(rng.integers(0, min(max_frames, n) + 1))
    pred_positions = rng.choice(n, size=n_frames, replace=False) + 1
    frames = []
    for pred in sorted(int(p) for p in pred_positions):
        candidates = [i for i in range(1, n + 1) if i != pred]
        rng.shuffle(candidates)
        n_args = int(rng.integers(0, min(3, len(candidates)) + 1))
        args = tuple(sorted(
            (int(c), ROLES[rng.integers(len(ROLES))]) for c in candidates[:n_args]))
        frames.append(PredicateFrame(pred_index=pred, sense=f"s.{rng.integers(1, 9)}",
                                     args=args))
    return Sentence(tokens=tokens, lang=lang, sent_id=f"r{rng.integers(1e6)}",
                    frames=tuple(frames))


def random_corpus(rng: np.random.Generator, n_sentences: int, **kwargs) -> Corpus:
    return Corpus.from_sentences(
        random_sentence(rng, **kwargs) for _ in range(n_sentences))
