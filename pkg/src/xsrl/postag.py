"""Per-word POS tag distributions p(t|f) for projection confidence scoring.

A count-based add-k emission model fit on any POS-tagged corpus, plus a
loader so externally computed distributions (e.g. from a stronger tagger)
can be dropped in.  Words never seen at fit time fall back to a uniform
distribution over the tagset.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from .corpus import UNIVERSAL_TAGS, Corpus

__all__ = [
    "PosError",
    "PosDistribution",
    "fit_pos_emission",
    "pos_prob",
    "save_pos_distribution",
    "load_pos_distribution",
]


class PosError(ValueError):
    """Raised for invalid tags or malformed distribution files."""


@dataclass
class PosDistribution:
    """Maps each known word to a probability vector over ``tagset``."""

    tagset: tuple[str, ...] = UNIVERSAL_TAGS
    dist: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if not self.tagset or len(set(self.tagset)) != len(self.tagset):
            raise PosError("tagset must be non-empty and duplicate-free")
        self._tag_index = {t: i for i, t in enumerate(self.tagset)}

    def tag_id(self, tag: str) -> int:
        try:
            return self._tag_index[tag]
        except KeyError:
            raise PosError(f"unknown POS tag {tag!r}") from None


def fit_pos_emission(tagged: Corpus, k: float = 0.1) -> PosDistribution:
    """Fit p(t|f) = (count(f,t) + k) / (count(f) + k * |tagset|).

    The tagset is the union of observed tags and the 17 universal tags;
    "_" marks an untagged token and is skipped.
    """
    if k < 0:
        raise PosError(f"smoothing constant must be >= 0, got {k}")
    if not tagged.sentences:
        raise PosError("empty corpus")
    pair_counts: dict[str, Counter[str]] = defaultdict(Counter)
    observed: set[str] = set()
    for sent in tagged.sentences:
        for tok in sent.tokens:
            if tok.upos == "_":
                continue
            pair_counts[tok.form][tok.upos] += 1
            observed.add(tok.upos)
    tagset = tuple(sorted(observed | set(UNIVERSAL_TAGS)))
    dist: dict[str, np.ndarray] = {}
    for word, tags in pair_counts.items():
        counts = np.array([tags.get(t, 0) for t in tagset], dtype=np.float64)
        dist[word] = (counts + k) / (counts.sum() + k * len(tagset))
    return PosDistribution(tagset=tagset, dist=dist)


def pos_prob(dist: PosDistribution, word: str, tag: str) -> float:
    """p(tag|word); uniform 1/|tagset| for words not in the distribution."""
    idx = dist.tag_id(tag)
    vec = dist.dist.get(word)
    if vec is None:
        return 1.0 / len(dist.tagset)
    return float(vec[idx])


def save_pos_distribution(dist: PosDistribution, path: str) -> None:
    """Write "tagset\\t<comma-joined tags>" then sorted "word\\ttag\\tprob" rows.

    Zero-probability rows are omitted.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("tagset\t" + ",".join(dist.tagset) + "\n")
        for word in sorted(dist.dist):
            vec = dist.dist[word]
            for tag, p in zip(dist.tagset, vec):
                if p != 0.0:
                    fh.write(f"{word}\t{tag}\t{float(p)!r}\n")


def load_pos_distribution(path: str) -> PosDistribution:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if not lines or not lines[0]:
        return PosDistribution()
    header = lines[0].split("\t")
    if len(header) != 2 or header[0] != "tagset":
        raise PosError("line 1: expected 'tagset\\t<comma-joined tags>' header")
    dist = PosDistribution(tagset=tuple(header[1].split(",")))
    rows: dict[str, np.ndarray] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise PosError(f"line {lineno}: expected 'word\\ttag\\tprob'")
        word, tag, text = fields
        try:
            p = float(text)
        except ValueError:
            raise PosError(f"line {lineno}: malformed probability {text!r}") from None
        if not 0.0 <= p <= 1.0:
            raise PosError(f"line {lineno}: probability out of range: {text}")
        vec = rows.setdefault(word, np.zeros(len(dist.tagset), dtype=np.float64))
        vec[dist.tag_id(tag)] = p
    for word, vec in rows.items():
        total = vec.sum()
        if total > 1.0 + 1e-6:
            raise PosError(f"probabilities for word {word!r} sum to {total}, above 1")
        if total < 1.0 - 1e-6:
            raise PosError(f"probabilities for word {word!r} sum to {total}, below 1")
    dist.dist = rows
    return dist
