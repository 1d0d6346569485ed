"""Lexical word-alignment probabilities a(f|e) via IBM Model 1 EM.

Each source word is explained by one target word of the parallel sentence
or by a reserved NULL token prepended to the target side.  The trained
table stores, per source word, a distribution over target words (NULL
included) summing to one.  ``best_target`` never proposes NULL: a source
word projects onto a concrete target token or not at all.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

__all__ = [
    "NULL_TOKEN",
    "AlignmentError",
    "ParallelPair",
    "AlignmentTable",
    "read_parallel_corpus",
    "ibm1_train",
    "align_prob",
    "best_target",
    "save_table",
    "load_table",
]

#: Reserved target-side token absorbing unaligned source words.
NULL_TOKEN = "<NULL>"


class AlignmentError(ValueError):
    """Raised for malformed parallel corpora or alignment-table files."""


@dataclass(frozen=True)
class ParallelPair:
    src_tokens: tuple[str, ...]
    tgt_tokens: tuple[str, ...]


@dataclass
class AlignmentTable:
    """Conditional translation probabilities keyed by (source, target).

    ``floor`` is returned for pairs not in the table.
    """

    probs: dict[tuple[str, str], float] = field(default_factory=dict)
    floor: float = 0.0

    @property
    def source_vocab(self) -> set[str]:
        return {e for e, _ in self.probs}

    @property
    def target_vocab(self) -> set[str]:
        return {f for _, f in self.probs}

    def null_mass(self, e: str) -> float:
        """Probability mass the source word assigns to the NULL token."""
        return self.probs.get((e, NULL_TOKEN), 0.0)


def read_parallel_corpus(data: bytes | str) -> list[ParallelPair]:
    """Read a fast_align-style bitext: one "src tokens ||| tgt tokens" per line."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    pairs: list[ParallelPair] = []
    for lineno, line in enumerate(data.split("\n"), start=1):
        if not line.strip():
            continue
        if "|||" not in line:
            raise AlignmentError(f"line {lineno}: expected 'src ||| tgt'")
        src_text, tgt_text = line.split("|||", 1)
        src = tuple(src_text.split())
        tgt = tuple(tgt_text.split())
        if not src or not tgt:
            raise AlignmentError(f"line {lineno}: empty side in parallel pair")
        pairs.append(ParallelPair(src, tgt))
    return pairs


def ibm1_train(pairs: list[ParallelPair], iterations: int, floor: float = 0.0,
               lowercase: bool = False,
               log: list[float] | None = None) -> AlignmentTable:
    """Train IBM Model 1 by EM and return the alignment table.

    A NULL token is prepended to every target sentence.  Per iteration the
    corpus log-likelihood sum_pairs sum_i log((1/(m+1)) sum_j a(f_j|e_i))
    is appended to ``log`` (it is non-decreasing).  Training is sequential
    and deterministic: identical inputs give bit-identical tables.
    """
    if iterations < 1:
        raise AlignmentError(f"iterations must be >= 1, got {iterations}")
    if not pairs:
        raise AlignmentError("empty pair list")
    for idx, pair in enumerate(pairs):
        if not pair.src_tokens or not pair.tgt_tokens:
            raise AlignmentError(f"pair {idx}: empty side")

    def norm(tok: str) -> str:
        return tok.lower() if lowercase else tok

    corpus = [
        ([norm(t) for t in p.src_tokens], [NULL_TOKEN] + [norm(t) for t in p.tgt_tokens])
        for p in pairs
    ]

    tgt_vocab: dict[str, None] = {}  # insertion-ordered set
    for _, tgt in corpus:
        for f in tgt:
            tgt_vocab.setdefault(f)
    uniform = 1.0 / len(tgt_vocab)

    probs: dict[tuple[str, str], float] = defaultdict(lambda: uniform)
    for _ in range(iterations):
        counts: dict[tuple[str, str], float] = defaultdict(float)
        totals: dict[str, float] = defaultdict(float)
        loglik = 0.0
        for src, tgt in corpus:
            inv_len = 1.0 / len(tgt)
            for e in src:
                denom = sum(probs[(e, f)] for f in tgt)
                loglik += math.log(denom * inv_len)
                for f in tgt:
                    gamma = probs[(e, f)] / denom
                    counts[(e, f)] += gamma
                    totals[e] += gamma
        new_probs: dict[tuple[str, str], float] = defaultdict(lambda: uniform)
        for (e, f), c in counts.items():
            new_probs[(e, f)] = c / totals[e]
        probs = new_probs
        if log is not None:
            log.append(loglik)

    return AlignmentTable(probs=dict(probs), floor=floor)


def align_prob(table: AlignmentTable, e: str, f: str) -> float:
    """Stored probability a(f|e), or the table floor for unseen pairs."""
    return table.probs.get((e, f), table.floor)


def best_target(table: AlignmentTable, e: str, tgt_tokens) -> tuple[int, float]:
    """1-based index of the target token maximizing a(f|e), with its probability.

    Ties go to the smallest index.  The NULL token is never a candidate
    unless it literally appears in ``tgt_tokens``.
    """
    if not tgt_tokens:
        raise AlignmentError("empty target sentence")
    best_j, best_p = 1, align_prob(table, e, tgt_tokens[0])
    for j, f in enumerate(tgt_tokens[1:], start=2):
        p = align_prob(table, e, f)
        if p > best_p:
            best_j, best_p = j, p
    return best_j, best_p


def save_table(table: AlignmentTable, path: str) -> None:
    """Write the table as "floor\\t<value>" then "src\\ttgt\\tprob" rows sorted by key."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"floor\t{table.floor!r}\n")
        for (e, f), p in sorted(table.probs.items()):
            fh.write(f"{e}\t{f}\t{p!r}\n")


def load_table(path: str) -> AlignmentTable:
    probs: dict[tuple[str, str], float] = {}
    floor = 0.0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if lineno == 1 and fields[0] == "floor":
                if len(fields) != 2:
                    raise AlignmentError(f"line {lineno}: malformed floor header")
                floor = _parse_prob(fields[1], lineno)
                continue
            if len(fields) != 3:
                raise AlignmentError(f"line {lineno}: expected 'src\\ttgt\\tprob'")
            probs[(fields[0], fields[1])] = _parse_prob(fields[2], lineno)
    return AlignmentTable(probs=probs, floor=floor)


def _parse_prob(text: str, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise AlignmentError(f"line {lineno}: malformed probability {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise AlignmentError(f"line {lineno}: probability out of range: {text}")
    return value
