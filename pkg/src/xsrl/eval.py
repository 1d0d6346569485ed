"""Scoring predicted SRL corpora against gold annotations.

An argument is correct iff sentence, predicate index, argument token index
and role all match; predicates are given, so gold and prediction must
carry identical predicate sets.  All scores are micro-averaged from pooled
true/false positive and negative counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus
from .model import SrlModel
from .model.network import BASIC

__all__ = [
    "EvalError",
    "RoleScore",
    "EvalReport",
    "DEFAULT_ROLES",
    "DEFAULT_BUCKETS",
    "srl_f1",
    "per_role_f1",
    "distance_f1",
    "language_similarity",
    "similarity_csv",
    "format_report",
    "parse_report",
    "aggregate_reports",
    "parse_buckets",
]

DEFAULT_ROLES = ("A0", "A1", "A2", "AM-TMP")
#: Distance buckets as (low, high) inclusive ranges; None means unbounded.
DEFAULT_BUCKETS = ((1, 2), (3, 6), (7, None))


class EvalError(ValueError):
    """Raised for misaligned corpora or invalid bucket definitions."""


@dataclass(frozen=True)
class RoleScore:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class EvalReport:
    precision: float
    recall: float
    f1: float
    gold_args: int
    pred_args: int
    per_role: dict[str, RoleScore] = field(default_factory=dict)
    per_distance: dict[str, RoleScore] = field(default_factory=dict)


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def bucket_label(bucket: tuple[int, int | None]) -> str:
    low, high = bucket
    return f"{low}+" if high is None else f"{low}-{high}"


def parse_buckets(text: str) -> tuple[tuple[int, int | None], ...]:
    """Parse "1-2,3-6,7+" into ((1,2),(3,6),(7,None))."""
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            if part.endswith("+"):
                out.append((int(part[:-1]), None))
            else:
                low, high = part.split("-")
                out.append((int(low), int(high)))
        except ValueError:
            raise EvalError(f"malformed bucket {part!r}") from None
    return tuple(out)


def _check_buckets(buckets) -> None:
    unbounded = [b for b in buckets if b[1] is None]
    spans = [(lo, hi) for lo, hi in buckets if hi is not None]
    for lo, hi in spans:
        if lo > hi or lo < 1:
            raise EvalError(f"bad bucket range {lo}-{hi}")
    edges = sorted(spans) + sorted((lo, math.inf) for lo, _ in unbounded)
    for (lo1, hi1), (lo2, _) in zip(edges, edges[1:]):
        if lo2 <= hi1:
            raise EvalError("overlapping buckets")
        if lo2 != hi1 + 1:
            raise EvalError(f"buckets leave distance {hi1 + 1} uncovered")
    if not edges or edges[0][0] != 1 or edges[-1][1] != math.inf:
        raise EvalError("buckets must cover every distance >= 1")


def _bucket_of(distance: int, buckets) -> str:
    for bucket in buckets:
        low, high = bucket
        if distance >= low and (high is None or distance <= high):
            return bucket_label(bucket)
    raise EvalError(f"no bucket for distance {distance}")


def _paired_frames(gold: Corpus, pred: Corpus):
    if len(gold.sentences) != len(pred.sentences):
        raise EvalError(
            f"gold has {len(gold.sentences)} sentences, prediction "
            f"{len(pred.sentences)}")
    for si, (gs, ps) in enumerate(zip(gold.sentences, pred.sentences)):
        gold_preds = {f.pred_index: f for f in gs.frames}
        pred_preds = {f.pred_index: f for f in ps.frames}
        if gold_preds.keys() != pred_preds.keys():
            raise EvalError(
                f"sentence {si}: predicate sets differ "
                f"({sorted(gold_preds)} vs {sorted(pred_preds)})")
        for index in sorted(gold_preds):
            yield gold_preds[index], pred_preds[index]


def srl_f1(gold: Corpus, pred: Corpus,
           buckets=DEFAULT_BUCKETS) -> EvalReport:
    """Micro P/R/F1 with full per-role and per-distance breakdowns."""
    _check_buckets(buckets)
    tp = fp = fn = 0
    role_counts: dict[str, list[int]] = {}
    dist_counts: dict[str, list[int]] = {b: [0, 0, 0] for b in map(bucket_label, buckets)}
    gold_total = pred_total = 0

    def tally(table, key, kind):
        table.setdefault(key, [0, 0, 0])[kind] += 1

    for gframe, pframe in _paired_frames(gold, pred):
        gold_set = set(gframe.args)
        pred_set = set(pframe.args)
        gold_total += len(gold_set)
        pred_total += len(pred_set)
        for arg, role in gold_set & pred_set:
            tp += 1
            tally(role_counts, role, 0)
            dist_counts[_bucket_of(abs(arg - gframe.pred_index), buckets)][0] += 1
        for arg, role in pred_set - gold_set:
            fp += 1
            tally(role_counts, role, 1)
            dist_counts[_bucket_of(abs(arg - pframe.pred_index), buckets)][1] += 1
        for arg, role in gold_set - pred_set:
            fn += 1
            tally(role_counts, role, 2)
            dist_counts[_bucket_of(abs(arg - gframe.pred_index), buckets)][2] += 1

    precision, recall, f1 = _prf(tp, fp, fn)
    per_role = {
        role: RoleScore(*_prf(c[0], c[1], c[2]), support=c[0] + c[2])
        for role, c in sorted(role_counts.items())
    }
    per_distance = {
        label: RoleScore(*_prf(c[0], c[1], c[2]), support=c[0] + c[2])
        for label, c in dist_counts.items()
    }
    return EvalReport(
        precision=precision, recall=recall, f1=f1,
        gold_args=gold_total, pred_args=pred_total,
        per_role=per_role, per_distance=per_distance)


def per_role_f1(gold: Corpus, pred: Corpus,
                roles=DEFAULT_ROLES) -> dict[str, RoleScore]:
    """Scores restricted to selected roles; absent roles get support 0
    (the zero-support flag for undefined scores)."""
    report = srl_f1(gold, pred)
    zero = RoleScore(0.0, 0.0, 0.0, 0)
    return {role: report.per_role.get(role, zero) for role in roles}


def distance_f1(gold: Corpus, pred: Corpus,
                buckets=DEFAULT_BUCKETS) -> dict[str, RoleScore]:
    return srl_f1(gold, pred, buckets=buckets).per_distance


def language_similarity(model: SrlModel) -> tuple[tuple[str, ...], np.ndarray]:
    """Pairwise Euclidean distances between the model's language embeddings."""
    if model.config.variant == BASIC:
        raise EvalError("no language embeddings in the basic variant")
    table = model.params["lang_table"]
    diff = table[:, None, :] - table[None, :, :]
    matrix = np.sqrt(np.sum(diff * diff, axis=2))
    return model.vocab.languages, matrix


def similarity_csv(model: SrlModel) -> str:
    languages, matrix = language_similarity(model)
    lines = ["lang," + ",".join(languages)]
    for lang, row in zip(languages, matrix):
        lines.append(lang + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def format_report(report: EvalReport) -> str:
    lines = [
        f"precision\t{report.precision!r}",
        f"recall\t{report.recall!r}",
        f"f1\t{report.f1!r}",
        f"gold_args\t{report.gold_args}",
        f"pred_args\t{report.pred_args}",
        "",
        "[per_role]",
        "role,precision,recall,f1,support",
    ]
    for role, s in report.per_role.items():
        lines.append(f"{role},{s.precision!r},{s.recall!r},{s.f1!r},{s.support}")
    lines.extend(["", "[per_distance]", "bucket,precision,recall,f1,support"])
    for label, s in report.per_distance.items():
        lines.append(f"{label},{s.precision!r},{s.recall!r},{s.f1!r},{s.support}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> EvalReport:
    top: dict[str, float] = {}
    tables: dict[str, dict[str, RoleScore]] = {"per_role": {}, "per_distance": {}}
    section = None
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("["):
            section = line.strip("[]")
            continue
        if section is None:
            key, value = line.split("\t")
            top[key] = float(value)
        elif not line.startswith(("role,", "bucket,")):
            name, p, r, f, support = line.split(",")
            tables[section][name] = RoleScore(float(p), float(r), float(f), int(support))
    return EvalReport(
        precision=top["precision"], recall=top["recall"], f1=top["f1"],
        gold_args=int(top["gold_args"]), pred_args=int(top["pred_args"]),
        per_role=tables["per_role"], per_distance=tables["per_distance"])


def aggregate_reports(reports: list[EvalReport]) -> EvalReport:
    """Mean the scores of several evaluation runs (e.g. over seeds)."""
    if not reports:
        raise EvalError("no reports to aggregate")

    def mean(values):
        return sum(values) / len(values)

    def mean_table(key):
        names = sorted({name for r in reports for name in getattr(r, key)})
        out = {}
        for name in names:
            rows = [getattr(r, key)[name] for r in reports if name in getattr(r, key)]
            out[name] = RoleScore(
                precision=mean([s.precision for s in rows]),
                recall=mean([s.recall for s in rows]),
                f1=mean([s.f1 for s in rows]),
                support=round(mean([s.support for s in rows])),
            )
        return out

    return EvalReport(
        precision=mean([r.precision for r in reports]),
        recall=mean([r.recall for r in reports]),
        f1=mean([r.f1 for r in reports]),
        gold_args=round(mean([r.gold_args for r in reports])),
        pred_args=round(mean([r.pred_args for r in reports])),
        per_role=mean_table("per_role"),
        per_distance=mean_table("per_distance"))
