"""Ensemble score fusion with interval-valued logits.

Each (trial, class, band) cell collects one score per classifier; the cell
becomes the interval [min, max] of those scores.  Per trial and class the
band intervals are aggregated with an FG-functional and the class with the
largest aggregate under an admissible order wins.
"""
from __future__ import annotations

import csv
import logging
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import intervals as iv
from .errors import (ArityMismatch, EmptyPartition, MissingCell, ScoreOutOfRange, TooFewTrials,
                     UnlabeledTrial, DataError)
from .functional import FGFunctional
from .intervals import AdmissibleOrder, Interval, make_interval

log = logging.getLogger(__name__)

SCORE_COLUMNS = ("trial_id", "band_id", "classifier_id", "class_id", "score")
LABEL_COLUMNS = ("trial_id", "class_id")


@dataclass(frozen=True)
class ScoreRecord:
    trial_id: str
    band_id: str
    classifier_id: str
    class_id: str
    score: float


@dataclass
class ScoreTable:
    records: list[ScoreRecord]
    labels: dict[str, str] = field(default_factory=dict)


def _read_csv(path, columns: Sequence[str]) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(columns) - set(reader.fieldnames or ())
        if missing:
            raise DataError(f"{path}: missing columns {sorted(missing)}")
        return list(reader)


def load_scores_csv(path) -> list[ScoreRecord]:
    out = []
    for lineno, row in enumerate(_read_csv(path, SCORE_COLUMNS), start=2):
        try:
            score = float(row["score"])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad score {row['score']!r}") from exc
        out.append(ScoreRecord(row["trial_id"], row["band_id"], row["classifier_id"], row["class_id"], score))
    return out


def load_labels_csv(path) -> dict[str, str]:
    return {row["trial_id"]: row["class_id"] for row in _read_csv(path, LABEL_COLUMNS)}


def load_score_table(scores_path, labels_path=None) -> ScoreTable:
    labels = load_labels_csv(labels_path) if labels_path else {}
    return ScoreTable(load_scores_csv(scores_path), labels)


def write_scores_csv(table: ScoreTable, scores_path, labels_path=None) -> None:
    with open(scores_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SCORE_COLUMNS)
        for r in table.records:
            w.writerow([r.trial_id, r.band_id, r.classifier_id, r.class_id, repr(r.score)])
    if labels_path:
        with open(labels_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(LABEL_COLUMNS)
            for t in sorted(table.labels):
                w.writerow([t, table.labels[t]])


# -- interval logits ---------------------------------------------------------


@dataclass(frozen=True)
class IntervalLogits:
    trials: tuple[str, ...]
    classes: tuple[str, ...]
    bands: tuple[str, ...]
    cells: Mapping[tuple[str, str], tuple[Interval, ...]]  # (trial, class) -> one interval per band

    def __getitem__(self, key: tuple[str, str]) -> tuple[Interval, ...]:
        return self.cells[key]


def _rescale(records: list[ScoreRecord]) -> list[ScoreRecord]:
    by_trial = defaultdict(list)
    for r in records:
        by_trial[r.trial_id].append(r.score)
    out = []
    for r in records:
        lo, hi = min(by_trial[r.trial_id]), max(by_trial[r.trial_id])
        s = 0.0 if hi == lo else (r.score - lo) / (hi - lo)
        out.append(ScoreRecord(r.trial_id, r.band_id, r.classifier_id, r.class_id, s))
    return out


def build_interval_logits(table: ScoreTable | Iterable[ScoreRecord], rescale: bool = False) -> IntervalLogits:
    """Interval per (trial, class, band) from the classifier scores of the cell.

    Scores must lie in [0, 1].  With ``rescale`` each trial's scores are
    min-max rescaled first.
    """
    records = list(table.records if isinstance(table, ScoreTable) else table)
    if not records:
        raise DataError("score table is empty")
    if rescale:
        log.warning("rescaling scores per trial to [0, 1] (min-max)")
        records = _rescale(records)
    for r in records:
        if not (0.0 <= r.score <= 1.0) or math.isnan(r.score):
            raise ScoreOutOfRange(
                f"score {r.score!r} for trial {r.trial_id}, band {r.band_id}, class {r.class_id} "
                f"outside [0, 1]")
    scores: dict[tuple[str, str, str], list[float]] = defaultdict(list)
    for r in records:
        scores[r.trial_id, r.class_id, r.band_id].append(r.score)
    trials = tuple(sorted({r.trial_id for r in records}))
    classes = tuple(sorted({r.class_id for r in records}))
    bands = tuple(sorted({r.band_id for r in records}))
    cells = {}
    for t in trials:
        for c in classes:
            row = []
            for b in bands:
                s = scores.get((t, c, b))
                if not s:
                    raise MissingCell(f"no score for trial {t}, class {c}, band {b}")
                row.append(make_interval(min(s), max(s)))
            cells[t, c] = tuple(row)
    return IntervalLogits(trials, classes, bands, cells)


# -- decisions ---------------------------------------------------------------


@dataclass(frozen=True)
class Decision:
    trial_id: str
    class_id: str
    aggregates: tuple[Interval, ...]  # one per class, in IntervalLogits.classes order


def decide(aggregates: Sequence[Interval], classes: Sequence[str], order: AdmissibleOrder) -> str:
    """Class with the largest aggregate; ties go to the smallest class id."""
    best = None
    for c, a in sorted(zip(classes, aggregates)):
        if best is None or iv.compare(order, a, best[1]) > 0:
            best = (c, a)
    return best[0]


def fuse_and_decide(logits: IntervalLogits, fg: FGFunctional, order: AdmissibleOrder | None = None,
                    workers: int = 1) -> dict[str, Decision]:
    if fg.n != len(logits.bands):
        raise ArityMismatch(f"functional has arity {fg.n} but the table has {len(logits.bands)} bands")
    order = order or fg.order

    def one(t):
        aggs = tuple(fg(logits[t, c]) for c in logits.classes)
        return Decision(t, decide(aggs, logits.classes, order), aggs)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            out = list(pool.map(one, logits.trials))
    else:
        out = [one(t) for t in logits.trials]
    return {d.trial_id: d for d in out}


def write_decisions_csv(decisions: Mapping[str, Decision], classes: Sequence[str], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trial_id", "decision", *classes])
        for t in sorted(decisions):
            d = decisions[t]
            w.writerow([t, d.class_id, *(iv.format_interval(a) for a in d.aggregates)])


# -- evaluation --------------------------------------------------------------


def make_partitions(trial_ids: Iterable[str], k: int = 10, fraction: float = 0.5,
                    seed: int = 0) -> list[tuple[list[str], list[str]]]:
    """``k`` seeded random (train, test) splits; ``fraction`` is the test share."""
    if k < 1:
        raise ValueError("need at least one partition")
    if not 0.0 < fraction < 1.0:
        raise ValueError("test fraction must lie in (0, 1)")
    ids = sorted(set(trial_ids))
    n_test = int(round(fraction * len(ids)))
    if n_test < 1:
        raise TooFewTrials(f"{len(ids)} trials give an empty test set at fraction {fraction}")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(k):
        perm = rng.permutation(len(ids))
        test = sorted(ids[i] for i in perm[:n_test])
        train = sorted(ids[i] for i in perm[n_test:])
        out.append((train, test))
    return out


def f1_score(truth: Sequence[str], pred: Sequence[str], classes: Sequence[str]) -> float:
    """Binary F1 with the second class (sorted) as positive; macro F1 otherwise."""
    classes = sorted(classes)

    def f1_for(pos):
        tp = sum(1 for t, p in zip(truth, pred) if t == pos and p == pos)
        fp = sum(1 for t, p in zip(truth, pred) if t != pos and p == pos)
        fn = sum(1 for t, p in zip(truth, pred) if t == pos and p != pos)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        return 2 * prec * rec / (prec + rec) if prec + rec else 0.0

    if len(classes) == 2:
        return f1_for(classes[1])
    return sum(f1_for(c) for c in classes) / len(classes)


@dataclass(frozen=True)
class PartitionScore:
    accuracy: float
    f1: float
    n_test: int


@dataclass(frozen=True)
class FusionReport:
    accuracy: float
    accuracy_std: float
    f1: float
    f1_std: float
    partitions: tuple[PartitionScore, ...]
    decisions: Mapping[str, str]

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "accuracy_std": self.accuracy_std,
            "f1": self.f1,
            "f1_std": self.f1_std,
            "partitions": {
                "accuracy": [p.accuracy for p in self.partitions],
                "f1": [p.f1 for p in self.partitions],
                "n_test": [p.n_test for p in self.partitions],
            },
        }


def evaluate(decisions: Mapping[str, Decision | str], labels: Mapping[str, str],
             partitions: Sequence[tuple[Sequence[str], Sequence[str]]],
             classes: Sequence[str] | None = None) -> FusionReport:
    """Accuracy and F1 on the test side of each partition, then mean and std."""
    pred = {t: d.class_id if isinstance(d, Decision) else d for t, d in decisions.items()}
    classes = sorted(set(classes) if classes else set(labels.values()) | set(pred.values()))
    scores = []
    for _, test in partitions:
        if not test:
            raise EmptyPartition("a partition has an empty test set")
        for t in test:
            if t not in labels:
                raise UnlabeledTrial(f"trial {t} has no label")
            if t not in pred:
                raise DataError(f"trial {t} has no decision")
        truth = [labels[t] for t in test]
        guess = [pred[t] for t in test]
        acc = sum(a == b for a, b in zip(truth, guess)) / len(test)
        scores.append(PartitionScore(acc, f1_score(truth, guess, classes), len(test)))
    accs = np.array([s.accuracy for s in scores])
    f1s = np.array([s.f1 for s in scores])
    return FusionReport(float(accs.mean()), float(accs.std()), float(f1s.mean()), float(f1s.std()),
                        tuple(scores), pred)


# -- synthetic data ----------------------------------------------------------


def synthetic_table(trials: int = 200, classes: int = 2, bands: int = 4, classifiers: int = 3,
                    seed: int = 0, separation: float = 0.1, noise: float = 0.15) -> ScoreTable:
    """Random score table where the true class gets a mean boost of ``separation``.

    Each band has its own informativeness and each classifier its own noise
    level, so the min-max intervals carry genuine disagreement.
    """
    rng = np.random.default_rng(seed)
    class_ids = [f"c{j}" for j in range(classes)]
    band_ids = [f"b{j}" for j in range(bands)]
    clf_ids = [f"k{j}" for j in range(classifiers)]
    band_gain = rng.uniform(0.3, 1.0, bands)
    clf_noise = noise * rng.uniform(0.5, 1.5, classifiers)
    width = len(str(trials - 1))
    records, labels = [], {}
    for t in range(trials):
        tid = f"t{t:0{width}d}"
        label = int(rng.integers(classes))
        labels[tid] = class_ids[label]
        for b, bid in enumerate(band_ids):
            for c, cid in enumerate(class_ids):
                base = 0.5 + (separation * band_gain[b] if c == label else 0.0) - separation / 2
                for k, kid in enumerate(clf_ids):
                    s = float(np.clip(base + rng.normal(0.0, clf_noise[k]), 0.0, 1.0))
                    records.append(ScoreRecord(tid, bid, kid, cid, round(s, 6)))
    return ScoreTable(records, labels)
