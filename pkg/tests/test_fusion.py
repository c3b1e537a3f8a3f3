import itertools
import json
import random
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ivsugeno.errors import (ArityMismatch, EmptyPartition, MissingCell, ScoreOutOfRange, TooFewTrials,
                             UnlabeledTrial)
from ivsugeno.functional import make_functional, scalar_sugeno
from ivsugeno.fusion import (IntervalLogits, ScoreRecord, ScoreTable, build_interval_logits, decide, evaluate,
                             f1_score, fuse_and_decide, load_score_table, make_partitions, synthetic_table,
                             write_decisions_csv, write_scores_csv)
from ivsugeno.intervals import AdmissibleOrder, compare, make_interval
from ivsugeno.measures import cardinality_measure, power_measure

from conftest import intervals

DATA = Path(__file__).parent / "data"
XY = AdmissibleOrder.xu_yager()
PRESETS = ("iv-sugeno1", "iv-sugeno2", "iv-sugeno3")


def rec(t, b, k, c, s):
    return ScoreRecord(t, b, k, c, s)


def load_fixture():
    table = load_score_table(DATA / "fusion_scores.csv", DATA / "fusion_labels.csv")
    golden = json.loads((DATA / "fusion_golden.json").read_text())
    return table, golden


class TestLogits:
    def test_cell_is_min_max_of_classifiers(self):
        table = [rec("t0", "b0", k, "c0", s) for k, s in zip("xyz", (0.55, 0.70, 0.62))]
        logits = build_interval_logits(table)
        assert logits["t0", "c0"] == (make_interval(0.55, 0.70),)

    def test_single_classifier_gives_degenerate(self):
        logits = build_interval_logits([rec("t0", "b0", "k", "c0", 0.4)])
        assert logits["t0", "c0"][0].is_degenerate

    def test_axes_sorted(self):
        table = [rec(t, b, "k", c, 0.5) for t in ("t2", "t1") for b in ("b1", "b0") for c in ("c1", "c0")]
        logits = build_interval_logits(table)
        assert logits.trials == ("t1", "t2") and logits.bands == ("b0", "b1") and logits.classes == ("c0", "c1")

    def test_out_of_range_refused(self):
        with pytest.raises(ScoreOutOfRange):
            build_interval_logits([rec("t0", "b0", "k", "c0", 1.2)])
        with pytest.raises(ScoreOutOfRange):
            build_interval_logits([rec("t0", "b0", "k", "c0", float("nan"))])

    def test_rescale(self, caplog):
        table = [rec("t0", "b0", "k0", "c0", 2.0), rec("t0", "b0", "k1", "c0", 4.0),
                 rec("t0", "b0", "k0", "c1", 3.0), rec("t0", "b0", "k1", "c1", 3.0)]
        logits = build_interval_logits(table, rescale=True)
        assert logits["t0", "c0"] == (make_interval(0.0, 1.0),)
        assert logits["t0", "c1"] == (make_interval(0.5, 0.5),)
        assert "rescaling" in caplog.text

    def test_missing_cell(self):
        table = [rec("t0", "b0", "k", "c0", 0.1), rec("t0", "b1", "k", "c0", 0.1), rec("t0", "b0", "k", "c1", 0.1)]
        with pytest.raises(MissingCell, match="band b1"):
            build_interval_logits(table)


class TestDecision:
    def test_hand_example(self):
        fg = make_functional("iv-sugeno3", cardinality_measure(2))
        logits = IntervalLogits(("t0",), ("c0", "c1"), ("b0", "b1"), {
            ("t0", "c0"): (make_interval(0.2, 0.4), make_interval(0.6, 0.9)),
            ("t0", "c1"): (make_interval(0.7, 0.8), make_interval(0.6, 0.9)),
        })
        d = fuse_and_decide(logits, fg)["t0"]
        # c0: sorted terms [0.2,0.4] ^ 1 and [0.6,0.9] ^ 0.5, max [0.5,0.5]
        # c1: [0.7,0.8] sorts first (same midpoint, narrower), so [0.7,0.8] wins
        assert d.aggregates == (make_interval(0.5, 0.5), make_interval(0.7, 0.8))
        assert d.class_id == "c1"

    def test_tie_goes_to_smallest_class(self):
        a = make_interval(0.3, 0.6)
        assert decide([a, a, a], ["c2", "c0", "c1"], XY) == "c0"
        assert decide([a, make_interval(0.3, 0.61)], ["a", "b"], XY) == "b"

    def test_arity_mismatch(self):
        logits = build_interval_logits([rec("t0", b, "k", "c0", 0.2) for b in ("b0", "b1")])
        with pytest.raises(ArityMismatch):
            fuse_and_decide(logits, make_functional("iv-sugeno1", cardinality_measure(3)))

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(intervals(), intervals()), min_size=3, max_size=3))
    def test_dominating_class_wins(self, pairs):
        # componentwise domination of every band implies a weakly larger aggregate
        fg = make_functional("iv-sugeno3", cardinality_measure(3))
        low = tuple(make_interval(min(x.lower, y.lower), min(x.upper, y.upper)) for x, y in pairs)
        high = tuple(make_interval(max(x.lower, y.lower), max(x.upper, y.upper)) for x, y in pairs)
        assert compare(XY, fg(low), fg(high)) <= 0
        logits = IntervalLogits(("t",), ("c0", "c1"), ("b0", "b1", "b2"), {("t", "c0"): low, ("t", "c1"): high})
        d = fuse_and_decide(logits, fg)["t"]
        assert d.class_id == "c1" or compare(XY, *d.aggregates) == 0

    def test_shuffle_invariance(self):
        table = synthetic_table(trials=30, seed=4)
        fg = make_functional("iv-sugeno1", cardinality_measure(4))
        base = fuse_and_decide(build_interval_logits(table), fg)
        records = list(table.records)
        random.Random(1).shuffle(records)
        assert fuse_and_decide(build_interval_logits(records), fg) == base

    def test_workers_do_not_change_decisions(self):
        logits = build_interval_logits(synthetic_table(trials=40, seed=5))
        fg = make_functional("iv-sugeno2", cardinality_measure(4))
        assert fuse_and_decide(logits, fg, workers=1) == fuse_and_decide(logits, fg, workers=4)


def _scalar_decision(mu, rows, classes):
    scores = [scalar_sugeno(mu, row) for row in rows]
    best = max(scores)
    return classes[scores.index(best)]


@pytest.mark.parametrize("bands,classes", [(b, c) for b in (1, 2, 3) for c in (1, 2, 3)])
@pytest.mark.parametrize("measure", ["cardinality", "power"])
def test_degenerate_consistency_exhaustive(bands, classes, measure):
    """With one classifier per cell the pipeline reduces to scalar Sugeno decisions."""
    grid = (0.0, 0.5, 1.0) if bands * classes > 6 else (0.0, 0.25, 0.5, 0.75, 1.0)
    m = cardinality_measure(bands) if measure == "cardinality" else power_measure(bands, 2)
    class_ids = [f"c{j}" for j in range(classes)]
    records, expected = [], {}
    for t, values in enumerate(itertools.product(grid, repeat=bands * classes)):
        tid = f"t{t:06d}"
        rows = [values[j * bands:(j + 1) * bands] for j in range(classes)]
        for j, row in enumerate(rows):
            records.extend(rec(tid, f"b{b}", "k", class_ids[j], v) for b, v in enumerate(row))
        expected[tid] = _scalar_decision(m, rows, class_ids)
    logits = build_interval_logits(records)
    for order in (XY, AdmissibleOrder.lex2()):
        fg = make_functional("iv-sugeno3", m, order)
        got = fuse_and_decide(logits, fg)
        assert {t: d.class_id for t, d in got.items()} == expected


class TestEvaluation:
    def test_f1_hand_example(self):
        truth = ["c1", "c1", "c1", "c1", "c0", "c0"]
        pred = ["c1", "c1", "c1", "c0", "c1", "c0"]
        assert f1_score(truth, pred, ["c0", "c1"]) == pytest.approx(0.75)

    def test_macro_f1(self):
        truth = ["a", "b", "c"]
        assert f1_score(truth, truth, ["a", "b", "c"]) == 1.0
        assert f1_score(truth, ["a", "a", "a"], ["a", "b", "c"]) == pytest.approx((2 * 1 / 3 / (1 + 1 / 3)) / 3)

    def test_partitions(self):
        ids = [f"t{i}" for i in range(20)]
        parts = make_partitions(ids, 5, 0.3, seed=7)
        assert len(parts) == 5
        for train, test in parts:
            assert len(test) == 6 and sorted(train + test) == sorted(ids) and not set(train) & set(test)
        assert parts == make_partitions(list(reversed(ids)), 5, 0.3, seed=7)
        assert parts != make_partitions(ids, 5, 0.3, seed=8)

    def test_partition_errors(self):
        with pytest.raises(TooFewTrials):
            make_partitions(["t0"], 2, 0.2)
        with pytest.raises(ValueError):
            make_partitions(["t0", "t1"], 2, 1.0)

    def test_evaluate_errors(self):
        with pytest.raises(UnlabeledTrial):
            evaluate({"t0": "c0"}, {}, [([], ["t0"])])
        with pytest.raises(EmptyPartition):
            evaluate({"t0": "c0"}, {"t0": "c0"}, [(["t0"], [])])

    def test_report(self):
        rep = evaluate({"t0": "c0", "t1": "c1"}, {"t0": "c0", "t1": "c0"}, [([], ["t0", "t1"]), (["t1"], ["t0"])])
        assert rep.accuracy == pytest.approx(0.75) and rep.accuracy_std == pytest.approx(0.25)
        assert rep.to_dict()["partitions"]["n_test"] == [2, 1]


class TestFixture:
    def test_round_trip(self, tmp_path):
        table = synthetic_table(trials=5, seed=1)
        write_scores_csv(table, tmp_path / "s.csv", tmp_path / "l.csv")
        again = load_score_table(tmp_path / "s.csv", tmp_path / "l.csv")
        assert again.records == table.records and again.labels == table.labels

    def test_fixture_matches_generator(self):
        table, golden = load_fixture()
        regenerated = synthetic_table(trials=200, classes=2, bands=4, classifiers=3, seed=golden["generator_seed"])
        assert table.records == regenerated.records and table.labels == regenerated.labels

    @pytest.mark.parametrize("name", PRESETS)
    def test_golden_accuracy(self, name):
        table, golden = load_fixture()
        logits = build_interval_logits(table)
        fg = make_functional(name, cardinality_measure(4))
        parts = make_partitions(logits.trials, golden["partitions"], golden["test_fraction"], golden["partition_seed"])
        rep = evaluate(fuse_and_decide(logits, fg), table.labels, parts)
        assert abs(rep.accuracy - golden[name]["accuracy"]) <= 0.02
        assert rep.accuracy > 0.6

    def test_decisions_csv(self, tmp_path):
        logits = build_interval_logits(synthetic_table(trials=3, seed=0))
        d = fuse_and_decide(logits, make_functional("iv-sugeno3", cardinality_measure(4)))
        write_decisions_csv(d, logits.classes, tmp_path / "d.csv")
        lines = (tmp_path / "d.csv").read_text().splitlines()
        assert lines[0] == "trial_id,decision,c0,c1" and len(lines) == 4

    def test_synthetic_is_seeded(self):
        assert synthetic_table(trials=10, seed=3).records == synthetic_table(trials=10, seed=3).records
        scores = np.array([r.score for r in synthetic_table(trials=10, seed=3).records])
        assert scores.min() >= 0.0 and scores.max() <= 1.0
