"""DER/WER scoring, confusion matrices, rhythm and Arudi reports."""

import random

import pytest

from qasida import meterdb
from qasida.classify import classify_hemistich
from qasida.corpus import Poem
from qasida.errors import LengthMismatch, LetterMismatch, ValidationError
from qasida.metrics import (
    ConfusionMatrix,
    arudi_report,
    confusion,
    der_wer,
    rhythm_eval,
)
from qasida.normalize import normalize_unicode

from helpers import pattern_text, zero_final_variants
from oracles import der_wer_counts

TAWEEL = "11010110101011010110110"

FATHA, DAMMA, KASRA, SUKUN, SHADDA = "َ", "ُ", "ِ", "ْ", "ّ"
MARK_CHOICES = (FATHA, DAMMA, KASRA, SUKUN, SHADDA + FATHA, SHADDA + DAMMA, None)


def text_from_words(words):
    """Build a text of ب-words from per-letter mark strings (None = bare)."""
    return " ".join(
        "".join("ب" + (mark or "") for mark in word) for word in words
    )


def random_words(rng):
    return [
        [rng.choice(MARK_CHOICES) for _ in range(rng.randint(1, 4))]
        for _ in range(rng.randint(1, 3))
    ]


class TestDerWer:
    def test_identical_is_all_zero(self):
        s = der_wer("بَبُبِبْ بَبُ", "بَبُبِبْ بَبُ")
        assert (s.der, s.wer, s.der_star, s.wer_star) == (0.0, 0.0, 0.0, 0.0)

    def test_one_wrong_of_four_marked(self):
        s = der_wer("بَبُبِبْ", "بُبُبِبْ")
        assert s.der == 25.0
        assert s.wer == 100.0

    def test_word_final_error_vanishes_in_starred(self):
        s = der_wer("بَبَ", "بَبُ")
        assert s.der == 50.0
        assert s.der_star == 0.0
        assert s.wer == 100.0
        assert s.wer_star == 0.0

    def test_starred_can_exceed_unstarred(self):
        # Excluding a *correct* final letter shrinks the denominator:
        # DER 1/4 but DER* 1/2. (No DER* <= DER invariant exists.)
        s = der_wer("بَبْ بَبْ", "بُبْ بَبْ")
        assert s.der == 25.0
        assert s.der_star == 50.0

    def test_gold_unmarked_letters_excluded(self):
        s = der_wer("بب", "بَبُ")
        assert (s.der, s.wer, s.der_star, s.wer_star) == (0.0, 0.0, 0.0, 0.0)

    def test_missing_predicted_mark_is_wrong(self):
        s = der_wer("بَبَ", "بَب")
        assert s.der == 50.0

    def test_mark_sets_compared_in_full(self):
        # shadda+fatha vs fatha alone differ even though the vowel agrees
        s = der_wer("بَّبْ", "بَبْ")
        assert s.der == 50.0
        assert s.der_star == 100.0

    def test_letter_mismatch(self):
        with pytest.raises(LetterMismatch):
            der_wer("بَتَ", "بَبَ")
        with pytest.raises(LetterMismatch):
            der_wer("بَ بَ", "بَبَ")

    def test_accepts_normalized_text(self):
        gold = normalize_unicode("بَبُ")
        pred = normalize_unicode("بَبِ")
        assert der_wer(gold, pred).der == 50.0

    def test_multi_word_wer(self):
        s = der_wer("بَبُ بَبُ", "بَبُ بُبُ")
        assert s.wer == 50.0
        assert s.der == 25.0

    def test_matches_counting_oracle(self):
        rng = random.Random(31)
        for _ in range(1500):
            gold_words = random_words(rng)
            pred_words = [
                [
                    gold if rng.random() < 0.6 else rng.choice(MARK_CHOICES)
                    for gold in word
                ]
                for word in gold_words
            ]
            s = der_wer(text_from_words(gold_words), text_from_words(pred_words))
            der, wer, der_star, wer_star = der_wer_counts(gold_words, pred_words)
            assert s.der == pytest.approx(der), (gold_words, pred_words)
            assert s.wer == pytest.approx(wer)
            assert s.der_star == pytest.approx(der_star)
            assert s.wer_star == pytest.approx(wer_star)


class TestConfusion:
    def test_all_correct_is_diagonal(self):
        cm = confusion([0, 1, 2, 1], [0, 1, 2, 1])
        assert cm.labels == (0, 1, 2)
        assert cm.counts == ((1, 0, 0), (0, 2, 0), (0, 0, 1))

    def test_single_error_is_off_diagonal(self):
        cm = confusion(["A"], ["B"])
        assert cm.count("A", "B") == 1
        assert cm.count("A", "A") == 0

    def test_item_order_invariance(self):
        golds, preds = [0, 1, 0, 2, 1], [1, 1, 0, 2, 0]
        cm1 = confusion(golds, preds)
        paired = list(zip(golds, preds))
        random.Random(3).shuffle(paired)
        cm2 = confusion([g for g, _ in paired], [p for _, p in paired])
        assert cm1.counts == cm2.counts

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            confusion([0, 1], [0])

    def test_explicit_labels_add_zero_rows(self):
        cm = confusion([0], [0], labels=range(3))
        assert cm.labels == (0, 1, 2)
        assert cm.counts == ((1, 0, 0), (0, 0, 0), (0, 0, 0))

    def test_empty_inputs(self):
        cm = confusion([], [], labels=[0, 1])
        assert cm.counts == ((0, 0), (0, 0))
        assert cm.total == 0

    def test_total_counts_items(self):
        cm = confusion([0, 1, 1, 2], [1, 1, 0, 2])
        assert cm.total == 4

    def test_csv_layout(self):
        cm = confusion([0, 1, 2], [0, 1, 1])
        assert cm.to_csv() == ",0,1,2\n0,1,0,0\n1,0,1,0\n2,0,1,0\n"

    def test_json_round_trip_fields(self):
        cm = confusion([0, 1], [1, 1])
        j = cm.to_json()
        assert j == {"labels": [0, 1], "counts": [[0, 1], [0, 1]]}
        again = ConfusionMatrix(tuple(j["labels"]), tuple(map(tuple, j["counts"])))
        assert again == cm


class TestRhythmEval:
    def test_canonical_poems_score_perfect(self, db):
        pairs = [
            (m, Poem(verses=[pattern_text(meterdb.canonical_pattern(db, m))] * 2))
            for m in range(16)
            if meterdb.canonical_pattern(db, m).endswith("0")
        ]
        assert len(pairs) == 15
        report = rhythm_eval(pairs, db)
        assert (report.accuracy, report.top3, report.top5) == (100.0, 100.0, 100.0)
        assert report.failed == 0
        assert report.total == 15
        assert report.confusion.total == 15

    def test_every_meter_reachable_with_zero_final_variants(self, db):
        pairs = []
        for meter in range(16):
            variant = next(
                v for v in zero_final_variants(db, meter)
                if classify_hemistich(v, db)[0][0] == meter
            )
            pairs.append((meter, Poem(verses=[pattern_text(variant)] * 2)))
        report = rhythm_eval(pairs, db)
        assert report.accuracy == 100.0
        assert report.total == 16

    def test_rank_two_counts_for_top3_only(self, db):
        a = pattern_text(meterdb.canonical_pattern(db, 0))
        b = pattern_text(meterdb.canonical_pattern(db, 4))
        report = rhythm_eval([(0, Poem(verses=[a, b, b, b]))], db)
        assert report.accuracy == 0.0
        assert report.top3 == 100.0
        assert report.top5 == 100.0
        assert report.confusion.count(0, 4) == 1

    def test_failures_counted_incorrect_and_reported(self, db):
        good = Poem(verses=[pattern_text(meterdb.canonical_pattern(db, 0))] * 2)
        bad = Poem(verses=["قفا نبك من ذكرى حبيب"] * 2)
        report = rhythm_eval([(0, good), (0, bad)], db)
        assert report.failed == 1
        assert report.accuracy == 50.0
        assert report.top5 == 50.0
        assert report.confusion.total == 1  # scanned poems only

    def test_intended_meter_accepts_labels(self, db):
        poem = Poem(verses=[pattern_text(meterdb.canonical_pattern(db, 0))] * 2)
        report = rhythm_eval([("Taweel", poem)], db)
        assert report.accuracy == 100.0

    def test_empty_rejected(self, db):
        with pytest.raises(ValidationError):
            rhythm_eval([], db)

    def test_topk_ordering_on_noisy_fixtures(self, db):
        from helpers import random_poem

        rng = random.Random(13)
        pairs = []
        for _ in range(40):
            meter = rng.randrange(16)
            flips = rng.choice((0, 1, 2))
            pairs.append((meter, random_poem(db, meter, rng, flip_bits=flips)))
        report = rhythm_eval(pairs, db)
        assert 0.0 <= report.accuracy <= report.top3 <= report.top5 <= 100.0
        assert report.total == 40


class TestArudiReport:
    def test_exact_predictions(self):
        report = arudi_report([TAWEEL, "10110"], [TAWEEL, "10110"])
        assert report.mean_similarity == 100.0
        assert report.exact_match == 100.0

    def test_one_flip_in_one_of_two(self):
        flipped = TAWEEL[:-1] + "1"
        report = arudi_report([TAWEEL, TAWEEL], [TAWEEL, flipped])
        assert report.mean_similarity == pytest.approx((100.0 + 100.0 * 44 / 46) / 2)
        assert report.mean_similarity == pytest.approx(97.826, abs=0.001)
        assert report.exact_match == 50.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            arudi_report([TAWEEL], [])

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            arudi_report([], [])
