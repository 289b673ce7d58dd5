"""Evaluation: DER/WER, confusion matrices, rhythm and Arudi reports.

DER counts an eligible letter as wrong when its predicted mark set
differs from the gold mark set; letters unmarked in gold are excluded
from numerator and denominator (there is nothing to score against).
The starred variants (DER*/WER*) additionally exclude each word's final
eligible letter — the case-ending position. WER denominators count only
words that still contain at least one scored letter.
"""

from __future__ import annotations

from dataclasses import dataclass

from sklearn.metrics import confusion_matrix as _sk_confusion

from . import classify, meterdb
from .errors import LengthMismatch, LetterMismatch, QasidaError, ValidationError
from .matcher import similarity
from .normalize import NormalizedText, _eligible_flags, normalize_unicode, strip_diacritics
from .scansion import MIN_COVERAGE


def _as_normalized(text) -> NormalizedText:
    return text if isinstance(text, NormalizedText) else normalize_unicode(text)


@dataclass(frozen=True)
class DiacritizationScore:
    """Error percentages, each in [0, 100]."""

    der: float
    wer: float
    der_star: float
    wer_star: float

    def to_json(self) -> dict:
        return {
            "der": self.der,
            "wer": self.wer,
            "der_star": self.der_star,
            "wer_star": self.wer_star,
        }


def _pct(wrong: int, total: int) -> float:
    return 100.0 * wrong / total if total else 0.0


def der_wer(gold, pred) -> DiacritizationScore:
    """Score predicted diacritics against gold (identical base letters)."""
    gold = _as_normalized(gold)
    pred = _as_normalized(pred)
    if str(strip_diacritics(gold)) != str(strip_diacritics(pred)):
        raise LetterMismatch(
            "gold and predicted texts differ in their base letters"
        )
    eligible = _eligible_flags(gold)
    gold_words = gold.words()
    pred_words = pred.words()

    letters_wrong = letters_total = 0
    starred_wrong = starred_total = 0
    words_wrong = words_total = 0
    words_wrong_star = words_total_star = 0

    offset = 0  # running letter index across words
    for gw, pw in zip(gold_words, pred_words):
        flags = eligible[offset : offset + len(gw)]
        offset += len(gw)
        final_eligible = max(
            (k for k, f in enumerate(flags) if f), default=None
        )
        word_scored = word_wrong = False
        star_scored = star_wrong = False
        for k, ((gu, _), (pu, _)) in enumerate(zip(gw, pw)):
            if not flags[k] or not gu.marks:
                continue
            wrong = pu.marks != gu.marks
            letters_total += 1
            letters_wrong += wrong
            word_scored = True
            word_wrong = word_wrong or wrong
            if k != final_eligible:
                starred_total += 1
                starred_wrong += wrong
                star_scored = True
                star_wrong = star_wrong or wrong
        words_total += word_scored
        words_wrong += word_scored and word_wrong
        words_total_star += star_scored
        words_wrong_star += star_scored and star_wrong

    return DiacritizationScore(
        der=_pct(letters_wrong, letters_total),
        wer=_pct(words_wrong, words_total),
        der_star=_pct(starred_wrong, starred_total),
        wer_star=_pct(words_wrong_star, words_total_star),
    )


@dataclass(frozen=True)
class ConfusionMatrix:
    """Square gold-rows × predicted-columns counts over ``labels``."""

    labels: tuple
    counts: tuple

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def count(self, gold, pred) -> int:
        i = self.labels.index(gold)
        return self.counts[i][self.labels.index(pred)]

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "counts": [list(row) for row in self.counts],
        }

    def to_csv(self) -> str:
        header = "," + ",".join(str(l) for l in self.labels)
        rows = [
            f"{label}," + ",".join(str(c) for c in row)
            for label, row in zip(self.labels, self.counts)
        ]
        return "\n".join([header, *rows]) + "\n"


def confusion(golds, preds, labels=None) -> ConfusionMatrix:
    """Count matrix; rows are gold labels, columns predicted labels."""
    golds, preds = list(golds), list(preds)
    if len(golds) != len(preds):
        raise LengthMismatch(
            f"{len(golds)} gold labels vs {len(preds)} predictions"
        )
    if labels is None:
        labels = sorted(set(golds) | set(preds))
    labels = tuple(labels)
    if golds:
        counts = _sk_confusion(golds, preds, labels=list(labels))
        counts = tuple(tuple(int(c) for c in row) for row in counts)
    else:
        counts = tuple((0,) * len(labels) for _ in labels)
    return ConfusionMatrix(labels=labels, counts=counts)


@dataclass(frozen=True)
class RhythmReport:
    """Majority-vote meter accuracy over whole poems."""

    accuracy: float
    top3: float
    top5: float
    confusion: ConfusionMatrix
    total: int
    failed: int  # unscannable poems, counted incorrect above

    def to_json(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "top3": self.top3,
            "top5": self.top5,
            "confusion": self.confusion.to_json(),
            "total": self.total,
            "failed": self.failed,
        }


def rhythm_eval(poems, db: meterdb.PatternDB, min_coverage: float = MIN_COVERAGE) -> RhythmReport:
    """Evaluate (intended meter, poem) pairs by majority-vote ranking.

    Top-k is correct when the intended meter appears among the k
    highest-voted meters. Poems that fail scansion count as incorrect at
    every k and are tallied in ``failed``.
    """
    from .corpus import resolve_meter

    poems = list(poems)
    if not poems:
        raise ValidationError("rhythm_eval needs at least one poem")
    hits = {1: 0, 3: 0, 5: 0}
    golds, preds = [], []
    failed = 0
    for intended, poem in poems:
        intended = resolve_meter(intended, db)
        try:
            ranking = classify.poem_meter_ranking(
                poem.verses, db, min_coverage=min_coverage
            )
        except QasidaError:
            failed += 1
            continue
        golds.append(intended)
        preds.append(ranking[0])
        for k in hits:
            hits[k] += intended in ranking[:k]
    n = len(poems)
    return RhythmReport(
        accuracy=_pct(hits[1], n),
        top3=_pct(hits[3], n),
        top5=_pct(hits[5], n),
        confusion=confusion(golds, preds, labels=range(meterdb.METER_COUNT)),
        total=n,
        failed=failed,
    )


@dataclass(frozen=True)
class ArudiReport:
    """Similarity of predicted binary patterns to gold patterns."""

    mean_similarity: float
    exact_match: float

    def to_json(self) -> dict:
        return {
            "mean_similarity": self.mean_similarity,
            "exact_match": self.exact_match,
        }


def arudi_report(golds, preds) -> ArudiReport:
    golds, preds = list(golds), list(preds)
    if not golds:
        raise ValidationError("arudi_report needs at least one pattern pair")
    if len(golds) != len(preds):
        raise LengthMismatch(
            f"{len(golds)} gold patterns vs {len(preds)} predictions"
        )
    scores = [similarity(g, p) for g, p in zip(golds, preds)]
    return ArudiReport(
        mean_similarity=100.0 * sum(scores) / len(scores),
        exact_match=_pct(sum(s == 1.0 for s in scores), len(scores)),
    )
