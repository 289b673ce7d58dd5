"""Meter identification, qafiyah extraction, and era bucketing."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from . import matcher, meterdb
from .errors import EmptyPattern, EmptyPoem, NoScannableVerse, QasidaError
from .normalize import (
    MADD_LETTERS,
    diacritic_coverage,
    normalize_unicode,
    strip_diacritics,
)
from .scansion import MIN_COVERAGE, scan_hemistich


class Theme(Enum):
    """Named theme classes; token ids beyond these are pass-through."""

    ELEGY = 0
    LAMPOON = 1
    PRAISE = 2
    ROMANTIC = 3
    UNKNOWN = 17


#: Era buckets on the Hijri calendar, half-open [lo, hi); bucket 1 is
#: open-ended into the pre-Islamic past, bucket 4 runs to the present.
ERA_BUCKETS = (
    (1, None, 132),
    (2, 132, 232),
    (3, 232, 784),
    (4, 784, None),
)


@dataclass(frozen=True)
class Qafiyah:
    """Rhyme: the rawiy (rhyme letter) plus its display tail."""

    rawiy: str
    tail: str


@dataclass
class HemistichAnalysis:
    """Scansion and match outcome for one hemistich."""

    text: str
    pattern: str | None = None
    trace: tuple = ()
    coverage: float | None = None
    match: matcher.MatchResult | None = None
    error: str | None = None
    ranking: list = field(default_factory=list)


def classify_hemistich(pattern: str, db: meterdb.PatternDB, candidates=None) -> list:
    """Rank meters for a binary pattern.

    Returns (meter, score) pairs: score is the meter's best variant
    similarity; sorted score descending, then index ascending.
    """
    if not pattern:
        raise EmptyPattern("cannot classify an empty pattern")
    if set(pattern) - {"0", "1"}:
        raise EmptyPattern(f"pattern {pattern!r} is not binary")
    meters = sorted(candidates) if candidates is not None else range(meterdb.METER_COUNT)
    scores = [(m, matcher.best_variant(pattern, db, m)[0]) for m in meters]
    scores.sort(key=lambda e: (-e[1], e[0]))
    return scores


def _scan_all(hemistiches, db, min_coverage):
    """Scan and rank every hemistich, keeping per-hemistich errors."""
    analyses = []
    for text in hemistiches:
        a = HemistichAnalysis(text=text)
        try:
            normalized = normalize_unicode(text)
            if normalized.letters:
                a.coverage = diacritic_coverage(normalized)
            a.pattern, a.trace = scan_hemistich(text, min_coverage=min_coverage)
            a.ranking = classify_hemistich(a.pattern, db)
        except QasidaError as exc:
            a.error = f"{type(exc).__name__}: {exc}"
        analyses.append(a)
    return analyses


def _no_scannable(analyses) -> NoScannableVerse:
    """Build the all-failed error, citing the first hemistich's cause."""
    first = next((a.error for a in analyses if a.error), None)
    detail = f" (first failure: {first})" if first else ""
    return NoScannableVerse(f"no hemistich could be scanned{detail}")


def _vote(analyses) -> tuple:
    """Majority vote over hemistich top-1 meters.

    Strict plurality; ties broken by highest mean top-1 similarity among
    the tied meters, then lowest index. Returns (meter, votes Counter).
    """
    votes = Counter()
    top_scores: dict = {}
    for a in analyses:
        if a.error or not a.ranking:
            continue
        m, score = a.ranking[0]
        votes[m] += 1
        top_scores.setdefault(m, []).append(score)
    if not votes:
        raise _no_scannable(analyses)
    best = max(votes.values())
    tied = [m for m, v in votes.items() if v == best]
    winner = min(
        tied,
        key=lambda m: (-(sum(top_scores[m]) / len(top_scores[m])), m),
    )
    return winner, votes


def classify_poem(hemistiches, db: meterdb.PatternDB, min_coverage: float = MIN_COVERAGE) -> tuple:
    """Classify a poem from its hemistich strings.

    Returns (meter, analyses): the majority-vote meter and the
    per-hemistich analyses (with individual rankings and errors).
    """
    texts = list(hemistiches)
    if not texts:
        raise NoScannableVerse("poem has no verses")
    analyses = _scan_all(texts, db, min_coverage)
    meter, _ = _vote(analyses)
    return meter, analyses


def poem_meter_ranking(hemistiches, db: meterdb.PatternDB, min_coverage: float = MIN_COVERAGE) -> list:
    """All 16 meters ranked at poem level.

    Order: vote count (hemistich top-1s) descending, then mean similarity
    across hemistich rankings descending, then index ascending.
    """
    texts = list(hemistiches)
    if not texts:
        raise NoScannableVerse("poem has no verses")
    analyses = _scan_all(texts, db, min_coverage)
    scored = [a for a in analyses if not a.error]
    if not scored:
        raise _no_scannable(analyses)
    votes = Counter(a.ranking[0][0] for a in scored)
    top_scores: dict = {}
    sums = Counter()
    for a in scored:
        m, score = a.ranking[0]
        top_scores.setdefault(m, []).append(score)
        for meter, s in a.ranking:
            sums[meter] += s
    n = len(scored)

    def tiebreak(m: int) -> float:
        # voted meters break ties exactly as classify_poem's vote does;
        # unvoted meters order by their mean similarity across hemistiches
        if m in top_scores:
            return sum(top_scores[m]) / len(top_scores[m])
        return sums[m] / n

    return sorted(
        range(meterdb.METER_COUNT),
        key=lambda m: (-votes.get(m, 0), -tiebreak(m), m),
    )


def predict_arudi(
    hemistiches,
    db: meterdb.PatternDB,
    meter: int | None = None,
    min_coverage: float = MIN_COVERAGE,
) -> tuple:
    """Full diagnosis: classify the poem, then match every hemistich
    against the winning meter's variants.

    ``meter`` overrides the vote (caller-supplied hint). Hemistiches that
    fail to scan keep their error and are skipped; at least one must
    succeed. Returns (meter, analyses) with per-hemistich MatchResult.
    """
    texts = list(hemistiches)
    if not texts:
        raise NoScannableVerse("poem has no verses")
    analyses = _scan_all(texts, db, min_coverage)
    if meter is None:
        winner, _ = _vote(analyses)
    else:
        db.template(meter)  # validates the index
        winner = meter
        if all(a.error for a in analyses):
            raise _no_scannable(analyses)
    for a in analyses:
        if a.error:
            continue
        a.match = matcher.best_match(a.pattern, db, candidates=[winner])[0]
    return winner, analyses


def extract_qafiyah(hemistiches) -> Qafiyah:
    """Rhyme letter of the final hemistich.

    Strips diacritics, removes at most one trailing madd letter (never
    emptying the final word), and takes the last remaining letter as
    rawiy; a single-letter final word is its own rawiy.
    """
    texts = [t for t in hemistiches if t and t.strip()]
    if not texts:
        raise EmptyPoem("poem has no verses")
    normalized = strip_diacritics(normalize_unicode(texts[-1]))
    words = normalized.words()
    if not words:
        raise EmptyPoem("final hemistich has no letters")
    letters = [u.letter for u in normalized.letters]
    stripped = ""
    if len(words[-1]) > 1 and letters[-1] in MADD_LETTERS:
        stripped = letters[-1]
        letters = letters[:-1]
    return Qafiyah(rawiy=letters[-1], tail=letters[-1] + stripped)


def bucket_era(year: int | None = None, pre_islamic: bool = False) -> int:
    """Era bucket (1-4) for a Hijri year; the flag forces bucket 1."""
    if pre_islamic:
        return 1
    if year is None:
        raise ValueError("either a Hijri year or the pre-Islamic flag is required")
    for index, lo, hi in ERA_BUCKETS:
        if (lo is None or year >= lo) and (hi is None or year < hi):
            return index
    raise AssertionError("buckets cover the whole axis")  # pragma: no cover
