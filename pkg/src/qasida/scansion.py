"""Arudi rewriting and binary scansion.

A hemistich is rewritten into its phonetically explicit ("arudi") form and
then mapped to a binary pattern: every vowel-bearing letter contributes
``'1'``, every sukun-bearing letter ``'0'``.

Rewrite rules (rule ids appear in scansion traces):

- R1 pass-through: a normalized letter kept as written.
- R2 gemination: a shadda letter is doubled; the first copy takes sukun,
  the second the co-occurring vowel.
- R3 nunation: a tanween becomes the plain vowel plus an appended nun with
  sukun; a bare word-final seat alef/maqsura next to the tanween is silent.
- R4 long vowels: bare alef/maqsura, and bare waw/ya after a vowel-marked
  letter, take sukun; madda (آ) expands to hamza+fatha and madd alef.
- R5 connective alef: a bare word-initial alef is kept (with fatha) only at
  verse start; elsewhere it is silent, and a directly preceding bare madd
  letter is elided with it (two sukuns cannot meet).
- R6 definite article: lam with explicit sukun is kept as written; a bare
  article lam before a shadda letter is silent (the written shadda doubles
  the sun letter via R2).
- R7 finalization: a hemistich-final vowel gains a matching madd letter with
  sukun; a bare final letter takes sukun (pausal reading).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyText, IncompleteDiacritization, UnmarkedLetter
from .normalize import (
    Diacritic,
    MADD_LETTERS,
    NormalizedText,
    PLAIN_VOWELS,
    SOUND_MARKS,
    TANWEEN,
    TANWEEN_TO_VOWEL,
    Unit,
    diacritic_coverage,
    normalize_unicode,
    uncovered_offsets,
)

R1_KEEP = "R1"
R2_SHADDA = "R2"
R3_TANWEEN = "R3"
R4_MADD = "R4"
R5_WASL = "R5"
R6_ARTICLE = "R6"
R7_FINAL = "R7"

_VOWEL_TO_MADD = {
    Diacritic.FATHA: "ا",  # ا
    Diacritic.DAMMA: "و",  # و
    Diacritic.KASRA: "ي",  # ي
}

#: Default minimum diacritic coverage required before scansion.
MIN_COVERAGE = 0.95


@dataclass(frozen=True)
class TraceStep:
    """One output bit: its value, source unit index, and producing rule."""

    bit: str
    source: int
    rule: str


@dataclass(frozen=True)
class _ArudiUnit:
    letter: str
    mark: Diacritic | None
    source: int
    rule: str


def _rewrite(text: NormalizedText, final_lengthening: bool = True) -> list:
    """Apply R2-R7 to normalized text; returns the arudi unit stream."""
    out: list = []
    words = text.words()

    for wi, word in enumerate(words):
        j = 0
        while j < len(word):
            unit, idx = word[j]
            letter = unit.letter
            sound = unit.sound_mark
            nxt = word[j + 1][0] if j + 1 < len(word) else None

            # madda: hamza with fatha plus madd alef
            if letter == "آ":  # آ
                out.append(_ArudiUnit("أ", Diacritic.FATHA, idx, R4_MADD))
                out.append(_ArudiUnit("ا", Diacritic.SUKUN, idx, R4_MADD))
                j += 1
                continue

            # seat alef/maqsura carrying the tanween itself (كتاباً convention)
            if letter in ("ا", "ى") and sound in TANWEEN:
                out.append(_ArudiUnit("ن", Diacritic.SUKUN, idx, R3_TANWEEN))
                j += 1
                continue

            # bare alef cascade: connective (silent) or long vowel
            if letter == "ا" and not unit.marks:
                if j == 0 and wi == 0:
                    # verse-initial connective alef is pronounced; fatha is
                    # the conventional article reading
                    out.append(_ArudiUnit(letter, Diacritic.FATHA, idx, R5_WASL))
                    j += 1
                    continue
                if j == 0:
                    # word-initial elsewhere: silent; elide a preceding bare
                    # madd letter (its sukun was assigned by R4)
                    if out and out[-1].rule == R4_MADD and out[-1].letter in MADD_LETTERS:
                        out.pop()
                    j += 1
                    continue
                if nxt is not None and (
                    nxt.sound_mark is Diacritic.SUKUN or nxt.has_shadda
                ):
                    # wasl after a one-letter prefix (وَالْحَمْد، وَاسْتَمَعَ، وَالَّذِي)
                    j += 1
                    continue
                if (
                    nxt is not None
                    and nxt.letter == "ل"
                    and not nxt.marks
                    and j + 2 < len(word)
                    and word[j + 2][0].has_shadda
                ):
                    # sun-letter article after a prefix: alef and lam silent
                    j += 2
                    continue
                out.append(_ArudiUnit(letter, Diacritic.SUKUN, idx, R4_MADD))
                j += 1
                continue

            # bare article lam before a shadda letter (sun assimilation)
            if (
                letter == "ل"
                and not unit.marks
                and nxt is not None
                and nxt.has_shadda
                and j >= 1
                and j <= 2
                and word[j - 1][0].letter == "ا"
                and not (word[j - 1][0].marks - {Diacritic.FATHA})
            ):
                j += 1
                continue

            # bare alef maqsura: long vowel
            if letter == "ى" and not unit.marks:
                out.append(_ArudiUnit(letter, Diacritic.SUKUN, idx, R4_MADD))
                j += 1
                continue

            # bare waw/ya after a vowel-marked letter: long vowel or glide
            if (
                letter in ("و", "ي")
                and not unit.marks
                and j > 0
                and out
                and out[-1].mark in PLAIN_VOWELS
            ):
                out.append(_ArudiUnit(letter, Diacritic.SUKUN, idx, R4_MADD))
                j += 1
                continue

            # gemination and/or nunation
            if unit.has_shadda:
                out.append(_ArudiUnit(letter, Diacritic.SUKUN, idx, R2_SHADDA))
                if sound in TANWEEN:
                    out.append(_ArudiUnit(letter, TANWEEN_TO_VOWEL[sound], idx, R2_SHADDA))
                    out.append(_ArudiUnit("ن", Diacritic.SUKUN, idx, R3_TANWEEN))
                    if nxt is not None and nxt.letter in ("ا", "ى") and not nxt.marks:
                        j += 1  # silent seat
                else:
                    out.append(_ArudiUnit(letter, sound, idx, R2_SHADDA))
                j += 1
                continue
            if sound in TANWEEN:
                out.append(_ArudiUnit(letter, TANWEEN_TO_VOWEL[sound], idx, R3_TANWEEN))
                out.append(_ArudiUnit("ن", Diacritic.SUKUN, idx, R3_TANWEEN))
                if nxt is not None and nxt.letter in ("ا", "ى") and not nxt.marks:
                    j += 1  # silent seat
                j += 1
                continue

            out.append(_ArudiUnit(letter, sound, idx, R1_KEEP))
            j += 1

    if final_lengthening and out:
        last = out[-1]
        if last.mark in PLAIN_VOWELS:
            out.append(
                _ArudiUnit(_VOWEL_TO_MADD[last.mark], Diacritic.SUKUN, last.source, R7_FINAL)
            )
        elif last.mark is None:
            out[-1] = _ArudiUnit(last.letter, Diacritic.SUKUN, last.source, R7_FINAL)

    return out


def _check_coverage(text: NormalizedText, min_coverage: float) -> None:
    coverage = diacritic_coverage(text)
    if coverage < min_coverage:
        raise IncompleteDiacritization(coverage, min_coverage, uncovered_offsets(text))


def _units_to_binary(units: list) -> tuple:
    if not units:
        raise EmptyText("no letters to scan")
    bits = []
    trace = []
    for k, u in enumerate(units):
        if u.mark in PLAIN_VOWELS or u.mark in TANWEEN:
            bit = "1"
        elif u.mark is Diacritic.SUKUN:
            bit = "0"
        elif u.mark is None:
            raise UnmarkedLetter(u.letter, k)
        else:  # pragma: no cover - marks are restricted above
            raise UnmarkedLetter(u.letter, k, f"carries unexpected mark {u.mark}")
        bits.append(bit)
        trace.append(TraceStep(bit, u.source, u.rule))
    return "".join(bits), tuple(trace)


def to_arudi_writing(
    verse: NormalizedText,
    min_coverage: float = MIN_COVERAGE,
    final_lengthening: bool = True,
) -> NormalizedText:
    """Rewrite a normalized verse into its phonetically explicit form.

    Requires diacritic coverage >= ``min_coverage``; raises
    :class:`IncompleteDiacritization` otherwise, listing offending offsets.
    ``final_lengthening`` applies the hemistich-final rule (R7); disable it
    when rewriting an isolated word or foot name rather than a verse end.
    """
    if not verse.letters:
        raise EmptyText("cannot rewrite a verse with no letters")
    _check_coverage(verse, min_coverage)
    units = _rewrite(verse, final_lengthening=final_lengthening)
    return NormalizedText(
        tuple(
            Unit(u.letter, frozenset() if u.mark is None else frozenset({u.mark}), u.source)
            for u in units
        )
    )


def to_binary(arudi: NormalizedText) -> tuple:
    """Map arudi writing to (pattern, trace): vowels '1', sukun '0'.

    Every letter must carry exactly one vowel or sukun mark; raises
    :class:`UnmarkedLetter` naming the first offender. Trace sources here
    index the input's units (provenance of upstream rewriting is kept by
    :func:`scan_hemistich`, which composes the steps internally).
    """
    letters = arudi.letters
    if not letters:
        raise EmptyText("no letters to scan")
    units = []
    for i, u in enumerate(arudi.units):
        if u.is_separator:
            continue
        mark = u.sound_mark
        if u.has_shadda:
            raise UnmarkedLetter(u.letter, i, "still carries shadda (not arudi form)")
        units.append(_ArudiUnit(u.letter, mark, i, R1_KEEP))
    return _units_to_binary(units)


def scan_hemistich(
    text: str,
    min_coverage: float = MIN_COVERAGE,
    final_lengthening: bool = True,
) -> tuple:
    """Normalize, rewrite and scan one hemistich.

    Returns (pattern, trace); trace sources index the units of
    ``normalize_unicode(text)``.
    """
    normalized = normalize_unicode(text)
    if not normalized.letters:
        raise EmptyText("hemistich contains no Arabic letters")
    _check_coverage(normalized, min_coverage)
    return _units_to_binary(_rewrite(normalized, final_lengthening=final_lengthening))


def scan_bait(bait: tuple, min_coverage: float = MIN_COVERAGE) -> tuple:
    """Scan a (sadr, ajuz) pair; errors name the failing half."""
    results = []
    for name, half in zip(("sadr", "ajuz"), bait):
        try:
            results.append(scan_hemistich(half, min_coverage=min_coverage))
        except (EmptyText, IncompleteDiacritization, UnmarkedLetter) as exc:
            exc.args = (f"{name}: {exc.args[0] if exc.args else exc}",)
            raise
    return tuple(results)
