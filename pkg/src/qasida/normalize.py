"""Unicode normalization and diacritic handling for Arabic poetic text.

The rest of the engine works on :class:`NormalizedText`: a sequence of
letter units, each carrying at most one "sound" mark (a short vowel, a
tanween, or sukun) plus an optional shadda. Normalization folds presentation
forms and lookalike letters, removes tatweel and annotation marks, collapses
whitespace, and attaches each diacritic to the letter written directly
before it.
"""

from __future__ import annotations

import random
import unicodedata
from dataclasses import dataclass, replace
from enum import Enum

from .errors import EmptyText, OrphanDiacritic


class Diacritic(Enum):
    """The eight diacritic kinds the engine recognizes."""

    FATHA = "َ"
    DAMMA = "ُ"
    KASRA = "ِ"
    FATHATAN = "ً"
    DAMMATAN = "ٌ"
    KASRATAN = "ٍ"
    SUKUN = "ْ"
    SHADDA = "ّ"


PLAIN_VOWELS = frozenset({Diacritic.FATHA, Diacritic.DAMMA, Diacritic.KASRA})
TANWEEN = frozenset({Diacritic.FATHATAN, Diacritic.DAMMATAN, Diacritic.KASRATAN})
VOWELS = PLAIN_VOWELS | TANWEEN
#: Marks that decide a letter's bit: the six vowels plus sukun.
SOUND_MARKS = VOWELS | {Diacritic.SUKUN}

TANWEEN_TO_VOWEL = {
    Diacritic.FATHATAN: Diacritic.FATHA,
    Diacritic.DAMMATAN: Diacritic.DAMMA,
    Diacritic.KASRATAN: Diacritic.KASRA,
}

_MARK_BY_CHAR = {d.value: d for d in Diacritic}

#: The 36-letter base inventory (after lookalike folding).
ARABIC_LETTERS = frozenset("ءآأؤإئابةتثجحخدذرزسشصضطظعغفقكلمنهوىي")

#: Letters that conventionally never carry a mark (exempt from coverage).
BARE_BY_CONVENTION = frozenset("اآىء")

#: Long-vowel letters.
MADD_LETTERS = frozenset("اىوي")

SEPARATORS = frozenset({" ", "#"})

# Lookalike folding applied after per-character compatibility normalization.
_LETTER_FOLD = {
    "ٱ": "ا",  # alef wasla -> alef
    "ی": "ي",  # farsi yeh -> yeh
    "ک": "ك",  # keheh -> kaf
    "ہ": "ه",  # heh goal -> heh
    "ة": "ة",  # (identity, kept explicit: ta marbuta is a letter)
}

# Combining marks composed manually so source offsets survive per-character
# normalization.
_COMPOSE_ABOVE_MADDA = {"ا": "آ"}                     # ا + ٓ -> آ
_COMPOSE_ABOVE_HAMZA = {"ا": "أ", "و": "ؤ",
                        "ي": "ئ", "ى": "ئ"}  # + ٔ
_COMPOSE_BELOW_HAMZA = {"ا": "إ"}                     # ا + ٕ -> إ


@dataclass(frozen=True)
class Unit:
    """One written position: a letter (or separator) plus its marks.

    ``offset`` indexes the first source character that produced the unit in
    the *original* raw string.
    """

    letter: str
    marks: frozenset
    offset: int

    @property
    def is_separator(self) -> bool:
        return self.letter in SEPARATORS

    @property
    def sound_mark(self) -> Diacritic | None:
        """The single vowel/tanween/sukun mark, if any."""
        for m in self.marks:
            if m in SOUND_MARKS:
                return m
        return None

    @property
    def has_shadda(self) -> bool:
        return Diacritic.SHADDA in self.marks

    def text(self) -> str:
        """Serialize as letter + shadda + sound mark (canonical order)."""
        out = self.letter
        if self.has_shadda:
            out += Diacritic.SHADDA.value
        mark = self.sound_mark
        if mark is not None:
            out += mark.value
        return out


@dataclass(frozen=True)
class NormalizedText:
    """An immutable normalized letter sequence."""

    units: tuple

    def __str__(self) -> str:
        return "".join(u.text() for u in self.units)

    def __len__(self) -> int:
        return len(self.units)

    @property
    def letters(self) -> tuple:
        """All non-separator units, in order."""
        return tuple(u for u in self.units if not u.is_separator)

    def words(self) -> list:
        """Letter units grouped between separators.

        Each element is a list of (unit, unit_index) pairs, where the index
        points back into :attr:`units`.
        """
        words, current = [], []
        for i, u in enumerate(self.units):
            if u.is_separator:
                if current:
                    words.append(current)
                    current = []
            else:
                current.append((u, i))
        if current:
            words.append(current)
        return words


def _is_arabic_letter(ch: str) -> bool:
    return ch in ARABIC_LETTERS


def normalize_unicode(raw: str) -> NormalizedText:
    """Map a raw string to :class:`NormalizedText`.

    Folds presentation forms (per-character compatibility normalization, so
    offsets stay exact), folds lookalike letters, removes tatweel and
    annotation marks, drops every non-Arabic symbol except ``#`` and
    whitespace, collapses whitespace runs, and attaches diacritics to the
    directly preceding letter. A conflicting second sound mark on the same
    letter wins (typo tolerance); shadda merges.

    Raises :class:`OrphanDiacritic` when a diacritic has no directly
    preceding letter (leading, or separated from any letter by a dropped or
    separator character).
    """
    units: list = []
    pending_space_at: int | None = None
    # Whether the previous *source* character belonged to the last letter
    # unit (the letter itself or one of its marks).
    can_attach = False

    def flush_space() -> None:
        nonlocal pending_space_at
        if pending_space_at is not None and units:
            units.append(Unit(" ", frozenset(), pending_space_at))
        pending_space_at = None

    for i, ch in enumerate(raw):
        for c in unicodedata.normalize("NFKC", ch):
            c = _LETTER_FOLD.get(c, c)
            if c == "ـ":  # tatweel: a stretch, marks still attach through it
                continue
            if c in _MARK_BY_CHAR:
                if not units or not can_attach or units[-1].is_separator:
                    raise OrphanDiacritic(i, c)
                mark = _MARK_BY_CHAR[c]
                last = units[-1]
                marks = set(last.marks)
                if mark is not Diacritic.SHADDA:
                    marks -= SOUND_MARKS  # last conflicting sound mark wins
                marks.add(mark)
                units[-1] = replace(last, marks=frozenset(marks))
                continue
            if c in ("ٓ", "ٔ", "ٕ"):  # combining madda / hamza
                table = {"ٓ": _COMPOSE_ABOVE_MADDA,
                         "ٔ": _COMPOSE_ABOVE_HAMZA,
                         "ٕ": _COMPOSE_BELOW_HAMZA}[c]
                if units and can_attach and units[-1].letter in table:
                    units[-1] = replace(units[-1], letter=table[units[-1].letter])
                # not composable: the annotation is dropped
                continue
            if _is_arabic_letter(c):
                flush_space()
                units.append(Unit(c, frozenset(), i))
                can_attach = True
                continue
            if c == "#":
                flush_space()
                units.append(Unit("#", frozenset(), i))
                can_attach = False
                continue
            if c.isspace():
                if pending_space_at is None:
                    pending_space_at = i
                can_attach = False
                continue
            # anything else (digits, Latin, punctuation, annotation marks) drops
            can_attach = False

    return NormalizedText(tuple(units))


def strip_diacritics(text: NormalizedText) -> NormalizedText:
    """Remove every mark, keeping letters, separators and offsets."""
    return NormalizedText(
        tuple(replace(u, marks=frozenset()) for u in text.units)
    )


def _eligible_flags(text: NormalizedText) -> list:
    """Coverage eligibility per non-separator letter, in letter order.

    Exempt: bare alef (plain and madda), alef maqsura and hamza-on-line
    (never marked by convention); bare madd waw after a damma-marked
    letter and bare madd ya after a kasra-marked letter within a word;
    and the silent bare lam of a sun-letter article (after alef, before a
    shadda letter). All are conventionally unmarked in fully diacritized
    text.
    """
    flags_by_index = {}
    for word in text.words():
        for k, (u, index) in enumerate(word):
            if u.letter in BARE_BY_CONVENTION:
                flags_by_index[index] = False
                continue
            if not u.marks and k > 0:
                prev = word[k - 1][0]
                if u.letter == "و" and prev.sound_mark is Diacritic.DAMMA:
                    flags_by_index[index] = False
                    continue
                if u.letter == "ي" and prev.sound_mark is Diacritic.KASRA:
                    flags_by_index[index] = False
                    continue
                if (
                    u.letter == "ل"
                    and k <= 2
                    and prev.letter == "ا"
                    and k + 1 < len(word)
                    and word[k + 1][0].has_shadda
                ):
                    flags_by_index[index] = False
                    continue
            flags_by_index[index] = True
    return [flags_by_index[i] for i, u in enumerate(text.units) if not u.is_separator]


def diacritic_coverage(text: NormalizedText) -> float:
    """Fraction of mark-eligible letters that carry a vowel or sukun mark.

    Raises :class:`EmptyText` for a text with no letters. A text whose
    letters are all exempt counts as fully marked (1.0).
    """
    letters = text.letters
    if not letters:
        raise EmptyText("cannot compute coverage of a text with no letters")
    flags = _eligible_flags(text)
    eligible = [u for u, f in zip(letters, flags) if f]
    if not eligible:
        return 1.0
    marked = sum(1 for u in eligible if u.marks & SOUND_MARKS)
    return marked / len(eligible)


def uncovered_offsets(text: NormalizedText) -> list:
    """Offsets of eligible letters that carry no vowel/sukun mark."""
    letters = text.letters
    flags = _eligible_flags(text)
    return [u.offset for u, f in zip(letters, flags)
            if f and not (u.marks & SOUND_MARKS)]


def random_diacritic_dropout(text: NormalizedText, rate: float, seed: int) -> NormalizedText:
    """Remove whole mark-sets per letter with probability ``rate``.

    One RNG draw per marked letter, in unit order; unmarked letters consume
    no randomness, so outputs are reproducible per (text, rate, seed).
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"dropout rate must be in [0, 1], got {rate}")
    rng = random.Random(seed)
    out = []
    for u in text.units:
        if u.marks and rng.random() < rate:
            u = replace(u, marks=frozenset())
        out.append(u)
    return NormalizedText(tuple(out))
