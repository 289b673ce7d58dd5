"""Shared fixture builders for the test suite."""

from __future__ import annotations

import random

from qasida.corpus import Poem

FATHA = "َ"
DAMMA = "ُ"
KASRA = "ِ"
SUKUN = "ْ"


def pattern_text(pattern: str) -> str:
    """A synthetic hemistich that scans exactly to ``pattern``.

    Every bit becomes an explicitly marked letter; the final letter must
    be '0' (a vowel-final hemistich gains a trailing sukun bit by the
    final-lengthening rule, so '1'-final patterns are not realizable).
    """
    if not pattern or pattern.strip("01"):
        raise ValueError(f"not a binary pattern: {pattern!r}")
    if pattern[-1] != "0":
        raise ValueError("only '0'-final patterns are realizable as text")
    return "".join("ب" + (FATHA if b == "1" else SUKUN) for b in pattern)


def zero_final_variants(db, meter: int) -> list:
    """The meter's stored variants realizable as hemistich text."""
    from qasida.meterdb import enumerate_variants

    return [v for v in enumerate_variants(db, meter) if v.endswith("0")]


def random_poem(db, meter: int, rng: random.Random, hemistiches: int = 4,
                flip_bits: int = 0) -> Poem:
    """A synthetic poem realizing random stored variants of ``meter``.

    ``flip_bits`` corrupts that many random non-final bits per hemistich,
    producing near-miss patterns.
    """
    variants = zero_final_variants(db, meter)
    verses = []
    for _ in range(hemistiches):
        bits = list(rng.choice(variants))
        for _ in range(flip_bits):
            k = rng.randrange(len(bits) - 1)
            bits[k] = "1" if bits[k] == "0" else "0"
        verses.append(pattern_text("".join(bits)))
    return Poem(verses=verses, meter=meter)


ARABIC_SAMPLE = "بتثجحخدذرزسشصضطظعغفقكلمنهوي"


def random_verse(rng: random.Random, letters: int) -> str:
    """A fully marked random verse of ``letters`` base letters."""
    marks = (FATHA, DAMMA, KASRA, SUKUN)
    return "".join(
        rng.choice(ARABIC_SAMPLE) + rng.choice(marks) for _ in range(letters)
    )
