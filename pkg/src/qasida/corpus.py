"""Corpus handling: poem records, JSONL I/O, cleaning, prompt encoding.

A poem is stored with a flat ``verses`` list (hemistiches in reading
order); ``baits`` pairs them. Cleaning applies four rules in order, each
poem attributed to the first rule that removes it:

1. unicode mapping (verses normalized in place; unparseable poems removed)
2. hemistich count must be even and non-zero
3. every hemistich must have at least 5 letters
4. a present meter label must resolve to one of the 16 classes
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field, replace

from . import classify, meterdb
from .errors import (
    EmptyPoem,
    MalformedTemplate,
    MissingSeparator,
    ParseError,
    QasidaError,
    UnencodableCharacter,
    UnknownMeter,
)
from .normalize import normalize_unicode, strip_diacritics, diacritic_coverage
from .scansion import MIN_COVERAGE

# --- special tokens ----------------------------------------------------------

PSEP_OPEN = "<|psep|>"
PSEP_CLOSE = "</|psep|>"
BSEP_OPEN = "<|bsep|>"
BSEP_CLOSE = "</|bsep|>"
VSEP = "<|vsep|>"
PAD = "<|pad|>"
END_OF_TEXT = "<|endoftext|>"

THEME_TOKENS = tuple(f"<|theme_{i}|>" for i in range(18))
METER_TOKENS = tuple(f"<|meter_{i}|>" for i in range(16))
RESERVED_TOKENS = tuple(f"<|res_{i}|>" for i in range(10))

#: The 51 special tokens in canonical table order.
SPECIAL_TOKENS = (
    PSEP_OPEN,
    PSEP_CLOSE,
    BSEP_OPEN,
    BSEP_CLOSE,
    VSEP,
    *THEME_TOKENS,
    *METER_TOKENS,
    *RESERVED_TOKENS,
    PAD,
    END_OF_TEXT,
)

UNKNOWN_THEME_ID = 17


# --- poem model ---------------------------------------------------------------

_KNOWN_FIELDS = ("id", "poet", "title", "era", "theme", "meter", "verses")


@dataclass
class Poem:
    """One poem record; unknown JSONL fields ride along in ``extra``."""

    verses: list
    id: str | None = None
    poet: str | None = None
    title: str | None = None
    era: int | str | None = None
    theme: int | None = None
    meter: int | str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def baits(self) -> list:
        """Hemistich pairs; requires an even verse count."""
        if len(self.verses) % 2:
            raise EmptyPoem(
                f"poem {self.id!r} has an odd number of hemistiches ({len(self.verses)})"
            )
        return [
            (self.verses[i], self.verses[i + 1]) for i in range(0, len(self.verses), 2)
        ]

    def to_json(self) -> dict:
        record = {}
        for name in _KNOWN_FIELDS:
            value = getattr(self, name)
            if value is not None and not (name == "verses" and value == []):
                record[name] = value
        record.update(self.extra)
        return record

    @classmethod
    def from_json(cls, record: dict) -> "Poem":
        if not isinstance(record, dict):
            raise ParseError(f"poem record must be an object, got {type(record).__name__}")
        verses = record.get("verses", [])
        if not isinstance(verses, list) or not all(isinstance(v, str) for v in verses):
            raise ParseError("'verses' must be an array of strings")
        extra = {k: v for k, v in record.items() if k not in _KNOWN_FIELDS}
        return cls(
            verses=list(verses),
            id=record.get("id"),
            poet=record.get("poet"),
            title=record.get("title"),
            era=record.get("era"),
            theme=record.get("theme"),
            meter=record.get("meter"),
            extra=extra,
        )


def load_jsonl(path, skip_errors: bool = False):
    """Read poems from JSONL.

    Returns (poems, errors): errors is a list of ParseError carrying
    1-based line numbers. With ``skip_errors`` false, the first bad line
    raises instead.
    """
    poems, errors = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                poems.append(Poem.from_json(record))
            except json.JSONDecodeError as exc:
                err = ParseError(f"invalid JSON: {exc.msg}", line=lineno)
                if not skip_errors:
                    raise err from exc
                errors.append(err)
            except ParseError as exc:
                err = ParseError(str(exc), line=lineno)
                if not skip_errors:
                    raise err from exc
                errors.append(err)
    return poems, errors


def write_jsonl(path, poems) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for poem in poems:
            fh.write(json.dumps(poem.to_json(), ensure_ascii=False) + "\n")


# --- cleaning -----------------------------------------------------------------

RULE_UNICODE = "rule1_unicode"
RULE_EVEN = "rule2_even_verses"
RULE_SHORT = "rule3_short_verse"
RULE_METER = "rule4_unknown_meter"

_CLEAN_RULES = (RULE_UNICODE, RULE_EVEN, RULE_SHORT, RULE_METER)

MIN_VERSE_LETTERS = 5


@dataclass
class CleanReport:
    """Removal counts per rule; input = kept + sum(removed)."""

    input: int = 0
    kept: int = 0
    removed: dict = field(default_factory=lambda: {r: 0 for r in _CLEAN_RULES})

    @property
    def total_removed(self) -> int:
        return sum(self.removed.values())


def resolve_meter(value, db: meterdb.PatternDB | None = None) -> int:
    """Map a meter label (index, translit or Arabic name) to an index."""
    if isinstance(value, bool):
        raise UnknownMeter(f"meter label {value!r} is not a meter")
    if isinstance(value, int):
        if 0 <= value < meterdb.METER_COUNT:
            return value
        raise UnknownMeter(f"meter index {value} out of range")
    if isinstance(value, str):
        if db is None:
            db = _default_db()
        return db.index_of(value)
    raise UnknownMeter(f"meter label {value!r} is not a meter")


_DB_CACHE = None


def _default_db() -> meterdb.PatternDB:
    global _DB_CACHE
    if _DB_CACHE is None:
        _DB_CACHE = meterdb.load()
    return _DB_CACHE


def clean(poems, db: meterdb.PatternDB | None = None) -> tuple:
    """Apply the four cleaning rules; returns (kept, CleanReport).

    Kept poems have normalized verse text and integer meter labels (when
    a label was present).
    """
    report = CleanReport(input=len(poems))
    kept = []
    for poem in poems:
        try:
            verses = [str(normalize_unicode(v)) for v in poem.verses]
        except QasidaError:
            report.removed[RULE_UNICODE] += 1
            continue
        if len(verses) == 0 or len(verses) % 2:
            report.removed[RULE_EVEN] += 1
            continue
        letter_counts = [len(normalize_unicode(v).letters) for v in verses]
        if any(n < MIN_VERSE_LETTERS for n in letter_counts):
            report.removed[RULE_SHORT] += 1
            continue
        meter = poem.meter
        if meter is not None:
            try:
                meter = resolve_meter(meter, db)
            except UnknownMeter:
                report.removed[RULE_METER] += 1
                continue
        kept.append(replace(poem, verses=verses, meter=meter))
    report.kept = len(kept)
    return kept, report


def filter_by_coverage(poems, min_coverage: float) -> list:
    """Keep poems whose every hemistich meets the coverage threshold."""
    kept = []
    for poem in poems:
        try:
            ok = all(
                diacritic_coverage(normalize_unicode(v)) >= min_coverage
                for v in poem.verses
            )
        except QasidaError:
            ok = False
        if ok:
            kept.append(poem)
    return kept


def augment_swap(verses, seed: int) -> list:
    """Swap each verse's hemistich halves with probability 0.5 (seeded).

    Verses are '#'-separated strings; each must contain exactly one '#'.
    """
    out = []
    rng = random.Random(seed)
    for verse in verses:
        if verse.count("#") != 1:
            raise MissingSeparator(
                f"verse needs exactly one '#' separator, found {verse.count('#')}: {verse!r}"
            )
        first, second = verse.split("#")
        out.append(f"{second}#{first}" if rng.random() < 0.5 else verse)
    return out


def _dedupe_key(hemistich: str) -> str:
    return str(strip_diacritics(normalize_unicode(hemistich)))


def dedupe_against(train, test) -> list:
    """Drop train poems sharing any hemistich with the test set.

    Comparison ignores diacritics and whitespace differences.
    """
    test_keys = {
        _dedupe_key(h) for poem in test for h in poem.verses
    }
    kept = []
    for poem in train:
        if any(_dedupe_key(h) in test_keys for h in poem.verses):
            continue
        kept.append(poem)
    return kept


# --- vocabulary and prompt encoding -------------------------------------------

@dataclass(frozen=True)
class Vocab:
    """Special tokens (fixed order) plus corpus characters (codepoint order)."""

    characters: tuple

    @property
    def specials(self) -> tuple:
        return SPECIAL_TOKENS

    @property
    def tokens(self) -> tuple:
        return (*SPECIAL_TOKENS, *self.characters)

    def __len__(self) -> int:
        return len(SPECIAL_TOKENS) + len(self.characters)

    def __contains__(self, ch: str) -> bool:
        return ch in self.characters or ch in SPECIAL_TOKENS


def build_vocab(poems) -> Vocab:
    """Character vocabulary of the corpus verses plus the special tokens."""
    chars = set()
    for poem in poems:
        for verse in poem.verses:
            chars.update(verse)
    return Vocab(characters=tuple(sorted(chars)))


_ESCAPES = {"\n": "\\n", "\\": "\\\\"}
_UNESCAPES = {"\\n": "\n", "\\\\": "\\"}


def write_vocab(path, vocab: Vocab) -> None:
    """One token per line (specials first); newline/backslash escaped."""
    with open(path, "w", encoding="utf-8") as fh:
        for token in vocab.tokens:
            fh.write(_ESCAPES.get(token, token) + "\n")


def read_vocab(path) -> Vocab:
    with open(path, encoding="utf-8") as fh:
        tokens = [
            _UNESCAPES.get(line, line)
            for line in (raw.rstrip("\n") for raw in fh)
        ]
    specials = tuple(tokens[: len(SPECIAL_TOKENS)])
    if specials != SPECIAL_TOKENS:
        raise ParseError("vocab file does not start with the special-token table")
    return Vocab(characters=tuple(tokens[len(SPECIAL_TOKENS):]))


def encode(poem: Poem, vocab: Vocab, db: meterdb.PatternDB | None = None) -> str:
    """Render a poem to its prompt string.

    Template (whitespace exact): header ``<|meter_n|> RAWIY <|theme_k|>``,
    one newline, then the bait blocks inside ``<|psep|>``.

    The meter is back-filled by classification when absent (requires a
    database). Verse characters must be in the vocabulary.
    """
    if not poem.verses:
        raise EmptyPoem("cannot encode a poem with no verses")
    meter = poem.meter
    if meter is None:
        if db is None:
            raise UnknownMeter(
                "poem has no meter label and no database was given for back-fill"
            )
        meter, _ = classify.classify_poem(poem.verses, db)
    else:
        meter = resolve_meter(meter, db)
    theme = poem.theme if isinstance(poem.theme, int) and 0 <= poem.theme < 18 else UNKNOWN_THEME_ID
    rawiy = classify.extract_qafiyah(poem.verses).rawiy
    for ch in rawiy + "".join(poem.verses):
        if ch not in vocab.characters:
            raise UnencodableCharacter(ch)
    body = "".join(
        f"{BSEP_OPEN}{sadr}{VSEP}{ajuz}{BSEP_CLOSE}" for sadr, ajuz in poem.baits
    )
    return (
        f"{METER_TOKENS[meter]} {rawiy} {THEME_TOKENS[theme]}\n"
        f"{PSEP_OPEN}{body}{PSEP_CLOSE}"
    )


def _expect(text: str, pos: int, token: str) -> int:
    if not text.startswith(token, pos):
        raise MalformedTemplate(
            f"expected {token!r} at offset {pos}"
        )
    return pos + len(token)


def decode(prompt: str, vocab: Vocab | None = None) -> Poem:
    """Parse a prompt string back to a Poem (exact inverse of encode)."""
    header = re.match(r"<\|meter_(\d+)\|> (.*?) <\|theme_(\d+)\|>\n", prompt)
    if not header:
        raise MalformedTemplate("missing or malformed header (meter, qafiyah, theme)")
    meter, rawiy, theme = int(header.group(1)), header.group(2), int(header.group(3))
    if meter >= len(METER_TOKENS):
        raise MalformedTemplate(f"meter token id {meter} out of range")
    if theme >= len(THEME_TOKENS):
        raise MalformedTemplate(f"theme token id {theme} out of range")
    pos = _expect(prompt, header.end(), PSEP_OPEN)
    verses = []
    while not prompt.startswith(PSEP_CLOSE, pos):
        if not prompt.startswith(BSEP_OPEN, pos):
            raise MalformedTemplate(
                f"expected {BSEP_OPEN!r} or {PSEP_CLOSE!r} at offset {pos}"
            )
        pos = _expect(prompt, pos, BSEP_OPEN)
        end = prompt.find(BSEP_CLOSE, pos)
        if end < 0:
            raise MalformedTemplate(f"missing {BSEP_CLOSE!r}")
        bait = prompt[pos:end]
        if bait.count(VSEP) != 1:
            raise MalformedTemplate(f"bait must contain exactly one {VSEP!r}")
        verses.extend(bait.split(VSEP))
        pos = end + len(BSEP_CLOSE)
    pos = _expect(prompt, pos, PSEP_CLOSE)
    if pos != len(prompt):
        raise MalformedTemplate(f"trailing content after {PSEP_CLOSE!r}")
    if not verses:
        raise MalformedTemplate("prompt contains no baits")
    return Poem(verses=verses, meter=meter, theme=theme, extra={"rawiy": rawiy})


def tokenize(text: str, vocab: Vocab) -> list:
    """Greedy longest-match split: specials first, then single characters.

    Every non-special character must be in the vocabulary, except the
    space/newline glue that the prompt template itself emits.
    """
    specials = sorted(SPECIAL_TOKENS, key=len, reverse=True)
    out = []
    pos = 0
    while pos < len(text):
        for token in specials:
            if text.startswith(token, pos):
                out.append(token)
                pos += len(token)
                break
        else:
            ch = text[pos]
            if ch not in (" ", "\n") and ch not in vocab.characters:
                raise UnencodableCharacter(ch)
            out.append(ch)
            pos += 1
    return out


@dataclass
class EncodeReport:
    encoded: int = 0
    mismatched: int = 0
    unscannable: int = 0


def encode_corpus(
    poems,
    vocab: Vocab,
    db: meterdb.PatternDB,
    check_meter: bool = True,
    min_coverage: float = MIN_COVERAGE,
) -> tuple:
    """Encode many poems, back-filling meters and (optionally) dropping
    poems whose classified meter disagrees with their label.

    Returns (prompts, EncodeReport).
    """
    prompts = []
    report = EncodeReport()
    for poem in poems:
        label = None if poem.meter is None else resolve_meter(poem.meter, db)
        try:
            if label is None or check_meter:
                predicted, _ = classify.classify_poem(
                    poem.verses, db, min_coverage=min_coverage
                )
            else:
                predicted = label
        except QasidaError:
            report.unscannable += 1
            continue
        if label is not None and check_meter and predicted != label:
            report.mismatched += 1
            continue
        meter = label if label is not None else predicted
        prompts.append(encode(replace(poem, meter=meter), vocab))
        report.encoded += 1
    return prompts, report


def write_encoded(path, prompts) -> None:
    """Each record: the prompt, the end-of-text token, a newline."""
    with open(path, "w", encoding="utf-8") as fh:
        for prompt in prompts:
            fh.write(prompt + END_OF_TEXT + "\n")


def read_encoded(path) -> list:
    with open(path, encoding="utf-8") as fh:
        data = fh.read()
    records = data.split(END_OF_TEXT + "\n")
    if records and records[-1] == "":
        records.pop()
    return records
