"""Exception hierarchy for the qasida engine.

Every domain failure raises a subclass of :class:`QasidaError`, so callers
(CLI, HTTP service) can distinguish domain errors from genuine bugs or I/O
problems with a single except clause.
"""


class QasidaError(Exception):
    """Base class for all qasida domain errors."""


# --- normalization ---------------------------------------------------------

class OrphanDiacritic(QasidaError):
    """A diacritic appeared with no letter directly before it."""

    def __init__(self, offset: int, char: str):
        self.offset = offset
        self.char = char
        super().__init__(
            f"diacritic {char!r} at offset {offset} has no preceding letter"
        )


class EmptyText(QasidaError):
    """An operation that needs at least one letter received none."""


# --- scansion ---------------------------------------------------------------

class IncompleteDiacritization(QasidaError):
    """Diacritic coverage is below the scansion threshold."""

    def __init__(self, coverage: float, minimum: float, offsets=()):
        self.coverage = coverage
        self.minimum = minimum
        self.offsets = tuple(offsets)
        super().__init__(
            f"diacritic coverage {coverage:.3f} is below the required "
            f"{minimum:.2f} (unmarked letters at offsets {list(self.offsets)})"
        )


class UnmarkedLetter(QasidaError):
    """A letter reached binary mapping without exactly one vowel/sukun mark."""

    def __init__(self, letter: str, index: int, detail: str = "carries no vowel or sukun mark"):
        self.letter = letter
        self.index = index
        super().__init__(f"letter {letter!r} at position {index} {detail}")


# --- meter database ---------------------------------------------------------

class ParseError(QasidaError):
    """A file or record could not be parsed.

    Carries the 1-based line number when the source is line-oriented, or
    the offending field's location for structured sources.
    """

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(QasidaError):
    """Structurally parseable data violated a database invariant."""


class UnknownMeter(QasidaError):
    """A meter index or name outside the 16 known classes."""


class VariantExplosion(QasidaError):
    """A variant cartesian product exceeded the safety bound."""


# --- matcher ----------------------------------------------------------------

class EmptyPattern(QasidaError):
    """A binary pattern (or pattern list) that must be non-empty was empty."""


class InvalidPosition(QasidaError):
    """An edit operation referenced a position outside the current string."""

    def __init__(self, kind: str, position: int, length: int):
        self.kind = kind
        self.position = position
        self.length = length
        super().__init__(
            f"{kind} position {position} invalid for string of length {length}"
        )


# --- classification ---------------------------------------------------------

class NoScannableVerse(QasidaError):
    """No hemistich of the poem could be scanned."""


class EmptyPoem(QasidaError):
    """A poem with no verses where at least one was required."""


# --- corpus -----------------------------------------------------------------

class MissingSeparator(QasidaError):
    """A verse string did not contain exactly one hemistich separator '#'."""


class UnencodableCharacter(QasidaError):
    """A character outside the vocabulary appeared during prompt encoding."""

    def __init__(self, char: str):
        self.char = char
        super().__init__(f"character {char!r} (U+{ord(char):04X}) is not in the vocabulary")


class MalformedTemplate(QasidaError):
    """A prompt string does not follow the encoding template."""


# --- metrics ----------------------------------------------------------------

class LetterMismatch(QasidaError):
    """Gold and predicted texts disagree on base letters."""


class LengthMismatch(QasidaError):
    """Two aligned sequences had different lengths."""
