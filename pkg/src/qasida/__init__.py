"""qasida: rule-based Arabic prosody.

Scans diacritized poetry into binary Arudi patterns, identifies the
meter among the 16 classical classes by similarity search over a variant
database, explains mismatches as minimal insert/delete/flip edits, and
ships the corpus and evaluation tooling around that engine.
"""

from .classify import (
    Qafiyah,
    Theme,
    bucket_era,
    classify_hemistich,
    classify_poem,
    extract_qafiyah,
    poem_meter_ranking,
    predict_arudi,
)
from .corpus import (
    SPECIAL_TOKENS,
    CleanReport,
    Poem,
    Vocab,
    build_vocab,
    clean,
    decode,
    dedupe_against,
    encode,
    encode_corpus,
    filter_by_coverage,
    load_jsonl,
    write_jsonl,
)
from .errors import QasidaError
from .matcher import (
    EditOp,
    MatchResult,
    apply_script,
    best_match,
    best_variant,
    edit_script,
    similarity,
)
from .meterdb import METER_COUNT, PatternDB, canonical_pattern, enumerate_variants
from .metrics import arudi_report, confusion, der_wer, rhythm_eval
from .normalize import (
    NormalizedText,
    diacritic_coverage,
    normalize_unicode,
    random_diacritic_dropout,
    strip_diacritics,
)
from .scansion import (
    MIN_COVERAGE,
    scan_bait,
    scan_hemistich,
    to_arudi_writing,
    to_binary,
)

__version__ = "1.0.0"

__all__ = [
    "METER_COUNT",
    "MIN_COVERAGE",
    "SPECIAL_TOKENS",
    "CleanReport",
    "EditOp",
    "MatchResult",
    "NormalizedText",
    "PatternDB",
    "Poem",
    "Qafiyah",
    "QasidaError",
    "Theme",
    "Vocab",
    "__version__",
    "apply_script",
    "arudi_report",
    "best_match",
    "best_variant",
    "bucket_era",
    "build_vocab",
    "canonical_pattern",
    "classify_hemistich",
    "classify_poem",
    "clean",
    "confusion",
    "decode",
    "dedupe_against",
    "der_wer",
    "diacritic_coverage",
    "edit_script",
    "encode",
    "encode_corpus",
    "enumerate_variants",
    "extract_qafiyah",
    "filter_by_coverage",
    "load_jsonl",
    "normalize_unicode",
    "poem_meter_ranking",
    "predict_arudi",
    "random_diacritic_dropout",
    "rhythm_eval",
    "scan_bait",
    "scan_hemistich",
    "similarity",
    "strip_diacritics",
    "to_arudi_writing",
    "to_binary",
    "write_jsonl",
]
