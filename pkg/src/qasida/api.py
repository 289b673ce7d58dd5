"""Analysis orchestration and the canonical JSON serialization.

The CLI and the HTTP service both build their responses here so that
identical inputs produce byte-identical JSON on either surface.
"""

from __future__ import annotations

import json

from . import classify, meterdb
from .errors import EmptyPoem
from .normalize import diacritic_coverage, normalize_unicode
from .scansion import MIN_COVERAGE


def canonical_json(obj) -> str:
    """The one JSON encoding: sorted keys, compact, raw UTF-8."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def parse_poem_text(text: str) -> list:
    """Split poem text into hemistiches.

    Newlines separate baits; '#' separates the two halves of a bait.
    Blank lines and empty halves are dropped.
    """
    hemistiches = []
    for line in text.splitlines():
        for half in line.split("#"):
            if half.strip():
                hemistiches.append(half.strip())
    return hemistiches


def _trace_json(trace) -> list:
    return [
        {"bit": step.bit, "source": step.source, "rule": step.rule}
        for step in trace
    ]


def _hemistich_json(analysis) -> dict:
    match = analysis.match
    return {
        "text": analysis.text,
        "coverage": analysis.coverage,
        "pattern": analysis.pattern,
        "variant": match.variant if match else None,
        "similarity": match.similarity if match else None,
        "ops": [op.to_json() for op in match.script] if match else [],
        "error": analysis.error,
    }


def analyze(
    text: str,
    db: meterdb.PatternDB,
    meter_hint: int | None = None,
    min_coverage: float = MIN_COVERAGE,
) -> dict:
    """Analyze one poem; returns the response dictionary.

    Raises domain errors (EmptyPoem, NoScannableVerse, UnknownMeter, ...)
    when nothing can be analyzed at all; per-hemistich scansion failures
    are reported in-band as warnings.
    """
    hemistiches = parse_poem_text(text)
    if not hemistiches:
        raise EmptyPoem("no hemistiches found in input")
    if meter_hint is not None:
        db.template(meter_hint)  # validates the hint
    meter, analyses = classify.predict_arudi(
        hemistiches, db, meter=meter_hint, min_coverage=min_coverage
    )
    qafiyah = classify.extract_qafiyah(hemistiches)
    warnings = [
        f"hemistich {i + 1}: {a.error}"
        for i, a in enumerate(analyses)
        if a.error
    ]
    return {
        "meter": {
            "index": meter,
            "name": db.template(meter).name_translit,
        },
        "qafiyah": {"rawiy": qafiyah.rawiy, "tail": qafiyah.tail},
        "hemistiches": [_hemistich_json(a) for a in analyses],
        "warnings": warnings,
    }


def scan(text: str, min_coverage: float = MIN_COVERAGE) -> dict:
    """Scan one hemistich; returns {text, pattern, trace, coverage}."""
    from .scansion import scan_hemistich

    pattern, trace = scan_hemistich(text, min_coverage=min_coverage)
    coverage = diacritic_coverage(normalize_unicode(text))
    return {
        "text": text,
        "pattern": pattern,
        "trace": _trace_json(trace),
        "coverage": coverage,
    }


def meters(db: meterdb.PatternDB) -> list:
    """The 16 meters as [{index, name}] in index order."""
    return [
        {"index": index, "name": name} for index, name in meterdb.meters(db)
    ]
