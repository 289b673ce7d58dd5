"""The sixteen-meter pattern database.

A meter is a hemistich template: an ordered list of foot slots, each with a
canonical binary pattern and a set of admissible variant patterns (classical
foot alterations). Full hemistich variants are the concatenated cartesian
product of the per-slot sets.

The bundled seed database lives in ``qasida/data/meters.json``; its foot
names are fully diacritized so that scanning a name letter-by-letter
reproduces the stored pattern.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from importlib import resources

from .errors import ParseError, UnknownMeter, ValidationError, VariantExplosion

METER_COUNT = 16

#: Hard cap on a single meter's variant product.
MAX_VARIANTS = 10**6

_BITS = frozenset("01")


@dataclass(frozen=True)
class FootSlot:
    """One tafeelah position: diacritized name, canonical and variants."""

    name: str
    canonical: str
    variants: tuple

    def __post_init__(self):
        if self.canonical not in self.variants:
            raise ValidationError(
                f"slot {self.name!r}: canonical {self.canonical!r} missing from variants"
            )


@dataclass(frozen=True)
class MeterTemplate:
    index: int
    name_ar: str
    name_translit: str
    feet: tuple

    @property
    def canonical_pattern(self) -> str:
        return "".join(f.canonical for f in self.feet)

    @property
    def variant_count(self) -> int:
        n = 1
        for f in self.feet:
            n *= len(f.variants)
        return n


@dataclass(frozen=True)
class PatternDB:
    """All sixteen meter templates plus the source checksum."""

    templates: tuple
    checksum: str

    def template(self, meter: int) -> MeterTemplate:
        if not isinstance(meter, int) or isinstance(meter, bool) or not 0 <= meter < METER_COUNT:
            raise UnknownMeter(f"meter index must be 0..{METER_COUNT - 1}, got {meter!r}")
        return self.templates[meter]

    def index_of(self, name: str) -> int:
        """Resolve a transliterated (case-insensitive) or Arabic name."""
        wanted = name.strip()
        for t in self.templates:
            if t.name_ar == wanted or t.name_translit.lower() == wanted.lower():
                return t.index
        raise UnknownMeter(f"unknown meter name {name!r}")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValidationError(message)


def _check_pattern(p, where: str) -> str:
    """Field-level pattern checks raise ParseError (malformed field content)."""
    if not isinstance(p, str) or p == "":
        raise ParseError(f"{where}: pattern must be a non-empty string", field=where)
    if not set(p) <= _BITS:
        raise ParseError(
            f"{where}: pattern {p!r} contains non-binary characters", field=where
        )
    return p


def _validate(records) -> tuple:
    _require(isinstance(records, list), "database root must be an array")
    _require(
        len(records) == METER_COUNT,
        f"database must hold exactly {METER_COUNT} meters, found {len(records)}",
    )
    templates = []
    for pos, rec in enumerate(records):
        _require(isinstance(rec, dict), f"record {pos}: not an object")
        missing = {"index", "name_ar", "name_translit", "feet"} - rec.keys()
        _require(not missing, f"record {pos}: missing fields {sorted(missing)}")
        _require(rec["index"] == pos, f"record {pos}: index {rec['index']!r} out of order")
        feet = []
        _require(
            isinstance(rec["feet"], list) and rec["feet"],
            f"meter {pos}: feet must be a non-empty array",
        )
        for fpos, foot in enumerate(rec["feet"]):
            where = f"meter {pos} foot {fpos}"
            _require(isinstance(foot, dict), f"{where}: not an object")
            fmissing = {"name", "canonical", "variants"} - foot.keys()
            _require(not fmissing, f"{where}: missing fields {sorted(fmissing)}")
            canonical = _check_pattern(foot["canonical"], where)
            _require(
                isinstance(foot["variants"], list) and foot["variants"],
                f"{where}: variants must be a non-empty array",
            )
            variants = tuple(_check_pattern(v, where) for v in foot["variants"])
            _require(
                len(set(variants)) == len(variants),
                f"{where}: duplicate variants",
            )
            _require(
                canonical in variants,
                f"{where}: canonical {canonical!r} missing from variants",
            )
            feet.append(FootSlot(foot["name"], canonical, variants))
        templates.append(
            MeterTemplate(pos, rec["name_ar"], rec["name_translit"], tuple(feet))
        )

    for t in templates:
        if t.variant_count > MAX_VARIANTS:
            raise VariantExplosion(
                f"meter {t.index} ({t.name_translit}) enumerates {t.variant_count} variants"
            )
        combos = list(itertools.product(*(f.variants for f in t.feet)))
        joined = ["".join(c) for c in combos]
        _require(
            len(set(joined)) == len(joined),
            f"meter {t.index} ({t.name_translit}): variant product has duplicate patterns",
        )
    return tuple(templates)


def loads(data: str, checksum: str | None = None) -> PatternDB:
    """Parse and validate a database from a JSON string."""
    try:
        records = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    if checksum is None:
        checksum = hashlib.sha256(data.encode("utf-8")).hexdigest()
    return PatternDB(_validate(records), checksum)


def load(path=None) -> PatternDB:
    """Load a database file; ``None`` loads the bundled seed."""
    if path is None:
        data = (
            resources.files("qasida").joinpath("data/meters.json").read_text("utf-8")
        )
    else:
        with open(path, encoding="utf-8") as fh:
            data = fh.read()
    return loads(data)


def serialize(db: PatternDB) -> str:
    """Render a database back to its JSON form (round-trips through loads)."""
    records = [
        {
            "index": t.index,
            "name_ar": t.name_ar,
            "name_translit": t.name_translit,
            "feet": [
                {"name": f.name, "canonical": f.canonical, "variants": list(f.variants)}
                for f in t.feet
            ],
        }
        for t in db.templates
    ]
    return json.dumps(records, ensure_ascii=False, indent=2) + "\n"


def save(db: PatternDB, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(db))


def canonical_pattern(db: PatternDB, meter: int) -> str:
    """The meter's canonical hemistich pattern (concatenated feet)."""
    return db.template(meter).canonical_pattern


def enumerate_variants(db: PatternDB, meter: int):
    """Lazily yield every full hemistich variant of a meter.

    Deterministic order (slot-major cartesian product); load-time validation
    guarantees the product is duplicate-free.
    """
    t = db.template(meter)
    if t.variant_count > MAX_VARIANTS:
        raise VariantExplosion(
            f"meter {meter} enumerates {t.variant_count} variants"
        )
    for combo in itertools.product(*(f.variants for f in t.feet)):
        yield "".join(combo)


def meters(db: PatternDB) -> list:
    """(index, transliterated name) pairs, index order."""
    return [(t.index, t.name_translit) for t in db.templates]
