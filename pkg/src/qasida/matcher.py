"""Pattern similarity, minimal edit scripts, and variant search.

Similarity is the gestalt ratio 2*M / (|a|+|b|), where M counts the
characters inside recursively found longest matching blocks. Block
selection depends on operand order, and the raw ratio is *not* symmetric
(random binary pairs disagree in ~18% of cases), so the pair is
canonicalized (sorted) before computing; symmetry then holds by
construction and similarity("", "") == 1.0 by definition.

Edit scripts are minimal unit-cost scripts over {insert, delete, flip}
expressed against the observed pattern, ops ordered right-to-left so that
applying them in list order never shifts a later op's position.
"""

from __future__ import annotations

from dataclasses import dataclass
from difflib import SequenceMatcher

from . import meterdb
from .errors import EmptyPattern, InvalidPosition

INSERT = "insert"
DELETE = "delete"
FLIP = "flip"


@dataclass(frozen=True)
class EditOp:
    """One edit against the observed pattern.

    ``bit`` is the reference bit being inserted or flipped to; delete
    carries no bit.
    """

    kind: str
    position: int
    bit: str | None = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "position": self.position, "bit": self.bit}


@dataclass(frozen=True)
class MatchResult:
    """Best variant of one meter for an observed pattern."""

    meter: int
    variant: str
    similarity: float
    script: tuple

    def to_json(self) -> dict:
        return {
            "meter": self.meter,
            "variant": self.variant,
            "similarity": self.similarity,
            "ops": [op.to_json() for op in self.script],
        }


def similarity(a: str, b: str) -> float:
    """Gestalt ratio of two patterns, symmetric, in [0, 1]."""
    if not a and not b:
        return 1.0
    if a > b:
        a, b = b, a
    return SequenceMatcher(None, a, b, autojunk=False).ratio()


def edit_script(observed: str, reference: str) -> tuple:
    """Minimal edit script turning observed into reference.

    Unit costs; backtrace prefers flip > insert > delete > keep at equal
    cost, which places edits as far right as possible. Ops come out in
    right-to-left position order.
    """
    n, m = len(observed), len(reference)
    # dp[i][j] = distance between observed[:i] and reference[:j]
    dp = [list(range(m + 1))]
    for i in range(1, n + 1):
        row = [i] + [0] * m
        prev = dp[i - 1]
        oc = observed[i - 1]
        for j in range(1, m + 1):
            row[j] = min(
                prev[j - 1] + (oc != reference[j - 1]),
                row[j - 1] + 1,
                prev[j] + 1,
            )
        dp.append(row)

    ops = []
    i, j = n, m
    while i > 0 or j > 0:
        here = dp[i][j]
        if i > 0 and j > 0 and observed[i - 1] != reference[j - 1] and here == dp[i - 1][j - 1] + 1:
            ops.append(EditOp(FLIP, i - 1, reference[j - 1]))
            i -= 1
            j -= 1
        elif j > 0 and here == dp[i][j - 1] + 1:
            ops.append(EditOp(INSERT, i, reference[j - 1]))
            j -= 1
        elif i > 0 and here == dp[i - 1][j] + 1:
            ops.append(EditOp(DELETE, i - 1))
            i -= 1
        else:
            i -= 1
            j -= 1
    return tuple(ops)


def apply_script(observed: str, script) -> str:
    """Apply ops in list order; validates positions and flip bits."""
    s = observed
    for op in script:
        if op.kind == INSERT:
            if not 0 <= op.position <= len(s):
                raise InvalidPosition(INSERT, op.position, len(s))
            if op.bit not in ("0", "1"):
                raise ValueError(f"insert at {op.position} needs bit '0' or '1', got {op.bit!r}")
            s = s[: op.position] + op.bit + s[op.position:]
        elif op.kind == DELETE:
            if not 0 <= op.position < len(s):
                raise InvalidPosition(DELETE, op.position, len(s))
            s = s[: op.position] + s[op.position + 1:]
        elif op.kind == FLIP:
            if not 0 <= op.position < len(s):
                raise InvalidPosition(FLIP, op.position, len(s))
            if op.bit not in ("0", "1"):
                raise ValueError(f"flip at {op.position} needs bit '0' or '1', got {op.bit!r}")
            if s[op.position] == op.bit:
                raise InvalidPosition(FLIP, op.position, len(s))
            s = s[: op.position] + op.bit + s[op.position + 1:]
        else:
            raise ValueError(f"unknown op kind {op.kind!r}")
    return s


def _bit_counts(p: str) -> tuple:
    ones = p.count("1")
    return len(p) - ones, ones


def best_variant(observed: str, db: meterdb.PatternDB, meter: int) -> tuple:
    """(similarity, variant) of the meter's closest variant.

    Deterministic: ties keep the first variant in enumeration order. A
    cheap multiset upper bound prunes variants that cannot beat the
    current best before the full gestalt ratio runs.
    """
    o0, o1 = _bit_counts(observed)
    olen = len(observed)
    best_sim, best_var = -1.0, None
    for var in meterdb.enumerate_variants(db, meter):
        v0, v1 = _bit_counts(var)
        bound = 2 * (min(o0, v0) + min(o1, v1)) / (olen + len(var))
        if bound <= best_sim:
            continue
        sim = similarity(observed, var)
        if sim > best_sim:
            best_sim, best_var = sim, var
    return best_sim, best_var


def best_match(observed: str, db: meterdb.PatternDB, candidates=None) -> list:
    """Rank candidate meters by their closest variant.

    Returns one :class:`MatchResult` per candidate (default: all 16),
    sorted by similarity descending, then meter index ascending. Every
    result carries the minimal script observed -> matched variant.
    """
    if not observed:
        raise EmptyPattern("cannot match an empty pattern")
    if set(observed) - {"0", "1"}:
        raise EmptyPattern(f"pattern {observed!r} is not binary")
    meters = sorted(candidates) if candidates is not None else range(meterdb.METER_COUNT)
    results = []
    for m in meters:
        sim, var = best_variant(observed, db, m)
        results.append(MatchResult(m, var, sim, edit_script(observed, var)))
    results.sort(key=lambda r: (-r.similarity, r.meter))
    return results
