"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 domain error (scansion,
validation, malformed corpus records), 3 I/O error. The meter database
path defaults to ``QASIDA_DB`` (bundled seed file otherwise); ``serve``
reads its default port from ``QASIDA_PORT``.
"""

from __future__ import annotations

import sys

import click

from . import api, corpus, meterdb, metrics
from .errors import QasidaError
from .matcher import EditOp
from .scansion import MIN_COVERAGE


def _load_db(path: str | None) -> meterdb.PatternDB:
    return meterdb.load(path) if path else meterdb.load()


_db_option = click.option(
    "--db",
    envvar="QASIDA_DB",
    default=None,
    help="Meter database JSON (default: bundled seed, or $QASIDA_DB).",
)
_coverage_option = click.option(
    "--min-coverage",
    type=float,
    default=MIN_COVERAGE,
    show_default=True,
    help="Diacritic coverage below which a hemistich is rejected.",
)


@click.group()
@click.version_option(package_name="qasida")
def cli() -> None:
    """Arabic prosody: scansion, meter identification, corpus tooling."""


def _read_input(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    with open(source, encoding="utf-8") as fh:
        return fh.read()


def _render_ops(pattern: str, ops) -> str:
    """Inline markers: [+bit] insert, [-] delete, [~bit] flip."""
    chars = list(pattern)
    for op in sorted(ops, key=lambda o: o.position, reverse=True):
        if op.kind == "insert":
            chars.insert(op.position, f"[+{op.bit}]")
        elif op.kind == "delete":
            chars[op.position] = "[-]"
        else:
            chars[op.position] = f"[~{op.bit}]"
    return "".join(chars)


def _render_text(report: dict) -> str:
    lines = [
        f"meter    {report['meter']['name']} ({report['meter']['index']})",
        f"qafiyah  {report['qafiyah']['rawiy']} (tail {report['qafiyah']['tail']})",
    ]
    for i, h in enumerate(report["hemistiches"], start=1):
        lines.append(f"hemistich {i}: {h['text']}")
        if h["error"]:
            lines.append(f"  error      {h['error']}")
            continue
        ops = [EditOp(o["kind"], o["position"], o["bit"]) for o in h["ops"]]
        lines.append(f"  pattern    {_render_ops(h['pattern'], ops)}")
        lines.append(
            f"  similarity {h['similarity']:.4f}  variant {h['variant']}"
            f"  coverage {h['coverage']:.2f}"
        )
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


@cli.command()
@click.argument("source")
@click.option("--json", "as_json", is_flag=True, help="Canonical JSON output.")
@click.option("--text", "as_text", is_flag=True, help="Human-readable output (default).")
@click.option("--meter", type=int, default=None, help="Meter index hint (0-15).")
@_db_option
@_coverage_option
def analyze(source, as_json, as_text, meter, db, min_coverage) -> None:
    """Analyze one poem from FILE (or '-' for stdin).

    Baits are separated by newlines, hemistiches by '#'.
    """
    if as_json and as_text:
        raise click.UsageError("--json and --text are mutually exclusive")
    report = api.analyze(
        _read_input(source), _load_db(db), meter_hint=meter, min_coverage=min_coverage
    )
    if as_json:
        click.echo(api.canonical_json(report))
    else:
        click.echo(_render_text(report))


@cli.command()
@click.argument("infile")
@click.argument("outfile")
@_db_option
def clean(infile, outfile, db) -> None:
    """Clean a JSONL corpus; writes kept poems, prints removal counts."""
    poems, errors = corpus.load_jsonl(infile, skip_errors=True)
    kept, report = corpus.clean(poems, _load_db(db))
    corpus.write_jsonl(outfile, kept)
    click.echo(f"input     {report.input}")
    for rule in sorted(report.removed):
        click.echo(f"{rule:<20}{report.removed[rule]}")
    click.echo(f"kept      {report.kept}")
    if errors:
        click.echo(f"unparsed lines skipped: {len(errors)}", err=True)


@cli.command()
@click.argument("infile")
@click.argument("outfile")
@click.option("--vocab", "vocab_path", required=True, help="Vocabulary file (from `qasida vocab`).")
@click.option(
    "--meter-check/--no-meter-check",
    default=True,
    show_default=True,
    help="Drop labeled poems whose classified meter disagrees with the label.",
)
@_db_option
@_coverage_option
def encode(infile, outfile, vocab_path, meter_check, db, min_coverage) -> None:
    """Encode a cleaned JSONL corpus into prompt records."""
    poems, _ = corpus.load_jsonl(infile)
    vocab = corpus.read_vocab(vocab_path)
    prompts, report = corpus.encode_corpus(
        poems,
        vocab,
        _load_db(db),
        check_meter=meter_check,
        min_coverage=min_coverage,
    )
    corpus.write_encoded(outfile, prompts)
    click.echo(
        f"encoded {report.encoded}  mismatched {report.mismatched}"
        f"  unscannable {report.unscannable}"
    )


@cli.command()
@click.argument("infile")
@click.argument("outfile")
def vocab(infile, outfile) -> None:
    """Build the character vocabulary of a JSONL corpus."""
    poems, _ = corpus.load_jsonl(infile)
    built = corpus.build_vocab(poems)
    corpus.write_vocab(outfile, built)
    click.echo(
        f"tokens {len(built)} (specials {len(built.specials)},"
        f" characters {len(built.characters)})"
    )


@cli.command(name="eval-der")
@click.argument("gold_file")
@click.argument("pred_file")
@click.option("--json", "as_json", is_flag=True, help="Canonical JSON output.")
def eval_der(gold_file, pred_file, as_json) -> None:
    """Score predicted diacritics against gold (line-aligned text files)."""
    gold_lines = _read_input(gold_file).splitlines()
    pred_lines = _read_input(pred_file).splitlines()
    if len(gold_lines) != len(pred_lines):
        raise click.UsageError(
            f"line counts differ: {len(gold_lines)} gold vs {len(pred_lines)} predicted"
        )
    score = metrics.der_wer("#".join(gold_lines), "#".join(pred_lines))
    if as_json:
        click.echo(api.canonical_json(score.to_json()))
    else:
        click.echo(f"DER   {score.der:.2f}")
        click.echo(f"WER   {score.wer:.2f}")
        click.echo(f"DER*  {score.der_star:.2f}")
        click.echo(f"WER*  {score.wer_star:.2f}")


@cli.command(name="eval-rhythm")
@click.argument("infile")
@click.option("--json", "as_json", is_flag=True, help="Canonical JSON output.")
@_db_option
@_coverage_option
def eval_rhythm(infile, as_json, db, min_coverage) -> None:
    """Majority-vote meter evaluation over a labeled JSONL corpus."""
    loaded_db = _load_db(db)
    poems, _ = corpus.load_jsonl(infile)
    labeled = [
        (corpus.resolve_meter(p.meter, loaded_db), p)
        for p in poems
        if p.meter is not None
    ]
    report = metrics.rhythm_eval(labeled, loaded_db, min_coverage=min_coverage)
    if as_json:
        click.echo(api.canonical_json(report.to_json()))
    else:
        click.echo(f"poems     {report.total} (unscannable {report.failed})")
        click.echo(f"accuracy  {report.accuracy:.2f}")
        click.echo(f"top-3     {report.top3:.2f}")
        click.echo(f"top-5     {report.top5:.2f}")
    if len(labeled) != len(poems):
        click.echo(f"ignored {len(poems) - len(labeled)} unlabeled poems", err=True)


@cli.command(name="db-validate")
@click.argument("db_file")
def db_validate(db_file) -> None:
    """Validate a meter database file."""
    loaded = meterdb.load(db_file)
    total = sum(loaded.template(i).variant_count for i in range(meterdb.METER_COUNT))
    click.echo(
        f"ok: {meterdb.METER_COUNT} meters, {total} variants,"
        f" checksum {loaded.checksum[:12]}"
    )


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--port",
    type=int,
    envvar="QASIDA_PORT",
    default=8000,
    show_default=True,
    help="Port (default from $QASIDA_PORT when set).",
)
@_db_option
def serve(host, port, db) -> None:
    """Run the HTTP analysis service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(_load_db(db)), host=host, port=port)


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.FileError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 3
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except QasidaError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
