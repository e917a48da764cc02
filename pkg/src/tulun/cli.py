"""Command-line entry points: serve, batch translate, eval, import.

Exit codes: 0 success, 1 partial failure, 2 usage/config error.
Diagnostics go to stderr only so stdout stays scriptable.
"""

from __future__ import annotations

import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from .errors import TulunError, ValidationError
from .metrics import export_run_csv, run_eval
from .pipeline import Engine
from .store import Store


@click.group()
def main():
    """Terminology-aware MT post-editing engine."""


@main.command()
@click.option("--store", "store_dir", required=True, type=click.Path())
@click.option("--bind", "bind_addr", default="127.0.0.1:8000", show_default=True)
def serve(store_dir, bind_addr):
    """Run the HTTP API server."""
    from .service import serve as run_server

    try:
        run_server(store_dir, bind_addr)
    except TulunError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


@main.command()
@click.option("--store", "store_dir", required=True, type=click.Path())
@click.option("--in", "input_file", required=True, type=click.Path(exists=False))
@click.option("--out", "output_file", required=True, type=click.Path())
@click.option("--mt-only", is_flag=True, default=False)
@click.option("--parallelism", default=4, show_default=True)
def translate(store_dir, input_file, output_file, mt_only, parallelism):
    """Translate a file with one source segment per line."""
    path = Path(input_file)
    if not path.exists():
        click.echo(f"error: input file not found: {input_file}", err=True)
        sys.exit(2)
    lines = path.read_text(encoding="utf-8").splitlines()
    engine = Engine(Store(store_dir))

    failures = 0

    def do_line(pair):
        line_no, text = pair
        if not text.strip():
            return line_no, "", None
        try:
            result = engine.translate(text, mt_only=mt_only)
            warn = None
            if result.degraded:
                warn = f"line {line_no}: post-editing failed, emitting MT draft ({result.error_detail})"
            return line_no, result.post_edited_text, warn
        except TulunError as exc:
            return line_no, "", f"line {line_no}: translation failed ({exc})"

    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        results = list(pool.map(do_line, enumerate(lines, 1)))

    out_lines = []
    for line_no, text, warn in sorted(results):
        out_lines.append(text)
        if warn:
            failures += 1
            click.echo(f"warning: {warn}", err=True)
    Path(output_file).write_text(
        "".join(line + "\n" for line in out_lines), encoding="utf-8")
    sys.exit(1 if failures else 0)


@main.command()
@click.option("--store", "store_dir", required=True, type=click.Path())
@click.option("--dataset", "dataset_file", required=True, type=click.Path())
@click.option("--report", "report_file", required=True, type=click.Path())
@click.option("--name", default="cli-dataset", show_default=True)
def eval(store_dir, dataset_file, report_file, name):
    """Run evaluation over a source_text,reference_text CSV and write a report."""
    path = Path(dataset_file)
    if not path.exists():
        click.echo(f"error: dataset file not found: {dataset_file}", err=True)
        sys.exit(2)
    store = Store(store_dir)
    engine = Engine(store)
    try:
        dataset = store.import_eval_csv(name, path.read_bytes())
        run = run_eval(dataset, engine)
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    Path(report_file).write_text(export_run_csv(run, dataset), encoding="utf-8")
    click.echo(f"MT only      corpus ChrF++: {run.corpus_chrfpp_mt:.2f}")
    click.echo(f"MT + LLM APE corpus ChrF++: {run.corpus_chrfpp_ape:.2f}")
    if run.failed_items:
        click.echo(f"warning: {run.failed_items} item(s) failed and were excluded",
                   err=True)
        sys.exit(1)


@main.command(name="import")
@click.option("--store", "store_dir", required=True, type=click.Path())
@click.option("--kind", type=click.Choice(["glossary", "tm"]), required=True)
@click.option("--csv", "csv_file", required=True, type=click.Path())
@click.option("--lenient", is_flag=True, default=False,
              help="Exit 0 even when some rows are rejected.")
def import_cmd(store_dir, kind, csv_file, lenient):
    """Bulk-import glossary or TM entries from a CSV file."""
    path = Path(csv_file)
    if not path.exists():
        click.echo(f"error: csv file not found: {csv_file}", err=True)
        sys.exit(2)
    store = Store(store_dir)
    try:
        report = store.import_csv(kind, path.read_bytes())
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(f"inserted: {report.inserted}")
    click.echo(f"rejected: {len(report.rejected)}")
    for line_no, reason in report.rejected:
        click.echo(f"  line {line_no}: {reason}", err=True)
    for line_no, reason in report.warnings:
        click.echo(f"warning: line {line_no}: {reason}", err=True)
    if report.rejected and not lenient:
        sys.exit(1)


if __name__ == "__main__":
    main()
