"""Headless command-line access: schema inference, recommendations, card
validation, chart-spec export, and serving the HTTP API.

Exit codes: 0 success, 1 domain failure (validation), 2 usage/parse
failure. Text output is human-oriented; only ``--json`` output is stable,
and it is byte-identical to the corresponding API responses.
"""

import json
import socket
import sys
from pathlib import Path

import click

from . import charts, recommender, tabular
from .api import AppConfig, create_app
from .cards import TaskKind, card_completeness, card_from_document
from .catalog import ConfigError, load_mapping_config
from .jsonutil import canonical_json
from .store import NotFound, Store
from .tabular import TableError

_TASK_CHOICES = click.Choice([t.value for t in TaskKind], case_sensitive=False)


def _emit_json(document) -> None:
    # Machine output: exact canonical bytes, no trailing newline.
    sys.stdout.write(canonical_json(document))
    sys.stdout.flush()


@click.group()
@click.version_option(package_name="iscard")
def main() -> None:
    """Design learning-analytics indicators from the command line."""


@main.command()
@click.argument("csv_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def infer(csv_file: Path) -> None:
    """Infer the column schema of a CSV file and print it as JSON."""
    try:
        table = tabular.parse_csv(csv_file.read_bytes())
    except TableError as exc:
        raise click.ClickException(str(exc)) from exc
    _emit_json(tabular.schema_document(table))


@main.command(name="recommend")
@click.option("--task", "task_value", type=_TASK_CHOICES, default=None,
              help="Analysis task to recommend idioms for.")
@click.option("--data", "data_file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="CSV file whose column types drive the recommendation.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              envvar="ISCARD_MAPPING_CONFIG", default=None,
              help="Alternative mapping-config file.")
@click.option("--json", "as_json", is_flag=True, help="Emit the stable JSON form.")
def recommend_cmd(task_value: str | None, data_file: Path | None,
                  config_path: str | None, as_json: bool) -> None:
    """Recommend chart idioms for a task and/or a CSV file's data types."""
    if task_value is None and data_file is None:
        raise click.UsageError("provide --task and/or --data")
    try:
        mapping = load_mapping_config(config_path)
    except (ConfigError, OSError) as exc:
        raise click.ClickException(str(exc)) from exc

    signature = None
    if data_file is not None:
        try:
            table = tabular.parse_csv(data_file.read_bytes())
        except TableError as exc:
            raise click.ClickException(str(exc)) from exc
        signature = tabular.data_signature(table)

    result = recommender.recommend(task=task_value, signature=signature, config=mapping)
    if as_json:
        _emit_json(recommender.recommendations_document(result))
        return

    width = max(len(r.kind.value) for r in result)
    for r in result:
        click.echo(f"{r.level.value:<20} {r.kind.value:<{width}}  {'; '.join(r.reasons)}")


@main.command()
@click.argument("card_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--data-dir", type=click.Path(file_okay=False, path_type=Path),
              envvar="ISCARD_DATA_DIR", required=True, help="Store directory with datasets.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              envvar="ISCARD_MAPPING_CONFIG", default=None)
def validate(card_file: Path, data_dir: Path, config_path: str | None) -> None:
    """Exit 0 iff the card is complete and its bindings validate."""
    card, store, mapping = _load_card_context(card_file, data_dir, config_path)

    table = None
    if card.dataset_id is not None:
        try:
            table = store.load_dataset(card.dataset_id)
        except NotFound as exc:
            raise click.ClickException(f"DanglingDataset: {exc}") from exc

    completeness = card_completeness(card, table=table, config=mapping)
    if completeness.missing:
        raise click.ClickException(f"card is a draft; missing: {', '.join(completeness.missing)}")
    click.echo("complete")


@main.command()
@click.option("--card", "card_file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              required=True, help="Card JSON document to render.")
@click.option("--data-dir", type=click.Path(file_okay=False, path_type=Path),
              envvar="ISCARD_DATA_DIR", required=True)
@click.option("--out", "out_file", type=click.Path(dir_okay=False, path_type=Path),
              required=True, help="Where to write the chart spec JSON.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              envvar="ISCARD_MAPPING_CONFIG", default=None)
def preview(card_file: Path, data_dir: Path, out_file: Path, config_path: str | None) -> None:
    """Build the canonical chart spec for a card and write it to a file."""
    card, store, mapping = _load_card_context(card_file, data_dir, config_path)

    if card.idiom is None or card.dataset_id is None or card.bindings is None:
        raise click.ClickException("card has no idiom, dataset, and bindings to preview")
    try:
        table = store.load_dataset(card.dataset_id)
    except NotFound as exc:
        raise click.ClickException(f"DanglingDataset: {exc}") from exc

    try:
        spec = charts.build_chart_spec(card.idiom, table, card.bindings,
                                       title=card.name, config=mapping)
    except charts.ChartSpecError as exc:
        raise click.ClickException(str(exc)) from exc
    out_file.write_text(charts.serialize_chart_spec(spec), encoding="utf-8")
    click.echo(f"wrote {out_file}")


@main.command()
@click.option("--port", type=int, envvar="ISCARD_PORT", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", type=click.Path(file_okay=False, path_type=Path),
              envvar="ISCARD_DATA_DIR", default="./iscard-data", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              envvar="ISCARD_MAPPING_CONFIG", default=None)
@click.option("--max-upload", type=int, envvar="ISCARD_MAX_UPLOAD",
              default=tabular.MAX_INGEST_BYTES, show_default=True,
              help="Maximum dataset upload size in bytes.")
@click.option("--cors-origin", "cors_origins", multiple=True, envvar="ISCARD_CORS_ORIGINS",
              default=("*",), show_default=True)
def serve(port: int, host: str, data_dir: Path, config_path: str | None,
          max_upload: int, cors_origins: tuple[str, ...]) -> None:
    """Run the HTTP JSON API."""
    import uvicorn

    try:
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
            probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            probe.bind((host, port))
    except OSError as exc:
        raise click.ClickException(f"cannot bind {host}:{port}: {exc}") from exc

    app = create_app(AppConfig(
        data_dir=data_dir,
        mapping_config_path=config_path,
        max_upload_bytes=max_upload,
        cors_origins=cors_origins,
    ))
    uvicorn.run(app, host=host, port=port, log_level="info")


def _load_card_context(card_file: Path, data_dir: Path, config_path: str | None):
    try:
        doc = json.loads(card_file.read_text("utf-8"))
        card = card_from_document(doc)
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise click.UsageError(f"malformed card document {card_file}: {exc}") from exc
    try:
        mapping = load_mapping_config(config_path)
    except (ConfigError, OSError) as exc:
        raise click.ClickException(str(exc)) from exc
    return card, Store(data_dir), mapping


if __name__ == "__main__":
    main()
