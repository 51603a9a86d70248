"""Command-line pipeline driver.

Every subcommand is a thin adapter over one library operation: read files,
call the operation, write files. Diagnostics go to stderr (or, with --json,
a single JSON summary on stdout); dataset bytes go to -o targets or stdout.
Exit codes: 0 success, 1 data/validation errors, 2 usage errors.
"""

import json
import os
import sys
from dataclasses import dataclass, replace

import click

from .errors import FieldatlasError, PublishValidationError, RegistryError
from .export import _meta_doc, serialize_geojson, to_csv, to_gpx, to_umap_layers
from .ingest import gaia_split, import_csv, parse_geojson
from .model import CONCRETE_KINDS, FeatureKind, POINT_KINDS, UlspDataset, ValidationReport
from .publish import HttpFetcher, offline_fetcher, publish, publish_global
from .qr import assemble, decode_frame, encode_frames, MissingReport
from .qrcode_gen import render_png
from .registry import FormatRegistry, default_registry, default_registry_bytes, load_format_registry
from .schema import canonicalize, validate_dataset
from .transform import (
    FilterSpec,
    adopt_property,
    filter_features,
    merge as merge_op,
    retype,
    set_metadata,
)

_CONCRETE_NAMES = [k.value for k in CONCRETE_KINDS]
_POINT_NAMES = [k.value for k in CONCRETE_KINDS if k in POINT_KINDS]
_FILTER_NAMES = _CONCRETE_NAMES + [FeatureKind.UNKNOWN.value]


@dataclass
class Io:
    """Per-invocation output policy shared by all subcommands."""

    reg: FormatRegistry
    registry_source: bytes
    quiet: bool = False
    as_json: bool = False

    def warn(self, message: str) -> None:
        if not self.quiet and not self.as_json:
            click.echo(f"warning: {message}", err=True)

    def note(self, message: str) -> None:
        if not self.quiet and not self.as_json:
            click.echo(message, err=True)

    def done(self, payload: dict) -> None:
        if self.as_json:
            click.echo(json.dumps(payload, ensure_ascii=False, sort_keys=True))

    def fail(self, message: str, code: int = 1) -> None:
        if self.as_json:
            click.echo(json.dumps({"error": message}, ensure_ascii=False, sort_keys=True))
        else:
            click.echo(f"error: {message}", err=True)
        sys.exit(code)


def _issue_doc(issue) -> dict:
    return {"subject": issue.subject, "field": issue.field, "message": issue.message}


def _issue_line(level: str, issue) -> str:
    place = f"{issue.subject}.{issue.field}" if issue.field else issue.subject
    return f"{level} {place}: {issue.message}"


def _print_report(io: Io, report: ValidationReport) -> None:
    click.echo(f"{len(report.errors)} errors, {len(report.warnings)} warnings")
    for issue in report.errors:
        click.echo(_issue_line("error", issue))
    if not io.quiet:
        for issue in report.warnings:
            click.echo(_issue_line("warning", issue))


def _read_bytes(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _read_dataset(io: Io, path: str) -> UlspDataset:
    try:
        return parse_geojson(_read_bytes(path), io.reg)
    except OSError as exc:
        io.fail(f"{path}: {exc.strerror or exc}")
    except FieldatlasError as exc:
        io.fail(f"{path}: {exc}")
    raise AssertionError("unreachable")


def _write_output(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        click.get_binary_stream("stdout").write(data)
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _write_dataset(io: Io, path: str | None, ds: UlspDataset) -> None:
    _write_output(path, serialize_geojson(canonicalize(ds), io.reg))


@click.group()
@click.option("--registry", "registry_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Format registry JSON overriding the built-in one.")
@click.option("--quiet", is_flag=True, help="Suppress warnings and progress notes.")
@click.option("--json", "as_json", is_flag=True,
              help="Emit one machine-readable JSON summary on stdout.")
@click.pass_context
def cli(ctx, registry_path, quiet, as_json):
    """Field-survey geodata toolkit: validate, convert, edit, and publish
    GeoJSON datasets."""
    if registry_path is None:
        source = default_registry_bytes()
        reg = default_registry()
    else:
        source = _read_bytes(registry_path)
        try:
            reg = load_format_registry(source)
        except RegistryError as exc:
            raise click.UsageError(f"--registry {registry_path}: {exc}")
    ctx.obj = Io(reg=reg, registry_source=source, quiet=quiet, as_json=as_json)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def validate(io: Io, file):
    """Check one dataset; exit 1 when it has validation errors."""
    ds = _read_dataset(io, file)
    report = validate_dataset(ds, io.reg)
    if io.as_json:
        io.done({"command": "validate", "valid": not report.errors,
                 "errors": [_issue_doc(i) for i in report.errors],
                 "warnings": [_issue_doc(i) for i in report.warnings]})
    else:
        _print_report(io, report)
    sys.exit(1 if report.errors else 0)


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def info(io: Io, file):
    """Show dataset metadata and per-kind feature counts."""
    ds = _read_dataset(io, file)
    counts = ds.kind_counts()
    count_doc = {kind.value: counts.get(kind, 0) for kind in CONCRETE_KINDS}
    unknown = counts.get(FeatureKind.UNKNOWN, 0)
    if unknown:
        count_doc[FeatureKind.UNKNOWN.value] = unknown
    if io.as_json:
        io.done({"command": "info", "meta": _meta_doc(ds.meta),
                 "features": len(ds.features), "counts": count_doc})
        return
    for key, value in _meta_doc(ds.meta).items():
        click.echo(f"{key}: {value}" if value else f"{key}: (unset)")
    click.echo(f"features: {len(ds.features)}")
    for name, count in count_doc.items():
        click.echo(f"  {name}: {count}")


@cli.command("split-gaia")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="Output GeoJSON path (stdout when omitted).")
@click.pass_obj
def split_gaia(io: Io, source, output):
    """Convert a Gaia GPS export into a dataset (tracks become Percorso,
    waypoints become POI)."""
    try:
        result = gaia_split(_read_bytes(source), reg=io.reg)
    except FieldatlasError as exc:
        io.fail(f"{source}: {exc}")
    for message in result.warnings:
        io.warn(message)
    _write_dataset(io, output, result.dataset)
    io.note(f"{len(result.dataset.features)} features")
    io.done({"command": "split-gaia", "features": len(result.dataset.features),
             "warnings": result.warnings})


@cli.command("from-csv")
@click.argument("source", type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", required=True, type=click.Choice(_POINT_NAMES),
              help="Point kind every imported row becomes.")
@click.option("--nome", default="csv-import", help="Collection Nome for the new dataset.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def from_csv(io: Io, source, kind, nome, output):
    """Build a dataset from a CSV table of point features."""
    try:
        result = import_csv(_read_bytes(source), FeatureKind(kind), io.reg)
    except FieldatlasError as exc:
        io.fail(f"{source}: {exc}")
    for row, message in result.skipped:
        io.warn(f"row {row}: {message}")
    ds = UlspDataset(features=result.features)
    ds.meta.nome = nome
    _write_dataset(io, output, ds)
    io.note(f"{len(result.features)} features")
    io.done({"command": "from-csv", "features": len(result.features),
             "skipped": [{"row": row, "message": message} for row, message in result.skipped]})


@cli.command("merge")
@click.argument("files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def merge_cmd(io: Io, files, output):
    """Concatenate datasets; on duplicate ids the later occurrence wins."""
    parts = [_read_dataset(io, path) for path in files]
    result = merge_op(parts)
    for message in result.warnings:
        io.warn(message)
    _write_dataset(io, output, result.dataset)
    io.done({"command": "merge", "features": len(result.dataset.features),
             "warnings": result.warnings})


@cli.command("filter")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--keep/--drop", "keep", default=True,
              help="Keep (default) or drop the matching features.")
@click.option("--kind", "kinds", multiple=True, type=click.Choice(_FILTER_NAMES))
@click.option("--id", "ids", multiple=True)
@click.option("--tag", default=None)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def filter_cmd(io: Io, file, keep, kinds, ids, tag, output):
    """Select features by kind, id, or tag."""
    if not kinds and not ids and tag is None:
        raise click.UsageError("give at least one of --kind, --id, --tag")
    ds = _read_dataset(io, file)
    spec = FilterSpec(kinds=frozenset(FeatureKind(k) for k in kinds) or None,
                      ids=frozenset(ids) or None,
                      tag=tag,
                      mode="keep" if keep else "drop")
    try:
        result = filter_features(ds, spec, io.reg)
    except FieldatlasError as exc:
        io.fail(str(exc))
    _write_dataset(io, output, result)
    io.note(f"{len(result.features)} of {len(ds.features)} features kept")
    io.done({"command": "filter", "features": len(result.features),
             "input_features": len(ds.features)})


@cli.command("retype")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--id", "feature_id", required=True)
@click.option("--to", "target", required=True, type=click.Choice(_CONCRETE_NAMES))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def retype_cmd(io: Io, file, feature_id, target, output):
    """Change one feature's kind, repartitioning its properties."""
    ds = _read_dataset(io, file)
    try:
        result = retype(ds, feature_id, FeatureKind(target), io.reg)
    except FieldatlasError as exc:
        io.fail(str(exc))
    _write_dataset(io, output, result)
    io.done({"command": "retype", "id": feature_id, "to": target})


@cli.command("adopt")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--id", "feature_id", required=True)
@click.option("--from", "from_key", required=True,
              help="Unrecognized property to promote.")
@click.option("--to", "to_key", required=True,
              help="Recognized field that receives the value.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def adopt_cmd(io: Io, file, feature_id, from_key, to_key, output):
    """Promote one unrecognized property into a recognized field."""
    ds = _read_dataset(io, file)
    try:
        result = adopt_property(ds, feature_id, from_key, to_key, io.reg)
    except FieldatlasError as exc:
        io.fail(str(exc))
    _write_dataset(io, output, result)
    io.done({"command": "adopt", "id": feature_id,
             "from": from_key, "to": to_key})


@cli.command("set-meta")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--nome", default=None)
@click.option("--descrizione", default=None)
@click.option("--umap-key", default=None)
@click.option("--web-page-url", default=None)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def set_meta(io: Io, file, nome, descrizione, umap_key, web_page_url, output):
    """Update collection metadata fields."""
    changes = {"nome": nome, "descrizione": descrizione,
               "umap_key": umap_key, "web_page_url": web_page_url}
    changes = {key: value for key, value in changes.items() if value is not None}
    if not changes:
        raise click.UsageError("give at least one metadata option")
    ds = _read_dataset(io, file)
    meta = replace(ds.meta, **changes)
    try:
        result = set_metadata(ds, meta)
    except FieldatlasError as exc:
        io.fail(str(exc))
    _write_dataset(io, output, result)
    io.done({"command": "set-meta", "meta": _meta_doc(result.meta)})


@cli.group()
def export():
    """Write derived artifacts (GPX, uMap layers, CSV)."""


@export.command("gpx")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def export_gpx(io: Io, file, output):
    """GPX 1.1 with waypoints for point kinds and tracks for line kinds."""
    ds = _read_dataset(io, file)
    result = to_gpx(ds)
    if result.skipped:
        io.warn(f"{result.skipped} features had no GPX representation")
    _write_output(output, result.data)
    io.done({"command": "export-gpx", "skipped": result.skipped})


@export.command("umap")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.option("--repo-url", default="", help="Repository link added to every popup.")
@click.pass_obj
def export_umap(io: Io, file, out_dir, repo_url):
    """One uMap-importable GeoJSON per kind, plus manifest.json."""
    ds = _read_dataset(io, file)
    layers = to_umap_layers(ds, io.reg, repo_url=repo_url)
    os.makedirs(out_dir, exist_ok=True)
    for name, data in layers.layers:
        _write_output(os.path.join(out_dir, name + ".geojson"), data)
    _write_output(os.path.join(out_dir, "manifest.json"), layers.manifest)
    io.note(f"{len(layers.layers)} layers")
    io.done({"command": "export-umap", "layers": layers.layer_names()})


@export.command("csv")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", required=True, type=click.Choice(_POINT_NAMES))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def export_csv(io: Io, file, kind, output):
    """CSV table of one point kind's features."""
    ds = _read_dataset(io, file)
    try:
        data = to_csv(ds, FeatureKind(kind), io.reg)
    except FieldatlasError as exc:
        io.fail(str(exc))
    _write_output(output, data)
    io.done({"command": "export-csv", "kind": kind})


@cli.group()
def qr():
    """Offline dataset transfer as QR frame sequences."""


@qr.command("encode")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-chars", default=800, show_default=True,
              help="Frame text budget; smaller frames make simpler codes.")
@click.option("-o", "--output", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.pass_obj
def qr_encode(io: Io, file, max_chars, out_dir):
    """Write frame_NNN.txt and frame_NNN.png for one dataset."""
    ds = _read_dataset(io, file)
    try:
        frames = encode_frames(ds, max_chunk_chars=max_chars, reg=io.reg)
    except (FieldatlasError, ValueError) as exc:
        io.fail(str(exc))
    os.makedirs(out_dir, exist_ok=True)
    width = max(3, len(str(len(frames))))
    for pos, text in enumerate(frames):
        stem = os.path.join(out_dir, f"frame_{pos + 1:0{width}d}")
        _write_output(stem + ".txt", text.encode("ascii") + b"\n")
        _write_output(stem + ".png", render_png(text, level="M"))
    transfer_id = decode_frame(frames[0]).transfer_id
    io.note(f"{len(frames)} frames, transfer {transfer_id}")
    io.done({"command": "qr-encode", "frames": len(frames),
             "transfer_id": transfer_id})


def _frame_texts(paths) -> list[str]:
    files: list[str] = []
    for path in paths:
        if os.path.isdir(path):
            files += sorted(os.path.join(path, name) for name in os.listdir(path)
                            if name.endswith(".txt"))
        else:
            files.append(path)
    texts: list[str] = []
    for path in files:
        with open(path, "r", encoding="utf-8") as fh:
            texts += [line.strip() for line in fh if line.strip()]
    return texts


@qr.command("decode")
@click.argument("paths", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def qr_decode(io: Io, paths, output):
    """Rebuild a dataset from frame text files (or directories of them)."""
    texts = _frame_texts(paths)
    if not texts:
        io.fail("no frame texts found")
    try:
        frames = [decode_frame(text) for text in texts]
        result = assemble(frames, io.reg)
    except FieldatlasError as exc:
        io.fail(str(exc))
    if isinstance(result, MissingReport):
        missing = ", ".join(str(i) for i in result.missing)
        if io.as_json:
            io.done({"command": "qr-decode", "transfer_id": result.transfer_id,
                     "total": result.total, "missing": list(result.missing)})
        else:
            click.echo(f"incomplete transfer {result.transfer_id}: "
                       f"missing frame indexes {missing} ({result.total} frames total)", err=True)
        sys.exit(1)
    _write_dataset(io, output, result)
    io.done({"command": "qr-decode", "features": len(result.features)})


@cli.command("publish")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.option("--offline", is_flag=True, help="Skip image downloads (fetcher refuses).")
@click.pass_obj
def publish_cmd(io: Io, file, out_dir, offline):
    """Generate the dataset's repository directory (GeoJSON, README, GPX,
    vignettes, QR tags)."""
    ds = canonicalize(_read_dataset(io, file))
    fetcher = offline_fetcher if offline else HttpFetcher()
    try:
        result = publish(ds, out_dir, fetcher, io.reg)
    except PublishValidationError as exc:
        if io.as_json:
            io.done({"error": "validation failed",
                     "errors": [_issue_doc(i) for i in exc.report.errors]})
        else:
            _print_report(io, exc.report)
        sys.exit(1)
    except FieldatlasError as exc:
        io.fail(str(exc))
    for message in result.qrtags.skipped:
        io.warn(f"qrtag {message}")
    for fid, url, reason in result.fetch.failed:
        io.warn(f"vignette {fid}: {url}: {reason}")
    io.note(f"{len(result.written)} files written, {len(result.pruned)} pruned, "
            f"{result.fetch.skipped} vignettes already current")
    io.done({"command": "publish", "root": result.layout.root,
             "written": result.written, "pruned": result.pruned,
             "vignettes": {"attempted": result.fetch.attempted,
                           "succeeded": result.fetch.succeeded,
                           "skipped": result.fetch.skipped,
                           "failed": [{"id": fid, "url": url, "reason": reason}
                                      for fid, url, reason in result.fetch.failed]},
             "qrtags": {"written": result.qrtags.written,
                        "skipped": result.qrtags.skipped}})


@cli.command("publish-global")
@click.argument("source_dir", type=click.Path(exists=True, file_okay=False))
@click.option("-o", "--output", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.pass_obj
def publish_global_cmd(io: Io, source_dir, out_dir):
    """Consolidate every .geojson dataset in a directory into one uMap
    layer set."""
    names = sorted(name for name in os.listdir(source_dir) if name.endswith(".geojson"))
    if not names:
        io.fail(f"no .geojson files in {source_dir}")
    datasets = [_read_dataset(io, os.path.join(source_dir, name)) for name in names]
    try:
        result = publish_global(datasets, io.reg)
    except FieldatlasError as exc:
        io.fail(str(exc))
    os.makedirs(out_dir, exist_ok=True)
    for name, data in result.layers:
        _write_output(os.path.join(out_dir, name + ".geojson"), data)
    _write_output(os.path.join(out_dir, "manifest.json"), result.manifest)
    io.note(f"{len(datasets)} datasets, {len(result.layers)} layers")
    io.done({"command": "publish-global", "datasets": len(datasets),
             "layers": result.layer_names()})


@cli.command("registry")
@click.option("--dump", is_flag=True, help="Write the active registry JSON to stdout.")
@click.pass_obj
def registry_cmd(io: Io, dump):
    """Inspect the active format registry."""
    if dump:
        click.get_binary_stream("stdout").write(io.registry_source)
        return
    if io.as_json:
        io.done({"command": "registry", "version": io.reg.version,
                 "kinds": {kind.value: [spec.key for spec in io.reg.fields_for(kind)]
                           for kind in CONCRETE_KINDS}})
        return
    click.echo(f"version: {io.reg.version}")
    for kind in CONCRETE_KINDS:
        keys = ", ".join(spec.key for spec in io.reg.fields_for(kind))
        click.echo(f"{kind.value}: {keys}")


main = cli
