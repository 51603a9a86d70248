"""Dataset repository generation: README, GPX, vignettes, QR signage.

publish() lays out one directory per dataset and is safe to re-run: every
file goes through a write-if-changed gate and entries that stopped belonging
to the dataset are pruned, so the directory always matches RepoLayout and an
unchanged dataset rewrites nothing. Image downloads go through an injected
fetcher callable so the pipeline works offline and tests stay hermetic.
"""

import concurrent.futures
import hashlib
import io
import json
import os
import re
import shutil
from dataclasses import dataclass, field

import requests
from PIL import Image

from .canonical_json import dumps, format_coord
from .errors import FetchError, PublishError, PublishValidationError
from .export import _display_name, _layer_feature_doc, serialize_geojson, to_gpx
from .model import (
    CONCRETE_KINDS,
    POINT_KINDS,
    FeatureKind,
    PointGeom,
    UlspDataset,
)
from .qrcode_gen import render_png
from .registry import FormatRegistry, default_registry
from .schema import validate_dataset

VIGNETTE_MAX_SIDE = 800
VIGNETTE_JPEG_QUALITY = 85
INDEX_NAME = ".index.json"

# ids become filenames; anything else is refused rather than escaped
_FILENAME_SAFE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


def sanitize_name(nome: str) -> str:
    """Filename stem for a dataset Nome: hostile character runs become '-'."""
    return re.sub(r"[^A-Za-z0-9._-]+", "-", nome).strip("-.")


def _write_if_changed(path: str, data: bytes) -> bool:
    if os.path.isfile(path):
        with open(path, "rb") as fh:
            if fh.read() == data:
                return False
    with open(path, "wb") as fh:
        fh.write(data)
    return True


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# --- fetchers -------------------------------------------------------------


class HttpFetcher:
    """HTTP(S) GET returning the response body; 15 s timeout, 2 retries."""

    def __init__(self, timeout: float = 15.0, retries: int = 2):
        self.timeout = timeout
        self.retries = retries
        self._session = requests.Session()

    def __call__(self, url: str) -> bytes:
        if not url.startswith(("http://", "https://")):
            raise FetchError(f"refusing non-HTTP(S) URL {url!r}")
        last: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                resp = self._session.get(url, timeout=self.timeout)
                resp.raise_for_status()
                return resp.content
            except requests.RequestException as exc:
                last = exc
        raise FetchError(f"GET {url} failed: {last}")


def offline_fetcher(url: str) -> bytes:
    raise FetchError(f"offline mode: not fetching {url}")


# --- README ---------------------------------------------------------------

_CELL_BREAKS = re.compile(r"[|\r\n]+")


def _cell(text: str) -> str:
    return _CELL_BREAKS.sub(" ", text).strip()


def _point_position(feat) -> str:
    if isinstance(feat.geometry, PointGeom):
        return f"{format_coord(feat.geometry.lat)}, {format_coord(feat.geometry.lon)}"
    return ""


def render_readme(ds: UlspDataset, reg: FormatRegistry | None = None) -> bytes:
    """CommonMark overview of one dataset: links, counts, feature tables.

    Byte-deterministic for a given dataset (no timestamps), so repository
    syncs rewrite the README only when the data changed.
    """
    reg = reg or default_registry()
    meta = ds.meta
    lines = [f"# {meta.nome}".rstrip(), ""]
    if meta.descrizione:
        lines += [meta.descrizione, ""]
    links = []
    if meta.umap_key:
        links.append(f"[uMap map]({meta.umap_key})")
    if meta.web_page_url:
        links.append(f"[Web page]({meta.web_page_url})")
    if links:
        lines += [" · ".join(links), ""]
    counts = ds.kind_counts()
    lines += ["## Contents", "", "| Kind | Count |", "| --- | ---: |"]
    lines += [f"| {kind.value} | {counts.get(kind, 0)} |" for kind in CONCRETE_KINDS]
    lines.append("")
    for kind in CONCRETE_KINDS:
        feats = [f for f in ds.features if f.kind is kind]
        if not feats:
            continue
        lines += [f"## {kind.value}", ""]
        if kind in POINT_KINDS:
            lines += ["| Nome | Position | Descrizione |", "| --- | --- | --- |"]
        else:
            lines += ["| Nome | Descrizione |", "| --- | --- |"]
        for feat in feats:
            nome = _cell(_display_name(feat))
            desc = _cell(feat.recognized.get("Descrizione", "")[:120])
            if kind in POINT_KINDS:
                lines.append(f"| {nome} | {_point_position(feat)} | {desc} |")
            else:
                lines.append(f"| {nome} | {desc} |")
        lines.append("")
    return ("\n".join(lines).rstrip("\n") + "\n").encode("utf-8")


# --- vignettes ------------------------------------------------------------


@dataclass
class FetchReport:
    """Vignette pass outcome; attempted = succeeded + len(failed)."""

    attempted: int = 0
    succeeded: int = 0
    failed: list[tuple[str, str, str]] = field(default_factory=list)
    skipped: int = 0  # already present with matching source URL and hash
    written: list[str] = field(default_factory=list)


def _vignette_targets(ds: UlspDataset, reg: FormatRegistry) -> list[tuple[int, str, str]]:
    targets = []
    for pos, feat in enumerate(ds.features):
        spec = reg.first_field(feat.kind, "image_url")
        if spec is None:
            continue
        url = feat.recognized.get(spec.key, "")
        if url:
            targets.append((pos, feat.id, url))
    return targets


def _vignette_jpeg(raw: bytes) -> bytes:
    img = Image.open(io.BytesIO(raw))
    img.load()
    if img.mode not in ("RGB", "L"):
        img = img.convert("RGB")
    # thumbnail never upscales and keeps the aspect ratio
    img.thumbnail((VIGNETTE_MAX_SIDE, VIGNETTE_MAX_SIDE), Image.LANCZOS)
    buf = io.BytesIO()
    img.save(buf, format="JPEG", quality=VIGNETTE_JPEG_QUALITY)
    return buf.getvalue()


def _load_index(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            loaded = json.load(fh)
    except (OSError, ValueError):
        return {}
    return loaded if isinstance(loaded, dict) else {}


def fetch_vignettes(ds: UlspDataset, fetcher, out: str,
                    reg: FormatRegistry | None = None,
                    parallelism: int = 4) -> FetchReport:
    """Download, shrink, and store every linked image as <ulsp_id>.jpg.

    The longest side is capped at 800 px (never upscaled) and the result is
    JPEG quality 85. A sidecar index (.index.json) records each file's source
    URL and content hash, so a re-run skips downloads that are already
    present and unchanged. Fetch and decode failures land in the report,
    they never abort the pass.
    """
    reg = reg or default_registry()
    report = FetchReport()
    index_path = os.path.join(out, INDEX_NAME)
    index = _load_index(index_path)
    targets = _vignette_targets(ds, reg)

    jobs = []
    for pos, fid, url in targets:
        if not _FILENAME_SAFE.match(fid):
            report.attempted += 1
            report.failed.append((fid or f"#{pos}", url, "feature has no filename-safe ulsp_id"))
            continue
        fname = fid + ".jpg"
        fpath = os.path.join(out, fname)
        entry = index.get(fname)
        if (isinstance(entry, dict) and entry.get("url") == url
                and os.path.isfile(fpath)):
            with open(fpath, "rb") as fh:
                if _sha256(fh.read()) == entry.get("sha256"):
                    report.skipped += 1
                    continue
        jobs.append((fid, fname, fpath, url))

    def grab(job):
        try:
            return job[0], fetcher(job[3]), ""
        except Exception as exc:  # fetcher is caller-supplied; contain everything
            return job[0], b"", str(exc) or type(exc).__name__

    outcomes = []
    if jobs:
        workers = max(1, parallelism)
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(grab, jobs))

    # map() preserves submission order, so writes follow feature order
    for (fid, fname, fpath, url), (_, raw, err) in zip(jobs, outcomes):
        report.attempted += 1
        if err:
            report.failed.append((fid, url, err))
            continue
        try:
            data = _vignette_jpeg(raw)
        except Exception as exc:
            report.failed.append((fid, url, f"image decode failed: {exc}"))
            continue
        report.succeeded += 1
        if _write_if_changed(fpath, data):
            report.written.append(fname)
        index[fname] = {"url": url, "sha256": _sha256(data)}

    wanted = {fid + ".jpg" for _, fid, _ in targets if _FILENAME_SAFE.match(fid)}
    index = {k: v for k, v in index.items()
             if k in wanted and os.path.isfile(os.path.join(out, k))}
    body = (json.dumps(index, ensure_ascii=False, indent=2, sort_keys=True) + "\n").encode("utf-8")
    if _write_if_changed(index_path, body):
        report.written.append(INDEX_NAME)
    return report


# --- QR signage -----------------------------------------------------------


@dataclass
class QrtagReport:
    """QR signage outcome: files now on disk, per-feature skip warnings."""

    written: int = 0
    skipped: list[str] = field(default_factory=list)
    changed: list[str] = field(default_factory=list)


def _qrtag_url(feat, meta, reg: FormatRegistry) -> str:
    spec = reg.first_field(FeatureKind.QRTAG, "url")
    url = feat.recognized.get(spec.key, "") if spec else ""
    if url:
        return url
    if meta.web_page_url:
        return f"{meta.web_page_url}#{feat.id}"
    return ""


def render_qrtags(ds: UlspDataset, out: str,
                  reg: FormatRegistry | None = None) -> QrtagReport:
    """One scannable PNG per QRtag feature, named <ulsp_id>.png.

    The encoded URL is the feature's URL field when set, else
    <WebPageURL>#<ulsp_id>. Features with neither source are skipped with a
    warning. Error correction level Q suits weathered printed signage.
    """
    reg = reg or default_registry()
    report = QrtagReport()
    for pos, feat in enumerate(ds.features):
        if feat.kind is not FeatureKind.QRTAG:
            continue
        subject = feat.id or f"#{pos}"
        url = _qrtag_url(feat, ds.meta, reg)
        if not url:
            report.skipped.append(f"{subject}: no URL field and no WebPageURL to encode")
            continue
        if not _FILENAME_SAFE.match(feat.id):
            report.skipped.append(f"{subject}: no filename-safe ulsp_id")
            continue
        fname = feat.id + ".png"
        if _write_if_changed(os.path.join(out, fname), render_png(url, level="Q")):
            report.changed.append(fname)
        report.written += 1
    return report


# --- whole-repository publish ----------------------------------------------


@dataclass
class RepoLayout:
    """Fixed shape of a published dataset directory."""

    root: str
    name: str

    @property
    def dataset_file(self) -> str:
        return os.path.join(self.root, self.name + ".geojson")

    @property
    def readme_file(self) -> str:
        return os.path.join(self.root, "README.md")

    @property
    def gpx_file(self) -> str:
        return os.path.join(self.root, self.name + ".gpx")

    @property
    def vignettes_dir(self) -> str:
        return os.path.join(self.root, "vignettes")

    @property
    def qrtags_dir(self) -> str:
        return os.path.join(self.root, "qrtags")

    def entries(self) -> tuple[str, ...]:
        return (self.name + ".geojson", "README.md", self.name + ".gpx",
                "vignettes", "qrtags")


@dataclass
class PublishResult:
    layout: RepoLayout
    fetch: FetchReport
    qrtags: QrtagReport
    gpx_skipped: int = 0
    written: list[str] = field(default_factory=list)
    pruned: list[str] = field(default_factory=list)


def _prune(layout: RepoLayout, ds: UlspDataset, reg: FormatRegistry) -> list[str]:
    pruned = []
    keep_root = set(layout.entries())
    for entry in sorted(os.listdir(layout.root)):
        if entry in keep_root:
            continue
        path = os.path.join(layout.root, entry)
        if os.path.isdir(path) and not os.path.islink(path):
            shutil.rmtree(path)
        else:
            os.unlink(path)
        pruned.append(entry)
    keep_vignettes = {fid + ".jpg" for _, fid, _ in _vignette_targets(ds, reg)
                      if _FILENAME_SAFE.match(fid)}
    keep_vignettes.add(INDEX_NAME)
    for entry in sorted(os.listdir(layout.vignettes_dir)):
        if entry not in keep_vignettes:
            os.unlink(os.path.join(layout.vignettes_dir, entry))
            pruned.append(os.path.join("vignettes", entry))
    keep_qrtags = {feat.id + ".png" for feat in ds.features
                   if feat.kind is FeatureKind.QRTAG
                   and _qrtag_url(feat, ds.meta, reg)
                   and _FILENAME_SAFE.match(feat.id)}
    for entry in sorted(os.listdir(layout.qrtags_dir)):
        if entry not in keep_qrtags:
            os.unlink(os.path.join(layout.qrtags_dir, entry))
            pruned.append(os.path.join("qrtags", entry))
    return pruned


def publish(ds: UlspDataset, out: str, fetcher,
            reg: FormatRegistry | None = None,
            parallelism: int = 4) -> PublishResult:
    """Generate the complete repository directory for one dataset.

    Validation must pass with zero errors before anything is written; on
    errors the target directory is left untouched. A second run on unchanged
    input writes zero bytes. Entries that no longer belong to the dataset
    (renamed Nome, removed features) are pruned so the root always holds
    exactly the RepoLayout entries.
    """
    reg = reg or default_registry()
    check = validate_dataset(ds, reg)
    if check.errors:
        raise PublishValidationError(check)
    name = sanitize_name(ds.meta.nome)
    if not name:
        raise PublishError(f"dataset Nome {ds.meta.nome!r} leaves nothing usable in a filename")
    layout = RepoLayout(root=out, name=name)
    os.makedirs(layout.vignettes_dir, exist_ok=True)
    os.makedirs(layout.qrtags_dir, exist_ok=True)

    written: list[str] = []
    if _write_if_changed(layout.dataset_file, serialize_geojson(ds, reg)):
        written.append(name + ".geojson")
    if _write_if_changed(layout.readme_file, render_readme(ds, reg)):
        written.append("README.md")
    gpx = to_gpx(ds)
    if _write_if_changed(layout.gpx_file, gpx.data):
        written.append(name + ".gpx")

    fetch = fetch_vignettes(ds, fetcher, layout.vignettes_dir, reg, parallelism)
    written += [os.path.join("vignettes", f) for f in fetch.written]
    qrtags = render_qrtags(ds, layout.qrtags_dir, reg)
    written += [os.path.join("qrtags", f) for f in qrtags.changed]

    pruned = _prune(layout, ds, reg)
    return PublishResult(layout=layout, fetch=fetch, qrtags=qrtags,
                         gpx_skipped=gpx.skipped, written=written, pruned=pruned)


# --- consolidated global layers ---------------------------------------------


@dataclass
class GlobalLayers:
    """Per-kind layers over the union of all datasets, plus a count manifest."""

    layers: list[tuple[str, bytes]] = field(default_factory=list)
    manifest: bytes = b""

    def layer_names(self) -> list[str]:
        return [name for name, _ in self.layers]


def publish_global(datasets: list[UlspDataset],
                   reg: FormatRegistry | None = None) -> GlobalLayers:
    """Consolidated uMap layer set across many datasets.

    Dataset Nome values must be pairwise distinct. Every feature's popup is
    prefixed with its dataset Nome so the combined map can still be filtered
    by origin. Unknown-kind features are left out, as in to_umap_layers.
    """
    reg = reg or default_registry()
    seen: dict[str, int] = {}
    for ds in datasets:
        seen[ds.meta.nome] = seen.get(ds.meta.nome, 0) + 1
    dupes = sorted(nome for nome, count in seen.items() if count > 1)
    if dupes:
        raise PublishError("duplicate dataset Nome: " + ", ".join(repr(n) for n in dupes))

    layers: list[tuple[str, bytes]] = []
    layer_counts: list[dict] = []
    for kind in CONCRETE_KINDS:
        docs: list[dict] = []
        for ds in datasets:
            docs += [_layer_feature_doc(feat, ds.meta, reg, "", ds.meta.nome)
                     for feat in ds.features if feat.kind is kind]
        if not docs:
            continue
        doc = {"type": "FeatureCollection", "name": kind.value, "features": docs}
        layers.append((kind.value, dumps(doc)))
        layer_counts.append({"name": kind.value, "count": len(docs)})
    dataset_counts = [
        {"name": ds.meta.nome,
         "count": sum(1 for f in ds.features if f.kind is not FeatureKind.UNKNOWN)}
        for ds in datasets
    ]
    manifest = dumps({"datasets": dataset_counts, "layers": layer_counts})
    return GlobalLayers(layers=layers, manifest=manifest)
