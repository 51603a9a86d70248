"""Toolkit for field-survey GeoJSON datasets: validation against a format
registry, ingestion from mapping apps and CSV, dataset transforms, QR-frame
transfer, and deterministic publication (GPX, uMap layers, repositories)."""

from .canonical_json import dumps, format_coord, round6
from .errors import (
    ChecksumMismatchError,
    ChunkConflictError,
    CsvStructureError,
    DecompressError,
    FetchError,
    FieldatlasError,
    FrameFormatError,
    MetadataError,
    ParseError,
    PublishError,
    PublishValidationError,
    QrError,
    RegistryError,
    StructureError,
    TransferMismatchError,
    TransformError,
    UnknownIdError,
    UnsupportedKindError,
)
from .export import (
    GpxExport,
    UmapLayers,
    popup_text,
    serialize_geojson,
    to_csv,
    to_gpx,
    to_umap_layers,
)
from .ingest import (
    CsvImport,
    GaiaMapping,
    GaiaSplit,
    gaia_split,
    import_csv,
    parse_geojson,
)
from .model import (
    CONCRETE_KINDS,
    CollectionMeta,
    FeatureKind,
    LINE_KINDS,
    MultiLineGeom,
    POINT_KINDS,
    PointGeom,
    RawGeom,
    UlspDataset,
    UlspFeature,
    ValidationIssue,
    ValidationReport,
)
from .publish import (
    FetchReport,
    GlobalLayers,
    HttpFetcher,
    PublishResult,
    QrtagReport,
    RepoLayout,
    fetch_vignettes,
    offline_fetcher,
    publish,
    publish_global,
    render_qrtags,
    render_readme,
    sanitize_name,
)
from .qr import (
    AssemblyState,
    MissingReport,
    QrFrame,
    assemble,
    decode_frame,
    encode_frames,
)
from .qrcode_gen import encode_matrix, render_png
from .registry import (
    FieldSpec,
    FormatRegistry,
    KindStyle,
    default_registry,
    default_registry_bytes,
    load_format_registry,
)
from .schema import canonicalize, classify_feature, coerce_field_text, validate_dataset
from .transform import (
    FilterSpec,
    MergeResult,
    adopt_property,
    discard_unrecognized,
    edit_properties,
    filter_features,
    merge,
    retype,
    set_metadata,
)

__version__ = "0.1.0"
