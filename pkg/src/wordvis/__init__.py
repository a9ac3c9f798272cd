"""wordvis: deterministic word-to-color encoding for document images.

Each word's text maps to an RGB color via a character score table and a
word-length factor; the color is painted over the word's bounding box so
plain image classifiers can pick up textual cues.
"""

from wordvis.analysis import (
    CollisionReport,
    HueProfile,
    PerturbationReport,
    collision_report,
    hue_profile,
    load_lexicon,
    load_stopwords,
    perturbation_report,
)
from wordvis.backend import available_backends, get_backend
from wordvis.errors import (
    AnalysisError,
    OcrParseError,
    PipelineError,
    RenderError,
    SchemaError,
    TableError,
    TableParseError,
    TableValidationError,
    WordvisError,
)
from wordvis.ocr import (
    BoundingBox,
    DocumentOcr,
    OcrWord,
    SourceFormat,
    parse_canonical_json,
    parse_hocr,
    parse_ocr,
    parse_tesseract_tsv,
    serialize_canonical_json,
)
from wordvis.pipeline import (
    JobSpec,
    Manifest,
    ManifestFailure,
    ManifestRecord,
    Split,
    SplitAssignment,
    discover_pairs,
    emit_split_lists,
    process_batch,
    split_dataset,
)
from wordvis.render import (
    FillMode,
    RasterImage,
    RenderConfig,
    RenderReport,
    clip_box,
    colorize,
    luminance,
)
from wordvis.scoring import (
    Channel,
    ScoreTable,
    TokenScoreBreakdown,
    WordColor,
    build_default_table,
    build_paper_example_table,
    load_table,
    multiplying_factor,
    normalize_token,
    parse_table,
    resolve_table,
    word_color,
)

__version__ = "0.1.0"
