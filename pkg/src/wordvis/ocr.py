"""Parsers for OCR output formats into a canonical word list.

Three formats are supported: hOCR (XHTML spans), Tesseract's 12-column TSV,
and this package's own canonical JSON interchange. All parsers produce a
DocumentOcr with words in source order; malformed individual words degrade
to collectable warnings, never a crash.
"""

from __future__ import annotations

import enum
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from wordvis.errors import OcrParseError, SchemaError

CANONICAL_SCHEMA_VERSION = 1

TSV_HEADER = [
    "level",
    "page_num",
    "block_num",
    "par_num",
    "line_num",
    "word_num",
    "left",
    "top",
    "width",
    "height",
    "conf",
    "text",
]


class SourceFormat(enum.Enum):
    HOCR = "hocr"
    TESSERACT_TSV = "tsv"
    CANONICAL_JSON = "json"


@dataclass(frozen=True)
class BoundingBox:
    """Pixel rectangle, origin top-left. Extents are never negative; the
    position may be (pre-clip coordinates are arbitrary)."""

    left: int
    top: int
    width: int
    height: int

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise ValueError(f"negative extent: {self.width}x{self.height}")

    def is_empty(self) -> bool:
        return self.width == 0 or self.height == 0


@dataclass(frozen=True)
class OcrWord:
    text: str
    box: BoundingBox
    confidence: float | None = None
    order_index: int = 0


@dataclass
class DocumentOcr:
    """Ordered word list for one page.

    source_format and warnings are provenance metadata and excluded from
    equality, so canonical-JSON round-trips compare equal to the original.
    """

    words: list[OcrWord] = field(default_factory=list)
    page_width: int | None = None
    page_height: int | None = None
    source_format: SourceFormat = field(default=SourceFormat.CANONICAL_JSON, compare=False)
    warnings: list[str] = field(default_factory=list, compare=False)


def _decode_utf8(data: bytes | str, format_name: str) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise OcrParseError(f"{format_name} input is not valid UTF-8: {exc}") from exc


# ---------------------------------------------------------------------------
# hOCR


def parse_hocr(data: bytes | str) -> DocumentOcr:
    """Extract ocrx_word spans (first page only) from an hOCR document."""
    text = _decode_utf8(data, "hOCR")
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise OcrParseError(f"hOCR markup is not well-formed: {exc}") from exc

    doc = DocumentOcr(source_format=SourceFormat.HOCR)
    scope = root
    for element in root.iter():
        if _has_class(element, "ocr_page"):
            scope = element
            bbox = _title_properties(element.get("title", "")).get("bbox")
            if bbox is not None:
                corners = _parse_corners(bbox)
                if corners is not None:
                    x0, y0, x1, y1 = corners
                    doc.page_width = max(0, x1 - x0)
                    doc.page_height = max(0, y1 - y0)
                else:
                    doc.warnings.append(f"ocr_page has malformed bbox {bbox!r}")
            break

    order = 0
    for element in scope.iter():
        if not _has_class(element, "ocrx_word"):
            continue
        word_text = "".join(element.itertext()).strip()
        if not word_text:
            continue
        props = _title_properties(element.get("title", ""))
        bbox = props.get("bbox")
        if bbox is None:
            doc.warnings.append(f"word {word_text!r} has no bbox property; skipped")
            continue
        corners = _parse_corners(bbox)
        if corners is None:
            doc.warnings.append(f"word {word_text!r} has malformed bbox {bbox!r}; skipped")
            continue
        x0, y0, x1, y1 = corners
        if x1 < x0 or y1 < y0:
            doc.warnings.append(
                f"word {word_text!r} has inverted bbox corners; clamped to zero extent"
            )
        box = BoundingBox(left=x0, top=y0, width=max(0, x1 - x0), height=max(0, y1 - y0))
        confidence = None
        wconf = props.get("x_wconf")
        if wconf is not None:
            confidence = _parse_confidence(wconf, word_text, doc.warnings)
        doc.words.append(
            OcrWord(text=word_text, box=box, confidence=confidence, order_index=order)
        )
        order += 1
    return doc


def _has_class(element: ET.Element, class_name: str) -> bool:
    return class_name in element.get("class", "").split()


def _title_properties(title: str) -> dict[str, str]:
    """Split an hOCR title attribute into its `key value...` properties."""
    props: dict[str, str] = {}
    for part in title.split(";"):
        part = part.strip()
        if not part:
            continue
        key, _, value = part.partition(" ")
        props[key] = value.strip()
    return props


def _parse_corners(value: str) -> tuple[int, int, int, int] | None:
    fields = value.split()
    if len(fields) != 4:
        return None
    try:
        x0, y0, x1, y1 = (int(f) for f in fields)
    except ValueError:
        return None
    return x0, y0, x1, y1


def _parse_confidence(value: str, word_text: str, warnings: list[str]) -> float | None:
    try:
        conf = float(value)
    except ValueError:
        warnings.append(f"word {word_text!r} has malformed confidence {value!r}; dropped")
        return None
    if conf != conf:  # NaN
        warnings.append(f"word {word_text!r} has NaN confidence; dropped")
        return None
    if conf < 0.0 or conf > 100.0:
        warnings.append(f"word {word_text!r} confidence {conf} clamped into [0, 100]")
        conf = min(max(conf, 0.0), 100.0)
    return conf


# ---------------------------------------------------------------------------
# Tesseract TSV


def parse_tesseract_tsv(data: bytes | str) -> DocumentOcr:
    """Parse `tesseract ... tsv` output; only level-5 (word) rows become words."""
    text = _decode_utf8(data, "TSV")
    lines = text.splitlines()
    if not lines or lines[0].rstrip("\r").split("\t") != TSV_HEADER:
        raise OcrParseError(
            "missing or invalid TSV header; expected the 12-column tesseract header"
        )

    doc = DocumentOcr(source_format=SourceFormat.TESSERACT_TSV)
    order = 0
    for lineno, raw_line in enumerate(lines[1:], start=2):
        line = raw_line.rstrip("\r")
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) == len(TSV_HEADER) - 1:
            # editors and VCS strip the trailing tab tesseract emits when the
            # text column is empty; treat it as an empty text field
            fields.append("")
        if len(fields) != len(TSV_HEADER):
            raise OcrParseError(
                f"row {lineno}: expected {len(TSV_HEADER)} columns, got {len(fields)}"
            )
        level = _row_int(fields[0], lineno, "level")
        if level == 1 and doc.page_width is None:
            doc.page_width = _row_int(fields[8], lineno, "width")
            doc.page_height = _row_int(fields[9], lineno, "height")
        if level != 5:
            continue
        word_text = fields[11].strip()
        if not word_text:
            continue
        left = _row_int(fields[6], lineno, "left")
        top = _row_int(fields[7], lineno, "top")
        width = _row_int(fields[8], lineno, "width")
        height = _row_int(fields[9], lineno, "height")
        if width < 0 or height < 0:
            doc.warnings.append(
                f"row {lineno}: negative extent {width}x{height} clamped to zero"
            )
            width = max(0, width)
            height = max(0, height)
        conf_text = fields[10]
        try:
            conf_value = float(conf_text)
        except ValueError:
            raise OcrParseError(f"row {lineno}: conf is not a number: {conf_text!r}") from None
        if conf_value == -1:
            confidence = None
        else:
            confidence = _parse_confidence(conf_text, word_text, doc.warnings)
        doc.words.append(
            OcrWord(
                text=word_text,
                box=BoundingBox(left=left, top=top, width=width, height=height),
                confidence=confidence,
                order_index=order,
            )
        )
        order += 1
    return doc


def _row_int(value: str, lineno: int, column: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise OcrParseError(f"row {lineno}: {column} is not an integer: {value!r}") from None


# ---------------------------------------------------------------------------
# Canonical JSON


def parse_canonical_json(data: bytes | str) -> DocumentOcr:
    """Parse the canonical interchange format (see serialize_canonical_json)."""
    text = _decode_utf8(data, "canonical JSON")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OcrParseError(f"canonical JSON is not valid JSON: {exc}") from exc

    if not isinstance(obj, dict):
        raise SchemaError("", "top level must be an object")
    version = obj.get("v", CANONICAL_SCHEMA_VERSION)
    if version != CANONICAL_SCHEMA_VERSION:
        raise SchemaError("v", f"unsupported schema version {version!r}")

    doc = DocumentOcr(source_format=SourceFormat.CANONICAL_JSON)
    page = obj.get("page")
    if page is not None:
        if not isinstance(page, dict):
            raise SchemaError("page", "must be an object or null")
        doc.page_width = _schema_int(page.get("width"), "page.width", minimum=0)
        doc.page_height = _schema_int(page.get("height"), "page.height", minimum=0)

    words = obj.get("words")
    if not isinstance(words, list):
        raise SchemaError("words", "required and must be an array")
    order = 0
    for i, entry in enumerate(words):
        path = f"words[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(path, "must be an object")
        text_value = entry.get("text")
        if not isinstance(text_value, str):
            raise SchemaError(f"{path}.text", "required and must be a string")
        box = entry.get("box")
        if not isinstance(box, list) or len(box) != 4:
            raise SchemaError(f"{path}.box", "must be an array of 4 integers")
        left = _schema_int(box[0], f"{path}.box[0]")
        top = _schema_int(box[1], f"{path}.box[1]")
        width = _schema_int(box[2], f"{path}.box[2]", minimum=0)
        height = _schema_int(box[3], f"{path}.box[3]", minimum=0)
        confidence = None
        if "conf" in entry and entry["conf"] is not None:
            conf = entry["conf"]
            if isinstance(conf, bool) or not isinstance(conf, (int, float)):
                raise SchemaError(f"{path}.conf", "must be a number")
            if not 0.0 <= conf <= 100.0:
                raise SchemaError(f"{path}.conf", f"{conf} outside [0, 100]")
            confidence = float(conf)
        word_text = text_value.strip()
        if not word_text:
            continue
        doc.words.append(
            OcrWord(
                text=word_text,
                box=BoundingBox(left=left, top=top, width=width, height=height),
                confidence=confidence,
                order_index=order,
            )
        )
        order += 1
    return doc


def _schema_int(value, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise SchemaError(path, f"must be >= {minimum}, got {value}")
    return value


def serialize_canonical_json(doc: DocumentOcr) -> bytes:
    """Serialize to canonical JSON. parse_canonical_json inverts this exactly."""
    if doc.page_width is not None and doc.page_height is not None:
        page = {"width": doc.page_width, "height": doc.page_height}
    else:
        page = None
    words = []
    for word in doc.words:
        entry: dict[str, object] = {
            "text": word.text,
            "box": [word.box.left, word.box.top, word.box.width, word.box.height],
        }
        if word.confidence is not None:
            entry["conf"] = word.confidence
        words.append(entry)
    obj = {"v": CANONICAL_SCHEMA_VERSION, "page": page, "words": words}
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


PARSERS = {
    SourceFormat.HOCR: parse_hocr,
    SourceFormat.TESSERACT_TSV: parse_tesseract_tsv,
    SourceFormat.CANONICAL_JSON: parse_canonical_json,
}


def parse_ocr(data: bytes | str, source_format: SourceFormat) -> DocumentOcr:
    return PARSERS[source_format](data)
