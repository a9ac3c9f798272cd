"""Batch processing over a dataset tree, manifests and dataset splits.

A batch run pairs each image under the input root with the OCR file of the
same relative path under the OCR root, colorizes it, writes the output
image under the output root (mirroring the tree) and records everything in
a JSON Lines manifest. Splits are a pure function of (record paths,
fractions, seed) so reruns are byte-identical.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from wordvis import scoring
from wordvis.errors import PipelineError, WordvisError
from wordvis.ocr import SourceFormat, parse_ocr
from wordvis.render import RasterImage, RenderConfig, colorize

MANIFEST_VERSION = 1
MANIFEST_NAME = "manifest.jsonl"

IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg"}

OCR_EXTENSIONS = {
    SourceFormat.HOCR: ".hocr",
    SourceFormat.TESSERACT_TSV: ".tsv",
    SourceFormat.CANONICAL_JSON: ".json",
}


def default_concurrency() -> int:
    env = os.environ.get("WORDVIS_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise PipelineError(f"WORDVIS_JOBS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


@dataclass
class JobSpec:
    input_root: Path
    ocr_root: Path
    output_root: Path
    table_ref: str = scoring.DEFAULT_TABLE_NAME
    render: RenderConfig = field(default_factory=RenderConfig)
    ocr_format: SourceFormat = SourceFormat.HOCR
    concurrency: int = 1
    seed: int = 0
    output_format: str = "png"

    def __post_init__(self):
        self.input_root = Path(self.input_root)
        self.ocr_root = Path(self.ocr_root)
        self.output_root = Path(self.output_root)
        if self.concurrency < 1:
            raise PipelineError(f"concurrency must be >= 1, got {self.concurrency}")
        if self.output_format not in ("png", "jpeg"):
            raise PipelineError(f"output format must be png or jpeg, got {self.output_format!r}")


@dataclass(frozen=True)
class ManifestRecord:
    input_path: str
    output_path: str
    label: str
    painted: int
    skipped: int
    table: str
    mode: str
    digest: str


@dataclass(frozen=True)
class ManifestFailure:
    input_path: str
    error: str


@dataclass
class Manifest:
    records: list[ManifestRecord] = field(default_factory=list)
    failures: list[ManifestFailure] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_jsonl(self) -> bytes:
        lines = []
        if self.meta:
            lines.append(json.dumps({"v": MANIFEST_VERSION, "kind": "meta", **self.meta}))
        for record in self.records:
            lines.append(
                json.dumps(
                    {
                        "v": MANIFEST_VERSION,
                        "kind": "record",
                        "input": record.input_path,
                        "output": record.output_path,
                        "label": record.label,
                        "painted": record.painted,
                        "skipped": record.skipped,
                        "table": record.table,
                        "mode": record.mode,
                        "digest": record.digest,
                    }
                )
            )
        for failure in self.failures:
            lines.append(
                json.dumps(
                    {
                        "v": MANIFEST_VERSION,
                        "kind": "failure",
                        "input": failure.input_path,
                        "error": failure.error,
                    }
                )
            )
        return ("\n".join(lines) + "\n").encode("utf-8")

    def write(self, path: str | Path) -> None:
        """Write atomically: the manifest appears all at once or not at all."""
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(self.to_jsonl())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | Path) -> "Manifest":
        manifest = cls()
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise PipelineError(f"cannot read manifest {path}: {exc}") from exc
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise PipelineError(f"manifest line {lineno} is not valid JSON: {exc}") from exc
            kind = obj.get("kind")
            if kind == "meta":
                manifest.meta = {k: v for k, v in obj.items() if k not in ("v", "kind")}
            elif kind == "record":
                try:
                    manifest.records.append(
                        ManifestRecord(
                            input_path=obj["input"],
                            output_path=obj["output"],
                            label=obj["label"],
                            painted=obj["painted"],
                            skipped=obj["skipped"],
                            table=obj["table"],
                            mode=obj["mode"],
                            digest=obj["digest"],
                        )
                    )
                except KeyError as exc:
                    raise PipelineError(
                        f"manifest line {lineno} is missing field {exc}"
                    ) from None
            elif kind == "failure":
                manifest.failures.append(
                    ManifestFailure(input_path=obj.get("input", ""), error=obj.get("error", ""))
                )
            else:
                raise PipelineError(f"manifest line {lineno} has unknown kind {kind!r}")
        return manifest


def discover_pairs(
    input_root: str | Path,
    ocr_root: str | Path,
    ocr_format: SourceFormat,
) -> tuple[list[tuple[Path, Path]], list[str]]:
    """Pair image files with their OCR files by relative path and stem.

    Returns (pairs, warnings): pairs ordered lexicographically by relative
    path, one warning per image without a matching OCR file.
    """
    input_root = Path(input_root)
    ocr_root = Path(ocr_root)
    if not input_root.is_dir():
        raise PipelineError(f"input root {input_root} is not a readable directory")
    if not ocr_root.is_dir():
        raise PipelineError(f"OCR root {ocr_root} is not a readable directory")

    extension = OCR_EXTENSIONS[ocr_format]
    images = [
        p for p in input_root.rglob("*")
        if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS
    ]
    images.sort(key=lambda p: p.relative_to(input_root).as_posix())

    pairs: list[tuple[Path, Path]] = []
    warnings: list[str] = []
    for image in images:
        relative = image.relative_to(input_root)
        ocr_path = (ocr_root / relative).with_suffix(extension)
        if ocr_path.is_file():
            pairs.append((image, ocr_path))
        else:
            warnings.append(f"no OCR file for {relative.as_posix()} (expected {ocr_path})")
    return pairs, warnings


def _label_for(relative: Path) -> str:
    parent = relative.parent.as_posix()
    return "" if parent == "." else relative.parent.name


def process_batch(job: JobSpec) -> Manifest:
    """Run the full batch: discover, parse, colorize, write, record.

    Per-document failures become manifest failure entries; only an unusable
    root or an unwritable output is fatal. The manifest is written last,
    atomically, so it never references an unwritten output file.
    """
    table = scoring.resolve_table(job.table_ref)
    pairs, warnings = discover_pairs(job.input_root, job.ocr_root, job.ocr_format)
    try:
        job.output_root.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise PipelineError(f"cannot create output root {job.output_root}: {exc}") from exc

    output_suffix = ".png" if job.output_format == "png" else ".jpg"
    pil_format = "PNG" if job.output_format == "png" else "JPEG"

    def work(pair: tuple[Path, Path]):
        image_path, ocr_path = pair
        relative = image_path.relative_to(job.input_root)
        try:
            image = RasterImage.load(image_path)
            doc = parse_ocr(ocr_path.read_bytes(), job.ocr_format)
            rendered, report = colorize(image, doc, table, job.render)
            data = rendered.encode(pil_format)
        except (WordvisError, OSError, ValueError) as exc:
            return ManifestFailure(input_path=relative.as_posix(), error=str(exc))
        output_path = (job.output_root / relative).with_suffix(output_suffix)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_bytes(data)
        return ManifestRecord(
            input_path=relative.as_posix(),
            output_path=output_path.relative_to(job.output_root).as_posix(),
            label=_label_for(relative),
            painted=report.painted,
            skipped=report.skipped,
            table=table.name,
            mode=job.render.fill_mode.value,
            digest="sha256:" + hashlib.sha256(data).hexdigest(),
        )

    manifest = Manifest(
        meta={
            "table": table.name,
            "mode": job.render.fill_mode.value,
            "alpha": job.render.alpha,
            "min_confidence": job.render.min_confidence,
            "format": job.ocr_format.value,
            "seed": job.seed,
            "warnings": warnings,
        }
    )
    if job.concurrency == 1 or len(pairs) <= 1:
        results = [work(pair) for pair in pairs]
    else:
        with ThreadPoolExecutor(max_workers=job.concurrency) as pool:
            results = list(pool.map(work, pairs))
    for result in results:
        if isinstance(result, ManifestRecord):
            manifest.records.append(result)
        else:
            manifest.failures.append(result)

    manifest.write(job.output_root / MANIFEST_NAME)
    return manifest


# ---------------------------------------------------------------------------
# Dataset splits


class Split(enum.Enum):
    TRAIN = "train"
    VALIDATION = "val"
    TEST = "test"


@dataclass(frozen=True)
class SplitAssignment:
    output_path: str
    split: Split


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _shuffled(items: list[str], rng: random.Random) -> list[str]:
    # Fisher-Yates over rng.random(): random() is the one generator method
    # whose sequence is guaranteed stable for a given seed.
    items = list(items)
    for i in range(len(items) - 1, 0, -1):
        j = int(rng.random() * (i + 1))
        items[i], items[j] = items[j], items[i]
    return items


def _split_counts(n: int, train_fraction: float, val_fraction_of_train: float) -> tuple[int, int, int]:
    pool = _round_half_up(n * train_fraction)
    test = n - pool
    val = _round_half_up(pool * val_fraction_of_train)
    train = pool - val
    return train, val, test


def _assign(keys: list[str], counts: tuple[int, int, int], rng: random.Random):
    train, val, test = counts
    shuffled = _shuffled(sorted(keys), rng)
    assignments = []
    for key in shuffled[:test]:
        assignments.append(SplitAssignment(key, Split.TEST))
    for key in shuffled[test:test + val]:
        assignments.append(SplitAssignment(key, Split.VALIDATION))
    for key in shuffled[test + val:]:
        assignments.append(SplitAssignment(key, Split.TRAIN))
    return assignments


def split_dataset(
    manifest: Manifest,
    train_fraction: float,
    val_fraction_of_train: float,
    seed: int,
    counts: tuple[int, int, int] | None = None,
    stratify: bool = False,
) -> list[SplitAssignment]:
    """Assign every manifest record to exactly one of train/val/test.

    Sizes follow the documented rounding rule: pool = round(N * train_fraction)
    half-up, test = N - pool, val = round(pool * val_fraction_of_train), train
    is the rest. Explicit `counts` (train, val, test) override the rule; they
    must sum to N. `stratify` applies the rule per class label.
    """
    if not manifest.records:
        raise PipelineError("cannot split an empty manifest")
    if not 0.0 < train_fraction < 1.0:
        raise PipelineError(f"train fraction {train_fraction} outside (0, 1)")
    if not 0.0 <= val_fraction_of_train < 1.0:
        raise PipelineError(f"validation fraction {val_fraction_of_train} outside [0, 1)")
    if counts is not None and stratify:
        raise PipelineError("explicit counts cannot be combined with stratification")

    keys = [record.output_path for record in manifest.records]
    if len(set(keys)) != len(keys):
        raise PipelineError("manifest contains duplicate output paths")
    n = len(keys)

    if counts is not None:
        if len(counts) != 3 or any(c < 0 for c in counts):
            raise PipelineError(f"counts must be three non-negative integers, got {counts}")
        if sum(counts) != n:
            raise PipelineError(f"counts {counts} sum to {sum(counts)}, manifest has {n} records")
        assignments = _assign(keys, tuple(counts), random.Random(seed))
    elif stratify:
        by_label: dict[str, list[str]] = {}
        for record in manifest.records:
            by_label.setdefault(record.label, []).append(record.output_path)
        rng = random.Random(seed)
        assignments = []
        for label in sorted(by_label):
            group = by_label[label]
            assignments.extend(
                _assign(group, _split_counts(len(group), train_fraction, val_fraction_of_train), rng)
            )
    else:
        assignments = _assign(
            keys, _split_counts(n, train_fraction, val_fraction_of_train), random.Random(seed)
        )

    assignments.sort(key=lambda a: a.output_path)
    return assignments


SPLIT_FILE_NAMES = {
    Split.TRAIN: "train.txt",
    Split.VALIDATION: "val.txt",
    Split.TEST: "test.txt",
}


def emit_split_lists(assignments: list[SplitAssignment], out_dir: str | Path) -> dict[Split, Path]:
    """Write train.txt/val.txt/test.txt, one path per line, sorted. All three
    files are created even when empty."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise PipelineError(f"cannot create split directory {out_dir}: {exc}") from exc

    by_split: dict[Split, list[str]] = {split: [] for split in Split}
    for assignment in assignments:
        by_split[assignment.split].append(assignment.output_path)

    paths = {}
    for split, file_name in SPLIT_FILE_NAMES.items():
        path = out_dir / file_name
        lines = sorted(by_split[split])
        try:
            path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        except OSError as exc:
            raise PipelineError(f"cannot write {path}: {exc}") from exc
        paths[split] = path
    return paths
