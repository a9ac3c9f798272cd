"""wordvis command line: colorize, batch, split, table, analyze.

Exit codes: 0 success, 1 fatal error, 2 partial failure (batch runs with
per-document failures).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from wordvis import analysis, pipeline, scoring
from wordvis.errors import WordvisError
from wordvis.ocr import SourceFormat, parse_ocr
from wordvis.render import FillMode, RasterImage, RenderConfig, colorize

_FORMATS = {f.value: f for f in SourceFormat}
_MODES = {m.value: m for m in FillMode}


def _fail(exc: Exception) -> "click.ClickException":
    return click.ClickException(str(exc))


def _render_config(mode, alpha, min_conf, glyph_threshold) -> RenderConfig:
    try:
        return RenderConfig(
            fill_mode=_MODES[mode],
            alpha=alpha,
            glyph_threshold=glyph_threshold,
            min_confidence=min_conf,
        )
    except ValueError as exc:
        raise _fail(exc) from exc


@click.group()
@click.version_option(package_name="wordvis")
def main():
    """Deterministic word-to-color encoding for document images."""


@main.command(name="colorize")
@click.argument("image", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("ocr", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Output image path (default: <image stem>_colorized.png).")
@click.option("--table", "table_ref", default=scoring.DEFAULT_TABLE_NAME, show_default=True,
              help="Built-in table name or table file path.")
@click.option("--mode", type=click.Choice(sorted(_MODES)), default="solid", show_default=True)
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--min-conf", type=float, default=0.0, show_default=True)
@click.option("--glyph-threshold", type=int, default=128, show_default=True)
@click.option("--format", "ocr_format", type=click.Choice(sorted(_FORMATS)), default="hocr",
              show_default=True)
@click.option("--jpeg", is_flag=True, help="Write JPEG instead of PNG (lossy: pixel-exact "
              "guarantees no longer apply).")
@click.option("--backend", type=click.Choice(["auto", "native", "python"]), default="auto",
              show_default=True, help="Paint-kernel implementation.")
def colorize_command(image, ocr, output, table_ref, mode, alpha, min_conf, glyph_threshold,
                     ocr_format, jpeg, backend):
    """Colorize one image from its OCR file."""
    config = _render_config(mode, alpha, min_conf, glyph_threshold)
    try:
        table = scoring.resolve_table(table_ref)
        raster = RasterImage.load(image)
        doc = parse_ocr(ocr.read_bytes(), _FORMATS[ocr_format])
        rendered, report = colorize(raster, doc, table, config, backend=backend)
    except (WordvisError, OSError, ValueError) as exc:
        raise _fail(exc) from exc

    if output is None:
        suffix = ".jpg" if jpeg else ".png"
        output = image.with_name(image.stem + "_colorized" + suffix)
    if jpeg:
        click.echo("warning: JPEG output is lossy; painted regions are not bit-exact",
                   err=True)
    try:
        rendered.to_pil().save(output, format="JPEG" if jpeg else "PNG")
    except OSError as exc:
        raise _fail(exc) from exc
    for warning in doc.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(
        f"{output}: painted {report.painted}, skipped {report.skipped}, "
        f"clipped {report.clipped} ({report.backend} backend)"
    )


@main.command(name="batch")
@click.option("--input", "input_root", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--ocr", "ocr_root", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--out", "output_root", required=True, type=click.Path(path_type=Path))
@click.option("--table", "table_ref", default=scoring.DEFAULT_TABLE_NAME, show_default=True)
@click.option("--mode", type=click.Choice(sorted(_MODES)), default="solid", show_default=True)
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--min-conf", type=float, default=0.0, show_default=True)
@click.option("--glyph-threshold", type=int, default=128, show_default=True)
@click.option("--format", "ocr_format", type=click.Choice(sorted(_FORMATS)), default="hocr",
              show_default=True)
@click.option("--jobs", type=int, default=None,
              help="Concurrent documents (default: WORDVIS_JOBS or CPU count).")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Recorded in the manifest for later splits.")
@click.option("--jpeg", is_flag=True, help="Write JPEG outputs instead of PNG.")
def batch_command(input_root, ocr_root, output_root, table_ref, mode, alpha, min_conf,
                  glyph_threshold, ocr_format, jobs, seed, jpeg):
    """Colorize a dataset tree and write a manifest."""
    config = _render_config(mode, alpha, min_conf, glyph_threshold)
    try:
        job = pipeline.JobSpec(
            input_root=input_root,
            ocr_root=ocr_root,
            output_root=output_root,
            table_ref=table_ref,
            render=config,
            ocr_format=_FORMATS[ocr_format],
            concurrency=jobs if jobs is not None else pipeline.default_concurrency(),
            seed=seed,
            output_format="jpeg" if jpeg else "png",
        )
        manifest = pipeline.process_batch(job)
    except (WordvisError, OSError) as exc:
        raise _fail(exc) from exc

    for warning in manifest.meta.get("warnings", []):
        click.echo(f"warning: {warning}", err=True)
    click.echo(
        f"processed {len(manifest.records)} document(s), "
        f"{len(manifest.failures)} failure(s); manifest at "
        f"{output_root / pipeline.MANIFEST_NAME}"
    )
    if manifest.failures:
        for failure in manifest.failures:
            click.echo(f"failed: {failure.input_path}: {failure.error}", err=True)
        sys.exit(2)


def _parse_counts(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise click.ClickException(
            "--counts expects three comma-separated integers, e.g. 2504,278,700"
        )
    try:
        counts = tuple(int(p) for p in parts)
    except ValueError:
        raise click.ClickException(f"--counts must be integers, got {text!r}") from None
    return counts


@main.command(name="split")
@click.option("--manifest", "manifest_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--train", "train_fraction", type=float, default=0.8, show_default=True)
@click.option("--val", "val_fraction", type=float, default=0.1, show_default=True,
              help="Validation fraction of the training pool.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--counts", default=None,
              help="Explicit train,val,test sizes overriding the fractions.")
@click.option("--stratify", is_flag=True, help="Apply the split per class label.")
@click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Where to write train.txt/val.txt/test.txt (default: manifest directory).")
def split_command(manifest_path, train_fraction, val_fraction, seed, counts, stratify, out_dir):
    """Deterministically split a manifest into train/val/test lists."""
    try:
        manifest = pipeline.Manifest.load(manifest_path)
        assignments = pipeline.split_dataset(
            manifest,
            train_fraction,
            val_fraction,
            seed,
            counts=_parse_counts(counts) if counts else None,
            stratify=stratify,
        )
        paths = pipeline.emit_split_lists(
            assignments, out_dir if out_dir is not None else manifest_path.parent
        )
    except WordvisError as exc:
        raise _fail(exc) from exc

    sizes = {split: 0 for split in pipeline.Split}
    for assignment in assignments:
        sizes[assignment.split] += 1
    click.echo(
        f"train {sizes[pipeline.Split.TRAIN]}, val {sizes[pipeline.Split.VALIDATION]}, "
        f"test {sizes[pipeline.Split.TEST]} -> {paths[pipeline.Split.TRAIN].parent}"
    )


@main.group(name="table")
def table_group():
    """Inspect and validate score tables."""


@table_group.command(name="show")
@click.argument("ref")
def table_show(ref):
    """Print a built-in table (by name) or a table file."""
    try:
        table = scoring.resolve_table(ref)
    except WordvisError as exc:
        raise _fail(exc) from exc
    counts = table.channel_counts()
    click.echo(f"table {table.name}: {len(table)} entries "
               f"(R {counts[scoring.Channel.RED]}, G {counts[scoring.Channel.GREEN]}, "
               f"B {counts[scoring.Channel.BLUE]})")
    for char in table.scored_characters():
        channel, score = table.lookup(char)
        click.echo(f"{char} {channel.value} {score}")


@table_group.command(name="check")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
def table_check(file):
    """Validate a score-table file."""
    try:
        table = scoring.load_table(file)
    except WordvisError as exc:
        raise _fail(exc) from exc
    counts = table.channel_counts()
    click.echo(f"OK: {len(table)} entries "
               f"(R {counts[scoring.Channel.RED]}, G {counts[scoring.Channel.GREEN]}, "
               f"B {counts[scoring.Channel.BLUE]})")


@main.group(name="analyze")
def analyze_group():
    """Reports over a lexicon: collisions, perturbations, hues."""


def _load_analysis_inputs(lexicon_path, table_ref):
    try:
        lexicon = analysis.load_lexicon(lexicon_path)
        table = scoring.resolve_table(table_ref)
    except (WordvisError, OSError) as exc:
        raise _fail(exc) from exc
    return lexicon, table


def _write_json(report_dict: dict, json_path: Path | None) -> None:
    if json_path is None:
        return
    json_path.write_text(json.dumps(report_dict, indent=2, sort_keys=True) + "\n",
                         encoding="utf-8")
    click.echo(f"wrote {json_path}")


_LEXICON_OPT = click.option("--lexicon", "lexicon_path", required=True,
                            type=click.Path(exists=True, dir_okay=False, path_type=Path))
_TABLE_OPT = click.option("--table", "table_ref", default=scoring.DEFAULT_TABLE_NAME,
                          show_default=True)
_JSON_OPT = click.option("--json", "json_path", type=click.Path(dir_okay=False, path_type=Path),
                         default=None, help="Also write the structured report to this file.")


@analyze_group.command(name="collisions")
@_LEXICON_OPT
@_TABLE_OPT
@_JSON_OPT
def analyze_collisions(lexicon_path, table_ref, json_path):
    """Color collision classes over a lexicon."""
    lexicon, table = _load_analysis_inputs(lexicon_path, table_ref)
    try:
        report = analysis.collision_report(lexicon, table)
    except WordvisError as exc:
        raise _fail(exc) from exc
    click.echo(f"lexicon size        {report.lexicon_size}")
    click.echo(f"distinct colors     {report.distinct_colors}")
    click.echo(f"collision classes   {report.collision_classes}")
    click.echo(f"anagram pairs       {report.anagram_pairs}")
    click.echo(f"non-anagram pairs   {report.non_anagram_pairs}")
    if report.largest_class_color is not None:
        color = report.largest_class_color.as_tuple()
        members = ", ".join(report.largest_class_words[:8])
        click.echo(f"largest class       {color} [{members}]")
    _write_json(report.to_dict(), json_path)


@analyze_group.command(name="perturb")
@_LEXICON_OPT
@_TABLE_OPT
@_JSON_OPT
def analyze_perturb(lexicon_path, table_ref, json_path):
    """Color deltas under single-character substitutions."""
    lexicon, table = _load_analysis_inputs(lexicon_path, table_ref)
    try:
        report = analysis.perturbation_report(lexicon, table)
    except WordvisError as exc:
        raise _fail(exc) from exc
    click.echo(f"words               {len(report.per_word)}")
    click.echo(f"alphabet size       {report.alphabet_size}")
    click.echo(f"max channel delta   {report.max_delta}")
    click.echo(f"mean channel delta  {report.mean_delta:.2f}")
    worst = max(report.per_word, key=lambda w: w.max_delta)
    click.echo(f"worst word          {worst.word!r} (delta {worst.max_delta}, "
               f"bound {worst.bound})")
    _write_json(report.to_dict(), json_path)


@analyze_group.command(name="hues")
@_LEXICON_OPT
@_TABLE_OPT
@click.option("--stopwords", "stopwords_path", default=None,
              type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Stop-word file (default: bundled English list).")
@_JSON_OPT
def analyze_hues(lexicon_path, table_ref, stopwords_path, json_path):
    """Dominant-channel profile of stop-words vs the rest."""
    lexicon, table = _load_analysis_inputs(lexicon_path, table_ref)
    try:
        stopwords = analysis.load_stopwords(stopwords_path)
        report = analysis.hue_profile(lexicon, table, stopwords)
    except (WordvisError, OSError) as exc:
        raise _fail(exc) from exc
    click.echo(f"stop-words           {report.stopword_count}")
    click.echo(f"other words          {report.non_stopword_count}")
    green = report.stopword_green_fraction
    click.echo(f"stop-word green frac {green:.3f}" if green is not None
               else "stop-word green frac n/a")
    for label, value in (
        ("mean spread (stop)", report.mean_spread_stopwords),
        ("mean spread (other)", report.mean_spread_non_stopwords),
    ):
        click.echo(f"{label:<20} {value:.2f}" if value is not None else f"{label:<20} n/a")
    click.echo(f"spread difference    {report.spread_difference:.2f}")
    click.echo(f"dominance ties       {report.tie_count}")
    _write_json(report.to_dict(), json_path)


if __name__ == "__main__":
    main()
