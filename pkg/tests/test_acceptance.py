"""Acceptance suite: one test per release criterion.

Each test prints a `[PASS]`/`[FAIL]` line (visible with `pytest -s`). The
parser fuzz duration defaults to 60 seconds per parser and can be shortened
for development via WORDVIS_FUZZ_SECONDS.
"""

import contextlib
import json
import os
import random
import string
import time
from collections import defaultdict

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import make_corpus, region_mask
from wordvis.cli import main as cli_main
from wordvis.errors import OcrParseError
from wordvis.ocr import parse_canonical_json, parse_hocr, parse_tesseract_tsv
from wordvis.pipeline import (
    Manifest,
    ManifestRecord,
    Split,
    emit_split_lists,
    split_dataset,
)
from wordvis.render import RasterImage, RenderConfig, colorize
from wordvis.scoring import (
    Channel,
    build_default_table,
    build_paper_example_table,
    normalize_token,
    word_color,
)

FUZZ_SECONDS = float(os.environ.get("WORDVIS_FUZZ_SECONDS", "60"))

SCORED = "abcdefghijklmnopqrstuvwxyz0123456789"
FUZZ_ALPHABET = SCORED + SCORED.upper() + " .,!?-'éüñÉÜÑ"


@contextlib.contextmanager
def criterion(number, name, budget=None):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {number}: {name}")
        raise
    elapsed = time.monotonic() - start
    if budget is not None and elapsed >= budget:
        print(f"[FAIL] criterion {number}: {name} (took {elapsed:.1f}s, budget {budget}s)")
        raise AssertionError(f"criterion {number} exceeded its {budget}s budget: {elapsed:.1f}s")
    print(f"[PASS] criterion {number}: {name} ({elapsed:.1f}s)")


def test_criterion_1_worked_example_fidelity():
    with criterion(1, "worked-example fidelity"):
        table = build_paper_example_table()
        assert word_color(table, "deep").color.as_tuple() == (52, 28, 0)
        assert word_color(table, "deeq").color.as_tuple() == (52, 32, 0)


def test_criterion_2_default_table_shape():
    with criterion(2, "default-table shape"):
        table = build_default_table()
        assert len(table) == 36
        counts = table.channel_counts()
        assert counts[Channel.RED] == 12
        assert counts[Channel.GREEN] == 12
        assert counts[Channel.BLUE] == 12
        for char in table.scored_characters():
            _, score = table.lookup(char)
            assert 1 <= score <= 9


def test_criterion_3_scoring_property_suite():
    with criterion(3, "scoring property suite (10,000 fuzzed tokens)", budget=10.0):
        table = build_default_table()
        rng = random.Random(0xC0FFEE)
        tokens = [
            "".join(rng.choice(FUZZ_ALPHABET) for _ in range(rng.randint(0, 100)))
            for _ in range(10_000)
        ]

        channel_of = {char: table.lookup(char)[0] for char in table.scored_characters()}
        for token in tokens:
            normalized = normalize_token(token)
            base = word_color(table, normalized)

            # determinism
            assert word_color(table, normalized) == base
            # clamp bounds
            assert all(0 <= c <= 255 for c in base.color.as_tuple())
            assert all(c == min(r, 255) for c, r in zip(base.color.as_tuple(), base.raw_sums))
            # permutation invariance
            chars = list(normalized)
            rng.shuffle(chars)
            assert word_color(table, "".join(chars)).color == base.color
            # case invariance
            assert word_color(table, normalize_token(token.upper())) == base
            # channel separation
            used = {channel_of[c] for c in normalized if c in channel_of}
            if len(used) == 1:
                (only,) = used
                for channel, value in zip(
                    (Channel.RED, Channel.GREEN, Channel.BLUE), base.color.as_tuple()
                ):
                    if channel is not only:
                        assert value == 0

        # repetition law: c repeated n times -> min(score * n^2, 255) in its channel
        for char in table.scored_characters():
            channel, score = table.lookup(char)
            for n in range(0, 101, 7):
                color = word_color(table, char * n).color
                values = dict(
                    zip((Channel.RED, Channel.GREEN, Channel.BLUE), color.as_tuple())
                )
                assert values.pop(channel) == min(score * n * n, 255)
                assert set(values.values()) == {0} or not values

        # single-substitution bound: every channel moves at most 9 * length
        alphabet = table.scored_characters()
        for token in [t for t in tokens if t][:150]:
            normalized = normalize_token(token) or "a"
            base_color = word_color(table, normalized).color
            bound = 9 * len(normalized)
            for position in range(len(normalized)):
                for substitute in rng.sample(alphabet, 3):
                    mutated = (
                        normalized[:position] + substitute + normalized[position + 1:]
                    )
                    color = word_color(table, mutated).color
                    for before, after in zip(base_color.as_tuple(), color.as_tuple()):
                        assert abs(after - before) <= bound


def _render_fixture(seed):
    """A synthetic document: known words, overlapping and clipped boxes."""
    from conftest import make_doc

    rng = random.Random(seed)
    words = ["deep", "taste", "you", "smooth", "blended", "for", "q", "1995,"]
    specs = []
    for _ in range(rng.randint(4, 8)):
        specs.append(
            (rng.choice(words),
             (rng.randint(-20, 140), rng.randint(-20, 90), rng.randint(1, 60), rng.randint(1, 40)))
        )
    specs.append((rng.choice(words), (130, 70, 120, 90)))  # always clipped
    return make_doc(*specs)


def test_criterion_4_render_locality():
    with criterion(4, "render locality on fixture documents", budget=5.0):
        from wordvis.render import clip_box

        table = build_paper_example_table()
        for seed in range(5):
            image = RasterImage.filled(160, 120, (255, 255, 255))
            doc = _render_fixture(seed)
            for word in doc.words:  # locality check needs color != background
                assert word_color(table, normalize_token(word.text)).color.as_tuple() != (255, 255, 255)

            out, report = colorize(image, doc, table)
            clipped = [clip_box(w.box, image.width, image.height) for w in doc.words]
            expected = region_mask(
                120, 160,
                [(c.left, c.top, c.width, c.height) for c in clipped if not c.is_empty()],
            )
            diff = (out.pixels != image.pixels).any(axis=2)
            assert np.array_equal(diff, expected), f"diff set != clipped regions (seed {seed})"

            # alpha 0 is bit-identity
            untouched, _ = colorize(image, doc, table, RenderConfig(alpha=0.0))
            assert np.array_equal(untouched.pixels, image.pixels)

            # double render at alpha 1 is idempotent
            twice, _ = colorize(out, doc, table)
            assert np.array_equal(twice.pixels, out.pixels)


HOCR_SEED = b"""<?xml version="1.0" encoding="UTF-8"?>
<html xmlns="http://www.w3.org/1999/xhtml"><body>
<div class="ocr_page" title="bbox 0 0 200 100">
<span class="ocrx_word" title="bbox 10 20 50 40; x_wconf 96">deep</span>
<span class="ocrx_word" title="bbox 60 20 120 40">taste</span>
</div></body></html>"""

TSV_SEED = (
    b"level\tpage_num\tblock_num\tpar_num\tline_num\tword_num\tleft\ttop\twidth\theight\tconf\ttext\n"
    b"5\t1\t1\t1\t1\t1\t10\t20\t40\t20\t96.5\tdeep\n"
)

JSON_SEED = b'{"v":1,"page":{"width":200,"height":100},"words":[{"text":"deep","box":[10,20,40,20],"conf":96.5}]}'


def _mutate(data, rng):
    data = bytearray(data)
    op = rng.randrange(5)
    if op == 0 and data:  # flip bytes
        for _ in range(rng.randint(1, 8)):
            data[rng.randrange(len(data))] = rng.randrange(256)
    elif op == 1 and data:  # truncate
        del data[rng.randrange(len(data)):]
    elif op == 2:  # insert noise
        index = rng.randrange(len(data) + 1)
        data[index:index] = bytes(rng.randrange(256) for _ in range(rng.randint(1, 16)))
    elif op == 3 and data:  # splice a slice of itself
        a, b = sorted(rng.randrange(len(data) + 1) for _ in range(2))
        index = rng.randrange(len(data) + 1)
        data[index:index] = data[a:b]
    else:  # pure random
        data = bytearray(rng.randrange(256) for _ in range(rng.randint(0, 256)))
    return bytes(data)


def _fuzz_parser(parser, seed_corpus, seconds, rng):
    deadline = time.monotonic() + seconds
    iterations = 0
    while time.monotonic() < deadline:
        for _ in range(100):
            payload = _mutate(rng.choice(seed_corpus), rng)
            try:
                parser(payload)
            except OcrParseError:
                pass  # structured errors are the contract; anything else crashes the test
            iterations += 1
    return iterations


def test_criterion_5_parser_suite(hocr_bytes, tsv_bytes, json_bytes):
    name = f"parser suite (fuzz {FUZZ_SECONDS:.0f}s/parser)"
    with criterion(5, name):
        # expected-value checks on the fixtures
        hocr = parse_hocr(hocr_bytes)
        assert [w.text for w in hocr.words] == ["deep", "taste", "you", "flip"]
        assert (hocr.words[0].box.left, hocr.words[0].box.top) == (10, 20)
        assert (hocr.words[0].box.width, hocr.words[0].box.height) == (40, 20)
        assert hocr.words[0].confidence == 96.0

        tsv = parse_tesseract_tsv(tsv_bytes)
        assert [w.text for w in tsv.words] == ["deep", "taste", "you"]
        assert tsv.words[0].confidence == 96.5
        assert tsv.words[2].confidence is None

        canonical = parse_canonical_json(json_bytes)
        from wordvis.ocr import serialize_canonical_json

        assert parse_canonical_json(serialize_canonical_json(canonical)) == canonical
        assert parse_canonical_json(serialize_canonical_json(hocr)) == hocr
        assert parse_canonical_json(serialize_canonical_json(tsv)) == tsv

        rng = random.Random(5)
        corpora = {
            parse_hocr: [HOCR_SEED, hocr_bytes, b"", b"<html></html>"],
            parse_tesseract_tsv: [TSV_SEED, tsv_bytes, b""],
            parse_canonical_json: [JSON_SEED, json_bytes, b"{}", b"[]"],
        }
        for parser, seeds in corpora.items():
            iterations = _fuzz_parser(parser, seeds, FUZZ_SECONDS, rng)
            assert iterations > 0


def _synthetic_manifest(n):
    return Manifest(
        records=[
            ManifestRecord(
                input_path=f"c{i % 10}/doc{i:05}.png",
                output_path=f"c{i % 10}/doc{i:05}.png",
                label=f"c{i % 10}",
                painted=1,
                skipped=0,
                table="default-ascending",
                mode="solid",
                digest="sha256:0",
            )
            for i in range(n)
        ]
    )


def test_criterion_6_split_protocol(tmp_path):
    with criterion(6, "split protocol", budget=10.0):
        manifest = _synthetic_manifest(3482)

        # explicit-counts mode reproduces the published split sizes exactly
        assignments = split_dataset(manifest, 0.8, 0.1, seed=13, counts=(2504, 278, 700))
        sizes = {split: 0 for split in Split}
        for assignment in assignments:
            sizes[assignment.split] += 1
        assert sizes == {Split.TRAIN: 2504, Split.VALIDATION: 278, Split.TEST: 700}

        # same-seed reruns are byte-identical
        again = split_dataset(manifest, 0.8, 0.1, seed=13, counts=(2504, 278, 700))
        assert assignments == again
        first = emit_split_lists(assignments, tmp_path / "a")
        second = emit_split_lists(again, tmp_path / "b")
        for split in Split:
            assert first[split].read_bytes() == second[split].read_bytes()

        # partition property over random (N, seed) pairs
        rng = random.Random(6)
        for _ in range(100):
            n = rng.randint(1, 400)
            seed = rng.randrange(2**32)
            result = split_dataset(_synthetic_manifest(n), 0.8, 0.1, seed=seed)
            assert len(result) == n
            assert len({a.output_path for a in result}) == n


def test_criterion_7_batch_determinism(tmp_path):
    with criterion(7, "batch determinism over a 20-document corpus", budget=30.0):
        input_root, ocr_root = tmp_path / "images", tmp_path / "ocr"
        make_corpus(input_root, ocr_root, classes=("ADVE", "Email", "Form", "News"),
                    per_class=5)
        runner = CliRunner()
        outputs = []
        for run in ("run1", "run2"):
            out_root = tmp_path / run
            result = runner.invoke(
                cli_main,
                ["batch", "--input", str(input_root), "--ocr", str(ocr_root),
                 "--out", str(out_root), "--jobs", "4", "--seed", "11"],
            )
            assert result.exit_code == 0, result.output
            outputs.append(out_root)

        first, second = outputs
        manifest_a = (first / "manifest.jsonl").read_bytes()
        manifest_b = (second / "manifest.jsonl").read_bytes()
        assert manifest_a == manifest_b

        manifest = Manifest.load(first / "manifest.jsonl")
        assert len(manifest.records) == 20
        for record in manifest.records:
            assert (first / record.output_path).read_bytes() == \
                   (second / record.output_path).read_bytes()


def _naive_default_scores():
    """Independent restatement of the default assignment as flat literals."""
    table = {}
    for chars, channel in (("abcdefghi", "R"), ("jklmnopqr", "G"), ("stuvwxyz", "B"),
                           ("012", "R"), ("345", "G"), ("6789", "B")):
        for offset, char in enumerate(chars):
            table[char] = (channel, offset + 1)
    return table


def _naive_color(token, scores):
    m = len(token)
    sums = {"R": 0, "G": 0, "B": 0}
    for char in token:
        if char in scores:
            channel, score = scores[char]
            sums[channel] = sums[channel] + score * m
    return tuple(min(sums[k], 255) for k in ("R", "G", "B"))


def test_criterion_8_analysis_oracle():
    with criterion(8, "analysis vs brute-force oracle (1,000-word lexicon)", budget=30.0):
        from wordvis.analysis import collision_report, perturbation_report

        rng = random.Random(42)
        alphabet = string.ascii_lowercase + string.digits + ".,!-'"
        lexicon = sorted(
            {"".join(rng.choice(alphabet) for _ in range(rng.randint(1, 12)))
             for _ in range(1100)}
        )[:1000]
        assert len(lexicon) == 1000

        table = build_default_table()
        report = collision_report(lexicon, table)

        scores = _naive_default_scores()
        groups = defaultdict(list)
        for token in lexicon:
            groups[_naive_color(token, scores)].append(token)
        assert report.lexicon_size == len(lexicon)
        assert report.distinct_colors == len(groups)
        assert report.collision_classes == sum(1 for g in groups.values() if len(g) > 1)
        expected_largest = max(groups.items(), key=lambda kv: (len(kv[1]), sorted(kv[1])[0]))
        assert report.largest_class_color.as_tuple() == expected_largest[0]
        assert report.largest_class_words == sorted(expected_largest[1])
        anagram = non_anagram = 0
        for members in groups.values():
            multisets = defaultdict(int)
            for token in members:
                multisets["".join(sorted(token))] += 1
            pairs = len(members) * (len(members) - 1) // 2
            same = sum(k * (k - 1) // 2 for k in multisets.values())
            anagram += same
            non_anagram += pairs - same
        assert report.anagram_pairs == anagram
        assert report.non_anagram_pairs == non_anagram
        assert sum(len(g) for g in groups.values()) == len(lexicon)

        perturb = perturbation_report(lexicon[:300], table)
        for entry in perturb.per_word:
            assert entry.max_delta <= 9 * len(entry.word)
