"""Benchmark the paint-kernel backends on a document-scale render.

Builds a synthetic page with several hundred word boxes, renders it with
every available backend in both fill modes, reports timings and verifies
the outputs are byte-identical.

Usage: python benchmarks/bench_render.py [--repeats N] [--words N]
"""

import argparse
import random
import time

import numpy as np

from wordvis.backend import available_backends
from wordvis.ocr import BoundingBox, DocumentOcr, OcrWord
from wordvis.render import FillMode, RasterImage, RenderConfig, colorize
from wordvis.scoring import build_default_table

WORDS = ["deep", "taste", "smooth", "blended", "satisfying", "you", "are",
         "the", "for", "new", "what", "medium", "document", "classifier",
         "tobacco", "1995,", "quarterly", "report"]


def synthetic_page(word_count, seed=0, width=1700, height=2200):
    rng = random.Random(seed)
    pixel_rng = np.random.default_rng(seed)
    pixels = np.full((height, width, 3), 255, dtype=np.uint8)
    # sprinkle dark "ink" so the glyph mode has work to do
    ink = pixel_rng.random((height, width)) < 0.08
    pixels[ink] = (20, 20, 20)
    words = []
    for i in range(word_count):
        w = rng.randint(30, 160)
        h = rng.randint(14, 30)
        words.append(
            OcrWord(
                text=rng.choice(WORDS),
                box=BoundingBox(rng.randint(0, width - w), rng.randint(0, height - h), w, h),
                order_index=i,
            )
        )
    return RasterImage(pixels), DocumentOcr(words=words)


def run(repeats, word_count):
    image, doc = synthetic_page(word_count)
    table = build_default_table()
    backends = available_backends()
    print(f"page {image.width}x{image.height}, {word_count} words, "
          f"{repeats} repeats, backends: {', '.join(backends)}")

    for mode, alpha in ((FillMode.SOLID_BOX, 1.0), (FillMode.SOLID_BOX, 0.6),
                        (FillMode.GLYPH_MASK, 1.0)):
        config = RenderConfig(fill_mode=mode, alpha=alpha)
        outputs = {}
        timings = {}
        for backend in backends:
            best = float("inf")
            for _ in range(repeats):
                start = time.perf_counter()
                out, _ = colorize(image, doc, table, config, backend=backend)
                best = min(best, time.perf_counter() - start)
            outputs[backend] = out.pixels
            timings[backend] = best

        label = f"{mode.value} alpha={alpha}"
        parts = [f"{backend}: {timings[backend] * 1000:7.1f} ms" for backend in backends]
        line = f"{label:<18} " + "   ".join(parts)
        if len(backends) == 2:
            a, b = (outputs[n] for n in backends)
            identical = np.array_equal(a, b)
            speedup = timings["python"] / timings["native"]
            line += f"   speedup {speedup:4.1f}x   identical: {identical}"
            if not identical:
                raise SystemExit("backend outputs differ!")
        print(line)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--words", type=int, default=600)
    args = parser.parse_args()
    run(args.repeats, args.words)
