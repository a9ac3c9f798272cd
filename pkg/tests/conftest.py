from pathlib import Path

import numpy as np
import pytest

from wordvis.ocr import BoundingBox, DocumentOcr, OcrWord
from wordvis.render import RasterImage
from wordvis.scoring import build_default_table, build_paper_example_table

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def default_table():
    return build_default_table()


@pytest.fixture(scope="session")
def example_table():
    return build_paper_example_table()


@pytest.fixture
def hocr_bytes():
    return (FIXTURES / "sample.hocr").read_bytes()


@pytest.fixture
def tsv_bytes():
    return (FIXTURES / "sample.tsv").read_bytes()


@pytest.fixture
def json_bytes():
    return (FIXTURES / "sample.json").read_bytes()


def white_image(width=100, height=100):
    return RasterImage.filled(width, height, (255, 255, 255))


def make_doc(*specs, page=(None, None)):
    """Build a DocumentOcr from (text, (l, t, w, h)[, conf]) tuples."""
    words = []
    for i, spec in enumerate(specs):
        text, box = spec[0], spec[1]
        conf = spec[2] if len(spec) > 2 else None
        words.append(OcrWord(text=text, box=BoundingBox(*box), confidence=conf, order_index=i))
    return DocumentOcr(words=words, page_width=page[0], page_height=page[1])


def region_mask(height, width, boxes):
    """Boolean mask of all pixels covered by (l, t, w, h) boxes."""
    mask = np.zeros((height, width), dtype=bool)
    for left, top, w, h in boxes:
        x0, y0 = max(left, 0), max(top, 0)
        x1, y1 = min(left + w, width), min(top + h, height)
        if x1 > x0 and y1 > y0:
            mask[y0:y1, x0:x1] = True
    return mask


HOCR_TEMPLATE = """<?xml version="1.0" encoding="UTF-8"?>
<html xmlns="http://www.w3.org/1999/xhtml">
 <body>
  <div class="ocr_page" title="bbox 0 0 {width} {height}">
{words}
  </div>
 </body>
</html>
"""

CORPUS_WORDS = ["deep", "taste", "smooth", "blended", "you", "are", "the",
                "for", "new", "what", "medium", "satisfying"]


def hocr_document(words, width=120, height=80):
    """Render (text, (l, t, w, h)) tuples as a minimal hOCR page."""
    spans = "\n".join(
        f'   <span class="ocrx_word" title="bbox {l} {t} {l + w} {t + h}">{text}</span>'
        for text, (l, t, w, h) in words
    )
    return HOCR_TEMPLATE.format(width=width, height=height, words=spans)


def make_corpus(input_root, ocr_root, classes=("ADVE", "News"), per_class=2, start=0):
    """Tiny image+hOCR dataset tree mirroring the class-folder layout."""
    from PIL import Image

    count = start
    for label in classes:
        (input_root / label).mkdir(parents=True, exist_ok=True)
        (ocr_root / label).mkdir(parents=True, exist_ok=True)
        for i in range(per_class):
            name = f"doc{count:03}"
            words = [
                (CORPUS_WORDS[(count + j) % len(CORPUS_WORDS)],
                 (5 + 30 * j, 10 + 20 * (j % 2), 25, 12))
                for j in range(3)
            ]
            Image.new("RGB", (120, 80), (255, 255, 255)).save(input_root / label / f"{name}.png")
            (ocr_root / label / f"{name}.hocr").write_text(hocr_document(words), encoding="utf-8")
            count += 1
    return count
