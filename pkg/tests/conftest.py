import json
from pathlib import Path

import pytest

from smudge import BBox, DocumentLayout, Page, Segment, Word

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def make_doc(lines, doc_id="doc", width=1000.0, height=800.0, page_num=0,
             x0=40.0, y0=60.0, gap=40.0, char_w=10.0, line_h=20.0):
    """One page; each line of text becomes one segment of evenly spaced words."""
    segments = []
    y = y0
    for line in lines:
        x = x0
        words = []
        for token in line.split():
            w = char_w * len(token)
            words.append(Word(text=token, bbox=BBox(x, y, x + w, y + line_h)))
            x += w + char_w
        segments.append(Segment(words=tuple(words)))
        y += gap
    page = Page(page_num=page_num, width=width, height=height,
                segments=tuple(segments))
    return DocumentLayout(doc_id=doc_id, pages=(page,))


@pytest.fixture(scope="session")
def fixtures_dir():
    assert FIXTURES.is_dir(), "run scripts/gen_fixtures.py first"
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_gt(fixtures_dir):
    return json.loads((fixtures_dir / "gt.json").read_text())
