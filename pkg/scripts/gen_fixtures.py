#!/usr/bin/env python3
"""Regenerate the fixture dataset under fixtures/.

Deterministic: handcrafted documents/samples plus a seeded randomized set
used for bindings parity checks. Run from the repo root:

    python3 scripts/gen_fixtures.py
"""

from __future__ import annotations

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

CHAR_W = 10.0
LINE_H = 20.0


def make_page(page_num: int, width: float, height: float, lines: list[str],
              x0: float = 40.0, y0: float = 60.0, gap: float = 40.0) -> dict:
    """Lay each line out as one segment of evenly spaced words."""
    segments = []
    y = y0
    for line in lines:
        x = x0
        words = []
        for token in line.split():
            w = CHAR_W * len(token)
            words.append({"text": token, "bbox": [x, y, x + w, y + LINE_H]})
            x += w + CHAR_W
        segments.append({"words": words})
        y += gap
    return {"page_num": page_num, "width": width, "height": height,
            "segments": segments}


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")


def handcrafted() -> None:
    docs = [
        {
            "doc_id": "doc_farina",
            "coords": "pixels",
            "pages": [
                make_page(0, 1000, 800, [
                    "Iron content of cereals",
                    "enriched farina 12 mgs",
                    "wheat bran 26 mgs",
                    "oatmeal 8.5 mgs",
                    "premodified infant formulas contain up to 12 milligrams of added iron",
                ]),
            ],
        },
        {
            "doc_id": "doc_report",
            "coords": "pixels",
            "pages": [
                make_page(0, 1200, 900, [
                    "Annual Report 2023",
                    "total revenue 1,700 million dollars",
                    "net loss (16.1%) compared to 2022",
                    "board approved the dividend in march",
                ]),
                make_page(1, 1200, 900, [
                    "Appendix",
                    "employee count 5130",
                    "headquarters located in zurich switzerland",
                    "auditor signed on august 1, 1983",
                ]),
            ],
        },
        {
            "doc_id": "doc_menu",
            "coords": "pixels",
            "pages": [
                make_page(0, 800, 600, [
                    "breakfast menu",
                    "pancakes with maple syrup",
                    "coffee 3 dollars",
                    "orange juice 4 dollars",
                    "served daily until noon",
                ]),
            ],
        },
    ]
    for doc in docs:
        write_json(FIXTURES / "ocr" / f"{doc['doc_id']}.json", doc)

    samples = [
        # Numeric answers
        ("q01", "doc_farina", "How many mgs of iron is in enriched farina?", ["12"], "Table/List"),
        ("q02", "doc_farina", "How many mgs of iron is in wheat bran?", ["26"], "Table/List"),
        ("q03", "doc_report", "What was the 2023 employee count?", ["5130"], "Form"),
        ("q04", "doc_menu", "How many dollars does coffee cost?", ["3"], "Table/List"),
        ("q05", "doc_report", "What year is the annual report for?", ["2023"], "Layout"),
        # Textual answers
        ("q06", "doc_menu", "What is served with pancakes?", ["maple syrup"], "Free_text"),
        ("q07", "doc_report", "Where are the headquarters located?",
         ["zurich switzerland", "zurich"], "Free_text"),
        ("q08", "doc_farina", "Which cereal has the least iron?", ["oatmeal"], "Table/List"),
        ("q09", "doc_menu", "Until when is breakfast served?", ["noon"], "Free_text"),
        ("q10", "doc_report", "In which month was the dividend approved?", ["march"], "Free_text"),
        # Hybrid answers
        ("q11", "doc_farina", "How much added iron do premodified infant formulas contain?",
         ["up to 12 milligrams"], "Free_text"),
        ("q12", "doc_report", "What was the total revenue?",
         ["1,700 million", "1700 million"], "Form"),
        ("q13", "doc_report", "What was the net loss?",
         ["(16.1%)", "-16.1%"], "Form"),
        ("q14", "doc_report", "On what date did the auditor sign?",
         ["august 1, 1983"], "Handwritten"),
        ("q15", "doc_menu", "What does orange juice cost?", ["4 dollars"], "Table/List"),
        # Second-page answers on the multi-page document
        ("q16", "doc_report", "What section starts page two?", ["Appendix"], "Layout"),
        ("q17", "doc_farina", "How many mgs of iron does oatmeal contain?", ["8.5 mgs"], "Table/List"),
        ("q18", "doc_menu", "What kind of menu is this?", ["breakfast menu"], "Layout"),
        ("q19", "doc_farina", "What is the table about?", ["Iron content of cereals"], "Layout"),
        ("q20", "doc_report", "Who approved the dividend?", ["board"], "Free_text"),
        ("q21", "doc_menu", "Which drink costs 4 dollars?", ["orange juice"], "Table/List"),
    ]
    write_json(FIXTURES / "gt.json", {
        "dataset": "fixture",
        "samples": [
            {"qid": qid, "doc_id": doc_id, "question": q, "answers": answers,
             "question_type": qtype}
            for qid, doc_id, q, answers, qtype in samples
        ],
    })

    # model_a: mostly correct, a few near misses.
    model_a = {
        "q01": ("12", 0.95),
        "q02": ("26", 0.9),
        "q03": ("5130", 0.99),
        "q04": ("3", 0.8),
        "q05": ("2023", 0.97),
        "q06": ("maple syrup", 0.9),
        "q07": ("zurich switzerland", 0.85),
        "q08": ("oatmeal", 0.9),
        "q09": ("noon", 0.95),
        "q10": ("march", 0.9),
        "q11": ("up to 12 mgs", 0.7),
        "q12": ("1,700 million", 0.8),
        "q13": ("-16.1%", 0.75),
        "q14": ("august 1, 1983", 0.9),
        "q15": ("4 dollars", 0.85),
        "q16": ("Appendix", 0.9),
        "q17": ("8.5 mgs", 0.85),
        "q18": ("breakfast menu", 0.9),
        "q19": ("Iron content of cereals", 0.9),
        # q20 intentionally missing from this run.
        "q21": ("orange juice", 0.9),
    }
    # model_b: hallucinations, wrong numbers, empty and cross-page answers.
    model_b = {
        "q01": ("26", 0.6),           # wrong number, but printed nearby
        "q02": ("99999", 0.5),        # hallucinated number
        "q03": ("5130000", 0.6),      # thousand-scaled
        "q04": ("four", 0.4),
        "q05": ("2022", 0.55),
        "q06": ("whipped cream", 0.5),  # hallucinated
        "q07": ("zurich", 0.7),
        "q08": ("wheat bran", 0.6),
        "q09": ("", 0.1),             # empty prediction
        "q10": ("march", 0.8),
        "q11": ("up to 1z milligrams", 0.6),
        "q12": ("1,700", 0.65),
        "q13": ("(16.1%)", 0.7),
        "q14": ("Appendix", 0.3),     # wrong span, same doc
        "q15": ("3 dollars", 0.5),
        "q16": ("Annual Report", 0.5),  # first-page answer for a page-two question
        "q17": ("8.5", 0.6),
        "q18": ("lunch menu", 0.4),
        "q19": ("cereal iron levels", 0.45),  # paraphrase, weakly locatable
        "q20": ("board", 0.8),
        "q21": ("coffee", 0.5),
    }
    for name, preds in (("model_a", model_a), ("model_b", model_b)):
        write_json(FIXTURES / f"preds_{name}.json", {
            "model": name,
            "predictions": [
                {"qid": qid, "answer": answer, "confidence": conf}
                for qid, (answer, conf) in sorted(preds.items())
            ],
        })


WORDS = [
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel",
    "india", "juliet", "kilo", "lima", "mike", "november", "oscar", "papa",
    "quebec", "romeo", "sierra", "tango", "uniform", "victor", "whiskey",
    "xray", "yankee", "zulu", "report", "total", "value", "amount",
]


def randomized_parity(n_samples: int = 100, seed: int = 20240907) -> None:
    """Randomized single-page documents and predictions for parity checks."""
    rng = random.Random(seed)
    samples = []
    predictions = []
    for i in range(n_samples):
        qid = f"p{i:03d}"
        doc_id = f"pdoc{i:03d}"
        lines = []
        for _ in range(rng.randint(3, 6)):
            tokens = []
            for _ in range(rng.randint(2, 6)):
                if rng.random() < 0.3:
                    tokens.append(str(rng.randint(1, 99999)))
                else:
                    tokens.append(rng.choice(WORDS))
            lines.append(" ".join(tokens))
        page = make_page(0, 1000, 800, lines)
        write_json(FIXTURES / "parity" / "ocr" / f"{doc_id}.json",
                   {"doc_id": doc_id, "coords": "pixels", "pages": [page]})

        # Answer: a random contiguous span from a random line.
        line_tokens = rng.choice(lines).split()
        start = rng.randrange(len(line_tokens))
        length = rng.randint(1, min(3, len(line_tokens) - start))
        answer = " ".join(line_tokens[start : start + length])
        samples.append({"qid": qid, "doc_id": doc_id,
                        "question": f"what is span {i}?", "answers": [answer]})

        roll = rng.random()
        if roll < 0.5:
            predicted = answer
        elif roll < 0.7:
            # Corrupt one character.
            pos = rng.randrange(len(answer))
            predicted = answer[:pos] + rng.choice("xqz9") + answer[pos + 1 :]
        elif roll < 0.9:
            predicted = rng.choice(WORDS) + str(rng.randint(100, 999))
        else:
            predicted = "zzzz qqqq"  # hallucination
        predictions.append({"qid": qid, "answer": predicted,
                            "confidence": round(rng.random(), 3)})

    write_json(FIXTURES / "parity" / "gt.json",
               {"dataset": "parity", "samples": samples})
    write_json(FIXTURES / "parity" / "preds.json",
               {"model": "parity_model", "predictions": predictions})


if __name__ == "__main__":
    handcrafted()
    randomized_parity()
    print(f"fixtures written under {FIXTURES}")
