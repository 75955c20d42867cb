#!/usr/bin/env python3
"""Build the bundled sample corpus and the parity fixture from the `udhr` npm package.

Usage: extract_udhr.py <path-to-udhr-package/declaration> <repo-data-dir>

Each output line is one paragraph of a declaration text (one document per line).
"""
import html
import pathlib
import re
import sys

SAMPLE_LANGS = {
    "tur": "Turkish",
    "fin": "Finnish",
    "ind": "Indonesian",
    "swh": "Swahili",
    "eus": "Basque",
    "zul": "Zulu",
    "est": "Estonian",
}

PARITY_LANGS = [
    "eng", "tur", "fin", "ind", "swh", "eus", "zul", "est", "deu_1996", "fra",
    "rus", "ell_monotonic", "hin", "tam", "tel", "arb", "heb", "jpn", "kor",
    "cmn_hans", "tha", "amh", "vie", "pol",
]
PARITY_LINES = 500

PARA = re.compile(r"<p>(.*?)</p>", re.S)
TAG = re.compile(r"<[^>]+>")


def paragraphs(path):
    text = path.read_text(encoding="utf-8")
    out = []
    for m in PARA.finditer(text):
        p = html.unescape(TAG.sub("", m.group(1)))
        p = " ".join(p.split())
        if p:
            out.append(p)
    return out


def main():
    src = pathlib.Path(sys.argv[1])
    data = pathlib.Path(sys.argv[2])
    corpus = data / "corpus"
    corpus.mkdir(parents=True, exist_ok=True)
    for code in SAMPLE_LANGS:
        paras = paragraphs(src / f"{code}.html")
        (corpus / f"{code}.txt").write_text("\n".join(paras) + "\n", encoding="utf-8")

    pools = [paragraphs(src / f"{code}.html") for code in PARITY_LANGS]
    lines = []
    i = 0
    while len(lines) < PARITY_LINES:
        pool = pools[i % len(pools)]
        idx = i // len(pools)
        if idx < len(pool):
            lines.append(pool[idx])
        i += 1
    fixtures = data / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)
    (fixtures / "parity_500.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
