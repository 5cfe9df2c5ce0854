#!/usr/bin/env python3
"""Generate a small synthetic demo corpus and build everything from it.

Creates LaTeX source trees plus a metadata file under the target directory,
then runs the full pipeline (extract -> ingest -> build-index -> stats) so a
queryable index exists without any external data:

    python3 scripts/make_demo_corpus.py --out demo/
    litsim query --index demo/corpus.idx --text "supernova shells expanding into cold gas"
    litsim serve --index demo/corpus.idx
"""

import argparse
import json
import random
import sys
from pathlib import Path

from litsim.cli import main as litsim_main

TOPICS = {
    "remnant": ["supernova", "remnant", "shell", "shock", "wave", "gas",
                "expand", "cool", "dense", "emission", "bright", "young"],
    "cluster": ["cluster", "halo", "mass", "temperature", "gas", "hot",
                "merger", "form", "massive", "gravity", "collapse", "survey"],
    "disk": ["disk", "accrete", "binary", "orbit", "luminosity", "hot",
             "photon", "scatter", "emit", "spectrum", "radiate", "bright"],
    "galaxy": ["galaxy", "star", "form", "dust", "gas", "spiral", "arm",
               "bulge", "bar", "stellar", "evolve", "faint"],
    "pulsar": ["pulsar", "magnetic", "field", "rotation", "electron",
               "radiation", "burst", "detect", "measure", "wind", "nebula"],
}

PREAMBLE = """\\documentclass{{article}}
% synthetic demo paper
\\begin{{document}}
\\title{{{title}}}
\\begin{{abstract}}
{abstract}
\\end{{abstract}}
\\section{{Introduction}}
{intro}
\\begin{{equation}}
L = 4 \\pi R^2 \\sigma T^4
\\end{{equation}}
\\section{{Results}}
{body}
\\begin{{figure}}
\\includegraphics{{f1.eps}}
\\caption{{simulated view}}
\\end{{figure}}
{conclusion}
\\end{{document}}
"""


def sentences(rng: random.Random, vocab: list[str], n: int) -> str:
    out = []
    for _ in range(n):
        words = [rng.choice(vocab) for _ in range(rng.randint(8, 14))]
        out.append(" ".join(words).capitalize() + ".")
    return " ".join(out)


def write_sources(root: Path, rng: random.Random, n_papers: int) -> list[dict]:
    metas = []
    topics = list(TOPICS)
    for i in range(n_papers):
        topic = topics[i % len(topics)]
        vocab = TOPICS[topic]
        doc_id = f"demo/{2000 + i % 8}{i:04d}"
        doc_dir = root / "sources" / doc_id
        doc_dir.mkdir(parents=True, exist_ok=True)
        (doc_dir / "main.tex").write_text(
            PREAMBLE.format(
                title=f"A study of {topic} systems {i}",
                abstract=sentences(rng, vocab, 2),
                intro=sentences(rng, vocab, 4),
                body=sentences(rng, vocab, 6),
                conclusion=sentences(rng, vocab, 3),
            ),
            encoding="utf-8",
        )
        metas.append(
            {
                "id": doc_id,
                "title": f"A study of {topic} systems {i}",
                "authors": [f"Author {j}" for j in range(rng.randint(1, 6))],
                "year": 2000 + i % 8,
                "subjects": ["Astrophysics (astro-ph)"],
            }
        )
    return metas


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--papers", type=int, default=40)
    parser.add_argument("--seed", type=int, default=20060101)
    args = parser.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    metas = write_sources(out, rng, args.papers)
    meta_path = out / "meta.jsonl"
    with open(meta_path, "w", encoding="utf-8") as fh:
        for meta in metas:
            fh.write(json.dumps(meta) + "\n")

    steps = [
        ["extract", "--src", str(out / "sources"), "--out", str(out / "texts.jsonl")],
        ["ingest", "--meta", str(meta_path), "--texts", str(out / "texts.jsonl"),
         "--out", str(out / "corpus.jsonl")],
        ["build-index", "--corpus", str(out / "corpus.jsonl"),
         "--out", str(out / "corpus.idx")],
        ["stats", "--corpus", str(out / "corpus.jsonl"), "--out", str(out / "stats")],
    ]
    for step in steps:
        code = litsim_main(step)
        if code != 0:
            return code
    print(f"demo corpus ready: {out / 'corpus.idx'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
