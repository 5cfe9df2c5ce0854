"""Command-line pipeline driver.

Subcommands compose the library end to end:

    extract      LaTeX source trees -> plain-text JSON lines
    ingest       metadata + extracted text -> processed corpus JSON lines
    build-index  corpus JSON lines -> binary index file
    query        ranked matches for a document id or free text (TSV)
    stats        yearly author/word statistics (CSV + KDE JSON)
    serve        HTTP query service

Progress and funnel counts go to standard error as JSON lines; data goes to
the requested output files (or standard output for query results).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from litsim.errors import LitsimError
from litsim.ingest import (
    build_corpus,
    is_astro,
    iter_metadata_jsonl,
    iter_metadata_oai,
    load_corpus_jsonl,
    save_corpus_jsonl,
)
from litsim.latex import TexSource, extract_outcome, find_document_dirs
from litsim.nlp import default_lexicon, default_stoplist
from litsim.vectorize import build_tfidf_index, build_vocabulary

DISCARDS_BEFORE_MAIN = ("no_main_file", "ambiguous_main_file")


def _emit(stage: str, **fields) -> None:
    print(json.dumps({"stage": stage, **fields}), file=sys.stderr)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def cmd_extract(args) -> int:
    src_root = Path(args.src)
    if not src_root.is_dir():
        return _fail(f"source directory not found: {src_root}")
    documents = find_document_dirs(src_root)
    _emit("submitted", count=len(documents))
    outcomes = []
    for doc_id, directory in documents:
        outcomes.append(extract_outcome(doc_id, TexSource.from_dir(directory)))
    main_found = sum(
        1 for o in outcomes if o.discard_reason not in DISCARDS_BEFORE_MAIN
    )
    survivors = sum(1 for o in outcomes if o.discard_reason is None)
    _emit("main_tex_found", count=main_found)
    _emit("front_matter_ok", count=survivors)
    with open(args.out, "w", encoding="utf-8") as fh:
        for outcome in outcomes:
            fh.write(json.dumps(outcome.to_dict(), ensure_ascii=False) + "\n")
    return 0


def _read_metadata(path: Path):
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".xml":
        return list(iter_metadata_oai(text))
    return list(iter_metadata_jsonl(text))


def cmd_ingest(args) -> int:
    meta_path = Path(args.meta)
    texts_path = Path(args.texts)
    for path in (meta_path, texts_path):
        if not path.is_file():
            return _fail(f"input file not found: {path}")

    metas = _read_metadata(meta_path)
    _emit("metadata_records", count=len(metas))
    astro = [m for m in metas if is_astro(m)]
    _emit("astro_selected", count=len(astro))

    texts: dict[str, str] = {}
    n_records = 0
    n_main = 0
    with open(texts_path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            n_records += 1
            if record.get("discard_reason") not in DISCARDS_BEFORE_MAIN:
                n_main += 1
            if record.get("text"):
                texts[record["id"]] = record["text"]

    pairs = [(m, texts[m.id]) for m in astro if m.id in texts]
    store = build_corpus(
        pairs,
        default_lexicon(),
        default_stoplist(),
        provenance={
            "submitted": n_records,
            "main_tex_found": n_main,
            "front_matter_ok": len(texts),
        },
    )
    for stage, count in store.provenance.items():
        _emit(stage, count=count)
    save_corpus_jsonl(store.documents, args.out)
    return 0


def cmd_build_index(args) -> int:
    corpus_path = Path(args.corpus)
    if not corpus_path.is_file():
        return _fail(f"corpus file not found: {corpus_path}")
    documents = load_corpus_jsonl(corpus_path)
    bags = [d.bag for d in documents]
    vocab = build_vocabulary(bags)
    index = build_tfidf_index(
        bags,
        vocab,
        metas=[d.meta for d in documents],
        word_counts=[d.raw_word_count for d in documents],
        idf_plus_one=args.idf_plus_one,
    )
    from litsim.index_io import save_index

    save_index(index, args.out)
    _emit("build-index", docs=index.n_docs, terms=index.n_terms, nnz=index.nnz)
    return 0


def _load_engine(index_path: str):
    from litsim.engine import QueryEngine
    from litsim.index_io import load_index

    path = Path(index_path)
    if not path.is_file():
        raise FileNotFoundError(str(path))
    return QueryEngine(load_index(path))


def cmd_query(args) -> int:
    try:
        engine = _load_engine(args.index)
    except FileNotFoundError as exc:
        return _fail(f"index file not found: {exc}")
    exclude = args.exclude or []
    if args.doc_id is not None:
        result, unknown = engine.query_by_id(args.doc_id, k=args.k, exclude=exclude)
    else:
        result, unknown = engine.query_by_text(args.text, k=args.k, exclude=exclude)
    if unknown:
        _emit("unknown_excludes", ids=unknown)
    for ordinal, score in result.entries:
        print(f"{engine.index.docs[ordinal].id}\t{score:.6f}")
    return 0


def cmd_stats(args) -> int:
    from litsim.stats import author_stats_by_year, word_stats_by_year

    corpus_path = Path(args.corpus)
    if not corpus_path.is_file():
        return _fail(f"corpus file not found: {corpus_path}")
    documents = load_corpus_jsonl(corpus_path)
    metas = [d.meta for d in documents]
    by_author = {s.year: s for s in author_stats_by_year(metas)}
    by_words = {s.year: s for s in word_stats_by_year(documents)}

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "stats.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["year", "median_authors", "median_words", "total_words", "extreme_fraction"]
        )
        for year in sorted(set(by_author) | set(by_words)):
            a = by_author.get(year)
            w = by_words.get(year)
            writer.writerow(
                [
                    year,
                    a.median if a else "",
                    w.median_words if w else "",
                    w.total_words if w else "",
                    a.extreme_fraction if a else "",
                ]
            )
    kde_payload = {
        "years": [
            {"year": s.year, "n_papers": s.n_papers, "kde": [[x, y] for x, y in s.kde]}
            for s in by_author.values()
        ]
    }
    with open(out_dir / "kde.json", "w", encoding="utf-8") as fh:
        json.dump(kde_payload, fh)
    _emit("stats", years=len(set(by_author) | set(by_words)))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from litsim.service import create_app

    try:
        engine = _load_engine(args.index)
    except FileNotFoundError as exc:
        return _fail(f"index file not found: {exc}")
    _emit("serve", docs=engine.index.n_docs, host=args.host, port=args.port)
    uvicorn.run(create_app(engine), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="litsim", description="text similarity over a paper corpus"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="LaTeX source trees to plain text")
    p.add_argument("--src", required=True, help="corpus directory of source trees")
    p.add_argument("--out", required=True, help="output JSON-lines file")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("ingest", help="join metadata with extracted text")
    p.add_argument("--meta", required=True, help="metadata file (.jsonl or .xml)")
    p.add_argument("--texts", required=True, help="extract output JSON lines")
    p.add_argument("--out", required=True, help="output corpus JSON lines")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build-index", help="build the TF-IDF index")
    p.add_argument("--corpus", required=True, help="corpus JSON lines")
    p.add_argument("--out", required=True, help="output index file")
    p.add_argument(
        "--idf-plus-one",
        action="store_true",
        help="add one to idf (library-style variant)",
    )
    p.set_defaults(func=cmd_build_index)

    p = sub.add_parser("query", help="query an index")
    p.add_argument("--index", required=True, help="index file")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--doc-id", help="query by stored document id")
    source.add_argument("--text", help="query by free text")
    p.add_argument("--k", type=int, default=30, help="number of results")
    p.add_argument("--exclude", action="append", help="document id to exclude")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("stats", help="yearly author/word statistics")
    p.add_argument("--corpus", required=True, help="corpus JSON lines")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("serve", help="run the HTTP query service")
    p.add_argument("--index", required=True, help="index file")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LitsimError as exc:
        return _fail(str(exc))
    except FileNotFoundError as exc:
        return _fail(f"file not found: {exc.filename or exc}")


if __name__ == "__main__":
    sys.exit(main())
