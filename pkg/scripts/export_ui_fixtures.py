#!/usr/bin/env python3
"""Snapshot service responses into JSON fixtures for the frontend tests.

Builds the index from the committed test corpus, runs the real HTTP app
in-process, and records the exact payloads the UI test suite replays through
a stubbed fetch.  Rerun after changing the service response shapes:

    python3 scripts/export_ui_fixtures.py
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from litsim.engine import QueryEngine
from litsim.ingest import load_corpus_jsonl
from litsim.service import create_app
from litsim.vectorize import build_tfidf_index, build_vocabulary

REPO = Path(__file__).resolve().parent.parent
CORPUS = REPO / "tests" / "fixtures" / "goldens" / "corpus.jsonl"
OUT = REPO / "frontend" / "tests" / "fixtures"

SEED = "astro-ph/0601001"
SECOND = "astro-ph/0601002"
GROUPS = {
    "shells": ["astro-ph/0601002", "astro-ph/0601007"],
    "mixed": ["astro-ph/0601008", "not-a-doc"],
}


def main() -> int:
    documents = load_corpus_jsonl(CORPUS)
    bags = [d.bag for d in documents]
    index = build_tfidf_index(
        bags,
        build_vocabulary(bags),
        metas=[d.meta for d in documents],
        word_counts=[d.raw_word_count for d in documents],
    )
    client = TestClient(create_app(QueryEngine(index)))

    captures = {
        "similar_by_id.json": client.post(
            "/api/similar", json={"doc_id": SEED, "k": 5, "important_words": True}
        ),
        "similar_requery.json": client.post(
            "/api/similar", json={"doc_id": SECOND, "k": 5, "important_words": True}
        ),
        "similar_gibberish_422.json": client.post(
            "/api/similar", json={"text": "xyzzy plugh qwerty"}
        ),
        "similar_unknown_404.json": client.post(
            "/api/similar", json={"doc_id": "no/such-doc"}
        ),
        "group_similarity.json": client.post(
            "/api/group-similarity", json={"doc_id": SEED, "groups": GROUPS}
        ),
        "doc_card.json": client.get(f"/api/docs/{SEED}"),
        "health.json": client.get("/api/health"),
    }

    OUT.mkdir(parents=True, exist_ok=True)
    for name, response in captures.items():
        payload = {"status": response.status_code, "body": response.json()}
        (OUT / name).write_text(json.dumps(payload, indent=2) + "\n")
        print(f"wrote {name} (HTTP {response.status_code})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
