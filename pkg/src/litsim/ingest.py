"""Metadata records, the astronomy filter, and corpus assembly.

Metadata is accepted in two formats: newline-delimited JSON and a minimal
OAI-PMH-style XML subset.  Records pass the astronomy filter when the id
carries the pre-2007 astro prefix or any subject mentions astro; surviving
records are paired with extracted text and processed into documents, with
per-stage funnel counts kept for auditing.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Iterator

from litsim.errors import (
    InvariantViolationError,
    MetadataParseError,
    MetadataRejectedError,
)
from litsim.nlp import Lexicon, StopList, TokenBag, bag_from_tokens, remove_stopwords, tokenize

ASTRO_ID_PREFIX = "astro-ph"
MIN_YEAR = 1991

# Funnel stages in pipeline order; counts must never increase along it.
FUNNEL_STAGES = ("submitted", "main_tex_found", "front_matter_ok", "lemmatized")


@dataclass(frozen=True)
class PaperMeta:
    """Identity and bibliographic metadata of one paper."""

    id: str
    title: str = ""
    authors: tuple[str, ...] = ()
    year: int = MIN_YEAR
    subjects: tuple[str, ...] = ()
    authors_missing: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "authors": list(self.authors),
            "year": self.year,
            "subjects": list(self.subjects),
            "authors_missing": self.authors_missing,
        }

    @classmethod
    def from_dict(cls, record: dict) -> "PaperMeta":
        return cls(
            id=record["id"],
            title=record.get("title", ""),
            authors=tuple(record.get("authors", [])),
            year=int(record.get("year", MIN_YEAR)),
            subjects=tuple(record.get("subjects", [])),
            authors_missing=bool(record.get("authors_missing", not record.get("authors"))),
        )


@dataclass
class Document:
    """A paper with its processed token bag.

    raw_word_count is the token count after stop-word removal and before the
    dictionary gate (the "words without stop words" quantity).
    """

    meta: PaperMeta
    bag: TokenBag
    raw_word_count: int


@dataclass
class CorpusStore:
    """Ordered processed documents plus per-stage pipeline counts."""

    documents: list[Document] = field(default_factory=list)
    provenance: dict[str, int] = field(default_factory=dict)

    def validate(self) -> None:
        counts = [self.provenance[s] for s in FUNNEL_STAGES if s in self.provenance]
        for earlier, later in zip(counts, counts[1:]):
            if later > earlier:
                raise InvariantViolationError(
                    f"funnel counts increased: {self.provenance}"
                )


def _build_meta(
    id_value: str | None,
    title: str,
    authors: list[str],
    year: int | None,
    subjects: list[str],
) -> PaperMeta:
    if not id_value:
        raise MetadataRejectedError("record has no id")
    if year is None:
        raise MetadataRejectedError(f"record {id_value!r} has no year")
    if not MIN_YEAR <= year <= date.today().year:
        raise MetadataRejectedError(f"record {id_value!r} has implausible year {year}")
    return PaperMeta(
        id=id_value,
        title=title,
        authors=tuple(authors),
        year=year,
        subjects=tuple(subjects),
        authors_missing=not authors,
    )


def _parse_json_record(record: str) -> PaperMeta:
    try:
        payload = json.loads(record)
    except json.JSONDecodeError as exc:
        offset = len(record[: exc.pos].encode("utf-8"))
        raise MetadataParseError(f"invalid JSON: {exc.msg}", offset=offset) from exc
    if not isinstance(payload, dict):
        raise MetadataParseError("record is not a JSON object")
    year = payload.get("year")
    return _build_meta(
        id_value=payload.get("id"),
        title=payload.get("title", ""),
        authors=list(payload.get("authors", [])),
        year=int(year) if year is not None else None,
        subjects=list(payload.get("subjects", [])),
    )


def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1].rsplit(":", 1)[-1].lower()


def _parse_oai_record(record: str) -> PaperMeta:
    try:
        root = ET.fromstring(record)
    except ET.ParseError as exc:
        line, column = exc.position
        lines = record.splitlines(keepends=True)
        offset = sum(len(l.encode("utf-8")) for l in lines[: line - 1]) + column
        raise MetadataParseError(f"invalid XML: {exc.msg}", offset=offset) from exc

    id_value: str | None = None
    title = ""
    authors: list[str] = []
    year: int | None = None
    subjects: list[str] = []
    for node in root.iter():
        name = _local_name(node.tag)
        text = (node.text or "").strip()
        if not text:
            continue
        if name in ("identifier", "id") and id_value is None:
            # OAI identifiers look like oai:arXiv.org:astro-ph/0601001
            id_value = text.rsplit(":", 1)[-1] if text.startswith("oai:") else text
        elif name == "title" and not title:
            title = text
        elif name in ("creator", "author"):
            authors.append(text)
        elif name in ("date", "year") and year is None:
            digits = text[:4]
            if digits.isdigit():
                year = int(digits)
        elif name == "subject":
            subjects.append(text)
    return _build_meta(id_value, title, authors, year, subjects)


def parse_metadata(record: str, format: str = "json-lines") -> PaperMeta:
    """Parse one metadata record in the declared format.

    Raises MetadataParseError (with a byte offset) on malformed input and
    MetadataRejectedError when the id or year is missing.
    """
    if format == "json-lines":
        return _parse_json_record(record)
    if format == "oai-xml":
        return _parse_oai_record(record)
    raise ValueError(f"unknown metadata format {format!r}")


def iter_metadata_jsonl(text: str) -> Iterator[PaperMeta]:
    """Parse newline-delimited JSON records, skipping blank lines.

    Parse errors are re-raised with the offset rebased to the whole stream.
    """
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped:
            try:
                yield _parse_json_record(stripped)
            except MetadataParseError as exc:
                base = offset + len(line[: len(line) - len(line.lstrip())].encode("utf-8"))
                raise MetadataParseError(str(exc.args[0]).split(" (byte offset")[0],
                                         offset=base + exc.offset) from exc
        offset += len(line.encode("utf-8"))


def iter_metadata_oai(text: str) -> Iterator[PaperMeta]:
    """Parse all <record> elements from an OAI-PMH-style XML document."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position
        lines = text.splitlines(keepends=True)
        offset = sum(len(l.encode("utf-8")) for l in lines[: line - 1]) + column
        raise MetadataParseError(f"invalid XML: {exc.msg}", offset=offset) from exc
    records = [root] if _local_name(root.tag) == "record" else [
        node for node in root.iter() if _local_name(node.tag) == "record"
    ]
    for node in records:
        yield _parse_oai_record(ET.tostring(node, encoding="unicode"))


def is_astro(meta: PaperMeta) -> bool:
    """Astronomy filter: astro-ph id prefix, or astro in any subject."""
    if meta.id.startswith(ASTRO_ID_PREFIX):
        return True
    return any("astro" in subject.lower() for subject in meta.subjects)


def make_document(meta: PaperMeta, text: str, lex: Lexicon, stoplist: StopList) -> Document:
    """Run the NLP pipeline over extracted text and attach the result."""
    kept = remove_stopwords(tokenize(text), stoplist)
    return Document(meta=meta, bag=bag_from_tokens(kept, lex), raw_word_count=len(kept))


def build_corpus(
    pairs: Iterable[tuple[PaperMeta, str]],
    lex: Lexicon,
    stoplist: StopList,
    provenance: dict[str, int] | None = None,
) -> CorpusStore:
    """Process (meta, text) pairs into documents, dropping empty bags.

    The lemmatized funnel stage counts the survivors; earlier stages may be
    supplied by the caller from the extraction step.
    """
    documents = []
    submitted = 0
    for meta, text in pairs:
        submitted += 1
        doc = make_document(meta, text, lex, stoplist)
        if doc.bag:
            documents.append(doc)
    prov = dict(provenance or {})
    prov.setdefault("submitted", submitted)
    prov["lemmatized"] = len(documents)
    store = CorpusStore(documents=documents, provenance=prov)
    store.validate()
    return store


def document_to_record(doc: Document) -> dict:
    record = doc.meta.to_dict()
    record["counts"] = doc.bag.counts
    record["raw_word_count"] = doc.raw_word_count
    return record


def document_from_record(record: dict) -> Document:
    return Document(
        meta=PaperMeta.from_dict(record),
        bag=TokenBag({t: int(c) for t, c in record["counts"].items()}),
        raw_word_count=int(record["raw_word_count"]),
    )


def save_corpus_jsonl(documents: Iterable[Document], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in documents:
            fh.write(json.dumps(document_to_record(doc), ensure_ascii=False) + "\n")


def load_corpus_jsonl(path) -> list[Document]:
    documents = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                documents.append(document_from_record(json.loads(line)))
    return documents
