"""Shared fixtures: a tiny deterministic lexicon plus the committed corpus."""

from pathlib import Path

import pytest

from litsim.ingest import load_corpus_jsonl
from litsim.nlp import Lexicon, StopList
from litsim.vectorize import build_tfidf_index, build_vocabulary

FIXTURES = Path(__file__).parent / "fixtures"

# Small hand-written lexicon covering every detachment rule and exception
# path, so lemmatizer tests do not depend on the shipped dictionary.
TINY_LEXICON = """\
[noun]
star
galaxy
model
shell
gas
supernova
remnant
spectrum
axis
ax
datum
glass
box
buzz
church
dish
woman
saw
[noun.exc]
spectra\tspectrum
data\tdatum
axes\taxis
[verb]
observe
expand
cool
use
apply
watch
model
see
go
find
[verb.exc]
saw\tsee
went\tgo
found\tfind
[adj]
cold
nice
good
bad
[adj.exc]
best\tgood
better\tgood
worse\tbad
worst\tbad
[adv]
well
fast
[adv.exc]
best\twell
"""

TINY_STOPWORDS = "the a an of and in is are am these those to we its it on with"


@pytest.fixture(scope="session")
def tiny_lexicon() -> Lexicon:
    return Lexicon.from_text(TINY_LEXICON)


@pytest.fixture(scope="session")
def tiny_stoplist() -> StopList:
    return StopList.from_text(TINY_STOPWORDS)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_documents():
    return load_corpus_jsonl(FIXTURES / "goldens" / "corpus.jsonl")


@pytest.fixture(scope="session")
def fixture_index(fixture_documents):
    bags = [d.bag for d in fixture_documents]
    return build_tfidf_index(
        bags,
        build_vocabulary(bags),
        metas=[d.meta for d in fixture_documents],
        word_counts=[d.raw_word_count for d in fixture_documents],
    )
