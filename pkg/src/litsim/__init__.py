"""Text-similarity search over LaTeX-sourced paper corpora.

The pipeline: LaTeX source trees are reduced to plain text, tokenized and
lemmatized into bags of dictionary words, vectorized into an L2-normalized
TF-IDF sparse matrix, and queried by cosine similarity.  Ranked results come
with per-term importance explanations and group-level similarity statistics.
"""

from litsim.errors import LitsimError

__version__ = "0.1.0"

__all__ = ["LitsimError", "__version__"]
