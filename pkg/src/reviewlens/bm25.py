"""Lexical relevance ranking over review text (BM25, k1=1.2, b=0.75).

A review's document text is its title, positive, and negative fields
concatenated; tokenization is lowercase word extraction. Ties (including
the all-zero case of an out-of-vocabulary query) fall back to the corpus
default order: most recent first, then review_id.
"""

from __future__ import annotations

import math
import re
from collections import Counter

from .errors import EmptyQuery
from .models import Review, ReviewCorpus

__all__ = ["tokenize", "review_document_text", "rank_reviews_bm25"]

_WORD_RE = re.compile(r"\w+")


def tokenize(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def review_document_text(review: Review) -> str:
    return "\n".join(part for part in (review.title, review.positive_text, review.negative_text) if part)


def rank_reviews_bm25(
    corpus: ReviewCorpus,
    query: str,
    k1: float = 1.2,
    b: float = 0.75,
) -> list[tuple[str, float]]:
    """Full ranking of the corpus against the query, best first.

    idf(t) = ln((N - df + 0.5) / (df + 0.5) + 1), which keeps scores
    non-negative so unmatched documents sit at exactly 0.
    """
    query_tokens = tokenize(query)
    if not query_tokens:
        raise EmptyQuery(f"query {query!r} has no searchable terms")

    docs = [tokenize(review_document_text(r)) for r in corpus.reviews]
    n_docs = len(docs)
    if n_docs == 0:
        return []
    doc_lens = [len(d) for d in docs]
    avgdl = sum(doc_lens) / n_docs
    term_freqs = [Counter(d) for d in docs]
    doc_freq: Counter = Counter()
    for tf in term_freqs:
        doc_freq.update(tf.keys())

    scores: list[float] = []
    for i, tf in enumerate(term_freqs):
        score = 0.0
        if avgdl > 0:
            norm = k1 * (1 - b + b * doc_lens[i] / avgdl)
            for term in query_tokens:
                freq = tf.get(term)
                if not freq:
                    continue
                df = doc_freq[term]
                idf = math.log((n_docs - df + 0.5) / (df + 0.5) + 1)
                score += idf * (freq * (k1 + 1)) / (freq + norm)
        scores.append(score)

    # Stable sort on descending score keeps corpus default order for ties.
    order = sorted(range(n_docs), key=lambda i: -scores[i])
    return [(corpus.reviews[i].review_id, scores[i]) for i in order]
