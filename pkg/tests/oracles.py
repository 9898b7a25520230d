"""Independent brute-force oracles used by module and acceptance tests.

These stay deliberately naive: the BM25 oracle recomputes document
frequencies from scratch for every term, and the rate-limit oracle scans
complete windows over the raw grant log. Neither shares code with the
implementations they check.
"""

from __future__ import annotations

import math
import re

_WORDS = re.compile(r"\w+")


def _words(text: str) -> list[str]:
    return _WORDS.findall(text.lower())


def bm25_oracle(corpus, query: str, k1: float = 1.2, b: float = 0.75) -> list[tuple[str, float]]:
    """Rank reviews against the query straight from the BM25 definition.

    Document text is title + positive + negative. For each query term the
    document frequency is recounted by scanning every document. Ties are
    broken by corpus position (the corpus default order).
    """
    reviews = list(corpus.reviews)
    doc_tokens = []
    for review in reviews:
        text = "\n".join(p for p in (review.title, review.positive_text, review.negative_text) if p)
        doc_tokens.append(_words(text))
    n = len(reviews)
    if n == 0:
        return []
    avgdl = sum(len(d) for d in doc_tokens) / n

    scored = []
    for position, tokens in enumerate(doc_tokens):
        dl = len(tokens)
        score = 0.0
        if avgdl > 0:
            for term in _words(query):
                tf = tokens.count(term)
                if tf == 0:
                    continue
                df = sum(1 for other in doc_tokens if term in other)
                idf = math.log((n - df + 0.5) / (df + 0.5) + 1)
                score += idf * (tf * (k1 + 1)) / (tf + k1 * (1 - b + b * dl / avgdl))
        scored.append((position, score))

    scored.sort(key=lambda item: (-item[1], item[0]))
    return [(reviews[position].review_id, score) for position, score in scored]


def window_scan_violations(
    grants: list[tuple[float, int]],
    *,
    rpm: int,
    rpd: int,
    tpm: int,
) -> list[str]:
    """Check every sliding window against the policy bounds.

    A window (s, s+W] over the grant log attains its maximum count at some
    window ending exactly at a grant time, so scanning windows anchored at
    each grant is exhaustive. Returns human-readable violation strings
    (empty list = safe).
    """
    violations = []
    times = [t for t, _ in grants]
    for j, (t_end, _) in enumerate(grants):
        minute_count = 0
        minute_tokens = 0
        day_count = 0
        for k in range(j, -1, -1):
            t_k, tokens_k = grants[k]
            if t_k <= t_end - 86400:
                break
            day_count += 1
            if t_k > t_end - 60:
                minute_count += 1
                minute_tokens += tokens_k
        if minute_count > rpm:
            violations.append(f"window ending {t_end}: {minute_count} grants > {rpm} rpm")
        if minute_tokens > tpm:
            violations.append(f"window ending {t_end}: {minute_tokens} tokens > {tpm} tpm")
        if day_count > rpd:
            violations.append(f"window ending {t_end}: {day_count} grants > {rpd} rpd")
    assert times == sorted(times), "grant log must be time-ordered"
    return violations
