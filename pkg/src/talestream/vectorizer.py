"""Sparse TF-IDF fitting and cosine similarity over (document, term) spaces.

One Vectorizer instance backs one of the three scoring spaces (index
terms, movie terms, or text tokens). The weighting is fixed so that any
reimplementation reproduces identical numbers:

    idf(t)       = ln((1 + N_docs) / (1 + df(t))) + 1
    weight(t, d) = tf(t, d) * idf(t)

with raw term counts for tf and each document vector L2-normalized.
Documents with empty corpora keep all-zero vectors; N_docs counts them.
Similarity is the dot product of normalized vectors (cosine).
"""

from __future__ import annotations

import math
import re
from typing import Mapping

import numpy as np
from scipy import sparse

from .errors import NotFoundError

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumeric runs, drop tokens shorter than 2.

    No stemming and no stopword removal; high-frequency tokens are left to
    idf downweighting.
    """
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2]


class Vectorizer:
    """A fitted TF-IDF model; immutable, safe for concurrent queries."""

    def __init__(
        self,
        doc_ids: tuple[str, ...],
        terms: tuple[str, ...],
        idf: np.ndarray,
        matrix: sparse.csr_matrix,
    ):
        self.doc_ids = doc_ids
        self.row_of = {d: i for i, d in enumerate(doc_ids)}
        self.terms = terms
        self.col_of = {t: j for j, t in enumerate(terms)}
        self.idf = idf
        self.matrix = matrix

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def _row(self, doc_id: str) -> int:
        try:
            return self.row_of[doc_id]
        except KeyError:
            raise NotFoundError(f"unknown document id {doc_id!r}") from None

    def similarity(self, a: str, b: str) -> float:
        """Cosine similarity of two fitted documents, clipped to [0, 1]."""
        va = self.matrix.getrow(self._row(a))
        vb = self.matrix.getrow(self._row(b))
        score = float(va.multiply(vb).sum())
        return min(max(score, 0.0), 1.0)

    def doc_similarities(self, doc_id: str) -> np.ndarray:
        """Cosine similarity of one document against every document (dense)."""
        row = self.matrix.getrow(self._row(doc_id))
        scores = self.matrix.dot(row.T).toarray().ravel()
        return np.clip(scores, 0.0, 1.0)

    def rows_similarities(self, rows: list[int]) -> sparse.csr_matrix:
        """Similarities of all documents against a set of rows, as a sparse
        (n_docs x len(rows)) matrix. Bulk path for the scoring engine."""
        sub = self.matrix[rows]
        return self.matrix.dot(sub.T).tocsr()

    def query_similarity(self, query: Mapping[str, int]) -> np.ndarray:
        """Score an ad-hoc term multiset against every document.

        The query is weighted with the model idf, L2-normalized, and dotted
        against the stored vectors. Out-of-vocabulary terms are ignored; a
        query with no known terms scores zero everywhere.
        """
        cols = []
        weights = []
        for term, count in query.items():
            j = self.col_of.get(term)
            if j is None or count <= 0:
                continue
            cols.append(j)
            weights.append(count * self.idf[j])
        if not cols:
            return np.zeros(self.n_docs)
        vec = np.zeros(len(self.terms))
        for j, w in zip(cols, weights):
            vec[j] += w
        norm = math.sqrt(float(np.dot(vec, vec)))
        if norm == 0.0:
            return np.zeros(self.n_docs)
        vec /= norm
        scores = self.matrix.dot(vec)
        return np.clip(scores, 0.0, 1.0)


def fit(corpora: Mapping[str, Mapping[str, int]]) -> Vectorizer:
    """Fit a TF-IDF model over per-document term multisets.

    Document rows are ordered by ascending document id and vocabulary
    columns by ascending term id, so the fitted model is a canonical
    function of its input regardless of mapping iteration order.
    """
    if not corpora:
        raise ValueError("at least one document is required")
    doc_ids = tuple(sorted(corpora))
    term_set: set[str] = set()
    for counts in corpora.values():
        term_set.update(t for t, c in counts.items() if c > 0)
    terms = tuple(sorted(term_set))
    col_of = {t: j for j, t in enumerate(terms)}

    n_docs = len(doc_ids)
    df = np.zeros(len(terms), dtype=np.int64)
    for counts in corpora.values():
        for term, count in counts.items():
            if count > 0:
                df[col_of[term]] += 1
    idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0 if len(terms) else np.zeros(0)

    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for doc_id in doc_ids:
        counts = corpora[doc_id]
        cols = sorted(col_of[t] for t, c in counts.items() if c > 0)
        row = [counts[terms[j]] * idf[j] for j in cols]
        norm = math.sqrt(sum(w * w for w in row))
        if norm > 0.0:
            indices.extend(cols)
            data.extend(w / norm for w in row)
        indptr.append(len(indices))
    matrix = sparse.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int32), np.array(indptr, dtype=np.int64)),
        shape=(n_docs, len(terms)),
    )
    return Vectorizer(doc_ids, terms, idf, matrix)
