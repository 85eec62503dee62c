"""Sprachbund discovery: similarity, clustering and partitioning of multilingual corpora."""

from ._core import (
    DataError,
    Dendrogram,
    Error,
    ServiceError,
    SimilarityMatrix,
    UsageError,
    agglomerate,
    build_matrix,
    centroid,
    cosine,
    cut,
    embedding_similarity,
    family_purity,
    is_valid_code,
    languages,
    lexical_correlation,
    lexical_similarity,
    load_matrix,
    pearson,
    published_sprachbunds,
    random_baseline,
    sample,
    select_pivot,
    silhouette,
    syntax_agreement,
    tsne,
)

__version__ = "0.3.0"
