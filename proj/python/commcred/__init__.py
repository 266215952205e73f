"""Community detection and link-credibility profiling for follower networks.

The heavy lifting lives in the C++ extension ``commcred._core``; this
package re-exports its public surface.
"""

from ._core import (
    CredibilityModels,
    InvariantError,
    UsageError,
    __version__,
    bucket,
    categorize_urls,
    detect_communities,
    louvain,
    measure_names,
    modularity,
    nmi,
    rank_percentiles,
    run,
    tfidf_idf,
    train_credibility_models,
)

__all__ = [
    "CredibilityModels",
    "InvariantError",
    "UsageError",
    "__version__",
    "bucket",
    "categorize_urls",
    "detect_communities",
    "louvain",
    "measure_names",
    "modularity",
    "nmi",
    "rank_percentiles",
    "run",
    "tfidf_idf",
    "train_credibility_models",
]
