"""Code Change Trees: structural diffs of Java methods.

Thin re-export of the compiled module; see the functions' docstrings.
"""

from ._cctree import (
    EmbeddingModel,
    __version__,
    change_trees,
    demo,
    evaluate,
    flatten_method,
    method_corpus,
    methods,
    metrics,
    normalize,
    parse_source,
    planted_dataset,
    represent,
    root_path_values,
    single_edit_dataset,
    train_embedding,
    two_cluster_corpus,
)

__all__ = [
    "EmbeddingModel",
    "__version__",
    "change_trees",
    "demo",
    "evaluate",
    "flatten_method",
    "method_corpus",
    "methods",
    "metrics",
    "normalize",
    "parse_source",
    "planted_dataset",
    "represent",
    "root_path_values",
    "single_edit_dataset",
    "train_embedding",
    "two_cluster_corpus",
]
