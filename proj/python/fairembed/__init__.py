"""Train, hard-debias, and audit static word embeddings.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from ._core import (
    Embedding,
    FairembedError,
    GenderDirection,
    IoError,
    __version__,
    cli,
    cluster_accuracy,
    direct_bias,
    gender_direction,
    hard_debias,
    indirect_bias,
    neighbors,
    pca_project,
    prep,
    proximity_bias,
    sembias,
    tokenize,
    train,
    weat,
    weat_sets,
)

__all__ = [
    "Embedding",
    "FairembedError",
    "GenderDirection",
    "IoError",
    "__version__",
    "cli",
    "cluster_accuracy",
    "direct_bias",
    "gender_direction",
    "hard_debias",
    "indirect_bias",
    "neighbors",
    "pca_project",
    "prep",
    "proximity_bias",
    "sembias",
    "tokenize",
    "train",
    "weat",
    "weat_sets",
]
