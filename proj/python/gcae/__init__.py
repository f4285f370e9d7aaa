"""Graph-convolutional autoencoders over anonymized method token sequences."""

from ._core import (
    GcaeError,
    anonymize,
    compare,
    extract_methods,
    flow_edges,
    generate_synthetic,
    inspect_cfg,
    make_manifest,
    normalize,
    numericalize,
    prepare,
    reconstruct,
    tokenize,
    train,
    vocabulary,
    vocabulary_checksum,
)

__all__ = [
    "GcaeError",
    "anonymize",
    "compare",
    "extract_methods",
    "flow_edges",
    "generate_synthetic",
    "inspect_cfg",
    "make_manifest",
    "normalize",
    "numericalize",
    "prepare",
    "reconstruct",
    "tokenize",
    "train",
    "vocabulary",
    "vocabulary_checksum",
]
