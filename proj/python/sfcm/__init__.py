"""Fuzzy, spatial fuzzy and hard c-means segmentation of grayscale images."""

from ._core import (
    ContractViolation,
    DegenerateClusterError,
    Error,
    IoError,
    ParameterError,
    ParseError,
    UnsupportedFormatError,
    band_phantom,
    decode_grayscale,
    disc_phantom,
    distance_matrix,
    isolated_pixel_count,
    load_grayscale,
    misclassification_rate,
    modulate,
    normalize,
    objective,
    segment,
    spatial_function,
    update_centroids,
    update_membership,
    window_indices,
)

__all__ = [
    "ContractViolation",
    "DegenerateClusterError",
    "Error",
    "IoError",
    "ParameterError",
    "ParseError",
    "UnsupportedFormatError",
    "band_phantom",
    "decode_grayscale",
    "disc_phantom",
    "distance_matrix",
    "isolated_pixel_count",
    "load_grayscale",
    "misclassification_rate",
    "modulate",
    "normalize",
    "objective",
    "segment",
    "spatial_function",
    "update_centroids",
    "update_membership",
    "window_indices",
]
