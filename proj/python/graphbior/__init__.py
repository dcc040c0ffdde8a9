from ._graphbior import (
    NumericalError,
    ValidationError,
    design_halfband,
    design_kernels,
    eigenvalues,
    random_bipartite,
    snr,
    transform,
    verify_kernels,
)

__all__ = [
    "NumericalError",
    "ValidationError",
    "design_halfband",
    "design_kernels",
    "eigenvalues",
    "random_bipartite",
    "snr",
    "transform",
    "verify_kernels",
]
