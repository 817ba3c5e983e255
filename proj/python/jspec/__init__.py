"""Python bindings for the jspec Jacobi operator toolkit."""

from ._core import (
    Error,
    Model,
    __version__,
    coefficients_from_measure,
    experiment_names,
    green_diag,
    m_minus,
    m_plus,
    run,
    scattering,
    torus_point,
)

__all__ = [
    "Error",
    "Model",
    "__version__",
    "coefficients_from_measure",
    "experiment_names",
    "green_diag",
    "m_minus",
    "m_plus",
    "run",
    "scattering",
    "torus_point",
]
