"""Finitely additive measures on projection lattices of block matrix algebras."""

from .algebra import (
    AlgebraShape,
    Element,
    Projection,
    SpectralDecomposition,
    central_projections,
    dyadic_projections,
    is_projection,
    matrix_functionals,
    random_element,
    random_projection,
    random_selfadjoint,
    relation,
    spectral_decompose,
)
from .counterexamples import (
    BlochVector,
    NonlinearityCertificate,
    bloch_projection,
    cubic_measure,
    nonlinearity_residual,
    qubit_frame_measure,
)
from .extension import (
    ExtensionResult,
    OperatorRep,
    SpanningFamily,
    Status,
    extend_vector_measure,
    functional_norm_bound,
    linearity_audit,
    omega,
    omega_dyadic,
    reconstruct,
    spanning_projections,
)
from .measures import (
    AdditivityReport,
    Frame2,
    ScalarMeasure,
    Table,
    TraceForm,
    VectorMeasure,
    additivity_check,
    centre_normalize,
    positivity_shift,
    variation_and_alpha,
)

__version__ = "0.1.0"
