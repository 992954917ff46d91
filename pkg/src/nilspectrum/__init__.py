"""Exact Reidemeister numbers and spectra of free nilpotent groups."""

from .freelie import hall_basis, induced_layer_matrix, normalize_bracket, witt_dimension
from .intmat import INFINITE, Matrix, is_infinite, lattice_index
from .magnus import layer_matrix_via_magnus
from .nilgroup import count_twisted_classes
from .reidemeister import (
    AutoSpec,
    ReidemeisterResult,
    SpectrumReport,
    abelian_witness,
    predicted_member,
    reidemeister_number,
    spectrum_search,
    verify_r_infinity,
    witness_D,
    witness_F,
)

__version__ = "0.1.0"

__all__ = [
    "INFINITE",
    "AutoSpec",
    "Matrix",
    "ReidemeisterResult",
    "SpectrumReport",
    "abelian_witness",
    "count_twisted_classes",
    "hall_basis",
    "induced_layer_matrix",
    "is_infinite",
    "lattice_index",
    "layer_matrix_via_magnus",
    "normalize_bracket",
    "predicted_member",
    "reidemeister_number",
    "spectrum_search",
    "verify_r_infinity",
    "witness_D",
    "witness_F",
    "witt_dimension",
]
