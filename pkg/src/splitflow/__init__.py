"""Maslov index, spectral flow and splitting formulas in finite dimensions.

Submodules: :mod:`symplectic` (spaces, Lagrangians, unitary charts),
:mod:`souriau` (Souriau map), :mod:`maslov` (indices and crossing forms),
:mod:`pairs` (doubled spaces), :mod:`specflow` (spectral flow) and
:mod:`bvp` (model boundary value problems on a split circle).
"""

from .maslov import (IndexResult, LagrangianPath, SymmetricForm, UnitaryPath,
                     crossing_form_graph, crossing_form_unitary, hormander_index,
                     index_unitary_path, local_index_at_regular_crossing,
                     maslov_index)
from .pairs import box_plus, diagonal, double, maslov_pair
from .souriau import souriau_map, souriau_matrix
from .specflow import (OperatorPath, crossing_form_sf, riesz, spectral_flow)
from .symplectic import (Lagrangian, SymplecticSpace, intersection_dim,
                         is_lagrangian, standard_space)

__version__ = "0.1.0"

__all__ = [
    "IndexResult", "LagrangianPath", "SymmetricForm", "UnitaryPath",
    "crossing_form_graph", "crossing_form_unitary", "hormander_index",
    "index_unitary_path", "local_index_at_regular_crossing", "maslov_index",
    "box_plus", "diagonal", "double", "maslov_pair", "souriau_map",
    "souriau_matrix", "OperatorPath", "crossing_form_sf", "riesz",
    "spectral_flow", "Lagrangian", "SymplecticSpace", "intersection_dim",
    "is_lagrangian", "standard_space",
]
