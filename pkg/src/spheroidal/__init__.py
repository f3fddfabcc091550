"""Prolate spheroidal harmonics: joint spectrum, quantum monodromy and the classical system."""

from .lattice import (
    JointSpectrum,
    MonodromyResult,
    UnitCell,
    build_joint_spectrum,
    count_negative,
    filter_symmetry,
    junction_compare,
    monodromy,
    transport_cell,
)
from .spectral import (
    EigenResult,
    Parity,
    SpectralConfig,
    SpheroidalParams,
    eval_ps,
    eval_Z,
    spheroidal_eigenvalues,
    symmetry_class,
)

__all__ = [
    "EigenResult",
    "JointSpectrum",
    "MonodromyResult",
    "Parity",
    "SpectralConfig",
    "SpheroidalParams",
    "UnitCell",
    "build_joint_spectrum",
    "count_negative",
    "eval_Z",
    "eval_ps",
    "filter_symmetry",
    "junction_compare",
    "monodromy",
    "spheroidal_eigenvalues",
    "symmetry_class",
    "transport_cell",
]
