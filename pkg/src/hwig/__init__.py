"""Heralded photon subtraction/addition on a discretized multimode phase space."""

from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    HeraldImpossibleError,
    InvalidPairError,
    OracleError,
    ReductionError,
)
from .heralding import (
    DetectorKernel,
    HeraldedState,
    add_photon,
    addition_generating_function,
    normalize_add,
    normalize_subtract,
    projector_moments,
    subtract_photon,
    subtraction_generating_function,
    transformed_detector_mode,
)
from .modes import (
    FieldVector,
    Kernel,
    ModeBasis,
    adjoint,
    diamond_kk,
    diamond_kv,
    diamond_vv,
    gram_schmidt,
    identity,
    outer,
    trace,
)
from .reduction import (
    Axis,
    ReducedWignerGrid,
    marginalize,
    mode_overlap,
    negativity_metrics,
    reduce_heralded,
    sample_grid,
)
from .states import (
    GaussianWigner,
    PolyGaussian,
    ThermalSpec,
    eval_gaussian,
    eval_polygauss,
    make_coherent,
    make_squeezed_vacuum,
    make_thermal,
    make_vacuum,
    mgf_moment2,
    purity_check,
)
from .transforms import (
    BeamsplitterSpec,
    WeakBogoliubov,
    ab_from_uv,
    beamsplitter_map,
    bogoliubov_pair,
    twin_beam_map,
)

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "BeamsplitterSpec",
    "ConfigError",
    "DetectorKernel",
    "DimensionError",
    "DomainError",
    "FieldVector",
    "GaussianWigner",
    "HeraldImpossibleError",
    "HeraldedState",
    "InvalidPairError",
    "Kernel",
    "ModeBasis",
    "OracleError",
    "PolyGaussian",
    "ReducedWignerGrid",
    "ReductionError",
    "ThermalSpec",
    "WeakBogoliubov",
    "ab_from_uv",
    "add_photon",
    "addition_generating_function",
    "adjoint",
    "beamsplitter_map",
    "bogoliubov_pair",
    "diamond_kk",
    "diamond_kv",
    "diamond_vv",
    "eval_gaussian",
    "eval_polygauss",
    "gram_schmidt",
    "identity",
    "make_coherent",
    "make_squeezed_vacuum",
    "make_thermal",
    "make_vacuum",
    "marginalize",
    "mgf_moment2",
    "mode_overlap",
    "negativity_metrics",
    "normalize_add",
    "normalize_subtract",
    "outer",
    "projector_moments",
    "purity_check",
    "reduce_heralded",
    "sample_grid",
    "subtract_photon",
    "subtraction_generating_function",
    "trace",
    "transformed_detector_mode",
    "twin_beam_map",
]
