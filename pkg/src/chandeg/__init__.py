"""Degradability analysis for finite-dimensional quantum channels."""

from .linalg import Tolerance, DEFAULT_TOL
from .channel import (
    Channel,
    ChoiMatrix,
    DensityMatrix,
    KrausSet,
    SuperOp,
    apply,
    apply_choi,
    complement,
    compose,
)
from .zoo import (
    ClonerParams,
    DepolParams,
    TDParams,
    cloner_params,
    depolarizing,
    known_antidegradable_range,
    td_channel,
    td_complement_qubit,
)

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "Channel",
    "ChoiMatrix",
    "DensityMatrix",
    "KrausSet",
    "SuperOp",
    "apply",
    "apply_choi",
    "complement",
    "compose",
    "ClonerParams",
    "DepolParams",
    "TDParams",
    "cloner_params",
    "depolarizing",
    "known_antidegradable_range",
    "td_channel",
    "td_complement_qubit",
]

__version__ = "0.1.0"
