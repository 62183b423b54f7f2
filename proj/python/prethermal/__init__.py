"""Driven optical lattice: Floquet ensembles, TDSE and pendulum stability."""

from ._prethermal import (
    ConvergenceError,
    DimensionMismatch,
    Drive,
    TruncationError,
    __version__,
    bloch_bands,
    evaluate_cell,
    evolve,
    fit_power_law,
    mathieu_monodromy,
    mathieu_parameters,
    microseconds_to_recoil,
    monodromy,
    period_propagator,
    pge_map,
    stability_map,
)

__all__ = [name for name in dir() if not name.startswith("_")]
