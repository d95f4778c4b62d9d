"""Component-wise MOEA/D on the DASCMOP problems, with hypervolume/IGD
metrics and search trajectory networks."""

from ._core import (
    ConfigError,
    InputError,
    IoError,
    StnGraph,
    build_stn,
    config_toml,
    evaluate,
    hypervolume,
    igd,
    merge_stn,
    population_variance,
    problem_info,
    reference_front,
    run,
    run_experiment,
    simplex_lattice,
    sobol_weights,
    uniform_design,
    variant_names,
)

__all__ = [
    "ConfigError",
    "InputError",
    "IoError",
    "StnGraph",
    "build_stn",
    "config_toml",
    "evaluate",
    "hypervolume",
    "igd",
    "merge_stn",
    "population_variance",
    "problem_info",
    "reference_front",
    "run",
    "run_experiment",
    "simplex_lattice",
    "sobol_weights",
    "uniform_design",
    "variant_names",
]
