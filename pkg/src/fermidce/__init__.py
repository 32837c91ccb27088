"""Work and particle statistics of a fermionic field with a moving wall.

A massless Dirac field confined to a one-dimensional box radiates
particle pairs out of the vacuum when one wall moves; this package
computes the full statistics of the created particles and of the work
done by the drive, exactly at a finite mode cutoff.

Typical use::

    from fermidce import ModelConfig, run_point

    report = run_point(ModelConfig(speed_ratio=0.1, delta_l=0.693, cutoff=64))
    print(report.mean_n, report.mean_w)

The Gaussian pipeline (quadratic form -> Bogoliubov diagonalization ->
pairing matrix -> determinant-formula characteristic functions) scales to
thousands of modes; a brute-force Fock-space oracle validates every output
at small cutoff.
"""

from .bogoliubov import (
    BogoliubovSolution,
    EvolvedTransform,
    canonical_residuals,
    compose,
    diagonalize,
    evolve,
)
from .fock import (
    FockOperators,
    build_fock_operators,
    oracle_char,
    oracle_distribution,
    oracle_moment,
    oracle_pair_amplitudes,
    oracle_state,
)
from .harness import (
    ENERGY_UNIT,
    FitResult,
    MomentReport,
    SpeedTable,
    SweepTable,
    fit_scaling,
    run_point,
    sweep_cutoff,
    sweep_speed,
)
from .model import (
    ModelConfig,
    QuadraticForm,
    bag_condition_residual,
    build_quadratic_form,
    coupling_element,
    coupling_quadrature,
    mode_frequency,
    mode_function,
)
from .statistics import (
    PairingState,
    char_grid,
    char_number,
    char_work,
    m2_number_analytic,
    m2_work_analytic,
    mean_number_analytic,
    mean_work_analytic,
    moments_fd,
    number_distribution,
    pairing_matrix,
    perturbative_pair_amplitude,
    work_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ModelConfig",
    "QuadraticForm",
    "mode_frequency",
    "mode_function",
    "coupling_element",
    "coupling_quadrature",
    "build_quadratic_form",
    "bag_condition_residual",
    "BogoliubovSolution",
    "EvolvedTransform",
    "diagonalize",
    "evolve",
    "compose",
    "canonical_residuals",
    "PairingState",
    "pairing_matrix",
    "char_work",
    "char_number",
    "char_grid",
    "mean_number_analytic",
    "mean_work_analytic",
    "m2_work_analytic",
    "m2_number_analytic",
    "moments_fd",
    "number_distribution",
    "work_distribution",
    "perturbative_pair_amplitude",
    "FockOperators",
    "build_fock_operators",
    "oracle_state",
    "oracle_char",
    "oracle_moment",
    "oracle_distribution",
    "oracle_pair_amplitudes",
    "MomentReport",
    "SweepTable",
    "SpeedTable",
    "FitResult",
    "run_point",
    "sweep_cutoff",
    "fit_scaling",
    "sweep_speed",
    "ENERGY_UNIT",
]
