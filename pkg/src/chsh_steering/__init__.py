"""CHSH-like EPR-steering functional for two-qubit states."""

from .correlations import (
    CorrelationTable,
    chsh_value,
    correlation_table,
    joint_probability,
    steering_value,
)
from .joint import MotherPovm, eta_max, global_eta_opt, mother_povm
from .lhs import assemblage_from_state, cross_validate, lhs_membership
from .measurements import DichotomicObservable, MeasurementScenario, MubPair, effects, random_scenario, smear
from .optimizer import OptConfig, OptResult, optimize, sweep_pure, sweep_werner
from .quantum import TSIRELSON, TwoQubitState, phi_plus, pure_schmidt_state, singlet, werner_state

__version__ = "0.1.0"
