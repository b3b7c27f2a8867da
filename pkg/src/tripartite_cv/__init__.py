"""Gaussian-state simulation of tripartite continuous-variable entanglement
and controlled dense coding."""

__version__ = "0.1.0"

from .gaussian import (  # noqa: E402,F401
    GaussianState,
    QuadratureForm,
    beamsplitter,
    displace,
    loss,
    phase_shift,
    symplectic_eigenvalues,
    two_mode_squeeze,
    vacuum_state,
    variance_of,
)
from .circuit import (  # noqa: E402,F401
    CircuitSpec,
    SetupParams,
    build_dense_coding_setup,
    parse_netlist,
    render_netlist,
    run_circuit,
)
from .detection import NoiseBudget, enl_correct  # noqa: E402,F401
from .analysis import (  # noqa: E402,F401
    EXPERIMENT,
    ExperimentParams,
    capacity_thresholds,
    channel_capacities,
    closed_form_variances,
    optimal_gain,
    variance_vs_gain,
)
