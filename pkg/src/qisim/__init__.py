"""Statevector simulation of interference-amplified search, plus a Jones
calculus model of the polarization test interferometer."""

__version__ = "0.1.0"

from .errors import (
    ArityMismatch,
    CapExceeded,
    DimacsError,
    NotNormalized,
    NullInterference,
    ParamNotFound,
    ShapeMismatch,
)
from .rng import RngStream
from .statevec import (
    Histogram,
    StateVector,
    apply_amplitude_noise,
    apply_phase_oracle,
    hadamard_uniform,
    interfere,
    measure,
    renormalize,
)
from .oracle import (
    CnfFormula,
    Oracle,
    brute_force_solutions,
    parse_dimacs,
    serialize_dimacs,
)
from .engine import (
    EnumerationReport,
    SearchConfig,
    SearchOutcome,
    Termination,
    enumerate_solutions,
    interference_step,
    run_search,
)
from .optics import (
    Attenuator,
    ElementRef,
    ExperimentResult,
    InterferometerSpec,
    JonesVector,
    Polarizer,
    Rotator,
    apply_element,
    run_interferometer,
    sweep_angles,
)
